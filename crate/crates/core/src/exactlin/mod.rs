//! Exact rational linear algebra.

mod matrix;
mod rat;

pub use matrix::{quotient_basis, Matrix, QuotientMap, Rref};
pub use rat::Rat;

/// Basis (columns) of `span(a) ∩ span(b)`; both must have the same row count.
pub fn intersect_spans(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.rows(), b.rows());
    let a = a.column_space();
    let b = b.column_space();
    if a.cols() == 0 || b.cols() == 0 {
        return Matrix::zeros(a.rows(), 0);
    }
    let k = a.hstack(&-&b).kernel_basis();
    let coeffs = k.block(0, 0, a.cols(), k.cols());
    (&a * &coeffs).column_space()
}

/// Whether `v` lies in the column span of `span`.
pub fn in_span(span: &Matrix, v: &[Rat]) -> bool {
    let base = span.rank();
    span.hstack(&Matrix::from_columns(&[v.to_vec()], span.rows())).rank() == base
}

/// Basis (columns) of `{x : op_k x ∈ span(target) for every k}`.
pub fn common_preimage(ops: &[Matrix], target: &Matrix, dim: usize) -> Matrix {
    if ops.is_empty() {
        return Matrix::identity(dim);
    }
    let target = target.column_space();
    let t = target.cols();
    // Unknowns: x (dim) followed by one coefficient block per operator.
    let width = dim + t * ops.len();
    let mut system = Matrix::zeros(0, width);
    for (k, op) in ops.iter().enumerate() {
        assert_eq!(op.cols(), dim);
        let mut rows = Matrix::zeros(op.rows(), width);
        rows.set_block(0, 0, op);
        rows.set_block(0, dim + k * t, &-&target);
        system = system.vstack(&rows);
    }
    let k = system.kernel_basis();
    k.block(0, 0, dim, k.cols()).column_space()
}
