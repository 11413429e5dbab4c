use super::{dot, Flat, FlatKey};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rat};

/// Affine coordinates `(z, w)` adapted to a flat: the flat is `{w = 0}`.
///
/// `w_j` is the j-th row of the flat's RREF equations; `z_k` is the standard
/// coordinate `x_{free[k]}`. Hence `x = origin + Σ z_k d_k + Σ w_j e_{pivots[j]}`
/// where `d_k` is the kernel vector with a 1 in slot `free[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub key: FlatKey,
    pub dim: usize,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    /// `codim × (N+1)` augmented rows of the w functionals.
    pub rows: Matrix,
    /// `N × dim X_α`; column k is `d_k`.
    pub directions: Matrix,
    pub origin: Vec<Rat>,
}

pub fn adapted_frame(flat: &Flat) -> Frame {
    let n = flat.subspace.point.len();
    let free: Vec<usize> = (0..n).filter(|c| !flat.pivots.contains(c)).collect();
    Frame {
        key: flat.key.clone(),
        dim: n,
        pivots: flat.pivots.clone(),
        free,
        rows: flat.equations.clone(),
        directions: flat.subspace.dirs.clone(),
        origin: flat.subspace.point.clone(),
    }
}

impl Frame {
    pub fn z_count(&self) -> usize {
        self.free.len()
    }

    pub fn w_count(&self) -> usize {
        self.pivots.len()
    }

    pub fn direction(&self, k: usize) -> Vec<Rat> {
        self.directions.column(k)
    }

    /// Linear part of `w_j`.
    pub fn w_linear(&self, j: usize) -> Vec<Rat> {
        self.rows.row(j)[..self.dim].to_vec()
    }

    pub fn w_offset(&self, j: usize) -> Rat {
        self.rows[(j, self.dim)].clone()
    }

    /// `dz_k`, the standard covector of slot `free[k]`.
    pub fn dz(&self, k: usize) -> Vec<Rat> {
        unit(self.dim, self.free[k])
    }

    /// Covectors whose wedge is the top form `ω_α` along the flat.
    pub fn omega(&self) -> Vec<Vec<Rat>> {
        (0..self.z_count()).map(|k| self.dz(k)).collect()
    }

    /// Covectors whose wedge is the conormal form `ω̂_α`.
    pub fn omega_hat(&self) -> Vec<Vec<Rat>> {
        (0..self.w_count()).map(|j| self.w_linear(j)).collect()
    }

    /// Frame coordinates `(z, w)` of a point.
    pub fn coordinates(&self, x: &[Rat]) -> Vec<Rat> {
        let mut c: Vec<Rat> = self.free.iter().map(|&f| x[f].clone()).collect();
        for j in 0..self.w_count() {
            c.push(dot(&self.w_linear(j), x) + self.w_offset(j));
        }
        c
    }

    /// Frame components `(z, w)` of a direction vector.
    pub fn linear_coordinates(&self, v: &[Rat]) -> Vec<Rat> {
        let mut c: Vec<Rat> = self.free.iter().map(|&f| v[f].clone()).collect();
        for j in 0..self.w_count() {
            c.push(dot(&self.w_linear(j), v));
        }
        c
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut e = vec![Rat::zero(); n];
    e[i] = Rat::one();
    e
}

/// `det(numerator rows) / det(denominator rows)`: the scalar by which one
/// top form is a multiple of another.
pub fn top_form_ratio(numerator: &[Vec<Rat>], denominator: &[Vec<Rat>]) -> Result<Rat> {
    let n = denominator.len();
    if numerator.len() != n || numerator.iter().chain(denominator).any(|r| r.len() != n) {
        return Err(Error::Shape(format!("top forms need {n} covectors of length {n}")));
    }
    let den = Matrix::from_rows(denominator.to_vec(), n)?.determinant()?;
    if den.is_zero() {
        return Err(Error::DegenerateForm);
    }
    Ok(Matrix::from_rows(numerator.to_vec(), n)?.determinant()? / den)
}

/// Interior product `ι_v(η_0 ∧ … ∧ η_{c-1}) = Σ_j (−1)^j η_j(v) · (η without η_j)`,
/// returned as the nonzero terms.
pub fn contract(v: &[Rat], covectors: &[Vec<Rat>]) -> Vec<(Rat, Vec<Vec<Rat>>)> {
    let mut out = Vec::new();
    for (j, eta) in covectors.iter().enumerate() {
        let c = dot(eta, v);
        if c.is_zero() {
            continue;
        }
        let c = if j % 2 == 0 { c } else { -c };
        let rest = covectors.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, e)| e.clone()).collect();
        out.push((c, rest));
    }
    out
}
