//! Weyl-algebra realization of quiver D-modules.

pub mod exterior;
mod gr;
mod koszul;
mod model;
pub mod weyl;

pub use gr::{gr_model, theta_spectrum, GrModel, GrReport, GrWitness, ThetaReport, ThetaSlice};
pub use koszul::{
    check_d_squared, complex_dual_quiver, dual_complex, koszul_differential, same_differentials, q_alpha, q_functionals, tangent_data, Generator, GeneratorLabel,
    KoszulComplex, PolyMatrix, QMap, SquareReport, SquareWitness, TangentData,
};
pub use model::{axpy, build_sections_model, check_weyl_relations, monomials, Gen, GradedModel, ModelElt, SVec, WeylReport, WeylWitness};
pub use weyl::{Mono, WeylPoly};
