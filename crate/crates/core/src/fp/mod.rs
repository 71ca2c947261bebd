//! Arithmetic in F_p, F_{p^2} and F_p[X].

pub mod ext;
pub mod field;
pub mod poly;

pub use ext::{build_quadratic_extension, construct_root, FieldPoint, Fp2Elem, QuadraticExtension, RootKind};
pub use field::{fp_inverse, FpElem, PrimeField};
pub use poly::{
    finite_polylog, lagrange_interpolate, poly_compose_trunc, poly_derivative, poly_mul_trunc,
    poly_shift, series_inverse_trunc, EvalPoint, FpPoly,
};
