//! Exact polynomial algebra, derivations, differential operators and quaternions.

pub mod field;
pub mod operator;
pub mod poly;
pub mod quaternion;
pub mod sphere;

pub use field::{apply_derivation, lie_bracket, PolyVectorField};
pub use operator::{operator_apply, DiffOperator};
pub use poly::{int, rat, Monomial, Poly, Rational, Variables};
pub use quaternion::{quat_exp, quat_mul, Quaternion};
pub use sphere::reduce_mod_sphere;
