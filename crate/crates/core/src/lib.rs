//! Exact and numeric machinery for G2 and Spin(7) geometry.
//!
//! * [`exterior`]: exact exterior algebra on `R^n` (wedge, Hodge star,
//!   interior product, pullback, infinitesimal rotations, stabilizers).
//! * [`octonion`]: the Cayley algebra built from the G2 3-form.
//! * [`structures`]: canonical G2 and Spin(7) forms, Lee and torsion
//!   operators, scalar-curvature arithmetic.
//! * [`groups`]: finite subgroups of SO(8) generated by octonion right
//!   multiplications, closure, freeness on `S^7`, Spin(7) membership.
//! * [`conegeo`]: floating-point checks of the cone geometry (finite
//!   difference exterior derivative, cone splitting, nearly Kähler `S^6`,
//!   Lee closedness, dilation invariance).
//! * [`cli`] and [`verify`]: command-line front end and acceptance runner.

pub mod cli;
pub mod conegeo;
pub mod error;
pub mod exterior;
pub mod groups;
pub mod json;
pub mod linalg;
pub mod octonion;
pub mod structures;
pub mod verify;

pub use error::{Error, Result};
pub use exterior::{Form, MultiIndex, OrthMap, Vector};
pub use octonion::{CayleyTable, Octonion};

pub type Rational = num_rational::BigRational;

/// Integer as an exact rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
