//! Exact rational linear algebra and polyhedral cones.
//!
//! Nothing in here rounds. Every cone carries both a generator and a facet
//! description, kept in a canonical form so that two cones describing the same
//! set compare equal with `==`.

mod affine;
mod cone;
mod linalg;
mod snf;

pub use affine::{cross_section, AffineSubspace};
pub use cone::{Cone, MAX_FACE_AMBIENT_DIM, MAX_FACE_GENERATORS};
pub use linalg::{det, nullspace, rank, rref, solve_in_span, QMatrix, QVector};
pub use snf::{smith_normal_form, SmithForm};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a base: {0}")]
    NotABase(String),
    #[error("cone is not pointed")]
    NotPointed,
    #[error("face enumeration limit exceeded: {0}")]
    TooLarge(String),
    #[error("invalid affine subspace: {0}")]
    InvalidAffine(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat, GeomError> {
    let err = || GeomError::ParseRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(Rat::from_integer).map_err(|_| err()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(parse_rat("6/4").unwrap(), ratio(3, 2));
        assert_eq!(format_rat(&ratio(3, 2)), "3/2");
        assert_eq!(format_rat(&ratio(-4, 2)), "-2");
        assert_eq!(parse_rat("-7").unwrap(), rat(-7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
