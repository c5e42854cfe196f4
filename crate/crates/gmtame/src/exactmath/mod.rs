//! Exact rational scalars and dense rational linear algebra.
//!
//! Everything here is exact: rationals are arbitrary-precision reduced
//! fractions, eigenvalues are found by exact root extraction, and the Smith
//! normal form works over the Euclidean ring Q[theta].

pub mod eigen;
pub mod fraction;
pub mod jordan;
pub mod qmatrix;
pub mod roots;
pub mod smith;
pub mod upoly;

pub use eigen::{generalized_eigenspaces, rational_eigenvalues, EigenDecomposition};
pub use fraction::{ff_inverse, ff_solve, RatFn};
pub use jordan::nilpotent_jordan;
pub use qmatrix::QMatrix;
pub use roots::rational_roots;
pub use smith::{poly_mat_identity, poly_mat_mul, poly_mat_zero, smith_normal_form, PolyMat, SmithData};
pub use upoly::UPoly;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

/// Exact rational scalar. Always stored reduced with positive denominator.
pub type Rat = BigRational;

pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical "p/q" (or "p" for integers) rendering.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "p/q" or "p". Whitespace is not accepted.
pub fn rat_parse(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
        Some((p, q)) => {
            let p = p.parse::<BigInt>().ok()?;
            let q = q.parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
    }
}

/// Fractional part in [0,1).
pub fn rat_mod1(r: &Rat) -> Rat {
    let f = r.floor();
    r - f
}

pub fn rat_is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Integer value of a rational known to be an integer.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    if !rat_is_integer(r) {
        return None;
    }
    let n = r.numer();
    let small: Option<i64> = n.try_into().ok();
    small
}

pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_roundtrip() {
        for s in ["0", "-3", "1/2", "-7/3", "22/7"] {
            let r = rat_parse(s).unwrap();
            assert_eq!(rat_str(&r), s);
        }
        assert!(rat_parse("1/0").is_none());
        assert_eq!(rat_str(&rat_parse("2/4").unwrap()), "1/2");
    }

    #[test]
    fn mod1_window() {
        assert_eq!(rat_mod1(&rat(3, 2)), rat(1, 2));
        assert_eq!(rat_mod1(&rat(-1, 2)), rat(1, 2));
        assert_eq!(rat_mod1(&rat_i(2)), rat_i(0));
    }
}
