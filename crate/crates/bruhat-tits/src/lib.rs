//! Vertices of the Bruhat–Tits tree of PGL(2, Q_p) as classes of rank-2 lattices.
//!
//! Everything is exact: entries are `BigRational` and the only analytic input is the
//! p-adic valuation of a rational number.

#![forbid(unsafe_code)]

mod halfline;
mod lattice;
mod mat;
mod patch;

pub use halfline::{crossroad, geodesic, half_line_of_point, P1Point};
pub use lattice::{lattice_distance, LatticeClass};
pub use mat::Mat2;
pub use patch::{build_tree_patch, TreePatch};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("residue degree must be at least 1")]
    BadResidueDegree,
    #[error("precision must be at least 1")]
    BadPrecision,
    #[error("matrix is singular")]
    Singular,
    #[error("points coincide: {0}")]
    CoincidentPoints(String),
    #[error("the zero vector is not a point of P1")]
    ZeroPoint,
    #[error("radius {radius} exceeds the precision budget {precision}")]
    PrecisionBudget { radius: usize, precision: u32 },
    #[error("explicit lattice arithmetic needs residue degree 1, got {0}")]
    NeedsPrimeField(u32),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Prime, residue degree and the depth budget for tree constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicContext {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    pub precision: u32,
}

impl PadicContext {
    pub fn new(p: u64, f: u32, precision: u32) -> Result<Self, TreeError> {
        if !is_prime(p) {
            return Err(TreeError::NotPrime(p));
        }
        if f == 0 {
            return Err(TreeError::BadResidueDegree);
        }
        if precision == 0 {
            return Err(TreeError::BadPrecision);
        }
        Ok(PadicContext { p, f, q: p.pow(f), precision })
    }

    /// `Q_p` itself with a default budget of 64.
    pub fn prime(p: u64) -> Result<Self, TreeError> {
        Self::new(p, 1, 64)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation; `None` for zero.
pub fn valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
}

/// `p^k` for any integer `k`.
pub fn p_power(p: u64, k: i64) -> BigRational {
    let base = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Always `num/den`, also for integers.
pub fn rat_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rat(s: &str) -> Result<BigRational, TreeError> {
    let s = s.trim();
    let err = || TreeError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigRational::new(12.into(), 5.into()), 2), Some(2));
        assert_eq!(valuation(&BigRational::new(3.into(), 8.into()), 2), Some(-3));
        assert_eq!(valuation(&rat(0), 2), None);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rat_string(&rat(3)), "3/1");
        assert_eq!(parse_rat("-6/4").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn context_rejects_composites() {
        assert_eq!(PadicContext::new(4, 1, 8), Err(TreeError::NotPrime(4)));
        assert_eq!(PadicContext::new(3, 2, 8).unwrap().q, 9);
    }
}
