use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{int_valuation, p_power, parse_rat, rat_string, valuation, Mat2, PadicContext, TreeError};

/// Homothety class of a Z_p-lattice in Q_p², kept as `[[p^a, b], [0, 1]]`.
///
/// `b` is reduced modulo `p^a Z_(p)` to `m / p^k` with `0 ≤ m < p^(a+k)` and `k` as
/// small as possible.
#[derive(Debug, Clone, Eq)]
pub struct LatticeClass {
    p: u64,
    a: i64,
    b: BigRational,
}

impl PartialEq for LatticeClass {
    fn eq(&self, other: &Self) -> bool {
        let keys = self.p == other.p && self.a == other.a && self.b == other.b;
        debug_assert_eq!(keys, self.p == other.p && lattice_distance(self, other) == 0);
        keys
    }
}

impl Hash for LatticeClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl PartialOrd for LatticeClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticeClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.p, self.a, &self.b).cmp(&(other.p, other.a, &other.b))
    }
}

// r mod p^e Z_(p) for a p-adic unit-or-integral r, as an integer in [0, p^e)
fn residue(r: &BigRational, p: u64, e: u32) -> BigInt {
    let modulus = BigInt::from(p).pow(e);
    let inv = r.denom().extended_gcd(&modulus).x;
    (r.numer() * inv).mod_floor(&modulus)
}

impl LatticeClass {
    /// Class of the lattice spanned by the columns of `m`.
    pub fn from_basis(m: &Mat2, p: u64) -> Result<Self, TreeError> {
        if m.det().is_zero() {
            return Err(TreeError::Singular);
        }
        let [m11, m12, m21, m22] = m.0.clone();
        let v1 = valuation(&m21, p);
        let v2 = valuation(&m22, p);
        // pivot on the bottom entry of least valuation, preferring the second column
        let swap = match (v1, v2) {
            (Some(x), Some(y)) => x < y,
            (Some(_), None) => true,
            _ => false,
        };
        let (m11, m12, m21, m22) = if swap { (m12, m11, m22, m21) } else { (m11, m12, m21, m22) };
        let t = &m21 / &m22;
        let x = (&m11 - &t * &m12) / &m22;
        let y = &m12 / &m22;
        let a = valuation(&x, p).ok_or(TreeError::Singular)?;
        Ok(LatticeClass { p, a, b: Self::reduce(&y, a, p) })
    }

    fn reduce(y: &BigRational, a: i64, p: u64) -> BigRational {
        let Some(vy) = valuation(y, p) else { return BigRational::zero() };
        if vy >= a {
            return BigRational::zero();
        }
        let k = -vy;
        let unit = y * p_power(p, k);
        let m = residue(&unit, p, (a + k) as u32);
        BigRational::from_integer(m) * p_power(p, -k)
    }

    /// The standard lattice Z_p².
    pub fn standard(p: u64) -> Self {
        LatticeClass { p, a: 0, b: BigRational::zero() }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64, p: u64) -> Result<Self, TreeError> {
        Self::from_basis(&Mat2::from_ints(a, b, c, d), p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The exponent `a` and offset `b` of the canonical form.
    pub fn key(&self) -> (i64, &BigRational) {
        (self.a, &self.b)
    }

    pub fn rep(&self) -> Mat2 {
        Mat2::new(p_power(self.p, self.a), self.b.clone(), BigRational::zero(), BigRational::one())
    }

    /// Class of `g·M`.
    pub fn act(&self, g: &Mat2) -> Result<Self, TreeError> {
        if g.det().is_zero() {
            return Err(TreeError::Singular);
        }
        Self::from_basis(&(g * &self.rep()), self.p)
    }

    /// The `p + 1` classes at distance one, sublattices of index `p` of the representative.
    pub fn neighbors(&self, ctx: &PadicContext) -> Result<Vec<LatticeClass>, TreeError> {
        if ctx.f != 1 {
            return Err(TreeError::NeedsPrimeField(ctx.f));
        }
        let p = ctx.p as i64;
        let rep = self.rep();
        let mut out = Vec::with_capacity(ctx.p as usize + 1);
        for k in 0..p {
            out.push(Self::from_basis(&(&rep * &Mat2::from_ints(p, k, 0, 1)), self.p)?);
        }
        out.push(Self::from_basis(&(&rep * &Mat2::from_ints(1, 0, 0, p)), self.p)?);
        Ok(out)
    }

    /// Four rational strings of the canonical representative.
    pub fn to_strings(&self) -> [String; 4] {
        self.rep().0.map(|x| rat_string(&x))
    }

    pub fn from_strings(s: &[&str; 4], p: u64) -> Result<Self, TreeError> {
        let e: Vec<BigRational> = s.iter().map(|x| parse_rat(x)).collect::<Result<_, _>>()?;
        Self::from_basis(&Mat2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()), p)
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_strings();
        write!(f, "[{}, {}, {}, {}]", s[0], s[1], s[2], s[3])
    }
}

/// `v(det B) − 2·min v(B_ij)` for `B = rep(a)⁻¹ rep(b)`.
pub fn lattice_distance(a: &LatticeClass, b: &LatticeClass) -> u64 {
    let p = a.p;
    let inv = a.rep().inverse().expect("canonical representatives are invertible");
    distance_of_matrix(&(&inv * &b.rep()), p)
}

/// Distance from the standard class to the class spanned by the columns of `m`.
pub fn distance_of_matrix(m: &Mat2, p: u64) -> u64 {
    let det = m.det();
    let vdet = int_valuation(det.numer(), p) - int_valuation(det.denom(), p);
    let vmin = m.0.iter().filter_map(|x| valuation(x, p)).min().unwrap_or(0);
    let d = vdet - 2 * vmin;
    debug_assert!(d >= 0);
    d.unsigned_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        let c = LatticeClass::from_ints(2, 0, 0, 2, 2).unwrap();
        assert_eq!(c, LatticeClass::standard(2));
        let d = LatticeClass::from_ints(0, 1, 1, 0, 2).unwrap();
        assert_eq!(d, LatticeClass::standard(2));
        let e = LatticeClass::from_ints(1, 0, 0, 4, 2).unwrap();
        assert_eq!(e.key(), (-2, &BigRational::zero()));
    }

    #[test]
    fn b_is_reduced() {
        // [[8, 11], [0, 1]] and [[8, 3], [0, 1]] span the same lattice
        let a = LatticeClass::from_ints(8, 11, 0, 1, 2).unwrap();
        let b = LatticeClass::from_ints(8, 3, 0, 1, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.key(), (3, &crate::rat(3)));
    }

    #[test]
    fn distances() {
        let o = LatticeClass::standard(3);
        assert_eq!(lattice_distance(&o, &LatticeClass::from_ints(1, 0, 0, 9, 3).unwrap()), 2);
        assert_eq!(lattice_distance(&o, &LatticeClass::from_ints(3, 0, 0, 3, 3).unwrap()), 0);
        assert_eq!(lattice_distance(&o, &LatticeClass::from_ints(3, 1, 0, 1, 3).unwrap()), 1);
    }

    #[test]
    fn strings_round_trip() {
        let c = LatticeClass::from_ints(4, 1, 0, 1, 2).unwrap();
        let s = c.to_strings();
        assert_eq!(s, ["4/1", "1/1", "0/1", "1/1"].map(String::from));
        let refs = [s[0].as_str(), s[1].as_str(), s[2].as_str(), s[3].as_str()];
        assert_eq!(LatticeClass::from_strings(&refs, 2).unwrap(), c);
    }
}
