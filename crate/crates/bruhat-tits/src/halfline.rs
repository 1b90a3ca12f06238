use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use crate::{lattice_distance, p_power, parse_rat, rat, rat_string, valuation, LatticeClass, Mat2, PadicContext, TreeError};

/// A rational point `[a:b]` of the projective line.
#[derive(Debug, Clone)]
pub struct P1Point {
    pub a: BigRational,
    pub b: BigRational,
}

impl P1Point {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self, TreeError> {
        if a.is_zero() && b.is_zero() {
            return Err(TreeError::ZeroPoint);
        }
        Ok(P1Point { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, TreeError> {
        Self::new(rat(a), rat(b))
    }

    /// `[z:1]`.
    pub fn affine(z: BigRational) -> Self {
        P1Point { a: z, b: rat(1) }
    }

    pub fn infinity() -> Self {
        P1Point { a: rat(1), b: rat(0) }
    }

    pub fn same_point(&self, o: &P1Point) -> bool {
        (&self.a * &o.b - &self.b * &o.a).is_zero()
    }

    /// Scaled so that the smaller coordinate valuation is zero.
    fn primitive(&self, p: u64) -> (BigRational, BigRational) {
        let v = [valuation(&self.a, p), valuation(&self.b, p)].into_iter().flatten().min().unwrap_or(0);
        let s = p_power(p, -v);
        (&self.a * &s, &self.b * &s)
    }

    /// Number of vertices shared by the half-lines toward `self` and `o`, minus one.
    pub fn agreement(&self, o: &P1Point, p: u64) -> Option<i64> {
        let (a, b) = self.primitive(p);
        let (c, d) = o.primitive(p);
        valuation(&(a * d - b * c), p)
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", rat_string(&self.a), rat_string(&self.b))
    }
}

impl FromStr for P1Point {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, TreeError> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| TreeError::Parse(s.to_string()))?;
        let (a, b) = inner.split_once(':').ok_or_else(|| TreeError::Parse(s.to_string()))?;
        P1Point::new(parse_rat(a)?, parse_rat(b)?)
    }
}

/// Vertices `n = 0..=depth` of the half-line from the standard class toward `z`:
/// the classes of `{v₁, pⁿ v₂}` with `v₁` the primitive vector of `z`.
pub fn half_line_of_point(z: &P1Point, depth: usize, ctx: &PadicContext) -> Result<Vec<LatticeClass>, TreeError> {
    if ctx.f != 1 {
        return Err(TreeError::NeedsPrimeField(ctx.f));
    }
    let p = ctx.p;
    let (a, b) = z.primitive(p);
    let v2 = if valuation(&a, p) == Some(0) { (rat(0), rat(1)) } else { (rat(1), rat(0)) };
    (0..=depth as i64)
        .map(|n| {
            let s = p_power(p, n);
            LatticeClass::from_basis(&Mat2::from_columns((a.clone(), b.clone()), (&v2.0 * &s, &v2.1 * &s)), p)
        })
        .collect()
}

/// The vertex where the three half-lines toward distinct points branch apart.
pub fn crossroad(z0: &P1Point, z1: &P1Point, z_inf: &P1Point, ctx: &PadicContext) -> Result<LatticeClass, TreeError> {
    let pts = [z0, z1, z_inf];
    let mut best: Option<(i64, usize)> = None;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let l = pts[i]
            .agreement(pts[j], ctx.p)
            .ok_or_else(|| TreeError::CoincidentPoints(format!("{} and {}", pts[i], pts[j])))?;
        if best.is_none_or(|(m, _)| l > m) {
            best = Some((l, i));
        }
    }
    let (depth, i) = best.unwrap_or((0, 0));
    if depth > ctx.precision as i64 {
        return Err(TreeError::PrecisionBudget { radius: depth as usize, precision: ctx.precision });
    }
    let line = half_line_of_point(pts[i], depth as usize, ctx)?;
    Ok(line[depth as usize].clone())
}

/// Vertices of the geodesic from `a` to `b`, both included.
pub fn geodesic(a: &LatticeClass, b: &LatticeClass, ctx: &PadicContext) -> Result<Vec<LatticeClass>, TreeError> {
    let mut path = vec![a.clone()];
    let mut d = lattice_distance(a, b);
    while d > 0 {
        let here = &path[path.len() - 1];
        let next = here
            .neighbors(ctx)?
            .into_iter()
            .find(|n| lattice_distance(n, b) + 1 == d)
            .expect("some neighbour is one step closer in a tree");
        path.push(next);
        d -= 1;
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_line_is_diagonal() {
        let ctx = PadicContext::prime(3).unwrap();
        let line = half_line_of_point(&P1Point::infinity(), 4, &ctx).unwrap();
        for (n, v) in line.iter().enumerate() {
            assert_eq!(*v, LatticeClass::from_ints(1, 0, 0, 3i64.pow(n as u32), 3).unwrap());
        }
    }

    #[test]
    fn parse_point() {
        let z: P1Point = "[1/2:3]".parse().unwrap();
        assert_eq!(z.to_string(), "[1/2:3/1]");
        assert!("[0:0]".parse::<P1Point>().is_err());
    }
}
