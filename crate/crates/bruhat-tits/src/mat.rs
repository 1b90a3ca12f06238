use std::fmt;
use std::ops::Mul;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{rat, rat_string, TreeError};

/// 2×2 rational matrix, row-major `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2(pub [BigRational; 4]);

impl Mat2 {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2([rat(a), rat(b), rat(c), rat(d)])
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn diag(a: BigRational, d: BigRational) -> Self {
        Mat2([a, BigRational::zero(), BigRational::zero(), d])
    }

    pub fn det(&self) -> BigRational {
        let [a, b, c, d] = &self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> BigRational {
        &self.0[0] + &self.0[3]
    }

    pub fn inverse(&self) -> Result<Mat2, TreeError> {
        let det = self.det();
        if det.is_zero() {
            return Err(TreeError::Singular);
        }
        let [a, b, c, d] = &self.0;
        Ok(Mat2([d / &det, -b / &det, -c / &det, a / &det]))
    }

    pub fn scale(&self, s: &BigRational) -> Mat2 {
        Mat2(self.0.clone().map(|x| x * s))
    }

    pub fn is_identity(&self) -> bool {
        self.0[0].is_one() && self.0[1].is_zero() && self.0[2].is_zero() && self.0[3].is_one()
    }

    /// Whether this is a nonzero scalar matrix, the kernel of the action on the tree.
    pub fn is_scalar(&self) -> bool {
        self.0[1].is_zero() && self.0[2].is_zero() && self.0[0] == self.0[3] && !self.0[0].is_zero()
    }

    pub fn pow(&self, n: u32) -> Mat2 {
        (0..n).fold(Mat2::identity(), |acc, _| &acc * self)
    }

    /// Column `j` as a pair.
    pub fn column(&self, j: usize) -> (BigRational, BigRational) {
        (self.0[j].clone(), self.0[2 + j].clone())
    }

    pub fn from_columns(c1: (BigRational, BigRational), c2: (BigRational, BigRational)) -> Mat2 {
        Mat2([c1.0, c2.0, c1.1, c2.1])
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(rat_string).collect();
        write!(f, "[[{}, {}], [{}, {}]]", s[0], s[1], s[2], s[3])
    }
}
