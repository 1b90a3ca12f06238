//! Exact sparse linear algebra over the rationals.

use std::collections::BTreeMap;
use std::ops::Mul;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;
pub type SparseRow = BTreeMap<usize, Q>;

/// Row-major sparse matrix; absent entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![SparseRow::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Q::one(); n])
    }

    pub fn diagonal(d: &[Q]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseRow {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r].get(&c).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Q) {
        let next = self.get(r, c) + v;
        self.set(r, c, next);
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (&j, x) in r {
                t.data[j].insert(i, x.clone());
            }
        }
        t
    }

    pub fn scale(&self, k: &Q) -> Self {
        let mut m = self.clone();
        if k.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        for r in &mut m.data {
            for x in r.values_mut() {
                *x *= k;
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut m = self.clone();
        for (i, r) in other.data.iter().enumerate() {
            for (&j, x) in r {
                m.add_to(i, j, x);
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        self.data.iter().map(|r| r.iter().map(|(&j, a)| a * &x[j]).sum()).collect()
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    /// First entry where the two matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Some((self.rows.min(other.rows), self.cols.min(other.cols)));
        }
        for i in 0..self.rows {
            if self.data[i] != other.data[i] {
                let cols = self.data[i].keys().chain(other.data[i].keys());
                let j = cols.copied().filter(|&j| self.get(i, j) != other.get(i, j)).min().unwrap_or(0);
                return Some((i, j));
            }
        }
        None
    }

    pub fn rank(&self) -> usize {
        rank(self.data.iter().cloned())
    }
}

impl Mul for &SparseMatrix {
    type Output = SparseMatrix;

    fn mul(self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = SparseMatrix::zeros(self.rows, rhs.cols);
        for (i, r) in self.data.iter().enumerate() {
            let mut acc = SparseRow::new();
            for (&k, a) in r {
                for (&j, b) in &rhs.data[k] {
                    *acc.entry(j).or_insert_with(Q::zero) += a * b;
                }
            }
            acc.retain(|_, x| !x.is_zero());
            out.data[i] = acc;
        }
        out
    }
}

fn reduce(row: &mut SparseRow, pivots: &BTreeMap<usize, SparseRow>) {
    // entries left of the current position are already zero
    let mut from = 0;
    loop {
        let Some((c, v)) = row.range(from..).find(|(c, _)| pivots.contains_key(c)).map(|(c, v)| (*c, v.clone())) else {
            return;
        };
        for (&j, p) in &pivots[&c] {
            let e = row.entry(j).or_insert_with(Q::zero);
            *e -= &v * p;
            if e.is_zero() {
                row.remove(&j);
            }
        }
        from = c + 1;
    }
}

/// Echelon pivots keyed by leading column, each row normalised to a leading 1.
fn echelon<I: IntoIterator<Item = SparseRow>>(rows: I) -> BTreeMap<usize, SparseRow> {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut r in rows {
        r.retain(|_, x| !x.is_zero());
        loop {
            let Some((&c, v)) = r.first_key_value() else { break };
            if let Some(p) = pivots.get(&c) {
                let v = v.clone();
                for (&j, x) in p {
                    let e = r.entry(j).or_insert_with(Q::zero);
                    *e -= &v * x;
                    if e.is_zero() {
                        r.remove(&j);
                    }
                }
            } else {
                let inv = v.recip();
                for x in r.values_mut() {
                    *x *= &inv;
                }
                pivots.insert(c, r);
                break;
            }
        }
    }
    pivots
}

pub fn rank<I: IntoIterator<Item = SparseRow>>(rows: I) -> usize {
    echelon(rows).len()
}

pub fn rank_of_vectors(vs: &[Vec<Q>]) -> usize {
    rank(vs.iter().map(|v| to_sparse(v)))
}

pub fn to_sparse(v: &[Q]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Basis of `{x : M x = 0}`, one vector per free column.
pub fn null_space(m: &SparseMatrix) -> Vec<Vec<Q>> {
    let mut pivots = echelon(m.data.iter().cloned());
    // back substitution to reduced form, right to left
    let cols: Vec<usize> = pivots.keys().rev().copied().collect();
    for c in cols {
        let mut row = pivots.remove(&c).expect("pivot present");
        let lead = row.remove(&c).expect("leading entry");
        reduce(&mut row, &pivots);
        row.insert(c, lead);
        pivots.insert(c, row);
    }
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains_key(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Q::zero(); m.cols];
            x[f] = Q::one();
            for (&c, row) in &pivots {
                if let Some(v) = row.get(&f) {
                    x[c] = -v.clone();
                }
            }
            x
        })
        .collect()
}

pub fn weighted_dot(x: &[Q], y: &[Q], w: &[Q]) -> Q {
    x.iter().zip(y).zip(w).filter(|((a, b), _)| !a.is_zero() && !b.is_zero()).map(|((a, b), c)| a * b * c).sum()
}

pub fn gram(vs: &[Vec<Q>], w: &[Q]) -> Vec<Vec<Q>> {
    vs.iter().map(|x| vs.iter().map(|y| weighted_dot(x, y, w)).collect()).collect()
}

/// Solves a square nonsingular system; `None` when singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in c..=n {
                    let d = &f * &m[c][k];
                    m[r][k] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Orthogonal projection of `x` onto the span of independent `basis` vectors under the
/// diagonal weight `w`, by the normal equations.
pub fn project(x: &[Q], basis: &[Vec<Q>], w: &[Q]) -> Option<Vec<Q>> {
    if basis.is_empty() {
        return Some(vec![Q::zero(); x.len()]);
    }
    let g = gram(basis, w);
    let rhs: Vec<Q> = basis.iter().map(|b| weighted_dot(b, x, w)).collect();
    let c = solve(&g, &rhs)?;
    let mut out = vec![Q::zero(); x.len()];
    for (ci, b) in c.iter().zip(basis) {
        if ci.is_zero() {
            continue;
        }
        for (o, bi) in out.iter_mut().zip(b) {
            if !bi.is_zero() {
                *o += ci * bi;
            }
        }
    }
    Some(out)
}
