use num_bigint::BigUint;
use num_traits::{One, Zero};

use graph_core::{Alphabet, DirectedGraph, EdgeId, VertexId};
use shift_dynamics::{FiltrationSpace, SparseMatrix, Q};

use crate::OperatorError;

/// Operators on the levels `P_0 … P_N` of a filtration.
///
/// `s_w` is the push `(s_w f)(x) = χ_w(x_0)·f(Tx)` from `P_{n−1}` to `P_n`. It equals
/// `κ(w)` times the Gram adjoint of `Σ_{w′} A(w,w′) T_w Π_{w′}`, the operator evaluating
/// `f(w x)`.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub filtration: FiltrationSpace,
    pub truncation: usize,
    transition: Vec<Vec<u8>>,
    kappa: Vec<Q>,
    // index n−1 holds the maps between levels n−1 and n
    pull: Vec<Vec<SparseMatrix>>,
    push: Vec<Vec<SparseMatrix>>,
}

pub fn build_operators(f: &FiltrationSpace) -> Result<OperatorSet, OperatorError> {
    let s = &f.shift;
    let a: Vec<Vec<u8>> = (0..s.alphabet_size()).map(|i| (0..s.alphabet_size()).map(|j| u8::from(s.admissible(i, j))).collect()).collect();
    build_operators_with(f, &a)
}

/// Operators built from a given transition matrix in place of the subshift's own.
pub fn build_operators_with(f: &FiltrationSpace, transition: &[Vec<u8>]) -> Result<OperatorSet, OperatorError> {
    let n_top = f.truncation;
    if n_top < 2 {
        return Err(OperatorError::Truncation { min: 2, got: n_top });
    }
    let k = f.shift.alphabet_size();
    if transition.len() != k || transition.iter().any(|r| r.len() != k) {
        return Err(OperatorError::Shape { got: transition.len(), want: k });
    }
    let kappa: Vec<Q> = (0..k).map(|i| f.shift.kappa(i)).collect();
    let mut pull = Vec::with_capacity(n_top);
    let mut push = Vec::with_capacity(n_top);
    for n in 1..=n_top {
        let mut ps = Vec::with_capacity(k);
        let mut ss = Vec::with_capacity(k);
        for w in 0..k {
            let mut t = SparseMatrix::zeros(f.dim(n - 1), f.dim(n));
            for (row, v) in f.words(n - 1).iter().enumerate() {
                if transition[w][v[0]] == 0 {
                    continue;
                }
                let wv: Vec<usize> = std::iter::once(w).chain(v.iter().copied()).collect();
                if let Some(col) = f.position(n, &wv) {
                    t.set(row, col, Q::one());
                }
            }
            ss.push(adjoint(f, n, n - 1, &t).scale(&kappa[w]));
            ps.push(t);
        }
        pull.push(ps);
        push.push(ss);
    }
    Ok(OperatorSet { filtration: f.clone(), truncation: n_top, transition: transition.to_vec(), kappa, pull, push })
}

/// Gram adjoint of `m: P_from → P_to`, a map `P_to → P_from`.
pub(crate) fn adjoint(f: &FiltrationSpace, from: usize, to: usize, m: &SparseMatrix) -> SparseMatrix {
    let (wf, wt) = (f.weights(from), f.weights(to));
    let mt = m.transpose();
    let mut out = SparseMatrix::zeros(mt.rows(), mt.cols());
    for r in 0..mt.rows() {
        for (&c, x) in mt.row(r) {
            out.set(r, c, x * &wt[c] / &wf[r]);
        }
    }
    out
}

/// Where an identity fails: the basis cylinder whose image differs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub level: usize,
    pub letter: Option<EdgeId>,
    pub vertex: Option<VertexId>,
    pub cylinder: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub holds: bool,
    /// Number of matrix identities compared.
    pub instances: usize,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CkReport {
    pub truncation: usize,
    pub checks: Vec<RelationCheck>,
    /// Pairs `(w, ρ)` with `ρ` at the top level whose push needs level `N+1`; these are
    /// left out of every check.
    pub clipped: usize,
}

impl CkReport {
    pub fn get(&self, name: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

struct Tally {
    name: &'static str,
    instances: usize,
    witness: Option<Witness>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, instances: 0, witness: None }
    }

    fn compare(&mut self, f: &FiltrationSpace, lhs: &SparseMatrix, rhs: &SparseMatrix, level: usize, letter: Option<EdgeId>, vertex: Option<VertexId>) {
        self.instances += 1;
        if self.witness.is_some() {
            return;
        }
        if let Some((_, col)) = lhs.first_difference(rhs) {
            let cylinder = f.shift.decode(&f.words(level)[col.min(f.dim(level).saturating_sub(1))]);
            self.witness = Some(Witness { level, letter, vertex, cylinder });
        }
    }

    fn finish(self) -> RelationCheck {
        RelationCheck { name: self.name, holds: self.witness.is_none(), instances: self.instances, witness: self.witness }
    }
}

impl OperatorSet {
    pub fn alphabet_size(&self) -> usize {
        self.kappa.len()
    }

    pub fn kappa(&self, w: usize) -> &Q {
        &self.kappa[w]
    }

    /// `P_v` on `P_n`: multiplication by the indicator of `src(x_0) = v`.
    pub fn vertex_projection(&self, n: usize, v: VertexId) -> SparseMatrix {
        let f = &self.filtration;
        let g = &f.shift.graph;
        let d: Vec<Q> = f.words(n).iter().map(|u| if g.src(f.shift.letter(u[0])) == v { Q::one() } else { Q::zero() }).collect();
        SparseMatrix::diagonal(&d)
    }

    /// `Π_w` on `P_n`: multiplication by the indicator of `x_0 = w`.
    pub fn first_edge_projection(&self, n: usize, w: usize) -> SparseMatrix {
        let d: Vec<Q> = self.filtration.words(n).iter().map(|u| if u[0] == w { Q::one() } else { Q::zero() }).collect();
        SparseMatrix::diagonal(&d)
    }

    /// `Σ_{w′} A(w,w′) T_w Π_{w′}` from `P_n` to `P_{n−1}`.
    pub fn t(&self, n: usize, w: usize) -> &SparseMatrix {
        &self.pull[n - 1][w]
    }

    /// `s_w` from `P_{n−1}` to `P_n`.
    pub fn s(&self, n: usize, w: usize) -> &SparseMatrix {
        &self.push[n - 1][w]
    }

    /// `s_w†` from `P_n` to `P_{n−1}`.
    pub fn s_adj(&self, n: usize, w: usize) -> SparseMatrix {
        adjoint(&self.filtration, n - 1, n, self.s(n, w))
    }

    /// `κ(w)⁻¹ s_w s_w†` on `P_n`.
    pub fn range_projection(&self, n: usize, w: usize) -> SparseMatrix {
        (self.s(n, w) * &self.s_adj(n, w)).scale(&self.kappa[w].recip())
    }

    /// `κ(w)⁻¹ s_w† s_w` on `P_{n−1}`.
    pub fn source_projection(&self, n: usize, w: usize) -> SparseMatrix {
        (&self.s_adj(n, w) * self.s(n, w)).scale(&self.kappa[w].recip())
    }

    /// Top-level pushes that would leave the window.
    pub fn clipped(&self) -> usize {
        let f = &self.filtration;
        (0..self.alphabet_size())
            .map(|w| f.words(self.truncation).iter().filter(|u| self.transition[w][u[0]] == 1).count())
            .sum()
    }

    /// Checks every relation on each level pair of the window.
    pub fn check_relations(&self) -> CkReport {
        let f = &self.filtration;
        let g = &f.shift.graph;
        let k = self.alphabet_size();
        let top = self.truncation;
        let edge = |w: usize| Some(f.shift.letter(w));

        let mut proj = Tally::new("vertex-projections");
        for n in [top - 1, top] {
            let ps: Vec<SparseMatrix> = (0..g.vertex_count()).map(|v| self.vertex_projection(n, v)).collect();
            let mut sum = SparseMatrix::zeros(f.dim(n), f.dim(n));
            for (v, p) in ps.iter().enumerate() {
                sum = sum.add(p);
                for (u, r) in ps.iter().enumerate() {
                    let expect = if u == v { p.clone() } else { SparseMatrix::zeros(f.dim(n), f.dim(n)) };
                    proj.compare(f, &(p * r), &expect, n, None, Some(v));
                }
            }
            proj.compare(f, &sum, &SparseMatrix::identity(f.dim(n)), n, None, None);
        }

        let mut range = Tally::new("range-relation");
        let mut source = Tally::new("source-relation");
        let mut matrix = Tally::new("edge-matrix-relation");
        let mut delta = Tally::new("delta-commutation");
        let mut shift = Tally::new("shift-commutation");
        for n in 1..=top {
            let sources: Vec<SparseMatrix> = (0..k).map(|w| self.source_projection(n, w)).collect();
            for (w, sp) in sources.iter().enumerate() {
                let r = g.rng(f.shift.letter(w));
                range.compare(f, sp, &self.vertex_projection(n - 1, r), n - 1, edge(w), Some(r));
            }
            let ranges: Vec<SparseMatrix> = (0..k).map(|w| self.range_projection(n, w)).collect();
            for v in 0..g.vertex_count() {
                let mut sum = SparseMatrix::zeros(f.dim(n), f.dim(n));
                for (w, rp) in ranges.iter().enumerate() {
                    if g.src(f.shift.letter(w)) == v {
                        sum = sum.add(rp);
                    }
                }
                source.compare(f, &self.vertex_projection(n, v), &sum, n, None, Some(v));
            }
            if n >= 2 {
                let lower: Vec<SparseMatrix> = (0..k).map(|w| self.range_projection(n - 1, w)).collect();
                for (w, sp) in sources.iter().enumerate() {
                    let mut sum = SparseMatrix::zeros(f.dim(n - 1), f.dim(n - 1));
                    for (x, rp) in lower.iter().enumerate() {
                        if self.transition[w][x] == 1 {
                            sum = sum.add(rp);
                        }
                    }
                    matrix.compare(f, sp, &sum, n - 1, edge(w), None);
                }
                let (d_lo, d_hi) = (f.delta_matrix(n - 2), f.delta_matrix(n - 1));
                let mut total_lo = SparseMatrix::zeros(f.dim(n - 1), f.dim(n - 2));
                let mut total_hi = SparseMatrix::zeros(f.dim(n), f.dim(n - 1));
                for w in 0..k {
                    delta.compare(f, &(self.s(n, w) * &d_lo), &(&d_hi * self.s(n - 1, w)), n - 2, edge(w), None);
                    total_lo = total_lo.add(self.s(n - 1, w));
                    total_hi = total_hi.add(self.s(n, w));
                }
                shift.compare(f, &(&total_hi * &d_lo), &(&d_hi * &total_lo), n - 2, None, None);
            }
        }
        CkReport {
            truncation: top,
            checks: vec![proj.finish(), range.finish(), source.finish(), matrix.finish(), delta.finish(), shift.finish()],
            clipped: self.clipped(),
        }
    }
}

/// Number of positive paths of each length `0..=bound` ending at every sink; the
/// dimension of the Toeplitz summand at a sink is the total over all lengths.
pub fn toeplitz_defect(g: &DirectedGraph, bound: usize) -> Vec<(VertexId, Vec<BigUint>)> {
    let letters = g.letters(Alphabet::Paths);
    g.sinks()
        .into_iter()
        .map(|v| {
            // ending[w] = paths of the current length ending with w at v's side
            let mut ending: Vec<BigUint> = letters.iter().map(|&w| if g.rng(w) == v { BigUint::one() } else { BigUint::zero() }).collect();
            let mut counts = vec![BigUint::one()];
            for _ in 1..=bound {
                counts.push(ending.iter().sum());
                ending = letters
                    .iter()
                    .map(|&w| letters.iter().zip(&ending).filter(|(&x, _)| g.admissible(w, x, Alphabet::Paths)).map(|(_, c)| c.clone()).sum())
                    .collect();
            }
            (v, counts)
        })
        .collect()
}
