use num_traits::Zero;

use graph_core::EdgeId;
use schottky::DualGraphData;
use shift_dynamics::linalg::{rank_of_vectors, weighted_dot};
use shift_dynamics::{FiltrationSpace, SparseMatrix, Q};

use crate::OperatorError;

/// Source of the cylinders `χ_{i,N}` for one basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    /// A closed walk `w` of length `ℓ`: the cylinder of `wᴺ` followed by `w_1`.
    Loop(Vec<EdgeId>),
    /// A path read from its start: the cylinder of its first `Nℓ+1` edges.
    Path(Vec<EdgeId>),
}

impl Generator {
    pub fn len(&self) -> usize {
        match self {
            Generator::Loop(w) | Generator::Path(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn word(&self, ell: usize, n: usize) -> Option<Vec<EdgeId>> {
        match self {
            Generator::Loop(w) => Some(w.iter().copied().cycle().take(n * ell).chain(std::iter::once(w[0])).collect()),
            Generator::Path(p) => (p.len() > n * ell).then(|| p[..=n * ell].to_vec()),
        }
    }
}

/// Images `φ_N(η_i) = Π_{Gr_{Nℓ}} χ_{i,N}` of a cohomology basis, where `χ_{i,N}` is the
/// cylinder of `w_iᴺ` followed by the first letter of `w_i`.
#[derive(Debug, Clone)]
pub struct CohomologyEmbedding {
    /// Loop words; empty entries stand for path generators.
    pub words: Vec<Vec<EdgeId>>,
    pub generators: Vec<Generator>,
    pub loop_len: usize,
    pub n_max: usize,
    /// Level `n_max·ℓ` where the span `𝒱` is assembled.
    pub top: usize,
    /// `chi[N−1][i]` at level `Nℓ`.
    pub chi: Vec<Vec<Vec<Q>>>,
    pub phi: Vec<Vec<Vec<Q>>>,
    /// Orthogonal basis of `𝒱` at the top level.
    pub basis: Vec<Vec<Q>>,
    pub gram_rank: usize,
    /// `Tr(π(𝒱) Π_{Gr_{Nℓ}})` for `N = 1..=n_max`.
    pub traces: Vec<Q>,
    /// `dim(Gr_{Nℓ} ∩ 𝒱)` for `N = 1..=n_max`.
    pub intersections: Vec<usize>,
}

impl CohomologyEmbedding {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `π(𝒱)` as a matrix on the top level.
    pub fn projection_matrix(&self, f: &FiltrationSpace) -> SparseMatrix {
        let w = f.weights(self.top);
        let d = f.dim(self.top);
        let mut m = SparseMatrix::zeros(d, d);
        for u in &self.basis {
            let norm = weighted_dot(u, u, w);
            for (r, ur) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (c, uc) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    m.add_to(r, c, &(ur * uc * &w[c] / &norm));
                }
            }
        }
        m
    }
}

pub fn embed_dual_graph(f: &FiltrationSpace, d: &DualGraphData, n_max: usize) -> Result<CohomologyEmbedding, OperatorError> {
    embed_cohomology(f, &d.generator_words, n_max)
}

pub fn embed_cohomology(f: &FiltrationSpace, words: &[Vec<EdgeId>], n_max: usize) -> Result<CohomologyEmbedding, OperatorError> {
    let Some(first) = words.first() else {
        return Err(OperatorError::NoLoops);
    };
    let ell = first.len();
    if ell == 0 || words.iter().any(|w| w.len() != ell) {
        return Err(OperatorError::UnequalLengths(words.iter().map(Vec::len).collect()));
    }
    let gens: Vec<Generator> = words.iter().cloned().map(Generator::Loop).collect();
    embed_generators(f, &gens, ell, n_max)
}

/// Embedding for a mixed family of loops (all of length `ell`) and paths.
pub fn embed_generators(f: &FiltrationSpace, gens: &[Generator], ell: usize, n_max: usize) -> Result<CohomologyEmbedding, OperatorError> {
    if gens.is_empty() {
        return Err(OperatorError::NoLoops);
    }
    let loop_lengths: Vec<usize> = gens.iter().map(|g| if let Generator::Loop(w) = g { w.len() } else { ell }).collect();
    if ell == 0 || loop_lengths.iter().any(|&l| l != ell) {
        return Err(OperatorError::UnequalLengths(loop_lengths));
    }
    let top = n_max * ell;
    if n_max == 0 || top > f.truncation {
        return Err(OperatorError::Truncation { min: top.max(ell), got: f.truncation });
    }
    let mut chi = Vec::with_capacity(n_max);
    let mut phi = Vec::with_capacity(n_max);
    let mut lifted = Vec::new();
    for n in 1..=n_max {
        let level = n * ell;
        let mut cs = Vec::with_capacity(gens.len());
        let mut ps = Vec::with_capacity(gens.len());
        for (i, gen) in gens.iter().enumerate() {
            let word = gen.word(ell, n).ok_or_else(|| OperatorError::PathTooShort { index: i, level, have: gen.len() })?;
            let c = f.cylinder_of_edges(level, &word).map_err(|_| OperatorError::NotAdmissible(word.clone()))?;
            let p = f.project_gr(level, &c);
            if p.iter().all(Zero::is_zero) {
                return Err(OperatorError::ZeroImage { loop_index: i, n });
            }
            lifted.push(f.lift_to(level, top, &p));
            cs.push(c);
            ps.push(p);
        }
        chi.push(cs);
        phi.push(ps);
    }
    let w_top = f.weights(top);
    let gram: Vec<Vec<Q>> = lifted.iter().map(|x| lifted.iter().map(|y| weighted_dot(x, y, w_top)).collect()).collect();
    let gram_rank = rank_of_vectors(&gram);
    let basis = gram_schmidt(&lifted, w_top);

    let mut traces = Vec::with_capacity(n_max);
    let mut intersections = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let level = n * ell;
        let w = f.weights(level);
        let trace: Q = basis
            .iter()
            .map(|u| {
                let v = f.project_gr(level, &f.expectation(top, level, u));
                weighted_dot(&v, &v, w) / weighted_dot(u, u, w_top)
            })
            .sum();
        traces.push(trace);
        let gr: Vec<Vec<Q>> = f.gr_basis(level).iter().map(|b| f.lift_to(level, top, b)).collect();
        let sum_dim = rank_of_vectors(&gr.iter().chain(&basis).cloned().collect::<Vec<_>>());
        intersections.push(gr.len() + basis.len() - sum_dim);
    }
    let words = gens.iter().map(|g| if let Generator::Loop(w) = g { w.clone() } else { Vec::new() }).collect();
    Ok(CohomologyEmbedding { words, generators: gens.to_vec(), loop_len: ell, n_max, top, chi, phi, basis, gram_rank, traces, intersections })
}

fn gram_schmidt(vs: &[Vec<Q>], w: &[Q]) -> Vec<Vec<Q>> {
    let mut out: Vec<(Vec<Q>, Q)> = Vec::new();
    for v in vs {
        let mut u = v.clone();
        for (b, nb) in &out {
            let c = weighted_dot(v, b, w) / nb;
            if !c.is_zero() {
                for (x, y) in u.iter_mut().zip(b) {
                    *x -= &c * y;
                }
            }
        }
        let nu = weighted_dot(&u, &u, w);
        if !nu.is_zero() {
            out.push((u, nu));
        }
    }
    out.into_iter().map(|(u, _)| u).collect()
}
