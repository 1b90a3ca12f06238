use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use bruhat_tits::TreePatch;
use graph_core::{Alphabet, DirectedGraph, EdgeId, VertexId};

use crate::ShiftError;

/// Visual measure of the boundary seen from the base of a tree patch: the mass of an
/// oriented edge is the measure of the ends reached through it.
#[derive(Debug, Clone)]
pub struct ShadowMeasure {
    pub graph: DirectedGraph,
    pub base: VertexId,
    pub q: u64,
    pub depth: Vec<usize>,
    mass: Vec<BigRational>,
}

fn q_power(q: u64, k: i64) -> BigRational {
    let b = BigInt::from(q).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(1.into(), b)
    }
}

/// Masses for a patch whose positive edges point away from its base.
pub fn shadow_measure(patch: &TreePatch) -> ShadowMeasure {
    let g = &patch.graph;
    let q = patch.q;
    let total = BigRational::from_integer((q + 1).into()) * q_power(q, -2);
    let mut mass = vec![BigRational::zero(); g.edge_count()];
    // away edges first, then each toward edge as the complement of its involute
    for w in g.positive_edges() {
        mass[w] = q_power(q, -(patch.depth[g.rng(w)] as i64) - 1);
    }
    for w in g.positive_edges() {
        mass[g.invol(w)] = &total - &mass[w];
    }
    ShadowMeasure { graph: g.clone(), base: patch.base, q, depth: patch.depth.clone(), mass }
}

impl ShadowMeasure {
    fn touches_frontier(&self, w: EdgeId) -> bool {
        self.graph.is_frontier(self.graph.src(w)) || self.graph.is_frontier(self.graph.rng(w))
    }

    pub fn mass(&self, w: EdgeId) -> Result<&BigRational, ShiftError> {
        if self.touches_frontier(w) {
            return Err(ShiftError::Truncated(w));
        }
        Ok(&self.mass[w])
    }

    /// Mass of the whole boundary: the sum over the edges leaving the base.
    pub fn total_mass(&self) -> BigRational {
        self.graph.out_edges(self.base).into_iter().map(|w| self.mass[w].clone()).sum()
    }

    /// Edges ending at an interior vertex whose mass differs from the sum over their
    /// admissible continuations.
    pub fn additivity_defects(&self) -> Vec<EdgeId> {
        (0..self.graph.edge_count())
            .filter(|&w| !self.graph.is_frontier(self.graph.rng(w)))
            .filter(|&w| {
                let s: BigRational = self.graph.successors(w, Alphabet::Walks).into_iter().map(|x| self.mass[x].clone()).sum();
                s != self.mass[w]
            })
            .collect()
    }
}

/// Mass of the two-sided cylinder of a lifted word: forward shadow of the last edge times
/// the shadow of the reversed first edge. The marked position does not enter the value.
pub fn cylinder_measure(m: &ShadowMeasure, word: &[EdgeId], marking: usize) -> Result<BigRational, ShiftError> {
    if word.is_empty() || marking >= word.len() || !m.graph.is_admissible_word(word, Alphabet::Walks) {
        return Err(ShiftError::NotAdmissible(word.to_vec()));
    }
    if let Some(&w) = word.iter().find(|&&w| m.touches_frontier(w)) {
        return Err(ShiftError::Truncated(w));
    }
    let last = m.mass(word[word.len() - 1])?;
    let first = m.mass(m.graph.invol(word[0]))?;
    Ok(last * first)
}
