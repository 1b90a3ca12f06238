use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use graph_core::{edge_matrices, Alphabet, DirectedGraph, EdgeId, EdgeMatrix};

use crate::ShiftError;

/// One-sided subshift of finite type on the oriented edges of a graph.
#[derive(Debug, Clone)]
pub struct ShiftSpace {
    pub graph: DirectedGraph,
    pub mode: Alphabet,
    pub q: u64,
    letters: Vec<EdgeId>,
    letter_of: Vec<Option<usize>>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

/// Walk subshift: all oriented edges, no backtracking.
pub fn build_sft(g: &DirectedGraph, q: u64) -> Result<ShiftSpace, ShiftError> {
    build_sft_with(g, q, Alphabet::Walks)
}

pub fn build_sft_with(g: &DirectedGraph, q: u64, mode: Alphabet) -> Result<ShiftSpace, ShiftError> {
    if q < 2 {
        return Err(ShiftError::BadQ(q));
    }
    let sinks = g.sinks();
    if !sinks.is_empty() {
        return Err(ShiftError::Sinks(sinks));
    }
    let letters = g.letters(mode);
    let mut letter_of = vec![None; g.edge_count()];
    for (i, &w) in letters.iter().enumerate() {
        letter_of[w] = Some(i);
    }
    let mut out_of = vec![Vec::new(); g.vertex_count()];
    for (i, &w) in letters.iter().enumerate() {
        out_of[g.src(w)].push(i);
    }
    let succ: Vec<Vec<usize>> = letters
        .iter()
        .map(|&w| out_of[g.rng(w)].iter().copied().filter(|&j| g.admissible(w, letters[j], mode)).collect())
        .collect();
    if let Some(i) = succ.iter().position(Vec::is_empty) {
        return Err(ShiftError::DeadEnd(letters[i]));
    }
    let mut pred = vec![Vec::new(); letters.len()];
    for (i, s) in succ.iter().enumerate() {
        for &j in s {
            pred[j].push(i);
        }
    }
    Ok(ShiftSpace { graph: g.clone(), mode, q, letters, letter_of, succ, pred })
}

impl ShiftSpace {
    pub fn alphabet_size(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[EdgeId] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> EdgeId {
        self.letters[i]
    }

    pub fn letter_of(&self, w: EdgeId) -> Option<usize> {
        self.letter_of.get(w).copied().flatten()
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    pub fn predecessors(&self, i: usize) -> &[usize] {
        &self.pred[i]
    }

    pub fn admissible(&self, i: usize, j: usize) -> bool {
        self.succ[i].contains(&j)
    }

    /// Conformal weight `1/#successors`; equals `1/q` on `(q+1)`-regular graphs.
    pub fn kappa(&self, i: usize) -> BigRational {
        BigRational::new(BigUint::one().into(), BigUint::from(self.succ[i].len()).into())
    }

    /// The transition matrix `A` (or `A₊` on the path alphabet).
    pub fn transition(&self) -> EdgeMatrix {
        let (a_plus, a) = edge_matrices(&self.graph);
        match self.mode {
            Alphabet::Walks => a,
            Alphabet::Paths => a_plus,
        }
    }

    /// θ_0..θ_nmax: admissible words of length n+1, as entry sums of Aⁿ.
    pub fn theta_counts(&self, nmax: usize) -> Vec<BigUint> {
        let a = self.transition();
        (0..=nmax).map(|n| a.power_sum(n as u32)).collect()
    }

    /// Letter indices of a word of edge ids, if admissible.
    pub fn encode(&self, word: &[EdgeId]) -> Result<Vec<usize>, ShiftError> {
        let idx: Option<Vec<usize>> = word.iter().map(|&w| self.letter_of(w)).collect();
        match idx {
            Some(v) if v.windows(2).all(|p| self.admissible(p[0], p[1])) => Ok(v),
            _ => Err(ShiftError::NotAdmissible(word.to_vec())),
        }
    }

    pub fn decode(&self, word: &[usize]) -> Vec<EdgeId> {
        word.iter().map(|&i| self.letters[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_loop() {
        let g = DirectedGraph::from_positive(1, &[(0, 0)]).unwrap();
        let s = build_sft(&g, 2).unwrap();
        assert_eq!(s.alphabet_size(), 2);
        assert!(s.admissible(0, 0));
        assert!(!s.admissible(0, 1));
        let p = build_sft_with(&g, 2, Alphabet::Paths).unwrap();
        assert!(p.theta_counts(6).iter().all(|t| *t == BigUint::one()));
    }

    #[test]
    fn sinks_and_dead_ends_are_refused() {
        let g = DirectedGraph::from_positive(2, &[(0, 0), (0, 1)]).unwrap();
        assert_eq!(build_sft(&g, 2).unwrap_err(), ShiftError::Sinks(vec![1]));
        let h = DirectedGraph::from_positive(2, &[(0, 0), (1, 0)]).unwrap();
        assert!(matches!(build_sft(&h, 2), Err(ShiftError::DeadEnd(_))));
    }
}
