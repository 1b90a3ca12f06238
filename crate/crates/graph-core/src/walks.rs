use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Alphabet, DirectedGraph, EdgeId, GraphError, Walk, WalkKind};

pub const DEFAULT_WALK_CAP: usize = 1_000_000;

/// 0/1 transition matrix indexed by a list of edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMatrix {
    pub index: Vec<EdgeId>,
    pub entries: Vec<Vec<u8>>,
}

impl EdgeMatrix {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// Sum of the entries of `self^k`, exactly.
    pub fn power_sum(&self, k: u32) -> BigUint {
        let n = self.dim();
        // row vector of ones times A^k
        let mut row: Vec<BigUint> = vec![BigUint::one(); n];
        for _ in 0..k {
            let mut next = vec![BigUint::zero(); n];
            for (i, ri) in row.iter().enumerate() {
                if ri.is_zero() {
                    continue;
                }
                for (j, nj) in next.iter_mut().enumerate() {
                    if self.entries[i][j] == 1 {
                        *nj += ri;
                    }
                }
            }
            row = next;
        }
        row.into_iter().sum()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.entries.iter().map(|r| r.iter().map(|&x| x as usize).sum()).collect()
    }

    /// Position of an edge id in the index.
    pub fn position(&self, w: EdgeId) -> Option<usize> {
        self.index.iter().position(|&x| x == w)
    }
}

fn matrix_for(g: &DirectedGraph, mode: Alphabet) -> EdgeMatrix {
    let index = g.letters(mode);
    let entries = index
        .iter()
        .map(|&a| index.iter().map(|&b| u8::from(g.admissible(a, b, mode))).collect())
        .collect();
    EdgeMatrix { index, entries }
}

/// `(A₊, A)`: the path matrix on positive edges and the walk matrix on all oriented edges.
pub fn edge_matrices(g: &DirectedGraph) -> (EdgeMatrix, EdgeMatrix) {
    (matrix_for(g, Alphabet::Paths), matrix_for(g, Alphabet::Walks))
}

/// All admissible words of length `n`, lexicographic by edge id.
pub fn enumerate_walks(g: &DirectedGraph, n: usize, mode: Alphabet, cap: usize) -> Result<Vec<Walk>, GraphError> {
    let letters = g.letters(mode);
    let kind = match mode {
        Alphabet::Walks => WalkKind::Finite,
        Alphabet::Paths => WalkKind::PositivePath,
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut stack: Vec<Vec<EdgeId>> = letters.iter().rev().map(|&w| vec![w]).collect();
    while let Some(word) = stack.pop() {
        if word.len() == n {
            if out.len() == cap {
                return Err(GraphError::SizeCap { cap });
            }
            out.push(Walk { edges: word, kind: kind.clone() });
            continue;
        }
        let last = word[word.len() - 1];
        for &x in letters.iter().rev() {
            if g.admissible(last, x, mode) {
                let mut next = word.clone();
                next.push(x);
                stack.push(next);
            }
        }
    }
    Ok(out)
}

impl DirectedGraph {
    /// Whether a walk passes through a truncation-frontier vertex.
    pub fn touches_frontier(&self, walk: &[EdgeId]) -> bool {
        walk.iter().any(|&w| self.is_frontier(self.src(w)) || self.is_frontier(self.rng(w)))
    }
}
