//! Base change along a finite extension with ramification index `e` and residue degree
//! `f`: edges split into chains of `e` edges of length `1/e`, and the residue field grows
//! from `q` to `q^f` elements.

#![forbid(unsafe_code)]

use num_rational::Ratio;

use bruhat_tits::{build_tree_patch, PadicContext, TreeError, TreePatch};
use graph_core::{subdivide_edges, Alphabet, DirectedGraph, EdgeId, EdgeMatrix, GraphError};
use shift_dynamics::{build_sft_with, filtration_data, FiltrationSpace, ShiftError, SparseMatrix, Q};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("e and f must be at least 1, got e={e}, f={f}")]
    BadParams { e: usize, f: u32 },
    #[error("edge matrix is not square: row {row} has {len} entries for dimension {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("edge matrix entry ({0},{1}) is not 0 or 1")]
    NotBinary(usize, usize),
    #[error("word {0:?} is not admissible")]
    NotAdmissible(Vec<EdgeId>),
    #[error("j must be at least 1")]
    BadLevel,
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionParams {
    pub e: usize,
    pub f: u32,
}

impl ExtensionParams {
    pub fn new(e: usize, f: u32) -> Result<Self, ExtensionError> {
        if e == 0 || f == 0 {
            return Err(ExtensionError::BadParams { e, f });
        }
        Ok(ExtensionParams { e, f })
    }

    /// Residue cardinality of the extension.
    pub fn q_l(&self, q: u64) -> u64 {
        q.pow(self.f)
    }

    pub fn degree(&self) -> usize {
        self.e * self.f as usize
    }
}

/// A graph over the extension together with its map from the base graph.
#[derive(Debug, Clone)]
pub struct ExtendedGraph {
    pub graph: DirectedGraph,
    pub params: ExtensionParams,
    /// Chain of every oriented edge of the base graph.
    pub edge_image: Vec<Vec<EdgeId>>,
    /// K-normalised length of each oriented edge.
    pub edge_length: Vec<Ratio<u64>>,
}

impl ExtendedGraph {
    /// Sum of K-normalised edge lengths.
    pub fn length(&self, word: &[EdgeId]) -> Ratio<u64> {
        word.iter().map(|&w| self.edge_length[w]).sum()
    }

    /// Whether an edge is the first link of some chain.
    pub fn is_chain_start(&self, w: EdgeId) -> bool {
        self.edge_image.iter().any(|c| c.first() == Some(&w))
    }
}

/// Replaces each positive edge by a chain of `e` edges of length `1/e`, original-major.
pub fn extend_graph(g: &DirectedGraph, params: ExtensionParams) -> Result<ExtendedGraph, ExtensionError> {
    let parts: Vec<(EdgeId, usize)> = g.positive_edges().into_iter().map(|w| (w, params.e)).collect();
    let s = subdivide_edges(g, &parts)?;
    let edge_length = vec![Ratio::new(1, params.e as u64); s.graph.edge_count()];
    Ok(ExtendedGraph { graph: s.graph, params, edge_image: s.edge_image, edge_length })
}

/// Ball of the tree over the extension: valence `q^f + 1`, edges of K-length `1/e`.
pub fn extension_patch(p: u64, params: ExtensionParams, radius: usize) -> Result<TreePatch, ExtensionError> {
    let ctx = PadicContext::new(p, params.f, radius.max(1) as u32)?;
    Ok(build_tree_patch(&ctx, None, radius)?)
}

/// Edge matrix after subdivision. Row `r·e + i` is link `i` of the chain of input edge
/// `r`; links follow each other and a chain end continues as its edge did.
pub fn extend_edge_matrix(a: &EdgeMatrix, e: usize) -> Result<EdgeMatrix, ExtensionError> {
    if e == 0 {
        return Err(ExtensionError::BadParams { e, f: 1 });
    }
    let n = a.dim();
    for (r, row) in a.entries.iter().enumerate() {
        if row.len() != n {
            return Err(ExtensionError::NotSquare { row: r, len: row.len(), dim: n });
        }
        if let Some(c) = row.iter().position(|&x| x > 1) {
            return Err(ExtensionError::NotBinary(r, c));
        }
    }
    if a.entries.len() != n {
        return Err(ExtensionError::NotSquare { row: a.entries.len(), len: 0, dim: n });
    }
    let mut entries = vec![vec![0u8; n * e]; n * e];
    for r in 0..n {
        for i in 0..e - 1 {
            entries[r * e + i][r * e + i + 1] = 1;
        }
        for c in 0..n {
            entries[r * e + e - 1][c * e] = a.entries[r][c];
        }
    }
    let index = (0..n * e).map(|k| 2 * k).collect();
    Ok(EdgeMatrix { index, entries })
}

/// `J`: every edge of an admissible base word becomes its chain.
pub fn walk_embedding_j(g: &DirectedGraph, ext: &ExtendedGraph, word: &[EdgeId]) -> Result<Vec<EdgeId>, ExtensionError> {
    if !g.is_admissible_word(word, Alphabet::Walks) || g.edge_count() != ext.edge_image.len() {
        return Err(ExtensionError::NotAdmissible(word.to_vec()));
    }
    Ok(word.iter().flat_map(|&w| ext.edge_image[w].iter().copied()).collect())
}

/// Left shift by `k` letters on finite words, where defined.
pub fn shift_word(word: &[EdgeId], k: usize) -> Option<&[EdgeId]> {
    word.get(k..)
}

/// Words of length `e·n` in the extension that start at a chain start.
pub fn chain_aligned_words(ext: &ExtendedGraph, n: usize) -> Result<Vec<Vec<EdgeId>>, ExtensionError> {
    let all = graph_core::enumerate_walks(&ext.graph, ext.params.e * n, Alphabet::Walks, graph_core::DEFAULT_WALK_CAP)?;
    Ok(all.into_iter().map(|w| w.edges).filter(|w| w.first().is_some_and(|&x| ext.is_chain_start(x))).collect())
}

/// One row of the restriction table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionRow {
    pub j: usize,
    /// `dim P^{(L)}_{je}`.
    pub dim_l: usize,
    /// `dim P^{(K)}_j`.
    pub dim_k: usize,
    pub rank: usize,
    /// `r ∘ δ_e = δ ∘ r` as matrices from `P^{(L)}_{je}` to `P^{(K)}_{j+1}`.
    pub intertwines: bool,
    pub surjective: bool,
}

/// Filtrations of a base graph and its extension, with the restriction maps `f ↦ f∘J`.
pub struct Restriction {
    pub k: FiltrationSpace,
    pub l: FiltrationSpace,
    pub ext: ExtendedGraph,
}

impl Restriction {
    pub fn new(g: &DirectedGraph, q: u64, params: ExtensionParams, j_max: usize) -> Result<Self, ExtensionError> {
        if j_max == 0 {
            return Err(ExtensionError::BadLevel);
        }
        let ext = extend_graph(g, params)?;
        let k = filtration_data(&build_sft_with(g, q, Alphabet::Walks)?, j_max + 1)?;
        let l = filtration_data(&build_sft_with(&ext.graph, params.q_l(q), Alphabet::Walks)?, (j_max + 1) * params.e)?;
        Ok(Restriction { k, l, ext })
    }

    /// `r_j: P^{(L)}_{je} → P^{(K)}_j`, `(r f)(ω) = f(J(ω))`.
    pub fn restriction_matrix(&self, j: usize) -> SparseMatrix {
        let e = self.ext.params.e;
        let mut m = SparseMatrix::zeros(self.k.dim(j), self.l.dim(j * e));
        for (row, w) in self.k.words(j).iter().enumerate() {
            let edges = self.k.shift.decode(w);
            let image: Vec<EdgeId> = edges.iter().flat_map(|&x| self.ext.edge_image[x].iter().copied()).collect();
            let letters = self.l.shift.encode(&image[..j * e + 1]).expect("chains of an admissible word are admissible");
            let col = self.l.position(j * e, &letters).expect("word present at its level");
            m.set(row, col, Q::from_integer(1.into()));
        }
        m
    }

    /// `δ_e f = f − f∘T^e` from `P^{(L)}_{je}` to `P^{(L)}_{(j+1)e}`.
    pub fn delta_e(&self, j: usize) -> SparseMatrix {
        let e = self.ext.params.e;
        let mut lift = SparseMatrix::identity(self.l.dim(j * e));
        let mut pull = lift.clone();
        for m in j * e..(j + 1) * e {
            lift = &self.l.lift_matrix(m) * &lift;
            pull = &self.l.pullback_matrix(m) * &pull;
        }
        lift.sub(&pull)
    }

    pub fn row(&self, j: usize) -> RestrictionRow {
        let r = self.restriction_matrix(j);
        let r_next = self.restriction_matrix(j + 1);
        let lhs = &r_next * &self.delta_e(j);
        let rhs = &self.k.delta_matrix(j) * &r;
        let hit = (0..r.rows()).all(|i| !r.row(i).is_empty());
        let rank = r.rank();
        RestrictionRow {
            j,
            dim_l: r.cols(),
            dim_k: r.rows(),
            rank,
            intertwines: lhs == rhs,
            surjective: hit && rank == r.rows(),
        }
    }
}

/// Restriction table for `1 ≤ j ≤ j_max`.
pub fn filtration_restriction_ranks(
    g: &DirectedGraph,
    q: u64,
    params: ExtensionParams,
    j_max: usize,
) -> Result<Vec<RestrictionRow>, ExtensionError> {
    let r = Restriction::new(g, q, params, j_max)?;
    Ok((1..=j_max).map(|j| r.row(j)).collect())
}
