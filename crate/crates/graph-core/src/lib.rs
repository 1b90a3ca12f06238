//! Directed graphs with an involution on oriented edges.
//!
//! A graph carries vertices `0..n`, oriented edges `0..m`, maps `src`, `rng`
//! and a fixed-point-free involution `invol` exchanging them. One edge of each
//! involution pair is marked positive. Graphs built through
//! [`DirectedGraph::from_positive`] use the layout `2k` (positive) and `2k+1`
//! (its involute), so positive edge `k` has oriented id `2k`.

#![forbid(unsafe_code)]

mod cover;
mod document;
mod ops;
mod walks;

pub use cover::{cover_and_group, isomorphic, quotient_by_action, spanning_tree, CoverPatch, GraphAction, Quotient};
pub use document::{EdgeDoc, GraphDocument};
pub use ops::{append_tails, append_tails_with_action, saturate_valence, subdivide_edges, Subdivision, TailConvention, Tails};
pub use walks::{edge_matrices, enumerate_walks, EdgeMatrix, DEFAULT_WALK_CAP};

use std::collections::VecDeque;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range")]
    BadVertex(VertexId),
    #[error("edge {0} out of range")]
    BadEdge(EdgeId),
    #[error("edge {0} is not positive")]
    NotPositive(EdgeId),
    #[error("walk enumeration would exceed the cap of {cap} words")]
    SizeCap { cap: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("action is not free: generator {generator} fixes {what} {id}")]
    NotFree { generator: usize, what: &'static str, id: usize },
    #[error("action does not commute with the graph structure at edge {0}")]
    NotEquivariant(EdgeId),
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("document error: {0}")]
    Document(String),
}

/// Which letters a word may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// All oriented edges, no backtracking.
    Walks,
    /// Positive edges only.
    Paths,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WalkKind {
    Finite,
    PositivePath,
    WordClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub edges: Vec<EdgeId>,
    pub kind: WalkKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n_vertices: usize,
    src: Vec<VertexId>,
    rng: Vec<VertexId>,
    invol: Vec<EdgeId>,
    positive: Vec<bool>,
    frontier: Vec<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub sinks: Vec<VertexId>,
    pub row_finite: bool,
    pub locally_finite: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DirectedGraph {
    /// Builds a graph from its positive edges `(src, dst)`; involutes are implicit.
    pub fn from_positive(n_vertices: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut g = DirectedGraph {
            n_vertices,
            src: Vec::with_capacity(2 * edges.len()),
            rng: Vec::with_capacity(2 * edges.len()),
            invol: Vec::with_capacity(2 * edges.len()),
            positive: Vec::with_capacity(2 * edges.len()),
            frontier: vec![false; n_vertices],
        };
        for (k, &(s, d)) in edges.iter().enumerate() {
            for v in [s, d] {
                if v >= n_vertices {
                    return Err(GraphError::BadVertex(v));
                }
            }
            g.src.extend([s, d]);
            g.rng.extend([d, s]);
            g.invol.extend([2 * k + 1, 2 * k]);
            g.positive.extend([true, false]);
        }
        Ok(g)
    }

    /// Assembles a graph from raw maps without checking them; see [`DirectedGraph::validate`].
    pub fn from_raw(
        n_vertices: usize,
        src: Vec<VertexId>,
        rng: Vec<VertexId>,
        invol: Vec<EdgeId>,
        positive: Vec<bool>,
    ) -> Self {
        DirectedGraph { n_vertices, src, rng, invol, positive, frontier: vec![false; n_vertices] }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let m = self.src.len();
        if self.rng.len() != m || self.invol.len() != m || self.positive.len() != m {
            violations.push("edge maps have different lengths".to_string());
            return ValidationReport { violations, ..Default::default() };
        }
        for w in 0..m {
            if self.src[w] >= self.n_vertices || self.rng[w] >= self.n_vertices {
                violations.push(format!("edge {w} has an endpoint out of range"));
                continue;
            }
            let iw = self.invol[w];
            if iw >= m {
                violations.push(format!("edge {w} has involute {iw} out of range"));
                continue;
            }
            if iw == w {
                violations.push(format!("involution fixes edge {w}"));
                continue;
            }
            if self.invol[iw] != w {
                violations.push(format!("involution is not an involution at edge {w}"));
            }
            if self.src[iw] != self.rng[w] || self.rng[iw] != self.src[w] {
                violations.push(format!("involute of edge {w} does not reverse it"));
            }
            if self.positive[w] == self.positive[iw] {
                violations.push(format!("edge {w} and its involute are both {}", if self.positive[w] { "positive" } else { "negative" }));
            }
        }
        let sinks = if violations.is_empty() { self.sinks() } else { Vec::new() };
        ValidationReport { violations, sinks, row_finite: true, locally_finite: true }
    }

    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }

    /// Number of oriented edges.
    pub fn edge_count(&self) -> usize {
        self.src.len()
    }

    pub fn positive_count(&self) -> usize {
        self.positive.iter().filter(|&&p| p).count()
    }

    pub fn src(&self, w: EdgeId) -> VertexId {
        self.src[w]
    }

    pub fn rng(&self, w: EdgeId) -> VertexId {
        self.rng[w]
    }

    pub fn invol(&self, w: EdgeId) -> EdgeId {
        self.invol[w]
    }

    pub fn is_positive(&self, w: EdgeId) -> bool {
        self.positive[w]
    }

    pub fn positive_edges(&self) -> Vec<EdgeId> {
        (0..self.edge_count()).filter(|&w| self.positive[w]).collect()
    }

    /// Letters of the chosen alphabet, in id order.
    pub fn letters(&self, mode: Alphabet) -> Vec<EdgeId> {
        match mode {
            Alphabet::Walks => (0..self.edge_count()).collect(),
            Alphabet::Paths => self.positive_edges(),
        }
    }

    pub fn out_edges(&self, v: VertexId) -> Vec<EdgeId> {
        (0..self.edge_count()).filter(|&w| self.src[w] == v).collect()
    }

    /// Undirected degree; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.out_edges(v).len()
    }

    pub fn admissible(&self, w1: EdgeId, w2: EdgeId, mode: Alphabet) -> bool {
        if self.rng[w1] != self.src[w2] {
            return false;
        }
        match mode {
            Alphabet::Walks => w2 != self.invol[w1],
            Alphabet::Paths => self.positive[w1] && self.positive[w2],
        }
    }

    pub fn successors(&self, w: EdgeId, mode: Alphabet) -> Vec<EdgeId> {
        self.letters(mode).into_iter().filter(|&x| self.admissible(w, x, mode)).collect()
    }

    pub fn is_admissible_word(&self, word: &[EdgeId], mode: Alphabet) -> bool {
        if word.iter().any(|&w| w >= self.edge_count()) {
            return false;
        }
        if mode == Alphabet::Paths && word.iter().any(|&w| !self.positive[w]) {
            return false;
        }
        word.windows(2).all(|p| self.admissible(p[0], p[1], mode))
    }

    /// Vertices that emit no positive edge, frontier vertices excluded.
    pub fn sinks(&self) -> Vec<VertexId> {
        let mut emits = vec![false; self.n_vertices];
        for w in 0..self.edge_count() {
            if self.positive[w] {
                emits[self.src[w]] = true;
            }
        }
        (0..self.n_vertices).filter(|&v| !emits[v] && !self.frontier[v]).collect()
    }

    pub fn is_frontier(&self, v: VertexId) -> bool {
        self.frontier[v]
    }

    pub fn frontier_vertices(&self) -> Vec<VertexId> {
        (0..self.n_vertices).filter(|&v| self.frontier[v]).collect()
    }

    pub fn set_frontier(&mut self, v: VertexId, flag: bool) {
        self.frontier[v] = flag;
    }

    /// Connected components as a vertex labelling, labels in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n_vertices];
        let mut next = 0;
        let adj = self.adjacency();
        for start in 0..self.n_vertices {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    let u = self.rng[w];
                    if label[u] == usize::MAX {
                        label[u] = next;
                        queue.push_back(u);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// First Betti number of the geometric realization: E₊ − V + components.
    pub fn betti_number(&self) -> usize {
        self.positive_count() + self.component_count() - self.n_vertices
    }

    /// Oriented out-edges per vertex, in id order.
    pub fn adjacency(&self) -> Vec<Vec<EdgeId>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for w in 0..self.edge_count() {
            adj[self.src[w]].push(w);
        }
        adj
    }

    /// Graph distance between vertices, ignoring orientation.
    pub fn distances_from(&self, v: VertexId) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut dist = vec![None; self.n_vertices];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap_or(0);
            for &w in &adj[x] {
                let y = self.rng[w];
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Adds a vertex and returns its id.
    pub fn add_vertex(&mut self) -> VertexId {
        self.n_vertices += 1;
        self.frontier.push(false);
        self.n_vertices - 1
    }

    /// Adds a positive edge with its involute; returns the positive id.
    pub fn add_edge(&mut self, s: VertexId, d: VertexId) -> EdgeId {
        let w = self.edge_count();
        self.src.extend([s, d]);
        self.rng.extend([d, s]);
        self.invol.extend([w + 1, w]);
        self.positive.extend([true, false]);
        w
    }

    /// Positive edges as `(src, dst)` pairs in id order.
    pub fn positive_pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.positive_edges().into_iter().map(|w| (self.src[w], self.rng[w])).collect()
    }

    /// Same underlying edge with the positive orientation.
    pub fn positive_of(&self, w: EdgeId) -> EdgeId {
        if self.positive[w] {
            w
        } else {
            self.invol[w]
        }
    }

    /// Reverses a walk: involutes in reverse order.
    pub fn reverse_word(&self, word: &[EdgeId]) -> Vec<EdgeId> {
        word.iter().rev().map(|&w| self.invol[w]).collect()
    }

    /// Cancels adjacent backtracking pairs `w ι(w)`.
    pub fn reduce_word(&self, word: &[EdgeId]) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = Vec::with_capacity(word.len());
        for &w in word {
            if out.last().is_some_and(|&l| self.invol[l] == w) {
                out.pop();
            } else {
                out.push(w);
            }
        }
        out
    }
}
