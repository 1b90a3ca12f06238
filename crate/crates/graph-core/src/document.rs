use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::{DirectedGraph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: u64,
    pub src: u64,
    pub dst: u64,
}

/// Interchange form: listed edges are positive, involutes are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: Vec<u64>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frontier: Vec<u64>,
}

impl GraphDocument {
    /// Document with dense ids: vertex `v`, positive edge `k`.
    pub fn from_graph(g: &DirectedGraph) -> Self {
        let vertices = (0..g.vertex_count() as u64).collect();
        let edges = g
            .positive_pairs()
            .into_iter()
            .enumerate()
            .map(|(k, (s, d))| EdgeDoc { id: k as u64, src: s as u64, dst: d as u64 })
            .collect();
        let frontier = g.frontier_vertices().into_iter().map(|v| v as u64).collect();
        GraphDocument { vertices, edges, frontier }
    }

    /// Builds the graph; ids are remapped to dense positions in listing order.
    pub fn to_graph(&self) -> Result<DirectedGraph, GraphError> {
        let mut pos = HashMap::with_capacity(self.vertices.len());
        for (i, &v) in self.vertices.iter().enumerate() {
            if pos.insert(v, i).is_some() {
                return Err(GraphError::Document(format!("duplicate vertex id {v}")));
            }
        }
        let mut seen = HashMap::new();
        let mut pairs = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            if seen.insert(e.id, ()).is_some() {
                return Err(GraphError::Document(format!("duplicate edge id {}", e.id)));
            }
            let look = |v: u64| pos.get(&v).copied().ok_or_else(|| GraphError::Document(format!("edge {} uses unknown vertex {v}", e.id)));
            pairs.push((look(e.src)?, look(e.dst)?));
        }
        let mut g = DirectedGraph::from_positive(self.vertices.len(), &pairs)?;
        for v in &self.frontier {
            let i = pos.get(v).copied().ok_or_else(|| GraphError::Document(format!("unknown frontier vertex {v}")))?;
            g.set_frontier(i, true);
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }

    pub fn from_json(s: &str) -> Result<Self, GraphError> {
        serde_json::from_str(s).map_err(|e| GraphError::Document(e.to_string()))
    }
}

impl DirectedGraph {
    pub fn to_document(&self) -> GraphDocument {
        GraphDocument::from_graph(self)
    }

    /// Graphviz rendering of the positive edges.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph E {\n");
        for v in 0..self.vertex_count() {
            let shape = if self.is_frontier(v) { "box" } else { "circle" };
            let _ = writeln!(s, "  v{v} [shape={shape}];");
        }
        for (k, (a, b)) in self.positive_pairs().into_iter().enumerate() {
            let _ = writeln!(s, "  v{a} -> v{b} [label=\"e{k}\"];");
        }
        s.push_str("}\n");
        s
    }
}
