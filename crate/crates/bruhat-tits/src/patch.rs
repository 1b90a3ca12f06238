use std::collections::HashMap;

use graph_core::{DirectedGraph, VertexId};

use crate::{LatticeClass, PadicContext, TreeError};

/// Ball in the tree around a centre, edges oriented away from it.
#[derive(Debug, Clone)]
pub struct TreePatch {
    pub graph: DirectedGraph,
    /// Lattice label of every vertex; empty for the combinatorial `f > 1` model.
    pub labels: Vec<LatticeClass>,
    /// Distance of every vertex from the centre.
    pub depth: Vec<usize>,
    pub base: VertexId,
    pub radius: usize,
    pub q: u64,
    index: HashMap<LatticeClass, VertexId>,
}

impl TreePatch {
    pub fn vertex_of(&self, c: &LatticeClass) -> Option<VertexId> {
        self.index.get(c).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_interior(&self, v: VertexId) -> bool {
        self.depth[v] < self.radius
    }
}

/// Ball of the given radius around `center`, vertices in BFS order, neighbours in the
/// order returned by [`LatticeClass::neighbors`].
pub fn build_tree_patch(ctx: &PadicContext, center: Option<&LatticeClass>, radius: usize) -> Result<TreePatch, TreeError> {
    if radius > ctx.precision as usize {
        return Err(TreeError::PrecisionBudget { radius, precision: ctx.precision });
    }
    if ctx.f != 1 {
        return Ok(abstract_patch(ctx.q, radius));
    }
    let center = center.cloned().unwrap_or_else(|| LatticeClass::standard(ctx.p));
    let mut graph = DirectedGraph::from_positive(1, &[]).map_err(|_| TreeError::BadPrecision)?;
    let mut labels = vec![center.clone()];
    let mut depth = vec![0];
    let mut index = HashMap::from([(center, 0)]);
    let mut layer = vec![0];
    for d in 1..=radius {
        let mut next = Vec::new();
        for &x in &layer {
            for n in labels[x].neighbors(ctx)? {
                if index.contains_key(&n) {
                    continue;
                }
                let y = graph.add_vertex();
                graph.add_edge(x, y);
                index.insert(n.clone(), y);
                labels.push(n);
                depth.push(d);
                next.push(y);
            }
        }
        layer = next;
    }
    for v in 0..graph.vertex_count() {
        if depth[v] == radius {
            graph.set_frontier(v, true);
        }
    }
    Ok(TreePatch { graph, labels, depth, base: 0, radius, q: ctx.q, index })
}

fn abstract_patch(q: u64, radius: usize) -> TreePatch {
    let mut graph = DirectedGraph::from_positive(1, &[]).expect("empty graph");
    let mut depth = vec![0];
    let mut layer = vec![0];
    for d in 1..=radius {
        let mut next = Vec::new();
        for &x in &layer {
            let children = if d == 1 { q + 1 } else { q };
            for _ in 0..children {
                let y = graph.add_vertex();
                graph.add_edge(x, y);
                depth.push(d);
                next.push(y);
            }
        }
        layer = next;
    }
    for v in 0..graph.vertex_count() {
        if depth[v] == radius {
            graph.set_frontier(v, true);
        }
    }
    TreePatch { graph, labels: Vec::new(), depth, base: 0, radius, q, index: HashMap::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_two_at_two() {
        let ctx = PadicContext::prime(2).unwrap();
        let t = build_tree_patch(&ctx, None, 2).unwrap();
        assert_eq!(t.vertex_count(), 10);
    }

    #[test]
    fn unramified_model_is_regular() {
        let ctx = PadicContext::new(2, 2, 8).unwrap();
        let t = build_tree_patch(&ctx, None, 2).unwrap();
        assert_eq!(t.vertex_count(), 1 + 5 + 5 * 4);
        assert!(t.labels.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = PadicContext::new(2, 1, 3).unwrap();
        assert!(matches!(build_tree_patch(&ctx, None, 4), Err(TreeError::PrecisionBudget { .. })));
    }
}
