use graph_core::{subdivide_edges, DirectedGraph, EdgeId};

use crate::{DualGraphData, SchottkyError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualizeReport {
    pub target: usize,
    pub steps: usize,
    /// Positive edge (ids of the graph at that step) split at each step.
    pub split: Vec<EdgeId>,
}

fn traversals(g: &DirectedGraph, word: &[EdgeId], e: EdgeId) -> usize {
    word.iter().filter(|&&w| g.positive_of(w) == e).count()
}

/// Splits edges in two until all generator loops have the length of the longest one.
///
/// Each step picks the positive edge that lengthens the most short loops without pushing
/// any loop past the target, smallest id on ties.
pub fn equalize_loop_lengths(d: &DualGraphData, budget: usize) -> Result<(DualGraphData, EqualizeReport), SchottkyError> {
    let target = d.lengths.iter().copied().max().unwrap_or(0);
    let mut graph = d.graph.clone();
    let mut words = d.generator_words.clone();
    let mut split = Vec::new();
    loop {
        let lengths: Vec<usize> = words.iter().map(Vec::len).collect();
        if lengths.iter().all(|&l| l == target) {
            break;
        }
        if split.len() == budget {
            return Err(SchottkyError::BudgetExhausted { steps: split.len(), lengths });
        }
        let best = graph
            .positive_edges()
            .into_iter()
            .filter_map(|e| {
                let counts: Vec<usize> = words.iter().map(|w| traversals(&graph, w, e)).collect();
                let fits = counts.iter().zip(&lengths).all(|(c, l)| l + c <= target);
                let gain: usize = counts.iter().zip(&lengths).filter(|(_, &l)| l < target).map(|(c, _)| c).sum();
                (fits && gain > 0).then_some((gain, e))
            })
            .max_by_key(|&(gain, e)| (gain, std::cmp::Reverse(e)));
        let Some((_, e)) = best else {
            return Err(SchottkyError::BudgetExhausted { steps: split.len(), lengths });
        };
        let s = subdivide_edges(&graph, &[(e, 2)])?;
        words = words.iter().map(|w| s.lift_word(w)).collect();
        graph = s.graph;
        split.push(e);
    }
    let steps = split.len();
    let out = DualGraphData {
        lengths: words.iter().map(Vec::len).collect(),
        graph,
        generator_words: words,
        domain: if steps == 0 { d.domain.clone() } else { None },
        ..d.clone()
    };
    Ok((out, EqualizeReport { target, steps, split }))
}

/// Best-effort stand-in for the smallest tree: suppresses valence-two vertices that
/// are neither the base vertex nor frontier vertices, merging their two edges.
pub fn delta_gamma_heuristic(d: &DualGraphData) -> DualGraphData {
    let mut graph = d.graph.clone();
    let mut words = d.generator_words.clone();
    let mut base = d.base_vertex;
    loop {
        let candidate = (0..graph.vertex_count()).find(|&v| {
            let outs = graph.out_edges(v);
            v != base && !graph.is_frontier(v) && outs.len() == 2 && graph.positive_of(outs[0]) != graph.positive_of(outs[1])
        });
        let Some(v) = candidate else { break };
        let outs = graph.out_edges(v);
        // incoming along invol(outs[0]), outgoing along outs[1]
        let (into, out) = (graph.invol(outs[0]), outs[1]);
        let (a, b) = (graph.src(into), graph.rng(out));
        let mut pairs = Vec::new();
        let mut remap = vec![usize::MAX; graph.edge_count()];
        let vmap = |x: usize| if x > v { x - 1 } else { x };
        for e in graph.positive_edges() {
            if e == graph.positive_of(into) || e == graph.positive_of(out) {
                continue;
            }
            remap[e] = 2 * pairs.len();
            remap[graph.invol(e)] = 2 * pairs.len() + 1;
            pairs.push((vmap(graph.src(e)), vmap(graph.rng(e))));
        }
        let merged = 2 * pairs.len();
        pairs.push((vmap(a), vmap(b)));
        let mut next = DirectedGraph::from_positive(graph.vertex_count() - 1, &pairs).expect("ids in range");
        for u in graph.frontier_vertices() {
            next.set_frontier(vmap(u), true);
        }
        words = words
            .iter()
            .map(|w| {
                // rotate so the loop does not start inside the merged pair
                let mut w = w.clone();
                if let Some(i) = w.iter().position(|&e| graph.src(e) != v) {
                    w.rotate_left(i);
                }
                let mut out_w = Vec::with_capacity(w.len());
                let mut i = 0;
                while i < w.len() {
                    let e = w[i];
                    if e == into || e == graph.invol(out) {
                        // e ends at v; the next letter leaves v
                        let f = w[(i + 1) % w.len()];
                        out_w.push(if e == into && f == out { merged } else { merged + 1 });
                        i += 2;
                    } else {
                        out_w.push(remap[e]);
                        i += 1;
                    }
                }
                out_w
            })
            .collect();
        base = vmap(base);
        graph = next;
    }
    DualGraphData {
        lengths: words.iter().map(Vec::len).collect(),
        graph,
        generator_words: words,
        domain: None,
        base_vertex: base,
        heuristic: true,
        ..d.clone()
    }
}
