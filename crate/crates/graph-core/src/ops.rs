use std::collections::BTreeMap;

use crate::{DirectedGraph, EdgeId, GraphAction, GraphError, VertexId};

/// How the far end of a finite tail is closed off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailConvention {
    /// Last vertex is flagged as a truncation frontier and left open.
    #[default]
    Frontier,
    /// Last vertex is flagged and also carries a positive loop, so it emits an edge.
    TerminalLoop,
}

#[derive(Debug, Clone)]
pub struct Tails {
    pub graph: DirectedGraph,
    /// For each former sink, the tail vertices in order away from it.
    pub tails: BTreeMap<VertexId, Vec<VertexId>>,
    /// Positive edges of each tail, in order away from the sink.
    pub tail_edges: BTreeMap<VertexId, Vec<EdgeId>>,
    /// Positive loop at the end of each tail under [`TailConvention::TerminalLoop`].
    pub terminal_loops: Vec<EdgeId>,
}

fn grow_tail(g: &mut DirectedGraph, from: VertexId, depth: usize, conv: TailConvention, loops: &mut Vec<EdgeId>) -> (Vec<VertexId>, Vec<EdgeId>) {
    let mut verts = Vec::with_capacity(depth);
    let mut edges = Vec::with_capacity(depth);
    let mut at = from;
    for _ in 0..depth {
        let t = g.add_vertex();
        edges.push(g.add_edge(at, t));
        verts.push(t);
        at = t;
    }
    if at != from || conv == TailConvention::TerminalLoop {
        g.set_frontier(at, true);
    }
    if conv == TailConvention::TerminalLoop {
        loops.push(g.add_edge(at, at));
    }
    (verts, edges)
}

/// Attaches a tail of `depth` positive edges to every sink.
pub fn append_tails(g: &DirectedGraph, depth: usize, conv: TailConvention) -> Tails {
    let sinks = g.sinks();
    let mut out = g.clone();
    let mut tails = BTreeMap::new();
    let mut tail_edges = BTreeMap::new();
    let mut terminal_loops = Vec::new();
    for v in sinks {
        let (vs, es) = grow_tail(&mut out, v, depth, conv, &mut terminal_loops);
        tails.insert(v, vs);
        tail_edges.insert(v, es);
    }
    Tails { graph: out, tails, tail_edges, terminal_loops }
}

/// Attaches `target − degree(v)` tails at every vertex of degree below `target`.
///
/// Used after subdivision to restore the branching a regular tree has at every vertex.
pub fn saturate_valence(g: &DirectedGraph, target: usize, depth: usize, conv: TailConvention) -> DirectedGraph {
    let mut out = g.clone();
    let mut loops = Vec::new();
    for v in 0..g.vertex_count() {
        if g.is_frontier(v) {
            continue;
        }
        let deg = g.degree(v);
        for _ in deg..target {
            grow_tail(&mut out, v, depth.max(1), conv, &mut loops);
        }
    }
    out
}

/// [`append_tails`] plus the extension of a group action that translates whole tails.
pub fn append_tails_with_action(
    g: &DirectedGraph,
    action: &GraphAction,
    depth: usize,
    conv: TailConvention,
) -> Result<(Tails, GraphAction), GraphError> {
    let tails = append_tails(g, depth, conv);
    let n = tails.graph.vertex_count();
    let m = tails.graph.edge_count();
    let loop_of: BTreeMap<VertexId, EdgeId> = tails
        .terminal_loops
        .iter()
        .map(|&l| (tails.graph.src(l), l))
        .collect();
    let mut vmaps = Vec::with_capacity(action.generator_count());
    let mut emaps = Vec::with_capacity(action.generator_count());
    for k in 0..action.generator_count() {
        let mut vm: Vec<Option<VertexId>> = vec![None; n];
        let mut em: Vec<Option<EdgeId>> = vec![None; m];
        vm[..g.vertex_count()].copy_from_slice(&action.vertex_map(k)[..g.vertex_count()]);
        em[..g.edge_count()].copy_from_slice(&action.edge_map(k)[..g.edge_count()]);
        for (&s, vs) in &tails.tails {
            let Some(t) = vm[s] else { continue };
            let Some(tvs) = tails.tails.get(&t) else {
                return Err(GraphError::NotEquivariant(tails.tail_edges[&s].first().copied().unwrap_or(0)));
            };
            let (es, tes) = (&tails.tail_edges[&s], &tails.tail_edges[&t]);
            for (a, b) in vs.iter().zip(tvs) {
                vm[*a] = Some(*b);
            }
            for (a, b) in es.iter().zip(tes) {
                em[*a] = Some(*b);
                em[*a + 1] = Some(*b + 1);
            }
            let (end_s, end_t) = (vs.last().copied().unwrap_or(s), tvs.last().copied().unwrap_or(t));
            if let (Some(&ls), Some(&lt)) = (loop_of.get(&end_s), loop_of.get(&end_t)) {
                em[ls] = Some(lt);
                em[ls + 1] = Some(lt + 1);
            }
        }
        vmaps.push(vm);
        emaps.push(em);
    }
    Ok((tails, GraphAction::new(vmaps, emaps)))
}

#[derive(Debug, Clone)]
pub struct Subdivision {
    pub graph: DirectedGraph,
    /// Image chain of every oriented edge of the input.
    pub edge_image: Vec<Vec<EdgeId>>,
}

impl Subdivision {
    /// Image of a word of the input graph.
    pub fn lift_word(&self, word: &[EdgeId]) -> Vec<EdgeId> {
        word.iter().flat_map(|&w| self.edge_image[w].iter().copied()).collect()
    }
}

/// Replaces each listed positive edge by a chain of `parts` edges.
///
/// New positive edges are emitted original-major: all pieces of one input edge are
/// contiguous and input edges keep their relative order.
pub fn subdivide_edges(g: &DirectedGraph, parts: &[(EdgeId, usize)]) -> Result<Subdivision, GraphError> {
    let mut count: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for &(w, p) in parts {
        if w >= g.edge_count() {
            return Err(GraphError::BadEdge(w));
        }
        if !g.is_positive(w) {
            return Err(GraphError::NotPositive(w));
        }
        if p == 0 {
            return Err(GraphError::Invalid(format!("edge {w} split into 0 parts")));
        }
        count.insert(w, p);
    }
    let mut out = DirectedGraph::from_positive(g.vertex_count(), &[])?;
    for v in g.frontier_vertices() {
        out.set_frontier(v, true);
    }
    let mut edge_image = vec![Vec::new(); g.edge_count()];
    for w in g.positive_edges() {
        let p = count.get(&w).copied().unwrap_or(1);
        let mut at = g.src(w);
        let mut chain = Vec::with_capacity(p);
        for i in 0..p {
            let to = if i + 1 == p { g.rng(w) } else { out.add_vertex() };
            chain.push(out.add_edge(at, to));
            at = to;
        }
        edge_image[g.invol(w)] = chain.iter().rev().map(|&e| out.invol(e)).collect();
        edge_image[w] = chain;
    }
    Ok(Subdivision { graph: out, edge_image })
}
