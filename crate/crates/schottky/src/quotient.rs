use std::collections::{BTreeMap, HashMap, VecDeque};

use bruhat_tits::{lattice_distance, LatticeClass, Mat2};
use graph_core::{append_tails, quotient_by_action, DirectedGraph, EdgeId, GraphAction, GraphDocument, TailConvention, VertexId};

use crate::{axis_vertices, SchottkyError, SchottkyGroup, SchottkyTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    /// The core `Δ′_Γ`.
    Core,
    /// The neighbourhood of the core of the given level.
    Reduction(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct QuotientOptions {
    /// Identification word length; the smallest certified value when `None`.
    pub word_len: Option<usize>,
    pub tail_depth: usize,
    pub tail_convention: TailConvention,
}

impl Default for QuotientOptions {
    fn default() -> Self {
        QuotientOptions { word_len: None, tail_depth: 16, tail_convention: TailConvention::Frontier }
    }
}

#[derive(Debug, Clone)]
pub struct DualGraphData {
    pub graph: DirectedGraph,
    pub ambient: Ambient,
    /// Closed walk of each generator along its axis.
    pub generator_words: Vec<Vec<EdgeId>>,
    pub lengths: Vec<usize>,
    /// One tree edge per edge class, as pairs of ball vertices; `None` once subdivided.
    pub domain: Option<Vec<(VertexId, VertexId)>>,
    /// Quotient vertex of every ball vertex in the patch.
    pub vertex_proj: Vec<Option<VertexId>>,
    pub base_vertex: VertexId,
    pub word_len: usize,
    /// Number of group elements used for identification.
    pub elements_used: usize,
    /// Set when produced by the valence-two smoothing pass.
    pub heuristic: bool,
}

impl DualGraphData {
    pub fn document(&self) -> GraphDocument {
        self.graph.to_document()
    }

    pub fn betti_number(&self) -> usize {
        self.graph.betti_number()
    }
}

/// Group elements whose words have length `≤ l`, skipping those that provably cannot
/// identify two vertices of a ball of radius `r` around `x0`.
fn identifying_elements(group: &SchottkyGroup, x0: &LatticeClass, l: usize, r: u64) -> Result<Vec<Mat2>, SchottkyError> {
    let reach: u64 = group
        .letters()
        .iter()
        .map(|&a| x0.act(group.letter(a)).map(|y| lattice_distance(x0, &y)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<i32>, Mat2)> = vec![(Vec::new(), Mat2::identity())];
    while let Some((w, m)) = stack.pop() {
        if !w.is_empty() {
            let disp = lattice_distance(x0, &x0.act(&m)?);
            let slack = (l - w.len()) as u64 * reach;
            if disp > 2 * r + slack {
                continue;
            }
            if disp <= 2 * r {
                out.push(m.clone());
            }
        }
        if w.len() == l {
            continue;
        }
        for a in group.letters() {
            if w.last() == Some(&-a) {
                continue;
            }
            let mut w2 = w.clone();
            w2.push(a);
            let m2 = &m * group.letter(a);
            stack.push((w2, m2));
        }
    }
    Ok(out)
}

/// Quotient of a core or reduction-graph patch by the group.
pub fn quotient_dual_graph(group: &SchottkyGroup, tree: &SchottkyTree, opts: &QuotientOptions) -> Result<DualGraphData, SchottkyError> {
    let ball = &tree.ball;
    let r = ball.radius;
    let min_len = group.translation_lengths().into_iter().min().unwrap_or(0) as usize;
    if min_len == 0 {
        return Err(SchottkyError::Uncertified("a generator has translation length 0".into()));
    }
    let certified_len = 2 * r / min_len;
    let l = opts.word_len.unwrap_or(certified_len);
    if 2 * r >= (l + 1) * min_len {
        return Err(SchottkyError::Uncertified(format!("2·{r} ≥ ({l}+1)·{min_len}")));
    }

    let (h, verts) = tree.induced_graph();
    let mut pos: HashMap<&LatticeClass, usize> = HashMap::new();
    for (i, &v) in verts.iter().enumerate() {
        pos.insert(&ball.labels[v], i);
    }
    let mut edge_of: HashMap<(usize, usize), EdgeId> = HashMap::new();
    for w in 0..h.edge_count() {
        edge_of.insert((h.src(w), h.rng(w)), w);
    }
    let x0 = &ball.labels[ball.base];
    let elements = identifying_elements(group, x0, l, r as u64)?;
    let mut vmaps = Vec::with_capacity(elements.len());
    let mut emaps = Vec::with_capacity(elements.len());
    for m in &elements {
        let vm: Vec<Option<usize>> = verts
            .iter()
            .map(|&v| ball.labels[v].act(m).map(|y| pos.get(&y).copied()))
            .collect::<Result<_, _>>()?;
        let em: Vec<Option<EdgeId>> = (0..h.edge_count())
            .map(|w| match (vm[h.src(w)], vm[h.rng(w)]) {
                (Some(a), Some(b)) => edge_of.get(&(a, b)).copied(),
                _ => None,
            })
            .collect();
        vmaps.push(vm);
        emaps.push(em);
    }
    let action = GraphAction::new(vmaps, emaps);
    let q = quotient_by_action(&h, &action).map_err(|e| SchottkyError::NotFree(e.to_string()))?;

    // every class needs an interior representative whose star maps onto the class star
    let adj_q = q.graph.adjacency();
    let adj_h = h.adjacency();
    for c in 0..q.graph.vertex_count() {
        let ok = (0..h.vertex_count()).any(|u| {
            q.vertex_proj[u] == c && ball.depth[verts[u]] < r && adj_h[u].len() == adj_q[c].len()
        });
        if !ok {
            return Err(SchottkyError::Uncertified(format!("quotient vertex {c} has no interior representative; use a larger radius")));
        }
    }

    // orientation: generator loops first, then away from the base class
    let base_h = verts.iter().position(|&v| v == ball.base).unwrap_or(0);
    let base_q = q.vertex_proj[base_h];
    let mut loops_h = Vec::with_capacity(group.genus());
    for g in &group.generators {
        loops_h.push(axis_loop(g, tree, &verts, &edge_of)?);
    }
    let mut positive: Vec<Option<EdgeId>> = vec![None; q.graph.edge_count()];
    let mut order: Vec<EdgeId> = Vec::new();
    for lp in &loops_h {
        for &w in lp {
            let e = q.edge_proj[w];
            let ie = q.graph.invol(e);
            if positive[e].is_none() {
                positive[e] = Some(e);
                positive[ie] = Some(e);
                order.push(e);
            }
        }
    }
    let dist = q.graph.distances_from(base_q);
    for e in q.graph.positive_edges() {
        if positive[e].is_some() {
            continue;
        }
        let ie = q.graph.invol(e);
        let (ds, dr) = (dist[q.graph.src(e)], dist[q.graph.rng(e)]);
        let pick = if dr < ds { ie } else { e };
        positive[e] = Some(pick);
        positive[ie] = Some(pick);
        order.push(pick);
    }
    let pairs: Vec<_> = order.iter().map(|&e| (q.graph.src(e), q.graph.rng(e))).collect();
    let mut graph = DirectedGraph::from_positive(q.graph.vertex_count(), &pairs)?;
    let mut renum = vec![0; q.graph.edge_count()];
    for (k, &e) in order.iter().enumerate() {
        renum[e] = 2 * k;
        renum[q.graph.invol(e)] = 2 * k + 1;
    }
    let generator_words: Vec<Vec<EdgeId>> = loops_h.iter().map(|lp| lp.iter().map(|&w| renum[q.edge_proj[w]]).collect()).collect();
    let lengths = generator_words.iter().map(Vec::len).collect();

    if graph.betti_number() != group.genus() {
        return Err(SchottkyError::Invalid(format!("quotient has Betti number {}, expected {}", graph.betti_number(), group.genus())));
    }

    // fundamental domain: BFS from the base, one tree edge per class
    let mut seen_class = vec![false; q.graph.edge_count()];
    let mut in_tree = vec![false; h.vertex_count()];
    in_tree[base_h] = true;
    let mut domain = Vec::new();
    let mut queue = VecDeque::from([base_h]);
    while let Some(x) = queue.pop_front() {
        for &w in &adj_h[x] {
            let y = h.rng(w);
            let e = q.edge_proj[w];
            if in_tree[y] || seen_class[e] {
                continue;
            }
            seen_class[e] = true;
            seen_class[q.graph.invol(e)] = true;
            in_tree[y] = true;
            domain.push((verts[x], verts[y]));
            queue.push_back(y);
        }
    }
    if domain.len() != graph.positive_count() {
        return Err(SchottkyError::Uncertified("fundamental domain does not reach every edge class".into()));
    }

    if tree.level > 0 && !graph.sinks().is_empty() {
        graph = append_tails(&graph, opts.tail_depth, opts.tail_convention).graph;
    }

    let mut vertex_proj = vec![None; ball.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        vertex_proj[v] = Some(q.vertex_proj[i]);
    }
    let ambient = if tree.level == 0 { Ambient::Core } else { Ambient::Reduction(tree.level) };
    Ok(DualGraphData {
        graph,
        ambient,
        generator_words,
        lengths,
        domain: Some(domain),
        vertex_proj,
        base_vertex: base_q,
        word_len: l,
        elements_used: elements.len(),
        heuristic: false,
    })
}

// oriented edges of h along the axis of g from the axis vertex nearest the base to its image
fn axis_loop(
    g: &Mat2,
    tree: &SchottkyTree,
    verts: &[VertexId],
    edge_of: &HashMap<(usize, usize), EdgeId>,
) -> Result<Vec<EdgeId>, SchottkyError> {
    let ball = &tree.ball;
    let axis = axis_vertices(g, ball)?;
    let len = crate::hyperbolic_type(g, ball.labels[0].p())?.translation_length as usize;
    let start = (0..axis.len().saturating_sub(len))
        .filter(|&i| ball.labels[axis[i]].act(g).ok().as_ref() == Some(&ball.labels[axis[i + len]]))
        .min_by_key(|&i| ball.depth[axis[i]].max(ball.depth[axis[i + len]]))
        .ok_or(SchottkyError::AxisOutsidePatch)?;
    let mut by_ball: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        by_ball.insert(v, i);
    }
    let mut out = Vec::with_capacity(len);
    for k in start..start + len {
        let a = *by_ball.get(&axis[k]).ok_or(SchottkyError::AxisOutsidePatch)?;
        let b = *by_ball.get(&axis[k + 1]).ok_or(SchottkyError::AxisOutsidePatch)?;
        out.push(*edge_of.get(&(a, b)).ok_or(SchottkyError::AxisOutsidePatch)?);
    }
    Ok(out)
}
