use std::collections::VecDeque;

use bruhat_tits::{build_tree_patch, lattice_distance, LatticeClass, Mat2, TreePatch};
use graph_core::{DirectedGraph, VertexId};

use crate::{hyperbolic_type, SchottkyError, SchottkyGroup};

fn neighbours(ball: &TreePatch) -> Vec<Vec<VertexId>> {
    ball.graph.adjacency().iter().map(|ws| ws.iter().map(|&w| ball.graph.rng(w)).collect()).collect()
}

/// Vertices `v` of the patch with `d(v, m·v) = ℓ(m)`, ordered so that `m` moves forward.
pub fn axis_vertices(m: &Mat2, patch: &TreePatch) -> Result<Vec<VertexId>, SchottkyError> {
    let p = patch.labels.first().map(|l| l.p()).ok_or(SchottkyError::AxisOutsidePatch)?;
    let h = hyperbolic_type(m, p)?;
    if !h.hyperbolic {
        return Err(SchottkyError::NotHyperbolic(m.to_string()));
    }
    let mut on = vec![false; patch.vertex_count()];
    for (v, l) in patch.labels.iter().enumerate() {
        on[v] = lattice_distance(l, &l.act(m)?) == h.translation_length;
    }
    let nb = neighbours(patch);
    let Some(start) = (0..on.len()).find(|&v| on[v] && nb[v].iter().filter(|&&u| on[u]).count() <= 1) else {
        return Err(SchottkyError::AxisOutsidePatch);
    };
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut at = start;
    while let Some(&next) = nb[at].iter().find(|&&u| on[u] && u != prev) {
        prev = at;
        at = next;
        path.push(at);
    }
    let first = &patch.labels[path[0]];
    let last = &patch.labels[path[path.len() - 1]];
    let forward = lattice_distance(&first.act(m)?, last) < (path.len() as u64 - 1) + h.translation_length;
    if !forward {
        path.reverse();
    }
    Ok(path)
}

/// Shortest path from one axis to the other; a single shared vertex if they meet.
pub fn bridge(axis_a: &[VertexId], axis_b: &[VertexId], patch: &TreePatch) -> Result<Vec<VertexId>, SchottkyError> {
    if axis_a.is_empty() || axis_b.is_empty() {
        return Err(SchottkyError::AxisOutsidePatch);
    }
    if let Some(&v) = axis_a.iter().find(|v| axis_b.contains(v)) {
        return Ok(vec![v]);
    }
    let nb = neighbours(patch);
    let mut from = vec![usize::MAX; patch.vertex_count()];
    let mut queue = VecDeque::new();
    for &a in axis_a {
        from[a] = a;
        queue.push_back(a);
    }
    while let Some(x) = queue.pop_front() {
        if axis_b.contains(&x) {
            let mut path = vec![x];
            let mut at = x;
            while from[at] != at {
                at = from[at];
                path.push(at);
            }
            path.reverse();
            return Ok(path);
        }
        for &y in &nb[x] {
            if from[y] == usize::MAX {
                from[y] = x;
                queue.push_back(y);
            }
        }
    }
    Err(SchottkyError::AxisOutsidePatch)
}

/// A subtree of a ball in the tree: the core `Δ′` truncated to the ball, or a
/// neighbourhood of it.
#[derive(Debug, Clone)]
pub struct SchottkyTree {
    pub ball: TreePatch,
    pub member: Vec<bool>,
    /// Distance of every ball vertex from the core, where reachable.
    pub core_distance: Vec<Option<usize>>,
    /// Neighbourhood level: 0 for the core itself.
    pub level: usize,
    pub word_len: usize,
    /// Whether words one letter longer add nothing inside the ball.
    pub stable: bool,
    /// Vertices at distance exactly `level ≥ 1` from the core.
    pub sinks: Vec<VertexId>,
}

impl SchottkyTree {
    pub fn vertices(&self) -> Vec<VertexId> {
        (0..self.member.len()).filter(|&v| self.member[v]).collect()
    }

    pub fn labels(&self) -> Vec<LatticeClass> {
        self.vertices().into_iter().map(|v| self.ball.labels[v].clone()).collect()
    }

    /// Induced subgraph with ball orientation; returns the graph and the ball id of each vertex.
    pub fn induced_graph(&self) -> (DirectedGraph, Vec<VertexId>) {
        let verts = self.vertices();
        let mut pos = vec![usize::MAX; self.member.len()];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let pairs: Vec<_> = self
            .ball
            .graph
            .positive_pairs()
            .into_iter()
            .filter(|&(a, b)| self.member[a] && self.member[b])
            .map(|(a, b)| (pos[a], pos[b]))
            .collect();
        let mut g = DirectedGraph::from_positive(verts.len(), &pairs).expect("ids in range");
        for (i, &v) in verts.iter().enumerate() {
            if self.ball.graph.is_frontier(v) {
                g.set_frontier(i, true);
            }
        }
        (g, verts)
    }
}

// marks every vertex of the ball tree lying between two marked vertices
fn hull(ball: &TreePatch, marked: &[bool]) -> Vec<bool> {
    let n = ball.vertex_count();
    let mut parent = vec![usize::MAX; n];
    for (a, b) in ball.graph.positive_pairs() {
        parent[b] = a;
    }
    let total = marked.iter().filter(|&&m| m).count();
    let mut sub: Vec<usize> = marked.iter().map(|&m| usize::from(m)).collect();
    // BFS ids: children have larger ids than parents
    for v in (1..n).rev() {
        let s = sub[v];
        sub[parent[v]] += s;
    }
    let mut children = vec![Vec::new(); n];
    for v in 1..n {
        children[parent[v]].push(v);
    }
    (0..n)
        .map(|v| {
            if marked[v] {
                return true;
            }
            let branches = children[v].iter().filter(|&&c| sub[c] > 0).count() + usize::from(total > sub[v]);
            branches >= 2
        })
        .collect()
}

fn axis_meets_ball(m: &Mat2, ball: &TreePatch, p: u64) -> Result<bool, SchottkyError> {
    let h = hyperbolic_type(m, p)?;
    let x0 = &ball.labels[ball.base];
    let disp = lattice_distance(x0, &x0.act(m)?);
    Ok(disp >= h.translation_length && (disp - h.translation_length) / 2 <= ball.radius as u64)
}

/// Convex hull inside a ball of the axes of all reduced words of length `≤ word_len`.
pub fn build_schottky_tree(
    group: &SchottkyGroup,
    word_len: usize,
    radius: usize,
    center: Option<&LatticeClass>,
) -> Result<SchottkyTree, SchottkyError> {
    let ball = build_tree_patch(&group.ctx, center, radius)?;
    let p = group.ctx.p;
    let n = ball.vertex_count();
    let words = group.reduced_words(word_len.max(1) + 1);
    let mut marked = vec![false; n];
    let mut extra = vec![false; n];
    for (w, m) in &words {
        if !axis_meets_ball(m, &ball, p)? {
            if w.len() == 1 {
                return Err(SchottkyError::AxisOutsidePatch);
            }
            continue;
        }
        let axis = axis_vertices(m, &ball)?;
        let target = if w.len() <= word_len.max(1) { &mut marked } else { &mut extra };
        for v in axis {
            target[v] = true;
        }
    }
    let member = hull(&ball, &marked);
    let both: Vec<bool> = marked.iter().zip(&extra).map(|(a, b)| *a || *b).collect();
    let stable = hull(&ball, &both) == member;
    let core_distance = distances_from_set(&ball, &member);
    Ok(SchottkyTree { ball, member, core_distance, level: 0, word_len, stable, sinks: Vec::new() })
}

fn distances_from_set(ball: &TreePatch, set: &[bool]) -> Vec<Option<usize>> {
    let nb = neighbours(ball);
    let mut d = vec![None; set.len()];
    let mut queue = VecDeque::new();
    for v in 0..set.len() {
        if set[v] {
            d[v] = Some(0);
            queue.push_back(v);
        }
    }
    while let Some(x) = queue.pop_front() {
        let dx = d[x].unwrap_or(0);
        for &y in &nb[x] {
            if d[y].is_none() {
                d[y] = Some(dx + 1);
                queue.push_back(y);
            }
        }
    }
    d
}

/// Vertices within distance `n` of the core, with their induced edges.
pub fn reduction_graph(core: &SchottkyTree, n: usize) -> Result<SchottkyTree, SchottkyError> {
    if core.level != 0 {
        return Err(SchottkyError::Invalid("reduction graphs are built from the core".into()));
    }
    if n == 0 {
        return Ok(core.clone());
    }
    if n >= core.ball.radius {
        return Err(SchottkyError::Invalid(format!("level {n} exceeds the ambient ball of radius {}", core.ball.radius)));
    }
    let member: Vec<bool> = core.core_distance.iter().map(|d| d.is_some_and(|d| d <= n)).collect();
    let sinks = (0..member.len()).filter(|&v| core.core_distance[v] == Some(n)).collect();
    Ok(SchottkyTree { member, level: n, sinks, ..core.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use bruhat_tits::PadicContext;

    #[test]
    fn diagonal_axis_is_the_standard_line() {
        let ctx = PadicContext::prime(2).unwrap();
        let ball = build_tree_patch(&ctx, None, 3).unwrap();
        let axis = axis_vertices(&Mat2::from_ints(2, 0, 0, 1), &ball).unwrap();
        assert_eq!(axis.len(), 7);
        let m = Mat2::from_ints(2, 0, 0, 1);
        for w in axis.windows(2) {
            assert_eq!(ball.labels[w[0]].act(&m).unwrap(), ball.labels[w[1]]);
        }
    }
}
