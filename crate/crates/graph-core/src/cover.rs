use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::{DirectedGraph, EdgeId, GraphError, VertexId};

/// Vertex and edge maps of a set of group generators.
///
/// Maps are partial so that actions on truncated covers can be expressed: `None`
/// means the image falls outside the truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphAction {
    vertex_maps: Vec<Vec<Option<VertexId>>>,
    edge_maps: Vec<Vec<Option<EdgeId>>>,
}

impl GraphAction {
    pub fn new(vertex_maps: Vec<Vec<Option<VertexId>>>, edge_maps: Vec<Vec<Option<EdgeId>>>) -> Self {
        GraphAction { vertex_maps, edge_maps }
    }

    /// Action of the trivial group.
    pub fn trivial() -> Self {
        GraphAction { vertex_maps: Vec::new(), edge_maps: Vec::new() }
    }

    /// Total permutations given as plain vectors.
    pub fn from_permutations(vertex_perms: Vec<Vec<VertexId>>, edge_perms: Vec<Vec<EdgeId>>) -> Self {
        GraphAction {
            vertex_maps: vertex_perms.into_iter().map(|p| p.into_iter().map(Some).collect()).collect(),
            edge_maps: edge_perms.into_iter().map(|p| p.into_iter().map(Some).collect()).collect(),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.vertex_maps.len()
    }

    pub fn vertex_map(&self, k: usize) -> &[Option<VertexId>] {
        &self.vertex_maps[k]
    }

    pub fn edge_map(&self, k: usize) -> &[Option<EdgeId>] {
        &self.edge_maps[k]
    }

    /// Checks freeness and compatibility with `src`, `rng`, `invol` where defined.
    pub fn check(&self, g: &DirectedGraph) -> Result<(), GraphError> {
        if self.edge_maps.len() != self.vertex_maps.len() {
            return Err(GraphError::Invalid("vertex and edge maps disagree on generator count".into()));
        }
        for (k, (vm, em)) in self.vertex_maps.iter().zip(&self.edge_maps).enumerate() {
            if vm.len() != g.vertex_count() || em.len() != g.edge_count() {
                return Err(GraphError::Invalid(format!("generator {k} has maps of the wrong size")));
            }
            for (v, img) in vm.iter().enumerate() {
                if *img == Some(v) {
                    return Err(GraphError::NotFree { generator: k, what: "vertex", id: v });
                }
            }
            for (w, img) in em.iter().enumerate() {
                let Some(x) = *img else { continue };
                if x == w {
                    return Err(GraphError::NotFree { generator: k, what: "edge", id: w });
                }
                if x == g.invol(w) {
                    return Err(GraphError::NotFree { generator: k, what: "edge", id: w });
                }
                let ends_ok = [(g.src(w), g.src(x)), (g.rng(w), g.rng(x))]
                    .iter()
                    .all(|&(a, b)| vm[a].is_none_or(|ga| ga == b));
                let inv_ok = em[g.invol(w)].is_none_or(|y| y == g.invol(x));
                if !ends_ok || !inv_ok {
                    return Err(GraphError::NotEquivariant(w));
                }
            }
        }
        Ok(())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    // keeps the smaller id as root so representatives are smallest-id-first
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub graph: DirectedGraph,
    pub vertex_proj: Vec<VertexId>,
    pub edge_proj: Vec<EdgeId>,
    /// Vertices where `s⁻¹(v) → s⁻¹(f(v))` is a bijection.
    pub covering_vertices: usize,
    /// Vertices where it is only injective (truncation boundary).
    pub boundary_vertices: usize,
}

impl Quotient {
    pub fn is_full_covering(&self) -> bool {
        self.boundary_vertices == 0
    }
}

/// Quotient by the group generated by `action`, orbit representatives smallest-id-first.
pub fn quotient_by_action(g: &DirectedGraph, action: &GraphAction) -> Result<Quotient, GraphError> {
    action.check(g)?;
    let mut vuf = UnionFind::new(g.vertex_count());
    let mut euf = UnionFind::new(g.edge_count());
    for k in 0..action.generator_count() {
        for (v, img) in action.vertex_map(k).iter().enumerate() {
            if let Some(x) = img {
                vuf.union(v, *x);
            }
        }
        for (w, img) in action.edge_map(k).iter().enumerate() {
            if let Some(x) = img {
                euf.union(w, *x);
            }
        }
    }
    let mut vclass: BTreeMap<usize, VertexId> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        let r = vuf.find(v);
        let next = vclass.len();
        vclass.entry(r).or_insert(next);
    }
    let vertex_proj: Vec<VertexId> = (0..g.vertex_count()).map(|v| vclass[&vuf.find(v)]).collect();

    let mut out = DirectedGraph::from_positive(vclass.len(), &[])?;
    let mut eclass: HashMap<usize, EdgeId> = HashMap::new();
    for w in 0..g.edge_count() {
        let r = euf.find(w);
        if eclass.contains_key(&r) {
            continue;
        }
        let ri = euf.find(g.invol(w));
        if ri == r {
            return Err(GraphError::NotFree { generator: 0, what: "edge", id: w });
        }
        // class orientation follows its smallest member
        let pos = if g.is_positive(r) { r } else { ri };
        let neg = if pos == r { ri } else { r };
        let e = out.add_edge(vertex_proj[g.src(pos)], vertex_proj[g.rng(pos)]);
        eclass.insert(pos, e);
        eclass.insert(neg, e + 1);
    }
    let edge_proj: Vec<EdgeId> = (0..g.edge_count()).map(|w| eclass[&euf.find(w)]).collect();
    for v in 0..g.vertex_count() {
        if g.is_frontier(v) {
            out.set_frontier(vertex_proj[v], true);
        }
    }

    let (mut covering_vertices, mut boundary_vertices) = (0, 0);
    let adj_out = out.adjacency();
    for (v, outs) in g.adjacency().iter().enumerate() {
        let mut images: Vec<EdgeId> = outs.iter().map(|&w| edge_proj[w]).collect();
        images.sort_unstable();
        let before = images.len();
        images.dedup();
        if images.len() != before {
            return Err(GraphError::Invalid(format!("projection is not locally injective at vertex {v}")));
        }
        if images.len() == adj_out[vertex_proj[v]].len() {
            covering_vertices += 1;
        } else {
            boundary_vertices += 1;
        }
    }
    Ok(Quotient { graph: out, vertex_proj, edge_proj, covering_vertices, boundary_vertices })
}

/// Depth-truncated universal cover together with fundamental-group generators.
#[derive(Debug, Clone)]
pub struct CoverPatch {
    pub base: VertexId,
    pub depth: usize,
    /// The patch as a graph; vertex 0 is the empty walk.
    pub graph: DirectedGraph,
    /// Reduced walk from the base for every patch vertex.
    pub words: Vec<Vec<EdgeId>>,
    pub vertex_proj: Vec<VertexId>,
    pub edge_proj: Vec<EdgeId>,
    /// Closed reduced walks at the base, one per non-tree positive edge.
    pub generators: Vec<Vec<EdgeId>>,
    index: HashMap<Vec<EdgeId>, VertexId>,
    parent: Vec<Option<VertexId>>,
    child_edge: Vec<Option<EdgeId>>,
}

impl CoverPatch {
    pub fn vertex_of(&self, word: &[EdgeId]) -> Option<VertexId> {
        self.index.get(word).copied()
    }

    /// Deck transformations of the generators as a partial action on the patch.
    pub fn deck_action(&self, g: &DirectedGraph) -> GraphAction {
        let n = self.graph.vertex_count();
        let m = self.graph.edge_count();
        let mut vmaps = Vec::new();
        let mut emaps = Vec::new();
        for gen in &self.generators {
            let vm: Vec<Option<VertexId>> = (0..n)
                .map(|x| {
                    let mut w = gen.clone();
                    w.extend_from_slice(&self.words[x]);
                    self.vertex_of(&g.reduce_word(&w))
                })
                .collect();
            let mut em: Vec<Option<EdgeId>> = vec![None; m];
            for y in 1..n {
                let (Some(p), Some(ce)) = (self.parent[y], self.child_edge[y]) else { continue };
                let (Some(gy), Some(gp)) = (vm[y], vm[p]) else { continue };
                let img = if self.parent[gy] == Some(gp) {
                    self.child_edge[gy]
                } else {
                    self.child_edge[gp].map(|e| self.graph.invol(e))
                };
                if let Some(e) = img {
                    em[ce] = Some(e);
                    em[self.graph.invol(ce)] = Some(self.graph.invol(e));
                }
            }
            vmaps.push(vm);
            emaps.push(em);
        }
        GraphAction::new(vmaps, emaps)
    }
}

/// BFS spanning tree from `v0`, smallest edge id first; returns the tree edge into each vertex.
pub fn spanning_tree(g: &DirectedGraph, v0: VertexId) -> Vec<Option<EdgeId>> {
    let mut into = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[v0] = true;
    let adj = g.adjacency();
    let mut queue = VecDeque::from([v0]);
    while let Some(x) = queue.pop_front() {
        for &w in &adj[x] {
            let y = g.rng(w);
            if !seen[y] {
                seen[y] = true;
                into[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    into
}

fn tree_path(g: &DirectedGraph, into: &[Option<EdgeId>], v: VertexId) -> Vec<EdgeId> {
    let mut path = Vec::new();
    let mut at = v;
    while let Some(w) = into[at] {
        path.push(w);
        at = g.src(w);
    }
    path.reverse();
    path
}

pub fn cover_and_group(g: &DirectedGraph, v0: VertexId, depth: usize) -> Result<CoverPatch, GraphError> {
    if v0 >= g.vertex_count() {
        return Err(GraphError::BadVertex(v0));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let into = spanning_tree(g, v0);
    let tree: Vec<bool> = {
        let mut t = vec![false; g.edge_count()];
        for w in into.iter().flatten() {
            t[*w] = true;
            t[g.invol(*w)] = true;
        }
        t
    };
    let generators = g
        .positive_edges()
        .into_iter()
        .filter(|&w| !tree[w])
        .map(|w| {
            let mut word = tree_path(g, &into, g.src(w));
            word.push(w);
            word.extend(g.reverse_word(&tree_path(g, &into, g.rng(w))));
            g.reduce_word(&word)
        })
        .collect();

    let mut graph = DirectedGraph::from_positive(1, &[])?;
    let mut words = vec![Vec::new()];
    let mut vertex_proj = vec![v0];
    let mut edge_proj = Vec::new();
    let mut parent = vec![None];
    let mut child_edge = vec![None];
    let mut index = HashMap::from([(Vec::new(), 0)]);
    let adj = g.adjacency();
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &x in &frontier {
            let at = vertex_proj[x];
            let last = words[x].last().copied();
            for &w in &adj[at] {
                if last.is_some_and(|l| g.invol(l) == w) {
                    continue;
                }
                let y = graph.add_vertex();
                let e = if g.is_positive(w) { graph.add_edge(x, y) } else { graph.add_edge(y, x) };
                let (down, up) = if g.is_positive(w) { (e, e + 1) } else { (e + 1, e) };
                edge_proj.resize(graph.edge_count(), 0);
                edge_proj[down] = w;
                edge_proj[up] = g.invol(w);
                let mut word = words[x].clone();
                word.push(w);
                index.insert(word.clone(), y);
                words.push(word);
                vertex_proj.push(g.rng(w));
                parent.push(Some(x));
                child_edge.push(Some(down));
                next.push(y);
            }
        }
        frontier = next;
    }
    Ok(CoverPatch { base: v0, depth, graph, words, vertex_proj, edge_proj, generators, index, parent, child_edge })
}

/// Whether two small graphs are isomorphic as oriented graphs (positive edges to positive edges).
pub fn isomorphic(a: &DirectedGraph, b: &DirectedGraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.positive_count() != b.positive_count() {
        return false;
    }
    let counts = |g: &DirectedGraph| {
        let mut c = vec![vec![0usize; n]; n];
        for (s, d) in g.positive_pairs() {
            c[s][d] += 1;
        }
        c
    };
    let (ca, cb) = (counts(a), counts(b));
    let sig = |c: &Vec<Vec<usize>>, v: usize| {
        let out: usize = c[v].iter().sum();
        let inn: usize = c.iter().map(|r| r[v]).sum();
        (out, inn, c[v][v])
    };
    let sb: Vec<_> = (0..n).map(|v| sig(&cb, v)).collect();
    let sa: Vec<_> = (0..n).map(|v| sig(&ca, v)).collect();
    {
        let (mut x, mut y) = (sa.clone(), sb.clone());
        x.sort_unstable();
        y.sort_unstable();
        if x != y {
            return false;
        }
    }
    // order vertices so that each is adjacent to an earlier one where possible
    let order: Vec<usize> = {
        let mut seen = vec![false; n];
        let mut ord = Vec::with_capacity(n);
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                ord.push(v);
                for u in 0..n {
                    if !seen[u] && (ca[v][u] > 0 || ca[u][v] > 0) {
                        seen[u] = true;
                        q.push_back(u);
                    }
                }
            }
        }
        ord
    };
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    #[allow(clippy::too_many_arguments)]
    fn extend(
        i: usize,
        order: &[usize],
        map: &mut [usize],
        used: &mut [bool],
        ca: &[Vec<usize>],
        cb: &[Vec<usize>],
        sa: &[(usize, usize, usize)],
        sb: &[(usize, usize, usize)],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for u in 0..map.len() {
            if used[u] || sa[v] != sb[u] {
                continue;
            }
            let consistent = order[..i].iter().all(|&x| ca[v][x] == cb[u][map[x]] && ca[x][v] == cb[map[x]][u]);
            if !consistent {
                continue;
            }
            map[v] = u;
            used[u] = true;
            if extend(i + 1, order, map, used, ca, cb, sa, sb) {
                return true;
            }
            used[u] = false;
            map[v] = usize::MAX;
        }
        false
    }
    extend(0, &order, &mut map, &mut used, &ca, &cb, &sa, &sb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rose_has_g_generators() {
        let g = DirectedGraph::from_positive(1, &[(0, 0), (0, 0), (0, 0)]).unwrap();
        let c = cover_and_group(&g, 0, 2).unwrap();
        assert_eq!(c.generators, vec![vec![0], vec![2], vec![4]]);
        assert_eq!(c.graph.vertex_count(), 1 + 6 + 30);
    }

    #[test]
    fn line_mod_two_is_two_cycle() {
        let line = DirectedGraph::from_positive(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let vm: Vec<Option<usize>> = (0..6).map(|v| (v + 2 < 6).then_some(v + 2)).collect();
        let em: Vec<Option<usize>> = (0..10).map(|e| (e + 4 < 10).then_some(e + 4)).collect();
        let q = quotient_by_action(&line, &GraphAction::new(vec![vm], vec![em])).unwrap();
        let cyc = DirectedGraph::from_positive(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(isomorphic(&q.graph, &cyc));
        assert!(q.covering_vertices >= 2);
    }

    #[test]
    fn fixed_vertex_is_reported() {
        let g = DirectedGraph::from_positive(2, &[(0, 1)]).unwrap();
        let a = GraphAction::new(vec![vec![Some(0), Some(0)]], vec![vec![None, None]]);
        assert_eq!(a.check(&g), Err(GraphError::NotFree { generator: 0, what: "vertex", id: 0 }));
    }
}
