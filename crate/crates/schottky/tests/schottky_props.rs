use std::collections::{BTreeSet, VecDeque};
use std::sync::OnceLock;

use bruhat_tits::*;
use graph_core::{cover_and_group, Alphabet, DirectedGraph, EdgeId};
use num_rational::BigRational;
use proptest::prelude::*;
use schottky::*;

fn ctx(p: u64) -> PadicContext {
    PadicContext::prime(p).unwrap()
}

fn cyclic(g: &Mat2, p: u64) -> SchottkyGroup {
    SchottkyGroup::new(ctx(p), vec![g.clone()], 4).unwrap()
}

// γ1 = diag(2,1), γ2 = h·diag(4,1)·h⁻¹ with h = [[1,3],[1,1]]: axes 0–∞ and 1–3, bridge of length 1
fn dumbbell_pair() -> SchottkyGroup {
    let h = Mat2::from_ints(1, 3, 1, 1);
    let g2 = &(&h * &Mat2::from_ints(4, 0, 0, 1)) * &h.inverse().unwrap();
    SchottkyGroup::new(ctx(2), vec![Mat2::from_ints(2, 0, 0, 1), g2], 4).unwrap()
}

fn dumbbell_quotient() -> &'static DualGraphData {
    static D: OnceLock<DualGraphData> = OnceLock::new();
    D.get_or_init(|| {
        let g = dumbbell_pair();
        let t = build_schottky_tree(&g, 3, 4, None).unwrap();
        quotient_dual_graph(&g, &t, &QuotientOptions::default()).unwrap()
    })
}

fn closed_and_admissible(g: &DirectedGraph, w: &[EdgeId]) -> bool {
    let mut cyc = w.to_vec();
    cyc.push(w[0]);
    g.rng(*w.last().unwrap()) == g.src(w[0]) && g.is_admissible_word(&cyc, Alphabet::Walks)
}

#[test]
fn scale_invariance_of_type() {
    let p = 3u64;
    let ms = [Mat2::from_ints(3, 0, 0, 1), Mat2::from_ints(1, 1, 0, 1), Mat2::from_ints(9, 2, 3, 1), Mat2::from_ints(1, 3, 1, 1)];
    let lambdas = [rat(1), rat(-1), rat(3), BigRational::new(1.into(), 3.into()), rat(3)];
    for m in &ms {
        let base = hyperbolic_type(m, p).unwrap();
        for l in &lambdas {
            assert_eq!(hyperbolic_type(&m.scale(l), p).unwrap(), base);
        }
    }
}

#[test]
fn translation_length_is_minimal_displacement() {
    let ball = build_tree_patch(&ctx(2), None, 4).unwrap();
    let h = Mat2::from_ints(1, 3, 1, 1);
    for m in [Mat2::from_ints(2, 0, 0, 1), Mat2::from_ints(4, 0, 0, 1), &(&h * &Mat2::from_ints(4, 0, 0, 1)) * &h.inverse().unwrap(), Mat2::from_ints(2, 1, 0, 1)] {
        let t = hyperbolic_type(&m, 2).unwrap();
        let min = ball.labels.iter().map(|v| lattice_distance(v, &v.act(&m).unwrap())).min().unwrap();
        assert_eq!(t.hyperbolic, min > 0);
        if t.hyperbolic {
            assert_eq!(min, t.translation_length);
            for v in axis_vertices(&m, &ball).unwrap() {
                let l = &ball.labels[v];
                assert_eq!(lattice_distance(l, &l.act(&m).unwrap()), t.translation_length);
            }
        }
    }
}

#[test]
fn diagonal_axis_is_the_diagonal_line() {
    let ball = build_tree_patch(&ctx(2), None, 3).unwrap();
    let axis = axis_vertices(&Mat2::from_ints(2, 0, 0, 1), &ball).unwrap();
    let expected: BTreeSet<LatticeClass> = (-3i64..=3).map(|n| LatticeClass::from_basis(&Mat2::diag(rat(1), p_power(2, n)), 2).unwrap()).collect();
    let got: BTreeSet<LatticeClass> = axis.iter().map(|&v| ball.labels[v].clone()).collect();
    assert_eq!(got, expected);
}

#[test]
fn conjugate_axis_is_translated_axis() {
    let ball = build_tree_patch(&ctx(2), None, 5).unwrap();
    let m = Mat2::from_ints(2, 0, 0, 1);
    let h = Mat2::from_ints(1, 3, 1, 1);
    let conj = &(&h * &m) * &h.inverse().unwrap();
    let a: BTreeSet<LatticeClass> = axis_vertices(&m, &ball).unwrap().iter().map(|&v| ball.labels[v].act(&h).unwrap()).collect();
    let b: BTreeSet<LatticeClass> = axis_vertices(&conj, &ball).unwrap().iter().map(|&v| ball.labels[v].clone()).collect();
    // compare where both are visible: the image axis restricted to the ball
    let inside: BTreeSet<LatticeClass> = a.into_iter().filter(|c| ball.vertex_of(c).is_some()).collect();
    assert!(inside.is_subset(&b) || b.is_subset(&inside));
    assert!(!b.is_empty());
}

fn bfs_distance(ball: &TreePatch, from: &[usize], to: &[usize]) -> usize {
    let adj = ball.graph.adjacency();
    let mut d = vec![usize::MAX; ball.vertex_count()];
    let mut q: VecDeque<usize> = from.iter().copied().collect();
    for &f in from {
        d[f] = 0;
    }
    while let Some(x) = q.pop_front() {
        for &w in &adj[x] {
            let y = ball.graph.rng(w);
            if d[y] == usize::MAX {
                d[y] = d[x] + 1;
                q.push_back(y);
            }
        }
    }
    to.iter().map(|&t| d[t]).min().unwrap()
}

#[test]
fn bridges() {
    let ball = build_tree_patch(&ctx(2), None, 5).unwrap();
    let g = dumbbell_pair();
    let a = axis_vertices(&g.generators[0], &ball).unwrap();
    let b = axis_vertices(&g.generators[1], &ball).unwrap();
    let br = bridge(&a, &b, &ball).unwrap();
    assert_eq!(br.len() - 1, bfs_distance(&ball, &a, &b));
    assert_eq!(br.len(), 2);
    assert!(a.contains(&br[0]) && b.contains(br.last().unwrap()));
    for v in &br[1..br.len() - 1] {
        assert!(!a.contains(v) && !b.contains(v));
    }
    // crossing axes
    let c = axis_vertices(&Mat2::from_ints(2, 1, 0, 1), &ball).unwrap();
    let cross = bridge(&a, &c, &ball).unwrap();
    assert_eq!(cross.len(), 1);
}

#[test]
fn cyclic_quotients() {
    let g = cyclic(&Mat2::from_ints(2, 0, 0, 1), 2);
    let t = build_schottky_tree(&g, 1, 3, None).unwrap();
    let d = quotient_dual_graph(&g, &t, &QuotientOptions::default()).unwrap();
    assert_eq!((d.graph.vertex_count(), d.graph.positive_count()), (1, 1));
    assert_eq!(d.lengths, vec![1]);

    let g = cyclic(&Mat2::from_ints(4, 0, 0, 1), 2);
    let t = build_schottky_tree(&g, 1, 3, None).unwrap();
    assert_eq!(t.vertices().len(), 7);
    let d = quotient_dual_graph(&g, &t, &QuotientOptions::default()).unwrap();
    assert_eq!((d.graph.vertex_count(), d.graph.positive_count()), (2, 2));
    assert_eq!(d.lengths, vec![2]);
    assert!(closed_and_admissible(&d.graph, &d.generator_words[0]));
}

#[test]
fn genus_two_dumbbell() {
    let g = dumbbell_pair();
    let t = build_schottky_tree(&g, 3, 4, None).unwrap();
    let d = quotient_dual_graph(&g, &t, &QuotientOptions::default()).unwrap();
    assert_eq!(d.betti_number(), 2);
    assert_eq!(d.graph.positive_count() + 1, d.graph.vertex_count() + 2);
    assert_eq!(d.lengths, vec![1, 2]);
    assert_eq!(d.graph.vertex_count(), 3);
    for w in &d.generator_words {
        assert!(closed_and_admissible(&d.graph, w));
    }
    assert!(d.graph.sinks().is_empty());
    let dom = d.domain.as_ref().unwrap();
    assert_eq!(dom.len(), d.graph.positive_count());

    let (e, rep) = equalize_loop_lengths(&d, 8).unwrap();
    assert_eq!(e.lengths, vec![2, 2]);
    assert_eq!(rep.steps, 1);
    assert_eq!(e.betti_number(), 2);
}

#[test]
fn core_stabilizes() {
    let g = dumbbell_pair();
    let trees: Vec<SchottkyTree> = (1..=5).map(|n| build_schottky_tree(&g, n, 3, None).unwrap()).collect();
    let flags: Vec<bool> = trees.iter().map(|t| t.stable).collect();
    let sizes: Vec<usize> = trees.iter().map(|t| t.vertices().len()).collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    assert!(flags[3] && flags[4]);
}

#[test]
fn reduction_graph_counts() {
    let g = cyclic(&Mat2::from_ints(2, 0, 0, 1), 2);
    let core = build_schottky_tree(&g, 1, 4, None).unwrap();
    let same = reduction_graph(&core, 0).unwrap();
    assert_eq!(same.member, core.member);
    let r1 = reduction_graph(&core, 1).unwrap();
    assert!(!r1.sinks.is_empty());
    let line = core.vertices();
    let interior: Vec<_> = line.iter().filter(|&&v| core.ball.is_interior(v)).collect();
    // each interior line vertex gains q+1−2 = 1 neighbour off the axis
    assert_eq!(r1.vertices().len(), line.len() + interior.len());
    let d = quotient_dual_graph(&g, &r1, &QuotientOptions { tail_depth: 2, ..Default::default() }).unwrap();
    assert_eq!(d.betti_number(), 1);
    assert!(d.graph.sinks().is_empty());
}

#[test]
fn quotient_cover_embeds_in_core() {
    let g = dumbbell_pair();
    let t = build_schottky_tree(&g, 3, 4, None).unwrap();
    let d = quotient_dual_graph(&g, &t, &QuotientOptions::default()).unwrap();
    for k in 1..=3 {
        let c = cover_and_group(&d.graph, d.base_vertex, k).unwrap();
        // layer sizes of the cover match the core around the base
        let mut cover_layers = vec![0usize; k + 1];
        for w in &c.words {
            cover_layers[w.len()] += 1;
        }
        let mut core_layers = vec![0usize; k + 1];
        for v in t.vertices() {
            if t.ball.depth[v] <= k {
                core_layers[t.ball.depth[v]] += 1;
            }
        }
        assert_eq!(cover_layers, core_layers);
    }
}

#[test]
fn equalize_examples() {
    let g = DirectedGraph::from_positive(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap();
    // lengths (1,1,2): third loop subdivided once beforehand
    let s = graph_core::subdivide_edges(&g, &[(4, 2)]).unwrap();
    let words = vec![s.edge_image[0].clone(), s.edge_image[2].clone(), s.edge_image[4].clone()];
    let d = DualGraphData {
        lengths: words.iter().map(Vec::len).collect(),
        graph: s.graph,
        ambient: Ambient::Core,
        generator_words: words,
        domain: None,
        vertex_proj: vec![],
        base_vertex: 0,
        word_len: 0,
        elements_used: 0,
        heuristic: false,
    };
    assert_eq!(d.lengths, vec![1, 1, 2]);
    let (e, rep) = equalize_loop_lengths(&d, 5).unwrap();
    assert_eq!(e.lengths, vec![2, 2, 2]);
    assert_eq!(rep.steps, 2);
    let (same, rep0) = equalize_loop_lengths(&e, 5).unwrap();
    assert_eq!(rep0.steps, 0);
    assert_eq!(same.graph, e.graph);
    assert!(matches!(equalize_loop_lengths(&d, 1), Err(SchottkyError::BudgetExhausted { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn type_is_scale_invariant(a in -20i64..20, b in -20i64..20, c in -20i64..20, d in -20i64..20, k in 1i64..9) {
        let m = Mat2::from_ints(a, b, c, d);
        prop_assume!(a * d - b * c != 0);
        for l in [rat(k), rat(-k), BigRational::new(1.into(), k.into())] {
            prop_assert_eq!(hyperbolic_type(&m.scale(&l), 2).unwrap(), hyperbolic_type(&m, 2).unwrap());
        }
    }

    #[test]
    fn equalizing_keeps_homotopy_classes(extra in 0usize..3) {
        let d = dumbbell_quotient().clone();
        // lengthen the long loop first so the greedy pass has more work
        let e = d.generator_words[1][0];
        let s = graph_core::subdivide_edges(&d.graph, &[(d.graph.positive_of(e), extra + 1)]).unwrap();
        let words: Vec<_> = d.generator_words.iter().map(|w| s.lift_word(w)).collect();
        let d2 = DualGraphData { lengths: words.iter().map(Vec::len).collect(), graph: s.graph, generator_words: words, ..d };
        let (out, _) = equalize_loop_lengths(&d2, 16).unwrap();
        prop_assert_eq!(out.betti_number(), 2);
        let target = out.lengths[0];
        prop_assert!(out.lengths.iter().all(|&l| l == target));
        for w in &out.generator_words {
            prop_assert!(closed_and_admissible(&out.graph, w));
        }
    }
}
