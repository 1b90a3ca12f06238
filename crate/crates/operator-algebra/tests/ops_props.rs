use graph_core::{saturate_valence, Alphabet, DirectedGraph, EdgeId, TailConvention};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use operator_algebra::*;
use proptest::prelude::*;
use shift_dynamics::{build_sft_with, filtration_data, FiltrationSpace, SparseMatrix, Q};

fn space(g: &DirectedGraph, mode: Alphabet, n: usize) -> FiltrationSpace {
    filtration_data(&build_sft_with(g, 2, mode).unwrap(), n).unwrap()
}

fn theta_graph() -> DirectedGraph {
    DirectedGraph::from_positive(2, &[(1, 0), (0, 1), (1, 0)]).unwrap()
}

fn dumbbell() -> DirectedGraph {
    DirectedGraph::from_positive(2, &[(0, 0), (1, 1), (0, 1), (1, 0)]).unwrap()
}

fn holds(r: &CkReport, name: &str) -> bool {
    r.get(name).unwrap().holds
}

#[test]
fn push_moves_basis_cylinders() {
    let f = space(&theta_graph(), Alphabet::Paths, 3);
    let o = build_operators(&f).unwrap();
    for n in 1..=3 {
        for w in 0..o.alphabet_size() {
            let s = o.s(n, w);
            for (c, v) in f.words(n - 1).iter().enumerate() {
                let mut wv = vec![w];
                wv.extend(v);
                let col: Vec<Q> = (0..f.dim(n)).map(|r| s.get(r, c)).collect();
                match f.position(n, &wv) {
                    Some(r) => assert!(col.iter().enumerate().all(|(i, x)| *x == if i == r { Q::one() } else { Q::zero() })),
                    None => assert!(col.iter().all(Zero::is_zero)),
                }
            }
        }
    }
}

#[test]
fn relations_on_path_shifts() {
    let one_loop = DirectedGraph::from_positive(1, &[(0, 0)]).unwrap();
    for g in [one_loop, theta_graph(), dumbbell()] {
        let o = build_operators(&space(&g, Alphabet::Paths, 4)).unwrap();
        let r = o.check_relations();
        for name in ["vertex-projections", "range-relation", "source-relation", "edge-matrix-relation", "shift-commutation"] {
            assert!(holds(&r, name), "{name}");
        }
        assert!(r.clipped > 0);
    }
}

#[test]
fn single_loop_commutes_with_delta() {
    let g = DirectedGraph::from_positive(1, &[(0, 0)]).unwrap();
    let r = build_operators(&space(&g, Alphabet::Paths, 4)).unwrap().check_relations();
    assert!(r.all_hold());
    assert_eq!(r.clipped, 1);
}

#[test]
fn letterwise_delta_commutation_fails_with_witness() {
    let r = build_operators(&space(&theta_graph(), Alphabet::Paths, 4)).unwrap().check_relations();
    let c = r.get("delta-commutation").unwrap();
    assert!(!c.holds);
    let w = c.witness.as_ref().unwrap();
    assert!(w.letter.is_some());
    assert!(!w.cylinder.is_empty());
}

#[test]
fn backtracking_breaks_range_relation() {
    let r = build_operators(&space(&theta_graph(), Alphabet::Walks, 3)).unwrap().check_relations();
    assert!(!holds(&r, "range-relation"));
    assert!(holds(&r, "source-relation"));
    assert!(holds(&r, "edge-matrix-relation"));
}

#[test]
fn corrupted_transition_is_caught() {
    let f = space(&theta_graph(), Alphabet::Paths, 3);
    let k = f.shift.alphabet_size();
    let mut a: Vec<Vec<u8>> = (0..k).map(|i| (0..k).map(|j| u8::from(f.shift.admissible(i, j))).collect()).collect();
    let (i, j) = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).find(|&(i, j)| a[i][j] == 0).unwrap();
    a[i][j] = 1;
    let r = build_operators_with(&f, &a).unwrap().check_relations();
    let c = r.get("edge-matrix-relation").unwrap();
    assert!(!c.holds);
    assert!(c.witness.is_some());
}

#[test]
fn rejects_bad_inputs() {
    let f = space(&theta_graph(), Alphabet::Paths, 1);
    assert!(matches!(build_operators(&f), Err(OperatorError::Truncation { .. })));
    let f = space(&theta_graph(), Alphabet::Paths, 2);
    assert!(matches!(build_operators_with(&f, &[vec![1]]), Err(OperatorError::Shape { .. })));
}

#[test]
fn toeplitz_counts() {
    let g = DirectedGraph::from_positive(2, &[(0, 0), (0, 0), (0, 1)]).unwrap();
    let d = toeplitz_defect(&g, 4);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].0, 1);
    // a path of length k ≥ 1 is a choice of loop for each of its first k−1 steps
    let expect: Vec<BigUint> = [1u32, 1, 2, 4, 8].iter().map(|&x| x.into()).collect();
    assert_eq!(d[0].1, expect);
    assert!(toeplitz_defect(&theta_graph(), 4).is_empty());
}

#[test]
fn af_core_is_a_cylinder_projection() {
    let f = space(&dumbbell(), Alphabet::Paths, 4);
    let o = build_operators(&f).unwrap();
    let loops: [&[EdgeId]; 2] = [&[0], &[2]];
    for n in 1..=3 {
        let qs: Vec<AfCoreElement> = loops.iter().map(|w| af_core_element(&o, w, n).unwrap()).collect();
        for q in &qs {
            assert!(q.is_projection());
            let diag = SparseMatrix::diagonal(&f.cylinder_of_edges(4, &q.certificate.0).unwrap());
            assert_eq!(q.matrix, diag);
            assert_eq!(q.certificate.0.len(), q.certificate.1.len());
            let kappa: Q = f.shift.encode(&q.certificate.0).unwrap().iter().map(|&w| f.shift.kappa(w).recip()).product();
            assert_eq!(q.scalar, kappa);
        }
        assert!((&qs[0].matrix * &qs[1].matrix).is_zero());
        for w in loops {
            assert_eq!(af_trace(&o, w, n).unwrap(), Q::one());
        }
    }
    assert!(matches!(af_core_element(&o, &[0], 5), Err(OperatorError::Truncation { .. })));
}

#[test]
fn genus_two_embedding() {
    let g = DirectedGraph::from_positive(2, &[(0, 0), (1, 1), (0, 1)]).unwrap();
    let f = space(&g, Alphabet::Walks, 3);
    let e = embed_cohomology(&f, &[vec![0], vec![2]], 3).unwrap();
    assert_eq!(e.gram_rank, 6);
    assert_eq!(e.dimension(), 6);
    assert_eq!(e.intersections, vec![2, 2, 2]);
    let two = Q::from_integer(2.into());
    assert!(e.traces.iter().all(|t| *t == two));
    for (n, ps) in e.phi.iter().enumerate() {
        assert!(ps.iter().all(|p| f.in_gr(n + 1, p)));
    }
    let pi = e.projection_matrix(&f);
    assert_eq!(&pi * &pi, pi);
    assert_eq!(pi.trace(), Q::from_integer(6.into()));
}

#[test]
fn two_cycle_embedding_after_saturation() {
    let bare = DirectedGraph::from_positive(2, &[(0, 1), (1, 0)]).unwrap();
    let f = space(&bare, Alphabet::Walks, 2);
    assert_eq!(embed_cohomology(&f, &[vec![0, 2]], 1).unwrap_err(), OperatorError::ZeroImage { loop_index: 0, n: 1 });
    let g = saturate_valence(&bare, 3, 1, TailConvention::TerminalLoop);
    let f = space(&g, Alphabet::Walks, 4);
    let e = embed_cohomology(&f, &[vec![0, 2]], 2).unwrap();
    assert_eq!(e.loop_len, 2);
    assert_eq!(e.gram_rank, 2);
    assert_eq!(e.intersections, vec![1, 1]);
}

#[test]
fn embedding_errors() {
    let f = space(&dumbbell(), Alphabet::Walks, 2);
    assert_eq!(embed_cohomology(&f, &[], 1).unwrap_err(), OperatorError::NoLoops);
    assert!(matches!(embed_cohomology(&f, &[vec![0], vec![4, 6]], 1), Err(OperatorError::UnequalLengths(_))));
    assert!(matches!(embed_cohomology(&f, &[vec![0]], 3), Err(OperatorError::Truncation { .. })));
}

fn path_graph() -> impl Strategy<Value = DirectedGraph> {
    (2usize..4, prop::collection::vec((0usize..4, 0usize..4), 0..3)).prop_map(|(n, extra)| {
        let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        pairs.extend(extra.into_iter().map(|(a, b)| (a % n, b % n)));
        DirectedGraph::from_positive(n, &pairs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ck_relations_hold_on_path_shifts(g in path_graph()) {
        let r = build_operators(&space(&g, Alphabet::Paths, 3)).unwrap().check_relations();
        for name in ["vertex-projections", "range-relation", "source-relation", "edge-matrix-relation", "shift-commutation"] {
            prop_assert!(holds(&r, name), "{}", name);
        }
    }
}
