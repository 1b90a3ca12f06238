//! Exact checks used both by subcommands and by the acceptance suite.

use bruhat_tits::{build_tree_patch, lattice_distance, Mat2, PadicContext, TreePatch};
use field_extension::{extend_graph, extension_patch, filtration_restriction_ranks, shift_word, walk_embedding_j, ExtensionParams, RestrictionRow};
use graph_core::{enumerate_walks, Alphabet, DirectedGraph, DEFAULT_WALK_CAP};
use num_rational::BigRational;
use schottky::hyperbolic_type;
use shift_dynamics::{build_sft_with, cylinder_measure, filtration_data, shadow_measure, FiltrationRow, ShadowMeasure};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct TreeGeometry {
    pub q: u64,
    pub vertices: usize,
    pub edges: usize,
    pub interior: usize,
    pub bad_valence: Vec<usize>,
    /// `None` for the unlabelled `f > 1` model.
    pub pairs_checked: Option<usize>,
    pub distance_mismatches: usize,
}

impl TreeGeometry {
    pub fn pass(&self) -> bool {
        self.bad_valence.is_empty() && self.distance_mismatches == 0
    }
}

pub fn tree_patch(p: u64, f: u32, radius: usize) -> Result<TreePatch, CliError> {
    if f == 1 {
        let ctx = PadicContext::new(p, 1, (radius as u32).max(64))?;
        Ok(build_tree_patch(&ctx, None, radius)?)
    } else {
        Ok(extension_patch(p, ExtensionParams::new(1, f)?, radius)?)
    }
}

/// Interior valence `q+1`, and graph distance against lattice distance on interior pairs.
pub fn tree_geometry(t: &TreePatch) -> TreeGeometry {
    let n = t.vertex_count();
    let interior: Vec<usize> = (0..n).filter(|&v| t.is_interior(v)).collect();
    let bad_valence = interior.iter().copied().filter(|&v| t.graph.degree(v) as u64 != t.q + 1).collect();
    let (mut pairs, mut mismatches) = (0, 0);
    if !t.labels.is_empty() {
        for &a in &interior {
            let dist = t.graph.distances_from(a);
            for &b in &interior {
                pairs += 1;
                if dist[b] != Some(lattice_distance(&t.labels[a], &t.labels[b]) as usize) {
                    mismatches += 1;
                }
            }
        }
    }
    TreeGeometry {
        q: t.q,
        vertices: n,
        edges: t.graph.positive_count(),
        interior: interior.len(),
        bad_valence,
        pairs_checked: (!t.labels.is_empty()).then_some(pairs),
        distance_mismatches: mismatches,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Displacement {
    pub hyperbolic: bool,
    pub translation_length: u64,
    /// Smallest `d(x, γx)` over the patch.
    pub min_displacement: u64,
}

impl Displacement {
    pub fn pass(&self) -> bool {
        self.hyperbolic == (self.min_displacement > 0) && (!self.hyperbolic || self.min_displacement == self.translation_length)
    }
}

pub fn displacement(m: &Mat2, t: &TreePatch, p: u64) -> Result<Displacement, CliError> {
    let h = hyperbolic_type(m, p)?;
    let mut min = u64::MAX;
    for l in &t.labels {
        min = min.min(lattice_distance(l, &l.act(m)?));
    }
    Ok(Displacement { hyperbolic: h.hyperbolic, translation_length: h.translation_length, min_displacement: min })
}

#[derive(Debug, Clone, Default)]
pub struct MeasureChecks {
    pub additivity_defects: usize,
    pub windows: usize,
    pub marking_failures: usize,
    pub refinement_failures: usize,
}

impl MeasureChecks {
    pub fn pass(&self) -> bool {
        self.additivity_defects == 0 && self.marking_failures == 0 && self.refinement_failures == 0 && self.windows > 0
    }
}

fn deep_windows(m: &ShadowMeasure, radius: usize, len: usize) -> Result<Vec<Vec<usize>>, CliError> {
    let deep = |w: usize| m.depth[m.graph.src(w)] + 2 > radius || m.depth[m.graph.rng(w)] + 2 > radius;
    Ok(enumerate_walks(&m.graph, len, Alphabet::Walks, DEFAULT_WALK_CAP)?
        .into_iter()
        .map(|w| w.edges)
        .filter(|w| !w.iter().any(|&e| deep(e)))
        .collect())
}

/// T-invariance of two-sided cylinders on windows of length `≤ max_len` kept two steps
/// inside the patch: marking independence plus left and right refinement.
pub fn measure_invariance(t: &TreePatch, max_len: usize) -> Result<MeasureChecks, CliError> {
    let m = shadow_measure(t);
    let mut out = MeasureChecks { additivity_defects: m.additivity_defects().len(), ..Default::default() };
    for len in 1..=max_len {
        for w in deep_windows(&m, t.radius, len)? {
            out.windows += 1;
            let base = cylinder_measure(&m, &w, 0)?;
            for k in 1..len {
                if cylinder_measure(&m, &w, k)? != base {
                    out.marking_failures += 1;
                }
            }
            let mut right = BigRational::from_integer(0.into());
            for a in m.graph.successors(w[len - 1], Alphabet::Walks) {
                let mut x = w.clone();
                x.push(a);
                right += cylinder_measure(&m, &x, 0)?;
            }
            let mut left = BigRational::from_integer(0.into());
            for b in m.graph.successors(m.graph.invol(w[0]), Alphabet::Walks) {
                let mut x = vec![m.graph.invol(b)];
                x.extend_from_slice(&w);
                left += cylinder_measure(&m, &x, 1)?;
            }
            if right != base || left != base {
                out.refinement_failures += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ThetaRow {
    pub row: FiltrationRow,
    /// Words of `n+1` letters counted by enumeration.
    pub enumerated: usize,
}

impl ThetaRow {
    pub fn theta_ok(&self) -> bool {
        self.row.theta == self.enumerated
    }

    pub fn rank_law(&self) -> bool {
        self.row.rank_f as i64 == self.row.formula
    }
}

pub fn theta_table(g: &DirectedGraph, q: u64, mode: Alphabet, n_max: usize) -> Result<Vec<ThetaRow>, CliError> {
    let f = filtration_data(&build_sft_with(g, q, mode)?, n_max)?;
    f.report()
        .into_iter()
        .map(|row| {
            let enumerated = enumerate_walks(g, row.n + 1, mode, DEFAULT_WALK_CAP)?.len();
            Ok(ThetaRow { row, enumerated })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Intertwining {
    pub words: usize,
    pub failures: usize,
    pub rows: Vec<RestrictionRow>,
}

impl Intertwining {
    pub fn pass(&self) -> bool {
        self.words > 0 && self.failures == 0 && self.rows.iter().all(|r| r.intertwines)
    }
}

/// `J∘T = T^e∘J` on every admissible word of length `≤ max_len`, and `r∘δ_e = δ∘r` for `j ≤ j_max`.
pub fn intertwining(g: &DirectedGraph, e: usize, max_len: usize, j_max: usize) -> Result<Intertwining, CliError> {
    let params = ExtensionParams::new(e, 1)?;
    let ext = extend_graph(g, params)?;
    let (mut words, mut failures) = (0, 0);
    for n in 1..=max_len {
        for w in enumerate_walks(g, n, Alphabet::Walks, DEFAULT_WALK_CAP)? {
            words += 1;
            let jw = walk_embedding_j(g, &ext, &w.edges)?;
            let tail = shift_word(&w.edges, 1).unwrap_or(&[]);
            let ok = if tail.is_empty() {
                shift_word(&jw, e) == Some(&[][..])
            } else {
                Some(walk_embedding_j(g, &ext, tail)?.as_slice()) == shift_word(&jw, e)
            };
            if !ok || !ext.graph.is_admissible_word(&jw, Alphabet::Walks) {
                failures += 1;
            }
        }
    }
    let rows = filtration_restriction_ranks(g, 2, params, j_max)?;
    Ok(Intertwining { words, failures, rows })
}
