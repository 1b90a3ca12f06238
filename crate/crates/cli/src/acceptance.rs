//! The ten acceptance criteria, each evaluated at its stated tolerance.

use std::f64::consts::PI;

use bruhat_tits::Mat2;
use field_extension::{extend_edge_matrix, extend_graph, ExtensionParams};
use foam_graph::{build_foam_graph, foam_embeddings, foam_local_factor, mutually_orthogonal, FoamSpec, LambdaData};
use graph_core::{edge_matrices, Alphabet, DirectedGraph, TailConvention};
use operator_algebra::{build_operators, embed_cohomology};
use serde_json::{json, Value};
use shift_dynamics::{build_sft, build_sft_with, filtration_data};
use spectral_zeta::{
    absolute_determinant, alpha_of, dirac_spectrum, regularized_determinant, verify_local_factor_theorem, EulerFactorSpec, EulerMode, FoamLambda, PmTraces,
    Variant, C, THEOREM_TOL,
};

use crate::{checks, fixtures, matrix_from_rows, CliError};

/// Criteria that cannot pass with a faithful implementation; see the README.
pub const KNOWN_UNATTAINABLE: &[u8] = &[5];

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!("criterion {}: {}: {} ({})", self.id, if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }

    pub fn to_json(&self) -> Value {
        json!({ "id": self.id, "name": self.name, "pass": self.pass, "detail": self.detail })
    }
}

type Check = fn() -> Result<(bool, String), CliError>;

const CRITERIA: [(u8, &str, Check); 10] = [
    (1, "edge-matrix extension", edge_matrix_extension),
    (2, "split local factor", split_local_factor),
    (3, "foam local factor", foam_local_factor_check),
    (4, "filtration rank law", filtration_rank_law),
    (5, "Cuntz-Krieger relations", cuntz_krieger),
    (6, "embedding traces", embedding_traces),
    (7, "measure invariance", measure_invariance),
    (8, "field-extension intertwining", field_extension_intertwining),
    (9, "tree geometry", tree_geometry),
    (10, "negative control", negative_control),
];

pub fn criterion(id: u8) -> Option<Criterion> {
    let &(id, name, f) = CRITERIA.iter().find(|c| c.0 == id)?;
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Some(Criterion { id, name, pass, detail })
}

pub fn run_all() -> Vec<Criterion> {
    CRITERIA.iter().filter_map(|c| criterion(c.0)).collect()
}

/// The s-grid shared by criteria 2 and 3.
pub fn s_grid() -> Vec<C> {
    vec![C::new(0.5, 0.0), C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(3.0, 0.0), C::new(1.0, 1.0), C::new(2.0, -0.5)]
}

fn edge_matrix_extension() -> Result<(bool, String), CliError> {
    let a = matrix_from_rows(vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]])?;
    let expected = vec![
        vec![0, 1, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0],
        vec![1, 0, 0, 0, 1, 0],
        vec![0, 0, 0, 0, 0, 1],
        vec![0, 0, 1, 0, 0, 0],
    ];
    let ext = extend_edge_matrix(&a, 2)?;
    let via_graph = edge_matrices(&extend_graph(&fixtures::theta(), ExtensionParams::new(2, 1)?)?.graph).0;
    let pass = ext.entries == expected && via_graph.entries == expected;
    Ok((pass, format!("6x6 entrywise {}, subdivided graph agrees: {}", ext.entries == expected, via_graph.entries == expected)))
}

fn split_local_factor() -> Result<(bool, String), CliError> {
    let (mut rows, mut failed, mut worst) = (0, 0, 0f64);
    for q in [2u64, 3, 5] {
        for g in [1u32, 2, 3] {
            for ell in [1usize, 2] {
                let r = verify_local_factor_theorem(&EulerFactorSpec { q, mode: EulerMode::Split { g } }, ell, &s_grid())?;
                for row in &r.rows {
                    rows += 1;
                    worst = worst.max(row.rel_error.unwrap_or(f64::INFINITY));
                    if !row.pass {
                        failed += 1;
                    }
                }
            }
        }
    }
    Ok((failed == 0, format!("{rows} grid points, {failed} failed, max relative error {worst:.2e} < {THEOREM_TOL:e}")))
}

fn lambda(alpha: C, loops: Vec<Vec<usize>>, d_zero: usize, vertex: Option<usize>) -> LambdaData {
    LambdaData { alpha, d_gamma: loops.len(), d_zero, vertex, loops }
}

fn foam_local_factor_check() -> Result<(bool, String), CliError> {
    let eigen = [C::new(1.0, 0.0), C::new(-1.0, 0.0), C::from_polar(2f64.sqrt(), PI / 4.0)];
    let spec = FoamSpec::new(
        fixtures::barbell(),
        vec![
            lambda(alpha_of(eigen[0], 2), vec![vec![0]], 0, None),
            lambda(alpha_of(eigen[1], 2), vec![vec![2]], 1, Some(1)),
            lambda(alpha_of(eigen[2], 2), vec![], 1, Some(0)),
        ],
    )?;
    let fg = build_foam_graph(&spec, 4, TailConvention::TerminalLoop)?.saturated(3);
    let f = filtration_data(&build_sft(&fg.graph, 2)?, 2)?;
    let embs = foam_embeddings(&spec, &fg, &f, 2)?;
    let dims_ok = embs.iter().all(|e| e.embedding.intersections.iter().all(|&k| k == e.d));
    let orthogonal = mutually_orthogonal(&f, &embs);
    let report = foam_local_factor(&spec, &embs, 2, &s_grid())?;
    let direct = verify_local_factor_theorem(
        &EulerFactorSpec { q: 2, mode: EulerMode::Foam(spec.lambdas.iter().map(|l| FoamLambda { alpha: l.alpha, d: l.d() as u32 }).collect()) },
        1,
        &s_grid(),
    )?;
    // closed form written out by hand for the three eigenvalues
    let mut oracle_err = 0f64;
    for row in &report.rows {
        let x = C::from(0.5).powc(row.s);
        let expect = (1.0 - eigen[0] * x) * (1.0 - eigen[1] * x).powi(2) * (1.0 - eigen[2] * x);
        oracle_err = oracle_err.max(row.determinant.map_or(f64::INFINITY, |d| (d - expect).norm() / expect.norm()));
    }
    let rows_pass = report.rows.iter().all(|r| r.pass) && direct.rows.iter().all(|r| r.pass);
    let pass = dims_ok && orthogonal && rows_pass && oracle_err < THEOREM_TOL;
    Ok((
        pass,
        format!(
            "dims per eigenvalue {:?}, orthogonal {orthogonal}, max relative error {:.2e} vs hand-written product {:.2e}",
            embs.iter().map(|e| e.embedding.intersections.clone()).collect::<Vec<_>>(),
            report.max_error().max(direct.max_error()),
            oracle_err
        ),
    ))
}

fn rank_law_graphs() -> Result<Vec<(&'static str, DirectedGraph)>, CliError> {
    Ok(vec![
        ("theta", fixtures::theta()),
        ("k4", fixtures::k4()),
        ("genus-1 reduction", fixtures::genus_one_reduction()?.graph),
        ("genus-2 quotient", fixtures::genus_two_quotient()?.graph),
        ("genus-2 equalized, saturated", fixtures::genus_two_equalized()?.1),
    ])
}

fn filtration_rank_law() -> Result<(bool, String), CliError> {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, g) in rank_law_graphs()? {
        let sink_free = g.sinks().is_empty();
        let rows = checks::theta_table(&g, 2, Alphabet::Walks, 5)?;
        let ok = sink_free && rows.len() == 5 && rows.iter().all(|r| r.theta_ok() && r.rank_law());
        pass &= ok;
        parts.push(format!("{name} θ={:?} {}", rows.iter().map(|r| r.row.theta).collect::<Vec<_>>(), if ok { "ok" } else { "MISMATCH" }));
    }
    Ok((pass, parts.join("; ")))
}

const CK_REQUIRED: [&str; 5] = ["vertex-projections", "range-relation", "source-relation", "edge-matrix-relation", "shift-commutation"];

fn cuntz_krieger() -> Result<(bool, String), CliError> {
    let graphs = vec![
        ("loop", fixtures::single_loop()),
        ("theta", fixtures::theta()),
        ("dumbbell", fixtures::dumbbell()),
        ("k4", fixtures::k4()),
        ("genus-1 reduction", fixtures::genus_one_reduction()?.graph),
        ("genus-2 quotient", fixtures::genus_two_quotient()?.graph),
    ];
    let (mut relations_ok, mut delta_ok) = (true, true);
    let mut delta_fail = Vec::new();
    let mut clipped = 0;
    for (name, g) in &graphs {
        let f = filtration_data(&build_sft_with(g, 2, Alphabet::Paths)?, 4)?;
        let r = build_operators(&f)?.check_relations();
        clipped += r.clipped;
        relations_ok &= CK_REQUIRED.iter().all(|n| r.get(n).is_some_and(|c| c.holds));
        if let Some(c) = r.get("delta-commutation").filter(|c| !c.holds) {
            delta_ok = false;
            let w = c.witness.as_ref().map(|w| format!(" at level {} letter {} cylinder {:?}", w.level, w.letter.map_or("-".to_string(), |l| l.to_string()), w.cylinder)).unwrap_or_default();
            delta_fail.push(format!("{name}{w}"));
        }
    }
    let detail = format!(
        "q·s†s = P_r(w) and P_v = Σ q·s s† exact on {} graphs at N=4: {relations_ok} ({clipped} clipped pushes excluded); letterwise s_w δ = δ s_w fails on {} of them [{}]",
        graphs.len(),
        delta_fail.len(),
        delta_fail.join("; ")
    );
    Ok((relations_ok && delta_ok, detail))
}

fn embedding_traces() -> Result<(bool, String), CliError> {
    let (e, sat) = fixtures::genus_two_equalized()?;
    let f = filtration_data(&build_sft(&sat, 2)?, 2 * e.lengths[0])?;
    let emb = embed_cohomology(&f, &e.generator_words, 2)?;
    let genus = e.generator_words.len();
    let pass = genus == 2 && emb.gram_rank == 2 * genus && emb.intersections == vec![genus; 2];
    Ok((pass, format!("loop lengths {:?}, dim(Gr ∩ V) = {:?}, Gram rank {} of {}", e.lengths, emb.intersections, emb.gram_rank, 2 * genus)))
}

fn measure_invariance() -> Result<(bool, String), CliError> {
    let mut parts = Vec::new();
    let mut pass = true;
    for (p, r) in [(2u64, 5usize), (3, 4)] {
        let m = checks::measure_invariance(&checks::tree_patch(p, 1, r)?, 4)?;
        pass &= m.pass();
        parts.push(format!(
            "p={p} r={r}: {} windows, {} marking and {} refinement failures, {} additivity defects",
            m.windows, m.marking_failures, m.refinement_failures, m.additivity_defects
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn field_extension_intertwining() -> Result<(bool, String), CliError> {
    let i = checks::intertwining(&fixtures::theta(), 2, 5, 3)?;
    let rows: Vec<bool> = i.rows.iter().map(|r| r.intertwines).collect();
    Ok((i.pass(), format!("J∘T = T²∘J on {} words ({} failures); r∘δ₂ = δ∘r for j=1..3: {rows:?}", i.words, i.failures)))
}

fn tree_geometry() -> Result<(bool, String), CliError> {
    let t = checks::tree_patch(2, 1, 3)?;
    let geo = checks::tree_geometry(&t);
    let d = checks::displacement(&Mat2::from_ints(2, 0, 0, 1), &t, 2)?;
    let typed = d.hyperbolic && d.translation_length == 1;
    Ok((
        geo.pass() && d.pass() && typed,
        format!(
            "{} interior pairs, {} distance mismatches, {} bad valences; diag(2,1): hyperbolic {} length {}, brute-force displacement {}",
            geo.pairs_checked.unwrap_or(0),
            geo.distance_mismatches,
            geo.bad_valence.len(),
            d.hyperbolic,
            d.translation_length,
            d.min_displacement
        ),
    ))
}

fn negative_control() -> Result<(bool, String), CliError> {
    let d = dirac_spectrum(Variant::Scaled, 1, 2, 1)?;
    let s = C::new(2.0, 0.0);
    let closed = 1.0 - C::from(0.5).powc(s);
    let unrotated = absolute_determinant(&d, &PmTraces::constant(1.0), s)?;
    let rotated = regularized_determinant(&d, &PmTraces::constant(1.0), s)?;
    let gap = (unrotated - closed).norm();
    let rotated_err = (rotated - closed).norm();
    Ok((
        gap > 1e-3 && rotated_err < THEOREM_TOL,
        format!("|D| gives {unrotated:.6}, off by {gap:.3e} > 1e-3; iD gives {rotated:.6}, off by {rotated_err:.1e}"),
    ))
}
