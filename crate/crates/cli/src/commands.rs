use std::path::Path;

use bruhat_tits::{parse_rat, rat_string, Mat2, PadicContext};
use field_extension::{extend_edge_matrix, extend_graph, ExtensionParams};
use foam_graph::{build_foam_graph, foam_embeddings, foam_local_factor, mutually_orthogonal, parse_lambdas, FoamSpec};
use graph_core::{edge_matrices, Alphabet, EdgeId, TailConvention};
use operator_algebra::build_operators;
use schottky::{build_schottky_tree, delta_gamma_heuristic, equalize_loop_lengths, quotient_dual_graph, reduction_graph, QuotientOptions, SchottkyGroup};
use serde_json::{json, Value};
use shift_dynamics::{build_sft_with, cylinder_measure, filtration_data, shadow_measure};
use spectral_zeta::{
    dirac_spectrum, format_complex, verify_local_factor_theorem, EulerFactorSpec, EulerMode, FoamLambda, LocalFactorReport, Sign, Variant, ENGINE_TOL,
};

use crate::{checks, load_graph, matrix_csv, parse_grid, parse_matrix_csv, read_file, write_file, CliError, Command, EulerModeArg, Report, VariantArg};

/// Tolerance attached to exact (integer or rational) checks.
const EXACT: f64 = 0.0;

pub(crate) fn run(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Tree { p, f, radius, matrix } => tree(*p, *f, *radius, matrix.as_deref()),
        Command::Schottky {
            p,
            generators,
            word_bound,
            word_len,
            radius,
            level,
            tail_depth,
            tail_convention,
            quotient_word_len,
            equalize,
            budget,
            smooth,
            graph_out,
        } => {
            let opts = QuotientOptions { word_len: *quotient_word_len, tail_depth: *tail_depth, tail_convention: (*tail_convention).into() };
            let group = SchottkyGroup::new(PadicContext::prime(*p)?, generators.iter().map(|g| parse_matrix(g)).collect::<Result<_, _>>()?, *word_bound)?;
            schottky(&group, *word_len, *radius, *level, &opts, equalize.then_some(*budget), *smooth, graph_out.as_deref())
        }
        Command::Extend { e, f, matrix, graph, graph_out } => extend(*e, *f, matrix.as_deref(), graph.as_deref(), graph_out.as_deref()),
        Command::Sft { graph, nmax, q, alphabet } => sft(graph, *nmax, *q, (*alphabet).into()),
        Command::Measure { p, radius, len, word, marking } => measure(*p, *radius, *len, word.as_deref(), *marking),
        Command::Ck { graph, truncation, alphabet, q } => ck(graph, *truncation, (*alphabet).into(), *q),
        Command::Dirac { variant, ell, q, nmax } => dirac(*variant, *ell, *q, *nmax),
        Command::Euler { mode, q, g, ell, lambdas, s, s_grid } => {
            let grid = parse_grid(s, s_grid.as_deref())?;
            euler(*mode, *q, *g, *ell, lambdas.as_deref(), &grid)
        }
        Command::Foam { graph, lambdas, q, nmax, depth, valence, s, s_grid } => {
            let grid = parse_grid(s, s_grid.as_deref())?;
            foam(graph, lambdas, *q, *nmax, *depth, valence.unwrap_or(*q as usize + 1), &grid)
        }
        Command::Selftest { only } => selftest(only),
    }
}

fn exact(value: Value, pass: bool) -> Value {
    json!({ "value": value, "tolerance": EXACT, "pass": pass })
}

fn parse_matrix(s: &str) -> Result<Mat2, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Invalid(format!("matrix {s:?} needs four entries a,b,c,d")));
    }
    Ok(Mat2::new(parse_rat(parts[0])?, parse_rat(parts[1])?, parse_rat(parts[2])?, parse_rat(parts[3])?))
}

fn parse_word(s: &str) -> Result<Vec<EdgeId>, CliError> {
    s.split(',').map(str::trim).map(|x| x.parse().map_err(|_| CliError::Invalid(format!("edge id {x:?} is not a number")))).collect()
}

fn tree(p: u64, f: u32, radius: usize, matrix: Option<&str>) -> Result<Report, CliError> {
    let t = checks::tree_patch(p, f, radius)?;
    let geo = checks::tree_geometry(&t);
    let mut ok = geo.pass();
    let mut out = json!({
        "command": "tree",
        "p": p,
        "f": f,
        "q": geo.q,
        "radius": radius,
        "vertices": geo.vertices,
        "edges": geo.edges,
        "interior_vertices": geo.interior,
        "interior_valence": exact(json!(geo.q + 1), geo.bad_valence.is_empty()),
        "distance_vs_lattice": match geo.pairs_checked {
            Some(n) => json!({ "pairs": n, "mismatches": geo.distance_mismatches, "tolerance": EXACT, "pass": geo.distance_mismatches == 0 }),
            None => Value::Null,
        },
    });
    if let Some(m) = matrix {
        if f != 1 {
            return Err(CliError::Invalid("--matrix needs f = 1".into()));
        }
        let d = checks::displacement(&parse_matrix(m)?, &t, p)?;
        ok &= d.pass();
        out["displacement"] = json!({
            "hyperbolic": d.hyperbolic,
            "translation_length": d.translation_length,
            "min_displacement": d.min_displacement,
            "tolerance": EXACT,
            "pass": d.pass(),
        });
    }
    Ok(Report { json: out, csv: None, ok })
}

#[allow(clippy::too_many_arguments)]
fn schottky(
    group: &SchottkyGroup,
    word_len: usize,
    radius: usize,
    level: Option<usize>,
    opts: &QuotientOptions,
    equalize: Option<usize>,
    smooth: bool,
    graph_out: Option<&Path>,
) -> Result<Report, CliError> {
    let mut tree = build_schottky_tree(group, word_len, radius, None)?;
    if let Some(n) = level {
        tree = reduction_graph(&tree, n)?;
    }
    let mut d = quotient_dual_graph(group, &tree, opts)?;
    if smooth {
        d = delta_gamma_heuristic(&d);
    }
    let mut eq = Value::Null;
    if let Some(budget) = equalize {
        let (e, rep) = equalize_loop_lengths(&d, budget)?;
        eq = json!({ "target": rep.target, "steps": rep.steps, "split": rep.split });
        d = e;
    }
    let doc = d.document();
    if let Some(path) = graph_out {
        write_file(path, &doc.to_json())?;
    }
    let out = json!({
        "command": "schottky",
        "p": group.ctx.p,
        "genus": group.genus(),
        "translation_lengths": group.translation_lengths(),
        "ambient": format!("{:?}", d.ambient),
        "vertices": d.graph.vertex_count(),
        "positive_edges": d.graph.positive_count(),
        "betti_number": d.betti_number(),
        "sinks": d.graph.sinks(),
        "loop_lengths": d.lengths,
        "generator_words": d.generator_words,
        "base_vertex": d.base_vertex,
        "word_len": d.word_len,
        "elements_used": d.elements_used,
        "heuristic": d.heuristic,
        "equalize": eq,
        "graph": serde_json::to_value(&doc)?,
    });
    Ok(Report { json: out, csv: None, ok: true })
}

fn extend(e: usize, f: u32, matrix: Option<&Path>, graph: Option<&str>, graph_out: Option<&Path>) -> Result<Report, CliError> {
    let params = ExtensionParams::new(e, f)?;
    let mut out = json!({ "command": "extend", "e": e, "f": f });
    let mut ok = true;
    let ext = if let Some(path) = matrix {
        let a = parse_matrix_csv(&read_file(path)?)?;
        out["input_dim"] = json!(a.dim());
        extend_edge_matrix(&a, e)?
    } else {
        let g = load_graph(graph.unwrap_or_default())?;
        let a = edge_matrices(&g).0;
        let eg = extend_graph(&g, params)?;
        let direct = edge_matrices(&eg.graph).0;
        let m = extend_edge_matrix(&a, e)?;
        ok = direct == m;
        out["input_dim"] = json!(a.dim());
        out["matches_subdivided_graph"] = exact(json!(ok), ok);
        out["edge_image"] = json!(eg.edge_image);
        let doc = eg.graph.to_document();
        if let Some(path) = graph_out {
            write_file(path, &doc.to_json())?;
        }
        out["graph"] = serde_json::to_value(&doc)?;
        m
    };
    out["output_dim"] = json!(ext.dim());
    out["matrix"] = json!(ext.entries);
    Ok(Report { json: out, csv: Some(matrix_csv(&ext)?), ok })
}

fn sft(graph: &str, n_max: usize, q: u64, mode: Alphabet) -> Result<Report, CliError> {
    let g = load_graph(graph)?;
    let rows = checks::theta_table(&g, q, mode, n_max)?;
    let ok = rows.iter().all(|r| r.theta_ok() && r.rank_law());
    let mut csv = String::from("n,theta,theta_enumerated,rank_f,formula,kernel_dim,gr_dim\n");
    let mut table = Vec::new();
    for r in &rows {
        let x = &r.row;
        csv.push_str(&format!("{},{},{},{},{},{},{}\n", x.n, x.theta, r.enumerated, x.rank_f, x.formula, x.kernel_dim, x.gr_dim));
        table.push(json!({
            "n": x.n,
            "theta": exact(json!(x.theta), r.theta_ok()),
            "theta_enumerated": r.enumerated,
            "rank_f": exact(json!(x.rank_f), r.rank_law()),
            "formula": x.formula,
            "kernel_dim": x.kernel_dim,
            "gr_dim": x.gr_dim,
            "j_rank": x.j_rank,
        }));
    }
    let out = json!({
        "command": "sft",
        "alphabet": format!("{mode:?}").to_lowercase(),
        "q": q,
        "vertices": g.vertex_count(),
        "positive_edges": g.positive_count(),
        "sinks": g.sinks(),
        "rows": table,
    });
    Ok(Report { json: out, csv: Some(csv), ok })
}

fn measure(p: u64, radius: usize, len: usize, word: Option<&str>, marking: usize) -> Result<Report, CliError> {
    let t = checks::tree_patch(p, 1, radius)?;
    let m = checks::measure_invariance(&t, len)?;
    let shadow = shadow_measure(&t);
    let mut out = json!({
        "command": "measure",
        "p": p,
        "radius": radius,
        "max_window": len,
        "total_mass": rat_string(&shadow.total_mass()),
        "additivity_defects": exact(json!(m.additivity_defects), m.additivity_defects == 0),
        "windows": m.windows,
        "marking_failures": exact(json!(m.marking_failures), m.marking_failures == 0),
        "refinement_failures": exact(json!(m.refinement_failures), m.refinement_failures == 0),
    });
    if let Some(w) = word {
        let w = parse_word(w)?;
        out["cylinder"] = json!({ "word": w, "marking": marking, "mass": rat_string(&cylinder_measure(&shadow, &w, marking)?) });
    }
    Ok(Report { json: out, csv: None, ok: m.pass() })
}

/// Relations the report must satisfy; letterwise δ-commutation is reported only.
const CK_INFORMATIONAL: &[&str] = &["delta-commutation"];

fn ck(graph: &str, truncation: usize, mode: Alphabet, q: u64) -> Result<Report, CliError> {
    let g = load_graph(graph)?;
    let f = filtration_data(&build_sft_with(&g, q, mode)?, truncation)?;
    let r = build_operators(&f)?.check_relations();
    let mut checks = serde_json::Map::new();
    let mut ok = true;
    for c in &r.checks {
        let required = !CK_INFORMATIONAL.contains(&c.name);
        ok &= c.holds || !required;
        let witness = c.witness.as_ref().map(|w| json!({ "level": w.level, "letter": w.letter, "vertex": w.vertex, "cylinder": w.cylinder }));
        checks.insert(c.name.to_string(), json!({ "holds": c.holds, "instances": c.instances, "required": required, "witness": witness, "tolerance": EXACT }));
    }
    let out = json!({
        "command": "ck",
        "alphabet": format!("{mode:?}").to_lowercase(),
        "truncation": r.truncation,
        "clipped": r.clipped,
        "checks": checks,
    });
    Ok(Report { json: out, csv: None, ok })
}

fn dirac(variant: VariantArg, ell: usize, q: u64, n_max: usize) -> Result<Report, CliError> {
    let v = match variant {
        VariantArg::Plain => Variant::Plain,
        VariantArg::Scaled => Variant::Scaled,
    };
    let d = dirac_spectrum(v, ell, q, n_max)?;
    let mut csv = String::from("sign,n,eigenvalue\n");
    let levels: Vec<Value> = d
        .levels
        .iter()
        .map(|l| {
            let sign = if l.sign == Sign::Plus { "+" } else { "-" };
            csv.push_str(&format!("{sign},{},{}\n", l.n, l.eigenvalue));
            json!({ "sign": sign, "n": l.n, "eigenvalue": l.eigenvalue })
        })
        .collect();
    let spacing = d.spacing_is_constant();
    let out = json!({
        "command": "dirac",
        "variant": format!("{v:?}").to_lowercase(),
        "l": ell,
        "q": q,
        "unit": d.unit(),
        "levels": levels,
        "constant_spacing": { "value": spacing, "tolerance": ENGINE_TOL, "pass": spacing },
    });
    Ok(Report { json: out, csv: Some(csv), ok: spacing })
}

fn factor_rows(r: &LocalFactorReport) -> (Vec<Value>, String) {
    let mut csv = String::from("s,det,closed_form,rel_error,pass\n");
    let opt = |z: Option<spectral_zeta::C>| z.map(format_complex);
    let rows = r
        .rows
        .iter()
        .map(|row| {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                format_complex(row.s),
                opt(row.determinant).unwrap_or_default(),
                opt(row.closed_form).unwrap_or_default(),
                row.rel_error.map(|x| x.to_string()).unwrap_or_default(),
                row.pass
            ));
            json!({
                "s": format_complex(row.s),
                "determinant": opt(row.determinant),
                "closed_form": opt(row.closed_form),
                "rel_error": row.rel_error,
                "tolerance": r.tolerance,
                "pass": row.pass,
                "note": row.note,
            })
        })
        .collect();
    (rows, csv)
}

fn euler(mode: EulerModeArg, q: u64, g: Option<u32>, ell: usize, lambdas: Option<&Path>, grid: &[spectral_zeta::C]) -> Result<Report, CliError> {
    let spec = match mode {
        EulerModeArg::Split => {
            let g = g.ok_or_else(|| CliError::Invalid("split mode needs --g".into()))?;
            EulerFactorSpec { q, mode: EulerMode::Split { g } }
        }
        EulerModeArg::Foam => {
            let path = lambdas.ok_or_else(|| CliError::Invalid("foam mode needs --lambdas".into()))?;
            let ls = parse_lambdas(&read_file(path)?)?;
            EulerFactorSpec { q, mode: EulerMode::Foam(ls.iter().map(|l| FoamLambda { alpha: l.alpha, d: l.d() as u32 }).collect()) }
        }
    };
    let report = verify_local_factor_theorem(&spec, ell, grid)?;
    let (rows, csv) = factor_rows(&report);
    let out = json!({
        "command": "euler",
        "mode": if mode == EulerModeArg::Split { "split" } else { "foam" },
        "q": q,
        "g": g,
        "l": ell,
        "tolerance": report.tolerance,
        "max_rel_error": report.max_error(),
        "rows": rows,
    });
    Ok(Report { json: out, csv: Some(csv), ok: report.all_pass() })
}

fn foam(graph: &str, lambdas: &Path, q: u64, n_max: usize, depth: usize, valence: usize, grid: &[spectral_zeta::C]) -> Result<Report, CliError> {
    let spec = FoamSpec::new(load_graph(graph)?, parse_lambdas(&read_file(lambdas)?)?)?;
    let ell = spec.loop_length()?;
    let fg = build_foam_graph(&spec, depth, TailConvention::TerminalLoop)?.saturated(valence);
    let f = filtration_data(&build_sft_with(&fg.graph, q, Alphabet::Walks)?, n_max * ell)?;
    let embs = foam_embeddings(&spec, &fg, &f, n_max)?;
    let orthogonal = mutually_orthogonal(&f, &embs);
    let report = foam_local_factor(&spec, &embs, q, grid)?;
    let (rows, csv) = factor_rows(&report);
    let per_lambda: Vec<Value> = embs
        .iter()
        .map(|e| {
            let ok = e.embedding.intersections.iter().all(|&k| k == e.d);
            json!({ "alpha": format_complex(e.alpha), "d": e.d, "dims": exact(json!(e.embedding.intersections), ok), "gram_rank": e.embedding.gram_rank })
        })
        .collect();
    let out = json!({
        "command": "foam",
        "q": q,
        "l": ell,
        "nmax": n_max,
        "tail_depth": depth,
        "valence": valence,
        "vertices": fg.graph.vertex_count(),
        "positive_edges": fg.graph.positive_count(),
        "eigenvalues": per_lambda,
        "orthogonal": exact(json!(orthogonal), orthogonal),
        "tolerance": report.tolerance,
        "max_rel_error": report.max_error(),
        "rows": rows,
    });
    Ok(Report { json: out, csv: Some(csv), ok: orthogonal && report.all_pass() })
}

fn selftest(only: &[u8]) -> Result<Report, CliError> {
    let results: Vec<_> = if only.is_empty() {
        crate::acceptance::run_all()
    } else {
        only.iter().map(|&id| crate::acceptance::criterion(id).ok_or_else(|| CliError::Invalid(format!("no criterion {id}")))).collect::<Result<_, _>>()?
    };
    let mut csv = String::from("id,name,pass\n");
    for c in &results {
        csv.push_str(&format!("{},{},{}\n", c.id, c.name, c.pass));
    }
    let ok = results.iter().all(|c| c.pass);
    let out = json!({
        "command": "selftest",
        "criteria": results.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        "passed": results.iter().filter(|c| c.pass).count(),
        "total": results.len(),
    });
    Ok(Report { json: out, csv: Some(csv), ok })
}
