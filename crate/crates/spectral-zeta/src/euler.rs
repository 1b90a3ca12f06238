use std::f64::consts::PI;

use crate::{dirac_spectrum, regularized_determinant, PmTraces, Variant, ZetaError, C, THEOREM_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct FoamLambda {
    /// `q^α = λ`.
    pub alpha: C,
    pub d: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EulerMode {
    Split { g: u32 },
    Foam(Vec<FoamLambda>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerFactorSpec {
    pub q: u64,
    pub mode: EulerMode,
}

impl EulerFactorSpec {
    /// Split data as the foam list with the single eigenvalue 1.
    pub fn lambdas(&self) -> Vec<FoamLambda> {
        match &self.mode {
            EulerMode::Split { g } => vec![FoamLambda { alpha: C::new(0.0, 0.0), d: *g }],
            EulerMode::Foam(ls) => ls.clone(),
        }
    }
}

/// Principal `α` with `q^α = λ`.
pub fn alpha_of(lambda: C, q: u64) -> C {
    lambda.ln() / (q as f64).ln()
}

/// `∏_λ (1 − λ q^{−s})^{−d_λ}`.
pub fn euler_factor(spec: &EulerFactorSpec, s: C) -> Result<C, ZetaError> {
    let lq = (spec.q as f64).ln();
    let mut out = C::new(1.0, 0.0);
    for l in spec.lambdas() {
        if l.d == 0 {
            continue;
        }
        let base = 1.0 - ((l.alpha - s) * lq).exp();
        if base.norm() < 1e-14 {
            return Err(ZetaError::FactorPole(s));
        }
        out /= base.powi(l.d as i32);
    }
    Ok(out)
}

/// `(2πi/log q)·(s log q/(2πi) + n)` for `n` in the range, the spectrum of `s − Θ_q`.
pub fn spectrum_points(s: C, q: u64, range: std::ops::RangeInclusive<i64>) -> Vec<C> {
    let gamma = C::new(0.0, 2.0 * PI / (q as f64).ln());
    let tau = s / gamma;
    range.map(|n| gamma * (tau + n as f64)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub s: C,
    pub determinant: Option<C>,
    /// `L_v(s)^{−1}`.
    pub closed_form: Option<C>,
    pub rel_error: Option<f64>,
    pub pass: bool,
    /// Why the point was skipped.
    pub note: Option<String>,
    /// `Sp(s − Θ_q)` for `n = −2..=2`.
    pub spectrum: Vec<C>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalFactorReport {
    pub q: u64,
    pub ell: usize,
    pub tolerance: f64,
    pub rows: Vec<GridRow>,
}

impl LocalFactorReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass || r.note.is_some()) && self.rows.iter().any(|r| r.pass)
    }

    pub fn max_error(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.rel_error).fold(0.0, f64::max)
    }
}

/// Compares `∏_λ det_{∞,π(𝒱_λ),iD}(s)` with `L_v(s)^{−1}` using the constant traces `d_λ`.
pub fn verify_local_factor_theorem(spec: &EulerFactorSpec, ell: usize, grid: &[C]) -> Result<LocalFactorReport, ZetaError> {
    let traces: Vec<PmTraces> = spec.lambdas().iter().map(|l| PmTraces::constant(l.d as f64)).collect();
    verify_local_factor_with_traces(spec, ell, &traces, grid)
}

/// As [`verify_local_factor_theorem`] with one certified trace pair per eigenvalue.
pub fn verify_local_factor_with_traces(spec: &EulerFactorSpec, ell: usize, traces: &[PmTraces], grid: &[C]) -> Result<LocalFactorReport, ZetaError> {
    let lambdas = spec.lambdas();
    if traces.len() != lambdas.len() {
        return Err(ZetaError::Params(format!("{} trace tables for {} eigenvalues", traces.len(), lambdas.len())));
    }
    let d = dirac_spectrum(Variant::Scaled, ell, spec.q, ell)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &s in grid {
        let spectrum = spectrum_points(s, spec.q, -2..=2);
        let det: Result<C, ZetaError> = lambdas.iter().zip(traces).try_fold(C::new(1.0, 0.0), |acc, (l, t)| Ok(acc * regularized_determinant(&d, t, s - l.alpha)?));
        let row = match (det, euler_factor(spec, s)) {
            (Ok(det), Ok(factor)) => {
                let closed = 1.0 / factor;
                let rel = (det - closed).norm() / closed.norm();
                GridRow { s, determinant: Some(det), closed_form: Some(closed), rel_error: Some(rel), pass: rel < THEOREM_TOL, note: None, spectrum }
            }
            (Err(e), _) | (_, Err(e)) => match e {
                ZetaError::SingularLevel { .. } | ZetaError::BranchCut { .. } | ZetaError::FactorPole(_) => {
                    GridRow { s, determinant: None, closed_form: None, rel_error: None, pass: false, note: Some(e.to_string()), spectrum }
                }
                other => return Err(other),
            },
        };
        rows.push(row);
    }
    Ok(LocalFactorReport { q: spec.q, ell, tolerance: THEOREM_TOL, rows })
}
