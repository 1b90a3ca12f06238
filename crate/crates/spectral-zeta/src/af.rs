use num_traits::ToPrimitive;
use operator_algebra::{af_trace, CohomologyEmbedding, OperatorSet};

use crate::hurwitz::hurwitz_zeta;
use crate::{dirac_spectrum, Sign, Variant, ZetaError, C};

#[derive(Debug, Clone, PartialEq)]
pub struct AfZeta {
    pub value: C,
    /// `Tr(Q_{i,n} Π_{nℓ})` for `n = 1..=n_trunc`, one entry per loop.
    pub traces: Vec<Vec<f64>>,
}

/// `Σ_n Tr(Q_n Π_{nℓ}) |D|^{−z}` with `Q_n = Σ_i Q_{i,n}` acting on both summands of
/// `ℋ ⊕ ℋ`. Levels past `n_trunc` use the stabilized trace `g` per summand.
pub fn zeta_via_af_core(o: &OperatorSet, e: &CohomologyEmbedding, z: C, n_trunc: usize) -> Result<AfZeta, ZetaError> {
    let ell = e.loop_len;
    if n_trunc == 0 || n_trunc * ell > o.truncation {
        return Err(ZetaError::Params(format!("truncation {} cannot reach level {}·{ell}", o.truncation, n_trunc)));
    }
    let spec = dirac_spectrum(Variant::Scaled, ell, o.filtration.shift.q, n_trunc * ell)?;
    let g = e.words.len() as f64;
    let mut traces = Vec::with_capacity(n_trunc);
    let mut value = C::new(0.0, 0.0);
    for n in 1..=n_trunc {
        let row: Vec<f64> = e
            .words
            .iter()
            .map(|w| af_trace(o, w, n).map(|t| t.to_f64().unwrap_or(f64::NAN)))
            .collect::<Result<_, _>>()?;
        let total: f64 = row.iter().sum();
        let eig = spec.eigenvalue(Sign::Plus, n * ell);
        value += 2.0 * total * C::from(eig).powc(-z);
        traces.push(row);
    }
    let last: f64 = traces[n_trunc - 1].iter().sum();
    if last != g {
        return Err(ZetaError::NotStabilized { level: n_trunc * ell, got: last, tail: g });
    }
    let u = spec.unit();
    value += 2.0 * g * C::from(u).powc(-z) * hurwitz_zeta(z, C::from((n_trunc + 1) as f64))?;
    Ok(AfZeta { value, traces })
}
