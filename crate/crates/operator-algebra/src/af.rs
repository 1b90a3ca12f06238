use num_traits::{One, Zero};

use graph_core::EdgeId;
use shift_dynamics::{SparseMatrix, Q};

use crate::ck::adjoint;
use crate::{OperatorError, OperatorSet};

/// `Q = (Π κ(μ_i))⁻¹ s_μ s_μ†` for `μ = wⁿ`, acting on the top level.
#[derive(Debug, Clone)]
pub struct AfCoreElement {
    pub word: Vec<EdgeId>,
    pub power: usize,
    pub scalar: Q,
    pub matrix: SparseMatrix,
    /// `(μ, ν)` with `|μ| = |ν|`, so `Q` lies in the gauge-invariant core.
    pub certificate: (Vec<EdgeId>, Vec<EdgeId>),
}

impl AfCoreElement {
    pub fn is_projection(&self) -> bool {
        (&self.matrix * &self.matrix) == self.matrix
    }
}

pub fn af_core_element(o: &OperatorSet, word: &[EdgeId], power: usize) -> Result<AfCoreElement, OperatorError> {
    let f = &o.filtration;
    let mu: Vec<EdgeId> = word.iter().copied().cycle().take(word.len() * power).collect();
    let k = mu.len();
    if k == 0 || k > o.truncation {
        return Err(OperatorError::Truncation { min: k.max(1), got: o.truncation });
    }
    let letters = f.shift.encode(&mu).map_err(|_| OperatorError::NotAdmissible(mu.clone()))?;
    let top = o.truncation;
    let mut s_mu = SparseMatrix::identity(f.dim(top - k));
    let mut scalar = Q::one();
    for (i, &w) in letters.iter().enumerate().rev() {
        let level = top - i;
        s_mu = o.s(level, w) * &s_mu;
        scalar /= o.kappa(w);
    }
    let matrix = (&s_mu * &adjoint(f, top - k, top, &s_mu)).scale(&scalar);
    Ok(AfCoreElement { word: word.to_vec(), power, scalar, matrix, certificate: (mu.clone(), mu) })
}

/// Trace of the projection onto the line through `Π_{Gr_{nℓ}}(Q χ)`, where `χ` is the
/// cylinder of `wⁿ w_1`. It is 1 whenever the graded image survives.
pub fn af_trace(o: &OperatorSet, word: &[EdgeId], power: usize) -> Result<Q, OperatorError> {
    let f = &o.filtration;
    let q = af_core_element(o, word, power)?;
    let level = word.len() * power;
    let chi_word: Vec<EdgeId> = q.certificate.0.iter().copied().chain(word.first().copied()).collect();
    let chi = f.cylinder_of_edges(level, &chi_word)?;
    let top = o.truncation;
    let image = f.expectation(top, level, &q.matrix.apply(&f.lift_to(level, top, &chi)));
    let v = f.project_gr(level, &image);
    let norm = f.inner(level, &v, &v);
    if norm.is_zero() {
        return Ok(Q::zero());
    }
    let w = f.weights(level);
    let diag: Q = v.iter().zip(w).map(|(x, wi)| x * x * wi).sum();
    Ok(diag / norm)
}
