use crate::hurwitz::{hurwitz_zeta, zeta_derivative_at_zero};
use crate::{DiracSpectrum, PmTraces, TraceTable, ZetaError, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaMode {
    /// `Σ Tr(aΠ_λ) λ^{−z}` over `Sp|D| ∖ {0}`.
    Abs,
    /// `Σ Tr(aΠ_λ) (s+λ)^{−z}` over `Sp|D|`.
    TwoVar,
    /// The pair `ζ_{a,iD,±}(s,z)`.
    Pm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZetaValue {
    Single(C),
    Pair(C, C),
}

impl ZetaValue {
    pub fn total(self) -> C {
        match self {
            ZetaValue::Single(v) => v,
            ZetaValue::Pair(a, b) => a + b,
        }
    }
}

fn principal_log(x: C, level: usize) -> Result<C, ZetaError> {
    if x.norm() == 0.0 {
        return Err(ZetaError::SingularLevel { level });
    }
    if x.im == 0.0 && x.re < 0.0 {
        return Err(ZetaError::BranchCut { level });
    }
    Ok(x.ln())
}

// first index at which the tail factorization (c+dk) = d·(c/d+k) is taken
fn split_point(c: C, d: C, t: &TraceTable, k0: usize) -> usize {
    let r = (c / d).re;
    k0.max(t.computed.len()).max((1.0 - r).ceil().max(0.0) as usize)
}

/// `Σ_{k≥k0} t(k)·(c+dk)^{−z}`.
fn half_sum(c: C, d: C, t: &TraceTable, k0: usize, z: C) -> Result<C, ZetaError> {
    let k_split = split_point(c, d, t, k0);
    let mut sum = C::new(0.0, 0.0);
    for k in k0..k_split {
        let tk = t.value(k);
        if tk != 0.0 {
            sum += tk * (-z * principal_log(c + d * k as f64, k)?).exp();
        }
    }
    if t.tail != 0.0 {
        sum += t.tail * (-z * d.ln()).exp() * hurwitz_zeta(z, c / d + k_split as f64)?;
    }
    Ok(sum)
}

/// `−∂_z Σ_{k≥k0} t(k)·(c+dk)^{−z}` at `z = 0`.
fn half_log_det(c: C, d: C, t: &TraceTable, k0: usize) -> Result<C, ZetaError> {
    let k_split = split_point(c, d, t, k0);
    let mut acc = C::new(0.0, 0.0);
    for k in k0..k_split {
        let tk = t.value(k);
        if tk != 0.0 {
            acc += tk * principal_log(c + d * k as f64, k)?;
        }
    }
    if t.tail != 0.0 {
        let a = c / d + k_split as f64;
        acc += t.tail * (d.ln() * (0.5 - a) - zeta_derivative_at_zero(a)?);
    }
    Ok(acc)
}

pub fn zeta_functions(spec: &DiracSpectrum, traces: &PmTraces, mode: ZetaMode, s: C, z: C, include_zero: bool) -> Result<ZetaValue, ZetaError> {
    let u = spec.unit();
    let i = C::new(0.0, 1.0);
    let zero = C::new(0.0, 0.0);
    Ok(match mode {
        ZetaMode::Abs => ZetaValue::Single(half_sum(zero, C::from(u), &traces.plus, 1, z)? + half_sum(zero, C::from(u), &traces.minus, 1, z)?),
        ZetaMode::TwoVar => {
            let k0 = if include_zero { 0 } else { 1 };
            ZetaValue::Single(half_sum(s, C::from(u), &traces.plus, k0, z)? + half_sum(s, C::from(u), &traces.minus, 1, z)?)
        }
        ZetaMode::Pm => ZetaValue::Pair(half_sum(s, i * u, &traces.plus, 0, z)?, half_sum(s, -i * u, &traces.minus, 1, z)?),
    })
}

/// `exp(−ζ′_{a,iD,+}(s,0))·exp(−ζ′_{a,iD,−}(s,0))`.
///
/// The minus side starts at `k = 1`, the proof's `n ≥ 0` sum with its `n = 0` term removed.
pub fn regularized_determinant(spec: &DiracSpectrum, traces: &PmTraces, s: C) -> Result<C, ZetaError> {
    let i = C::new(0.0, 1.0);
    let u = spec.unit();
    let plus = half_log_det(s, i * u, &traces.plus, 0)?;
    let minus = half_log_det(s, -i * u, &traces.minus, 1)?;
    Ok((plus + minus).exp())
}

/// The same determinant built from `|D|` with no rotation: spectrum `s + k·u` on both sides.
pub fn absolute_determinant(spec: &DiracSpectrum, traces: &PmTraces, s: C) -> Result<C, ZetaError> {
    let u = C::from(spec.unit());
    Ok((half_log_det(s, u, &traces.plus, 0)? + half_log_det(s, u, &traces.minus, 1)?).exp())
}
