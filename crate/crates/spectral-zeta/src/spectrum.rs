use std::f64::consts::PI;

use crate::ZetaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `D = n` on `Gr_{+,n}`, `−n−1` on `Gr_{−,n}`.
    Plain,
    /// Eigenvalues scaled by `2π/(ℓ log q)`.
    Scaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub sign: Sign,
    pub n: usize,
    pub eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiracSpectrum {
    pub variant: Variant,
    pub ell: usize,
    pub q: u64,
    pub levels: Vec<Level>,
}

pub fn dirac_spectrum(variant: Variant, ell: usize, q: u64, n_max: usize) -> Result<DiracSpectrum, ZetaError> {
    if ell < 1 || q < 2 || n_max < 1 {
        return Err(ZetaError::Params(format!("need ℓ ≥ 1, q ≥ 2, nMax ≥ 1; got ℓ={ell}, q={q}, nMax={n_max}")));
    }
    let mut spec = DiracSpectrum { variant, ell, q, levels: Vec::with_capacity(2 * n_max + 2) };
    for n in 0..=n_max {
        for sign in [Sign::Plus, Sign::Minus] {
            spec.levels.push(Level { sign, n, eigenvalue: spec.eigenvalue(sign, n) });
        }
    }
    Ok(spec)
}

impl DiracSpectrum {
    fn scale(&self) -> f64 {
        match self.variant {
            Variant::Plain => 1.0,
            Variant::Scaled => 2.0 * PI / (self.ell as f64 * (self.q as f64).ln()),
        }
    }

    pub fn eigenvalue(&self, sign: Sign, n: usize) -> f64 {
        match sign {
            Sign::Plus => n as f64 * self.scale(),
            Sign::Minus => -(n as f64 + 1.0) * self.scale(),
        }
    }

    /// `λ_n = 2πn/(ℓ log q)`.
    pub fn lambda(&self, n: usize) -> f64 {
        2.0 * PI * n as f64 / (self.ell as f64 * (self.q as f64).ln())
    }

    /// `|D|` on the levels `kℓ` (plus) and `kℓ−1` (minus) that carry cohomology: `k·u`.
    pub fn unit(&self) -> f64 {
        self.eigenvalue(Sign::Plus, self.ell)
    }

    /// Whether consecutive eigenvalues on each side differ by one constant, the finite
    /// trace of bounded commutators `[D, S_w]`.
    pub fn spacing_is_constant(&self) -> bool {
        let step = self.scale();
        [Sign::Plus, Sign::Minus].iter().all(|&sign| {
            let side: Vec<f64> = self.levels.iter().filter(|l| l.sign == sign).map(|l| l.eigenvalue).collect();
            side.windows(2).all(|w| ((w[1] - w[0]).abs() - step).abs() <= 1e-12 * step.max(1.0) * (1.0 + w[1].abs()))
        })
    }
}

/// Traces `Tr(a Π)` on the levels of one sign that carry cohomology, indexed by `k`
/// (level `kℓ` on the plus side, `kℓ−1` on the minus side). Beyond the computed entries
/// the trace equals `tail`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    pub computed: Vec<f64>,
    pub tail: f64,
}

impl TraceTable {
    pub fn constant(t: f64) -> Self {
        TraceTable { computed: Vec::new(), tail: t }
    }

    /// Uses the last computed entry as the tail, after checking the previous one agrees.
    pub fn certified(computed: Vec<f64>) -> Result<Self, ZetaError> {
        let n = computed.len();
        if n < 2 {
            return Err(ZetaError::Params("need at least two computed traces".into()));
        }
        let tail = computed[n - 1];
        if computed[n - 2] != tail {
            return Err(ZetaError::NotStabilized { level: n - 2, got: computed[n - 2], tail });
        }
        Ok(TraceTable { computed, tail })
    }

    pub fn value(&self, k: usize) -> f64 {
        self.computed.get(k).copied().unwrap_or(self.tail)
    }

    pub fn is_zero(&self) -> bool {
        self.tail == 0.0 && self.computed.iter().all(|&t| t == 0.0)
    }
}

/// Trace tables for the two signs; minus-side index 0 is never used.
#[derive(Debug, Clone, PartialEq)]
pub struct PmTraces {
    pub plus: TraceTable,
    pub minus: TraceTable,
}

impl PmTraces {
    /// `g` on every level of both signs.
    pub fn constant(g: f64) -> Self {
        PmTraces { plus: TraceTable::constant(g), minus: TraceTable::constant(g) }
    }
}
