//! Dirac spectra, zeta functions and regularized determinants.
//!
//! All numerics are binary64. Engine self-checks run at [`ENGINE_TOL`]; comparisons against
//! closed-form local factors use [`THEOREM_TOL`].

#![forbid(unsafe_code)]

mod af;
mod euler;
mod hurwitz;
mod spectrum;
mod zeta;

pub use af::{zeta_via_af_core, AfZeta};
pub use euler::{
    alpha_of, euler_factor, spectrum_points, verify_local_factor_theorem, verify_local_factor_with_traces, EulerFactorSpec, EulerMode,
    FoamLambda, GridRow, LocalFactorReport,
};
pub use hurwitz::{hurwitz_zeta, ln_gamma, zeta_derivative_at_zero, zeta_derivative_lerch, zeta_derivative_numeric};
pub use spectrum::{dirac_spectrum, DiracSpectrum, Level, PmTraces, Sign, TraceTable, Variant};
pub use zeta::{absolute_determinant, regularized_determinant, zeta_functions, ZetaMode, ZetaValue};

pub use num_complex::Complex64 as C;

pub const ENGINE_TOL: f64 = 1e-9;
pub const THEOREM_TOL: f64 = 1e-8;

#[derive(Debug, PartialEq, thiserror::Error)]
pub enum ZetaError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("Hurwitz zeta has a pole at z = 1")]
    Pole,
    #[error("Hurwitz parameter {0} lies on the nonpositive integers")]
    SingularParameter(f64),
    #[error("derivative engines disagree at a = {a}: {diff:e}")]
    EngineMismatch { a: C, diff: f64 },
    #[error("spectral parameter hits zero at level {level}")]
    SingularLevel { level: usize },
    #[error("eigenvalue at level {level} lies on the branch cut")]
    BranchCut { level: usize },
    #[error("traces are not stabilized: level {level} gives {got}, tail is {tail}")]
    NotStabilized { level: usize, got: f64, tail: f64 },
    #[error("local factor has a pole at s = {0}")]
    FactorPole(C),
    #[error("cannot parse complex number {0:?}")]
    ParseComplex(String),
    #[error(transparent)]
    Operator(#[from] operator_algebra::OperatorError),
}

/// Formats as `re+imj`.
pub fn format_complex(z: C) -> String {
    format!("{}{}{}j", z.re, if z.im.is_sign_negative() { "-" } else { "+" }, z.im.abs())
}

/// Parses `re+imj`, `re-imj`, a bare real or a bare `imj`.
pub fn parse_complex(s: &str) -> Result<C, ZetaError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || ZetaError::ParseComplex(s.to_string());
    let Some(body) = t.strip_suffix('j').or_else(|| t.strip_suffix('i')) else {
        return t.parse::<f64>().map(|re| C::new(re, 0.0)).map_err(|_| err());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let cut = (1..bytes.len()).rev().find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match cut {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    Ok(C::new(re.parse().map_err(|_| err())?, im.parse().map_err(|_| err())?))
}
