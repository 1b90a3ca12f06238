use std::f64::consts::PI;

use crate::{ZetaError, C, ENGINE_TOL};

// B_2, B_4, …, B_30
const BERNOULLI: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

fn check_parameter(a: C) -> Result<(), ZetaError> {
    if a.im == 0.0 && a.re <= 0.0 && a.re == a.re.round() {
        return Err(ZetaError::SingularParameter(a.re));
    }
    Ok(())
}

/// `Σ_{n≥0} (a+n)^{−z}` continued to all `z ≠ 1`, with principal powers.
///
/// Terms below a shift `N` are summed directly; the rest comes from Euler–Maclaurin at
/// `a+N`, with `|a+N|` large enough that the Bernoulli terms decrease fast.
pub fn hurwitz_zeta(z: C, a: C) -> Result<C, ZetaError> {
    if (z - 1.0).norm() == 0.0 {
        return Err(ZetaError::Pole);
    }
    check_parameter(a)?;
    let radius = 25.0 + 2.0 * z.norm();
    let mut n = 0usize;
    while (a + n as f64).norm() < radius || (a.re + n as f64) < radius / 2.0 {
        n += 1;
    }
    let mut sum = C::new(0.0, 0.0);
    for k in 0..n {
        sum += (a + k as f64).powc(-z);
    }
    let b = a + n as f64;
    let lb = b.ln();
    let pow = |e: C| (e * lb).exp();
    sum += pow(1.0 - z) / (z - 1.0) + 0.5 * pow(-z);
    // rising factorial z(z+1)…(z+2k−2) over (2k)!
    let mut coef = z / 2.0;
    let mut term_pow = pow(-z - 1.0);
    let b2 = b * b;
    for (k, &bern) in BERNOULLI.iter().enumerate() {
        let term = bern * coef * term_pow;
        sum += term;
        if term.norm() < 1e-17 * sum.norm().max(1e-300) {
            break;
        }
        let m = 2.0 * (k as f64 + 1.0);
        coef = coef * (z + m - 1.0) * (z + m) / ((m + 1.0) * (m + 2.0));
        term_pow /= b2;
    }
    Ok(sum)
}

/// Principal log-Gamma (the continuation of the real `ln Γ` off the negative axis).
pub fn ln_gamma(z: C) -> Result<C, ZetaError> {
    check_parameter(z)?;
    let mut w = z;
    let mut shift = C::new(0.0, 0.0);
    while w.norm() < 20.0 || w.re < 10.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut series = C::new(0.0, 0.0);
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut p = inv;
    for (k, &bern) in BERNOULLI.iter().take(10).enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        series += bern / (m * (m - 1.0)) * p;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift)
}

/// `∂_z ζ_H(0, a) = ln Γ(a) − ½ ln 2π`.
pub fn zeta_derivative_lerch(a: C) -> Result<C, ZetaError> {
    Ok(ln_gamma(a)? - 0.5 * (2.0 * PI).ln())
}

/// Central differences of [`hurwitz_zeta`] at `z = 0`, Richardson-extrapolated.
pub fn zeta_derivative_numeric(a: C) -> Result<C, ZetaError> {
    const LEVELS: usize = 6;
    let mut table: Vec<Vec<C>> = Vec::with_capacity(LEVELS);
    let mut h = 0.25;
    for j in 0..LEVELS {
        let d = (hurwitz_zeta(C::new(h, 0.0), a)? - hurwitz_zeta(C::new(-h, 0.0), a)?) / (2.0 * h);
        let mut row = vec![d];
        for k in 1..=j {
            let f = 4f64.powi(k as i32);
            let v = row[k - 1] + (row[k - 1] - table[j - 1][k - 1]) / (f - 1.0);
            row.push(v);
        }
        table.push(row);
        h /= 2.0;
    }
    Ok(table[LEVELS - 1][LEVELS - 1])
}

/// `∂_z ζ_H(z, a)` at `z = 0`, from the log-Gamma closed form after checking it
/// against the numeric derivative.
pub fn zeta_derivative_at_zero(a: C) -> Result<C, ZetaError> {
    let closed = zeta_derivative_lerch(a)?;
    let numeric = zeta_derivative_numeric(a)?;
    let diff = (closed - numeric).norm();
    if diff > ENGINE_TOL * closed.norm().max(1.0) {
        return Err(ZetaError::EngineMismatch { a, diff });
    }
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_integers() {
        let mut fact = 1.0f64;
        for n in 1..15 {
            let g = ln_gamma(C::new(n as f64, 0.0)).unwrap();
            assert!((g.re - fact.ln()).abs() < 1e-12, "{n}");
            assert!(g.im.abs() < 1e-14);
            fact *= n as f64;
        }
    }

    #[test]
    fn gamma_half() {
        let g = ln_gamma(C::new(0.5, 0.0)).unwrap();
        assert!((g.re - 0.5 * PI.ln()).abs() < 1e-13);
    }

    #[test]
    fn poles_are_refused() {
        assert_eq!(hurwitz_zeta(C::new(1.0, 0.0), C::new(1.0, 0.0)), Err(ZetaError::Pole));
        assert!(matches!(hurwitz_zeta(C::new(2.0, 0.0), C::new(-3.0, 0.0)), Err(ZetaError::SingularParameter(_))));
        assert!(hurwitz_zeta(C::new(2.0, 0.0), C::new(-3.0, 1e-3)).is_ok());
    }
}
