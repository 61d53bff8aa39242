//! Double-precision special functions on the real line: Γ, ζ, real-index
//! binomial coefficients, and residuals of the gamma identities the μ
//! derivation leans on.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::exact::{self, Rational};

/// Half-width of the excluded band around the zeta pole at `s = 1`.
pub const ZETA_POLE_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPrecision {
    pub target_rel_error: f64,
    pub max_terms: usize,
}

impl Default for EvalPrecision {
    fn default() -> Self {
        EvalPrecision {
            target_rel_error: 1e-12,
            max_terms: 10_000,
        }
    }
}

impl EvalPrecision {
    pub fn new(target_rel_error: f64, max_terms: usize) -> Result<Self, SpecialError> {
        if !target_rel_error.is_finite() || target_rel_error <= 0.0 {
            return Err(SpecialError::InvalidPrecision(format!(
                "target relative error must be positive, got {target_rel_error}"
            )));
        }
        if max_terms == 0 {
            return Err(SpecialError::InvalidPrecision(
                "max_terms must be at least 1".into(),
            ));
        }
        Ok(EvalPrecision {
            target_rel_error,
            max_terms,
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialError {
    #[error("gamma has a pole at {0}")]
    GammaPole(f64),
    #[error("zeta has a pole at s = 1")]
    ZetaPole,
    #[error("s = {0} lies within {ZETA_POLE_GUARD:e} of the zeta pole at 1")]
    ZetaPoleProximity(f64),
    #[error("argument {0} must not be an integer")]
    IntegerArgument(f64),
    #[error("argument {0} is not finite")]
    NonFinite(f64),
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
}

pub(crate) fn is_integer(x: f64) -> bool {
    x.is_finite() && x.fract() == 0.0
}

fn check_finite(x: f64) -> Result<(), SpecialError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(SpecialError::NonFinite(x))
    }
}

/// `sin(πx)` with exact argument reduction, so integers give exactly 0 and
/// half-integers exactly ±1.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // x - 2*round(x/2) is exact in binary64
    let y = x - 2.0 * (x / 2.0).round();
    let (sign, y) = if y < 0.0 { (-1.0, -y) } else { (1.0, y) };
    // y in [0, 1]; fold onto [0, 1/2]
    let y = if y > 0.5 { 1.0 - y } else { y };
    let v = if y == 0.0 {
        0.0
    } else if y == 0.5 {
        1.0
    } else {
        (PI * y).sin()
    };
    sign * v
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)] // published digits, kept verbatim
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn gamma_lanczos(x: f64) -> f64 {
    debug_assert!(x >= 0.5);
    let x = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * series
}

/// Γ(x) for real `x`. Zero and the negative integers are poles.
pub fn gamma(x: f64) -> Result<f64, SpecialError> {
    check_finite(x)?;
    if x <= 0.0 && is_integer(x) {
        return Err(SpecialError::GammaPole(x));
    }
    if is_integer(x) && x <= 171.0 {
        // (x-1)! by direct product: exact up to 22!, then 1 rounding per step
        let n = x as u32;
        return Ok((1..n).fold(1.0, |acc, k| acc * k as f64));
    }
    if x < 0.5 {
        return Ok(PI / (sin_pi(x) * gamma(1.0 - x)?));
    }
    Ok(gamma_lanczos(x))
}

/// `Γ(1-a)Γ(a) - π/sin(πa)`.
pub fn reflection_residual(a: f64) -> Result<f64, SpecialError> {
    check_finite(a)?;
    if is_integer(a) {
        return Err(SpecialError::IntegerArgument(a));
    }
    Ok(gamma(1.0 - a)? * gamma(a)? - PI / sin_pi(a))
}

/// `1/(Γ(r-k+2)Γ(-r+k-1)) - (-1)^k sin(πr)/π`.
pub fn gamma_sin_identity_residual(r: f64, k: u32) -> Result<f64, SpecialError> {
    check_finite(r)?;
    if is_integer(r) {
        return Err(SpecialError::IntegerArgument(r));
    }
    let k_f = f64::from(k);
    let lhs = 1.0 / (gamma(r - k_f + 2.0)? * gamma(-r + k_f - 1.0)?);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(lhs - sign * sin_pi(r) / PI)
}

const ETA_TERMS: usize = 40;

/// Borwein's accelerated alternating series for the Dirichlet eta function.
fn eta_borwein(s: f64) -> f64 {
    let n = ETA_TERMS;
    // d_k = n Σ_{i=0}^{k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / n as f64; // i = 0: (n-1)!/n! = 1/n
    let mut acc = term;
    d.push(n as f64 * acc);
    for i in 1..=n {
        let i_f = i as f64;
        let n_f = n as f64;
        term *= (n_f + i_f - 1.0) * (n_f - i_f + 1.0) * 4.0 / ((2.0 * i_f - 1.0) * (2.0 * i_f));
        acc += term;
        d.push(n_f * acc);
    }
    let dn = d[n];
    let mut sum = 0.0;
    for (k, dk) in d[..n].iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (dk - dn) / ((k + 1) as f64).powf(s);
    }
    -sum / dn
}

/// ζ(s) via `η(s) / (1 - 2^{1-s})`.
fn zeta_from_eta(s: f64) -> f64 {
    let denom = -((1.0 - s) * LN_2).exp_m1();
    eta_borwein(s) / denom
}

/// ζ(s) via the functional equation, for `s` below the critical strip.
pub(crate) fn zeta_reflected(s: f64) -> Result<f64, SpecialError> {
    let t = 1.0 - s;
    let inner = zeta_from_eta(t);
    Ok(2f64.powf(s) * PI.powf(s - 1.0) * sin_pi(s / 2.0) * gamma(t)? * inner)
}

/// Riemann ζ(s) for real `s ≠ 1`.
///
/// Non-positive integers are answered from the exact Bernoulli values
/// (correctly rounded); elsewhere `s > -1/2` uses the accelerated eta series
/// and `s <= -1/2` the functional equation.
pub fn zeta_real(s: f64) -> Result<f64, SpecialError> {
    check_finite(s)?;
    if s == 1.0 {
        return Err(SpecialError::ZetaPole);
    }
    if (s - 1.0).abs() < ZETA_POLE_GUARD {
        return Err(SpecialError::ZetaPoleProximity(s));
    }
    if s <= 0.0 && is_integer(s) {
        return Ok(exact::zeta_neg_int((-s) as u64).to_f64());
    }
    if s > -0.5 {
        Ok(zeta_from_eta(s))
    } else {
        zeta_reflected(s)
    }
}

/// Generalized binomial coefficient `C(r, k) = Γ(r+1) / (k! Γ(r-k+1))`.
///
/// Integer `r` is evaluated exactly and rounded once. For non-integer `r`
/// the gamma ratio is expanded into the falling-factorial product, which
/// avoids overflow of the individual gamma values at large `k`.
pub fn binomial_real(r: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if is_integer(r) {
        return binomial_integer_upper(r as i64, k).to_f64();
    }
    let mut acc = 1.0;
    for j in 0..k {
        acc *= (r - j as f64) / (j + 1) as f64;
    }
    acc
}

pub(crate) fn binomial_integer_upper(m: i64, k: u64) -> Rational {
    if m >= 0 {
        exact::binomial_exact(m as u64, k as i64)
    } else {
        // C(-n, k) = (-1)^k C(n + k - 1, k)
        let n = m.unsigned_abs();
        let v = exact::binomial_exact(n + k - 1, k as i64);
        if k % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

/// `(1/Γ(s)) ∫_0^∞ t^{s-1}/(e^t - 1) dt` by exp-sinh quadrature.
///
/// Only meaningful for `s > 1`; used as an independent check on
/// [`zeta_real`], not as an evaluator.
pub fn zeta_integral_representation(s: f64) -> Result<f64, SpecialError> {
    check_finite(s)?;
    if s <= 1.0 {
        return Err(SpecialError::ZetaPole);
    }
    let f = |t: f64| {
        if t == 0.0 {
            0.0
        } else {
            t.powf(s - 1.0) / t.exp_m1()
        }
    };
    Ok(exp_sinh_quadrature(f) / gamma(s)?)
}

/// Integral over `(0, ∞)` with the substitution `t = exp(π/2 · sinh x)` and
/// the trapezoidal rule on `x`.
pub(crate) fn exp_sinh_quadrature<F: Fn(f64) -> f64>(f: F) -> f64 {
    let h = 1.0 / 64.0;
    let half_pi = PI / 2.0;
    let mut total = 0.0;
    let max_steps = (6.0 / h) as i64;
    for j in -max_steps..=max_steps {
        let x = j as f64 * h;
        let u = half_pi * x.sinh();
        let t = u.exp();
        if t == 0.0 || !t.is_finite() {
            continue;
        }
        let w = t * half_pi * x.cosh();
        let v = f(t) * w;
        if v.is_finite() {
            total += v;
        }
    }
    total * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn sin_pi_exact_points() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-7.0), 0.0);
        assert_eq!(sin_pi(0.5), 1.0);
        assert_eq!(sin_pi(-0.5), -1.0);
        assert_eq!(sin_pi(2.5), 1.0);
        assert_eq!(sin_pi(1.5), -1.0);
        assert!((sin_pi(0.25) - std::f64::consts::FRAC_1_SQRT_2).abs() < 2.5e-16);
        assert!((sin_pi(-1.3) - (-1.3 * PI).sin()).abs() < 1e-15);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        // mpmath, 50 digits
        assert!(rel(gamma(-1.3).unwrap(), 3.328_347_006_788_609) < 1e-13);
        assert!(rel(gamma(2.75).unwrap(), 1.608_359_421_985_545_7) < 1e-13);
        assert!(rel(gamma(-1.5).unwrap(), 4.0 * PI.sqrt() / 3.0) < 1e-13);
    }

    #[test]
    fn gamma_poles() {
        assert_eq!(gamma(0.0), Err(SpecialError::GammaPole(0.0)));
        assert_eq!(gamma(-3.0), Err(SpecialError::GammaPole(-3.0)));
        assert!(gamma(f64::NAN).is_err());
        assert!(gamma(-3.000_000_1).is_ok());
    }

    #[test]
    fn reflection_examples() {
        for a in [0.5, 0.25, -1.3] {
            let scale = (PI / sin_pi(a)).abs();
            assert!(
                reflection_residual(a).unwrap().abs() <= 1e-9 * scale,
                "a={a}"
            );
        }
        assert!(reflection_residual(2.0).is_err());
    }

    #[test]
    fn gamma_sin_examples() {
        for (r, k) in [(0.5, 1), (0.5, 2), (2.75, 3)] {
            assert!(
                gamma_sin_identity_residual(r, k).unwrap().abs() <= 1e-9,
                "r={r} k={k}"
            );
        }
        assert!(gamma_sin_identity_residual(1.0, 2).is_err());
    }

    #[test]
    fn zeta_examples() {
        assert!(rel(zeta_real(2.0).unwrap(), PI * PI / 6.0) < 1e-14);
        assert_eq!(zeta_real(-1.0).unwrap(), -1.0 / 12.0);
        assert!(rel(zeta_real(0.5).unwrap(), -1.460_354_508_809_586_8) < 1e-12);
        assert!(rel(zeta_real(-0.5).unwrap(), -0.207_886_224_977_354_57) < 1e-12);
        assert_eq!(zeta_real(0.0).unwrap(), -0.5);
    }

    #[test]
    fn zeta_pole_handling() {
        assert_eq!(zeta_real(1.0), Err(SpecialError::ZetaPole));
        assert!(matches!(
            zeta_real(1.0 + 5e-7),
            Err(SpecialError::ZetaPoleProximity(_))
        ));
        assert!(matches!(
            zeta_real(1.0 - 5e-7),
            Err(SpecialError::ZetaPoleProximity(_))
        ));
        assert!(zeta_real(1.0 + 2e-6).is_ok());
    }

    #[test]
    fn zeta_near_zero_from_both_sides() {
        // continuity through s = 0, where the routes hand over
        let left = zeta_real(-1e-9).unwrap();
        let right = zeta_real(1e-9).unwrap();
        assert!((left + 0.5).abs() < 1e-8);
        assert!((right + 0.5).abs() < 1e-8);
    }

    #[test]
    fn binomial_real_examples() {
        assert_eq!(binomial_real(0.5, 2), -0.125);
        assert_eq!(binomial_real(2.5, 1), 2.5);
        assert_eq!(binomial_real(0.5, 0), 1.0);
        assert_eq!(binomial_real(6.0, 2), 15.0);
        assert_eq!(binomial_real(-2.0, 3), -4.0);
    }

    #[test]
    fn binomial_real_matches_gamma_ratio() {
        for r in [0.5, 2.75, -0.3, 7.1, -4.6] {
            for k in 0..15u64 {
                let k_fact: f64 = (1..=k).map(|j| j as f64).product();
                let via_gamma =
                    gamma(r + 1.0).unwrap() / (k_fact * gamma(r - k as f64 + 1.0).unwrap());
                let direct = binomial_real(r, k);
                assert!(
                    (direct - via_gamma).abs() <= 1e-11 * via_gamma.abs(),
                    "r={r} k={k}: {direct} vs {via_gamma}"
                );
            }
        }
    }

    #[test]
    fn precision_validation() {
        assert!(EvalPrecision::new(0.0, 10).is_err());
        assert!(EvalPrecision::new(1e-10, 0).is_err());
        assert!(EvalPrecision::new(1e-10, 1).is_ok());
        let d = EvalPrecision::default();
        assert_eq!(d.target_rel_error, 1e-12);
        assert_eq!(d.max_terms, 10_000);
    }
}
