//! Regularized integrals of power series: `∫_0^∞ f(x) dx := Σ_k a_k μ(k)`
//! for `f(x) = Σ_k a_k x^k`.
//!
//! Sums are carried out in exact arithmetic and rounded once at the end.

mod series_file;

pub use series_file::{
    parse_series_bytes, parse_series_file, SeriesCoefficients, SeriesFileError, SeriesFileErrorKind,
};

use std::f64::consts::LN_2;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::exact::{sum_fractions, weighted_sum, Rational};
use crate::mucore::mu_int_closed;

/// Builtin series names accepted by [`builtin_series`].
pub const BUILTIN_SERIES: [&str; 4] = ["exp", "geometric", "sin", "cos"];

/// Number of trailing non-zero terms inspected by the divergence guard.
pub const DECAY_WINDOW: usize = 10;

/// How far past `N` to look for the first omitted non-zero term.
const TAIL_LOOKAHEAD: u64 = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RegIntError {
    #[error("unknown series `{name}`; available: {}", BUILTIN_SERIES.join(", "))]
    UnknownSeries { name: String },
    #[error("term magnitudes of `{name}` stop decreasing near k = {k}; the regularized sum is suspected to diverge")]
    DivergenceSuspected { name: String, k: u64 },
    #[error("N must be at least 1")]
    ZeroTruncation,
    #[error(transparent)]
    SeriesFile(#[from] SeriesFileError),
}

type CoefficientFn = dyn Fn(u64) -> Rational + Send + Sync;
type TailBoundFn = dyn Fn(u64) -> f64 + Send + Sync;

/// A closed-form limit known for a series, kept alongside numeric results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KnownLimit {
    pub expression: &'static str,
    pub value: f64,
}

/// Coefficient provider `k ↦ a_k`. Providers must be pure.
#[derive(Clone)]
pub struct PowerSeries {
    name: String,
    coefficient: Arc<CoefficientFn>,
    tail_bound: Option<Arc<TailBoundFn>>,
    known_limit: Option<KnownLimit>,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeries")
            .field("name", &self.name)
            .field("declared_tail_bound", &self.tail_bound.is_some())
            .field("known_limit", &self.known_limit)
            .finish()
    }
}

impl PowerSeries {
    pub fn new<F>(name: impl Into<String>, coefficient: F) -> Self
    where
        F: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        PowerSeries {
            name: name.into(),
            coefficient: Arc::new(coefficient),
            tail_bound: None,
            known_limit: None,
        }
    }

    /// Attaches a bound on `|Σ_{k>N} a_k μ(k)|`. Must be non-increasing in N.
    pub fn with_tail_bound<F>(mut self, bound: F) -> Self
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        self.tail_bound = Some(Arc::new(bound));
        self
    }

    pub fn with_known_limit(mut self, limit: KnownLimit) -> Self {
        self.known_limit = Some(limit);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coefficient(&self, k: u64) -> Rational {
        (self.coefficient)(k)
    }

    pub fn declared_tail_bound(&self, n: u64) -> Option<f64> {
        self.tail_bound.as_ref().map(|b| b(n))
    }

    pub fn known_limit(&self) -> Option<KnownLimit> {
        self.known_limit
    }

    /// `alpha·f + beta·g`, coefficient by coefficient.
    pub fn linear_combination(
        alpha: Rational,
        f: &PowerSeries,
        beta: Rational,
        g: &PowerSeries,
    ) -> Self {
        let name = format!("({alpha})*{} + ({beta})*{}", f.name, g.name);
        let (fc, gc) = (f.coefficient.clone(), g.coefficient.clone());
        let (a, b) = (alpha.clone(), beta.clone());
        let mut out = PowerSeries::new(name, move |k| &a * &fc(k) + &b * &gc(k));
        if let (Some(fb), Some(gb)) = (f.tail_bound.clone(), g.tail_bound.clone()) {
            let (a, b) = (alpha.abs().to_f64(), beta.abs().to_f64());
            out = out.with_tail_bound(move |n| a * fb(n) + b * gb(n));
        }
        out
    }

    /// A finite series read from a coefficient file. Its tail bound is the
    /// exact remaining mass `Σ_{k>N} |a_k μ(k)|`.
    pub fn from_coefficients(name: impl Into<String>, coeffs: SeriesCoefficients) -> Self {
        let coeffs = Arc::new(coeffs);
        let lookup = coeffs.clone();
        PowerSeries::new(name, move |k| lookup.get(k)).with_tail_bound(move |n| {
            coeffs
                .entries()
                .filter(|(k, _)| *k > n)
                .map(|(k, a)| (a * &mu_int_closed(k)).abs())
                .sum::<Rational>()
                .to_f64()
        })
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1u32), |acc, k| acc * BigInt::from(k))
}

/// The builtin coefficient providers.
pub fn builtin_series(name: &str) -> Result<PowerSeries, RegIntError> {
    let series = match name {
        "exp" => PowerSeries::new("exp", |k| Rational::new(1, factorial(k))).with_known_limit(
            KnownLimit {
                expression: "-1/e",
                value: -(-1.0f64).exp(),
            },
        ),
        "geometric" => {
            PowerSeries::new("geometric", |_| Rational::one()).with_known_limit(KnownLimit {
                expression: "1 - log 4",
                value: double_integral_remark(),
            })
        }
        "sin" => PowerSeries::new("sin", |k| {
            if k % 2 == 0 {
                Rational::zero()
            } else {
                let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
                Rational::new(sign, factorial(k))
            }
        })
        .with_known_limit(KnownLimit {
            expression: "1 - sin 1",
            value: 1.0 - 1f64.sin(),
        }),
        "cos" => PowerSeries::new("cos", |k| {
            if k % 2 == 1 {
                Rational::zero()
            } else {
                let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
                Rational::new(sign, factorial(k))
            }
        })
        .with_known_limit(KnownLimit {
            expression: "cos 1 - 1",
            value: 1f64.cos() - 1.0,
        }),
        other => {
            return Err(RegIntError::UnknownSeries {
                name: other.to_string(),
            })
        }
    };
    Ok(series)
}

/// `Σ_{k=0}^{N} μ(k) = Σ_{k=0}^{N} (-1)^{k+1} / ((k+1)(k+2))`, exactly.
pub fn mu_sum_partial(n: u64) -> Rational {
    sum_fractions((0..=n).map(|k| {
        let sign = if k % 2 == 0 { -1 } else { 1 };
        (
            BigInt::from(sign),
            BigInt::from(k + 1) * BigInt::from(k + 2),
        )
    }))
}

/// `∫_0^∞ ∫_0^∞ x^r dx dr = Σ_k μ(k) = 1 - log 4`.
pub fn double_integral_remark() -> f64 {
    1.0 - 2.0 * LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    /// From the series' declared tail bound.
    Declared,
    /// First omitted term of an alternating, decreasing sequence.
    Alternating,
    /// No cheap rigorous bound; the estimate is infinite.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularizedResult {
    pub series: String,
    pub value: f64,
    pub exact_partial_sum: Rational,
    pub partial_sum_n: u64,
    pub tail_estimate: f64,
    pub tail_kind: TailKind,
    pub known_limit: Option<KnownLimit>,
}

/// `Σ_{k=0}^{N} a_k μ(k)` with a tail estimate.
pub fn regularize_integral(series: &PowerSeries, n: u64) -> Result<RegularizedResult, RegIntError> {
    if n == 0 {
        return Err(RegIntError::ZeroTruncation);
    }
    let terms: Vec<(u64, Rational)> = (0..=n)
        .map(|k| (k, series.coefficient(k) * mu_int_closed(k)))
        .filter(|(_, t)| !t.is_zero())
        .collect();

    let window_start = terms.len().saturating_sub(DECAY_WINDOW);
    let window = &terms[window_start..];

    let declared = series.declared_tail_bound(n);
    if declared.is_none() {
        for pair in window.windows(2) {
            if pair[1].1.abs() >= pair[0].1.abs() {
                return Err(RegIntError::DivergenceSuspected {
                    name: series.name().to_string(),
                    k: pair[1].0,
                });
            }
        }
    }

    let exact = weighted_sum(terms.iter().map(|(_, t)| (BigInt::one(), t)));

    let (tail_estimate, tail_kind) = match declared {
        Some(bound) => (bound, TailKind::Declared),
        None => {
            let alternating = window
                .windows(2)
                .all(|p| p[0].1.is_negative() != p[1].1.is_negative());
            let next = (n + 1..=n + TAIL_LOOKAHEAD)
                .map(|k| series.coefficient(k) * mu_int_closed(k))
                .find(|t| !t.is_zero());
            match (alternating, next, terms.last()) {
                (true, Some(next), Some((_, last))) if next.is_negative() != last.is_negative() => {
                    (next.abs().to_f64(), TailKind::Alternating)
                }
                _ => (f64::INFINITY, TailKind::Unbounded),
            }
        }
    };

    Ok(RegularizedResult {
        series: series.name().to_string(),
        value: exact.to_f64(),
        exact_partial_sum: exact,
        partial_sum_n: n,
        tail_estimate,
        tail_kind,
        known_limit: series.known_limit(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_coefficients() {
        assert_eq!(
            builtin_series("exp").unwrap().coefficient(3),
            Rational::new(1, 6)
        );
        assert_eq!(
            builtin_series("geometric").unwrap().coefficient(7),
            Rational::one()
        );
        assert!(builtin_series("sin").unwrap().coefficient(4).is_zero());
        assert_eq!(
            builtin_series("sin").unwrap().coefficient(3),
            Rational::new(-1, 6)
        );
        assert_eq!(
            builtin_series("cos").unwrap().coefficient(4),
            Rational::new(1, 24)
        );
        let err = builtin_series("tan").unwrap_err();
        assert_eq!(
            err.to_string(),
            "unknown series `tan`; available: exp, geometric, sin, cos"
        );
    }

    #[test]
    fn mu_sum_partial_examples() {
        assert_eq!(mu_sum_partial(0), Rational::new(-1, 2));
        assert_eq!(mu_sum_partial(1), Rational::new(-1, 3));
        let v = mu_sum_partial(1000).to_f64();
        assert!((v - (1.0 - 4f64.ln())).abs() <= 1.0 / (1002.0 * 1003.0));
        assert!((v - -0.386_294_361_119_890_6).abs() < 1e-6);
    }

    /// Independent exact oracle: split 1/((k+1)(k+2)) = 1/(k+1) - 1/(k+2)
    /// and collect the alternating harmonic pieces.
    #[test]
    fn mu_sum_partial_matches_partial_fractions() {
        for n in 0..=100u64 {
            let mut acc = Rational::zero();
            for k in 0..=n {
                let sign = Rational::from_integer(if k % 2 == 0 { -1 } else { 1 });
                acc += sign * (Rational::new(1, k as i64 + 1) - Rational::new(1, k as i64 + 2));
            }
            assert_eq!(mu_sum_partial(n), acc, "N={n}");
        }
    }

    #[test]
    fn double_integral_constant() {
        let c = double_integral_remark();
        assert!((c - -0.386_294_361_1).abs() < 1e-10);
        assert!((c - (1.0 - 2.0 * 2f64.ln())).abs() < 1e-14);
        let partial = mu_sum_partial(10_000).to_f64();
        let first_omitted = 1.0 / (10_002.0 * 10_003.0);
        assert!((partial - c).abs() <= first_omitted);
        assert!((partial - c).abs() <= 5e-9);
        // 50-digit reference for the remainder after N = 10^4
        assert!(((c - partial) - 4.998_000_574_860_03e-9).abs() < 1e-15);
    }

    #[test]
    fn exp_regularizes_to_minus_inverse_e() {
        let r = regularize_integral(&builtin_series("exp").unwrap(), 20).unwrap();
        assert!((r.value + (-1f64).exp()).abs() <= 1e-12);
        assert_eq!(r.tail_kind, TailKind::Alternating);
        assert_eq!(r.known_limit.unwrap().expression, "-1/e");
    }

    #[test]
    fn geometric_matches_mu_sum() {
        let r = regularize_integral(&builtin_series("geometric").unwrap(), 1000).unwrap();
        assert_eq!(r.exact_partial_sum, mu_sum_partial(1000));
        assert!((r.value - double_integral_remark()).abs() < 1e-6);
    }

    #[test]
    fn sin_partial_sum() {
        // Σ_{m<5} (-1)^m / ((2m+1)! (2m+2)(2m+3)), 20-digit reference
        let r = regularize_integral(&builtin_series("sin").unwrap(), 10).unwrap();
        assert!((r.value - 0.158_529_015_351_932).abs() < 1e-15);
        assert_eq!(r.tail_kind, TailKind::Alternating);
        assert!((r.value - r.known_limit.unwrap().value).abs() <= r.tail_estimate);
    }

    #[test]
    fn cos_limit() {
        let r = regularize_integral(&builtin_series("cos").unwrap(), 30).unwrap();
        assert!((r.value - (1f64.cos() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn divergence_is_reported() {
        let squares = PowerSeries::new("squares", |k| Rational::from_integer(k * k));
        match regularize_integral(&squares, 30) {
            Err(RegIntError::DivergenceSuspected { name, .. }) => assert_eq!(name, "squares"),
            other => panic!("expected divergence, got {other:?}"),
        }
        let powers = PowerSeries::new("pow2", |k| {
            Rational::from_integer(BigInt::from(2u32).pow(k as u32))
        });
        assert!(regularize_integral(&powers, 30).is_err());
        assert_eq!(
            regularize_integral(&builtin_series("exp").unwrap(), 0),
            Err(RegIntError::ZeroTruncation)
        );
    }

    #[test]
    fn non_alternating_series_has_unbounded_tail() {
        // a_k = (-1)^k makes every term negative
        let s = PowerSeries::new("alt", |k| {
            Rational::from_integer(if k % 2 == 0 { 1 } else { -1 })
        });
        let r = regularize_integral(&s, 20).unwrap();
        assert_eq!(r.tail_kind, TailKind::Unbounded);
        assert!(r.tail_estimate.is_infinite());
    }

    #[test]
    fn file_series_uses_declared_tail() {
        let coeffs = parse_series_file("0,1\n2,3\n5,-1/2\n").unwrap();
        let s = PowerSeries::from_coefficients("file", coeffs);
        let full = regularize_integral(&s, 5).unwrap();
        assert_eq!(full.tail_kind, TailKind::Declared);
        assert_eq!(full.tail_estimate, 0.0);
        // -1/2 + 3*(-1/12) + (-1/2)(1/42)
        assert_eq!(
            full.exact_partial_sum,
            Rational::new(-1, 2) + Rational::new(-1, 4) + Rational::new(-1, 84)
        );
        let cut = regularize_integral(&s, 2).unwrap();
        assert!((cut.tail_estimate - 1.0 / 84.0).abs() < 1e-16);
    }

    #[test]
    fn linear_combination_is_exact() {
        let f = builtin_series("exp").unwrap();
        let g = builtin_series("sin").unwrap();
        let (a, b) = (Rational::new(3, 2), Rational::new(-2, 7));
        let combo = PowerSeries::linear_combination(a.clone(), &f, b.clone(), &g);
        let n = 25;
        let lhs = regularize_integral(&combo, n).unwrap().exact_partial_sum;
        let rhs = a * regularize_integral(&f, n).unwrap().exact_partial_sum
            + b * regularize_integral(&g, n).unwrap().exact_partial_sum;
        assert_eq!(lhs, rhs);
    }
}
