//! The μ function, `μ(r) = ∫_0^∞ x^r dx` under zeta regularization.
//!
//! Non-negative integers get an exact rational computed along three
//! independent routes (zeta sum, Bernoulli sum, closed form) that must agree.
//! Non-integer arguments get the value 0 together with a numeric
//! [`ZeroCertificate`]: the λ factor and a truncated series whose decay is
//! the observable evidence for the vanishing.

use std::f64::consts::PI;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exact::{self, Rational};
use crate::special::{self, is_integer, EvalPrecision, SpecialError};

/// Default number of series terms in a [`ZeroCertificate`].
pub const DEFAULT_TRUNCATION: usize = 200;

/// Largest integer argument for which [`mu`] runs all three exact routes.
pub const MAX_EXACT_ARGUMENT: u64 = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MuError {
    #[error("mu is undefined at negative integer {0}")]
    NegativeInteger(f64),
    #[error("r = -1 is the logarithmic case and is not regularized here")]
    Logarithmic,
    #[error("series certificate only converges for r > -1, got {0}")]
    NonConvergentDomain(f64),
    #[error("argument {0} must not be an integer")]
    IntegerArgument(f64),
    #[error("argument {0} is not finite")]
    NonFinite(f64),
    #[error("integer argument {0} exceeds the exact-route limit {MAX_EXACT_ARGUMENT}")]
    ArgumentTooLarge(u64),
    #[error("slice [{0}, {1}] of x^{2} diverges")]
    DivergentSlice(u64, u64, f64),
    #[error("n must be at least 1")]
    ZeroSliceIndex,
    #[error("truncation {requested} exceeds max_terms {max}")]
    TruncationTooLarge { requested: usize, max: usize },
    #[error("truncation must be at least 1")]
    ZeroTruncation,
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// The three exact evaluations of μ on a non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteValues {
    pub zeta_sum: Rational,
    pub bernoulli_sum: Rational,
    pub closed_form: Rational,
}

impl RouteValues {
    pub fn agree(&self) -> bool {
        self.zeta_sum == self.closed_form && self.bernoulli_sum == self.closed_form
    }
}

/// Reciprocity transport used when the argument lies below −1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reciprocity {
    /// `-r-2`, the argument at which the series was evaluated.
    pub mapped_argument: f64,
    /// `μ(r) = factor · μ(mapped_argument)`.
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCertificate {
    pub lambda_value: f64,
    pub truncation_n: usize,
    pub truncated_series_value: f64,
    pub reciprocity: Option<Reciprocity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum MuBranch {
    IntegerExact {
        value: Rational,
        routes: RouteValues,
    },
    NonIntegerZero {
        certificate: ZeroCertificate,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuValue {
    pub argument: f64,
    #[serde(flatten)]
    pub branch: MuBranch,
}

impl MuValue {
    /// The regularized value; exactly 0 on the non-integer branch.
    pub fn exact(&self) -> Rational {
        match &self.branch {
            MuBranch::IntegerExact { value, .. } => value.clone(),
            MuBranch::NonIntegerZero { .. } => Rational::zero(),
        }
    }

    pub fn value(&self) -> f64 {
        self.exact().to_f64()
    }

    pub fn certificate(&self) -> Option<&ZeroCertificate> {
        match &self.branch {
            MuBranch::NonIntegerZero { certificate } => Some(certificate),
            MuBranch::IntegerExact { .. } => None,
        }
    }
}

/// `Δ(r, n) = ∫_{n-1}^{n} x^r dx = (n^{r+1} - (n-1)^{r+1}) / (r+1)`.
pub fn delta(r: f64, n: u64) -> Result<f64, MuError> {
    if !r.is_finite() {
        return Err(MuError::NonFinite(r));
    }
    if r == -1.0 {
        return Err(MuError::Logarithmic);
    }
    if n == 0 {
        return Err(MuError::ZeroSliceIndex);
    }
    let p = r + 1.0;
    if n == 1 {
        if p < 0.0 {
            return Err(MuError::DivergentSlice(0, 1, r));
        }
        return Ok(1.0 / p);
    }
    // n^p (1 - (1 - 1/n)^p), written to avoid cancellation at large n
    let nf = n as f64;
    let shrink = (p * (-1.0 / nf).ln_1p()).exp_m1();
    Ok(-nf.powf(p) * shrink / p)
}

/// Δ(r, n) in exact arithmetic straight from its definition.
pub fn delta_exact(r: u64, n: u64) -> Rational {
    let p = r as u32 + 1;
    let hi = BigInt::from(n).pow(p);
    let lo = BigInt::from(n.saturating_sub(1)).pow(p);
    Rational::new(hi - lo, BigInt::from(p))
}

/// Δ(r, n) after binomial expansion of `(n-1)^{r+1}`:
/// `(1/(r+1)) Σ_{k=0}^{r} C(r+1,k) (-1)^{r-k} n^k`.
pub fn delta_binomial_form(r: u64, n: u64) -> Rational {
    let n_big = BigInt::from(n);
    let mut power = BigInt::from(1u32);
    let mut acc = BigInt::from(0u32);
    for k in 0..=r {
        let term = exact::binomial_int(r + 1, k as i64) * &power;
        if (r - k).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
        power *= &n_big;
    }
    Rational::new(acc, BigInt::from(r + 1))
}

/// `μ(r) = (1/(r+1)) Σ_{k=0}^{r} C(r+1,k) (-1)^{r-k} ζ(-k)`.
pub fn mu_int_zeta_sum(r: u64) -> Rational {
    let row = exact::binomial_row(r + 1);
    let sum = exact::weighted_sum((0..=r).map(|k| {
        let c = row[k as usize].clone();
        let c = if (r - k).is_multiple_of(2) { c } else { -c };
        (c, exact::zeta_neg_int(k))
    }));
    sum / Rational::from_integer(r + 1)
}

/// `μ(r) = ((-1)^r / ((r+1)(r+2))) Σ_{k=1}^{r+1} C(r+2,k) B_k`.
pub fn mu_int_bernoulli(r: u64) -> Rational {
    let row = exact::binomial_row(r + 2);
    let b = exact::BernoulliTable::global().prefix(r + 1);
    let sum = exact::weighted_sum((1..=r as usize + 1).map(|k| (row[k].clone(), &b[k])));
    let scale = Rational::new(1, BigInt::from(r + 1) * BigInt::from(r + 2));
    let v = sum * scale;
    if r.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// `μ(r) = (-1)^{r+1} / ((r+1)(r+2))`.
pub fn mu_int_closed(r: u64) -> Rational {
    let sign = if r.is_multiple_of(2) { -1 } else { 1 };
    Rational::new(sign, BigInt::from(r + 1) * BigInt::from(r + 2))
}

/// `λ(r) = 1 - sin(πr) / (π(r+1))`, with the limit value 2 at `r = -1`.
pub fn lambda(r: f64) -> f64 {
    if r == -1.0 {
        return 2.0;
    }
    1.0 - special::sin_pi(r) / (PI * (r + 1.0))
}

/// N-term partial sum of
/// `Γ(r+1) Σ_k (-1)^{k+1} ζ(k-r-1) / (k! Γ(r+2-k))`, for non-integer `r > -1`.
///
/// The gamma ratio equals `C(r+1, k)/(r+1)`; it is advanced by the
/// falling-factorial recurrence so the individual gamma values never
/// overflow.
pub fn mu_series_truncated(r: f64, n: usize) -> Result<f64, MuError> {
    mu_series_truncated_with(r, n, &EvalPrecision::default())
}

pub fn mu_series_truncated_with(
    r: f64,
    n: usize,
    precision: &EvalPrecision,
) -> Result<f64, MuError> {
    check_non_integer(r)?;
    if r <= -1.0 {
        return Err(MuError::NonConvergentDomain(r));
    }
    if n == 0 {
        return Err(MuError::ZeroTruncation);
    }
    if n > precision.max_terms {
        return Err(MuError::TruncationTooLarge {
            requested: n,
            max: precision.max_terms,
        });
    }
    let p = r + 1.0;
    let mut binom = 1.0; // C(r+1, 0)
    let mut sum = 0.0;
    for k in 1..=n {
        let k_f = k as f64;
        binom *= (p - (k_f - 1.0)) / k_f;
        let z = special::zeta_real(k_f - r - 1.0)?;
        let term = binom * z;
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum / p)
}

/// `r ↦ (-r-2, sin(πr) Γ(-r-1) / π)`, so that `μ(-r-2) = factor · μ(r)`.
pub fn reciprocity_map(r: f64) -> Result<(f64, f64), MuError> {
    check_non_integer(r)?;
    let factor = special::sin_pi(r) * special::gamma(-r - 1.0)? / PI;
    Ok((-r - 2.0, factor))
}

fn check_non_integer(r: f64) -> Result<(), MuError> {
    if !r.is_finite() {
        return Err(MuError::NonFinite(r));
    }
    if is_integer(r) {
        return Err(MuError::IntegerArgument(r));
    }
    Ok(())
}

/// μ(r) with the default certificate truncation.
pub fn mu(r: f64) -> Result<MuValue, MuError> {
    mu_with(r, DEFAULT_TRUNCATION, &EvalPrecision::default())
}

pub fn mu_with(r: f64, truncation: usize, precision: &EvalPrecision) -> Result<MuValue, MuError> {
    if !r.is_finite() {
        return Err(MuError::NonFinite(r));
    }
    if is_integer(r) {
        if r == -1.0 {
            return Err(MuError::Logarithmic);
        }
        if r < 0.0 {
            return Err(MuError::NegativeInteger(r));
        }
        if r > MAX_EXACT_ARGUMENT as f64 {
            return Err(MuError::ArgumentTooLarge(r as u64));
        }
        let r_int = r as u64;
        let routes = RouteValues {
            zeta_sum: mu_int_zeta_sum(r_int),
            bernoulli_sum: mu_int_bernoulli(r_int),
            closed_form: mu_int_closed(r_int),
        };
        debug_assert!(routes.agree());
        return Ok(MuValue {
            argument: r,
            branch: MuBranch::IntegerExact {
                value: routes.closed_form.clone(),
                routes,
            },
        });
    }

    let (series_argument, reciprocity) = if r > -1.0 {
        (r, None)
    } else {
        let mapped = -r - 2.0;
        let (_, factor) = reciprocity_map(mapped)?;
        (
            mapped,
            Some(Reciprocity {
                mapped_argument: mapped,
                factor,
            }),
        )
    };
    let series = mu_series_truncated_with(series_argument, truncation, precision)?;
    Ok(MuValue {
        argument: r,
        branch: MuBranch::NonIntegerZero {
            certificate: ZeroCertificate {
                lambda_value: lambda(r),
                truncation_n: truncation,
                truncated_series_value: series,
                reciprocity,
            },
        },
    })
}
