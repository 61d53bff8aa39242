//! λ curve data on a regular grid.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::exact::Rational;
use crate::mucore::lambda;

pub const MAX_GRID_STEPS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("step must be positive, got {0}")]
    NonPositiveStep(String),
    #[error("empty range: from {from} is above to {to}")]
    EmptyRange { from: String, to: String },
    #[error("grid has {steps} steps, limit is {MAX_GRID_STEPS}")]
    GridTooLarge { steps: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaRow {
    pub r: f64,
    pub lambda: f64,
    /// Exact grid point is `numer / LambdaTable::denom`.
    #[serde(skip)]
    numer: BigInt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct LambdaTable {
    pub rows: Vec<LambdaRow>,
    #[serde(skip)]
    denom: BigInt,
}

/// Rows `r_i = from + i·step` for `r_i <= to`. Grid points are formed in
/// exact arithmetic and rounded once, so `-1` is hit exactly whenever it
/// lies on the grid.
pub fn lambda_table(
    from: &Rational,
    to: &Rational,
    step: &Rational,
) -> Result<LambdaTable, TableError> {
    if step.is_negative() || step.is_zero() {
        return Err(TableError::NonPositiveStep(step.to_string()));
    }
    if from > to {
        return Err(TableError::EmptyRange {
            from: from.to_string(),
            to: to.to_string(),
        });
    }
    let span = (to - from) / step;
    let steps = span.numer() / span.denom();
    let steps_u64 = u64::try_from(&steps).ok().filter(|s| *s <= MAX_GRID_STEPS);
    let Some(steps) = steps_u64 else {
        return Err(TableError::GridTooLarge {
            steps: steps.to_string(),
        });
    };
    // r_i = (a + i·b) / d over a shared denominator
    let denom = from.denom().lcm(step.denom());
    let a = from.numer() * (&denom / from.denom());
    let b = step.numer() * (&denom / step.denom());
    let mut rows = Vec::with_capacity(steps as usize + 1);
    let mut numer = a;
    for _ in 0..=steps {
        let r = ratio_to_f64(&numer, &denom);
        rows.push(LambdaRow {
            r,
            lambda: lambda(r),
            numer: numer.clone(),
        });
        numer += &b;
    }
    Ok(LambdaTable { rows, denom })
}

/// Correctly rounded `n / d`.
fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    const EXACT: i64 = 1 << 53;
    match (n.to_i64(), d.to_i64()) {
        // both operands exact in binary64, so the one division rounds once
        (Some(n), Some(d)) if n.abs() <= EXACT && d <= EXACT => n as f64 / d as f64,
        _ => Rational::new(n.clone(), d.clone()).to_f64(),
    }
}

impl LambdaTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row with the smallest λ (first one on ties).
    pub fn min(&self) -> Option<&LambdaRow> {
        self.rows
            .iter()
            .fold(None, |best: Option<&LambdaRow>, row| match best {
                Some(b) if b.lambda <= row.lambda => Some(b),
                _ => Some(row),
            })
    }

    pub fn max(&self) -> Option<&LambdaRow> {
        self.rows
            .iter()
            .fold(None, |best: Option<&LambdaRow>, row| match best {
                Some(b) if b.lambda >= row.lambda => Some(b),
                _ => Some(row),
            })
    }

    /// `r,lambda` header, then one row per grid point. `r` is written as its
    /// exact decimal, λ with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,lambda\n");
        for row in &self.rows {
            let exact_r = Rational::new(row.numer.clone(), self.denom.clone());
            let r_text = exact_r
                .to_terminating_decimal()
                .unwrap_or_else(|| exact_r.to_decimal_string(17));
            let l_text = Rational::from_f64(row.lambda)
                .map(|q| q.to_decimal_string(12))
                .unwrap_or_else(|| "NaN".into());
            let _ = writeln!(out, "{r_text},{l_text}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let _ = writeln!(out, "{:>12} {:.12}", row.r, row.lambda);
        }
        out
    }
}
