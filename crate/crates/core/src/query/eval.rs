use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use super::{Arg, Function, QueryAst};
use crate::exact::{self, Rational};
use crate::mucore::{self, MuBranch, MuError, Reciprocity, RouteValues, DEFAULT_TRUNCATION};
use crate::regint::{self, KnownLimit, PowerSeries, RegIntError, TailKind};
use crate::special::{self, is_integer, EvalPrecision, SpecialError};

/// Significant digits in every decimal rendering.
pub const DECIMAL_DIGITS: usize = 12;

const MAX_EXACT_INDEX: u64 = 1000;
const MAX_BINOMIAL_UPPER: u64 = 100_000;
const MAX_REGINT_TERMS: u64 = 2_000;
const MAX_MUSUM_TERMS: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{code}: {message}")]
pub struct EvalError {
    /// Stable machine-readable identifier.
    pub code: &'static str,
    pub message: String,
}

impl EvalError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        EvalError {
            code,
            message: message.into(),
        }
    }
}

impl From<SpecialError> for EvalError {
    fn from(e: SpecialError) -> Self {
        let code = match e {
            SpecialError::GammaPole(_) => "gamma_pole",
            SpecialError::ZetaPole => "zeta_pole",
            SpecialError::ZetaPoleProximity(_) => "zeta_pole_proximity",
            SpecialError::IntegerArgument(_) => "integer_argument",
            SpecialError::NonFinite(_) => "non_finite",
            SpecialError::InvalidPrecision(_) => "invalid_precision",
        };
        EvalError::new(code, e.to_string())
    }
}

impl From<MuError> for EvalError {
    fn from(e: MuError) -> Self {
        let code = match &e {
            MuError::Special(inner) => return inner.clone().into(),
            MuError::NegativeInteger(_) => "negative_integer_mu",
            MuError::Logarithmic => "logarithmic_case",
            MuError::NonConvergentDomain(_) => "non_convergent_domain",
            MuError::IntegerArgument(_) => "integer_argument",
            MuError::NonFinite(_) => "non_finite",
            MuError::ArgumentTooLarge(_) => "argument_too_large",
            MuError::DivergentSlice(..) => "divergent_slice",
            MuError::ZeroSliceIndex => "domain",
            MuError::TruncationTooLarge { .. } | MuError::ZeroTruncation => "invalid_truncation",
        };
        EvalError::new(code, e.to_string())
    }
}

impl From<RegIntError> for EvalError {
    fn from(e: RegIntError) -> Self {
        let code = match &e {
            RegIntError::UnknownSeries { .. } => "unknown_series",
            RegIntError::DivergenceSuspected { .. } => "divergence_suspected",
            RegIntError::ZeroTruncation => "invalid_truncation",
            RegIntError::SeriesFile(_) => "series_file",
        };
        EvalError::new(code, e.to_string())
    }
}

/// Settings and user-supplied series available to [`evaluate`].
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub precision: EvalPrecision,
    /// Terms in the non-integer μ certificate.
    pub truncation: usize,
    pub user_series: Vec<PowerSeries>,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext {
            precision: EvalPrecision::default(),
            truncation: DEFAULT_TRUNCATION,
            user_series: Vec::new(),
        }
    }
}

impl EvalContext {
    fn series(&self, name: &str) -> Result<PowerSeries, EvalError> {
        if let Some(s) = self.user_series.iter().find(|s| s.name() == name) {
            return Ok(s.clone());
        }
        Ok(regint::builtin_series(name)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuDetails {
    pub branch: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes: Option<RouteValues>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reciprocity: Option<Reciprocity>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegintDetails {
    pub series: String,
    pub n: u64,
    pub tail_estimate: f64,
    pub tail_kind: TailKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known_limit: Option<KnownLimit>,
}

/// Outcome of one query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultDocument {
    pub query: String,
    pub function: &'static str,
    /// Exact value when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Rational>,
    pub decimal: String,
    pub value: f64,
    /// Which computation produced the value.
    pub route: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<MuDetails>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regint: Option<RegintDetails>,
}

fn render_f64(x: f64) -> String {
    match Rational::from_f64(x) {
        Some(q) => q.to_decimal_string(DECIMAL_DIGITS),
        None if x.is_nan() => "NaN".to_string(),
        None if x > 0.0 => "inf".to_string(),
        None => "-inf".to_string(),
    }
}

impl ResultDocument {
    fn numeric(ast: &QueryAst, value: f64, route: impl Into<String>) -> Result<Self, EvalError> {
        if !value.is_finite() {
            return Err(EvalError::new(
                "overflow",
                format!("{ast} = {value} is outside the double range"),
            ));
        }
        Ok(ResultDocument {
            query: ast.to_string(),
            function: ast.function.name(),
            exact: None,
            decimal: render_f64(value),
            value,
            route: route.into(),
            mu: None,
            regint: None,
        })
    }

    fn exact(ast: &QueryAst, value: Rational, route: impl Into<String>) -> Self {
        ResultDocument {
            query: ast.to_string(),
            function: ast.function.name(),
            decimal: value.to_decimal_string(DECIMAL_DIGITS),
            value: value.to_f64(),
            exact: Some(value),
            route: route.into(),
            mu: None,
            regint: None,
        }
    }

    /// Flat `(field, value)` pairs, in display order.
    pub fn fields(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("query".to_string(), self.query.clone()),
            ("function".to_string(), self.function.to_string()),
        ];
        if let Some(q) = &self.exact {
            out.push(("exact".into(), q.to_string()));
        }
        out.push(("decimal".into(), self.decimal.clone()));
        out.push(("route".into(), self.route.clone()));
        if let Some(mu) = &self.mu {
            out.push(("branch".into(), mu.branch.to_string()));
            if let Some(agree) = mu.routes_agree {
                out.push(("routes_agree".into(), agree.to_string()));
            }
            if let Some(r) = &mu.routes {
                out.push(("route_zeta_sum".into(), r.zeta_sum.to_string()));
                out.push(("route_bernoulli_sum".into(), r.bernoulli_sum.to_string()));
                out.push(("route_closed_form".into(), r.closed_form.to_string()));
            }
            if let Some(l) = mu.lambda {
                out.push(("lambda".into(), render_f64(l)));
            }
            if let Some(n) = mu.series_n {
                out.push(("series_n".into(), n.to_string()));
            }
            if let Some(v) = mu.series_value {
                out.push(("series_value".into(), render_f64(v)));
            }
            if let Some(rec) = &mu.reciprocity {
                out.push((
                    "reciprocity_argument".into(),
                    render_f64(rec.mapped_argument),
                ));
                out.push(("reciprocity_factor".into(), render_f64(rec.factor)));
            }
        }
        if let Some(r) = &self.regint {
            out.push(("series".into(), r.series.clone()));
            out.push(("n".into(), r.n.to_string()));
            out.push(("tail_estimate".into(), render_f64(r.tail_estimate)));
            out.push((
                "tail_kind".into(),
                match r.tail_kind {
                    TailKind::Declared => "declared",
                    TailKind::Alternating => "alternating",
                    TailKind::Unbounded => "unbounded",
                }
                .into(),
            ));
            if let Some(k) = r.known_limit {
                out.push(("known_limit".into(), k.expression.to_string()));
                out.push(("known_limit_decimal".into(), render_f64(k.value)));
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.fields() {
            let _ = writeln!(s, "{k}: {v}");
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("field,value\n");
        for (k, v) in self.fields() {
            let _ = writeln!(s, "{},{}", csv_escape(&k), csv_escape(&v));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result documents always serialize")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn number(arg: &Arg) -> &Rational {
    match arg {
        Arg::Number(q) => q,
        Arg::Name(_) => unreachable!("argument kinds are checked by the parser"),
    }
}

/// Real argument; rejects values whose integrality changes under rounding.
fn real(q: &Rational) -> Result<f64, EvalError> {
    let x = q.to_f64();
    if !x.is_finite() {
        return Err(EvalError::new(
            "out_of_range",
            format!("{q} is outside the double range"),
        ));
    }
    if !q.is_integer() && is_integer(x) {
        return Err(EvalError::new(
            "unrepresentable",
            format!("non-integer {q} rounds to the integer {x} in double precision"),
        ));
    }
    Ok(x)
}

fn non_negative_int(q: &Rational, what: &str, max: u64) -> Result<u64, EvalError> {
    let n = q.to_i64().filter(|n| *n >= 0).ok_or_else(|| {
        EvalError::new(
            "domain",
            format!("{what} must be a non-negative integer, got {q}"),
        )
    })?;
    let n = n as u64;
    if n > max {
        return Err(EvalError::new(
            "argument_too_large",
            format!("{what} = {n} exceeds the limit {max}"),
        ));
    }
    Ok(n)
}

pub fn evaluate(ast: &QueryAst, ctx: &EvalContext) -> Result<ResultDocument, EvalError> {
    let args = &ast.args;
    match ast.function {
        Function::Mu => eval_mu(ast, number(&args[0]), ctx),
        Function::Zeta => {
            let s = number(&args[0]);
            if *s == Rational::one() {
                return Err(SpecialError::ZetaPole.into());
            }
            if s.is_integer() && (s.is_negative() || s.is_zero()) {
                let k = non_negative_int(&-s, "-s", MAX_EXACT_INDEX)?;
                return Ok(ResultDocument::exact(
                    ast,
                    exact::zeta_neg_int(k),
                    "exact: (-1)^k B_(k+1)/(k+1)",
                ));
            }
            let x = real(s)?;
            let route = if x > -0.5 {
                "numeric: accelerated eta series"
            } else {
                "numeric: functional equation"
            };
            ResultDocument::numeric(ast, special::zeta_real(x)?, route)
        }
        Function::Gamma => {
            let x = number(&args[0]);
            if x.is_integer() && !x.is_negative() && !x.is_zero() {
                let n = non_negative_int(x, "x", MAX_EXACT_INDEX)?;
                let fact = (1..n).fold(BigInt::from(1u32), |acc, k| acc * BigInt::from(k));
                return Ok(ResultDocument::exact(
                    ast,
                    Rational::from_integer(fact),
                    "exact: (x-1)!",
                ));
            }
            let xf = real(x)?;
            let route = if xf < 0.5 {
                "numeric: reflection formula over Lanczos"
            } else {
                "numeric: Lanczos approximation"
            };
            ResultDocument::numeric(ast, special::gamma(xf)?, route)
        }
        Function::Bernoulli => {
            let n = non_negative_int(number(&args[0]), "n", MAX_EXACT_INDEX)?;
            Ok(ResultDocument::exact(
                ast,
                exact::bernoulli(n),
                "exact: Bernoulli recurrence",
            ))
        }
        Function::Binomial => {
            let (m, l) = (number(&args[0]), number(&args[1]));
            let l = l.to_i64().ok_or_else(|| {
                EvalError::new("domain", format!("lower index must be an integer, got {l}"))
            })?;
            if m.is_integer() {
                let mi = m
                    .to_i64()
                    .filter(|v| v.unsigned_abs() <= MAX_BINOMIAL_UPPER)
                    .ok_or_else(|| {
                        EvalError::new(
                            "argument_too_large",
                            format!("upper index {m} exceeds {MAX_BINOMIAL_UPPER}"),
                        )
                    })?;
                if l < 0 || l as u64 > MAX_BINOMIAL_UPPER {
                    if l < 0 {
                        return Ok(ResultDocument::exact(
                            ast,
                            Rational::zero(),
                            "exact: outside 0..=m",
                        ));
                    }
                    return Err(EvalError::new(
                        "argument_too_large",
                        format!("lower index {l} exceeds {MAX_BINOMIAL_UPPER}"),
                    ));
                }
                let v = special::binomial_integer_upper(mi, l as u64);
                return Ok(ResultDocument::exact(ast, v, "exact: factorial ratio"));
            }
            let mf = real(m)?;
            if l < 0 {
                return Ok(ResultDocument::exact(
                    ast,
                    Rational::zero(),
                    "exact: negative lower index",
                ));
            }
            if l as u64 > MAX_BINOMIAL_UPPER {
                return Err(EvalError::new(
                    "argument_too_large",
                    format!("lower index {l} exceeds {MAX_BINOMIAL_UPPER}"),
                ));
            }
            ResultDocument::numeric(
                ast,
                special::binomial_real(mf, l as u64),
                "numeric: gamma ratio as falling factorial",
            )
        }
        Function::Lambda => {
            let r = real(number(&args[0]))?;
            let route = if r == -1.0 {
                "limit value at r = -1"
            } else {
                "numeric: 1 - sin(pi r)/(pi (r+1))"
            };
            ResultDocument::numeric(ast, mucore::lambda(r), route)
        }
        Function::Delta => {
            let (r, n) = (number(&args[0]), number(&args[1]));
            let n = non_negative_int(n, "n", u64::MAX)?;
            if n == 0 {
                return Err(MuError::ZeroSliceIndex.into());
            }
            if r.is_integer() && !r.is_negative() {
                let ri = non_negative_int(r, "r", MAX_EXACT_INDEX)?;
                let v = mucore::delta_binomial_form(ri, n);
                debug_assert_eq!(v, mucore::delta_exact(ri, n));
                return Ok(ResultDocument::exact(
                    ast,
                    v,
                    "exact: binomial expansion of (n-1)^(r+1)",
                ));
            }
            let rf = real(r)?;
            ResultDocument::numeric(
                ast,
                mucore::delta(rf, n)?,
                "numeric: (n^(r+1) - (n-1)^(r+1))/(r+1)",
            )
        }
        Function::Regint => {
            let name = match &args[0] {
                Arg::Name(n) => n.as_str(),
                Arg::Number(_) => unreachable!("argument kinds are checked by the parser"),
            };
            let n = non_negative_int(number(&args[1]), "N", MAX_REGINT_TERMS)?;
            let series = ctx.series(name)?;
            let result = regint::regularize_integral(&series, n)?;
            let mut doc = ResultDocument::exact(
                ast,
                result.exact_partial_sum.clone(),
                "exact: sum of a_k mu(k), rounded once",
            );
            doc.regint = Some(RegintDetails {
                series: result.series,
                n: result.partial_sum_n,
                tail_estimate: result.tail_estimate,
                tail_kind: result.tail_kind,
                known_limit: result.known_limit,
            });
            Ok(doc)
        }
        Function::Musum => {
            let n = non_negative_int(number(&args[0]), "N", MAX_MUSUM_TERMS)?;
            Ok(ResultDocument::exact(
                ast,
                regint::mu_sum_partial(n),
                "exact: partial sum of mu(k)",
            ))
        }
    }
}

fn eval_mu(ast: &QueryAst, r: &Rational, ctx: &EvalContext) -> Result<ResultDocument, EvalError> {
    let x = if r.is_integer() {
        // exact integers dispatch on the rational, not on its rounding
        match r.to_i64() {
            Some(v) if v.unsigned_abs() <= 1 << 53 => v as f64,
            _ => {
                return Err(if r.is_negative() {
                    EvalError::new(
                        "negative_integer_mu",
                        format!("mu is undefined at negative integer {r}"),
                    )
                } else {
                    EvalError::new(
                        "argument_too_large",
                        format!("integer argument {r} is too large"),
                    )
                })
            }
        }
    } else {
        real(r)?
    };
    let value = mucore::mu_with(x, ctx.truncation, &ctx.precision)?;
    let mut doc = ResultDocument::exact(ast, value.exact(), "");
    match value.branch {
        MuBranch::IntegerExact { routes, .. } => {
            doc.route =
                "exact: closed form, checked against zeta-sum and Bernoulli-sum routes".into();
            doc.mu = Some(MuDetails {
                branch: "integer",
                routes_agree: Some(routes.agree()),
                routes: Some(routes),
                lambda: None,
                series_n: None,
                series_value: None,
                reciprocity: None,
            });
        }
        MuBranch::NonIntegerZero { certificate } => {
            doc.route = if certificate.reciprocity.is_some() {
                "non-integer branch: zero, certificate transported by reciprocity".into()
            } else {
                "non-integer branch: zero, with truncated series certificate".into()
            };
            doc.mu = Some(MuDetails {
                branch: "noninteger",
                routes_agree: None,
                routes: None,
                lambda: Some(certificate.lambda_value),
                series_n: Some(certificate.truncation_n),
                series_value: Some(certificate.truncated_series_value),
                reciprocity: certificate.reciprocity,
            });
        }
    }
    Ok(doc)
}
