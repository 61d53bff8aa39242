//! Runs the library's identities as a user-facing pass/fail report.
//!
//! Every check is a pure function, so a suite fans its checks out over
//! scoped threads and collects the results in declaration order.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact::{self, bernoulli, binomial_exact, Rational};
use crate::mucore::{self, delta_binomial_form, delta_exact, lambda, mu_series_truncated};
use crate::regint::{self, builtin_series, mu_sum_partial, regularize_integral, PowerSeries};
use crate::special::{self, gamma, sin_pi, zeta_real};

/// Seed for the randomized point sets, fixed so reports are reproducible.
pub const VERIFY_SEED: u64 = 0x5EED_2E7A;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Exact,
    Special,
    Mu,
    Regint,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["exact", "special", "mu", "regint", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Exact => "exact",
            Suite::Special => "special",
            Suite::Mu => "mu",
            Suite::Regint => "regint",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite `{0}`; expected one of exact, special, mu, regint, all")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Suite::Exact),
            "special" => Ok(Suite::Special),
            "mu" => Ok(Suite::Mu),
            "regint" => Ok(Suite::Regint),
            "all" => Ok(Suite::All),
            other => Err(UnknownSuite(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    /// Largest residual seen; exact checks report `|lhs - rhs|` rounded.
    pub worst_residual: f64,
    pub tolerance: f64,
    pub points: usize,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(
                out,
                "{status} {:<7} {:<width$}  worst {:.3e}  tol {:.1e}  points {}",
                c.suite.name(),
                c.name,
                c.worst_residual,
                c.tolerance,
                c.points,
            );
            if let Some(msg) = &c.failure {
                let _ = write!(out, "  ({msg})");
            }
            out.push('\n');
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,check,passed,worst_residual,tolerance,points\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{:e},{:e},{}",
                c.suite.name(),
                c.name,
                c.passed,
                c.worst_residual,
                c.tolerance,
                c.points
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

type CheckFn = fn() -> Outcome;

fn suite_checks(suite: Suite) -> Vec<(Suite, &'static str, CheckFn)> {
    match suite {
        Suite::Exact => vec![
            (
                suite,
                "bernoulli_recurrence",
                check_bernoulli_recurrence as CheckFn,
            ),
            (suite, "bernoulli_akiyama_tanigawa", check_akiyama_tanigawa),
            (
                suite,
                "binomial_successor_identity",
                check_binomial_successor,
            ),
            (
                suite,
                "bernoulli_binomial_sum",
                check_bernoulli_binomial_sum,
            ),
            (
                suite,
                "zeta_nonpositive_integers",
                check_zeta_neg_int_values,
            ),
            (suite, "rational_text_round_trip", check_rational_round_trip),
        ],
        Suite::Special => vec![
            (suite, "gamma_recurrence", check_gamma_recurrence as CheckFn),
            (suite, "reflection_residual", check_reflection),
            (suite, "gamma_sin_identity", check_gamma_sin),
            (suite, "zeta_vs_exact", check_zeta_vs_exact),
            (suite, "zeta_functional_route", check_zeta_functional_route),
            (suite, "zeta_known_values", check_zeta_known_values),
            (suite, "zeta_integral_representation", check_zeta_integral),
            (suite, "binomial_real_vs_gamma", check_binomial_real),
        ],
        Suite::Mu => vec![
            (suite, "route_agreement", check_route_agreement as CheckFn),
            (suite, "sign_magnitude_law", check_sign_magnitude),
            (suite, "closed_form_table", check_closed_form_table),
            (suite, "delta_consistency", check_delta_consistency),
            (suite, "telescoping", check_telescoping),
            (suite, "lambda_bounds", check_lambda_bounds),
            (suite, "certificate_decay", check_certificate_decay),
            (
                suite,
                "reciprocity_involution",
                check_reciprocity_involution,
            ),
        ],
        Suite::Regint => vec![
            (suite, "mu_sum_partial_exact", check_mu_sum_exact as CheckFn),
            (suite, "mu_sum_limit", check_mu_sum_limit),
            (suite, "exp_convergence", check_exp_convergence),
            (suite, "alternating_tail_contract", check_tail_contract),
            (suite, "known_limits_within_tail", check_known_limits),
            (suite, "linearity", check_linearity),
        ],
        Suite::All => [Suite::Exact, Suite::Special, Suite::Mu, Suite::Regint]
            .into_iter()
            .flat_map(suite_checks)
            .collect(),
    }
}

/// Runs every check of `suite`, concurrently.
pub fn verify(suite: Suite) -> VerifyReport {
    let checks = suite_checks(suite);
    let checks: Vec<CheckResult> = thread::scope(|scope| {
        let handles: Vec<_> = checks
            .iter()
            .map(|&(s, name, f)| (s, name, scope.spawn(f)))
            .collect();
        handles
            .into_iter()
            .map(|(s, name, handle)| {
                let outcome = handle.join().unwrap_or_else(|_| Outcome::panicked());
                outcome.finish(s, name)
            })
            .collect()
    });
    VerifyReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// Residual accumulator for one check.
struct Outcome {
    worst: f64,
    tolerance: f64,
    points: usize,
    failure: Option<String>,
}

impl Outcome {
    fn new(tolerance: f64) -> Self {
        Outcome {
            worst: 0.0,
            tolerance,
            points: 0,
            failure: None,
        }
    }

    fn exact() -> Self {
        Outcome::new(0.0)
    }

    fn panicked() -> Self {
        let mut o = Outcome::exact();
        o.fail(|| "check panicked".into());
        o
    }

    fn fail(&mut self, msg: impl FnOnce() -> String) {
        if self.failure.is_none() {
            self.failure = Some(msg());
        }
    }

    fn residual(&mut self, residual: f64, at: impl FnOnce() -> String) {
        self.points += 1;
        if residual.is_nan() || self.worst.is_nan() {
            self.worst = f64::NAN;
            self.fail(|| format!("NaN residual at {}", at()));
            return;
        }
        if residual > self.worst {
            self.worst = residual;
        }
        if residual > self.tolerance {
            self.fail(|| format!("residual {residual:e} at {}", at()));
        }
    }

    fn rel(&mut self, got: f64, want: f64, at: impl FnOnce() -> String) {
        let scale = want.abs();
        let diff = (got - want).abs();
        let r = if scale == 0.0 { diff } else { diff / scale };
        self.residual(r, at);
    }

    fn abs(&mut self, got: f64, want: f64, at: impl FnOnce() -> String) {
        self.residual((got - want).abs(), at);
    }

    fn equal(&mut self, lhs: &Rational, rhs: &Rational, at: impl FnOnce() -> String) {
        self.points += 1;
        if lhs != rhs {
            let diff = (lhs - rhs).abs().to_f64();
            if diff > self.worst || diff.is_nan() {
                self.worst = diff;
            }
            self.fail(|| format!("{lhs} != {rhs} at {}", at()));
        }
    }

    fn require(&mut self, cond: bool, at: impl FnOnce() -> String) {
        self.points += 1;
        if !cond {
            self.fail(at);
        }
    }

    fn err(&mut self, e: impl fmt::Display, at: impl FnOnce() -> String) {
        self.points += 1;
        self.fail(|| format!("{} failed: {e}", at()));
    }

    fn finish(self, suite: Suite, name: &'static str) -> CheckResult {
        CheckResult {
            suite,
            name,
            passed: self.failure.is_none(),
            worst_residual: self.worst,
            tolerance: self.tolerance,
            points: self.points,
            failure: self.failure,
        }
    }
}

// ---- exact ------------------------------------------------------------

fn check_bernoulli_recurrence() -> Outcome {
    let mut o = Outcome::exact();
    for m in 2..=62u64 {
        let s: Rational = (0..m)
            .map(|k| binomial_exact(m, k as i64) * bernoulli(k))
            .sum();
        o.equal(&s, &Rational::zero(), || format!("m = {m}"));
    }
    o
}

/// Akiyama–Tanigawa yields `B_1 = +1/2`; the sign is flipped to match.
fn akiyama_tanigawa(n: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(Rational::new(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = Rational::from_integer(j as i64) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

fn check_akiyama_tanigawa() -> Outcome {
    let mut o = Outcome::exact();
    for (n, want) in akiyama_tanigawa(60).iter().enumerate() {
        o.equal(&bernoulli(n as u64), want, || format!("n = {n}"));
    }
    o
}

fn check_binomial_successor() -> Outcome {
    let mut o = Outcome::exact();
    for r in 0..=60u64 {
        for k in 0..=(r as i64 + 1) {
            let lhs = binomial_exact(r + 1, k);
            let rhs = Rational::new(k + 1, r as i64 + 2) * binomial_exact(r + 2, k + 1);
            o.equal(&lhs, &rhs, || format!("r = {r}, k = {k}"));
        }
    }
    o
}

fn check_bernoulli_binomial_sum() -> Outcome {
    let mut o = Outcome::exact();
    let minus_one = -Rational::one();
    for r in 0..=50 {
        o.equal(&exact::bernoulli_binomial_sum(r), &minus_one, || {
            format!("r = {r}")
        });
    }
    o
}

fn check_zeta_neg_int_values() -> Outcome {
    let mut o = Outcome::exact();
    let known = [
        (0, Rational::new(-1, 2)),
        (1, Rational::new(-1, 12)),
        (3, Rational::new(1, 120)),
    ];
    for (k, want) in &known {
        o.equal(&exact::zeta_neg_int(*k), want, || format!("zeta(-{k})"));
    }
    for j in 1..=30 {
        o.equal(&exact::zeta_neg_int(2 * j), &Rational::zero(), || {
            format!("zeta(-{})", 2 * j)
        });
    }
    o
}

fn check_rational_round_trip() -> Outcome {
    let mut o = Outcome::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    for _ in 0..1000 {
        let p: i64 = rng.gen_range(-1_000_000_000_000..=1_000_000_000_000);
        let q: i64 = rng.gen_range(1..=1_000_000_000_000);
        let x = Rational::new(p, q);
        match x.to_string().parse::<Rational>() {
            Ok(back) => o.equal(&back, &x, || format!("text of {x}")),
            Err(e) => o.err(e, || format!("parsing {x}")),
        }
        // decimal form of the dyadic/decimal part: p / 10^k
        let k = rng.gen_range(0..12);
        let d = Rational::new(p, 10i64.pow(k));
        match d
            .to_terminating_decimal()
            .map(|t| Rational::from_decimal_str(&t))
        {
            Some(Ok(back)) => o.equal(&back, &d, || format!("decimal of {d}")),
            Some(Err(e)) => o.err(e, || format!("decimal of {d}")),
            None => o.require(false, || format!("{d} should terminate")),
        }
    }
    o
}

// ---- special ----------------------------------------------------------

fn check_gamma_recurrence() -> Outcome {
    let mut o = Outcome::new(1e-11);
    // cell midpoints of a 1000-cell partition of [-20, 20]: never an integer
    for i in 0..1000 {
        let x = -20.0 + 0.04 * (i as f64 + 0.5);
        match (gamma(x + 1.0), gamma(x)) {
            (Ok(g1), Ok(g)) => o.rel(x * g, g1, || format!("x = {x}")),
            (Err(e), _) | (_, Err(e)) => o.err(e, || format!("gamma near {x}")),
        }
    }
    o
}

fn check_reflection() -> Outcome {
    let mut o = Outcome::new(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED ^ 1);
    let mut drawn = 0;
    while drawn < 1000 {
        let a: f64 = rng.gen_range(-10.0..10.0);
        if special::is_integer(a) {
            continue;
        }
        drawn += 1;
        let scale = (PI / sin_pi(a)).abs();
        match special::reflection_residual(a) {
            Ok(res) => o.residual(res.abs() / scale, || format!("a = {a}")),
            Err(e) => o.err(e, || format!("a = {a}")),
        }
    }
    o
}

fn check_gamma_sin() -> Outcome {
    let mut o = Outcome::new(1e-9);
    for r in [0.1, 0.5, 1.5, 2.75, -0.5] {
        let scale = (sin_pi(r) / PI).abs();
        for k in 1..=20 {
            match special::gamma_sin_identity_residual(r, k) {
                Ok(res) => o.residual(res.abs() / scale, || format!("r = {r}, k = {k}")),
                Err(e) => o.err(e, || format!("r = {r}, k = {k}")),
            }
        }
    }
    o
}

fn check_zeta_vs_exact() -> Outcome {
    let mut o = Outcome::new(1e-12);
    for k in 0..=25u64 {
        let want = exact::zeta_neg_int(k).to_f64();
        match zeta_real(-(k as f64)) {
            Ok(got) => o.abs(got, want, || format!("s = -{k}")),
            Err(e) => o.err(e, || format!("s = -{k}")),
        }
    }
    o
}

/// The functional equation evaluated at the integers, independently of the
/// exact shortcut `zeta_real` takes there.
fn check_zeta_functional_route() -> Outcome {
    let mut o = Outcome::new(1e-10);
    for k in 1..=25u64 {
        let want = exact::zeta_neg_int(k).to_f64();
        match special::zeta_reflected(-(k as f64)) {
            Ok(got) => o.rel(got, want, || format!("s = -{k}")),
            Err(e) => o.err(e, || format!("s = -{k}")),
        }
    }
    o
}

fn check_zeta_known_values() -> Outcome {
    let mut o = Outcome::new(1e-10);
    let known = [
        (2.0, PI * PI / 6.0),
        (4.0, PI.powi(4) / 90.0),
        (6.0, PI.powi(6) / 945.0),
        (0.5, -1.460_354_508_809_586_8),
        (-0.5, -0.207_886_224_977_354_57),
    ];
    for (s, want) in known {
        match zeta_real(s) {
            Ok(got) => o.rel(got, want, || format!("s = {s}")),
            Err(e) => o.err(e, || format!("s = {s}")),
        }
    }
    o
}

fn check_zeta_integral() -> Outcome {
    let mut o = Outcome::new(1e-6);
    for s in [1.5, 2.0, 3.0] {
        match (special::zeta_integral_representation(s), zeta_real(s)) {
            (Ok(q), Ok(z)) => o.rel(q, z, || format!("s = {s}")),
            (Err(e), _) | (_, Err(e)) => o.err(e, || format!("s = {s}")),
        }
    }
    o
}

fn check_binomial_real() -> Outcome {
    let mut o = Outcome::new(1e-11);
    for r in [0.5, -0.5, 1.25, 2.5, 7.3, -3.7] {
        let mut k_fact = 1.0;
        for k in 0..=20u64 {
            if k > 0 {
                k_fact *= k as f64;
            }
            let want = match (gamma(r + 1.0), gamma(r - k as f64 + 1.0)) {
                (Ok(a), Ok(b)) => a / (k_fact * b),
                (Err(e), _) | (_, Err(e)) => {
                    o.err(e, || format!("r = {r}, k = {k}"));
                    continue;
                }
            };
            o.rel(special::binomial_real(r, k), want, || {
                format!("r = {r}, k = {k}")
            });
        }
    }
    o
}

// ---- mu ---------------------------------------------------------------

fn check_route_agreement() -> Outcome {
    let mut o = Outcome::exact();
    for r in 0..=40 {
        let closed = mucore::mu_int_closed(r);
        o.equal(&mucore::mu_int_zeta_sum(r), &closed, || {
            format!("zeta route, r = {r}")
        });
        o.equal(&mucore::mu_int_bernoulli(r), &closed, || {
            format!("bernoulli route, r = {r}")
        });
    }
    o
}

fn check_sign_magnitude() -> Outcome {
    let mut o = Outcome::exact();
    for r in 0..=200u64 {
        let v = mucore::mu_int_closed(r);
        let magnitude = Rational::new(1, (r as i64 + 1) * (r as i64 + 2));
        o.equal(&v.abs(), &magnitude, || format!("|mu({r})|"));
        o.require(v.is_negative() == (r % 2 == 0), || {
            format!("sign of mu({r})")
        });
    }
    o
}

fn check_closed_form_table() -> Outcome {
    let mut o = Outcome::exact();
    let table = [
        "-1/2", "1/6", "-1/12", "1/20", "-1/30", "1/42", "-1/56", "1/72", "-1/90", "1/110",
        "-1/132",
    ];
    for (r, text) in table.iter().enumerate() {
        let want: Rational = text.parse().expect("table literal");
        match mucore::mu(r as f64) {
            Ok(v) => o.equal(&v.exact(), &want, || format!("mu({r})")),
            Err(e) => o.err(e, || format!("mu({r})")),
        }
    }
    for r in [0.25, 0.5, 1.5, 2.75, -0.5, -2.5] {
        match mucore::mu(r) {
            Ok(v) => o.equal(&v.exact(), &Rational::zero(), || format!("mu({r})")),
            Err(e) => o.err(e, || format!("mu({r})")),
        }
    }
    o
}

fn check_delta_consistency() -> Outcome {
    let mut o = Outcome::new(1e-12);
    for r in 0..=10u64 {
        for n in 1..=10u64 {
            let direct = delta_exact(r, n);
            let binom = delta_binomial_form(r, n);
            if direct != binom {
                o.equal(&binom, &direct, || format!("r = {r}, n = {n}"));
            }
            match mucore::delta(r as f64, n) {
                Ok(x) => o.rel(x, direct.to_f64(), || format!("float delta({r}, {n})")),
                Err(e) => o.err(e, || format!("delta({r}, {n})")),
            }
        }
    }
    o
}

fn check_telescoping() -> Outcome {
    let mut o = Outcome::exact();
    for r in 0..=10u64 {
        let mut partial = Rational::zero();
        for n in 1..=50u64 {
            partial += delta_exact(r, n);
            let want = Rational::from_integer(n).pow(r as i32 + 1) / Rational::from_integer(r + 1);
            o.equal(&partial, &want, || format!("r = {r}, N = {n}"));
        }
    }
    o
}

fn check_lambda_bounds() -> Outcome {
    let mut o = Outcome::new(1e-12);
    let mut min = (f64::INFINITY, 0.0);
    for i in 0..=10_000 {
        let r = -10.0 + 20.0 * i as f64 / 10_000.0;
        let l = lambda(r);
        o.require(l >= 0.7827, || format!("lambda({r}) = {l} below 0.7827"));
        o.residual((l - 2.0).max(0.0), || format!("lambda({r}) above 2"));
        if l < min.0 {
            min = (l, r);
        }
    }
    let (l_min, r_min) = min;
    let near_root = (r_min - 0.4303).abs() < 5e-3 || (r_min + 2.4303).abs() < 5e-3;
    o.require(near_root, || format!("minimum located at r = {r_min}"));
    o.require((l_min - 0.78277).abs() < 1e-4, || {
        format!("minimum value {l_min}")
    });
    o.require(lambda(-1.0) == 2.0, || "lambda(-1) != 2".into());
    o
}

fn check_certificate_decay() -> Outcome {
    let mut o = Outcome::exact();
    for r in [0.25, 0.5, 1.5, 2.75] {
        let mut previous = f64::INFINITY;
        for n in [25, 50, 100, 200] {
            match mu_series_truncated(r, n) {
                Ok(v) => {
                    o.require(v.abs() <= previous, || format!("|series({r}, {n})| grew"));
                    previous = v.abs();
                }
                Err(e) => o.err(e, || format!("series({r}, {n})")),
            }
        }
    }
    o
}

fn check_reciprocity_involution() -> Outcome {
    let mut o = Outcome::new(1e-14);
    for i in 0..400 {
        let r = -9.975 + 0.05 * i as f64;
        if special::is_integer(r) {
            continue;
        }
        let round_trip = mucore::reciprocity_map(r).and_then(|(m, _)| mucore::reciprocity_map(m));
        match round_trip {
            Ok((back, _)) => o.abs(back, r, || format!("r = {r}")),
            Err(e) => o.err(e, || format!("r = {r}")),
        }
    }
    o
}

// ---- regint -----------------------------------------------------------

fn check_mu_sum_exact() -> Outcome {
    let mut o = Outcome::exact();
    // μ(k) = (-1)^{k+1} (1/(k+1) - 1/(k+2)), accumulated one fraction at a time
    let mut acc = Rational::zero();
    for k in 0..=100u64 {
        let split = Rational::new(1, k as i64 + 1) - Rational::new(1, k as i64 + 2);
        acc = if k % 2 == 0 { acc - split } else { acc + split };
        o.equal(&mu_sum_partial(k), &acc, || format!("N = {k}"));
    }
    o
}

fn check_mu_sum_limit() -> Outcome {
    let mut o = Outcome::new(1e-6);
    o.abs(
        mu_sum_partial(1000).to_f64(),
        regint::double_integral_remark(),
        || "N = 1000".into(),
    );
    o
}

fn check_exp_convergence() -> Outcome {
    let mut o = Outcome::new(1e-12);
    match builtin_series("exp").and_then(|s| regularize_integral(&s, 20)) {
        Ok(res) => o.abs(res.value, -(-1f64).exp(), || "exp, N = 20".into()),
        Err(e) => o.err(e, || "regint(exp, 20)".into()),
    }
    o
}

fn check_tail_contract() -> Outcome {
    let mut o = Outcome::exact();
    for name in ["exp", "geometric"] {
        let series = match builtin_series(name) {
            Ok(s) => s,
            Err(e) => {
                o.err(e, || name.into());
                continue;
            }
        };
        for n in [10u64, 20, 50] {
            match (
                regularize_integral(&series, n),
                regularize_integral(&series, 2 * n),
            ) {
                (Ok(a), Ok(b)) => {
                    let gap = (&a.exact_partial_sum - &b.exact_partial_sum).abs().to_f64();
                    o.require(gap <= a.tail_estimate, || {
                        format!("{name}, N = {n}: gap {gap:e} > tail {:e}", a.tail_estimate)
                    });
                }
                (Err(e), _) | (_, Err(e)) => o.err(e, || format!("{name}, N = {n}")),
            }
        }
    }
    o
}

fn check_known_limits() -> Outcome {
    let mut o = Outcome::exact();
    for name in regint::BUILTIN_SERIES {
        let res = builtin_series(name).and_then(|s| regularize_integral(&s, 20));
        match res {
            Ok(res) => {
                let Some(limit) = res.known_limit else {
                    o.require(false, || format!("{name} has no known limit"));
                    continue;
                };
                let gap = (res.value - limit.value).abs();
                // one ulp of slack for the rounding of the limit itself
                let bound = res.tail_estimate + limit.value.abs() * f64::EPSILON;
                o.require(gap <= bound, || {
                    format!(
                        "{name}: |value - {}| = {gap:e} > {bound:e}",
                        limit.expression
                    )
                });
            }
            Err(e) => o.err(e, || format!("regint({name}, 20)")),
        }
    }
    o
}

fn check_linearity() -> Outcome {
    let mut o = Outcome::exact();
    let pairs = [("exp", "geometric"), ("sin", "cos"), ("exp", "cos")];
    let weights = [
        (Rational::new(3, 2), Rational::new(-2, 7)),
        (Rational::new(-5, 3), Rational::new(1, 4)),
    ];
    for (f_name, g_name) in pairs {
        let (f, g) = match (builtin_series(f_name), builtin_series(g_name)) {
            (Ok(f), Ok(g)) => (f, g),
            (Err(e), _) | (_, Err(e)) => {
                o.err(e, || format!("{f_name}, {g_name}"));
                continue;
            }
        };
        for (alpha, beta) in &weights {
            let combo = PowerSeries::linear_combination(alpha.clone(), &f, beta.clone(), &g);
            let results = (
                regularize_integral(&combo, 20),
                regularize_integral(&f, 20),
                regularize_integral(&g, 20),
            );
            match results {
                (Ok(c), Ok(rf), Ok(rg)) => {
                    let want = alpha * &rf.exact_partial_sum + beta * &rg.exact_partial_sum;
                    o.equal(&c.exact_partial_sum, &want, || {
                        format!("{alpha}*{f_name} + {beta}*{g_name}")
                    });
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                    o.err(e, || format!("{alpha}*{f_name} + {beta}*{g_name}"))
                }
            }
        }
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn all_is_union_of_suites() {
        let all = suite_checks(Suite::All).len();
        let parts: usize = [Suite::Exact, Suite::Special, Suite::Mu, Suite::Regint]
            .into_iter()
            .map(|s| suite_checks(s).len())
            .sum();
        assert_eq!(all, parts);
    }

    #[test]
    fn akiyama_tanigawa_small() {
        let b = akiyama_tanigawa(4);
        assert_eq!(b[1], Rational::new(-1, 2));
        assert_eq!(b[2], Rational::new(1, 6));
        assert_eq!(b[4], Rational::new(-1, 30));
    }

    #[test]
    fn outcome_tracks_worst_and_first_failure() {
        let mut o = Outcome::new(1e-3);
        o.residual(1e-4, || "a".into());
        o.residual(5e-3, || "b".into());
        o.residual(1e-2, || "c".into());
        let c = o.finish(Suite::Mu, "t");
        assert!(!c.passed);
        assert_eq!(c.worst_residual, 1e-2);
        assert_eq!(c.points, 3);
        assert!(c.failure.unwrap().ends_with("at b"));
    }

    #[test]
    fn nan_residual_fails() {
        let mut o = Outcome::new(1.0);
        o.rel(f64::NAN, 1.0, || "x".into());
        assert!(!o.finish(Suite::Special, "t").passed);
    }

    #[test]
    fn special_suite_passes() {
        let report = verify(Suite::Special);
        assert!(report.passed, "{}", report.to_text());
        assert!(report.check("reflection_residual").unwrap().worst_residual <= 1e-9);
    }

    #[test]
    fn mu_suite_passes() {
        let report = verify(Suite::Mu);
        assert!(report.passed, "{}", report.to_text());
        assert_eq!(report.check("route_agreement").unwrap().points, 82);
    }

    #[test]
    fn report_renderings() {
        let report = verify(Suite::Regint);
        assert!(report.passed, "{}", report.to_text());
        let csv = report.to_csv();
        assert!(csv.starts_with("suite,check,passed,worst_residual,tolerance,points\n"));
        assert_eq!(csv.lines().count(), report.checks.len() + 1);
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["passed"], true);
        assert!(report.to_text().ends_with("checks passed\n"));
    }
}
