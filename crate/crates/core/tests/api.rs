#![allow(clippy::excessive_precision)]

use zetareg_core::exact::{bernoulli, BernoulliTable, Rational};
use zetareg_core::mucore::{mu, MuBranch, MuError};
use zetareg_core::query::{evaluate, parse, EvalContext, ParseErrorCode};
use zetareg_core::regint::{
    builtin_series, parse_series_file, regularize_integral, PowerSeries, TailKind,
};
use zetareg_core::special::{binomial_real, gamma, zeta_real, SpecialError};
use zetareg_core::verify::{verify, Suite};

fn eval(text: &str) -> zetareg_core::query::ResultDocument {
    evaluate(&parse(text).unwrap(), &EvalContext::default()).unwrap()
}

fn eval_err(text: &str) -> &'static str {
    evaluate(&parse(text).unwrap(), &EvalContext::default())
        .unwrap_err()
        .code
}

#[test]
fn mu_three_document() {
    let doc = eval("mu(3)");
    assert_eq!(doc.exact, Some(Rational::new(1, 20)));
    assert_eq!(doc.decimal, "0.05");
    let mu = doc.mu.unwrap();
    assert_eq!(mu.branch, "integer");
    assert_eq!(mu.routes_agree, Some(true));
}

#[test]
fn mu_half_document() {
    let doc = eval("mu(0.5)");
    assert_eq!(doc.value, 0.0);
    let mu = doc.mu.unwrap();
    assert_eq!(mu.branch, "noninteger");
    assert_eq!(mu.series_n, Some(200));
    assert!((mu.lambda.unwrap() - 0.7878).abs() < 1e-4);
    assert!((mu.series_value.unwrap() - 6.6615375043931375e-5).abs() < 1e-12);
}

#[test]
fn integer_spellings_agree() {
    assert_eq!(eval("mu(3.0)").exact, eval("mu(3)").exact);
    assert_eq!(eval("mu(3.000)").mu.unwrap().branch, "integer");
    assert_eq!(eval("mu(3.5)").mu.unwrap().branch, "noninteger");
}

#[test]
fn zeta_minus_one_is_exact() {
    assert_eq!(eval("zeta(-1)").exact, Some(Rational::new(-1, 12)));
    assert_eq!(eval_err("zeta(1)"), "zeta_pole");
    assert_eq!(eval_err("zeta(1.0000001)"), "zeta_pole_proximity");
}

#[test]
fn domain_error_codes() {
    assert_eq!(eval_err("mu(-2)"), "negative_integer_mu");
    assert_eq!(eval_err("mu(-1)"), "logarithmic_case");
    assert_eq!(eval_err("gamma(-3)"), "gamma_pole");
    assert_eq!(eval_err("regint(tan, 5)"), "unknown_series");
    assert_eq!(eval_err("bernoulli(0.5)"), "domain");
}

#[test]
fn parse_error_positions() {
    let e = parse("mu(3,)").unwrap_err();
    assert_eq!((e.code, e.offset), (ParseErrorCode::UnexpectedToken, 5));
    let e = parse("nu(3)").unwrap_err();
    assert_eq!((e.code, e.offset), (ParseErrorCode::UnknownFunction, 0));
    let e = parse("mu(1, 2)").unwrap_err();
    assert_eq!(e.code, ParseErrorCode::WrongArity);
    let e = parse("mu(1.)").unwrap_err();
    assert_eq!(e.code, ParseErrorCode::MalformedNumber);
}

#[test]
fn special_examples() {
    assert_eq!(gamma(5.0).unwrap(), 24.0);
    assert!((gamma(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    assert!(matches!(gamma(-2.0), Err(SpecialError::GammaPole(_))));
    assert_eq!(binomial_real(0.5, 2), -0.125);
    assert_eq!(binomial_real(2.5, 1), 2.5);
    assert_eq!(binomial_real(0.5, 0), 1.0);
    assert_eq!(zeta_real(-1.0).unwrap(), -1.0 / 12.0);
}

#[test]
fn mu_branches() {
    match mu(4.0).unwrap().branch {
        MuBranch::IntegerExact { value, routes } => {
            assert_eq!(value, Rational::new(-1, 30));
            assert!(routes.agree());
        }
        other => panic!("{other:?}"),
    }
    let below = mu(-2.5).unwrap();
    let cert = below.certificate().unwrap();
    assert_eq!(cert.reciprocity.unwrap().mapped_argument, 0.5);
    assert!(matches!(mu(f64::NAN), Err(MuError::NonFinite(_))));
}

#[test]
fn bernoulli_values() {
    assert_eq!(bernoulli(12), Rational::new(-691, 2730));
    let table = BernoulliTable::new();
    assert_eq!(table.get(20), Rational::new(-174611, 330));
    assert!(table.max_index() >= 20);
}

#[test]
fn regint_from_file_series() {
    let coeffs = parse_series_file("# a_0 + 3 a_2\n0,1\n2,3\n").unwrap();
    let series = PowerSeries::from_coefficients("file", coeffs);
    let res = regularize_integral(&series, 5).unwrap();
    assert_eq!(res.exact_partial_sum, Rational::new(-3, 4));
    assert_eq!(res.tail_kind, TailKind::Declared);
}

#[test]
fn regint_exp() {
    let res = regularize_integral(&builtin_series("exp").unwrap(), 20).unwrap();
    assert!((res.value + (-1f64).exp()).abs() <= 1e-12);
    assert_eq!(res.tail_kind, TailKind::Alternating);
}

#[test]
fn verify_all_passes() {
    let report = verify(Suite::All);
    assert!(report.passed, "{}", report.to_text());
}
