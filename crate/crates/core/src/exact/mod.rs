//! Exact arithmetic: rationals, binomial coefficients, Bernoulli numbers and
//! the Riemann zeta function at non-positive integers.
//!
//! Nothing in this module rounds.

mod bernoulli;
mod rational;

pub use bernoulli::{bernoulli, BernoulliTable};
pub use rational::{sum_fractions, ParseRationalError, Rational};

use std::borrow::Borrow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `C(m, l) = m! / (l! (m - l)!)`, and 0 when `l` lies outside `0..=m`.
pub fn binomial_exact(m: u64, l: i64) -> Rational {
    Rational::from_integer(binomial_int(m, l))
}

pub(crate) fn binomial_int(m: u64, l: i64) -> BigInt {
    if l < 0 || l as u64 > m {
        return BigInt::from(0u32);
    }
    let l = (l as u64).min(m - l as u64);
    let mut acc = BigInt::one();
    for i in 0..l {
        // acc * (m - i) is always divisible by (i + 1)
        acc = acc * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    acc
}

/// The row `C(m, 0), ..., C(m, m)`, each entry derived from its predecessor.
pub(crate) fn binomial_row(m: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for i in 0..m {
        c = c * BigInt::from(m - i) / BigInt::from(i + 1);
        row.push(c.clone());
    }
    row
}

/// `Σ w_i q_i` for integer weights, accumulated over the lcm of the
/// denominators so no intermediate result needs a gcd.
pub(crate) fn weighted_sum<I, Q>(terms: I) -> Rational
where
    I: IntoIterator<Item = (BigInt, Q)>,
    Q: Borrow<Rational>,
{
    let terms: Vec<(BigInt, Q)> = terms
        .into_iter()
        .filter(|(w, q)| !w.is_zero() && !q.borrow().is_zero())
        .collect();
    let denom = terms
        .iter()
        .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.borrow().denom()));
    let numer = terms.iter().fold(BigInt::zero(), |acc, (w, q)| {
        let q = q.borrow();
        acc + w * q.numer() * (&denom / q.denom())
    });
    Rational::new(numer, denom)
}

/// `ζ(-k) = (-1)^k B_{k+1} / (k+1)`.
pub fn zeta_neg_int(k: u64) -> Rational {
    let b = bernoulli(k + 1);
    let v = b / Rational::from_integer(k + 1);
    if k % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `Σ_{k=1}^{r+1} C(r+2, k) B_k`. Identically −1.
pub fn bernoulli_binomial_sum(r: u64) -> Rational {
    let row = binomial_row(r + 2);
    let b = BernoulliTable::global().prefix(r + 1);
    weighted_sum((1..=r as usize + 1).map(|k| (row[k].clone(), &b[k])))
}
