use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact arbitrary-precision fraction, always stored in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid digit at byte {0}")]
    InvalidDigit(usize),
    #[error("zero denominator")]
    ZeroDenominator,
}

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Integer power; negative exponents invert. Panics on `0^negative`.
    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    /// Correctly rounded conversion to binary64.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact value of a finite double. Returns `None` for NaN and infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Decimal rendering with `sig` significant digits, rounded half-to-even
    /// on the exact value. Trailing zeros are dropped. Magnitudes outside
    /// `[1e-6, 1e12)` switch to scientific notation.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let mag = self.abs();

        // Find e with 10^e <= mag < 10^(e+1).
        let ten = Rational::from_integer(10);
        let mut e = estimate_log10(&mag);
        while ten.pow(e) > mag {
            e -= 1;
        }
        while ten.pow(e + 1) <= mag {
            e += 1;
        }

        let shift = sig as i32 - 1 - e;
        let scaled = &mag * &ten.pow(shift);
        let mut digits = round_half_even(&scaled);
        if digits == BigInt::from(10u32).pow(sig as u32) {
            digits /= 10;
            e += 1;
        }
        let mut text = digits.to_string();
        debug_assert_eq!(text.len(), sig);

        let body = if (-6..12).contains(&e) {
            if e >= 0 {
                let int_len = e as usize + 1;
                if int_len >= text.len() {
                    text.push_str(&"0".repeat(int_len - text.len()));
                    text
                } else {
                    let (int_part, frac) = text.split_at(int_len);
                    let frac = frac.trim_end_matches('0');
                    if frac.is_empty() {
                        int_part.to_string()
                    } else {
                        format!("{int_part}.{frac}")
                    }
                }
            } else {
                let zeros = "0".repeat((-e - 1) as usize);
                let trimmed = text.trim_end_matches('0');
                format!("0.{zeros}{trimmed}")
            }
        } else {
            let (lead, rest) = text.split_at(1);
            let rest = rest.trim_end_matches('0');
            if rest.is_empty() {
                format!("{lead}e{e}")
            } else {
                format!("{lead}.{rest}e{e}")
            }
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Parses a plain decimal literal such as `-3.25` into an exact value.
    pub fn from_decimal_str(s: &str) -> Result<Self, ParseRationalError> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let offset = s.len() - body.len();
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (body, None),
        };
        if int_part.is_empty() {
            return Err(if body.is_empty() {
                ParseRationalError::Empty
            } else {
                ParseRationalError::InvalidDigit(offset)
            });
        }
        check_digits(int_part, offset)?;
        let mut digits = int_part.to_string();
        let mut scale = 0u32;
        if let Some(frac) = frac_part {
            let frac_offset = offset + int_part.len() + 1;
            if frac.is_empty() {
                return Err(ParseRationalError::InvalidDigit(frac_offset));
            }
            check_digits(frac, frac_offset)?;
            digits.push_str(frac);
            scale = frac.len() as u32;
        }
        let mut numer: BigInt = digits.parse().expect("validated digits");
        if neg {
            numer = -numer;
        }
        Ok(Rational::new(numer, BigInt::from(10u32).pow(scale)))
    }

    /// Exact decimal text when the denominator has only factors 2 and 5.
    pub fn to_terminating_decimal(&self) -> Option<String> {
        let mut d = self.denom().clone();
        let mut twos = 0u32;
        let mut fives = 0u32;
        let two = BigInt::from(2u32);
        let five = BigInt::from(5u32);
        while d.is_even() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return None;
        }
        let places = twos.max(fives);
        let scaled = self.numer() * BigInt::from(10u32).pow(places) / self.denom();
        let neg = scaled.is_negative();
        let mut text = scaled.abs().to_string();
        if places > 0 {
            let places = places as usize;
            if text.len() <= places {
                text = format!("{}{}", "0".repeat(places + 1 - text.len()), text);
            }
            text.insert(text.len() - places, '.');
        }
        Some(if neg { format!("-{text}") } else { text })
    }
}

fn check_digits(s: &str, offset: usize) -> Result<(), ParseRationalError> {
    match s.bytes().position(|b| !b.is_ascii_digit()) {
        Some(i) => Err(ParseRationalError::InvalidDigit(offset + i)),
        None => Ok(()),
    }
}

fn estimate_log10(q: &Rational) -> i32 {
    let n = q.numer().bits() as f64;
    let d = q.denom().bits() as f64;
    ((n - d) * std::f64::consts::LOG10_2).floor() as i32
}

fn round_half_even(q: &Rational) -> BigInt {
    let (quot, rem) = q.numer().div_mod_floor(q.denom());
    let twice: BigInt = rem * 2;
    match twice.cmp(q.denom()) {
        std::cmp::Ordering::Less => quot,
        std::cmp::Ordering::Greater => quot + 1,
        std::cmp::Ordering::Equal => {
            if quot.is_even() {
                quot
            } else {
                quot + 1
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p` or `p/q`, with an optional `-` or `+` on `p` only.
impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let (num_text, den_text) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let unsigned = num_text
            .strip_prefix('-')
            .or_else(|| num_text.strip_prefix('+'))
            .unwrap_or(num_text);
        let sign_len = num_text.len() - unsigned.len();
        if unsigned.is_empty() {
            return Err(ParseRationalError::InvalidDigit(sign_len));
        }
        check_digits(unsigned, sign_len)?;
        let mut numer: BigInt = unsigned.parse().expect("validated digits");
        if num_text.starts_with('-') {
            numer = -numer;
        }
        let denom = match den_text {
            None => BigInt::one(),
            Some(d) => {
                let at = num_text.len() + 1;
                if d.is_empty() {
                    return Err(ParseRationalError::InvalidDigit(at));
                }
                check_digits(d, at)?;
                let d: BigInt = d.parse().expect("validated digits");
                if d.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator);
                }
                d
            }
        };
        Ok(Rational::new(numer, denom))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational(q)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $assign_tr<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                self.0.$assign_method(rhs.0);
            }
        }
        impl $assign_tr<&Rational> for Rational {
            fn $assign_method(&mut self, rhs: &Rational) {
                self.0.$assign_method(&rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        Rational(self.0 / &rhs.0)
    }
}

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        Rational(&self.0 / &rhs.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Sums many fractions by pairwise merging unreduced numerator/denominator
/// pairs and reducing once at the end. Much faster than folding when the
/// denominators are mostly coprime.
pub fn sum_fractions<I>(terms: I) -> Rational
where
    I: IntoIterator<Item = (BigInt, BigInt)>,
{
    let mut level: Vec<(BigInt, BigInt)> = terms.into_iter().collect();
    if level.is_empty() {
        return Rational::zero();
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len() / 2 + 1);
        let mut it = level.into_iter();
        while let Some((a, b)) = it.next() {
            match it.next() {
                Some((c, d)) => next.push((a * &d + c * &b, b * d)),
                None => next.push((a, b)),
            }
        }
        level = next;
    }
    let (n, d) = level.pop().expect("non-empty");
    let (n, d) = if d.sign() == Sign::Minus {
        (-n, -d)
    } else {
        (n, d)
    };
    Rational::new(n, d)
}
