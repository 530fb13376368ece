//! Exact integer and rational primitives.
//!
//! Every count in this crate is a [`Count`] (an arbitrary-precision
//! nonnegative integer) and every probability is a [`Prob`] (a reduced
//! fraction in `[0, 1]`). Rationals that are not probabilities, such as
//! bound values or gaps, use the plain [`Rational`] alias. Nothing here
//! ever goes through floating point; decimals only appear when a value is
//! rendered.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::{LazyLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// General exact rational.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("probability out of range: {num}/{den} exceeds 1")]
    OutOfRange { num: String, den: String },
    #[error("negative value {0} where a nonnegative one is required")]
    Negative(String),
}

/// Arbitrary-precision nonnegative integer.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Count(BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn one() -> Self {
        Count(BigUint::one())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.0.clone())
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from_integer(self.to_bigint())
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl TryFrom<BigInt> for Count {
    type Error = ExactError;

    fn try_from(v: BigInt) -> Result<Self, Self::Error> {
        match v.to_biguint() {
            Some(u) => Ok(Count(u)),
            None => Err(ExactError::Negative(v.to_string())),
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Add<&Count> for &Count {
    type Output = Count;
    fn add(self, rhs: &Count) -> Count {
        Count(&self.0 + &rhs.0)
    }
}

impl Mul<&Count> for &Count {
    type Output = Count;
    fn mul(self, rhs: &Count) -> Count {
        Count(&self.0 * &rhs.0)
    }
}

impl Mul<u64> for &Count {
    type Output = Count;
    fn mul(self, rhs: u64) -> Count {
        Count(&self.0 * rhs)
    }
}

impl PartialEq<u64> for Count {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

/// Exact probability `num/den` in lowest terms with `0 <= num <= den`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Prob {
    num: BigUint,
    den: BigUint,
}

impl Prob {
    /// Builds `num/den`, reducing to lowest terms.
    pub fn new(num: &Count, den: &Count) -> Result<Prob, ExactError> {
        Self::from_parts(num.value().clone(), den.value().clone())
    }

    fn from_parts(num: BigUint, den: BigUint) -> Result<Prob, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        if num > den {
            return Err(ExactError::OutOfRange {
                num: num.to_string(),
                den: den.to_string(),
            });
        }
        if num.is_zero() {
            return Ok(Prob::zero());
        }
        let g = num.gcd(&den);
        Ok(Prob {
            num: num / &g,
            den: den / g,
        })
    }

    pub fn from_rational(r: &Rational) -> Result<Prob, ExactError> {
        if r.is_negative() {
            return Err(ExactError::Negative(r.to_string()));
        }
        let num = r.numer().magnitude().clone();
        let den = r.denom().magnitude().clone();
        Self::from_parts(num, den)
    }

    pub fn zero() -> Prob {
        Prob {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    pub fn one() -> Prob {
        Prob {
            num: BigUint::one(),
            den: BigUint::one(),
        }
    }

    pub fn numer(&self) -> &BigUint {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(
            BigInt::from_biguint(Sign::Plus, self.num.clone()),
            BigInt::from_biguint(Sign::Plus, self.den.clone()),
        )
    }

    /// `1 - self`.
    pub fn complement(&self) -> Prob {
        Prob {
            num: &self.den - &self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Prob) -> Prob {
        Self::from_parts(&self.num * &other.num, &self.den * &other.den)
            .expect("product of probabilities stays in [0, 1]")
    }

    /// Lossy conversion for statistics; never used in comparisons.
    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal with a leading zero, rounded half away from zero.
    pub fn render(&self, places: u32) -> String {
        render_decimal(&self.to_rational(), places, DecimalStyle::Padded)
    }
}

impl Ord for Prob {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Prob {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

static FACTORIALS: LazyLock<RwLock<Vec<BigUint>>> = LazyLock::new(|| RwLock::new(vec![BigUint::one()]));

/// `n!`, memoized in a table shared by all threads.
pub fn factorial(n: u32) -> Count {
    let idx = n as usize;
    {
        let table = FACTORIALS.read().expect("factorial table poisoned");
        if let Some(v) = table.get(idx) {
            return Count(v.clone());
        }
    }
    let mut table = FACTORIALS.write().expect("factorial table poisoned");
    // another writer may have grown it while we waited
    while table.len() <= idx {
        let next = table.last().expect("table starts non-empty") * table.len();
        table.push(next);
    }
    Count(table[idx].clone())
}

/// `C(n, k)`; zero outside `0 <= k <= n`.
pub fn binomial(n: u32, k: i64) -> Count {
    if k < 0 || k > i64::from(n) {
        return Count::zero();
    }
    let k = k as u32;
    let num = factorial(n).into_inner();
    let den = factorial(k).into_inner() * factorial(n - k).into_inner();
    Count(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecimalStyle {
    /// `0.500`, `1.000`
    Padded,
    /// `.500`, `1.000`
    Bare,
    /// `.5`, `1`, `0`
    Trimmed,
}

/// `round(r * 10^places)` with ties rounded away from zero.
pub fn round_half_away(r: &Rational, places: u32) -> BigInt {
    let scale = BigInt::from(10u32).pow(places);
    let num: BigInt = r.numer().abs() * scale * 2 + r.denom();
    let den: BigInt = r.denom() * 2;
    let rounded = num.div_floor(&den);
    if r.is_negative() {
        -rounded
    } else {
        rounded
    }
}

pub fn render_decimal(r: &Rational, places: u32, style: DecimalStyle) -> String {
    let scaled = round_half_away(r, places);
    let sign = if scaled.is_negative() { "-" } else { "" };
    let scaled = scaled.abs();
    let scale = BigInt::from(10u32).pow(places);
    let (int_part, frac_part) = scaled.div_rem(&scale);
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    let mut frac = format!("{:0>width$}", frac_part, width = places as usize);
    if style == DecimalStyle::Trimmed {
        frac.truncate(frac.trim_end_matches('0').len());
        if frac.is_empty() {
            return format!("{sign}{int_part}");
        }
    }
    if int_part.is_zero() && style != DecimalStyle::Padded {
        format!("{sign}.{frac}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    // iterated product, kept apart from the memo table
    fn product_oracle(n: u32) -> BigUint {
        (1..=n).fold(BigUint::one(), |acc, x| acc * x)
    }

    // Pascal's triangle rows, built by addition only
    fn pascal_oracle(n: usize) -> Vec<Vec<BigUint>> {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigUint::one(); i + 1];
            for j in 1..i {
                row[j] = &prev[j - 1] + &prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(5), 120);
        assert_eq!(factorial(20), 2432902008176640000u64);
        assert_eq!(factorial(20).into_inner(), product_oracle(20));
    }

    #[test]
    fn factorial_step_identity() {
        for n in 1..=30u32 {
            assert_eq!(factorial(n), &factorial(n - 1) * u64::from(n));
        }
    }

    #[test]
    fn factorial_memo_concurrent_readers() {
        let handles: Vec<_> = (0..8u32)
            .map(|t| std::thread::spawn(move || factorial(40 + t * 5).into_inner()))
            .collect();
        for (t, h) in handles.into_iter().enumerate() {
            assert_eq!(h.join().unwrap(), product_oracle(40 + t as u32 * 5));
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(3, -1), 0);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn binomial_matches_pascal() {
        let rows = pascal_oracle(30);
        for n in 0..=30u32 {
            for k in 0..=n {
                assert_eq!(binomial(n, i64::from(k)).value(), &rows[n as usize][k as usize]);
                if n > 0 {
                    let rec = &binomial(n - 1, i64::from(k) - 1) + &binomial(n - 1, i64::from(k));
                    assert_eq!(binomial(n, i64::from(k)), rec);
                }
            }
        }
    }

    #[test]
    fn prob_make_examples() {
        let p = Prob::new(&Count::from(44), &Count::from(120)).unwrap();
        assert_eq!(p.to_string(), "11/30");
        assert_eq!(Prob::new(&Count::from(0), &Count::from(7)).unwrap().to_string(), "0/1");
        assert_eq!(Prob::new(&Count::from(6), &Count::from(6)).unwrap(), Prob::one());
    }

    #[test]
    fn prob_make_errors() {
        assert_eq!(
            Prob::new(&Count::from(1), &Count::zero()),
            Err(ExactError::ZeroDenominator)
        );
        assert!(matches!(
            Prob::new(&Count::from(8), &Count::from(7)),
            Err(ExactError::OutOfRange { .. })
        ));
        assert!(Prob::from_rational(&ratio(-1, 2)).is_err());
    }

    #[test]
    fn prob_ordering_is_exact() {
        let a = Prob::new(&Count::from(9), &Count::from(53)).unwrap();
        let b = Prob::new(&Count::from(11), &Count::from(64)).unwrap();
        assert!(a < b);
        // 1/3 vs 333333333333/999999999998: distinct despite equal f64 prefixes
        let third = Prob::new(&Count::from(1), &Count::from(3)).unwrap();
        let near = Prob::new(&Count::from(333_333_333_333), &Count::from(999_999_999_998)).unwrap();
        assert!(third < near);
    }

    #[test]
    fn complement_and_product() {
        let p = Prob::new(&Count::from(2), &Count::from(9)).unwrap();
        assert_eq!(p.complement().to_string(), "7/9");
        assert_eq!(p.mul(&p).to_string(), "4/81");
    }

    #[test]
    fn rounding_half_away_from_zero() {
        assert_eq!(render_decimal(&ratio(53, 120), 4, DecimalStyle::Bare), ".4417");
        assert_eq!(render_decimal(&ratio(2, 9), 3, DecimalStyle::Padded), "0.222");
        assert_eq!(render_decimal(&ratio(3, 16), 3, DecimalStyle::Padded), "0.188");
        assert_eq!(render_decimal(&ratio(-3, 16), 3, DecimalStyle::Padded), "-0.188");
        assert_eq!(render_decimal(&ratio(1, 1), 3, DecimalStyle::Padded), "1.000");
        assert_eq!(render_decimal(&ratio(0, 1), 4, DecimalStyle::Bare), ".0000");
        assert_eq!(render_decimal(&ratio(1, 2), 4, DecimalStyle::Trimmed), ".5");
        assert_eq!(render_decimal(&ratio(1, 1), 4, DecimalStyle::Trimmed), "1");
        assert_eq!(render_decimal(&ratio(0, 1), 4, DecimalStyle::Trimmed), "0");
        assert_eq!(render_decimal(&ratio(4, 25), 4, DecimalStyle::Trimmed), ".16");
        assert_eq!(render_decimal(&ratio(7, 2), 0, DecimalStyle::Padded), "4");
    }
}
