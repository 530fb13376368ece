//! The conditional probability `f(n, k, d)` that point `k + 1` is fixed,
//! given exactly `d` fixed points among the first `k`.
//!
//! `f(n, k, d) = c(n-1, k, d) / c(n, k, d)`, and because fixing `a` of the
//! `d` known fixed points simply removes them, `f(n, k, d) = f(n-d, k-d, 0)`.
//! Every route below reduces to exact integer ratios.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::counts::{c_raw, partial_derangement_sum, Params};
use crate::error::{Error, ParamError, Result};
use crate::exact::{binomial, factorial, Count, Prob, Rational};

fn require_conditional(params: Params) -> Result<()> {
    if params.k() >= params.n() {
        return Err(ParamError::KNotBelowN {
            k: params.k(),
            n: params.n(),
        }
        .into());
    }
    Ok(())
}

fn positive_ratio(num: &Count, den: &Count, what: &str) -> Result<Prob> {
    if den.is_zero() {
        return Err(Error::Inconsistent(format!("{what}: zero conditioning count")));
    }
    Ok(Prob::new(num, den)?)
}

/// `f(n, k, d)` from the count ratio, cross-checked against the reduction
/// to `f(n-d, k-d, 0)`.
pub fn cond_fix_prob(params: Params) -> Result<Prob> {
    require_conditional(params)?;
    let (n, k, d) = (params.n(), params.k(), params.d());
    let direct = positive_ratio(&c_raw(n - 1, k, d), &c_raw(n, k, d), "c(n,k,d)")?;
    let reduced = positive_ratio(
        &partial_derangement_sum(n - d - 1, k - d),
        &partial_derangement_sum(n - d, k - d),
        "d(n-d,k-d)",
    )?;
    if direct != reduced {
        return Err(Error::Inconsistent(format!(
            "f({n},{k},{d}): count ratio {direct} != reduced ratio {reduced}"
        )));
    }
    Ok(direct)
}

/// `f` for already-validated conditional triples.
pub(crate) fn f_raw(n: u32, k: u32, d: u32) -> Prob {
    debug_assert!(d <= k && k < n);
    Prob::new(&c_raw(n - 1, k, d), &c_raw(n, k, d)).expect("c(n,k,d) > 0 for k < n")
}

// sum_{j=0}^{terms} (-1)^j C(terms, j) (top - j)!
fn alternating(terms: u32, top: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=terms {
        let t = binomial(terms, i64::from(j)).to_bigint() * factorial(top - j).to_bigint();
        if j % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

/// `f(n, k, d)` from the two inclusion-exclusion forms: one minus the ratio
/// of consecutive partial-derangement sums, and the direct ratio with the
/// factorials shifted down by one. Both are evaluated; they must agree.
pub fn cond_fix_prob_incl_excl(params: Params) -> Result<Prob> {
    require_conditional(params)?;
    let m = params.n() - params.d();
    let kappa = params.k() - params.d();

    let den = alternating(kappa, m);
    if !den.is_positive() {
        return Err(Error::Inconsistent(format!("nonpositive denominator {den}")));
    }
    let one_minus = Rational::one() - Rational::new(alternating(kappa + 1, m), den.clone());
    let direct = Rational::new(alternating(kappa, m - 1), den);
    if one_minus != direct {
        return Err(Error::Inconsistent(format!(
            "one-minus form {one_minus} != direct form {direct}"
        )));
    }
    Ok(Prob::from_rational(&direct)?)
}

/// Closed forms of `f(n, k, 0)` for `k <= 3`:
///
/// | k | f(n, k, 0) |
/// |---|------------|
/// | 0 | `1/n` |
/// | 1 | `(n-2)/(n-1)^2` |
/// | 2 | `(n^2-5n+7)/((n-2)(n^2-3n+3))` |
/// | 3 | `(n^3-9n^2+29n-34)/((n-3)(n^3-6n^2+14n-13))` |
pub fn closed_form_small_k(n: u32, k: u32) -> Result<Prob> {
    if k > 3 {
        return Err(Error::NoClosedForm(k));
    }
    if n <= k {
        return Err(Error::DegenerateClosedForm { n, k });
    }
    let x = BigInt::from(n);
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let (num, den) = match k {
        0 => (BigInt::one(), x.clone()),
        1 => (&x - 2, (&x - 1) * (&x - 1)),
        2 => (&x2 - &x * 5 + 7, (&x - 2) * (&x2 - &x * 3 + 3)),
        _ => (&x3 - &x2 * 9 + &x * 29 - 34, (&x - 3) * (&x3 - &x2 * 6 + &x * 14 - 13)),
    };
    if den.is_zero() {
        return Err(Error::DegenerateClosedForm { n, k });
    }
    Ok(Prob::from_rational(&Rational::new(num, den))?)
}

/// Two-sided bound on `f(n, k, d)` around `1/m - kappa/(m^2 (m-1))`, with
/// `m = n - d` and `kappa = k - d`. The lower bound scales the correction
/// term by `m/(m-1)`, the upper by `(m-3)/(m-2)`.
///
/// The bound is only claimed for `m > 3`; other inputs still get the
/// formula values with `within_hypothesis = false`. At `m = 2` with
/// `kappa = 1` the upper factor divides by zero and `upper` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsTriple {
    pub lower: Rational,
    pub central: Rational,
    pub upper: Option<Rational>,
    pub within_hypothesis: bool,
}

impl BoundsTriple {
    /// `lower <= value <= upper`, or `None` when the upper bound is undefined.
    pub fn contains(&self, value: &Rational) -> Option<bool> {
        let upper = self.upper.as_ref()?;
        Some(&self.lower <= value && value <= upper)
    }
}

pub fn f_bounds(params: Params) -> Result<BoundsTriple> {
    require_conditional(params)?;
    let m = i64::from(params.n() - params.d());
    let kappa = i64::from(params.k() - params.d());
    let r = |a: i64, b: i64| Rational::new(BigInt::from(a), BigInt::from(b));
    let base = r(1, m);
    if kappa == 0 {
        return Ok(BoundsTriple {
            lower: base.clone(),
            central: base.clone(),
            upper: Some(base),
            within_hypothesis: m > 3,
        });
    }
    // kappa >= 1 and kappa <= m - 1, so m >= 2
    let term = r(kappa, m * m * (m - 1));
    let upper = (m != 2).then(|| &base - &term * r(m - 3, m - 2));
    Ok(BoundsTriple {
        lower: &base - &term * r(m, m - 1),
        central: &base - &term,
        upper,
        within_hypothesis: m > 3,
    })
}

/// `|f(n, n-1, 0) - 1/(n+1)|`, the distance of the last-point probability
/// from its large-`n` estimate.
pub fn last_point_gap(n: u32) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Range {
            what: "n",
            detail: format!("last_point_gap needs n >= 2, got {n}"),
        });
    }
    let f = cond_fix_prob(Params::conditional(n, n - 1, 0)?)?;
    let est = Rational::new(BigInt::one(), BigInt::from(n + 1));
    Ok((f.to_rational() - est).abs())
}
