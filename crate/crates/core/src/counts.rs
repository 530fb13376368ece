//! Exact counts `c(n, k, d)` and probabilities `p(n, k, d)` of permutations
//! of `[n]` with exactly `d` fixed points among the first `k` points.
//!
//! `d_{n,k} = c(n, k, 0)` counts k-partial derangements (no fixed point in
//! `[k]`); `d_n = d_{n,n}` counts derangements, with `d_0 = 1`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{ParamError, Result};
use crate::exact::{binomial, factorial, Count, Prob, Rational};
use crate::report::VerificationReport;

/// A validated `(n, k, d)` triple.
///
/// Counting contexts allow `0 <= k <= n`; conditional contexts require
/// `k <= n - 1`. Both require `n >= 1` and `d <= k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Params {
    n: u32,
    k: u32,
    d: u32,
}

impl Params {
    pub fn counting(n: u32, k: u32, d: u32) -> Result<Params, ParamError> {
        if n < 1 {
            return Err(ParamError::NTooSmall);
        }
        if d > k {
            return Err(ParamError::DExceedsK { d, k });
        }
        if k > n {
            return Err(ParamError::KExceedsN { k, n });
        }
        Ok(Params { n, k, d })
    }

    pub fn conditional(n: u32, k: u32, d: u32) -> Result<Params, ParamError> {
        let p = Self::counting(n, k, d).map_err(|e| match e {
            ParamError::KExceedsN { k, n } => ParamError::KNotBelowN { k, n },
            other => other,
        })?;
        if k >= n {
            return Err(ParamError::KNotBelowN { k, n });
        }
        Ok(p)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_conditional(&self) -> bool {
        self.k < self.n
    }
}

/// Alternating sum `sum_{j=0}^{k} (-1)^j C(k,j) (n-j)!`, no range checks
/// beyond `k <= n`.
pub(crate) fn partial_derangement_sum(n: u32, k: u32) -> Count {
    debug_assert!(k <= n);
    let mut acc = BigInt::zero();
    for j in 0..=k {
        let term = (&binomial(k, i64::from(j)) * &factorial(n - j)).to_bigint();
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    assert!(!acc.is_negative(), "d({n},{k}) evaluated negative");
    Count::try_from(acc).expect("checked nonnegative")
}

/// `c(n, k, d)` extended by zero outside its domain (`d > k` or `k > n`),
/// and defined at `n = 0` as the empty permutation.
pub(crate) fn c_raw(n: u32, k: u32, d: u32) -> Count {
    if d > k || k > n {
        return Count::zero();
    }
    &binomial(k, i64::from(d)) * &partial_derangement_sum(n - d, k - d)
}

/// `p(n, k, d)` extended by zero like [`c_raw`].
pub(crate) fn p_raw(n: u32, k: u32, d: u32) -> Prob {
    Prob::new(&c_raw(n, k, d), &factorial(n)).expect("c(n,k,d) <= n!")
}

/// `c(n, k, d)`: permutations of `[n]` with exactly `d` fixed points in `[k]`.
///
/// Chooses which `d` points of `[k]` are fixed, then counts partial
/// derangements of the remaining `n - d` points on the other `k - d`.
pub fn count_exact_fixed(params: Params) -> Count {
    c_raw(params.n, params.k, params.d)
}

/// Same count, evaluated as a single flattened alternating sum
/// `C(k,d) * sum_{j=0}^{k-d} (-1)^j C(k-d,j) (n-d-j)!`.
pub fn count_exact_fixed_flat(params: Params) -> Count {
    let (n, k, d) = (params.n, params.k, params.d);
    let kk = k - d;
    let outer = binomial(k, i64::from(d)).to_bigint();
    let mut acc = BigInt::zero();
    for j in 0..=kk {
        let term = binomial(kk, i64::from(j)).to_bigint() * factorial(n - d - j).to_bigint() * &outer;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Count::try_from(acc).expect("count is nonnegative")
}

/// `d_{n,k} = c(n, k, 0)`.
pub fn partial_derangements(n: u32, k: u32) -> Result<Count> {
    Params::counting(n, k, 0)?;
    Ok(partial_derangement_sum(n, k))
}

/// `d_n`, with `d_0 = 1`.
pub fn derangements(n: u32) -> Count {
    partial_derangement_sum(n, n)
}

/// `p(n, k, d) = c(n, k, d) / n!`.
pub fn prob_exact_fixed(params: Params) -> Prob {
    p_raw(params.n, params.k, params.d)
}

/// `p(n, k, d)` split on which point is sent to `n`:
/// `(k/n) p(n-1, k-1, d) + (1 - k/n) p(n-1, k, d)`, for `0 < k < n`.
pub fn prob_via_point_split(params: Params) -> Result<Prob> {
    let (n, k, d) = (params.n, params.k, params.d);
    if k == 0 || k >= n {
        return Err(ParamError::NotInterior { k, n }.into());
    }
    let w = Rational::new(BigInt::from(k), BigInt::from(n));
    let one = Rational::from_integer(BigInt::from(1));
    let value = &w * p_raw(n - 1, k - 1, d).to_rational() + (one - &w) * p_raw(n - 1, k, d).to_rational();
    Ok(Prob::from_rational(&value)?)
}

fn signed(c: &Count) -> BigInt {
    c.to_bigint()
}

/// Checks the derangement recurrences for every applicable `n <= n_max`:
///
/// * `d_{n,k} = d_{n,k+1} + d_{n-1,k}` for `0 <= k <= n-1`
///   (its `k = n-1` case is `d_{n,n-1} = d_n + d_{n-1}`, recorded separately)
/// * `d_n = c(n, n-1, 1)`
/// * `d_n = (n-1)(d_{n-1} + d_{n-2})`
/// * `(n+1) d_n = c(n+1, n+1, 1)`
/// * `d_n = n d_{n-1} + (-1)^n`
pub fn recurrence_suite(n_max: u32) -> VerificationReport {
    let mut rep = VerificationReport::new();
    let int = |c: &Count| Rational::from_integer(signed(c));
    for n in 1..=n_max {
        for k in 0..n {
            let lhs = partial_derangement_sum(n, k);
            let rhs = &partial_derangement_sum(n, k + 1) + &partial_derangement_sum(n - 1, k);
            rep.check(
                "partial-derangement-step",
                vec![("n", n.into()), ("k", k.into())],
                lhs == rhs,
                vec![("lhs", int(&lhs)), ("rhs", int(&rhs))],
            );
        }
        let lhs = partial_derangement_sum(n, n - 1);
        let rhs = &derangements(n) + &derangements(n - 1);
        rep.check(
            "last-point-split",
            vec![("n", n.into())],
            lhs == rhs,
            vec![("lhs", int(&lhs)), ("rhs", int(&rhs))],
        );

        let dn = derangements(n);
        let rhs = signed(&derangements(n - 1)) * BigInt::from(n) + if n % 2 == 0 { 1 } else { -1 };
        rep.check(
            "derangement-one-term",
            vec![("n", n.into())],
            signed(&dn) == rhs,
            vec![("lhs", int(&dn)), ("rhs", Rational::from_integer(rhs))],
        );

        let lhs = &dn * u64::from(n + 1);
        let rhs = c_raw(n + 1, n + 1, 1);
        rep.check(
            "one-fixed-count",
            vec![("n", n.into())],
            lhs == rhs,
            vec![("lhs", int(&lhs)), ("rhs", int(&rhs))],
        );

        if n >= 2 {
            let rhs = c_raw(n, n - 1, 1);
            rep.check(
                "one-fixed-bijection",
                vec![("n", n.into())],
                dn == rhs,
                vec![("lhs", int(&dn)), ("rhs", int(&rhs))],
            );
            let rhs = &(&derangements(n - 1) + &derangements(n - 2)) * u64::from(n - 1);
            rep.check(
                "derangement-two-term",
                vec![("n", n.into())],
                dn == rhs,
                vec![("lhs", int(&dn)), ("rhs", int(&rhs))],
            );
        }
    }
    rep
}
