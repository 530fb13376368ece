//! Exact identities and inequalities among `p(n, k, 0)` and `f(n, k, d)`.

use num_bigint::BigInt;
use num_traits::One;

use super::FTable;
use crate::conditional::{f_bounds, last_point_gap};
use crate::counts::{p_raw, prob_via_point_split, recurrence_suite, Params};
use crate::exact::{factorial, Rational};
use crate::report::{Record, Status, VerificationReport};

fn r(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

fn p0(n: u32, k: u32) -> Rational {
    p_raw(n, k, 0).to_rational()
}

/// Every derangement recurrence plus the probability identities and
/// inequalities for `n <= n_max`:
///
/// * `p(n, k, d)` split on the preimage of `n`, for `0 < k < n`
/// * `p(n, k+1, 0) = p(n, k, 0) - p(n-1, k, 0)/n`, `k < n`
/// * `p(n, k+1, 0)/p(n, k, 0) = 1 - 1/n + k/(n^2 (n-1)) * p(n-2, k-1, 0)/p(n, k, 0)`,
///   `0 < k < n`, `n >= 3`
/// * `f(n, k, 0) = 1 - p(n, k+1, 0)/p(n, k, 0)`, `k < n`
/// * `p(n, k+1, 0)/p(n, k, 0) >= (n-1)/n` and `f(n, k, 0) <= 1/n`
/// * `p(n, n, 0) - p(n-1, n-1, 0) = (-1)^n / n!`
/// * `p(n, k, 0)` nonincreasing in `k`, nondecreasing in `n`, and
///   `p(n, k, 0) <= p(n-1, k-1, 0)` for `0 < k < n`
/// * `f(n, k, d) = f(n-a, k-a, d-a)` for `a <= d`
/// * at least one `d > 0` triple where `p(n, k, d) > p(n, k-1, d)`
pub fn identity_suite(n_max: u32) -> VerificationReport {
    let mut rep = recurrence_suite(n_max);
    let table = FTable::build(n_max);

    for n in 1..=n_max {
        let nn = i64::from(n);
        let boundary = p0(n, n) - p0(n - 1, n - 1);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let expected = Rational::new(BigInt::from(sign), factorial(n).to_bigint());
        rep.check(
            "parity-boundary",
            vec![("n", nn)],
            boundary == expected,
            vec![("lhs", boundary), ("rhs", expected)],
        );

        for k in 0..=n {
            let kk = i64::from(k);
            if k > 0 {
                rep.check(
                    "p-monotone-k",
                    vec![("n", nn), ("k", kk)],
                    p0(n, k) <= p0(n, k - 1),
                    vec![("p_k", p0(n, k)), ("p_km1", p0(n, k - 1))],
                );
            }
            if k == n {
                continue;
            }
            // 0 <= k < n from here on
            rep.check(
                "p-monotone-n",
                vec![("n", nn), ("k", kk)],
                p0(n - 1, k) <= p0(n, k),
                vec![("p_nm1", p0(n - 1, k)), ("p_n", p0(n, k))],
            );
            let lhs = p0(n, k + 1);
            let rhs = p0(n, k) - p0(n - 1, k) * r(1, nn);
            rep.check(
                "k-step",
                vec![("n", nn), ("k", kk)],
                lhs == rhs,
                vec![("lhs", lhs), ("rhs", rhs)],
            );

            let f = table.get(n, k, 0).to_rational();
            let via_ratio = Rational::one() - p0(n, k + 1) / p0(n, k);
            rep.check(
                "f-complement-ratio",
                vec![("n", nn), ("k", kk)],
                f == via_ratio,
                vec![("f", f.clone()), ("one_minus_ratio", via_ratio)],
            );
            rep.check(
                "f-at-most-1-over-n",
                vec![("n", nn), ("k", kk)],
                f <= r(1, nn),
                vec![("f", f)],
            );

            if k > 0 {
                rep.check(
                    "p-diagonal",
                    vec![("n", nn), ("k", kk)],
                    p0(n, k) <= p0(n - 1, k - 1),
                    vec![("p", p0(n, k)), ("p_diag", p0(n - 1, k - 1))],
                );
                let ratio = p0(n, k + 1) / p0(n, k);
                rep.check(
                    "ratio-floor",
                    vec![("n", nn), ("k", kk)],
                    ratio >= r(nn - 1, nn),
                    vec![("ratio", ratio.clone())],
                );
                if n >= 3 {
                    let rhs = Rational::one() - r(1, nn) + r(kk, nn * nn * (nn - 1)) * p0(n - 2, k - 1) / p0(n, k);
                    rep.check(
                        "k-ratio",
                        vec![("n", nn), ("k", kk)],
                        ratio == rhs,
                        vec![("lhs", ratio), ("rhs", rhs)],
                    );
                }
                for d in 0..=k {
                    let params = Params::counting(n, k, d).expect("valid");
                    let split = prob_via_point_split(params).expect("0 < k < n");
                    let direct = p_raw(n, k, d);
                    rep.check(
                        "point-split",
                        vec![("n", nn), ("k", kk), ("d", d.into())],
                        split == direct,
                        vec![("split", split.to_rational()), ("direct", direct.to_rational())],
                    );
                }
            }

            for d in 0..=k {
                let f = table.get(n, k, d);
                let ok = (1..=d).all(|a| table.get(n - a, k - a, d - a) == f);
                rep.check(
                    "shift-invariance",
                    vec![("n", nn), ("k", kk), ("d", d.into())],
                    ok,
                    vec![("f", f.to_rational())],
                );
            }
        }
    }

    if n_max >= 4 {
        let witnesses = p_nonmonotone_witnesses(n_max);
        let mut rec = Record::new(
            "p-nonmonotone-positive-d",
            vec![("n_max", n_max.into())],
            if witnesses.is_empty() {
                Status::Violation
            } else {
                Status::Holds
            },
        )
        .with("witnesses", Rational::from_integer(BigInt::from(witnesses.len())));
        if let Some(w) = witnesses.first() {
            rec = rec
                .with("n", Rational::from_integer(w.n().into()))
                .with("k", Rational::from_integer(w.k().into()))
                .with("d", Rational::from_integer(w.d().into()));
        }
        rep.push(rec);
    }
    rep
}

/// Triples with `1 <= d < k <= n <= n_max` where `p(n, k, d) > p(n, k-1, d)`,
/// found by search.
pub fn p_nonmonotone_witnesses(n_max: u32) -> Vec<Params> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for k in 2..=n {
            for d in 1..k {
                if p_raw(n, k, d) > p_raw(n, k - 1, d) {
                    out.push(Params::counting(n, k, d).expect("valid"));
                }
            }
        }
    }
    out
}

/// `lower <= f(n, k, d) <= upper` for all `d <= k < n <= n_max` with
/// `n - d > 3`.
pub fn sandwich_suite(n_max: u32) -> VerificationReport {
    let table = FTable::build(n_max);
    let mut rep = VerificationReport::new();
    for n in 4..=n_max {
        for k in 0..n {
            for d in 0..=k {
                if n - d <= 3 {
                    continue;
                }
                let b = f_bounds(Params::conditional(n, k, d).expect("valid")).expect("k < n");
                let f = table.get(n, k, d).to_rational();
                let ok = b.within_hypothesis && b.contains(&f) == Some(true);
                let mut witness = vec![("lower", b.lower), ("f", f)];
                if let Some(u) = b.upper {
                    witness.push(("upper", u));
                }
                rep.check(
                    "sandwich",
                    vec![("n", n.into()), ("k", k.into()), ("d", d.into())],
                    ok,
                    witness,
                );
            }
        }
    }
    rep
}

/// The gap `|f(n, n-1, 0) - 1/(n+1)|` equals `1/((n+1) d_{n,n-1})` for
/// `2 <= n <= n_max` and shrinks strictly from `n = 3` on.
pub fn last_point_suite(n_max: u32) -> VerificationReport {
    let mut rep = VerificationReport::new();
    for n in 2..=n_max {
        let gap = last_point_gap(n).expect("n >= 2");
        let closed = Rational::new(BigInt::one(), crate::counts::c_raw(n, n - 1, 0).to_bigint() * (n + 1));
        rep.check(
            "last-point-gap-closed-form",
            vec![("n", n.into())],
            gap == closed,
            vec![("gap", gap.clone()), ("closed", closed)],
        );
        if n >= 3 && n < n_max {
            let next = last_point_gap(n + 1).expect("n >= 2");
            rep.check(
                "last-point-gap-decreasing",
                vec![("n", n.into())],
                next < gap,
                vec![("gap_n", gap), ("gap_next", next)],
            );
        }
    }
    rep
}
