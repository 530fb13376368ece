//! Monotonicity of `f(n, k, d)` in each argument, with exception sets
//! expressed as predicates so sweeps classify any `n_max`.

use std::cmp::Ordering;

use rayon::prelude::*;

use super::FTable;
use crate::report::{Record, Status, VerificationReport};

/// `f(n, j, d) > f(n, i, d)` exactly when `n = j+1 = i+2 = d+3`.
pub fn monotone_in_k_exception(n: u32, i: u32, j: u32, d: u32) -> bool {
    n == j + 1 && j == i + 1 && i == d + 1
}

/// `f(m, k, d) < f(n, k, d)` for `m > n` fails exactly when `n = d+2`,
/// `k = d+1`, where `f(n, k, d) = 0`.
pub fn monotone_in_n_exception(n: u32, k: u32, d: u32) -> bool {
    n == d + 2 && k == d + 1
}

/// `f(n, k, d) > f(n, k, c)` for `c < d` fails exactly when
/// `n = k+1 = d+2`, where `f(n, n-1, n-2) = 0`.
pub fn monotone_in_d_exception(n: u32, k: u32, d: u32) -> bool {
    n == k + 1 && k == d + 1
}

fn sweep(n_lo: u32, n_max: u32, per_n: impl Fn(u32) -> Vec<Record> + Sync + Send) -> VerificationReport {
    if n_max < n_lo {
        return VerificationReport::new();
    }
    (n_lo..=n_max)
        .into_par_iter()
        .map(per_n)
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// For every `d <= i < j < n <= n_max`: `f(n, j, d) < f(n, i, d)` when
/// `n - d != 3`. When `n - d = 3` the values are `f(3, ., 0) = 1/3, 1/4, 1/3`,
/// so the claim there is the weak `f(n, j, d) <= f(n, i, d)`, reversed
/// strictly at the exception tuple. All pairs are checked directly, not
/// just adjacent ones.
pub fn monotone_in_k(n_max: u32) -> VerificationReport {
    let table = FTable::build(n_max);
    sweep(2, n_max, |n| {
        let mut out = Vec::new();
        for d in 0..n {
            for i in d..n {
                for j in (i + 1)..n {
                    let (fj, fi) = (table.get(n, j, d), table.get(n, i, d));
                    let ord = fj.cmp(fi);
                    let status = if monotone_in_k_exception(n, i, j, d) {
                        match ord {
                            Ordering::Greater => Status::ExceptionExpected,
                            _ => Status::Violation,
                        }
                    } else if n - d == 3 {
                        match ord {
                            Ordering::Greater => Status::Violation,
                            _ => Status::Holds,
                        }
                    } else {
                        match ord {
                            Ordering::Less => Status::Holds,
                            _ => Status::Violation,
                        }
                    };
                    out.push(
                        Record::new(
                            "monotone-k",
                            vec![("n", n.into()), ("i", i.into()), ("j", j.into()), ("d", d.into())],
                            status,
                        )
                        .with("f_j", fj.to_rational())
                        .with("f_i", fi.to_rational()),
                    );
                }
            }
        }
        out
    })
}

/// For every `d <= k < n < m <= n_max`: `f(m, k, d) < f(n, k, d)`, except
/// at `n = d+2, k = d+1` where `f(n, k, d) = 0 < f(m, k, d)`.
pub fn monotone_in_n(n_max: u32) -> VerificationReport {
    let table = FTable::build(n_max);
    sweep(1, n_max, |n| {
        let mut out = Vec::new();
        for k in 0..n {
            for d in 0..=k {
                for m in (n + 1)..=n_max {
                    let (fm, fnn) = (table.get(m, k, d), table.get(n, k, d));
                    let status = if monotone_in_n_exception(n, k, d) {
                        if fnn.is_zero() && fm > fnn {
                            Status::ExceptionExpected
                        } else {
                            Status::Violation
                        }
                    } else if fm < fnn {
                        Status::Holds
                    } else {
                        Status::Violation
                    };
                    out.push(
                        Record::new(
                            "monotone-n",
                            vec![("n", n.into()), ("m", m.into()), ("k", k.into()), ("d", d.into())],
                            status,
                        )
                        .with("f_m", fm.to_rational())
                        .with("f_n", fnn.to_rational()),
                    );
                }
            }
        }
        out
    })
}

/// For every `c < d <= k < n <= n_max`: `f(n, k, d) > f(n, k, c)`, except
/// at `n = k+1 = d+2` where `f(n, k, d) = 0`.
pub fn monotone_in_d(n_max: u32) -> VerificationReport {
    let table = FTable::build(n_max);
    sweep(2, n_max, |n| {
        let mut out = Vec::new();
        for k in 0..n {
            for d in 1..=k {
                for c in 0..d {
                    let (fd, fc) = (table.get(n, k, d), table.get(n, k, c));
                    let status = if monotone_in_d_exception(n, k, d) {
                        if fd.is_zero() && fd < fc {
                            Status::ExceptionExpected
                        } else {
                            Status::Violation
                        }
                    } else if fd > fc {
                        Status::Holds
                    } else {
                        Status::Violation
                    };
                    out.push(
                        Record::new(
                            "monotone-d",
                            vec![("n", n.into()), ("k", k.into()), ("d", d.into()), ("c", c.into())],
                            status,
                        )
                        .with("f_d", fd.to_rational())
                        .with("f_c", fc.to_rational()),
                    );
                }
            }
        }
        out
    })
}

/// For `3 < n <= n_max`, `0 < k < n`:
/// `f(n, k-1, 0) < f(n-1, k-1, 0)` iff `f(n, k, 0) < f(n, k-1, 0)`.
pub fn k_n_link(n_max: u32) -> VerificationReport {
    let table = FTable::build(n_max);
    sweep(4, n_max, |n| {
        (1..n)
            .map(|k| {
                let left = table.get(n, k - 1, 0) < table.get(n - 1, k - 1, 0);
                let right = table.get(n, k, 0) < table.get(n, k - 1, 0);
                let status = if left == right {
                    Status::Holds
                } else {
                    Status::Violation
                };
                Record::new("k-n-link", vec![("n", n.into()), ("k", k.into())], status)
                    .with("f_n_km1", table.get(n, k - 1, 0).to_rational())
                    .with("f_nm1_km1", table.get(n - 1, k - 1, 0).to_rational())
                    .with("f_n_k", table.get(n, k, 0).to_rational())
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use num_bigint::BigInt;
    use std::collections::BTreeSet;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(BigInt::from(a), BigInt::from(b))
    }

    fn find<'a>(rep: &'a VerificationReport, claim: &'a str, params: &[(&str, i64)]) -> &'a Record {
        rep.claim(claim)
            .find(|rec| params.iter().all(|(k, v)| rec.param(k) == Some(*v)))
            .expect("record present")
    }

    #[test]
    fn monotone_k_examples() {
        let rep = monotone_in_k(6);
        assert!(
            rep.is_clean(),
            "{}",
            rep.violations().map(|r| r.to_string()).collect::<Vec<_>>().join("\n")
        );
        let ex = find(&rep, "monotone-k", &[("n", 3), ("i", 1), ("j", 2), ("d", 0)]);
        assert_eq!(ex.status, Status::ExceptionExpected);
        assert_eq!(ex.witness[0].1, r(1, 3));
        assert_eq!(ex.witness[1].1, r(1, 4));
        let ok = find(&rep, "monotone-k", &[("n", 5), ("i", 3), ("j", 4), ("d", 0)]);
        assert_eq!(ok.status, Status::Holds);
        assert_eq!(ok.witness[0].1, r(9, 53));
        assert_eq!(ok.witness[1].1, r(11, 64));
        let shifted = find(&rep, "monotone-k", &[("n", 6), ("i", 4), ("j", 5), ("d", 3)]);
        assert_eq!(shifted.status, Status::ExceptionExpected);
        assert_eq!(shifted.witness[0].1, r(1, 3));
        assert_eq!(shifted.witness[1].1, r(1, 4));
        // n - d = 3, non-adjacent: equal values, weak claim holds
        let tie = find(&rep, "monotone-k", &[("n", 3), ("i", 0), ("j", 2), ("d", 0)]);
        assert_eq!(tie.status, Status::Holds);
        assert_eq!(tie.witness[0].1, tie.witness[1].1);
    }

    #[test]
    fn monotone_k_exceptions_exactly_declared_set() {
        let n_max = 12;
        let rep = monotone_in_k(n_max);
        assert!(rep.is_clean());
        assert!(rep.duplicate_tuples().is_empty());
        let found: BTreeSet<Vec<i64>> = rep
            .exceptions()
            .map(|rec| rec.params.iter().map(|p| p.1).collect())
            .collect();
        let mut declared = BTreeSet::new();
        for n in 2..=n_max {
            for d in 0..n {
                for i in d..n {
                    for j in (i + 1)..n {
                        if monotone_in_k_exception(n, i, j, d) {
                            declared.insert(vec![n.into(), i.into(), j.into(), d.into()]);
                        }
                    }
                }
            }
        }
        assert_eq!(found, declared);
        assert_eq!(declared.len(), 10); // d = 0..=9
    }

    #[test]
    fn monotone_n_examples() {
        let rep = monotone_in_n(6);
        assert!(rep.is_clean());
        let ex = find(&rep, "monotone-n", &[("n", 2), ("m", 4), ("k", 1), ("d", 0)]);
        assert_eq!(ex.status, Status::ExceptionExpected);
        assert_eq!(ex.witness[0].1, r(2, 9));
        let ok = find(&rep, "monotone-n", &[("n", 5), ("m", 6), ("k", 0), ("d", 0)]);
        assert_eq!(ok.status, Status::Holds);
        let ok = find(&rep, "monotone-n", &[("n", 5), ("m", 6), ("k", 3), ("d", 0)]);
        assert_eq!(ok.witness[0].1, r(32, 213));
        assert_eq!(ok.witness[1].1, r(11, 64));
    }

    #[test]
    fn monotone_d_examples() {
        let rep = monotone_in_d(5);
        assert!(rep.is_clean());
        let a = find(&rep, "monotone-d", &[("n", 5), ("k", 3), ("d", 1), ("c", 0)]);
        assert_eq!((a.status, &a.witness[0].1), (Status::Holds, &r(3, 14)));
        let b = find(&rep, "monotone-d", &[("n", 5), ("k", 4), ("d", 3), ("c", 0)]);
        assert_eq!(b.status, Status::ExceptionExpected);
        assert_eq!(b.witness[1].1, r(9, 53));
        let c = find(&rep, "monotone-d", &[("n", 5), ("k", 2), ("d", 2), ("c", 1)]);
        assert_eq!(
            (c.status, &c.witness[0].1, &c.witness[1].1),
            (Status::Holds, &r(1, 3), &r(2, 9))
        );
    }

    #[test]
    fn k_n_link_examples() {
        let rep = k_n_link(12);
        assert!(rep.is_clean());
        let rec = find(&rep, "k-n-link", &[("n", 5), ("k", 3)]);
        assert_eq!(rec.witness[0].1, r(7, 39));
        assert_eq!(rec.witness[1].1, r(3, 14));
        assert_eq!(rec.witness[2].1, r(11, 64));
        let rec = find(&rep, "k-n-link", &[("n", 4), ("k", 1)]);
        assert_eq!(rec.witness[0].1, r(1, 4));
        assert_eq!(rec.witness[1].1, r(1, 3));
        assert_eq!(rec.witness[2].1, r(2, 9));
        assert!(k_n_link(3).is_empty());
    }

    #[test]
    fn sweeps_are_deterministic() {
        assert_eq!(monotone_in_d(9), monotone_in_d(9));
        assert_eq!(monotone_in_n(8).to_lines(), monotone_in_n(8).to_lines());
    }
}
