//! Formula-versus-enumeration sweeps.

use crate::conditional::f_raw;
use crate::counts::{c_raw, count_exact_fixed, Params};
use crate::error::Result;
use crate::exact::{factorial, Count, Prob, Rational};
use crate::oracle::{enumerate_count_guarded, for_each_permutation, subset_tallies, SizeGuard};
use crate::report::VerificationReport;

fn int(c: &Count) -> Rational {
    c.to_rational()
}

// tallies[k][d] = #{alpha : |F(alpha) ∩ [k]| = d}, optionally restricted
fn prefix_tallies(n: u32, keep: impl Fn(&[u32]) -> bool) -> Vec<Vec<u64>> {
    let mut t: Vec<Vec<u64>> = (0..=n).map(|k| vec![0; k as usize + 1]).collect();
    for_each_permutation(n, |p| {
        if !keep(p) {
            return;
        }
        let mut fixed = 0usize;
        t[0][0] += 1;
        for (idx, &v) in p.iter().enumerate() {
            if v as usize == idx + 1 {
                fixed += 1;
            }
            t[idx + 1][fixed] += 1;
        }
    });
    t
}

/// For `1 <= n <= n_max`: `c(n, k, d)` against [`enumerate_count_guarded`],
/// each row summing to `n!`, and `f(n, k, d)` against the enumerated
/// conditional frequency.
pub fn oracle_equivalence(n_max: u32, guard: SizeGuard) -> Result<VerificationReport> {
    guard.check(n_max)?;
    let mut rep = VerificationReport::new();
    for n in 1..=n_max {
        for k in 0..=n {
            let mut total = Count::zero();
            for d in 0..=k {
                let formula = count_exact_fixed(Params::counting(n, k, d)?);
                let enumerated = enumerate_count_guarded(n, k, d, guard)?;
                total = &total + &formula;
                rep.check(
                    "oracle-count",
                    vec![("n", n.into()), ("k", k.into()), ("d", d.into())],
                    formula == enumerated,
                    vec![("formula", int(&formula)), ("enumerated", int(&enumerated))],
                );
            }
            let nf = factorial(n);
            rep.check(
                "partition",
                vec![("n", n.into()), ("k", k.into())],
                total == nf,
                vec![("sum", int(&total)), ("n_factorial", int(&nf))],
            );
            if k < n {
                let prefix: Vec<u32> = (1..=k).collect();
                let tallies = subset_tallies(n, &prefix, k + 1, guard)?;
                for d in 0..=k {
                    let (cond, hit) = tallies[d as usize];
                    let enumerated = Prob::new(&Count::from(hit), &Count::from(cond))?;
                    let formula = f_raw(n, k, d);
                    rep.check(
                        "oracle-conditional",
                        vec![("n", n.into()), ("k", k.into()), ("d", d.into())],
                        formula == enumerated,
                        vec![
                            ("formula", formula.to_rational()),
                            ("enumerated", enumerated.to_rational()),
                        ],
                    );
                }
            }
        }
    }
    Ok(rep)
}

/// Removing a fixed point `x`: permutations of `[n]` with `d` fixed points
/// in `[k]` and `x` fixed number `c(n-1, k, d)` when `x > k`, and
/// `c(n-1, k-1, d-1)` when `x <= k`.
pub fn fixed_point_removal(n_max: u32, guard: SizeGuard) -> Result<VerificationReport> {
    guard.check(n_max)?;
    let mut rep = VerificationReport::new();
    for n in 1..=n_max {
        for x in 1..=n {
            let t = prefix_tallies(n, |p| p[x as usize - 1] == x);
            for k in 0..=n {
                for d in 0..=k {
                    let expected = if x > k {
                        c_raw(n - 1, k, d)
                    } else if d == 0 {
                        Count::zero()
                    } else {
                        c_raw(n - 1, k - 1, d - 1)
                    };
                    let got = Count::from(t[k as usize][d as usize]);
                    rep.check(
                        "fixed-point-removal",
                        vec![("n", n.into()), ("x", x.into()), ("k", k.into()), ("d", d.into())],
                        got == expected,
                        vec![("enumerated", int(&got)), ("formula", int(&expected))],
                    );
                }
            }
        }
    }
    Ok(rep)
}

/// Counts of `{rho : rho(i) = j, d fixed points in [k]}` for
/// `2 <= n <= n_max`, `1 <= k <= n-1`: `c(n-1, k, d)` when `k < i, j`, and
/// `c(n-1, k-1, d)` when `i <= k < j`. Other placements are not claimed.
pub fn image_pinned_counts(n_max: u32, guard: SizeGuard) -> Result<VerificationReport> {
    guard.check(n_max)?;
    let mut rep = VerificationReport::new();
    for n in 2..=n_max {
        for i in 1..=n {
            for j in 1..=n {
                let t = prefix_tallies(n, |p| p[i as usize - 1] == j);
                for k in 1..n {
                    // k' such that the count is c(n-1, k', d)
                    let (claim, reduced_k) = if k < i && k < j {
                        ("image-pinned-outside", k)
                    } else if i <= k && k < j {
                        ("image-pinned-inside", k - 1)
                    } else {
                        continue;
                    };
                    for d in 0..=k {
                        let got = Count::from(t[k as usize][d as usize]);
                        let expected = c_raw(n - 1, reduced_k, d);
                        rep.check(
                            claim,
                            vec![
                                ("n", n.into()),
                                ("k", k.into()),
                                ("d", d.into()),
                                ("i", i.into()),
                                ("j", j.into()),
                            ],
                            got == expected,
                            vec![("enumerated", int(&got)), ("formula", int(&expected))],
                        );
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// For every `A ⊆ [n]` with `|A| = k` and every `a ∉ A`, the enumerated
/// `P(alpha(a) = a | exactly d fixed in A)` equals `f(n, k, d)`. One record
/// per `(n, k, d)`.
pub fn subset_independence(n_max: u32, guard: SizeGuard) -> Result<VerificationReport> {
    guard.check(n_max)?;
    let mut rep = VerificationReport::new();
    for n in 1..=n_max {
        // mismatches[k][d], choices[k]
        let mut mismatches: Vec<Vec<u64>> = (0..n).map(|k| vec![0; k as usize + 1]).collect();
        let mut choices = vec![0u64; n as usize];
        for mask in 0u32..(1 << n) {
            let subset: Vec<u32> = (1..=n).filter(|x| mask & (1 << (x - 1)) != 0).collect();
            let k = subset.len() as u32;
            if k == n {
                continue;
            }
            for a in (1..=n).filter(|x| mask & (1 << (x - 1)) == 0) {
                choices[k as usize] += 1;
                let tallies = subset_tallies(n, &subset, a, guard)?;
                for d in 0..=k {
                    let (cond, hit) = tallies[d as usize];
                    let got = Prob::new(&Count::from(hit), &Count::from(cond))?;
                    if got != f_raw(n, k, d) {
                        mismatches[k as usize][d as usize] += 1;
                    }
                }
            }
        }
        for k in 0..n {
            for d in 0..=k {
                let bad = mismatches[k as usize][d as usize];
                rep.check(
                    "subset-independence",
                    vec![("n", n.into()), ("k", k.into()), ("d", d.into())],
                    bad == 0,
                    vec![
                        ("choices", Rational::from_integer(choices[k as usize].into())),
                        ("mismatches", Rational::from_integer(bad.into())),
                        ("f", f_raw(n, k, d).to_rational()),
                    ],
                );
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_sweeps_small() {
        let g = SizeGuard::standard();
        for rep in [
            oracle_equivalence(6, g).unwrap(),
            fixed_point_removal(6, g).unwrap(),
            image_pinned_counts(6, g).unwrap(),
            subset_independence(5, g).unwrap(),
        ] {
            assert!(!rep.is_empty());
            assert!(
                rep.is_clean(),
                "{}",
                rep.violations().map(|r| r.to_string()).collect::<Vec<_>>().join("\n")
            );
            assert!(rep.duplicate_tuples().is_empty());
        }
    }

    #[test]
    fn image_pinned_instances() {
        let rep = image_pinned_counts(5, SizeGuard::standard()).unwrap();
        let get = |claim: &str, i, j| {
            rep.claim(claim)
                .find(|r| {
                    r.param("n") == Some(5)
                        && r.param("k") == Some(2)
                        && r.param("d") == Some(0)
                        && r.param("i") == Some(i)
                        && r.param("j") == Some(j)
                })
                .map(|r| r.witness[0].1.clone())
        };
        assert_eq!(
            get("image-pinned-outside", 4, 5),
            Some(Rational::from_integer(14.into()))
        );
        assert_eq!(
            get("image-pinned-inside", 1, 4),
            Some(Rational::from_integer(18.into()))
        );
    }

    #[test]
    fn guard_is_enforced() {
        assert!(oracle_equivalence(11, SizeGuard::standard()).is_err());
    }
}
