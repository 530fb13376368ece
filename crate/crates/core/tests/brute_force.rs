//! Library results against brute force written here, sharing no code with
//! the crate's own enumerator.

use std::collections::HashSet;

use fixperm_core::oracle::{enumerate_count, psi_forward, psi_inverse};
use fixperm_core::{
    cond_fix_prob, count_exact_fixed, derangements, factorial, partial_derangements, Params, Permutation, Prob,
};

// all permutations of 1..=n, by inserting n into every slot of each
// permutation of 1..=n-1
fn all_perms(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n);
            out.push(q);
        }
    }
    out
}

fn fixed_in(p: &[u32], k: u32) -> u32 {
    (1..=k).filter(|&x| p[x as usize - 1] == x).count() as u32
}

fn ratio(a: u64, b: u64) -> Prob {
    Prob::new(&a.into(), &b.into()).unwrap()
}

#[test]
fn counts_match_brute_force() {
    for n in 1..=8u32 {
        let perms = all_perms(n);
        assert_eq!(perms.len() as u64, (1..=u64::from(n)).product::<u64>());
        for k in 0..=n {
            let mut total = 0u64;
            for d in 0..=k {
                let brute = perms.iter().filter(|p| fixed_in(p, k) == d).count() as u64;
                total += brute;
                let params = Params::counting(n, k, d).unwrap();
                assert_eq!(count_exact_fixed(params), brute, "c({n},{k},{d})");
                assert_eq!(enumerate_count(n, k, d).unwrap(), brute, "enum({n},{k},{d})");
            }
            assert_eq!(factorial(n), total);
            let d0 = perms.iter().filter(|p| fixed_in(p, k) == 0).count() as u64;
            assert_eq!(partial_derangements(n, k).unwrap(), d0);
        }
        assert_eq!(
            derangements(n),
            perms.iter().filter(|p| fixed_in(p, n) == 0).count() as u64
        );
    }
}

#[test]
fn conditional_matches_brute_force() {
    for n in 1..=8u32 {
        let perms = all_perms(n);
        for k in 0..n {
            for d in 0..=k {
                let cond: Vec<_> = perms.iter().filter(|p| fixed_in(p, k) == d).collect();
                let hit = cond.iter().filter(|p| p[k as usize] == k + 1).count() as u64;
                let f = cond_fix_prob(Params::conditional(n, k, d).unwrap()).unwrap();
                assert_eq!(f, ratio(hit, cond.len() as u64), "f({n},{k},{d})");
            }
        }
    }
}

#[test]
fn subset_choice_irrelevant_brute_force() {
    // conditioning on {2, 4} and asking about 5 gives the same as [2] and 3
    let n = 6;
    let perms = all_perms(n);
    for d in 0..=2u32 {
        let cond: Vec<_> = perms
            .iter()
            .filter(|p| [2u32, 4].iter().filter(|&&x| p[x as usize - 1] == x).count() as u32 == d)
            .collect();
        let hit = cond.iter().filter(|p| p[4] == 5).count() as u64;
        let f = cond_fix_prob(Params::conditional(n, 2, d).unwrap()).unwrap();
        assert_eq!(f, ratio(hit, cond.len() as u64));
    }
}

// Psi from its verbal description: drop i, send the preimage of i to j,
// close the gap in the labels.
fn psi_reference(rho: &[u32], i: u32, j: u32) -> Vec<u32> {
    let n = rho.len() as u32;
    let mut out = Vec::new();
    for x in 1..=n {
        if x == i {
            continue;
        }
        let mut y = rho[x as usize - 1];
        if y == i {
            y = j;
        }
        out.push(if y > i { y - 1 } else { y });
    }
    out
}

#[test]
fn psi_matches_reference_and_is_bijective() {
    for n in 2..=6u32 {
        let perms = all_perms(n);
        for i in 1..=n {
            for j in 1..=n {
                let mut seen = HashSet::new();
                for rho in perms.iter().filter(|p| p[i as usize - 1] == j) {
                    let want = psi_reference(rho, i, j);
                    let r = Permutation::new(rho.clone()).unwrap();
                    let got = psi_forward(&r, i, j).unwrap();
                    assert_eq!(got.images(), want.as_slice(), "n={n} i={i} j={j} rho={rho:?}");
                    assert_eq!(psi_inverse(&got, i, j).unwrap(), r);
                    assert!(seen.insert(want));
                }
                let size = (1..u64::from(n)).product::<u64>();
                assert_eq!(seen.len() as u64, size, "onto S_(n-1)");
            }
        }
    }
}

#[test]
fn psi_reference_worked_instance() {
    assert_eq!(
        psi_reference(&[7, 2, 1, 5, 8, 6, 4, 3], 4, 5),
        vec![6, 2, 1, 7, 5, 4, 3]
    );
}
