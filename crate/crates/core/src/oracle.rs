//! Ground truth by exhaustive enumeration of `S_n`, and the explicit
//! bijection `Psi` from `{rho in S_n : rho(i) = j}` onto `S_{n-1}`.
//!
//! `Psi` is the composition of three maps, each exposed on its own so the
//! fixed-point bookkeeping of every stage can be checked:
//!
//! * [`restrict`] drops `i` from the domain, giving a bijection
//!   `[n] \ {i} -> [n] \ {j}`;
//! * [`rewire`] (only when `i != j`) sends whatever mapped to `i` to `j`
//!   instead, giving a bijection `[n] \ {i} -> [n] \ {i}`;
//! * [`relabel`] closes the gap at `i` in both domain and range.

use std::collections::HashSet;
use std::fmt;

use crate::counts::Params;
use crate::error::{Error, Result};
use crate::exact::{factorial, Count, Prob, Rational};
use crate::report::VerificationReport;

/// Default enumeration ceiling; `10! = 3_628_800` permutations.
pub const ENUMERATION_LIMIT: u32 = 10;
/// Ceiling even with [`SizeGuard::allow_large`].
pub const HARD_LIMIT: u32 = 12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SizeGuard {
    allow_large: bool,
}

impl SizeGuard {
    pub fn standard() -> Self {
        SizeGuard { allow_large: false }
    }

    pub fn allow_large() -> Self {
        SizeGuard { allow_large: true }
    }

    pub fn limit(&self) -> u32 {
        if self.allow_large {
            HARD_LIMIT
        } else {
            ENUMERATION_LIMIT
        }
    }

    pub fn check(&self, n: u32) -> Result<()> {
        if n > self.limit() {
            return Err(Error::TooLarge { n, limit: self.limit() });
        }
        Ok(())
    }
}

/// A bijection on `[n]`; position `x - 1` holds `alpha(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            let idx = (v as usize).wrapping_sub(1);
            if idx >= n || seen[idx] {
                return Err(Error::NotPermutation(format!("{images:?}")));
            }
            seen[idx] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: u32) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `alpha(x)` for `x` in `[1, n]`.
    pub fn image(&self, x: u32) -> u32 {
        self.images[x as usize - 1]
    }

    pub fn is_fixed(&self, x: u32) -> bool {
        self.image(x) == x
    }

    /// `F(alpha)`, ascending.
    pub fn fixed_points(&self) -> Vec<u32> {
        (1..=self.len()).filter(|&x| self.is_fixed(x)).collect()
    }

    /// `|F(alpha) ∩ [k]|`.
    pub fn fixed_in_prefix(&self, k: u32) -> u32 {
        fixed_in_prefix(&self.images, k)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (idx, v) in self.images.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

fn fixed_in_prefix(images: &[u32], k: u32) -> u32 {
    images[..k as usize]
        .iter()
        .enumerate()
        .filter(|(idx, &v)| v as usize == idx + 1)
        .count() as u32
}

/// Advances `v` to its lexicographic successor; `false` once `v` is the
/// last (descending) arrangement.
pub fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `f` on every permutation of `[n]` in lexicographic order, reusing
/// one buffer.
pub fn for_each_permutation(n: u32, mut f: impl FnMut(&[u32])) {
    let mut v: Vec<u32> = (1..=n).collect();
    loop {
        f(&v);
        if !next_permutation(&mut v) {
            break;
        }
    }
}

/// Streaming lexicographic iterator over `S_n`.
pub struct Permutations {
    next: Option<Vec<u32>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { images: current })
    }
}

pub fn permutations(n: u32) -> Permutations {
    Permutations {
        next: Some((1..=n).collect()),
    }
}

/// `|S_{n,k,d}|` by walking all of `S_n`.
pub fn enumerate_count(n: u32, k: u32, d: u32) -> Result<Count> {
    enumerate_count_guarded(n, k, d, SizeGuard::standard())
}

pub fn enumerate_count_guarded(n: u32, k: u32, d: u32, guard: SizeGuard) -> Result<Count> {
    Params::counting(n, k, d)?;
    guard.check(n)?;
    let mut hits = 0u64;
    for_each_permutation(n, |p| {
        if fixed_in_prefix(p, k) == d {
            hits += 1;
        }
    });
    Ok(Count::from(hits))
}

/// Per-`d` tallies `(conditioned, conditioned and a fixed)` for
/// `d = 0..=|A|`, in one pass over `S_n`.
pub(crate) fn subset_tallies(n: u32, subset: &[u32], a: u32, guard: SizeGuard) -> Result<Vec<(u64, u64)>> {
    guard.check(n)?;
    for &x in subset.iter().chain(std::iter::once(&a)) {
        if x < 1 || x > n {
            return Err(Error::PointOutOfRange { point: x, n });
        }
    }
    if subset.contains(&a) {
        return Err(Error::PointInSubset(a));
    }
    let mut members: Vec<usize> = subset.iter().map(|&x| x as usize - 1).collect();
    members.sort_unstable();
    members.dedup();
    let mut tallies = vec![(0u64, 0u64); members.len() + 1];
    let a_idx = a as usize - 1;
    for_each_permutation(n, |p| {
        let fixed = members.iter().filter(|&&x| p[x] as usize == x + 1).count();
        let slot = &mut tallies[fixed];
        slot.0 += 1;
        if p[a_idx] == a {
            slot.1 += 1;
        }
    });
    Ok(tallies)
}

/// `P(alpha(a) = a | exactly d points of A fixed)`, by enumeration.
pub fn conditional_on_subset(n: u32, subset: &[u32], a: u32, d: u32) -> Result<Prob> {
    conditional_on_subset_guarded(n, subset, a, d, SizeGuard::standard())
}

pub fn conditional_on_subset_guarded(n: u32, subset: &[u32], a: u32, d: u32, guard: SizeGuard) -> Result<Prob> {
    let tallies = subset_tallies(n, subset, a, guard)?;
    let (cond, hit) = tallies.get(d as usize).copied().ok_or(Error::EmptyCondition)?;
    if cond == 0 {
        return Err(Error::EmptyCondition);
    }
    Ok(Prob::new(&Count::from(hit), &Count::from(cond))?)
}

/// A bijection `[n] \ {domain_excluded} -> [n] \ {codomain_excluded}`,
/// stored as a length-`n` table with a hole at `domain_excluded`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialMap {
    pub domain_excluded: u32,
    pub codomain_excluded: u32,
    images: Vec<Option<u32>>,
}

impl PartialMap {
    pub fn n(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn image(&self, x: u32) -> Option<u32> {
        self.images.get(x as usize - 1).copied().flatten()
    }

    pub fn is_fixed(&self, x: u32) -> bool {
        self.image(x) == Some(x)
    }
}

fn check_point(point: u32, n: u32) -> Result<()> {
    if point < 1 || point > n {
        return Err(Error::PointOutOfRange { point, n });
    }
    Ok(())
}

/// Restriction of `rho` to `[n] \ {i}`.
pub fn restrict(rho: &Permutation, i: u32) -> Result<PartialMap> {
    check_point(i, rho.len())?;
    let mut images: Vec<Option<u32>> = rho.images.iter().copied().map(Some).collect();
    let j = images[i as usize - 1].take().expect("present before take");
    Ok(PartialMap {
        domain_excluded: i,
        codomain_excluded: j,
        images,
    })
}

/// For `i != j`: the point that mapped to `i` maps to `j` instead, so the
/// codomain becomes `[n] \ {i}`.
pub fn rewire(map: &PartialMap) -> Result<PartialMap> {
    let (i, j) = (map.domain_excluded, map.codomain_excluded);
    if i == j {
        return Err(Error::Range {
            what: "rewire",
            detail: format!("defined only for i != j, got i = j = {i}"),
        });
    }
    let images = map
        .images
        .iter()
        .map(|v| v.map(|y| if y == i { j } else { y }))
        .collect();
    Ok(PartialMap {
        domain_excluded: i,
        codomain_excluded: i,
        images,
    })
}

/// Closes the gap at `i` in domain and range, giving an element of `S_{n-1}`.
pub fn relabel(map: &PartialMap) -> Result<Permutation> {
    let i = map.domain_excluded;
    if map.codomain_excluded != i {
        return Err(Error::Range {
            what: "relabel",
            detail: format!("needs matching excluded points, got {i} and {}", map.codomain_excluded),
        });
    }
    let n = map.n();
    let images = (1..n)
        .map(|x| {
            let src = if x < i { x } else { x + 1 };
            let v = map.image(src).expect("hole only at i");
            if v < i {
                v
            } else {
                v - 1
            }
        })
        .collect();
    Permutation::new(images)
}

/// `Psi(rho)` for `rho(i) = j`.
pub fn psi_forward(rho: &Permutation, i: u32, j: u32) -> Result<Permutation> {
    let n = rho.len();
    if n < 2 {
        return Err(Error::Range {
            what: "n",
            detail: format!("psi needs n >= 2, got {n}"),
        });
    }
    check_point(i, n)?;
    check_point(j, n)?;
    let actual = rho.image(i);
    if actual != j {
        return Err(Error::ImageMismatch { i, j, actual });
    }
    let restricted = restrict(rho, i)?;
    if i == j {
        relabel(&restricted)
    } else {
        relabel(&rewire(&restricted)?)
    }
}

/// The unique `rho` with `rho(i) = j` and `psi_forward(rho, i, j) = alpha`.
pub fn psi_inverse(alpha: &Permutation, i: u32, j: u32) -> Result<Permutation> {
    let n = alpha.len() + 1;
    check_point(i, n)?;
    check_point(j, n)?;
    let mut images = vec![0u32; n as usize];
    for x in (1..=n).filter(|&x| x != i) {
        let src = if x < i { x } else { x - 1 };
        let v = alpha.image(src);
        let mut y = if v < i { v } else { v + 1 };
        if i != j && y == j {
            y = i;
        }
        images[x as usize - 1] = y;
    }
    images[i as usize - 1] = j;
    Permutation::new(images)
}

/// `|B_{n,k,d,i,j}|`: permutations with `rho(i) = j` and exactly `d` fixed
/// points in `[k]`, by enumeration.
pub fn count_b(n: u32, k: u32, d: u32, i: u32, j: u32) -> Result<Count> {
    Params::counting(n, k, d)?;
    SizeGuard::standard().check(n)?;
    check_point(i, n)?;
    check_point(j, n)?;
    let mut hits = 0u64;
    for_each_permutation(n, |p| {
        if p[i as usize - 1] == j && fixed_in_prefix(p, k) == d {
            hits += 1;
        }
    });
    Ok(Count::from(hits))
}

fn int(v: u64) -> Rational {
    Rational::from_integer(v.into())
}

/// Exhaustive audit of `Psi` for `2 <= n <= n_max` and every `(i, j)`:
/// bijectivity onto `S_{n-1}`, inverse round trip, and the fixed-point
/// behaviour of each component map. The fixed `S_8` instance is always
/// included.
pub fn verify_bijection(n_max: u32) -> VerificationReport {
    let mut rep = VerificationReport::new();
    let rho = Permutation::new(vec![7, 2, 1, 5, 8, 6, 4, 3]).expect("valid");
    let expected = Permutation::new(vec![6, 2, 1, 7, 5, 4, 3]).expect("valid");
    let got = psi_forward(&rho, 4, 5).ok();
    let back = psi_inverse(&expected, 4, 5).ok();
    rep.check(
        "psi-worked-example",
        vec![("n", 8), ("i", 4), ("j", 5)],
        got.as_ref() == Some(&expected) && back.as_ref() == Some(&rho),
        vec![],
    );
    for n in 2..=n_max {
        for i in 1..=n {
            for j in 1..=n {
                audit_pair(&mut rep, n, i, j);
            }
        }
    }
    rep
}

// streams S_n once; only the (n-1)! images are held, for the injectivity check
fn audit_pair(rep: &mut VerificationReport, n: u32, i: u32, j: u32) {
    let params = || vec![("n", i64::from(n)), ("i", i64::from(i)), ("j", i64::from(j))];
    let mut images = HashSet::new();
    let mut checked = 0u64;
    let (mut collisions, mut bad_roundtrip) = (0u64, 0u64);
    let (mut bad_restrict, mut bad_rewire, mut bad_relabel) = (0u64, 0u64, 0u64);

    for rho in permutations(n).filter(|r| r.image(i) == j) {
        let rho = &rho;
        checked += 1;
        let out = match psi_forward(rho, i, j) {
            Ok(p) => p,
            Err(_) => {
                collisions += 1;
                continue;
            }
        };
        if psi_inverse(&out, i, j).ok().as_ref() != Some(rho) {
            bad_roundtrip += 1;
        }
        if !images.insert(out) {
            collisions += 1;
        }

        let restricted = restrict(rho, i).expect("i in range");
        if (1..=n)
            .filter(|&a| a != i)
            .any(|a| rho.is_fixed(a) != restricted.is_fixed(a))
        {
            bad_restrict += 1;
        }
        let closed = if i == j {
            restricted
        } else {
            let rewired = rewire(&restricted).expect("i != j");
            let ok = (1..=n)
                .filter(|&a| a != i)
                .all(|a| !rewired.is_fixed(a) || restricted.is_fixed(a) || restricted.image(a) == Some(i));
            if !ok {
                bad_rewire += 1;
            }
            rewired
        };
        let relabeled = relabel(&closed).expect("excluded points match");
        let ok = (1..=n).filter(|&a| a != i).all(|a| {
            if a < i {
                closed.is_fixed(a) == relabeled.is_fixed(a)
            } else {
                closed.is_fixed(a) == relabeled.is_fixed(a - 1)
            }
        });
        if !ok {
            bad_relabel += 1;
        }
    }

    let target = factorial(n - 1);
    let distinct = images.len() as u64;
    rep.check(
        "psi-bijective",
        params(),
        collisions == 0 && target == distinct && target == checked,
        vec![("domain", int(checked)), ("image", int(distinct))],
    );
    rep.check(
        "psi-roundtrip",
        params(),
        bad_roundtrip == 0,
        vec![("failures", int(bad_roundtrip))],
    );
    rep.check(
        "restrict-fixed",
        params(),
        bad_restrict == 0,
        vec![("failures", int(bad_restrict))],
    );
    if i != j {
        rep.check(
            "rewire-fixed",
            params(),
            bad_rewire == 0,
            vec![("failures", int(bad_rewire))],
        );
    }
    rep.check(
        "relabel-fixed",
        params(),
        bad_relabel == 0,
        vec![("failures", int(bad_relabel))],
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![3, 1]).is_err());
        let p = perm(&[2, 1, 3]);
        assert_eq!(p.fixed_points(), vec![3]);
        assert_eq!(p.fixed_in_prefix(2), 0);
        assert_eq!(p.to_string(), "[2,1,3]");
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all: Vec<_> = permutations(4).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(permutations(1).count(), 1);
        let mut n = 0;
        for_each_permutation(6, |_| n += 1);
        assert_eq!(n, 720);
    }

    #[test]
    fn enumerate_count_examples() {
        assert_eq!(enumerate_count(3, 3, 0).unwrap(), 2);
        assert_eq!(enumerate_count(5, 4, 0).unwrap(), 53);
        assert_eq!(enumerate_count(4, 4, 4).unwrap(), 1);
    }

    #[test]
    fn size_guard() {
        assert_eq!(enumerate_count(11, 1, 0), Err(Error::TooLarge { n: 11, limit: 10 }));
        assert_eq!(SizeGuard::allow_large().limit(), 12);
        assert_eq!(
            enumerate_count_guarded(13, 1, 0, SizeGuard::allow_large()),
            Err(Error::TooLarge { n: 13, limit: 12 })
        );
        assert!(enumerate_count(5, 2, 3).is_err());
    }

    #[test]
    fn conditional_on_subset_examples() {
        assert_eq!(conditional_on_subset(5, &[1, 2, 3], 4, 0).unwrap().to_string(), "11/64");
        assert_eq!(conditional_on_subset(5, &[2, 3, 5], 1, 0).unwrap().to_string(), "11/64");
        assert_eq!(conditional_on_subset(3, &[1, 2], 3, 2).unwrap(), Prob::one());
    }

    #[test]
    fn conditional_on_subset_errors() {
        assert_eq!(conditional_on_subset(4, &[1, 2], 2, 0), Err(Error::PointInSubset(2)));
        assert_eq!(conditional_on_subset(4, &[1, 2], 3, 3), Err(Error::EmptyCondition));
        assert_eq!(
            conditional_on_subset(3, &[1], 4, 0),
            Err(Error::PointOutOfRange { point: 4, n: 3 })
        );
        assert!(matches!(
            conditional_on_subset(11, &[1], 2, 0),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn psi_worked_example() {
        let rho = perm(&[7, 2, 1, 5, 8, 6, 4, 3]);
        let restricted = restrict(&rho, 4).unwrap();
        assert_eq!(restricted.codomain_excluded, 5);
        assert_eq!(restricted.image(4), None);
        assert_eq!(restricted.image(7), Some(4));
        let rewired = rewire(&restricted).unwrap();
        assert_eq!(rewired.image(7), Some(5));
        assert_eq!(rewired.codomain_excluded, 4);
        let out = psi_forward(&rho, 4, 5).unwrap();
        assert_eq!(out, perm(&[6, 2, 1, 7, 5, 4, 3]));
        assert_eq!(psi_inverse(&out, 4, 5).unwrap(), rho);
    }

    #[test]
    fn psi_small_cases() {
        for n in 2..=6 {
            assert_eq!(
                psi_forward(&Permutation::identity(n), 1, 1).unwrap(),
                Permutation::identity(n - 1)
            );
        }
        assert_eq!(psi_forward(&perm(&[2, 1]), 1, 2).unwrap(), perm(&[1]));
        assert_eq!(psi_inverse(&perm(&[1]), 1, 2).unwrap(), perm(&[2, 1]));
    }

    #[test]
    fn psi_preconditions() {
        assert_eq!(
            psi_forward(&perm(&[2, 1, 3]), 1, 3),
            Err(Error::ImageMismatch { i: 1, j: 3, actual: 2 })
        );
        assert!(psi_forward(&perm(&[1]), 1, 1).is_err());
        assert!(psi_inverse(&perm(&[1]), 3, 1).is_err());
        let r = restrict(&Permutation::identity(3), 2).unwrap();
        assert!(rewire(&r).is_err());
        let r = restrict(&perm(&[2, 1, 3]), 1).unwrap();
        assert!(relabel(&r).is_err());
    }

    #[test]
    fn psi_roundtrip_exhaustive_n5() {
        for i in 1..=5 {
            for j in 1..=5 {
                for rho in permutations(5).filter(|r| r.image(i) == j) {
                    let out = psi_forward(&rho, i, j).unwrap();
                    assert_eq!(psi_inverse(&out, i, j).unwrap(), rho);
                }
            }
        }
    }

    #[test]
    fn count_b_examples() {
        assert_eq!(count_b(5, 2, 0, 4, 5).unwrap(), 14);
        assert_eq!(count_b(5, 2, 0, 1, 4).unwrap(), 18);
        assert_eq!(count_b(5, 2, 0, 1, 1).unwrap(), 0);
    }

    #[test]
    fn bijection_audit_small() {
        let rep = verify_bijection(5);
        assert!(rep.is_clean(), "{}", rep.to_lines());
        // n = 2..=5, n^2 pairs each
        assert_eq!(rep.claim("psi-bijective").count(), 4 + 9 + 16 + 25);
        assert_eq!(rep.claim("rewire-fixed").count(), 2 + 6 + 12 + 20);
        assert_eq!(rep.claim("psi-worked-example").count(), 1);
    }
}
