//! Claim audits over exact values of `p` and `f`, plus the triangle and
//! table renderings.

mod identities;
mod monotone;
mod oracle_checks;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::conditional::f_raw;
use crate::counts::p_raw;
use crate::error::{Error, Result};
use crate::exact::{render_decimal, DecimalStyle, Prob};

pub use identities::{identity_suite, last_point_suite, p_nonmonotone_witnesses, sandwich_suite};
pub use monotone::{
    k_n_link, monotone_in_d, monotone_in_d_exception, monotone_in_k, monotone_in_k_exception, monotone_in_n,
    monotone_in_n_exception,
};
pub use oracle_checks::{fixed_point_removal, image_pinned_counts, oracle_equivalence, subset_independence};

/// Largest `n` accepted by [`triangle`] and [`table_render`].
pub const RENDER_LIMIT: u32 = 30;

/// All `f(n, k, d)` for `n <= n_max`, indexed `[n][k][d]`.
pub(crate) struct FTable {
    vals: Vec<Vec<Vec<Prob>>>,
}

impl FTable {
    pub(crate) fn build(n_max: u32) -> FTable {
        let vals = (0..=n_max)
            .into_par_iter()
            .map(|n| (0..n).map(|k| (0..=k).map(|d| f_raw(n, k, d)).collect()).collect())
            .collect();
        FTable { vals }
    }

    pub(crate) fn get(&self, n: u32, k: u32, d: u32) -> &Prob {
        &self.vals[n as usize][k as usize][d as usize]
    }
}

fn check_render_range(n: u32) -> Result<()> {
    if !(1..=RENDER_LIMIT).contains(&n) {
        return Err(Error::Range {
            what: "n",
            detail: format!("expected 1..={RENDER_LIMIT}, got {n}"),
        });
    }
    Ok(())
}

/// `f(n, k, d)` for every `0 <= d <= k <= n - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    n: u32,
    entries: BTreeMap<(u32, u32), Prob>,
}

impl Triangle {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Entry at `(k, d)`.
    pub fn entry(&self, k: u32, d: u32) -> Option<&Prob> {
        self.entries.get(&(k, d))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `((k, d), f)` in `(k, d)` order.
    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), &Prob)> {
        self.entries.iter().map(|(key, v)| (*key, v))
    }

    /// Entries with the given `d`, in increasing `k`.
    pub fn row(&self, d: u32) -> Vec<(u32, &Prob)> {
        (d..self.n).filter_map(|k| self.entry(k, d).map(|v| (k, v))).collect()
    }

    /// Rows from `d = n-1` down to `d = 0`; entry `(k, d)` sits in column
    /// `2k - d` so that consecutive rows interleave.
    pub fn render_ascii(&self, places: u32) -> String {
        let labels: Vec<String> = (0..self.n).map(|d| format!("d={d}:")).collect();
        let label_width = labels.iter().map(String::len).max().unwrap_or(0);
        let cell = places as usize + 3;
        let mut out = String::new();
        for d in (0..self.n).rev() {
            let mut line = format!("{:<label_width$}", labels[d as usize]);
            let mut col = 0;
            for (k, v) in self.row(d) {
                let target = (2 * k - d) as usize;
                while col < target {
                    line.push_str(&" ".repeat(cell));
                    col += 1;
                }
                line.push_str(&format!("{:>cell$}", v.render(places)));
                col += 1;
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

pub fn triangle(n: u32) -> Result<Triangle> {
    check_render_range(n)?;
    let mut entries = BTreeMap::new();
    for k in 0..n {
        for d in 0..=k {
            entries.insert((k, d), f_raw(n, k, d));
        }
    }
    Ok(Triangle { n, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// `p(n, k, 0)` for `0 <= k <= n`.
    P,
    /// `f(n, k, 0)` for `0 <= k <= n - 1`.
    F,
}

/// Cells `(n, k, value)` of a `d = 0` table, row-major.
pub fn table_cells(which: TableKind, n_max: u32, k_max: Option<u32>) -> Result<Vec<(u32, u32, Prob)>> {
    check_render_range(n_max)?;
    let mut cells = Vec::new();
    for n in 1..=n_max {
        let last = match which {
            TableKind::P => n,
            TableKind::F => n - 1,
        };
        let last = k_max.map_or(last, |km| last.min(km));
        for k in 0..=last {
            let v = match which {
                TableKind::P => p_raw(n, k, 0),
                TableKind::F => f_raw(n, k, 0),
            };
            cells.push((n, k, v));
        }
    }
    Ok(cells)
}

/// Text table of `p(n, k, 0)` or `f(n, k, 0)`, one row per `n`. Values are
/// rounded half away from zero and printed without a leading zero or
/// trailing zeros (`.5`, `.4417`, `1`).
pub fn table_render(which: TableKind, n_max: u32, k_max: Option<u32>, places: u32) -> Result<String> {
    if places < 1 {
        return Err(Error::Range {
            what: "places",
            detail: "need at least 1 decimal place".into(),
        });
    }
    let cells = table_cells(which, n_max, k_max)?;
    let cols = cells.iter().map(|c| c.1).max().unwrap_or(0);
    let width = places as usize + 3;
    let row_label = n_max.to_string().len().max(3);

    let mut out = format!("{:<row_label$}", "n\\k");
    for k in 0..=cols {
        out.push_str(&format!("{k:>width$}"));
    }
    out.push('\n');
    for n in 1..=n_max {
        let mut line = format!("{n:<row_label$}");
        for (_, _, v) in cells.iter().filter(|c| c.0 == n) {
            let s = render_decimal(&v.to_rational(), places, DecimalStyle::Trimmed);
            line.push_str(&format!("{s:>width$}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_examples() {
        let t = triangle(5).unwrap();
        assert_eq!(t.len(), 15);
        assert_eq!(t.entry(4, 2).unwrap().to_string(), "1/3");
        assert_eq!(t.entry(4, 2).unwrap().render(3), "0.333");
        assert!(t.entry(4, 3).unwrap().is_zero());
        assert_eq!(t.entry(4, 3).unwrap().render(3), "0.000");
        let bottom: Vec<String> = t.row(0).iter().map(|(_, v)| v.render(3)).collect();
        assert_eq!(bottom, ["0.200", "0.188", "0.179", "0.172", "0.170"]);
    }

    #[test]
    fn triangle_range() {
        assert!(triangle(0).is_err());
        assert!(triangle(31).is_err());
        assert_eq!(triangle(1).unwrap().render_ascii(3), "d=0: 1.000\n");
    }

    #[test]
    fn triangle_ascii_layout() {
        let s = triangle(3).unwrap().render_ascii(3);
        let expected = "\
d=2:             1.000
d=1:       0.500       0.000
d=0: 0.333       0.250       0.333
";
        assert_eq!(s, expected);
    }

    #[test]
    fn triangle_row_start_and_reindexing() {
        for n in 1..=20 {
            let t = triangle(n).unwrap();
            for ((k, d), v) in t.entries() {
                assert_eq!(v, &f_raw(n - d, k - d, 0));
                if k == d {
                    assert_eq!(v.to_string(), format!("1/{}", n - d));
                }
            }
        }
    }

    #[test]
    fn table_examples() {
        let p = table_cells(TableKind::P, 6, None).unwrap();
        let get = |cells: &[(u32, u32, Prob)], n, k| {
            let v = &cells.iter().find(|c| c.0 == n && c.1 == k).unwrap().2;
            render_decimal(&v.to_rational(), 4, DecimalStyle::Trimmed)
        };
        // 362/720; enumeration agrees
        assert_eq!(get(&p, 6, 4), ".5028");
        assert_eq!(get(&p, 3, 1), ".6667");
        let f = table_cells(TableKind::F, 6, None).unwrap();
        assert_eq!(get(&f, 5, 4), ".1698");
        assert_eq!(get(&f, 1, 0), "1");
        assert_eq!(f.len(), 21);
        assert_eq!(p.len(), 27);
    }

    #[test]
    fn table_render_layout() {
        let s = table_render(TableKind::F, 3, None, 4).unwrap();
        let expected = "\
n\\k      0      1      2
1        1
2       .5      0
3    .3333    .25  .3333
";
        assert_eq!(s, expected);
        assert!(table_render(TableKind::F, 3, None, 0).is_err());
        assert!(table_render(TableKind::P, 0, None, 4).is_err());
        let narrow = table_render(TableKind::P, 4, Some(1), 4).unwrap();
        assert_eq!(narrow.lines().last().unwrap().split_whitespace().count(), 3);
    }
}
