//! The reference grid of achievable missing numbers for `3 ≤ n ≤ m ≤ 14`, and the
//! comparison of the closure against it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::Closure;
use crate::par::Execution;

/// Row `m`, then the cells for columns `n = 3..=m`.
const GRID: &str = "\
3|4
4|4-6|4-8
5|4-6, 8|4-8, 12|4-9, 12, 16
6|4-6, 8, 10|4-12, 14|4-14, 16, 20|4-16, 18, 20, 24
7|4-6, 8-10, 12|4-14, 18|4-18, 20, 24|4-22, 24, 30|4-28, 30, 36
8|4-6, 8-12, 14|4-18, 20|4-22, 24, 28|4-26, 28, 30, 34|4-34, 36, 42|4-40, 42, 48
9|4-6, 8-14, 16|4-20, 24|4-26, 28, 32|4-32, 34, 40|4-40, 42, 48|4-46, 48, 56|4-54, 56, 64
10|4-6, 8-16, 18|4-24, 26|4-30, 32, 36|4-36, 38, 40, 44|4-46, 48, 54|4-54, 56, 62|4-62, 64, 72|4-70, 72, 80
11|4-6, 8-18, 20|4-26, 30|4-34, 36, 40|4-42, 44, 50|4-52, 54, 60|4-60, 62, 70|4-70, 72, 80|4-78, 80, 90|4-88, 90, 100
12|4-6, 8-20, 22|4-30, 32|4-38, 40, 44|4-46, 48, 50, 54|4-58, 60, 66|4-68, 70, 76|4-78, 80, 88|4-88, 90, 98|4-98, 100, 110|4-108, 110, 120
13|4-6, 8-22, 24|4-32, 36|4-42, 44, 48|4-52, 54, 60|4-64, 66, 72|4-74, 76, 84|4-86, 88, 96|4-96, 98, 108|4-108, 110, 120|4-118, 120, 132|4-130, 132, 144
14|4-6, 8-24, 26|4-36, 38|4-46, 48, 52|4-56, 58, 60, 64|4-70, 72, 78|4-82, 84, 90|4-94, 96, 104|4-106, 108, 116|4-118, 120, 130|4-130, 132, 142|4-142, 144, 156|4-154, 156, 168";

pub const GRID_MAX: usize = 14;

/// Parses `"4-6, 8, 10"` style lists.
pub fn parse_values(text: &str) -> Option<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        match tok.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
                if a > b {
                    return None;
                }
                out.extend(a..=b);
            }
            None => {
                out.insert(tok.parse().ok()?);
            }
        }
    }
    Some(out)
}

/// Inverse of [`parse_values`]: maximal runs of consecutive values become `a-b`.
pub fn format_values(values: &BTreeSet<usize>) -> String {
    let mut parts = Vec::new();
    let mut it = values.iter().copied().peekable();
    while let Some(start) = it.next() {
        let mut end = start;
        while it.peek() == Some(&(end + 1)) {
            end = it.next().unwrap();
        }
        parts.push(if end > start {
            format!("{start}-{end}")
        } else {
            start.to_string()
        });
    }
    parts.join(", ")
}

/// Grid cells keyed by `(row m, column n)`, `3 ≤ n ≤ m ≤ 14`.
pub fn reference_grid() -> BTreeMap<(usize, usize), BTreeSet<usize>> {
    let mut out = BTreeMap::new();
    for line in GRID.lines() {
        let mut cells = line.split('|');
        let m: usize = cells
            .next()
            .and_then(|c| c.parse().ok())
            .expect("row label");
        for (j, cell) in cells.enumerate() {
            out.insert((m, 3 + j), parse_values(cell).expect("well-formed cell"));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CellDiff {
    pub row: usize,
    pub col: usize,
    pub table: BTreeSet<usize>,
    pub closure: BTreeSet<usize>,
    /// Table values the closure does not reach.
    pub missed: BTreeSet<usize>,
    /// Closure values absent from the table.
    pub extra: BTreeSet<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GridReport {
    pub cells: Vec<CellDiff>,
    pub missed_total: usize,
    pub extra_total: usize,
}

impl GridReport {
    pub fn is_reproduced(&self) -> bool {
        self.missed_total == 0
    }

    /// Lower-triangular text grid of the closure; `!` marks a cell with missed
    /// values and `+` a cell with extra values.
    pub fn grid(&self) -> String {
        let mut out = String::new();
        for m in 3..=GRID_MAX {
            let _ = write!(out, "{m:>3} |");
            for c in self.cells.iter().filter(|c| c.row == m) {
                let mark = if !c.missed.is_empty() {
                    "!"
                } else if !c.extra.is_empty() {
                    "+"
                } else {
                    ""
                };
                let _ = write!(out, " {}{mark} |", format_values(&c.closure));
            }
            out.push('\n');
        }
        out
    }
}

/// Runs the closure over the `3..=14` grid and compares every cell.
pub fn reproduce_reference_grid(exec: Execution) -> GridReport {
    let closure = Closure::compute(GRID_MAX, GRID_MAX, &[], exec);
    diff_against(&closure)
}

pub(crate) fn diff_against(closure: &Closure) -> GridReport {
    let cells: Vec<CellDiff> = reference_grid()
        .into_iter()
        .map(|((m, n), table)| {
            let reached = closure.values(m, n);
            CellDiff {
                row: m,
                col: n,
                missed: table.difference(&reached).copied().collect(),
                extra: reached.difference(&table).copied().collect(),
                table,
                closure: reached,
            }
        })
        .collect();
    GridReport {
        missed_total: cells.iter().map(|c| c.missed.len()).sum(),
        extra_total: cells.iter().map(|c| c.extra.len()).sum(),
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape_and_spot_cells() {
        let t = reference_grid();
        assert_eq!(t.len(), (1..=12).sum::<usize>());
        assert_eq!(t[&(3, 3)], BTreeSet::from([4]));
        let mut c77: BTreeSet<usize> = (4..=28).collect();
        c77.extend([30, 36]);
        assert_eq!(t[&(7, 7)], c77);
        assert_eq!(format_values(&t[&(14, 14)]), "4-154, 156, 168");
        assert_eq!(format_values(&t[&(10, 7)]), "4-46, 48, 54");
    }

    #[test]
    fn closure_matches_every_cell() {
        let r = reproduce_reference_grid(Execution::Sequential);
        let bad: Vec<_> = r
            .cells
            .iter()
            .filter(|c| !c.missed.is_empty() || !c.extra.is_empty())
            .collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(r.is_reproduced());
        assert!(r
            .grid()
            .lines()
            .nth(4)
            .unwrap()
            .starts_with("  7 | 4-6, 8-10, 12 |"));
    }

    #[test]
    fn value_lists_round_trip() {
        for s in ["4", "4-6, 8, 10", "4-9, 12, 16"] {
            assert_eq!(format_values(&parse_values(s).unwrap()), s);
        }
        assert!(parse_values("6-4").is_none());
        assert!(parse_values("x").is_none());
    }
}
