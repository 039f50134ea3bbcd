//! Missing-number sets that the general constructions guarantee, stated literally
//! so they can be checked against the closure.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

fn interval(lo: usize, hi: usize) -> BTreeSet<usize> {
    (lo..=hi).collect()
}

fn hypothesis(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Hypothesis(msg()))
    }
}

/// `C^n ⊗ C^m` with `7 ≤ n ≤ m ≤ n + 1`: every value in `4..=⌊mn/2⌋ + 1`.
pub fn near_square_range(n: usize, m: usize) -> Result<BTreeSet<usize>> {
    hypothesis(7 <= n && n <= m && m <= n + 1, || {
        format!("near-square range needs 7 <= n <= m <= n+1, got ({n}, {m})")
    })?;
    Ok(interval(4, m * n / 2 + 1))
}

/// `C^n ⊗ C^7` with `n ≥ 7`: `4..=6n−14` together with `6n−12` and `6n−6`.
pub fn seven_column_range(n: usize) -> Result<BTreeSet<usize>> {
    hypothesis(n >= 7, || {
        format!("seven-column range needs n >= 7, got {n}")
    })?;
    let mut s = interval(4, 6 * n - 14);
    s.extend([6 * n - 12, 6 * n - 6]);
    Ok(s)
}

/// `C^{2m+1} ⊗ C^n` with `m ≥ 2`, `n ≥ 10`: `4..=2m(n−8)`.
pub fn odd_rows_range(m: usize, n: usize) -> Result<BTreeSet<usize>> {
    hypothesis(m >= 2 && n >= 10, || {
        format!("odd-rows range needs m >= 2, n >= 10, got ({m}, {n})")
    })?;
    Ok(interval(4, 2 * m * (n - 8)))
}

/// `C^{2m} ⊗ C^n` with `m ≥ 2`, `n ≥ 10`: `4..=(2m−1)(n−8)`.
pub fn even_rows_range(m: usize, n: usize) -> Result<BTreeSet<usize>> {
    hypothesis(m >= 2 && n >= 10, || {
        format!("even-rows range needs m >= 2, n >= 10, got ({m}, {n})")
    })?;
    Ok(interval(4, (2 * m - 1) * (n - 8)))
}

/// `C^m ⊗ C^n` with `m ≥ 4`, `n ≥ 10`: `4..=(m−1)(n−8)`.
pub fn general_range(m: usize, n: usize) -> Result<BTreeSet<usize>> {
    hypothesis(m >= 4 && n >= 10, || {
        format!("general range needs m >= 4, n >= 10, got ({m}, {n})")
    })?;
    Ok(interval(4, (m - 1) * (n - 8)))
}

/// Adding a party of dimension `d` to a system that reaches every value in
/// `4..=l` (with `l ≥ 8`) reaches `4..=d·l`.
pub fn lift_range(l: usize, d: usize) -> Result<BTreeSet<usize>> {
    hypothesis(l >= 8 && d >= 2, || {
        format!("lift range needs l >= 8, d >= 2, got l = {l}, d = {d}")
    })?;
    Ok(interval(4, d * l))
}

/// `d1 ≥ d2 ≥ … ≥ dN`, `d1 ≥ 10`, `d2 ≥ 4`, `N ≥ 3`: `4..=(d1−8)(d2−1)·d3⋯dN`.
pub fn multipartite_range(dims: &[usize]) -> Result<BTreeSet<usize>> {
    hypothesis(
        dims.len() >= 3 && dims.windows(2).all(|w| w[0] >= w[1]) && dims[0] >= 10 && dims[1] >= 4,
        || {
            format!("multipartite range needs N >= 3, non-increasing dims, d1 >= 10, d2 >= 4, got {dims:?}")
        },
    )?;
    let tail: usize = dims[2..].iter().product();
    Ok(interval(4, (dims[0] - 8) * (dims[1] - 1) * tail))
}

#[derive(Clone, Debug, Serialize)]
pub struct GuaranteedRange {
    pub name: &'static str,
    pub values: BTreeSet<usize>,
}

/// Every guarantee whose hypothesis holds for `dims`, read in the given orientation.
pub fn guaranteed_ranges(dims: &[usize]) -> Vec<GuaranteedRange> {
    let mut out = Vec::new();
    let mut push = |name, r: Result<BTreeSet<usize>>| {
        if let Ok(values) = r {
            out.push(GuaranteedRange { name, values });
        }
    };
    match *dims {
        [a, b] => {
            push("near_square", near_square_range(a, b));
            if b == 7 {
                push("seven_column", seven_column_range(a));
            }
            if a % 2 == 1 {
                push("odd_rows", odd_rows_range(a / 2, b));
            } else {
                push("even_rows", even_rows_range(a / 2, b));
            }
            push("general", general_range(a, b));
        }
        _ => push("multipartite", multipartite_range(dims)),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        assert_eq!(near_square_range(7, 7).unwrap(), interval(4, 25));
        let mut s = interval(4, 46);
        s.extend([48, 54]);
        assert_eq!(seven_column_range(10).unwrap(), s);
        assert_eq!(general_range(4, 10).unwrap(), BTreeSet::from([4, 5, 6]));
        assert_eq!(multipartite_range(&[10, 4, 2]).unwrap(), interval(4, 12));
        assert_eq!(lift_range(8, 3).unwrap(), interval(4, 24));
    }

    #[test]
    fn hypotheses_are_reported() {
        for r in [
            near_square_range(6, 6),
            near_square_range(7, 9),
            seven_column_range(6),
            odd_rows_range(1, 12),
            even_rows_range(2, 9),
            general_range(3, 12),
            lift_range(7, 3),
            multipartite_range(&[10, 4]),
            multipartite_range(&[9, 4, 2]),
            multipartite_range(&[10, 3, 2]),
            multipartite_range(&[10, 4, 5]),
        ] {
            assert_eq!(r.unwrap_err().code(), "hypothesis_violated");
        }
    }

    #[test]
    fn applicable_ranges() {
        let names = |d: &[usize]| {
            guaranteed_ranges(d)
                .iter()
                .map(|r| r.name)
                .collect::<Vec<_>>()
        };
        assert_eq!(names(&[7, 7]), ["near_square", "seven_column"]);
        assert_eq!(names(&[5, 12]), ["odd_rows", "general"]);
        assert_eq!(names(&[3, 3]), Vec::<&str>::new());
        assert_eq!(names(&[10, 4, 2]), ["multipartite"]);
    }
}
