//! Missing numbers for three or more parties, obtained by repeatedly appending a
//! party with the lift rule: `K` parts in the old system (complete bases allowed,
//! at least one a UPB) give a UPB whose missing number is the sum of the parts'.

use std::collections::{BTreeMap, BTreeSet};

use super::closure::Bits;
use super::{Closure, MissingFact, Realization};
use crate::combinators::{DerivationNode, Rule};
use crate::error::{Error, Result};
use crate::par::Execution;

#[derive(Clone, Debug)]
pub struct MultipartitePlan {
    dims: Vec<usize>,
    base: Closure,
    /// `levels[j]` holds the values for `dims[..j + 2]`; level 0 is bipartite.
    levels: Vec<BTreeSet<usize>>,
}

/// Plans `C^{d1} ⊗ … ⊗ C^{dN}`, `N ≥ 3`, from the bipartite closure of `(d1, d2)`.
pub fn multipartite_plan(
    dims: &[usize],
    extra: &[MissingFact],
    exec: Execution,
) -> Result<MultipartitePlan> {
    if dims.len() < 3 {
        return Err(Error::Hypothesis(format!(
            "multipartite plan needs at least 3 parties, got {}",
            dims.len()
        )));
    }
    if dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidDims(dims.to_vec()));
    }
    let base = Closure::compute(dims[0], dims[1], extra, exec);
    let mut levels = vec![base.values(dims[0], dims[1])];
    for &k in &dims[2..] {
        let prev = levels.last().expect("nonempty");
        levels.push(lift_sumset(prev, k));
    }
    Ok(MultipartitePlan {
        dims: dims.to_vec(),
        base,
        levels,
    })
}

fn to_bits(values: &BTreeSet<usize>, cap: usize) -> Bits {
    let mut b = Bits::new(cap);
    b.insert(0);
    for &v in values {
        b.insert(v);
    }
    b
}

/// Sums of `k` parts drawn from `values ∪ {0}`, excluding the all-zero sum.
fn lift_sumset(values: &BTreeSet<usize>, k: usize) -> BTreeSet<usize> {
    let cap = values.last().copied().unwrap_or(0) * k + 1;
    let part = to_bits(values, cap);
    let mut acc = part.clone();
    for _ in 1..k {
        let mut next = Bits::new(cap);
        for x in part.iter() {
            next.or_shifted(&acc, x);
        }
        acc = next;
    }
    acc.iter().filter(|&v| v > 0).collect()
}

/// Largest `l` with `4..=l` contained in `values` (0 if 4 is absent).
fn contiguous_top(values: &BTreeSet<usize>) -> usize {
    let mut l = 0;
    let mut v = 4;
    while values.contains(&v) {
        l = v;
        v += 1;
    }
    l
}

/// Splits `t` into `k` parts from `values ∪ {0}`. When every value in `4..=l`
/// is available with `l ≥ 8` and `t ≤ k·l`, uses `t = q·l + r` with
/// `r = 0`: `q` copies of `l`; `0 < r < 4`: `q − 1` copies of `l`, then
/// `l − (4 − r)` and `4`; `4 ≤ r`: `q` copies of `l`, then `r`.
/// Otherwise falls back to a search over partial sums.
fn split_parts(values: &BTreeSet<usize>, k: usize, t: usize) -> Option<Vec<usize>> {
    let l = contiguous_top(values);
    let mut parts = if l >= 8 && t <= k * l {
        let (q, r) = (t / l, t % l);
        match r {
            0 => vec![l; q],
            1..=3 => {
                let mut p = vec![l; q - 1];
                p.extend([l - (4 - r), 4]);
                p
            }
            _ => {
                let mut p = vec![l; q];
                p.push(r);
                p
            }
        }
    } else {
        // reach[c] = sums of c parts
        let cap = t + 1;
        let part = to_bits(values, cap);
        let mut reach = vec![to_bits(&BTreeSet::new(), cap)];
        for c in 1..=k {
            let mut next = Bits::new(cap);
            for x in part.iter() {
                next.or_shifted(&reach[c - 1], x);
            }
            reach.push(next);
        }
        if !reach[k].contains(t) {
            return None;
        }
        let mut parts = Vec::new();
        let mut rest = t;
        for c in (1..=k).rev() {
            let x = part
                .iter()
                .find(|&x| x <= rest && reach[c - 1].contains(rest - x))?;
            parts.push(x);
            rest -= x;
        }
        parts.retain(|&x| x > 0);
        parts
    };
    debug_assert!(parts.len() <= k && parts.iter().sum::<usize>() == t);
    parts.resize(k, 0);
    Some(parts)
}

impl MultipartitePlan {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &BTreeSet<usize> {
        self.levels.last().expect("nonempty")
    }

    /// Values reachable for the first `parties` parties (`2 ≤ parties ≤ N`).
    pub fn level_values(&self, parties: usize) -> &BTreeSet<usize> {
        &self.levels[parties - 2]
    }

    fn realize_level(&self, level: usize, t: usize) -> Option<(DerivationNode, bool)> {
        if level == 0 {
            return match self.base.realize(self.dims[0], self.dims[1], t) {
                Realization::Buildable(d) => Some((d, true)),
                Realization::ExistenceOnly(d) => Some((d, false)),
                Realization::Unknown => None,
            };
        }
        if !self.levels[level].contains(&t) {
            return None;
        }
        let k = self.dims[level + 1];
        let inner = &self.dims[..level + 1];
        let parts = split_parts(&self.levels[level - 1], k, t)?;
        let mut buildable = true;
        let mut children = Vec::with_capacity(k);
        for x in parts {
            if x == 0 {
                children.push(DerivationNode::complete(inner.to_vec()));
            } else {
                let (d, b) = self.realize_level(level - 1, x)?;
                buildable &= b;
                children.push(d);
            }
        }
        Some((
            DerivationNode::node(Rule::Lift, self.dims[..level + 2].to_vec(), t, children),
            buildable,
        ))
    }

    pub fn realize(&self, t: usize) -> Realization {
        match self.realize_level(self.levels.len() - 1, t) {
            Some((d, true)) => Realization::Buildable(d),
            Some((d, false)) => Realization::ExistenceOnly(d),
            None => Realization::Unknown,
        }
    }

    pub fn fact(&self) -> MissingFact {
        let provenance: BTreeMap<usize, DerivationNode> = self
            .values()
            .iter()
            .filter_map(|&t| match self.realize(t) {
                Realization::Buildable(d) | Realization::ExistenceOnly(d) => Some((t, d)),
                Realization::Unknown => None,
            })
            .collect();
        MissingFact {
            dims: self.dims.clone(),
            values: self.values().clone(),
            provenance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::TILES;

    #[test]
    fn small_plans() {
        let p = multipartite_plan(&[3, 3, 2], &[], Execution::Sequential).unwrap();
        assert_eq!(p.values(), &BTreeSet::from([4, 8]));
        let p = multipartite_plan(&[3, 3, 3], &[], Execution::Sequential).unwrap();
        assert_eq!(p.values(), &BTreeSet::from([4, 8, 12]));
        let Realization::Buildable(d) = p.realize(12) else {
            panic!()
        };
        assert_eq!(d.children.len(), 3);
        assert!(d.children.iter().all(|c| c.leaf.as_deref() == Some(TILES)));
        assert_eq!(p.realize(5), Realization::Unknown);
    }

    #[test]
    fn ten_four_two() {
        let p = multipartite_plan(&[10, 4, 2], &[], Execution::Sequential).unwrap();
        assert!((4..=12).all(|v| p.values().contains(&v)));
        let fact = p.fact();
        for (t, d) in &fact.provenance {
            assert_eq!(d.missing, *t);
            assert!(d.check_arithmetic());
            assert_eq!(d.rule, Rule::Lift);
            assert_eq!(d.children.len(), 2);
        }
    }

    #[test]
    fn quotient_remainder_cases() {
        let vals: BTreeSet<usize> = (4..=10).collect();
        assert_eq!(split_parts(&vals, 3, 20), Some(vec![10, 10, 0]));
        assert_eq!(split_parts(&vals, 3, 22), Some(vec![10, 8, 4]));
        assert_eq!(split_parts(&vals, 3, 17), Some(vec![10, 7, 0]));
        assert_eq!(split_parts(&vals, 3, 30), Some(vec![10, 10, 10]));
        assert_eq!(split_parts(&vals, 3, 31), None);
        let sparse = BTreeSet::from([4, 9]);
        assert_eq!(split_parts(&sparse, 2, 13), Some(vec![4, 9]));
        assert_eq!(split_parts(&sparse, 2, 12), None);
    }

    #[test]
    fn too_few_parties() {
        assert_eq!(
            multipartite_plan(&[3, 3], &[], Execution::Sequential)
                .unwrap_err()
                .code(),
            "hypothesis_violated"
        );
    }
}
