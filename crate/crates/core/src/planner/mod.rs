//! Which missing numbers are reachable in a given dimension, and how.
//!
//! Two closures run side by side over the same grid: one seeded only with UPBs
//! whose states are known (Tiles and imports), one seeded additionally with
//! existence facts about sizes. A value in the first has a buildable derivation;
//! a value only in the second is known to exist but cannot be materialized here.

mod closure;
mod multipartite;
mod ranges;
mod reference_grid;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::catalog::{self, gentiles_missing, min_upb_size};
use crate::combinators::{DerivationNode, Rule};
use crate::par::Execution;

use closure::{merge_four_square, Layer};

pub use multipartite::{multipartite_plan, MultipartitePlan};
pub use ranges::{
    even_rows_range, general_range, guaranteed_ranges, lift_range, multipartite_range,
    near_square_range, odd_rows_range, seven_column_range, GuaranteedRange,
};
pub use reference_grid::{
    format_values, parse_values, reference_grid, reproduce_reference_grid, CellDiff, GridReport,
    GRID_MAX,
};

/// Reachable missing numbers of one system, each with a derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingFact {
    pub dims: Vec<usize>,
    pub values: BTreeSet<usize>,
    #[serde(default)]
    pub provenance: BTreeMap<usize, DerivationNode>,
}

impl MissingFact {
    /// A single imported UPB with explicit states, referenced by `name`.
    pub fn imported(name: &str, dims: Vec<usize>, missing: usize) -> Self {
        let node = DerivationNode::leaf(Rule::Import, name, dims.clone(), missing);
        MissingFact {
            dims,
            values: BTreeSet::from([missing]),
            provenance: BTreeMap::from([(missing, node)]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "derivation")]
pub enum Realization {
    /// Every leaf has explicit states; the tree can be built with the combinators.
    Buildable(DerivationNode),
    /// Reachable, but only through size facts without explicit states.
    ExistenceOnly(DerivationNode),
    Unknown,
}

const MIN_SIZE_LEAF: &str = "minimal-size";
const GENTILES_LEAF: &str = "gentiles";
const SEED_LEAF: &str = "seed-3x4";
const IMPORTED_LEAF: &str = "imported";

fn existence_leaf(name: &str, m: usize, n: usize, k: usize) -> DerivationNode {
    DerivationNode::leaf(Rule::Existence, name, vec![m, n], k)
}

/// The fixpoint over `C^m ⊗ C^n` for `m ≤ rows`, `n ≤ cols`.
#[derive(Clone, Debug)]
pub struct Closure {
    rows: usize,
    cols: usize,
    full: Layer,
    buildable: Layer,
    rounds: usize,
}

impl Closure {
    pub fn compute(rows: usize, cols: usize, extra: &[MissingFact], exec: Execution) -> Self {
        let mut full = Layer::new(rows, cols);
        let mut buildable = Layer::new(rows, cols);
        let tiles = DerivationNode::leaf(Rule::Base, catalog::TILES, vec![3, 3], 4);
        full.seed(3, 3, 4, tiles.clone());
        buildable.seed(3, 3, 4, tiles);
        for fact in extra {
            let [m, n] = fact.dims[..] else { continue };
            for &k in &fact.values {
                match fact.provenance.get(&k) {
                    Some(node) if node.is_buildable(&|_| true) => {
                        full.seed(m, n, k, node.clone());
                        buildable.seed(m, n, k, node.clone());
                    }
                    Some(node) => full.seed(m, n, k, node.clone()),
                    None => full.seed(m, n, k, existence_leaf(IMPORTED_LEAF, m, n, k)),
                }
            }
        }
        for m in 3..=rows {
            for n in 3..=cols {
                let k = m * n - min_upb_size(m, n).expect("both dims >= 3");
                full.seed(m, n, k, existence_leaf(MIN_SIZE_LEAF, m, n, k));
                if let Ok(k) = gentiles_missing(m.min(n), m.max(n)) {
                    full.seed(m, n, k, existence_leaf(GENTILES_LEAF, m, n, k));
                }
            }
        }
        for (m, n) in [(3, 4), (4, 3)] {
            for k in catalog::SEED_3X4 {
                full.seed(m, n, k, existence_leaf(SEED_LEAF, m, n, k));
            }
        }
        let rounds = full.saturate(exec);
        buildable.saturate(exec);
        Closure {
            rows,
            cols,
            full,
            buildable,
            rounds,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Rounds until the full closure stopped changing.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn values(&self, m: usize, n: usize) -> BTreeSet<usize> {
        if !self.full.in_grid(m, n) {
            return BTreeSet::new();
        }
        self.full.values(m, n).collect()
    }

    pub fn buildable_values(&self, m: usize, n: usize) -> BTreeSet<usize> {
        if !self.buildable.in_grid(m, n) {
            return BTreeSet::new();
        }
        self.buildable.values(m, n).collect()
    }

    /// A derivation of `k` in `C^m ⊗ C^n`, preferring one with explicit states.
    pub fn realize(&self, m: usize, n: usize, k: usize) -> Realization {
        if self.buildable.contains(m, n, k) {
            let node = self.buildable.derivation(m, n, k).expect("value present");
            Realization::Buildable(merge_four_square(node))
        } else if self.full.contains(m, n, k) {
            let node = self.full.derivation(m, n, k).expect("value present");
            Realization::ExistenceOnly(merge_four_square(node))
        } else {
            Realization::Unknown
        }
    }

    /// The cell as a [`MissingFact`], with the preferred derivation of every value.
    pub fn fact(&self, m: usize, n: usize) -> MissingFact {
        let values = self.values(m, n);
        let provenance = values
            .iter()
            .filter_map(|&k| match self.realize(m, n, k) {
                Realization::Buildable(d) | Realization::ExistenceOnly(d) => Some((k, d)),
                Realization::Unknown => None,
            })
            .collect();
        MissingFact {
            dims: vec![m, n],
            values,
            provenance,
        }
    }
}

/// Closure facts for every cell `3 ≤ m ≤ max_m`, `3 ≤ n ≤ max_n`.
pub fn closure(
    max_m: usize,
    max_n: usize,
    extra: &[MissingFact],
    exec: Execution,
) -> BTreeMap<(usize, usize), MissingFact> {
    let c = Closure::compute(max_m, max_n, extra, exec);
    (3..=max_m)
        .flat_map(|m| (3..=max_n).map(move |n| (m, n)))
        .map(|(m, n)| ((m, n), c.fact(m, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(r: std::ops::RangeInclusive<usize>, extra: &[usize]) -> BTreeSet<usize> {
        r.chain(extra.iter().copied()).collect()
    }

    #[test]
    fn small_cells() {
        let c = Closure::compute(9, 9, &[], Execution::Sequential);
        assert_eq!(c.values(3, 3), BTreeSet::from([4]));
        assert_eq!(c.values(5, 5), set(4..=9, &[12, 16]));
        assert_eq!(c.values(7, 7), set(4..=28, &[30, 36]));
        assert!(c.values(9, 9).contains(&56));
        assert!(c.values(2, 5).is_empty());
        assert!(c.values(10, 3).is_empty());
    }

    #[test]
    fn realize_examples() {
        let c = Closure::compute(6, 6, &[], Execution::Sequential);
        let Realization::Buildable(d) = c.realize(3, 6, 8) else {
            panic!()
        };
        assert_eq!(d.rule, Rule::DirectSumB);
        assert!(d
            .children
            .iter()
            .all(|ch| ch.leaf.as_deref() == Some(catalog::TILES)));
        let Realization::Buildable(d) = c.realize(6, 6, 16) else {
            panic!()
        };
        assert_eq!(d.rule, Rule::FourSquare);
        assert_eq!(d.children.len(), 4);
        assert!(d
            .children
            .iter()
            .all(|ch| ch.leaf.as_deref() == Some(catalog::TILES)));
        assert_eq!(c.realize(3, 3, 5), Realization::Unknown);
        // 24 = 36 - 12 comes only from the minimal-size fact
        let Realization::ExistenceOnly(d) = c.realize(6, 6, 24) else {
            panic!()
        };
        assert_eq!(d.rule, Rule::Existence);
    }

    #[test]
    fn derivations_are_consistent() {
        let c = Closure::compute(8, 8, &[], Execution::Sequential);
        for m in 3..=8 {
            for n in 3..=8 {
                for (k, d) in c.fact(m, n).provenance {
                    assert_eq!((d.dims.clone(), d.missing), (vec![m, n], k));
                    assert!(d.check_arithmetic(), "({m},{n}) {k}");
                }
            }
        }
    }

    #[test]
    fn imported_fact_is_buildable() {
        let extra = MissingFact::imported("mine", vec![4, 4], 7);
        let c = Closure::compute(8, 4, &[extra], Execution::Sequential);
        assert!(c.buildable_values(4, 4).contains(&7));
        let Realization::Buildable(d) = c.realize(8, 4, 14) else {
            panic!()
        };
        assert!(d.is_buildable(&|name| name == "mine" || name == catalog::TILES));
    }

    #[test]
    fn execution_modes_agree() {
        let a = Closure::compute(10, 10, &[], Execution::Sequential);
        let b = Closure::compute(10, 10, &[], Execution::Parallel);
        for m in 3..=10 {
            for n in 3..=10 {
                assert_eq!(a.fact(m, n), b.fact(m, n));
            }
        }
    }
}
