//! Least fixpoint of missing-number facts on a rectangular grid of bipartite dims.
//!
//! Cell `(m, n)` holds the missing numbers known to be achievable in `C^m ⊗ C^n`.
//! Rules, applied in synchronous rounds until nothing changes:
//! * side by side along B: `k1 + k2` at `(m, n1 + n2)`, where either side may be a
//!   complete basis (missing 0) of any width but at least one side is a UPB;
//! * stacked along A: the same with the roles of the parties swapped;
//! * tensor: `m1m2·n1n2 − (m1n1 − k1)(m2n2 − k2)` at `(m1m2, n1n2)`.

use std::collections::BTreeMap;

use crate::combinators::{DerivationNode, Rule};
use crate::par::{self, Execution};

/// Fixed-capacity bitset with a shifted-or for sumsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn new(capacity: usize) -> Self {
        Bits(vec![0; capacity / 64 + 1])
    }

    fn capacity(&self) -> usize {
        self.0.len() * 64
    }

    pub(crate) fn insert(&mut self, v: usize) {
        if v < self.capacity() {
            self.0[v / 64] |= 1 << (v % 64);
        }
    }

    pub(crate) fn contains(&self, v: usize) -> bool {
        v < self.capacity() && self.0[v / 64] >> (v % 64) & 1 == 1
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }

    /// `self |= other << shift`, truncated to capacity.
    pub(crate) fn or_shifted(&mut self, other: &Bits, shift: usize) {
        let (words, bits) = (shift / 64, shift % 64);
        for i in (words..self.0.len()).rev() {
            let src = i - words;
            let mut v = other.0.get(src).copied().unwrap_or(0) << bits;
            if bits > 0 && src > 0 {
                v |= other.0.get(src - 1).copied().unwrap_or(0) >> (64 - bits);
            }
            self.0[i] |= v;
        }
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
}

/// How a value entered a cell. Sides with missing number 0 are complete bases.
#[derive(Clone, Debug)]
pub(crate) enum Prov {
    Given(Box<DerivationNode>),
    /// `(width of the left block, k_left, k_right)`
    SumB(usize, usize, usize),
    /// `(height of the top block, k_top, k_bottom)`
    SumA(usize, usize, usize),
    /// `((m1, n1, k1), (m2, n2, k2))`
    Tensor((usize, usize, usize), (usize, usize, usize)),
}

#[derive(Clone, Debug)]
pub(crate) struct Layer {
    rows: usize,
    cols: usize,
    bits: Vec<Bits>,
    prov: Vec<BTreeMap<usize, Prov>>,
}

impl Layer {
    pub(crate) fn new(rows: usize, cols: usize) -> Self {
        let cells = (rows + 1) * (cols + 1);
        let cap = rows * cols + 1;
        Layer {
            rows,
            cols,
            bits: vec![Bits::new(cap); cells],
            prov: vec![BTreeMap::new(); cells],
        }
    }

    fn idx(&self, m: usize, n: usize) -> usize {
        m * (self.cols + 1) + n
    }

    pub(crate) fn in_grid(&self, m: usize, n: usize) -> bool {
        (1..=self.rows).contains(&m) && (1..=self.cols).contains(&n)
    }

    /// Adds a seed value; the first provenance recorded for a value is kept.
    pub(crate) fn seed(&mut self, m: usize, n: usize, k: usize, node: DerivationNode) {
        if !self.in_grid(m, n) || k == 0 || k >= m * n {
            return;
        }
        let i = self.idx(m, n);
        if !self.bits[i].contains(k) {
            self.bits[i].insert(k);
            self.prov[i].insert(k, Prov::Given(Box::new(node)));
        }
    }

    pub(crate) fn cell(&self, m: usize, n: usize) -> &Bits {
        &self.bits[self.idx(m, n)]
    }

    pub(crate) fn values(&self, m: usize, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.prov[self.idx(m, n)].keys().copied()
    }

    pub(crate) fn contains(&self, m: usize, n: usize, k: usize) -> bool {
        self.in_grid(m, n) && self.cell(m, n).contains(k)
    }

    /// Cell values plus 0 for the complete basis.
    fn with_complete(&self, m: usize, n: usize) -> Bits {
        let mut b = self.cell(m, n).clone();
        b.insert(0);
        b
    }

    fn sumset(&self, a: &Bits, b: &Bits, into: &mut Bits) {
        for x in a.iter() {
            into.or_shifted(b, x);
        }
    }

    /// Everything one round of the rules produces at `(m, n)`.
    fn reach(&self, m: usize, n: usize) -> Bits {
        let mut acc = Bits::new(self.rows * self.cols + 1);
        for n1 in 1..n {
            self.sumset(
                &self.with_complete(m, n1),
                &self.with_complete(m, n - n1),
                &mut acc,
            );
        }
        for m1 in 1..m {
            self.sumset(
                &self.with_complete(m1, n),
                &self.with_complete(m - m1, n),
                &mut acc,
            );
        }
        for (m1, n1, m2, n2) in factor_pairs(m, n) {
            for x in self.cell(m1, n1).iter() {
                for y in self.cell(m2, n2).iter() {
                    acc.insert(m * n - (m1 * n1 - x) * (m2 * n2 - y));
                }
            }
        }
        acc
    }

    /// First decomposition of `v` at `(m, n)` in rule order.
    fn explain(&self, m: usize, n: usize, v: usize) -> Prov {
        for n1 in 1..n {
            let (l, r) = (self.with_complete(m, n1), self.with_complete(m, n - n1));
            let hit = l
                .iter()
                .take_while(|&x| x <= v)
                .find(|&x| r.contains(v - x));
            if let Some(x) = hit {
                return Prov::SumB(n1, x, v - x);
            }
        }
        for m1 in 1..m {
            let (t, b) = (self.with_complete(m1, n), self.with_complete(m - m1, n));
            let hit = t
                .iter()
                .take_while(|&x| x <= v)
                .find(|&x| b.contains(v - x));
            if let Some(x) = hit {
                return Prov::SumA(m1, x, v - x);
            }
        }
        for (m1, n1, m2, n2) in factor_pairs(m, n) {
            let rest = m * n - v;
            for x in self.cell(m1, n1).iter() {
                let a = m1 * n1 - x;
                if rest.is_multiple_of(a) && rest / a <= m2 * n2 {
                    let y = m2 * n2 - rest / a;
                    if self.cell(m2, n2).contains(y) {
                        return Prov::Tensor((m1, n1, x), (m2, n2, y));
                    }
                }
            }
        }
        unreachable!("value {v} at ({m}, {n}) was produced by some rule")
    }

    /// Runs rounds until no cell changes.
    pub(crate) fn saturate(&mut self, exec: Execution) -> usize {
        let cells: Vec<(usize, usize)> = (3..=self.rows)
            .flat_map(|m| (3..=self.cols).map(move |n| (m, n)))
            .collect();
        let mut rounds = 0;
        loop {
            rounds += 1;
            let updates = par::map(exec, &cells, |&(m, n)| {
                let fresh = self.reach(m, n).and_not(self.cell(m, n));
                let found: Vec<(usize, Prov)> = fresh
                    .iter()
                    .filter(|&v| v > 0 && v < m * n)
                    .map(|v| (v, self.explain(m, n, v)))
                    .collect();
                found
            });
            let mut changed = false;
            for (&(m, n), found) in cells.iter().zip(updates) {
                let i = self.idx(m, n);
                for (v, p) in found {
                    changed = true;
                    self.bits[i].insert(v);
                    self.prov[i].insert(v, p);
                }
            }
            if !changed {
                return rounds;
            }
        }
    }

    /// Expands the stored provenance of `k` at `(m, n)` into a tree.
    pub(crate) fn derivation(&self, m: usize, n: usize, k: usize) -> Option<DerivationNode> {
        if k == 0 {
            return Some(DerivationNode::complete(vec![m, n]));
        }
        let p = self.prov.get(self.idx(m, n))?.get(&k)?;
        let node = match p {
            Prov::Given(node) => (**node).clone(),
            &Prov::SumB(n1, x, y) => DerivationNode::node(
                Rule::DirectSumB,
                vec![m, n],
                k,
                vec![self.derivation(m, n1, x)?, self.derivation(m, n - n1, y)?],
            ),
            &Prov::SumA(m1, x, y) => DerivationNode::node(
                Rule::DirectSumA,
                vec![m, n],
                k,
                vec![self.derivation(m1, n, x)?, self.derivation(m - m1, n, y)?],
            ),
            &Prov::Tensor((m1, n1, x), (m2, n2, y)) => DerivationNode::node(
                Rule::Tensor,
                vec![m, n],
                k,
                vec![self.derivation(m1, n1, x)?, self.derivation(m2, n2, y)?],
            ),
        };
        Some(node)
    }
}

/// Factorizations `m = m1·m2`, `n = n1·n2` with every factor at least 3.
fn factor_pairs(m: usize, n: usize) -> Vec<(usize, usize, usize, usize)> {
    let divisors = |x: usize| (3..=x / 3).filter(move |d| x.is_multiple_of(*d) && x / d >= 3);
    divisors(m)
        .flat_map(|m1| divisors(n).map(move |n1| (m1, n1, m / m1, n / n1)))
        .collect()
}

/// Rewrites a stack of two side-by-side sums (or the transpose) with matching
/// block sizes as one four-block composition.
pub(crate) fn merge_four_square(node: DerivationNode) -> DerivationNode {
    let mut node = node;
    node.children = node.children.into_iter().map(merge_four_square).collect();
    let inner = match node.rule {
        Rule::DirectSumA => Rule::DirectSumB,
        Rule::DirectSumB => Rule::DirectSumA,
        _ => return node,
    };
    // the split coordinate of the inner sums is the other party
    let axis = if inner == Rule::DirectSumB { 1 } else { 0 };
    let [a, b] = match <[DerivationNode; 2]>::try_from(node.children) {
        Ok(pair) => pair,
        Err(children) => {
            node.children = children;
            return node;
        }
    };
    if a.rule == inner && b.rule == inner && a.children[0].dims[axis] == b.children[0].dims[axis] {
        let blocks = if inner == Rule::DirectSumB {
            // rows of blocks: [a0 a1] over [b0 b1]
            vec![
                a.children[0].clone(),
                a.children[1].clone(),
                b.children[0].clone(),
                b.children[1].clone(),
            ]
        } else {
            // columns of blocks: a = [a0 over a1], b = [b0 over b1]
            vec![
                a.children[0].clone(),
                b.children[0].clone(),
                a.children[1].clone(),
                b.children[1].clone(),
            ]
        };
        return DerivationNode::node(Rule::FourSquare, node.dims, node.missing, blocks);
    }
    node.children = vec![a, b];
    node
}
