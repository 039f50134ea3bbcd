//! Building new UPBs from old ones: direct sums along either party, the
//! four-block composition, tensor products and the extra-party lift.
//!
//! Every combinator returns a [`Construction`]: the materialized candidate plus
//! the [`DerivationNode`] that records how it was obtained and its missing number.

use serde::{Deserialize, Serialize};

use crate::catalog::{complete_product_basis, embed_states};
use crate::error::{Error, Result};
use crate::exact::ExactVector;
use crate::states::{ProductState, SystemDims, UpbCandidate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    Base,
    Import,
    DirectSumB,
    DirectSumA,
    FourSquare,
    Tensor,
    Lift,
    CompleteBasisPad,
    /// A UPB of this size is known to exist but no states are attached.
    Existence,
}

/// One step of a derivation tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivationNode {
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<String>,
    pub dims: Vec<usize>,
    pub missing: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DerivationNode>,
}

impl DerivationNode {
    pub fn leaf(rule: Rule, name: impl Into<String>, dims: Vec<usize>, missing: usize) -> Self {
        DerivationNode {
            rule,
            leaf: Some(name.into()),
            dims,
            missing,
            children: Vec::new(),
        }
    }

    pub fn complete(dims: Vec<usize>) -> Self {
        DerivationNode {
            rule: Rule::CompleteBasisPad,
            leaf: None,
            dims,
            missing: 0,
            children: Vec::new(),
        }
    }

    pub fn node(
        rule: Rule,
        dims: Vec<usize>,
        missing: usize,
        children: Vec<DerivationNode>,
    ) -> Self {
        DerivationNode {
            rule,
            leaf: None,
            dims,
            missing,
            children,
        }
    }

    /// Checks the missing-number arithmetic of this node and all descendants.
    pub fn check_arithmetic(&self) -> bool {
        let kids_ok = self.children.iter().all(DerivationNode::check_arithmetic);
        let own = match self.rule {
            Rule::Base | Rule::Import | Rule::Existence => self.children.is_empty(),
            Rule::CompleteBasisPad => self.missing == 0 && self.children.is_empty(),
            Rule::DirectSumA | Rule::DirectSumB | Rule::FourSquare | Rule::Lift => {
                !self.children.is_empty()
                    && self.missing == self.children.iter().map(|c| c.missing).sum::<usize>()
            }
            Rule::Tensor => {
                let total: usize = self.dims.iter().product();
                self.children.len() == 2
                    && self.missing
                        == total
                            - self
                                .children
                                .iter()
                                .map(|c| c.dims.iter().product::<usize>() - c.missing)
                                .product::<usize>()
            }
        };
        kids_ok && own
    }

    /// True when every leaf names explicit states (catalog or import).
    pub fn is_buildable(&self, resolve: &dyn Fn(&str) -> bool) -> bool {
        match self.rule {
            Rule::CompleteBasisPad => true,
            Rule::Existence => false,
            Rule::Base | Rule::Import => self.leaf.as_deref().is_some_and(resolve),
            _ => self.children.iter().all(|c| c.is_buildable(resolve)),
        }
    }
}

/// A materialized UPB and its derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub upb: UpbCandidate,
    pub derivation: DerivationNode,
}

impl Construction {
    /// Wraps a catalog or imported base UPB.
    pub fn base(upb: UpbCandidate, rule: Rule) -> Self {
        let derivation = DerivationNode::leaf(
            rule,
            upb.label.clone(),
            upb.dims().as_slice().to_vec(),
            upb.missing_number(),
        );
        Construction { upb, derivation }
    }

    pub fn missing(&self) -> usize {
        self.upb.missing_number()
    }
}

/// Combinator operand: a genuine UPB or a complete product basis standing in with missing number 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Upb(Construction),
    /// Complete basis of the given local dims; a dimension may be 1.
    Complete(Vec<usize>),
}

impl Operand {
    pub fn dims(&self) -> Vec<usize> {
        match self {
            Operand::Upb(c) => c.upb.dims().as_slice().to_vec(),
            Operand::Complete(d) => d.clone(),
        }
    }

    pub fn is_genuine(&self) -> bool {
        matches!(self, Operand::Upb(_))
    }

    pub fn missing(&self) -> usize {
        match self {
            Operand::Upb(c) => c.missing(),
            Operand::Complete(_) => 0,
        }
    }

    fn states(&self) -> Vec<ProductState> {
        match self {
            Operand::Upb(c) => c.upb.states().to_vec(),
            Operand::Complete(d) => complete_product_basis(d),
        }
    }

    fn derivation(&self) -> DerivationNode {
        match self {
            Operand::Upb(c) => c.derivation.clone(),
            Operand::Complete(d) => DerivationNode::complete(d.clone()),
        }
    }

    fn label(&self) -> String {
        match self {
            Operand::Upb(c) => c.upb.label.clone(),
            Operand::Complete(d) => {
                let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                format!("complete({})", parts.join("x"))
            }
        }
    }
}

impl From<Construction> for Operand {
    fn from(c: Construction) -> Self {
        Operand::Upb(c)
    }
}

fn finish(
    dims: Vec<usize>,
    states: Vec<ProductState>,
    label: String,
    derivation: DerivationNode,
) -> Result<Construction> {
    let upb = UpbCandidate::new(SystemDims::new(dims)?, states, label)?;
    debug_assert_eq!(upb.missing_number(), derivation.missing);
    Ok(Construction { upb, derivation })
}

/// Direct sum along `party` of a bipartite pair: `left` on coordinates `[0, d)`,
/// `right` on `[d, d + d')`. The other party's dimension must agree.
fn direct_sum(left: &Operand, right: &Operand, party: usize) -> Result<Operand> {
    let (ld, rd) = (left.dims(), right.dims());
    let other = 1 - party;
    if ld.len() != 2 || rd.len() != 2 {
        return Err(Error::NotBipartite(if ld.len() != 2 {
            ld.len()
        } else {
            rd.len()
        }));
    }
    if ld[other] != rd[other] {
        return Err(Error::Incompatible(format!(
            "direct sum needs equal {} dimensions, got {} and {}",
            if other == 0 { "A" } else { "B" },
            ld[other],
            rd[other]
        )));
    }
    let mut dims = ld.clone();
    dims[party] = ld[party] + rd[party];
    if !left.is_genuine() && !right.is_genuine() {
        return Ok(Operand::Complete(dims));
    }
    let mut states = embed_states(&left.states(), party, 0, ld[party], dims[party])?;
    states.extend(embed_states(
        &right.states(),
        party,
        ld[party],
        rd[party],
        dims[party],
    )?);
    let rule = if party == 1 {
        Rule::DirectSumB
    } else {
        Rule::DirectSumA
    };
    let missing = left.missing() + right.missing();
    let derivation = DerivationNode::node(
        rule,
        dims.clone(),
        missing,
        vec![left.derivation(), right.derivation()],
    );
    let op = if party == 1 { "dsum_b" } else { "dsum_a" };
    let label = format!("{op}({}, {})", left.label(), right.label());
    Ok(Operand::Upb(finish(dims, states, label, derivation)?))
}

fn genuine(op: Operand) -> Result<Construction> {
    match op {
        Operand::Upb(c) => Ok(c),
        Operand::Complete(_) => Err(Error::AllComplete),
    }
}

/// `C^m ⊗ C^{n1}` and `C^m ⊗ C^{n2}` side by side in `C^m ⊗ C^{n1+n2}`; missing numbers add.
pub fn direct_sum_b(left: &Operand, right: &Operand) -> Result<Construction> {
    genuine(direct_sum(left, right, 1)?)
}

/// `C^{m1} ⊗ C^n` stacked over `C^{m2} ⊗ C^n` in `C^{m1+m2} ⊗ C^n`; missing numbers add.
pub fn direct_sum_a(top: &Operand, bottom: &Operand) -> Result<Construction> {
    genuine(direct_sum(top, bottom, 0)?)
}

/// Four blocks `[[s11, s12], [s21, s22]]`, built as the stack of two row direct sums.
pub fn four_square(
    s11: &Operand,
    s12: &Operand,
    s21: &Operand,
    s22: &Operand,
) -> Result<Construction> {
    let top = direct_sum(s11, s12, 1)?;
    let bottom = direct_sum(s21, s22, 1)?;
    let mut c = genuine(direct_sum(&top, &bottom, 0)?)?;
    c.derivation = DerivationNode::node(
        Rule::FourSquare,
        c.derivation.dims.clone(),
        c.derivation.missing,
        [s11, s12, s21, s22]
            .iter()
            .map(|o| o.derivation())
            .collect(),
    );
    c.upb.label = format!(
        "foursq({}, {}, {}, {})",
        s11.label(),
        s12.label(),
        s21.label(),
        s22.label()
    );
    Ok(c)
}

/// `{ |a_i⟩⊗|a'_j⟩ , |b_i⟩⊗|b'_j⟩ }` in `C^{m1 m2} ⊗ C^{n1 n2}`, ordered by `(i, j)`.
pub fn tensor(s1: &Construction, s2: &Construction) -> Result<Construction> {
    let (d1, d2) = (s1.upb.dims(), s2.upb.dims());
    if d1.parties() != 2 || d2.parties() != 2 {
        return Err(Error::NotBipartite(d1.parties().max(d2.parties())));
    }
    let dims = vec![d1.get(0) * d2.get(0), d1.get(1) * d2.get(1)];
    let mut states = Vec::with_capacity(s1.upb.len() * s2.upb.len());
    for p in s1.upb.states() {
        for q in s2.upb.states() {
            states.push(ProductState::from_factors_unchecked(vec![
                p.factor(0).kron(q.factor(0)),
                p.factor(1).kron(q.factor(1)),
            ]));
        }
    }
    let total: usize = dims.iter().product();
    let missing = total - states.len();
    let derivation = DerivationNode::node(
        Rule::Tensor,
        dims.clone(),
        missing,
        vec![s1.derivation.clone(), s2.derivation.clone()],
    );
    let label = format!("tensor({}, {})", s1.upb.label, s2.upb.label);
    finish(dims, states, label, derivation)
}

/// Appends a party of dimension `K = parts.len()`: state `j` of part `i` gains factor `|i⟩`.
pub fn lift(parts: &[Operand]) -> Result<Construction> {
    let k = parts.len();
    if k < 2 {
        return Err(Error::Hypothesis(format!(
            "lift needs at least 2 parts, got {k}"
        )));
    }
    if !parts.iter().any(Operand::is_genuine) {
        return Err(Error::AllComplete);
    }
    let base = parts[0].dims();
    if let Some(p) = parts.iter().find(|p| p.dims() != base) {
        return Err(Error::Incompatible(format!(
            "lift parts must share dims, got {:?} and {:?}",
            base,
            p.dims()
        )));
    }
    let mut dims = base.clone();
    dims.push(k);
    let mut states = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        for s in part.states() {
            let mut factors = s.factors().to_vec();
            factors.push(ExactVector::basis(k, i));
            states.push(ProductState::from_factors_unchecked(factors));
        }
    }
    let missing = parts.iter().map(Operand::missing).sum();
    let derivation = DerivationNode::node(
        Rule::Lift,
        dims.clone(),
        missing,
        parts.iter().map(Operand::derivation).collect(),
    );
    let labels: Vec<String> = parts.iter().map(Operand::label).collect();
    finish(
        dims,
        states,
        format!("lift({})", labels.join(", ")),
        derivation,
    )
}
