//! Textual construction recipes such as `dsum_b(tiles3x3, complete(3x2))`.
//!
//! Grammar: `recipe := ident | ident '(' recipe (',' recipe)* ')'`, where a call
//! is one of `dsum_a`, `dsum_b`, `foursq`, `tensor`, `lift`, and the special form
//! `complete(MxN[xK...])` denotes a complete product basis.

use std::collections::BTreeMap;

use crate::catalog;
use crate::combinators::{
    direct_sum_a, direct_sum_b, four_square, lift, tensor, Construction, DerivationNode, Operand,
    Rule,
};
use crate::error::{Error, Result};
use crate::states::UpbCandidate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    Leaf(String),
    Complete(Vec<usize>),
    Call(String, Vec<Recipe>),
}

impl Recipe {
    pub fn parse(text: &str) -> Result<Recipe> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let r = p.recipe()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(r)
    }

    /// Converts a derivation tree back into a recipe. Leaves must name explicit states.
    pub fn from_derivation(node: &DerivationNode) -> Result<Recipe> {
        let kids = || {
            node.children
                .iter()
                .map(Recipe::from_derivation)
                .collect::<Result<Vec<_>>>()
        };
        let call = |name: &str| Ok(Recipe::Call(name.into(), kids()?));
        match node.rule {
            Rule::Base | Rule::Import => node
                .leaf
                .clone()
                .map(Recipe::Leaf)
                .ok_or_else(|| Error::MalformedDocument("leaf node without a name".into())),
            Rule::CompleteBasisPad => Ok(Recipe::Complete(node.dims.clone())),
            Rule::Existence => Err(Error::MalformedDocument(format!(
                "existence-only leaf {:?} has no explicit states",
                node.leaf.as_deref().unwrap_or("?")
            ))),
            Rule::DirectSumA => call("dsum_a"),
            Rule::DirectSumB => call("dsum_b"),
            Rule::FourSquare => call("foursq"),
            Rule::Tensor => call("tensor"),
            Rule::Lift => call("lift"),
        }
    }
}

impl std::fmt::Display for Recipe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Recipe::Leaf(n) => write!(f, "{n}"),
            Recipe::Complete(d) => {
                let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                write!(f, "complete({})", parts.join("x"))
            }
            Recipe::Call(name, args) => {
                let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "{name}({})", parts.join(", "))
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::RecipeSyntax(format!("{what} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn recipe(&mut self) -> Result<Recipe> {
        let name = self.ident()?;
        if !self.eat(b'(') {
            return Ok(Recipe::Leaf(name));
        }
        if name == "complete" {
            let dims_text = self.ident()?;
            if !self.eat(b')') {
                return Err(self.error("expected ')'"));
            }
            let dims = dims_text
                .split('x')
                .map(|d| d.parse::<usize>().ok().filter(|&d| d >= 1))
                .collect::<Option<Vec<_>>>()
                .filter(|d| d.len() >= 2)
                .ok_or_else(|| Error::RecipeSyntax(format!("bad complete-basis dims {dims_text:?}")))?;
            return Ok(Recipe::Complete(dims));
        }
        let mut args = vec![self.recipe()?];
        while self.eat(b',') {
            args.push(self.recipe()?);
        }
        if !self.eat(b')') {
            return Err(self.error("expected ',' or ')'"));
        }
        Ok(Recipe::Call(name, args))
    }
}

/// Resolves leaf names: catalog entries first, then user-supplied imports.
#[derive(Clone, Debug, Default)]
pub struct LeafTable {
    imports: BTreeMap<String, UpbCandidate>,
}

impl LeafTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, upb: UpbCandidate) {
        self.imports.insert(name.into(), upb);
    }

    pub fn contains(&self, name: &str) -> bool {
        catalog::leaf(name).is_some() || self.imports.contains_key(name)
    }

    fn resolve(&self, name: &str) -> Result<Construction> {
        if let Some(u) = catalog::leaf(name) {
            return Ok(Construction::base(u, Rule::Base));
        }
        if let Some(u) = self.imports.get(name) {
            let mut c = Construction::base(u.clone(), Rule::Import);
            c.derivation.leaf = Some(name.to_string());
            return Ok(c);
        }
        Err(Error::UnknownLeaf(name.to_string()))
    }
}

fn operand(r: &Recipe, leaves: &LeafTable) -> Result<Operand> {
    match r {
        Recipe::Complete(d) => Ok(Operand::Complete(d.clone())),
        _ => Ok(Operand::Upb(build(r, leaves)?)),
    }
}

/// Materializes a recipe. A bare `complete(..)` is not a UPB and is rejected.
pub fn build(r: &Recipe, leaves: &LeafTable) -> Result<Construction> {
    let arity = |args: &[Recipe], n: usize, name: &str| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::RecipeSyntax(format!(
                "{name} takes {n} arguments, got {}",
                args.len()
            )))
        }
    };
    match r {
        Recipe::Leaf(name) => leaves.resolve(name),
        Recipe::Complete(_) => Err(Error::AllComplete),
        Recipe::Call(name, args) => {
            let ops = || {
                args.iter()
                    .map(|a| operand(a, leaves))
                    .collect::<Result<Vec<_>>>()
            };
            match name.as_str() {
                "dsum_b" => {
                    arity(args, 2, name)?;
                    let o = ops()?;
                    direct_sum_b(&o[0], &o[1])
                }
                "dsum_a" => {
                    arity(args, 2, name)?;
                    let o = ops()?;
                    direct_sum_a(&o[0], &o[1])
                }
                "foursq" => {
                    arity(args, 4, name)?;
                    let o = ops()?;
                    four_square(&o[0], &o[1], &o[2], &o[3])
                }
                "tensor" => {
                    arity(args, 2, name)?;
                    tensor(&build(&args[0], leaves)?, &build(&args[1], leaves)?)
                }
                "lift" => lift(&ops()?),
                other => Err(Error::RecipeSyntax(format!("unknown combinator {other:?}"))),
            }
        }
    }
}
