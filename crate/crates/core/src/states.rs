//! Product states, multi-party systems and candidate UPB sets.
//!
//! The computational basis `|i_1 i_2 … i_N⟩` is ordered row-major with party 1
//! slowest, so for two parties the coefficient vector reshapes directly into
//! the `m × n` corresponding matrix (rows = system A, columns = system B).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{inner_product, rank, ExactMatrix, ExactVector, GaussianRational};

/// Local dimensions `d_1, …, d_N` of an `N`-party system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SystemDims(Vec<usize>);

impl SystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidDims(dims));
        }
        Ok(SystemDims(dims))
    }

    pub fn bipartite(m: usize, n: usize) -> Result<Self> {
        Self::new(vec![m, n])
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, party: usize) -> usize {
        self.0[party]
    }

    /// Total dimension `D = ∏ d_k`.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }
}

impl TryFrom<Vec<usize>> for SystemDims {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        SystemDims::new(v)
    }
}

impl From<SystemDims> for Vec<usize> {
    fn from(d: SystemDims) -> Vec<usize> {
        d.0
    }
}

impl std::fmt::Display for SystemDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// `|a⟩ ⊗ |b⟩ ⊗ …`, one nonzero exact factor per party.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductState {
    factors: Vec<ExactVector>,
}

impl ProductState {
    pub fn new(factors: Vec<ExactVector>) -> Result<Self> {
        if let Some(party) = factors.iter().position(ExactVector::is_zero) {
            return Err(Error::ZeroFactor { state: 0, party });
        }
        Ok(ProductState { factors })
    }

    /// Convenience constructor from integer factors.
    pub fn from_ints(factors: &[&[i64]]) -> Result<Self> {
        Self::new(factors.iter().map(|f| ExactVector::from_ints(f)).collect())
    }

    /// `|i_1⟩ ⊗ … ⊗ |i_N⟩`. Dimension-1 parties are allowed here (complete-basis blocks).
    pub fn basis(dims: &[usize], digits: &[usize]) -> Self {
        ProductState {
            factors: dims
                .iter()
                .zip(digits)
                .map(|(&d, &i)| ExactVector::basis(d, i))
                .collect(),
        }
    }

    pub fn factors(&self) -> &[ExactVector] {
        &self.factors
    }

    pub fn factor(&self, party: usize) -> &ExactVector {
        &self.factors[party]
    }

    pub fn parties(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(ExactVector::dim).collect()
    }

    pub(crate) fn from_factors_unchecked(factors: Vec<ExactVector>) -> Self {
        ProductState { factors }
    }
}

/// Coefficients of a (not necessarily product) state over the product basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullState {
    pub coefficients: ExactVector,
}

/// Product of local inner products, `⟨p|q⟩ = ∏_k ⟨p_k|q_k⟩`.
pub fn global_inner(p: &ProductState, q: &ProductState) -> Result<GaussianRational> {
    if p.dims() != q.dims() {
        return Err(Error::Incompatible(format!(
            "product states with dims {:?} and {:?}",
            p.dims(),
            q.dims()
        )));
    }
    let mut acc = GaussianRational::one();
    for (a, b) in p.factors.iter().zip(&q.factors) {
        let local = inner_product(a, b)?;
        if local.is_zero() {
            return Ok(local);
        }
        acc = &acc * &local;
    }
    Ok(acc)
}

/// Kronecker expansion into the product basis, party 1 slowest.
pub fn expand(p: &ProductState) -> FullState {
    let mut it = p.factors.iter();
    let first = it.next().cloned().unwrap_or_else(|| ExactVector::zeros(1));
    FullState {
        coefficients: it.fold(first, |acc, f| acc.kron(f)),
    }
}

/// The `m × n` grid of coefficients of `|ij⟩`.
pub fn corresponding_matrix(f: &FullState, dims: &SystemDims) -> Result<ExactMatrix> {
    if dims.parties() != 2 {
        return Err(Error::NotBipartite(dims.parties()));
    }
    if f.coefficients.dim() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: f.coefficients.dim(),
        });
    }
    ExactMatrix::from_data(dims.get(0), dims.get(1), f.coefficients.entries().to_vec())
}

/// Bipartite product test: rank of the corresponding matrix equals one.
pub fn is_product(f: &FullState, dims: &SystemDims) -> Result<bool> {
    let m = corresponding_matrix(f, dims)?;
    if f.coefficients.is_zero() {
        return Err(Error::ZeroState);
    }
    Ok(rank(&m) == 1)
}

/// Reshapes `f` into a matrix whose rows index the parties in `group` and whose
/// columns index the remaining parties (both in party order).
pub fn flatten(f: &FullState, dims: &[usize], group: &[usize]) -> Result<ExactMatrix> {
    let total: usize = dims.iter().product();
    if f.coefficients.dim() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: f.coefficients.dim(),
        });
    }
    if let Some(&bad) = group.iter().find(|&&p| p >= dims.len()) {
        return Err(Error::BadParty {
            party: bad,
            parties: dims.len(),
        });
    }
    let rest: Vec<usize> = (0..dims.len()).filter(|p| !group.contains(p)).collect();
    let rows: usize = group.iter().map(|&p| dims[p]).product();
    let cols: usize = rest.iter().map(|&p| dims[p]).product();
    let mut m = ExactMatrix::zeros(rows, cols);
    let mut digits = vec![0usize; dims.len()];
    for (idx, z) in f.coefficients.entries().iter().enumerate() {
        let mut rem = idx;
        for p in (0..dims.len()).rev() {
            digits[p] = rem % dims[p];
            rem /= dims[p];
        }
        let r = group.iter().fold(0, |acc, &p| acc * dims[p] + digits[p]);
        let c = rest.iter().fold(0, |acc, &p| acc * dims[p] + digits[p]);
        m.set(r, c, z.clone());
    }
    Ok(m)
}

/// Multi-party product test: every single-party-versus-rest flattening has rank one.
pub fn is_fully_product(f: &FullState, dims: &SystemDims) -> Result<bool> {
    if f.coefficients.is_zero() {
        return Err(Error::ZeroState);
    }
    for p in 0..dims.parties() {
        if rank(&flatten(f, dims.as_slice(), &[p])?) != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An orthogonal set of product states with fewer members than `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpbCandidate {
    dims: SystemDims,
    states: Vec<ProductState>,
    pub label: String,
}

impl UpbCandidate {
    /// Validates dims, nonzero factors, state count and pairwise orthogonality.
    pub fn new(
        dims: SystemDims,
        states: Vec<ProductState>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let max = dims.total() - 1;
        if states.is_empty() || states.len() > max {
            return Err(Error::BadStateCount {
                count: states.len(),
                max,
            });
        }
        for (i, s) in states.iter().enumerate() {
            if s.dims() != dims.as_slice() {
                return Err(Error::Incompatible(format!(
                    "state {i} has dims {:?}, system is {dims}",
                    s.dims()
                )));
            }
            if let Some(party) = s.factors.iter().position(ExactVector::is_zero) {
                return Err(Error::ZeroFactor { state: i, party });
            }
        }
        for i in 0..states.len() {
            for j in i + 1..states.len() {
                if !global_inner(&states[i], &states[j])?.is_zero() {
                    return Err(Error::NotOrthogonal(i, j));
                }
            }
        }
        Ok(UpbCandidate {
            dims,
            states,
            label: label.into(),
        })
    }

    pub fn dims(&self) -> &SystemDims {
        &self.dims
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `D − |states|`.
    pub fn missing_number(&self) -> usize {
        self.dims.total() - self.states.len()
    }

    /// Copy without state `index` (no-op validation: subsets of orthogonal sets stay orthogonal).
    pub fn without(&self, index: usize) -> Result<Self> {
        let mut states = self.states.clone();
        states.remove(index);
        UpbCandidate::new(
            self.dims.clone(),
            states,
            format!("{} minus #{index}", self.label),
        )
    }
}
