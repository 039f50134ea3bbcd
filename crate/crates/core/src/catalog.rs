//! Explicit base UPBs, block embeddings, the JSON interchange format and
//! existence-only size facts.

use serde::{Deserialize, Serialize};

use crate::combinators::DerivationNode;
use crate::error::{Error, Result};
use crate::exact::{ExactVector, GaussianRational, Rational};
use crate::states::{ProductState, SystemDims, UpbCandidate};

pub const TILES: &str = "tiles3x3";
pub const TILES_SHIFTED: &str = "tiles3x3_shifted";

fn tile_state(a: &[i64], b: &[i64]) -> ProductState {
    ProductState::from_ints(&[a, b]).expect("catalog factors are nonzero")
}

/// The five-state Tiles UPB of `C^3 ⊗ C^3`, unnormalized:
/// `|0⟩|0−1⟩, |0−1⟩|2⟩, |1−2⟩|0⟩, |2⟩|1−2⟩, |0+1+2⟩|0+1+2⟩`.
pub fn tiles_3x3() -> UpbCandidate {
    let states = vec![
        tile_state(&[1, 0, 0], &[1, -1, 0]),
        tile_state(&[1, -1, 0], &[0, 0, 1]),
        tile_state(&[0, 1, -1], &[1, 0, 0]),
        tile_state(&[0, 0, 1], &[0, 1, -1]),
        tile_state(&[1, 1, 1], &[1, 1, 1]),
    ];
    UpbCandidate::new(SystemDims::bipartite(3, 3).unwrap(), states, TILES)
        .expect("tiles are orthogonal")
}

/// The Tiles copy living on B-coordinates 3..5 of `C^3 ⊗ C^6`, in its original listing order:
/// `|0⟩|3−4⟩, |0−1⟩|5⟩, |2⟩|4−5⟩, |1−2⟩|3⟩, |0+1+2⟩|3+4+5⟩`.
pub fn tiles_3x3_shifted() -> UpbCandidate {
    let states = vec![
        tile_state(&[1, 0, 0], &[0, 0, 0, 1, -1, 0]),
        tile_state(&[1, -1, 0], &[0, 0, 0, 0, 0, 1]),
        tile_state(&[0, 0, 1], &[0, 0, 0, 0, 1, -1]),
        tile_state(&[0, 1, -1], &[0, 0, 0, 1, 0, 0]),
        tile_state(&[1, 1, 1], &[0, 0, 0, 1, 1, 1]),
    ];
    UpbCandidate::new(SystemDims::bipartite(3, 6).unwrap(), states, TILES_SHIFTED)
        .expect("shifted tiles are orthogonal")
}

/// Pads `party`'s factors with zeros so they live on `[offset, offset + d_party)` of a
/// `new_dim`-dimensional space.
pub fn embed(
    u: &UpbCandidate,
    party: usize,
    offset: usize,
    new_dim: usize,
) -> Result<UpbCandidate> {
    let dims = u.dims().as_slice();
    if party >= dims.len() {
        return Err(Error::BadParty {
            party,
            parties: dims.len(),
        });
    }
    let states = embed_states(u.states(), party, offset, dims[party], new_dim)?;
    let mut new_dims = dims.to_vec();
    new_dims[party] = new_dim;
    UpbCandidate::new(SystemDims::new(new_dims)?, states, u.label.clone())
}

pub(crate) fn embed_states(
    states: &[ProductState],
    party: usize,
    offset: usize,
    len: usize,
    new_dim: usize,
) -> Result<Vec<ProductState>> {
    if offset + len > new_dim {
        return Err(Error::BlockOutOfRange {
            offset,
            len,
            new_dim,
        });
    }
    Ok(states
        .iter()
        .map(|s| {
            let mut factors = s.factors().to_vec();
            let mut padded = vec![GaussianRational::zero(); new_dim];
            for (i, z) in factors[party].entries().iter().enumerate() {
                padded[offset + i] = z.clone();
            }
            factors[party] = ExactVector::new(padded);
            ProductState::from_factors_unchecked(factors)
        })
        .collect())
}

/// Inverse of [`embed`]: keeps coordinates `[offset, offset + len)` of `party`.
/// Fails if any factor has support outside the block.
pub fn restrict(u: &UpbCandidate, party: usize, offset: usize, len: usize) -> Result<UpbCandidate> {
    let dims = u.dims().as_slice();
    if party >= dims.len() {
        return Err(Error::BadParty {
            party,
            parties: dims.len(),
        });
    }
    if offset + len > dims[party] {
        return Err(Error::BlockOutOfRange {
            offset,
            len,
            new_dim: dims[party],
        });
    }
    let mut states = Vec::with_capacity(u.len());
    for s in u.states() {
        let f = s.factor(party).entries();
        let outside = f
            .iter()
            .enumerate()
            .any(|(i, z)| (i < offset || i >= offset + len) && !z.is_zero());
        if outside {
            return Err(Error::Incompatible(format!(
                "support of party {party} leaves block [{offset}, {})",
                offset + len
            )));
        }
        let mut factors = s.factors().to_vec();
        factors[party] = ExactVector::new(f[offset..offset + len].to_vec());
        states.push(ProductState::from_factors_unchecked(factors));
    }
    let mut new_dims = dims.to_vec();
    new_dims[party] = len;
    UpbCandidate::new(SystemDims::new(new_dims)?, states, u.label.clone())
}

/// All `∏ d_k` standard product basis states, lexicographic with party 1 slowest.
/// Accepts dimension-1 parties, which occur for thin complete-basis blocks.
pub fn complete_product_basis(dims: &[usize]) -> Vec<ProductState> {
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; dims.len()];
    for idx in 0..total {
        let mut rem = idx;
        for p in (0..dims.len()).rev() {
            digits[p] = rem % dims[p];
            rem /= dims[p];
        }
        out.push(ProductState::basis(dims, &digits));
    }
    out
}

/// Named explicit UPBs usable as recipe leaves. `tiles3x3_shifted` resolves to its
/// restriction onto the B-block it occupies, so a direct sum places it back there.
pub fn leaf(name: &str) -> Option<UpbCandidate> {
    match name {
        TILES => Some(tiles_3x3()),
        TILES_SHIFTED => {
            let mut u =
                restrict(&tiles_3x3_shifted(), 1, 3, 3).expect("shifted tiles live on 3..5");
            u.label = TILES_SHIFTED.into();
            Some(u)
        }
        _ => None,
    }
}

pub fn leaf_names() -> &'static [&'static str] {
    &[TILES, TILES_SHIFTED]
}

/// Where a size fact comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactSource {
    /// Minimal UPB size `f(d1, d2)`.
    MinimalSize,
    /// The GenTiles family of size `mn − 2m + 1`.
    GenTilesFamily,
    /// Seed values for the (3,3) and (3,4) cells.
    SmallSeed,
    Imported,
}

/// A UPB of `size` states is known to exist in `dims`; no explicit states attached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceFact {
    pub dims: SystemDims,
    pub size: usize,
    pub source: FactSource,
}

impl ExistenceFact {
    pub fn missing(&self) -> usize {
        self.dims.total() - self.size
    }
}

/// Smallest UPB size in `C^d1 ⊗ C^d2`, both at least 3.
pub fn min_upb_size(d1: usize, d2: usize) -> Result<usize> {
    if d1 < 3 || d2 < 3 {
        return Err(Error::Hypothesis(format!(
            "minimal size needs d1, d2 >= 3, got ({d1}, {d2})"
        )));
    }
    Ok(if d1 % 2 == 1 || d2 % 2 == 1 {
        d1 + d2 - 1
    } else {
        d1 + d2
    })
}

/// Missing number `2m − 1` of the GenTiles family in `C^m ⊗ C^n`, `m ≥ 3`, `n > 3`, `n ≥ m`.
pub fn gentiles_missing(m: usize, n: usize) -> Result<usize> {
    if m < 3 || n <= 3 || n < m {
        return Err(Error::Hypothesis(format!(
            "GenTiles needs m >= 3, n > 3, n >= m, got ({m}, {n})"
        )));
    }
    Ok(2 * m - 1)
}

/// Missing numbers of the size-6..8 UPBs of `C^3 ⊗ C^4`.
pub const SEED_3X4: [usize; 3] = [4, 5, 6];

/// Existence facts for every `3 ≤ d1 ≤ d2` with `d1 ≤ max_m`, `d2 ≤ max_n`.
pub fn existence_facts(max_m: usize, max_n: usize) -> Vec<ExistenceFact> {
    let mut out = Vec::new();
    for d1 in 3..=max_m {
        for d2 in d1.max(3)..=max_n {
            let dims = SystemDims::bipartite(d1, d2).unwrap();
            out.push(ExistenceFact {
                dims: dims.clone(),
                size: min_upb_size(d1, d2).unwrap(),
                source: FactSource::MinimalSize,
            });
            if let Ok(k) = gentiles_missing(d1, d2) {
                out.push(ExistenceFact {
                    dims: dims.clone(),
                    size: d1 * d2 - k,
                    source: FactSource::GenTilesFamily,
                });
            }
            let seeds: &[usize] = match (d1, d2) {
                (3, 3) => &[4],
                (3, 4) => &SEED_3X4,
                _ => &[],
            };
            for &k in seeds {
                out.push(ExistenceFact {
                    dims: dims.clone(),
                    size: d1 * d2 - k,
                    source: FactSource::SmallSeed,
                });
            }
        }
    }
    out
}

/// On-disk UPB document: `{ "dims", "label", "states" }` plus optional provenance.
///
/// Each state is a list of per-party coefficient arrays; each coefficient is a
/// `[re, im]` pair of `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpbDocument {
    pub dims: Vec<usize>,
    pub label: String,
    pub states: Vec<Vec<Vec<(String, String)>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<DerivationNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl UpbDocument {
    pub fn from_candidate(u: &UpbCandidate) -> Self {
        let states = u
            .states()
            .iter()
            .map(|s| {
                s.factors()
                    .iter()
                    .map(|f| {
                        f.entries()
                            .iter()
                            .map(|z| (z.re.to_string(), z.im.to_string()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        UpbDocument {
            dims: u.dims().as_slice().to_vec(),
            label: u.label.clone(),
            states,
            derivation: None,
            source: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Parses coefficients and validates dims, nonzero factors and orthogonality.
    pub fn to_candidate(&self) -> Result<UpbCandidate> {
        let dims = SystemDims::new(self.dims.clone())?;
        let mut states = Vec::with_capacity(self.states.len());
        for (i, s) in self.states.iter().enumerate() {
            if s.len() != dims.parties() {
                return Err(Error::MalformedDocument(format!(
                    "state {i} has {} factors for {} parties",
                    s.len(),
                    dims.parties()
                )));
            }
            let mut factors = Vec::with_capacity(s.len());
            for (p, f) in s.iter().enumerate() {
                if f.len() != dims.get(p) {
                    return Err(Error::DimensionMismatch {
                        expected: dims.get(p),
                        found: f.len(),
                    });
                }
                let entries = f
                    .iter()
                    .map(|(re, im)| {
                        Ok(GaussianRational::new(
                            re.parse::<Rational>()?,
                            im.parse::<Rational>()?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                factors.push(ExactVector::new(entries));
            }
            states.push(ProductState::from_factors_unchecked(factors));
        }
        UpbCandidate::new(dims, states, self.label.clone())
    }
}

/// Parses and validates a UPB document.
pub fn import_upb(text: &str) -> Result<UpbCandidate> {
    UpbDocument::from_json(text)?.to_candidate()
}

pub fn export_upb(u: &UpbCandidate) -> String {
    UpbDocument::from_candidate(u).to_json()
}
