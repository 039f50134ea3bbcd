use thiserror::Error;

/// Errors raised across the crate. Each variant maps to a stable [`Error::code`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid system dimensions {0:?}: need at least two parties, each of dimension >= 2")]
    InvalidDims(Vec<usize>),
    #[error("operation requires a bipartite system, got {0} parties")]
    NotBipartite(usize),
    #[error("zero state has no product structure")]
    ZeroState,
    #[error("state {state} has a zero factor on party {party}")]
    ZeroFactor { state: usize, party: usize },
    #[error("states {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("a candidate needs between 1 and D-1 = {max} states, got {count}")]
    BadStateCount { count: usize, max: usize },
    #[error("block out of range: offset {offset} + {len} > {new_dim}")]
    BlockOutOfRange {
        offset: usize,
        len: usize,
        new_dim: usize,
    },
    #[error("party index {party} out of range for {parties} parties")]
    BadParty { party: usize, parties: usize },
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("every operand is a complete basis; the result would not be a UPB")]
    AllComplete,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unknown recipe leaf {0:?}")]
    UnknownLeaf(String),
    #[error("recipe syntax error: {0}")]
    RecipeSyntax(String),
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("invalid party subset {0:?}")]
    BadSubset(Vec<usize>),
    #[error("candidate is not a certified UPB")]
    NotCertified,
}

impl Error {
    /// Stable machine-readable code for structured error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedRational(_) => "malformed_rational",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidDims(_) => "invalid_dims",
            Error::NotBipartite(_) => "not_bipartite",
            Error::ZeroState => "zero_state",
            Error::ZeroFactor { .. } => "zero_factor",
            Error::NotOrthogonal(..) => "not_orthogonal",
            Error::BadStateCount { .. } => "bad_state_count",
            Error::BlockOutOfRange { .. } => "block_out_of_range",
            Error::BadParty { .. } => "bad_party",
            Error::Incompatible(_) => "incompatible_operands",
            Error::AllComplete => "all_complete",
            Error::Hypothesis(_) => "hypothesis_violated",
            Error::UnknownLeaf(_) => "unknown_leaf",
            Error::RecipeSyntax(_) => "recipe_syntax",
            Error::MalformedDocument(_) => "malformed_document",
            Error::BadSubset(_) => "bad_subset",
            Error::NotCertified => "not_certified",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
