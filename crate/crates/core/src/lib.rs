//! Construction and exact certification of unextendible product bases (UPBs).
//!
//! * [`exact`]: Gaussian-rational arithmetic, rank, null spaces.
//! * [`states`]: product states and candidate sets.
//! * [`catalog`]: Tiles, embeddings, JSON documents, existence facts.
//! * [`combinators`] and [`recipe`]: direct sums, four-square, tensor, lift.
//! * [`verifier`]: exact unextendibility search and a numeric seesaw cross-check.
//! * [`planner`]: reachable missing numbers per dimension pair.
//! * [`bes`]: bound entangled states from UPB complements.

pub mod bes;
pub mod catalog;
pub mod combinators;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod par;
pub mod planner;
pub mod recipe;
pub mod states;
pub mod verifier;

pub use error::{Error, Result};
