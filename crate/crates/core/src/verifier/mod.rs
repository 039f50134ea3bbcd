//! Unextendibility certificates.
//!
//! [`verify_exact`] is authoritative: it decides whether any product state is
//! orthogonal to every member, and returns an exact witness when one exists.
//! [`seesaw`] is a floating-point cross-check usable on instances too large for
//! the exhaustive search.

mod oracle;
mod search;
mod seesaw;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use oracle::brute_force_extendible;
pub use seesaw::{rationalize_witness, seesaw, SeesawOptions, SeesawResult, OVERLAP_THRESHOLD};

use crate::exact::{null_space_basis, ExactMatrix, ExactVector};
use crate::par::Execution;
use crate::states::{global_inner, ProductState, UpbCandidate};
use search::{Outcome, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "UPB")]
    Upb,
    Extendible,
    /// Search stopped early (timeout) or only numeric evidence is available.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeesawReport {
    pub seed: u64,
    pub restarts: usize,
    pub best: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationCertificate {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ProductState>,
    /// Party index each input state is made orthogonal on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<usize>>,
    pub nodes: u64,
    pub millis: u64,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seesaw: Option<SeesawReport>,
}

impl VerificationCertificate {
    /// Same verdict, witness and assignment; timing and node counts ignored.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.verdict == other.verdict
            && self.witness == other.witness
            && self.assignment == other.assignment
    }
}

#[derive(Clone, Debug)]
pub struct ExactOptions {
    /// Cut branches where some party's assigned factors already span the whole space.
    pub prune: bool,
    pub timeout: Option<Duration>,
    pub execution: Execution,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            prune: true,
            timeout: None,
            execution: Execution::Sequential,
        }
    }
}

/// True iff every pairwise global inner product is exactly zero.
pub fn check_orthonormality(u: &UpbCandidate) -> bool {
    orthogonal_states(u.states())
}

pub(crate) fn orthogonal_states(states: &[ProductState]) -> bool {
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            match global_inner(&states[i], &states[j]) {
                Ok(z) if z.is_zero() => {}
                _ => return false,
            }
        }
    }
    true
}

pub fn verify_exact(u: &UpbCandidate) -> VerificationCertificate {
    verify_exact_with(u, &ExactOptions::default())
}

pub fn verify_exact_with(u: &UpbCandidate, opts: &ExactOptions) -> VerificationCertificate {
    let start = Instant::now();
    let problem = Problem::new(u);
    let deadline = opts.timeout.map(|t| start + t);
    let (outcome, stats) = search::search(&problem, opts.prune, deadline, opts.execution);
    let mut mode = if opts.execution.is_parallel() {
        format!("exact-parallel({})", worker_count())
    } else {
        "exact".to_string()
    };
    if !opts.prune {
        mode.push_str("-unpruned");
    }
    let (verdict, witness, assignment) = match outcome {
        Outcome::Found(a) => (
            Verdict::Extendible,
            Some(witness_from_assignment(u, &a)),
            Some(a),
        ),
        Outcome::Exhausted => (Verdict::Upb, None, None),
        Outcome::Aborted => (Verdict::Inconclusive, None, None),
    };
    VerificationCertificate {
        verdict,
        witness,
        assignment,
        nodes: stats.nodes,
        millis: start.elapsed().as_millis() as u64,
        mode,
        seesaw: None,
    }
}

fn worker_count() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Per party, any vector orthogonal to the factors of the states assigned to it.
pub fn witness_from_assignment(u: &UpbCandidate, assignment: &[usize]) -> ProductState {
    let dims = u.dims().as_slice();
    let factors = (0..dims.len())
        .map(|p| {
            let rows: Vec<ExactVector> = assignment
                .iter()
                .zip(u.states())
                .filter(|(&q, _)| q == p)
                .map(|(_, s)| s.factor(p).clone())
                .collect();
            let m = ExactMatrix::from_rows(&rows, dims[p]).expect("factor dims match system");
            null_space_basis(&m)
                .into_iter()
                .next()
                .expect("assigned rank below local dimension")
        })
        .collect();
    ProductState::from_factors_unchecked(factors)
}

/// Checks that `w` is a nonzero product state orthogonal to every member of `u`.
pub fn is_valid_witness(u: &UpbCandidate, w: &ProductState) -> bool {
    w.dims() == u.dims().as_slice()
        && w.factors().iter().all(|f| !f.is_zero())
        && u.states()
            .iter()
            .all(|s| global_inner(w, s).is_ok_and(|z| z.is_zero()))
}

/// Runs the seesaw and converts a high-overlap optimum into a certificate:
/// Extendible if the optimum rounds to an exact witness, otherwise Inconclusive.
pub fn verify_seesaw(u: &UpbCandidate, opts: &SeesawOptions) -> VerificationCertificate {
    let start = Instant::now();
    let res = seesaw(u, opts);
    let report = SeesawReport {
        seed: opts.seed,
        restarts: opts.restarts,
        best: res.best,
        threshold: OVERLAP_THRESHOLD,
    };
    let witness = if res.best >= OVERLAP_THRESHOLD {
        rationalize_witness(u, &res.factors)
    } else {
        None
    };
    VerificationCertificate {
        verdict: if witness.is_some() {
            Verdict::Extendible
        } else {
            Verdict::Inconclusive
        },
        witness,
        assignment: None,
        nodes: res.sweeps,
        millis: start.elapsed().as_millis() as u64,
        mode: "seesaw".into(),
        seesaw: Some(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::tiles_3x3;
    use crate::combinators::{direct_sum_b, Construction, Operand, Rule};
    use crate::states::{expand, flatten, SystemDims};

    fn pair_00_11() -> UpbCandidate {
        UpbCandidate::new(
            SystemDims::bipartite(2, 2).unwrap(),
            vec![
                ProductState::from_ints(&[&[1, 0], &[1, 0]]).unwrap(),
                ProductState::from_ints(&[&[0, 1], &[0, 1]]).unwrap(),
            ],
            "00,11",
        )
        .unwrap()
    }

    #[test]
    fn orthonormality_checks() {
        let t = tiles_3x3();
        assert!(check_orthonormality(&t));
        let mut dup = t.states().to_vec();
        dup.push(dup[0].clone());
        assert!(!orthogonal_states(&dup));
        let basis = crate::catalog::complete_product_basis(&[3, 3]);
        assert!(orthogonal_states(&basis[..7]));
    }

    #[test]
    fn tiles_is_upb() {
        let c = verify_exact(&tiles_3x3());
        assert_eq!(c.verdict, Verdict::Upb);
        assert!(c.witness.is_none());
    }

    #[test]
    fn tiles_without_stopper_is_extendible() {
        let u = tiles_3x3().without(4).unwrap();
        let c = verify_exact(&u);
        assert_eq!(c.verdict, Verdict::Extendible);
        let w = c.witness.unwrap();
        assert!(is_valid_witness(&u, &w));
        let f = expand(&w);
        assert_eq!(crate::exact::rank(&flatten(&f, &[3, 3], &[0]).unwrap()), 1);
    }

    #[test]
    fn pair_witness_is_one_zero() {
        let c = verify_exact(&pair_00_11());
        assert_eq!(c.verdict, Verdict::Extendible);
        assert_eq!(c.assignment, Some(vec![0, 1]));
        assert_eq!(
            c.witness,
            Some(ProductState::from_ints(&[&[0, 1], &[1, 0]]).unwrap())
        );
    }

    #[test]
    fn example_union_is_upb() {
        let t = Operand::Upb(Construction::base(tiles_3x3(), Rule::Base));
        let u = direct_sum_b(&t, &t).unwrap().upb;
        assert_eq!(verify_exact(&u).verdict, Verdict::Upb);
        let par = verify_exact_with(
            &u,
            &ExactOptions {
                execution: Execution::Parallel,
                ..Default::default()
            },
        );
        assert_eq!(par.verdict, Verdict::Upb);
    }

    #[test]
    fn zero_timeout_is_inconclusive_on_nontrivial_search() {
        let t = Operand::Upb(Construction::base(tiles_3x3(), Rule::Base));
        let u = direct_sum_b(&t, &t).unwrap().upb;
        let c = verify_exact_with(
            &u,
            &ExactOptions {
                timeout: Some(Duration::ZERO),
                ..Default::default()
            },
        );
        assert_eq!(c.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn certificate_json_keys() {
        let c = verify_exact(&pair_00_11());
        let js = serde_json::to_value(&c).unwrap();
        assert_eq!(js["verdict"], "Extendible");
        assert_eq!(js["assignment"], serde_json::json!([0, 1]));
        assert_eq!(
            js["witness"][0],
            serde_json::json!([["0", "0"], ["1", "0"]])
        );
        assert!(
            js.get("nodes").is_some() && js.get("millis").is_some() && js.get("mode").is_some()
        );
        let upb = serde_json::to_value(verify_exact(&tiles_3x3())).unwrap();
        assert_eq!(upb["verdict"], "UPB");
        assert!(upb.get("witness").is_none());
    }
}
