//! Exhaustive reference for the pruned search: enumerates all `N^k` assignments
//! and recomputes every party's rank from scratch.

use crate::exact::{rank, ExactMatrix, ExactVector};
use crate::states::UpbCandidate;

/// True iff some assignment leaves every party's assigned factors rank-deficient.
pub fn brute_force_extendible(u: &UpbCandidate) -> bool {
    let dims = u.dims().as_slice();
    let (n, k) = (dims.len(), u.len());
    let mut assignment = vec![0usize; k];
    loop {
        let feasible = (0..n).all(|p| {
            let rows: Vec<ExactVector> = assignment
                .iter()
                .zip(u.states())
                .filter(|(&q, _)| q == p)
                .map(|(_, s)| s.factor(p).clone())
                .collect();
            rank(&ExactMatrix::from_rows(&rows, dims[p]).expect("dims")) < dims[p]
        });
        if feasible {
            return true;
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            assignment[i] += 1;
            if assignment[i] < n {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}
