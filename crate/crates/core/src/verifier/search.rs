//! Depth-first search for a party assignment that certifies extendibility.
//!
//! A product state `|φ_1⟩⊗…⊗|φ_N⟩` is orthogonal to every input state iff each
//! input state `i` can be assigned to a party `p` with `⟨φ_p|ψ_i^{(p)}⟩ = 0`.
//! Such `φ_p` exists iff the factors assigned to `p` span less than `d_p`.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use crate::exact::{primitive_gauss_row, EchelonSpan, GaussInt};
use crate::par::{self, Execution};
use crate::states::UpbCandidate;

pub(crate) struct Problem {
    dims: Vec<usize>,
    /// `rows[state][party]`
    rows: Vec<Vec<Vec<GaussInt>>>,
}

impl Problem {
    pub(crate) fn new(u: &UpbCandidate) -> Self {
        Problem {
            dims: u.dims().as_slice().to_vec(),
            rows: u
                .states()
                .iter()
                .map(|s| {
                    s.factors()
                        .iter()
                        .map(|f| primitive_gauss_row(f.entries()))
                        .collect()
                })
                .collect(),
        }
    }

    fn states(&self) -> usize {
        self.rows.len()
    }

    fn parties(&self) -> usize {
        self.dims.len()
    }
}

pub(crate) enum Outcome {
    Found(Vec<usize>),
    Exhausted,
    Aborted,
}

struct Limits<'a> {
    prune: bool,
    deadline: Option<Instant>,
    cancel: &'a AtomicBool,
}

struct Walker<'a> {
    problem: &'a Problem,
    limits: &'a Limits<'a>,
    spans: Vec<EchelonSpan>,
    assignment: Vec<usize>,
    nodes: u64,
    aborted: bool,
}

impl<'a> Walker<'a> {
    fn new(problem: &'a Problem, limits: &'a Limits<'a>) -> Self {
        Walker {
            problem,
            limits,
            spans: vec![EchelonSpan::new(); problem.parties()],
            assignment: vec![0; problem.states()],
            nodes: 0,
            aborted: false,
        }
    }

    /// Replays a prefix; false if the prefix is already infeasible.
    fn replay(&mut self, prefix: &[usize]) -> bool {
        for (i, &p) in prefix.iter().enumerate() {
            self.spans[p].push(&self.problem.rows[i][p]);
            self.assignment[i] = p;
            if self.limits.prune && self.spans[p].rank() >= self.problem.dims[p] {
                return false;
            }
        }
        true
    }

    fn should_stop(&mut self) -> bool {
        if self.nodes % 256 == 1 {
            if self.limits.cancel.load(Ordering::Relaxed) {
                self.aborted = true;
            } else if self.limits.deadline.is_some_and(|d| Instant::now() >= d) {
                self.aborted = true;
                self.limits.cancel.store(true, Ordering::Relaxed);
            }
        }
        self.aborted
    }

    fn leaf_ok(&self) -> bool {
        self.spans
            .iter()
            .zip(&self.problem.dims)
            .all(|(s, &d)| s.rank() < d)
    }

    /// Explores states `i..`; `collect` stops at depth `stop` and records prefixes.
    fn dfs(&mut self, i: usize, stop: usize, collect: &mut Option<Vec<Vec<usize>>>) -> bool {
        self.nodes += 1;
        if self.should_stop() {
            return false;
        }
        if i == stop {
            if let Some(out) = collect {
                out.push(self.assignment[..i].to_vec());
                return false;
            }
            return self.leaf_ok();
        }
        let parties = self.problem.parties();
        if !self.limits.prune {
            for p in 0..parties {
                let grew = self.spans[p].push(&self.problem.rows[i][p]);
                self.assignment[i] = p;
                if self.dfs(i + 1, stop, collect) {
                    return true;
                }
                if grew {
                    self.spans[p].pop();
                }
                if self.aborted {
                    return false;
                }
            }
            return false;
        }
        let mut reduced = Vec::with_capacity(parties);
        for p in 0..parties {
            match self.spans[p].reduce(&self.problem.rows[i][p]) {
                // already in p's span: assigning it there changes nothing, and any
                // completion with another choice stays valid after moving it to p
                None => {
                    self.assignment[i] = p;
                    return self.dfs(i + 1, stop, collect);
                }
                Some(r) => reduced.push(r),
            }
        }
        for (p, r) in reduced.into_iter().enumerate() {
            if self.spans[p].rank() + 1 >= self.problem.dims[p] {
                continue;
            }
            self.spans[p].push_reduced(r);
            self.assignment[i] = p;
            if self.dfs(i + 1, stop, collect) {
                return true;
            }
            self.spans[p].pop();
            if self.aborted {
                return false;
            }
        }
        false
    }
}

pub(crate) struct SearchStats {
    pub nodes: u64,
}

/// Runs the search; `exec` parallelizes over top-level branches.
pub(crate) fn search(
    problem: &Problem,
    prune: bool,
    deadline: Option<Instant>,
    exec: Execution,
) -> (Outcome, SearchStats) {
    let cancel = AtomicBool::new(false);
    let limits = Limits {
        prune,
        deadline,
        cancel: &cancel,
    };
    let k = problem.states();

    if !exec.is_parallel() || k < 4 {
        let mut w = Walker::new(problem, &limits);
        let found = w.dfs(0, k, &mut None);
        let outcome = if found {
            Outcome::Found(w.assignment)
        } else if w.aborted {
            Outcome::Aborted
        } else {
            Outcome::Exhausted
        };
        return (outcome, SearchStats { nodes: w.nodes });
    }

    // split at a depth giving enough independent subtrees
    let mut depth = 0;
    let mut fanout = 1usize;
    while depth < k - 1 && fanout < 64 {
        fanout *= problem.parties();
        depth += 1;
    }
    let mut prefixes = Some(Vec::new());
    let mut head = Walker::new(problem, &limits);
    head.dfs(0, depth, &mut prefixes);
    let prefixes = prefixes.unwrap_or_default();
    let nodes = AtomicU64::new(head.nodes);
    if head.aborted {
        return (Outcome::Aborted, SearchStats { nodes: head.nodes });
    }

    let found = par::find_map_any(exec, &prefixes, |prefix| {
        let mut w = Walker::new(problem, &limits);
        let ok = w.replay(prefix) && w.dfs(depth, k, &mut None);
        nodes.fetch_add(w.nodes, Ordering::Relaxed);
        if ok {
            cancel.store(true, Ordering::Relaxed);
            Some(w.assignment)
        } else {
            None
        }
    });
    let nodes = nodes.load(Ordering::Relaxed);
    let outcome = match found {
        Some(a) => Outcome::Found(a),
        None if deadline.is_some_and(|d| Instant::now() >= d) || cancel.load(Ordering::Relaxed) => {
            Outcome::Aborted
        }
        None => Outcome::Exhausted,
    };
    (outcome, SearchStats { nodes })
}
