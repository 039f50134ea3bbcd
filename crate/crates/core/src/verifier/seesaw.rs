//! Alternating maximization of a product state's weight on the complement of a set.
//!
//! With normalized members `|ψ_i⟩ = ⊗_p |a_i^p⟩` the objective is
//! `⟨φ|Q|φ⟩ = 1 − Σ_i ∏_p |⟨φ_p|a_i^p⟩|²` for `Q = I − Σ_i |ψ_i⟩⟨ψ_i|`.
//! Fixing all parties but `p` leaves `Q_p = I − Σ_i w_i |a_i^p⟩⟨a_i^p|`, whose top
//! eigenvector is the optimal update for `φ_p`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::eigen::{hermitian_eigen, CMatrix};
use crate::exact::{ExactVector, GaussianRational, Rational};
use crate::par::{self, Execution};
use crate::states::{ProductState, UpbCandidate};

use super::is_valid_witness;

/// Overlap at or above which the optimum is read as a complement product state.
pub const OVERLAP_THRESHOLD: f64 = 1.0 - 1e-7;

#[derive(Clone, Debug)]
pub struct SeesawOptions {
    pub seed: u64,
    pub restarts: usize,
    pub max_sweeps: usize,
    pub tolerance: f64,
    pub execution: Execution,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        SeesawOptions {
            seed: 1,
            restarts: 50,
            max_sweeps: 500,
            tolerance: 1e-12,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeesawResult {
    /// Best objective over restarts, in `[0, 1]`.
    pub best: f64,
    /// Normalized factors achieving `best`.
    pub factors: Vec<Vec<Complex64>>,
    pub best_restart: usize,
    /// Total sweeps over all restarts.
    pub sweeps: u64,
}

fn normalize(v: &mut [Complex64]) {
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= n;
    }
}

fn overlap(phi: &[Complex64], a: &[Complex64]) -> f64 {
    phi.iter()
        .zip(a)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm_sqr()
}

/// `1 − Σ_i ∏_p |⟨φ_p|a_i^p⟩|²` for normalized inputs.
fn objective(members: &[Vec<Vec<Complex64>>], phi: &[Vec<Complex64>]) -> f64 {
    1.0 - members
        .iter()
        .map(|m| {
            m.iter()
                .zip(phi)
                .map(|(a, f)| overlap(f, a))
                .product::<f64>()
        })
        .sum::<f64>()
}

fn run_restart(
    members: &[Vec<Vec<Complex64>>],
    dims: &[usize],
    opts: &SeesawOptions,
    restart: usize,
) -> (f64, Vec<Vec<Complex64>>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart as u64);
    let mut phi: Vec<Vec<Complex64>> = dims
        .iter()
        .map(|&d| {
            let mut v: Vec<Complex64> = (0..d)
                .map(|_| {
                    Complex64::new(
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                    )
                })
                .collect();
            normalize(&mut v);
            v
        })
        .collect();
    let mut value = objective(members, &phi);
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        for p in 0..dims.len() {
            let mut q = CMatrix::identity(dims[p]);
            for m in members {
                let w: f64 = (0..dims.len())
                    .filter(|&r| r != p)
                    .map(|r| overlap(&phi[r], &m[r]))
                    .product();
                if w > 0.0 {
                    q.add_outer(-w, &m[p]);
                }
            }
            let eig = hermitian_eigen(&q);
            let mut top = eig.vector(dims[p] - 1);
            normalize(&mut top);
            phi[p] = top;
        }
        let next = objective(members, &phi);
        let delta = (next - value).abs();
        value = next;
        if delta < opts.tolerance {
            break;
        }
    }
    (value.clamp(0.0, 1.0), phi, sweeps as u64)
}

/// Best product overlap with the complement over seeded restarts.
///
/// Restart `r` draws from the ChaCha stream `r` of `seed`, so the result depends
/// only on `(seed, restarts)` and not on the number of workers.
pub fn seesaw(u: &UpbCandidate, opts: &SeesawOptions) -> SeesawResult {
    let dims = u.dims().as_slice().to_vec();
    let members: Vec<Vec<Vec<Complex64>>> = u
        .states()
        .iter()
        .map(|s| {
            s.factors()
                .iter()
                .map(|f| {
                    let mut v = f.to_complex();
                    normalize(&mut v);
                    v
                })
                .collect()
        })
        .collect();
    let restarts: Vec<usize> = (0..opts.restarts.max(1)).collect();
    let runs = par::map(opts.execution, &restarts, |&r| {
        run_restart(&members, &dims, opts, r)
    });
    let sweeps = runs.iter().map(|r| r.2).sum();
    let (best_restart, (best, factors, _)) = runs
        .into_iter()
        .enumerate()
        .fold(
            None::<(usize, (f64, Vec<Vec<Complex64>>, u64))>,
            |acc, (i, run)| match acc {
                Some((j, b)) if b.0 >= run.0 => Some((j, b)),
                _ => Some((i, run)),
            },
        )
        .expect("at least one restart");
    SeesawResult {
        best,
        factors,
        best_restart,
        sweeps,
    }
}

/// Tries to round numeric factors to small-denominator Gaussian rationals that
/// form an exact witness. Each factor is first scaled so its largest entry is 1.
pub fn rationalize_witness(u: &UpbCandidate, factors: &[Vec<Complex64>]) -> Option<ProductState> {
    let scaled: Vec<Vec<Complex64>> = factors
        .iter()
        .map(|f| {
            let pivot = f
                .iter()
                .copied()
                .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
                .unwrap_or(Complex64::new(1.0, 0.0));
            f.iter().map(|z| z / pivot).collect()
        })
        .collect();
    for q in 1..=24i64 {
        let candidate: Vec<ExactVector> = scaled
            .iter()
            .map(|f| {
                ExactVector::new(
                    f.iter()
                        .map(|z| {
                            GaussianRational::new(
                                Rational::round_to_denominator(z.re, q),
                                Rational::round_to_denominator(z.im, q),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        if let Ok(w) = ProductState::new(candidate) {
            if is_valid_witness(u, &w) {
                return Some(w);
            }
        }
    }
    None
}
