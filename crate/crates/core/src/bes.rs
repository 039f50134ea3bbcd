//! Bound entangled states from UPB complements.
//!
//! For a UPB `{|ψ_i⟩}` of `k` states in dimension `D`, `ρ = (I − Σ_i |ψ_i⟩⟨ψ_i|)/(D − k)`
//! is PPT across every cut, and its range holds no product vector because the
//! set is unextendible. The module checks the numeric half: hermiticity, trace,
//! rank, support and the partial-transpose spectra.

use num_complex::Complex64;
use serde::Serialize;

use crate::eigen::{hermitian_eigen, CMatrix};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::states::{expand, UpbCandidate};
use crate::verifier::{Verdict, VerificationCertificate};

pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-12;
pub const PPT_FLOOR: f64 = -1e-9;
pub const RANK_TOLERANCE: f64 = 1e-9;
pub const SUPPORT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct DensityOperator {
    dims: Vec<usize>,
    matrix: CMatrix,
    pub label: String,
    /// No unextendibility certificate was supplied.
    pub waived: bool,
}

impl DensityOperator {
    /// Wraps an explicit matrix; `dims` fixes the tensor structure.
    pub fn from_matrix(
        dims: Vec<usize>,
        matrix: CMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.len() < 2 || dims.contains(&0) || matrix.dim() != total {
            return Err(Error::InvalidDims(dims));
        }
        Ok(DensityOperator {
            dims,
            matrix,
            label: label.into(),
            waived: true,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// `(I − P)/(D − k)` without checking unextendibility.
pub fn upb_state_unchecked(u: &UpbCandidate) -> DensityOperator {
    let d = u.dims().total();
    let k = u.len();
    let mut m = CMatrix::identity(d);
    for s in u.states() {
        m.add_outer(-1.0, &normalized(expand(s).coefficients.to_complex()));
    }
    let scale = 1.0 / (d - k) as f64;
    let data = m.data().iter().map(|z| z * scale).collect();
    DensityOperator {
        dims: u.dims().as_slice().to_vec(),
        matrix: CMatrix::from_data(d, data),
        label: u.label.clone(),
        waived: true,
    }
}

/// The complement state of a certified UPB. `certificate` must carry the UPB
/// verdict; pass `None` to waive the check explicitly.
pub fn upb_state(
    u: &UpbCandidate,
    certificate: Option<&VerificationCertificate>,
) -> Result<DensityOperator> {
    if u.len() >= u.dims().total() {
        return Err(Error::BadStateCount {
            count: u.len(),
            max: u.dims().total() - 1,
        });
    }
    let mut rho = upb_state_unchecked(u);
    match certificate {
        Some(c) if c.verdict != Verdict::Upb => return Err(Error::NotCertified),
        Some(_) => rho.waived = false,
        None => {}
    }
    Ok(rho)
}

fn validate_subset(parties: &[usize], n: usize) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &p in parties {
        if p >= n || mask[p] {
            return Err(Error::BadSubset(parties.to_vec()));
        }
        mask[p] = true;
    }
    if parties.is_empty() || parties.len() == n {
        return Err(Error::BadSubset(parties.to_vec()));
    }
    Ok(mask)
}

/// Transposes the indices of the parties in `parties`.
pub fn partial_transpose(rho: &DensityOperator, parties: &[usize]) -> Result<CMatrix> {
    let dims = &rho.dims;
    let mask = validate_subset(parties, dims.len())?;
    let d = rho.matrix.dim();
    let digits = |mut x: usize| {
        let mut out = vec![0; dims.len()];
        for p in (0..dims.len()).rev() {
            out[p] = x % dims[p];
            x /= dims[p];
        }
        out
    };
    let index = |ds: &[usize]| ds.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x);
    let mut out = CMatrix::zeros(d);
    for r in 0..d {
        let rd = digits(r);
        for c in 0..d {
            let mut a = rd.clone();
            let mut b = digits(c);
            for p in 0..dims.len() {
                if mask[p] {
                    std::mem::swap(&mut a[p], &mut b[p]);
                }
            }
            out[(index(&a), index(&b))] = rho.matrix[(r, c)];
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PptEntry {
    pub parties: Vec<usize>,
    pub min_eig: f64,
}

/// Cuts are named by the side containing party 0; the full set is excluded.
pub fn bipartitions(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << (n - 1))
        .map(|bits| {
            std::iter::once(0)
                .chain((1..n).filter(|p| bits >> (p - 1) & 1 == 1))
                .collect::<Vec<_>>()
        })
        .filter(|s| s.len() < n)
        .collect()
}

/// Smallest partial-transpose eigenvalue for every cut.
pub fn check_ppt(rho: &DensityOperator, exec: Execution) -> Vec<PptEntry> {
    let cuts = bipartitions(rho.dims.len());
    par::map(exec, &cuts, |parties| {
        let pt = partial_transpose(rho, parties).expect("cut is a proper subset");
        let e = hermitian_eigen(&pt);
        PptEntry {
            parties: parties.clone(),
            min_eig: e.values[0],
        }
    })
}

pub fn is_ppt(entries: &[PptEntry]) -> bool {
    entries.iter().all(|e| e.min_eig >= PPT_FLOOR)
}

/// Eigenvalues above `tol`.
pub fn rank_of(rho: &DensityOperator, tol: f64) -> usize {
    hermitian_eigen(&rho.matrix)
        .values
        .iter()
        .filter(|&&v| v > tol)
        .count()
}

/// `max_i ⟨ψ_i|ρ|ψ_i⟩` over the normalized members of `u`.
pub fn support_residual(rho: &DensityOperator, u: &UpbCandidate) -> f64 {
    u.states()
        .iter()
        .map(|s| {
            rho.matrix
                .expectation(&normalized(expand(s).coefficients.to_complex()))
                .re
                .abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BesReport {
    pub dims: Vec<usize>,
    pub k: usize,
    pub rank: usize,
    pub expected_rank: usize,
    pub ppt: Vec<PptEntry>,
    pub is_ppt: bool,
    pub support_residual: f64,
    pub trace_error: f64,
    pub hermiticity_error: f64,
    /// Range free of product vectors, from the unextendibility certificate.
    pub entangled_by_certificate: bool,
    pub waived: bool,
}

impl BesReport {
    /// All numeric checks within tolerance.
    pub fn passes(&self) -> bool {
        self.rank == self.expected_rank
            && self.is_ppt
            && self.support_residual <= SUPPORT_TOLERANCE
            && self.trace_error <= TRACE_TOLERANCE
            && self.hermiticity_error <= HERMITICITY_TOLERANCE
    }
}

pub fn report(u: &UpbCandidate, rho: &DensityOperator, exec: Execution) -> BesReport {
    let ppt = check_ppt(rho, exec);
    BesReport {
        dims: rho.dims.clone(),
        k: u.len(),
        rank: rank_of(rho, RANK_TOLERANCE),
        expected_rank: u.dims().total() - u.len(),
        is_ppt: is_ppt(&ppt),
        ppt,
        support_residual: support_residual(rho, u),
        trace_error: (rho.trace() - 1.0).abs(),
        hermiticity_error: rho.matrix.hermiticity_defect(),
        entangled_by_certificate: !rho.waived,
        waived: rho.waived,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::tiles_3x3;
    use crate::verifier::verify_exact;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bell_projector() -> DensityOperator {
        let mut m = CMatrix::zeros(4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = Complex64::new(0.5, 0.0);
        }
        DensityOperator::from_matrix(vec![2, 2], m, "bell").unwrap()
    }

    #[test]
    fn tiles_state() {
        let t = tiles_3x3();
        let cert = verify_exact(&t);
        let rho = upb_state(&t, Some(&cert)).unwrap();
        let r = report(&t, &rho, Execution::Sequential);
        assert_eq!(r.rank, 4);
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.ppt.len(), 1);
        assert!(r.entangled_by_certificate && !r.waived);
    }

    #[test]
    fn certificate_must_say_upb() {
        let u = tiles_3x3().without(0).unwrap();
        let cert = verify_exact(&u);
        assert_eq!(upb_state(&u, Some(&cert)).unwrap_err(), Error::NotCertified);
        assert!(upb_state(&u, None).unwrap().waived);
    }

    #[test]
    fn bell_is_not_ppt() {
        let e = check_ppt(&bell_projector(), Execution::Sequential);
        assert!((e[0].min_eig + 0.5).abs() < 1e-12);
        assert!(!is_ppt(&e));
    }

    #[test]
    fn transpose_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dims = vec![2, 3, 2];
        let d = 12;
        let mut m = CMatrix::zeros(d);
        for i in 0..d {
            for j in i..d {
                let z = Complex64::new(
                    rng.random_range(-1.0..1.0),
                    if i == j {
                        0.0
                    } else {
                        rng.random_range(-1.0..1.0)
                    },
                );
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        let rho = DensityOperator::from_matrix(dims.clone(), m.clone(), "random").unwrap();
        for cut in bipartitions(3) {
            let pt = partial_transpose(&rho, &cut).unwrap();
            assert!((pt.trace() - m.trace()).norm() < 1e-12);
            let back = partial_transpose(
                &DensityOperator::from_matrix(dims.clone(), pt, "").unwrap(),
                &cut,
            )
            .unwrap();
            assert_eq!(back, m);
        }
        let id = DensityOperator::from_matrix(dims, CMatrix::identity(d), "id").unwrap();
        assert_eq!(partial_transpose(&id, &[1]).unwrap(), CMatrix::identity(d));
    }

    #[test]
    fn bad_subsets() {
        let rho = bell_projector();
        for cut in [vec![], vec![0, 1], vec![2], vec![0, 0]] {
            assert_eq!(
                partial_transpose(&rho, &cut).unwrap_err().code(),
                "bad_subset"
            );
        }
    }

    #[test]
    fn cuts_of_three_parties() {
        assert_eq!(bipartitions(2), vec![vec![0]]);
        assert_eq!(bipartitions(3), vec![vec![0], vec![0, 1], vec![0, 2]]);
    }
}
