//! Reference implementations used as oracles by the integration tests. They share
//! no code with the library beyond the data types.

#![allow(dead_code)]

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::Rng;
use upb_core::exact::{ExactMatrix, ExactVector, GaussianRational};
use upb_core::states::{ProductState, SystemDims, UpbCandidate};

pub type Q = BigRational;
pub type C = Complex<Q>;

pub fn to_c(z: &GaussianRational) -> C {
    let q = |r: &upb_core::exact::Rational| Q::new(r.numer().clone(), r.denom().clone());
    C::new(q(&z.re), q(&z.im))
}

pub fn gq(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

/// Textbook Gaussian elimination with division over `Q(i)`.
pub fn naive_rank(rows: Vec<Vec<C>>) -> usize {
    let mut a = rows;
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * p);
                }
            }
        }
        r += 1;
    }
    r
}

pub fn matrix_rows(m: &ExactMatrix) -> Vec<Vec<C>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| to_c(m.get(r, c))).collect())
        .collect()
}

/// `Σ conj(a_i) b_i` on dense vectors.
pub fn naive_inner(a: &[C], b: &[C]) -> C {
    a.iter()
        .zip(b)
        .fold(C::zero(), |acc, (x, y)| acc + x.conj() * y)
}

/// Dense Kronecker expansion, party 0 slowest.
pub fn naive_expand(p: &ProductState) -> Vec<C> {
    let mut acc = vec![C::one()];
    for f in p.factors() {
        let fc: Vec<C> = f.entries().iter().map(to_c).collect();
        acc = acc
            .iter()
            .flat_map(|x| fc.iter().map(move |y| x * y))
            .collect();
    }
    acc
}

pub fn naive_orthogonal(states: &[ProductState]) -> bool {
    let dense: Vec<Vec<C>> = states.iter().map(naive_expand).collect();
    (0..dense.len())
        .all(|i| (i + 1..dense.len()).all(|j| naive_inner(&dense[i], &dense[j]).is_zero()))
}

/// Exhaustive assignment search with the reference rank: some assignment leaves
/// every party's assigned factors short of spanning its space.
pub fn naive_extendible(u: &UpbCandidate) -> bool {
    let dims = u.dims().as_slice();
    let (n, k) = (dims.len(), u.len());
    (0..n.pow(k as u32)).any(|mut code| {
        let mut groups: Vec<Vec<Vec<C>>> = vec![Vec::new(); n];
        for s in u.states() {
            let p = code % n;
            code /= n;
            groups[p].push(s.factor(p).entries().iter().map(to_c).collect());
        }
        groups
            .into_iter()
            .enumerate()
            .all(|(p, rows)| rows.is_empty() || naive_rank(rows) < dims[p])
    })
}

const SMALL: [i64; 5] = [-1, 0, 0, 1, 2];

/// A nonzero vector with entries in `{-1, 0, 1, 2}`, occasionally with an imaginary part.
pub fn random_vector<R: Rng>(rng: &mut R, d: usize) -> ExactVector {
    loop {
        let entries: Vec<GaussianRational> = (0..d)
            .map(|_| {
                let im = if rng.random_bool(0.15) {
                    *SMALL.choose(rng).unwrap()
                } else {
                    0
                };
                gq(*SMALL.choose(rng).unwrap(), im)
            })
            .collect();
        let v = ExactVector::new(entries);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Greedy orthogonal product set: random small-integer product states are kept
/// when orthogonal to everything kept so far.
pub fn random_product_set<R: Rng>(rng: &mut R, dims: &[usize], k: usize) -> UpbCandidate {
    let mut states: Vec<ProductState> = Vec::new();
    let mut kept: Vec<Vec<C>> = Vec::new();
    for _ in 0..400 {
        if states.len() == k {
            break;
        }
        let p = ProductState::new(dims.iter().map(|&d| random_vector(rng, d)).collect()).unwrap();
        let dense = naive_expand(&p);
        if kept.iter().all(|s| naive_inner(s, &dense).is_zero()) {
            states.push(p);
            kept.push(dense);
        }
    }
    UpbCandidate::new(SystemDims::new(dims.to_vec()).unwrap(), states, "random").unwrap()
}

/// Every nonempty subset of `u`'s states, as candidates.
pub fn subsets(u: &UpbCandidate) -> Vec<UpbCandidate> {
    let k = u.len();
    (1u32..1 << k)
        .map(|mask| {
            let states = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| u.states()[i].clone())
                .collect();
            UpbCandidate::new(u.dims().clone(), states, format!("{}#{mask:b}", u.label)).unwrap()
        })
        .collect()
}
