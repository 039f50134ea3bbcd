mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use upb_core::exact::{
    inner_product, null_space_basis, rank, ExactMatrix, ExactVector, GaussianRational,
};
use upb_core::states::{
    expand, global_inner, is_fully_product, is_product, ProductState, SystemDims,
};

fn entry() -> impl Strategy<Value = (i64, i64)> {
    (-3i64..=3, prop_oneof![4 => Just(0i64), 1 => -2i64..=2])
}

/// Matrices built as `L · R` with a random inner width, so low ranks are common.
fn matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..=5, 1usize..=5, 1usize..=4).prop_flat_map(|(r, c, w)| {
        (
            prop::collection::vec(entry(), r * w),
            prop::collection::vec(entry(), w * c),
        )
            .prop_map(move |(l, rr)| {
                let mut m = ExactMatrix::zeros(r, c);
                for i in 0..r {
                    for j in 0..c {
                        let mut acc = GaussianRational::zero();
                        for t in 0..w {
                            acc += &(&gq(l[i * w + t].0, l[i * w + t].1)
                                * &gq(rr[t * c + j].0, rr[t * c + j].1));
                        }
                        m.set(i, j, acc);
                    }
                }
                m
            })
    })
}

fn vector(d: usize) -> impl Strategy<Value = ExactVector> {
    prop::collection::vec(entry(), d)
        .prop_map(|v| ExactVector::new(v.into_iter().map(|(a, b)| gq(a, b)).collect()))
        .prop_filter("nonzero", |v| !v.is_zero())
}

fn product_state(dims: Vec<usize>) -> impl Strategy<Value = ProductState> {
    dims.into_iter()
        .map(vector)
        .collect::<Vec<_>>()
        .prop_map(|f| ProductState::new(f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_agrees_with_textbook_elimination(m in matrix()) {
        prop_assert_eq!(rank(&m), naive_rank(matrix_rows(&m)));
    }

    #[test]
    fn rank_plus_nullity_is_width(m in matrix()) {
        let basis = null_space_basis(&m);
        prop_assert_eq!(rank(&m) + basis.len(), m.cols());
        if !basis.is_empty() {
            prop_assert_eq!(naive_rank(basis.iter().map(|v| v.entries().iter().map(to_c).collect()).collect()), basis.len());
        }
    }

    #[test]
    fn null_vectors_are_orthogonal_to_rows(m in matrix()) {
        for v in null_space_basis(&m) {
            let dense: Vec<C> = v.entries().iter().map(to_c).collect();
            for row in matrix_rows(&m) {
                prop_assert!(naive_inner(&row, &dense).is_zero());
            }
        }
    }

    #[test]
    fn inner_product_is_hermitian(a in vector(4), b in vector(4)) {
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        prop_assert_eq!(ab.conj(), ba);
        let dense = |v: &ExactVector| v.entries().iter().map(to_c).collect::<Vec<_>>();
        prop_assert_eq!(to_c(&ab), naive_inner(&dense(&a), &dense(&b)));
    }

    #[test]
    fn global_inner_matches_expanded_states(
        (p, q) in (2usize..=3, 2usize..=4, 2usize..=3)
            .prop_flat_map(|(a, b, c)| (product_state(vec![a, b, c]), product_state(vec![a, b, c])))
    ) {
        let g = global_inner(&p, &q).unwrap();
        prop_assert_eq!(to_c(&g), naive_inner(&naive_expand(&p), &naive_expand(&q)));
        let e = inner_product(&expand(&p).coefficients, &expand(&q).coefficients).unwrap();
        prop_assert_eq!(g, e);
    }

    #[test]
    fn expanded_product_states_are_product(p in (2usize..=4, 2usize..=4).prop_flat_map(|(a, b)| product_state(vec![a, b]))) {
        let dims = SystemDims::new(p.dims()).unwrap();
        prop_assert!(is_product(&expand(&p), &dims).unwrap());
    }

    #[test]
    fn sums_of_independent_products_are_entangled(
        (p, q) in (2usize..=3, 2usize..=3, 2usize..=2)
            .prop_flat_map(|(a, b, c)| (product_state(vec![a, b, c]), product_state(vec![a, b, c])))
    ) {
        // |p⟩ + |q⟩ is fully product iff it is a multiple of one of them or the
        // factors differ on at most one party.
        let f = expand(&p).coefficients.entries().iter().zip(expand(&q).coefficients.entries())
            .map(|(x, y)| x + y).collect::<Vec<_>>();
        let sum = upb_core::states::FullState { coefficients: ExactVector::new(f) };
        prop_assume!(!sum.coefficients.is_zero());
        let parallel = |a: &ExactVector, b: &ExactVector| {
            naive_rank(vec![a.entries().iter().map(to_c).collect(), b.entries().iter().map(to_c).collect()]) == 1
        };
        let differing = (0..3).filter(|&i| !parallel(p.factor(i), q.factor(i))).count();
        let dims = SystemDims::new(p.dims()).unwrap();
        prop_assert_eq!(is_fully_product(&sum, &dims).unwrap(), differing <= 1);
    }
}

#[test]
fn bell_state_is_not_product() {
    let f = upb_core::states::FullState {
        coefficients: ExactVector::from_ints(&[1, 0, 0, 1]),
    };
    assert!(!is_product(&f, &SystemDims::bipartite(2, 2).unwrap()).unwrap());
}
