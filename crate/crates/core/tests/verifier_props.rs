mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use upb_core::catalog::{tiles_3x3, TILES};
use upb_core::par::Execution;
use upb_core::recipe::{build, LeafTable, Recipe};
use upb_core::states::UpbCandidate;
use upb_core::verifier::{
    brute_force_extendible, is_valid_witness, verify_exact, verify_exact_with, verify_seesaw,
    ExactOptions, SeesawOptions, Verdict,
};

fn dims() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![
        (2usize..=3, 2usize..=4).prop_map(|(a, b)| vec![a, b]),
        Just(vec![2, 2, 2]),
        Just(vec![2, 2, 3]),
    ]
}

fn instance() -> impl Strategy<Value = UpbCandidate> {
    (dims(), 1usize..=9, any::<u64>()).prop_map(|(d, k, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let total: usize = d.iter().product();
        random_product_set(&mut rng, &d, k.min(total - 1))
    })
}

fn check_certificate(u: &UpbCandidate, opts: &ExactOptions) -> Result<(), TestCaseError> {
    let cert = verify_exact_with(u, opts);
    let expected = if naive_extendible(u) {
        Verdict::Extendible
    } else {
        Verdict::Upb
    };
    prop_assert_eq!(cert.verdict, expected);
    if let Some(w) = &cert.witness {
        prop_assert!(is_valid_witness(u, w));
        let dense = naive_expand(w);
        prop_assert!(u
            .states()
            .iter()
            .all(|s| num_traits::Zero::is_zero(&naive_inner(&naive_expand(s), &dense))));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pruned_search_matches_exhaustive_reference(u in instance()) {
        check_certificate(&u, &ExactOptions::default())?;
    }

    #[test]
    fn unpruned_search_matches_exhaustive_reference(u in instance()) {
        check_certificate(&u, &ExactOptions { prune: false, ..Default::default() })?;
    }

    #[test]
    fn library_brute_force_matches_reference(u in instance()) {
        prop_assert_eq!(brute_force_extendible(&u), naive_extendible(&u));
    }

    #[test]
    fn execution_mode_does_not_change_verdict(u in instance()) {
        let seq = verify_exact(&u);
        let par = verify_exact_with(&u, &ExactOptions { execution: Execution::Parallel, ..Default::default() });
        prop_assert_eq!(seq.verdict, par.verdict);
        if let Some(w) = &par.witness {
            prop_assert!(is_valid_witness(&u, w));
        }
    }
}

#[test]
fn every_tiles_subset_agrees_with_reference() {
    for s in subsets(&tiles_3x3()) {
        let expected = if s.len() == 5 {
            Verdict::Upb
        } else {
            Verdict::Extendible
        };
        assert_eq!(verify_exact(&s).verdict, expected, "{}", s.label);
        assert_eq!(naive_extendible(&s), expected == Verdict::Extendible);
    }
}

#[test]
fn seesaw_finds_witnesses_for_leave_one_out_sets() {
    let t = tiles_3x3();
    for i in 0..t.len() {
        let u = t.without(i).unwrap();
        let cert = verify_seesaw(&u, &SeesawOptions::default());
        assert_eq!(cert.verdict, Verdict::Extendible, "{}", u.label);
        assert!(is_valid_witness(&u, cert.witness.as_ref().unwrap()));
    }
}

#[test]
fn seesaw_never_claims_upb() {
    let cert = verify_seesaw(&tiles_3x3(), &SeesawOptions::default());
    assert_eq!(cert.verdict, Verdict::Inconclusive);
    assert!(cert.seesaw.unwrap().best < 1.0 - 1e-7);
}

#[test]
fn timeout_reports_inconclusive() {
    let r = Recipe::parse(&format!("tensor({TILES}, {TILES})")).unwrap();
    let u = build(&r, &LeafTable::new()).unwrap().upb;
    let cert = verify_exact_with(
        &u,
        &ExactOptions {
            prune: false,
            timeout: Some(std::time::Duration::from_millis(20)),
            ..Default::default()
        },
    );
    assert_eq!(cert.verdict, Verdict::Inconclusive);
    assert!(cert.witness.is_none());
}
