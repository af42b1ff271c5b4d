//! Randomized agreement between library checks and the definition oracles.

mod common;

use std::collections::BTreeSet;

use common::{labels_of, mobius, oracle_quasi_el};
use modchain::complex::{find_shelling, is_cohen_macaulay, is_vd_bruteforce, order_complex, reduced_betti, validate_certificate};
use modchain::construct::constructive_vd_skeleton;
use modchain::labeling::{min_chain_complexity, verify_quasi_el};
use modchain::{EdgeLabeling, Poset, SimplicialComplex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bounded poset `0 < interior < 1` from a random relation on the interior,
/// at most nine elements in all.
#[allow(clippy::needless_range_loop)]
fn random_bounded_poset(seed: u64) -> Poset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=7);
    let n = k + 2;
    let mut lt = vec![vec![false; n]; n];
    for i in 1..=k {
        lt[0][i] = true;
        lt[i][n - 1] = true;
        for j in i + 1..=k {
            lt[i][j] = rng.gen_bool(0.35);
        }
    }
    lt[0][n - 1] = true;
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if lt[i][m] && lt[m][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    let name = |i: usize| match i {
        0 => "0".to_string(),
        i if i == n - 1 => "1".to_string(),
        i => format!("x{i}"),
    };
    let elements: Vec<String> = (0..n).map(name).collect();
    let covers: Vec<(String, String)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| lt[i][j] && !(0..n).any(|m| lt[i][m] && lt[m][j]))
        .map(|(i, j)| (name(i), name(j)))
        .collect();
    Poset::build(&elements, &covers).unwrap()
}

fn random_labeling(p: &Poset, seed: u64) -> EdgeLabeling {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1abe1);
    EdgeLabeling::from_fn(p, |_, _| rng.gen_range(1..=3))
}

fn random_complex(seed: u64) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=6);
    let facets: Vec<Vec<String>> = (0..rng.gen_range(1..=5))
        .map(|_| {
            let mut f: Vec<String> = (0..n).filter(|_| rng.gen_bool(0.5)).map(|i| format!("v{i}")).collect();
            if f.is_empty() {
                f.push(format!("v{}", rng.gen_range(0..n)));
            }
            f
        })
        .collect();
    SimplicialComplex::from_named(&facets).unwrap()
}

/// Decomposable implies shellable, and for pure complexes shellable implies
/// Cohen-Macaulay.
fn check_hierarchy(c: &SimplicialComplex) -> Result<(), TestCaseError> {
    if is_vd_bruteforce(c, 12).unwrap() {
        prop_assert!(find_shelling(c, 16).unwrap().is_some(), "decomposable but unshellable: {:?}", c.named_facets());
        if c.is_pure() {
            prop_assert!(is_cohen_macaulay(c, 100_000).unwrap().is_none(), "shellable but not CM: {:?}", c.named_facets());
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn quasi_el_matches_definition(seed in any::<u64>()) {
        let p = random_bounded_poset(seed);
        let lab = random_labeling(&p, seed);
        let lib = verify_quasi_el(&p, &lab);
        prop_assert_eq!(lib.is_ok(), oracle_quasi_el(&p, &lab), "{:?} {:?} {:?}", p.cover_names(), lab, lib.err());
    }

    #[test]
    fn grading_matches_chain_lengths(seed in any::<u64>()) {
        let p = random_bounded_poset(seed);
        let lengths: BTreeSet<usize> = p.maximal_chains().unwrap().iter().map(|c| c.length()).collect();
        prop_assert_eq!(p.is_graded().unwrap(), lengths.len() == 1);
    }

    #[test]
    fn euler_characteristic_is_mobius(seed in any::<u64>()) {
        let p = random_bounded_poset(seed);
        let betti = reduced_betti(&order_complex(&p).unwrap(), 100_000).unwrap();
        let euler: i64 = betti.iter().map(|(i, b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(euler, mobius(&p));
    }

    #[test]
    fn chain_labels_are_read_from_covers(seed in any::<u64>()) {
        let p = random_bounded_poset(seed);
        let lab = random_labeling(&p, seed);
        for c in p.maximal_chains().unwrap() {
            prop_assert_eq!(labels_of(&p, &lab, &c).len(), c.length());
        }
    }

    #[test]
    fn order_complex_hierarchy(seed in any::<u64>()) {
        check_hierarchy(&order_complex(&random_bounded_poset(seed)).unwrap())?;
    }

    #[test]
    fn random_complex_hierarchy(seed in any::<u64>()) {
        check_hierarchy(&random_complex(seed))?;
    }
}

#[test]
fn quasi_el_posets_have_decomposable_skeleta() {
    let mut accepted = 0;
    for seed in 0..3000u64 {
        let p = random_bounded_poset(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lab = EdgeLabeling::from_fn(&p, |_, _| rng.gen_range(1..=2));
        if verify_quasi_el(&p, &lab).is_err() {
            continue;
        }
        accepted += 1;
        let (r, _) = min_chain_complexity(&p, &lab).unwrap();
        let skel = order_complex(&p).unwrap().skeleton(r as isize - 2);
        let cert = constructive_vd_skeleton(&p, &lab, r).unwrap_or_else(|e| panic!("{:?} {lab:?}: {e}", p.cover_names()));
        validate_certificate(&skel, &cert).unwrap();
        assert!(is_vd_bruteforce(&skel, 12).unwrap(), "{:?}", p.cover_names());
    }
    assert!(accepted >= 100, "only {accepted} quasi-EL labelings drawn");
}
