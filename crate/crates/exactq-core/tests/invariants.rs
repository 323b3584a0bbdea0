//! Property tests for the level machinery: norm and inner-product
//! preservation, the query involution, index-relabeling covariance (the
//! symmetry the class-level verifier rests on), padding equivalence, and
//! trace determinism.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use exactq_core::algorithms::{
    build_level_isometries, level_outcomes, run_sampled, AlgorithmSpec, Family,
};
use exactq_core::basis::{basis_dim, BasisIndex};
use exactq_core::oracle::{pad_for_exact, pad_for_threshold, PaddedInput};
use exactq_core::state::StateVector;

/// A unit state supported on the given basis states.
fn supported_state(level_size: usize, support: &[BasisIndex], coeffs: &[f64]) -> StateVector {
    let norm: f64 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut amplitudes = vec![0.0; basis_dim(level_size)];
    for (state, c) in support.iter().zip(coeffs) {
        amplitudes[state.canonical_index(level_size).unwrap()] = c / norm;
    }
    StateVector::from_amplitudes(level_size, amplitudes).unwrap()
}

proptest! {
    // Norm and inner-product preservation of U2 on in-support states.
    #[test]
    fn u2_preserves_norms_and_inner_products(
        m in 1usize..=5,
        maj in any::<bool>(),
        a in prop::collection::vec(-1.0f64..1.0, 11),
        b in prop::collection::vec(-1.0f64..1.0, 11),
    ) {
        let family = if maj { Family::Maj } else { Family::Exact };
        let spec = AlgorithmSpec::new(family, m);
        let s = spec.level_size();
        let (_, u2) = build_level_isometries(&spec).unwrap();
        let support: Vec<BasisIndex> = (1..=s).map(BasisIndex::Single).collect();
        prop_assume!(a[..s].iter().map(|c| c * c).sum::<f64>() > 1e-3);
        prop_assume!(b[..s].iter().map(|c| c * c).sum::<f64>() > 1e-3);
        let psi = supported_state(s, &support, &a[..s]);
        let phi = supported_state(s, &support, &b[..s]);
        let v_psi = u2.apply(&psi).unwrap();
        let v_phi = u2.apply(&phi).unwrap();
        prop_assert!((v_psi.norm() - psi.norm()).abs() < 1e-11);
        prop_assert!((v_psi.inner(&v_phi).unwrap() - psi.inner(&phi).unwrap()).abs() < 1e-11);
    }

    // The query only flips signs: applying it twice restores the state
    // exactly, and each application costs one query.
    #[test]
    fn query_involution_and_exact_norm(
        mask in 0u64..1024,
        n in 1usize..=10,
        raw in prop::collection::vec(-1.0f64..1.0, 66),
    ) {
        let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let mut input = PaddedInput::new(bits);
        let dim = basis_dim(n);
        let psi = StateVector::from_amplitudes(n, raw[..dim].to_vec()).unwrap();
        let once = input.apply_query(&psi).unwrap();
        prop_assert_eq!(once.norm_squared(), psi.norm_squared());
        let twice = input.apply_query(&once).unwrap();
        prop_assert_eq!(twice.amplitudes(), psi.amplitudes());
        prop_assert_eq!(input.queries_used(), 2);
    }

    // Identical seed and input reproduce the trace bit for bit.
    #[test]
    fn sampled_traces_are_deterministic(mask in 0u64..64, seed in any::<u64>()) {
        let bits: Vec<bool> = (0..6).map(|i| mask >> i & 1 == 1).collect();
        let spec = AlgorithmSpec::new(Family::Exact, 3);
        let a = run_sampled(&spec, PaddedInput::new(bits.clone()), seed).unwrap();
        let b = run_sampled(&spec, PaddedInput::new(bits), seed).unwrap();
        prop_assert_eq!(a.answer, b.answer);
        prop_assert_eq!(a.queries, b.queries);
        prop_assert_eq!(a.levels.len(), b.levels.len());
        for (x, y) in a.levels.iter().zip(&b.levels) {
            prop_assert_eq!(x.outcome, y.outcome);
            prop_assert_eq!(x.probability, y.probability);
            prop_assert_eq!(&x.removed_global, &y.removed_global);
        }
    }
}

fn apply_permutation(state: BasisIndex, perm: &[usize]) -> BasisIndex {
    match state {
        BasisIndex::Blank => BasisIndex::Blank,
        BasisIndex::Single(i) => BasisIndex::Single(perm[i - 1]),
        BasisIndex::Pair(i, j) => {
            let (a, b) = (perm[i - 1], perm[j - 1]);
            BasisIndex::Pair(a.min(b), a.max(b))
        }
    }
}

/// Relabeling the active indices commutes with one level of either
/// algorithm: the outcome distribution maps through the permutation.
#[test]
fn level_distribution_is_permutation_covariant() {
    for (family, size) in [
        (Family::Exact, 4),
        (Family::Exact, 6),
        (Family::Exact, 8),
        (Family::Maj, 3),
        (Family::Maj, 5),
        (Family::Maj, 7),
    ] {
        let m = match family {
            Family::Exact => size / 2,
            Family::Maj => (size - 1) / 2,
        };
        let spec = AlgorithmSpec::new(family, m);
        for seed in 0..25u64 {
            let mut rng = StdRng::seed_from_u64(seed);
            let bits: Vec<bool> = (0..size).map(|_| rng.random::<bool>()).collect();
            let mut perm: Vec<usize> = (1..=size).collect();
            for i in (1..size).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }

            let mut relabeled = vec![false; size];
            for (i, &b) in bits.iter().enumerate() {
                relabeled[perm[i] - 1] = b;
            }

            let original =
                level_outcomes(&spec, &mut PaddedInput::new(bits.clone())).unwrap();
            let permuted =
                level_outcomes(&spec, &mut PaddedInput::new(relabeled)).unwrap();

            let mapped: BTreeMap<BasisIndex, f64> = original
                .branches
                .iter()
                .map(|b| (apply_permutation(b.outcome, &perm), b.probability))
                .collect();
            let direct: BTreeMap<BasisIndex, f64> = permuted
                .branches
                .iter()
                .map(|b| (b.outcome, b.probability))
                .collect();
            assert_eq!(
                mapped.keys().collect::<Vec<_>>(),
                direct.keys().collect::<Vec<_>>(),
                "{family:?} size={size} seed={seed}"
            );
            for (outcome, p) in &mapped {
                assert!((p - direct[outcome]).abs() < 1e-12);
            }
        }
    }
}

/// Padding equivalence, exhaustively to n = 12: the padded balanced
/// instance has the same answer as the original for every input and k.
#[test]
fn padding_equivalence_up_to_n12() {
    for n in 1..=12usize {
        for mask in 0u64..(1 << n) {
            let x: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let weight = mask.count_ones() as usize;
            for k in 0..=n {
                let (padded, m) = pad_for_exact(&x, k).unwrap();
                assert_eq!(padded.active_len(), 2 * m);
                assert_eq!(weight == k, padded.ones_among_active() == m);
                if k >= 1 {
                    let (padded, m) = pad_for_threshold(&x, k).unwrap();
                    assert_eq!(padded.active_len(), 2 * m + 1);
                    assert_eq!(weight >= k, padded.ones_among_active() > m);
                }
            }
        }
    }
}
