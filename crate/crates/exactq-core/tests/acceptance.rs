//! Acceptance suite: exhaustive exactness and budget certification for both
//! function families, isometry and closed-form certificates, the
//! deterministic baseline, the lower-bound restriction witnesses, and the
//! quantum-vs-deterministic gap table. One pass line is printed per
//! criterion; any violated check fails its test.

use exactq_core::algorithms::{
    build_u1, build_u2_exact, build_u2_maj, level_outcomes, run_full, AlgorithmSpec, Family,
};
use exactq_core::classical::{
    exact_lower_bound_witness, threshold_lower_bound_witness, SymmetricFunction,
};
use exactq_core::oracle::PaddedInput;
use exactq_core::verify::{
    check_closed_form, check_isometry, table_rows, verify_instance, FunctionFamily, VerifyConfig,
    VerifyMode,
};

fn pass(line: &str) {
    println!("[PASS] {line}");
}

fn bits_of(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// 1. Every branch of EXACT_k^n outputs the function value and no path
///    exceeds max(k, n−k) queries, exhaustively for n ≤ 10 and all k.
#[test]
fn criterion_1_exact_exactness_and_budget() {
    let config = VerifyConfig::default();
    let mut instances = 0;
    for n in 1..=10 {
        for k in 0..=n {
            let report =
                verify_instance(FunctionFamily::Exact, k, n, VerifyMode::Full, &config).unwrap();
            assert!(report.passed(), "{}", report.human_line());
            assert_eq!(
                report.max_queries_observed,
                FunctionFamily::Exact.budget(n, k),
                "worst-case queries must meet the budget exactly for EXACT_{k}^{n}"
            );
            assert!(report.worst_probability_sum_error <= 1e-10);
            instances += 1;
        }
    }
    pass(&format!(
        "criterion 1: EXACT exact on every branch within max(k, n-k) queries \
         (full sweep, n <= 10, {instances} instances)"
    ));
}

/// 2. The same sweep for Th_k^n with budget max(k, n−k+1), including the
///    majority diagonal MAJ_3, MAJ_5, MAJ_7, MAJ_9.
#[test]
fn criterion_2_threshold_exactness_and_budget() {
    let config = VerifyConfig::default();
    let mut instances = 0;
    for n in 1..=10 {
        for k in 0..=n {
            let report =
                verify_instance(FunctionFamily::Threshold, k, n, VerifyMode::Full, &config)
                    .unwrap();
            assert!(report.passed(), "{}", report.human_line());
            assert_eq!(
                report.max_queries_observed,
                FunctionFamily::Threshold.budget(n, k),
                "worst-case queries must meet the budget exactly for Th_{k}^{n}"
            );
            instances += 1;
        }
    }
    // the 2k = n±1 diagonal: MAJ_{2j+1} = Th_{j+1}^{2j+1} in j+1 queries
    for (n, k) in [(3, 2), (5, 3), (7, 4), (9, 5)] {
        let report =
            verify_instance(FunctionFamily::Threshold, k, n, VerifyMode::Full, &config).unwrap();
        assert!(report.passed());
        assert_eq!(report.budget, k as u32);
        assert_eq!(report.max_queries_observed, k as u32);
    }
    pass(&format!(
        "criterion 2: THRESHOLD exact on every branch within max(k, n-k+1) queries, \
         MAJ_3..MAJ_9 included (full sweep, n <= 10, {instances} instances)"
    ));
}

/// 3. The motivating instance: EXACT_2^4 is exact and its deepest path uses
///    exactly 2 queries.
#[test]
fn criterion_3_motivating_example() {
    let config = VerifyConfig::default();
    let report =
        verify_instance(FunctionFamily::Exact, 2, 4, VerifyMode::Full, &config).unwrap();
    assert!(report.passed(), "{}", report.human_line());
    assert_eq!(report.max_queries_observed, 2);

    // the literal branch trees, input by input
    let truth = SymmetricFunction::exact(2, 4);
    let mut deepest = 0;
    for mask in 0u64..16 {
        let x = bits_of(mask, 4);
        let expected = truth.evaluate(&x);
        let tree = run_full(&AlgorithmSpec::new(Family::Exact, 2), PaddedInput::new(x)).unwrap();
        let leaves = tree.leaves();
        assert!(leaves.iter().all(|l| l.answer == expected));
        assert!((tree.leaf_probability_total() - 1.0).abs() < 1e-10);
        deepest = deepest.max(tree.max_queries());
    }
    assert_eq!(deepest, 2);
    pass("criterion 3: EXACT_2^4 exact with exactly 2 queries on the deepest path");
}

/// 4. Isometry certificates: Gram residuals below 1e-12 for U1 up to level
///    size 24 and both U2 constructions up to m = 12.
#[test]
fn criterion_4_isometry_certificates() {
    for s in 1..=24 {
        let residual = check_isometry(&build_u1(s).unwrap());
        assert!(residual < 1e-12, "u1 s={s}: {residual:e}");
    }
    for m in 1..=12 {
        let residual = check_isometry(&build_u2_exact(m).unwrap());
        assert!(residual < 1e-12, "u2 exact m={m}: {residual:e}");
        let residual = check_isometry(&build_u2_maj(m).unwrap());
        assert!(residual < 1e-12, "u2 maj m={m}: {residual:e}");
    }
    pass("criterion 4: isometry residuals < 1e-12 (U1 s <= 24, U2 m <= 12)");
}

/// 5. Simulated post-U2 amplitudes match the closed-form states within
///    1e-12 for every weight class with m ≤ 8, and branch probabilities
///    reproduce the exact rationals within 1e-12.
#[test]
fn criterion_5_closed_form_state_match() {
    let mut classes = 0;
    for m in 1..=8 {
        for (family, size) in [(Family::Exact, 2 * m), (Family::Maj, 2 * m + 1)] {
            for t in 0..=size {
                let deviation = check_closed_form(family, m, t).unwrap();
                assert!(
                    deviation < 1e-12,
                    "{family:?} m={m} t={t}: amplitude deviation {deviation:e}"
                );
                let bits: Vec<bool> = (0..size).map(|i| i < t).collect();
                let mut input = PaddedInput::new(bits);
                let outcomes =
                    level_outcomes(&AlgorithmSpec::new(family, m), &mut input).unwrap();
                for branch in &outcomes.branches {
                    let exact = branch.exact_probability.as_f64();
                    assert!(
                        (branch.probability - exact).abs() < 1e-12,
                        "{family:?} m={m} t={t} outcome {}: p={} vs {}",
                        branch.outcome,
                        branch.probability,
                        branch.exact_probability
                    );
                }
                classes += 1;
            }
        }
    }
    pass(&format!(
        "criterion 5: closed-form amplitudes and exact rational probabilities \
         within 1e-12 ({classes} classes, m <= 8)"
    ));
}

/// 6. Symmetric-mode verification passes up to n = 20 and agrees with full
///    mode wherever both run (n ≤ 10).
#[test]
fn criterion_6_symmetric_mode_scaling_and_agreement() {
    let config = VerifyConfig::default();
    let mut instances = 0;
    for n in 1..=20 {
        for family in [FunctionFamily::Exact, FunctionFamily::Threshold] {
            for k in 0..=n {
                let report =
                    verify_instance(family, k, n, VerifyMode::Symmetric, &config).unwrap();
                assert!(report.passed(), "{}", report.human_line());
                assert_eq!(report.max_queries_observed, family.budget(n, k));
                instances += 1;
            }
        }
    }
    for n in 1..=10 {
        for family in [FunctionFamily::Exact, FunctionFamily::Threshold] {
            for k in 0..=n {
                let full = verify_instance(family, k, n, VerifyMode::Full, &config).unwrap();
                let sym = verify_instance(family, k, n, VerifyMode::Symmetric, &config).unwrap();
                assert_eq!(full.passed(), sym.passed(), "{family} k={k} n={n}");
                assert_eq!(full.max_queries_observed, sym.max_queries_observed);
                assert_eq!(full.budget, sym.budget);
            }
        }
    }
    pass(&format!(
        "criterion 6: symmetric mode passes to n = 20 ({instances} instances) \
         and agrees with full mode on n <= 10"
    ));
}

/// Exhaustive minimax search over all adaptive decision trees; the
/// independent oracle for the symmetric-function DP.
fn brute_force_depth(n: usize, f: &SymmetricFunction) -> usize {
    fn go(n: usize, queried: u32, values: u32, f: &SymmetricFunction) -> usize {
        let free: Vec<usize> = (0..n).filter(|i| queried >> i & 1 == 0).collect();
        let mut seen = [false, false];
        for completion in 0u32..(1 << free.len()) {
            let mut x = values;
            for (pos, &bit) in free.iter().enumerate() {
                if completion >> pos & 1 == 1 {
                    x |= 1 << bit;
                }
            }
            seen[f.value_at_weight(x.count_ones() as usize) as usize] = true;
        }
        if !(seen[0] && seen[1]) {
            return 0;
        }
        free.iter()
            .map(|&i| {
                1 + go(n, queried | 1 << i, values, f)
                    .max(go(n, queried | 1 << i, values | 1 << i, f))
            })
            .min()
            .expect("non-constant function has a free bit")
    }
    go(n, 0, 0, f)
}

/// 7. The deterministic baseline: D(EXACT_k^n) = D(Th_k^n) = n for n ≤ 20,
///    and the DP agrees with exhaustive decision-tree search on every
///    symmetric function of up to 4 bits.
#[test]
fn criterion_7_deterministic_baseline() {
    for n in 1..=20 {
        for k in 0..=n {
            assert_eq!(SymmetricFunction::exact(k, n).deterministic_complexity(), n);
            if k >= 1 {
                assert_eq!(
                    SymmetricFunction::threshold(k, n).deterministic_complexity(),
                    n
                );
            }
        }
    }
    let mut functions = 0;
    for n in 1..=4usize {
        for values in 0u32..(1 << (n + 1)) {
            let f = SymmetricFunction::new((0..=n).map(|t| values >> t & 1 == 1).collect());
            assert_eq!(
                f.deterministic_complexity(),
                brute_force_depth(n, &f),
                "n={n} values={values:b}"
            );
            functions += 1;
        }
    }
    // spot-check one level beyond the sweep
    let maj5 = SymmetricFunction::majority(5);
    assert_eq!(maj5.deterministic_complexity(), 5);
    assert_eq!(brute_force_depth(5, &maj5), 5);
    pass(&format!(
        "criterion 7: D = n for both families to n = 20; DP matches exhaustive \
         tree search on all {functions} symmetric functions with n <= 4 and on MAJ_5"
    ));
}

/// 8. Lower-bound witnesses: the all-ones restrictions reduce EXACT to
///    NOT-OR and THRESHOLD to OR, exhaustively for k ≤ n/2, n ≤ 14.
#[test]
fn criterion_8_lower_bound_witnesses() {
    let mut checks = 0;
    for n in 1..=14 {
        for k in 0..=n / 2 {
            assert!(
                exact_lower_bound_witness(k, n).unwrap(),
                "EXACT restriction failed at k={k} n={n}"
            );
            checks += 1;
            if k >= 1 {
                assert!(
                    threshold_lower_bound_witness(k, n).unwrap(),
                    "THRESHOLD restriction failed at k={k} n={n}"
                );
                checks += 1;
            }
        }
    }
    pass(&format!(
        "criterion 8: restriction identities (EXACT -> NOT-OR, THRESHOLD -> OR) \
         hold exhaustively for k <= n/2, n <= 14 ({checks} identities)"
    ));
}

/// 9. The gap table: at k = ⌈n/2⌉ the verified EXACT budget is ⌈n/2⌉
///    against D = n, and every row keeps D/2 ≤ quantum ≤ D.
#[test]
fn criterion_9_gap_table() {
    let rows = table_rows(20, &VerifyConfig::default()).unwrap();
    assert_eq!(rows.len(), 2 * (2..=21).sum::<usize>());
    for n in 1..=20usize {
        let k = n.div_ceil(2);
        let row = rows
            .iter()
            .find(|r| r.family == FunctionFamily::Exact && r.n == n && r.k == k)
            .unwrap();
        assert_eq!(row.quantum as usize, n.div_ceil(2));
        assert_eq!(row.deterministic, n);
    }
    for row in &rows {
        assert!(
            (row.quantum as usize) <= row.deterministic,
            "quantum exceeds deterministic at {row:?}"
        );
        assert!(
            2 * row.quantum as usize >= row.deterministic,
            "gap beyond a factor of 2 at {row:?}"
        );
    }
    pass(&format!(
        "criterion 9: verified budget = ceil(n/2) at k = ceil(n/2) against D = n \
         for n <= 20; all {} rows within the factor-2 envelope",
        rows.len()
    ));
}
