//! Whole-input-space certification: exactness on every measurement branch,
//! query budgets, isometry conditions, and closed-form state checks.
//!
//! Full mode sweeps all `2^n` inputs. Identical subtrees are shared: the
//! behaviour of a level depends only on the values of the bits still active
//! (in order), so subtree verdicts are memoized per remaining value
//! sequence. Every distinct subtree is still simulated and checked; only
//! re-verification of an already-certified subtree is skipped. This is what
//! makes padded instances (whose literal trees have over `(10!)²` leaves)
//! checkable at all.
//!
//! Symmetric mode goes one step further for large `n`: the algorithms treat
//! active indices symmetrically (the test suite exercises this relabeling
//! property directly), so each weight class `(ones, active size)` is checked
//! once against the exact rational branch probabilities and the recursion
//! descends over reachable child classes.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::algorithms::{
    build_level_isometries, build_u1, build_u2_exact, build_u2_maj, exact_budget,
    level_outcomes_prepared, simulate_level, threshold_budget, AlgorithmSpec, BranchAction,
    Family, LevelOutcomes, MajDiscard,
};
use crate::basis::BasisIndex;
use crate::classical::SymmetricFunction;
use crate::error::{Error, Result};
use crate::isometry::PartialIsometry;
use crate::oracle::{bits_to_string, PaddedInput};
use crate::rational::Ratio;
use crate::state::StateVector;

/// Simulated post-U2 norms may deviate from 1 by at most this much.
pub const NORM_TOLERANCE: f64 = 1e-11;
/// Recorded branch probabilities of one level must sum to 1 within this.
pub const PROB_SUM_TOLERANCE: f64 = 1e-10;
/// Simulated probabilities must match the exact rationals within this.
pub const RATIONAL_TOLERANCE: f64 = 1e-12;
/// Simulated amplitudes must match the closed-form state within this.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-12;

/// The Boolean function families the tool verifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionFamily {
    Exact,
    Threshold,
}

impl FunctionFamily {
    pub fn algorithm(self) -> Family {
        match self {
            FunctionFamily::Exact => Family::Exact,
            FunctionFamily::Threshold => Family::Maj,
        }
    }

    /// Truth-table value on inputs of the given weight.
    pub fn value(self, k: usize, weight: usize) -> bool {
        match self {
            FunctionFamily::Exact => weight == k,
            FunctionFamily::Threshold => weight >= k,
        }
    }

    pub fn budget(self, n: usize, k: usize) -> u32 {
        match self {
            FunctionFamily::Exact => exact_budget(n, k),
            FunctionFamily::Threshold => threshold_budget(n, k),
        }
    }
}

impl std::fmt::Display for FunctionFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FunctionFamily::Exact => write!(f, "exact"),
            FunctionFamily::Threshold => write!(f, "threshold"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Full,
    Symmetric,
}

impl std::fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyMode::Full => write!(f, "full"),
            VerifyMode::Symmetric => write!(f, "symmetric"),
        }
    }
}

/// Size caps for the two verification modes.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub full_cap: usize,
    pub symmetric_cap: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            full_cap: 10,
            symmetric_cap: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyStatus {
    Pass,
    Fail { witness: String },
}

/// Outcome of verifying one (family, k, n) instance.
///
/// In full mode `inputs_checked` counts concrete inputs and `leaves_checked`
/// counts leaves of the unfolded branch trees (shared subtrees verified
/// once). In symmetric mode `inputs_checked` counts distinct weight classes
/// visited and `leaves_checked` counts class-level leaf checks.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub family: FunctionFamily,
    pub k: usize,
    pub n: usize,
    pub mode: VerifyMode,
    pub inputs_checked: u64,
    pub leaves_checked: u64,
    pub max_queries_observed: u32,
    pub budget: u32,
    pub worst_norm_residual: f64,
    pub worst_probability_sum_error: f64,
    pub status: VerifyStatus,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == VerifyStatus::Pass
    }

    pub fn witness(&self) -> Option<&str> {
        match &self.status {
            VerifyStatus::Pass => None,
            VerifyStatus::Fail { witness } => Some(witness),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn human_line(&self) -> String {
        let verdict = match &self.status {
            VerifyStatus::Pass => "PASS".to_string(),
            VerifyStatus::Fail { witness } => format!("FAIL ({witness})"),
        };
        format!(
            "{} k={} n={} mode={}: {} inputs={} leaves={} max_queries={} budget={} \
             norm_residual={:.3e} prob_sum_error={:.3e}",
            self.family,
            self.k,
            self.n,
            self.mode,
            verdict,
            self.inputs_checked,
            self.leaves_checked,
            self.max_queries_observed,
            self.budget,
            self.worst_norm_residual,
            self.worst_probability_sum_error,
        )
    }
}

/// Verify one instance over its whole input space.
pub fn verify_instance(
    family: FunctionFamily,
    k: usize,
    n: usize,
    mode: VerifyMode,
    config: &VerifyConfig,
) -> Result<VerificationReport> {
    match family {
        FunctionFamily::Exact if k > n => return Err(Error::KOutOfRange { k, n }),
        FunctionFamily::Threshold if k > n + 1 => return Err(Error::KOutOfRange { k, n }),
        _ => {}
    }
    match mode {
        VerifyMode::Full => {
            // the input mask and packed value sequences both live in a u64
            let cap = config.full_cap.min(31);
            if n > cap {
                return Err(Error::CapExceeded {
                    n,
                    cap,
                    mode: "full".into(),
                });
            }
            Ok(verify_full(family, k, n))
        }
        VerifyMode::Symmetric => {
            if n > config.symmetric_cap {
                return Err(Error::CapExceeded {
                    n,
                    cap: config.symmetric_cap,
                    mode: "symmetric".into(),
                });
            }
            Ok(verify_symmetric(family, k, n))
        }
    }
}

/// Worst Gram-matrix residual of a constructed transformation:
/// `max(|⟨c_i,c_i⟩−1|, |⟨c_i,c_j⟩|)`.
pub fn check_isometry(v: &PartialIsometry) -> f64 {
    v.orthonormality_residual()
}

/// The closed-form post-U2 state, built directly from the signed input bits
/// (no isometry machinery), for comparison against the simulated state.
pub fn closed_form_level_state(
    family: Family,
    m: usize,
    input: &PaddedInput,
) -> Result<StateVector> {
    if m == 0 {
        return Err(Error::BaseLevel);
    }
    let spec = AlgorithmSpec::new(family, m);
    let s = spec.level_size();
    if input.active_len() != s {
        return Err(Error::LevelSizeMismatch {
            got: input.active_len(),
            expected: s,
        });
    }
    let signed: Vec<f64> = (1..=s)
        .map(|i| input.signed_bit(i))
        .collect::<Result<_>>()?;
    let total: f64 = signed.iter().sum();
    let mut out = StateVector::zeros(s);
    match family {
        Family::Exact => {
            let scale = 1.0 / (2.0 * m as f64);
            let amps = out.amplitudes_mut();
            amps[0] = total * scale;
            for i in 1..=s {
                for j in i + 1..=s {
                    let idx = BasisIndex::Pair(i, j).canonical_index(s)?;
                    amps[idx] = (signed[i - 1] - signed[j - 1]) * scale;
                }
            }
        }
        Family::Maj => {
            let denom = 2.0 * m as f64 * (s as f64).sqrt();
            let pair_scale = (2.0 * m as f64 - 1.0).sqrt() / denom;
            let amps = out.amplitudes_mut();
            for i in 1..=s {
                let idx = BasisIndex::Single(i).canonical_index(s)?;
                amps[idx] = (total - signed[i - 1]) / denom;
            }
            for i in 1..=s {
                for j in i + 1..=s {
                    let idx = BasisIndex::Pair(i, j).canonical_index(s)?;
                    amps[idx] = (signed[i - 1] - signed[j - 1]) * pair_scale;
                }
            }
        }
    }
    Ok(out)
}

/// Compare the simulated post-U2 state of the weight-`t` representative
/// input against the closed form. Returns the worst amplitude deviation.
pub fn check_closed_form(family: Family, m: usize, t: usize) -> Result<f64> {
    let spec = AlgorithmSpec::new(family, m);
    let s = spec.level_size();
    if t > s {
        return Err(Error::KOutOfRange { k: t, n: s });
    }
    let mut input = PaddedInput::new(representative_bits(t, s));
    let closed = closed_form_level_state(family, m, &input)?;
    let simulated = simulate_level(&spec, &mut input)?;
    let worst = simulated
        .amplitudes()
        .iter()
        .zip(closed.amplitudes())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(worst)
}

/// Class representatives put the ones first: `1^t 0^{s−t}`.
fn representative_bits(t: usize, s: usize) -> Vec<bool> {
    (0..s).map(|i| i < t).collect()
}

// ---------------------------------------------------------------------------
// Full mode
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct NodeFacts {
    value: bool,
    max_queries: u32,
    leaves: u64,
}

struct FullSweep {
    family: Family,
    memo: HashMap<(u64, u8), NodeFacts>,
    isometries: HashMap<usize, (PartialIsometry, PartialIsometry)>,
    worst_norm: f64,
    worst_prob_sum: f64,
}

impl FullSweep {
    fn new(family: Family) -> Self {
        FullSweep {
            family,
            memo: HashMap::new(),
            isometries: HashMap::new(),
            worst_norm: 0.0,
            worst_prob_sum: 0.0,
        }
    }

    fn run_level(
        &mut self,
        spec: &AlgorithmSpec,
        input: &mut PaddedInput,
    ) -> Result<LevelOutcomes> {
        let (u1, u2) = match self.isometries.entry(spec.m) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(build_level_isometries(spec)?)
            }
        };
        level_outcomes_prepared(spec, u1, u2, input, MajDiscard::SmallestOther)
    }

    /// Certify the subtree rooted at a level whose active bits carry these
    /// values. Returns the unique answer of all its leaves.
    fn facts(&mut self, bits: &[bool]) -> std::result::Result<NodeFacts, String> {
        let key = pack_bits(bits);
        if let Some(f) = self.memo.get(&key) {
            return Ok(*f);
        }
        let s = bits.len();
        let facts = if s == 0 {
            // EXACT base: answer 1 without a query
            NodeFacts {
                value: true,
                max_queries: 0,
                leaves: 1,
            }
        } else if self.family == Family::Maj && s == 1 {
            // MAJ base: one query reads the remaining bit
            NodeFacts {
                value: bits[0],
                max_queries: 1,
                leaves: 1,
            }
        } else {
            let m = match self.family {
                Family::Exact => s / 2,
                Family::Maj => (s - 1) / 2,
            };
            let mut input = PaddedInput::new(bits.to_vec());
            let outcomes = self
                .run_level(&AlgorithmSpec::new(self.family, m), &mut input)
                .map_err(|e| format!("active bits {}: {e}", bits_to_string(bits)))?;
            self.worst_norm = self.worst_norm.max(outcomes.norm_error);
            self.worst_prob_sum = self.worst_prob_sum.max(outcomes.probability_sum_error);
            if outcomes.norm_error > NORM_TOLERANCE {
                return Err(format!(
                    "norm residual {:.3e} at active bits {}",
                    outcomes.norm_error,
                    bits_to_string(bits)
                ));
            }
            if outcomes.probability_sum_error > PROB_SUM_TOLERANCE {
                return Err(format!(
                    "branch probabilities sum off by {:.3e} at active bits {}",
                    outcomes.probability_sum_error,
                    bits_to_string(bits)
                ));
            }
            let mut value: Option<bool> = None;
            let mut max_queries = 0u32;
            let mut leaves = 0u64;
            for branch in &outcomes.branches {
                let (answer, queries, count) = match branch.action {
                    BranchAction::Output(answer) => (answer, 1, 1),
                    BranchAction::Recurse { remove_locals } => {
                        let child_bits: Vec<bool> = bits
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| !remove_locals.contains(&(i + 1)))
                            .map(|(_, &b)| b)
                            .collect();
                        let child = self.facts(&child_bits)?;
                        (child.value, 1 + child.max_queries, child.leaves)
                    }
                };
                match value {
                    None => value = Some(answer),
                    Some(v) if v != answer => {
                        return Err(format!(
                            "leaves disagree under active bits {} (outcome {})",
                            bits_to_string(bits),
                            branch.outcome
                        ));
                    }
                    _ => {}
                }
                max_queries = max_queries.max(queries);
                leaves = leaves.saturating_add(count);
            }
            let value =
                value.ok_or_else(|| format!("no branches at active bits {}", bits_to_string(bits)))?;
            NodeFacts {
                value,
                max_queries,
                leaves,
            }
        };
        self.memo.insert(key, facts);
        Ok(facts)
    }
}

fn pack_bits(bits: &[bool]) -> (u64, u8) {
    assert!(bits.len() <= 64, "full-mode instances pack into 64 bits");
    let mut packed = 0u64;
    for (i, &b) in bits.iter().enumerate() {
        if b {
            packed |= 1 << i;
        }
    }
    (packed, bits.len() as u8)
}

fn verify_full(family: FunctionFamily, k: usize, n: usize) -> VerificationReport {
    let budget = family.budget(n, k);
    let mut report = VerificationReport {
        family,
        k,
        n,
        mode: VerifyMode::Full,
        inputs_checked: 0,
        leaves_checked: 0,
        max_queries_observed: 0,
        budget,
        worst_norm_residual: 0.0,
        worst_probability_sum_error: 0.0,
        status: VerifyStatus::Pass,
    };

    // Constant thresholds are answered at the dispatch layer with 0 queries.
    if family == FunctionFamily::Threshold && (k == 0 || k > n) {
        let answer = k == 0;
        for weight in 0..=n {
            if family.value(k, weight) != answer {
                report.status = VerifyStatus::Fail {
                    witness: format!("degenerate threshold disagrees at weight {weight}"),
                };
                return report;
            }
        }
        report.inputs_checked = 1u64 << n;
        report.leaves_checked = 1u64 << n;
        return report;
    }

    let mut sweep = FullSweep::new(family.algorithm());
    for mask in 0u64..(1u64 << n) {
        let x: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let weight = x.iter().filter(|&&b| b).count();
        let expected = family.value(k, weight);
        let padded = match family {
            FunctionFamily::Exact => crate::oracle::pad_for_exact(&x, k),
            FunctionFamily::Threshold => crate::oracle::pad_for_threshold(&x, k),
        };
        let (padded, _m) = match padded {
            Ok(p) => p,
            Err(e) => {
                report.status = VerifyStatus::Fail {
                    witness: format!("padding failed: {e}"),
                };
                break;
            }
        };
        match sweep.facts(&padded.active_bits()) {
            Ok(facts) => {
                if facts.value != expected {
                    report.status = VerifyStatus::Fail {
                        witness: format!(
                            "input {}: every leaf answers {} but f = {}",
                            bits_to_string(&x),
                            facts.value as u8,
                            expected as u8
                        ),
                    };
                    break;
                }
                report.inputs_checked += 1;
                report.leaves_checked = report.leaves_checked.saturating_add(facts.leaves);
                report.max_queries_observed = report.max_queries_observed.max(facts.max_queries);
            }
            Err(witness) => {
                report.status = VerifyStatus::Fail {
                    witness: format!("input {}: {witness}", bits_to_string(&x)),
                };
                break;
            }
        }
    }
    report.worst_norm_residual = sweep.worst_norm;
    report.worst_probability_sum_error = sweep.worst_prob_sum;
    if report.passed() && report.max_queries_observed > budget {
        report.status = VerifyStatus::Fail {
            witness: format!(
                "worst path uses {} queries, budget {}",
                report.max_queries_observed, budget
            ),
        };
    }
    report
}

// ---------------------------------------------------------------------------
// Symmetric mode
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct ClassFacts {
    value: bool,
    max_queries: u32,
}

struct ClassSweep {
    family: Family,
    memo: HashMap<(usize, usize), ClassFacts>,
    isometries: HashMap<usize, (PartialIsometry, PartialIsometry)>,
    classes_visited: u64,
    leaf_checks: u64,
    worst_norm: f64,
    worst_prob_sum: f64,
}

/// What a class-level branch is expected to look like.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum ExpectedKind {
    OutputZero,
    RecursePair,
    RecurseSingle,
}

impl ClassSweep {
    fn new(family: Family) -> Self {
        ClassSweep {
            family,
            memo: HashMap::new(),
            isometries: HashMap::new(),
            classes_visited: 0,
            leaf_checks: 0,
            worst_norm: 0.0,
            worst_prob_sum: 0.0,
        }
    }

    fn run_level(
        &mut self,
        spec: &AlgorithmSpec,
        input: &mut PaddedInput,
    ) -> Result<LevelOutcomes> {
        let (u1, u2) = match self.isometries.entry(spec.m) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(build_level_isometries(spec)?)
            }
        };
        level_outcomes_prepared(spec, u1, u2, input, MajDiscard::SmallestOther)
    }

    /// Verify the weight class of `t` ones at level `m`, memoized.
    ///
    /// EXACT classes are normalized under the ones/zeros swap `t ↔ s−t`: the
    /// closed-form rationals, the reachable child classes, and the function
    /// value `[t = m]` are all invariant under it (and full mode, which never
    /// normalizes, must agree wherever both run).
    fn class_facts(&mut self, m: usize, t: usize) -> std::result::Result<ClassFacts, String> {
        let s = AlgorithmSpec::new(self.family, m).level_size();
        debug_assert!(t <= s);
        let t = match self.family {
            Family::Exact => t.min(s - t),
            Family::Maj => t,
        };
        if let Some(f) = self.memo.get(&(m, t)) {
            return Ok(*f);
        }
        self.classes_visited += 1;
        let facts = self.check_class(m, t, s)?;
        self.memo.insert((m, t), facts);
        Ok(facts)
    }

    fn check_class(
        &mut self,
        m: usize,
        t: usize,
        s: usize,
    ) -> std::result::Result<ClassFacts, String> {
        let class_name = |m: usize, t: usize| format!("class (ones={t}, size={s}, m={m})");
        if m == 0 {
            return Ok(match self.family {
                Family::Exact => ClassFacts {
                    value: true,
                    max_queries: 0,
                },
                Family::Maj => ClassFacts {
                    value: t == 1,
                    max_queries: 1,
                },
            });
        }
        let value = match self.family {
            Family::Exact => t == m,
            Family::Maj => t > m,
        };

        // Independent expectation: which outcomes fire and their rationals.
        let expected = expected_class_branches(self.family, m, t, s);

        // Simulate the representative and compare branch by branch.
        let mut input = PaddedInput::new(representative_bits(t, s));
        let outcomes = self
            .run_level(&AlgorithmSpec::new(self.family, m), &mut input)
            .map_err(|e| format!("{}: {e}", class_name(m, t)))?;
        self.worst_norm = self.worst_norm.max(outcomes.norm_error);
        self.worst_prob_sum = self.worst_prob_sum.max(outcomes.probability_sum_error);
        if outcomes.norm_error > NORM_TOLERANCE {
            return Err(format!(
                "norm residual {:.3e} in {}",
                outcomes.norm_error,
                class_name(m, t)
            ));
        }
        if outcomes.probability_sum_error > PROB_SUM_TOLERANCE {
            return Err(format!(
                "probability sum off by {:.3e} in {}",
                outcomes.probability_sum_error,
                class_name(m, t)
            ));
        }
        if outcomes.branches.len() != expected.len() {
            return Err(format!(
                "{} fired {} branches, expected {}",
                class_name(m, t),
                outcomes.branches.len(),
                expected.len()
            ));
        }
        for branch in &outcomes.branches {
            let Some(&(ratio, kind)) = expected.get(&branch.outcome) else {
                return Err(format!(
                    "unexpected outcome {} in {}",
                    branch.outcome,
                    class_name(m, t)
                ));
            };
            if branch.exact_probability != ratio {
                return Err(format!(
                    "outcome {} reports rational {}, expected {} in {}",
                    branch.outcome,
                    branch.exact_probability,
                    ratio,
                    class_name(m, t)
                ));
            }
            if (branch.probability - ratio.as_f64()).abs() > RATIONAL_TOLERANCE {
                return Err(format!(
                    "outcome {} probability {:.17} deviates from {} in {}",
                    branch.outcome,
                    branch.probability,
                    ratio,
                    class_name(m, t)
                ));
            }
            let kind_ok = matches!(
                (kind, branch.action),
                (ExpectedKind::OutputZero, BranchAction::Output(false))
                    | (ExpectedKind::RecursePair, BranchAction::Recurse { .. })
                    | (ExpectedKind::RecurseSingle, BranchAction::Recurse { .. })
            );
            if !kind_ok {
                return Err(format!(
                    "outcome {} has unexpected action in {}",
                    branch.outcome,
                    class_name(m, t)
                ));
            }
            // Branch-action soundness on the representative.
            match branch.outcome {
                BasisIndex::Pair(i, j) => {
                    let (bi, bj) = (i <= t, j <= t);
                    if bi == bj {
                        return Err(format!(
                            "pair {} fired on equal bits in {}",
                            branch.outcome,
                            class_name(m, t)
                        ));
                    }
                }
                BasisIndex::Single(i) => {
                    // Ones minus zeros among the other bits is even and must
                    // be nonzero for the single to fire, so |margin| >= 2.
                    let t_other = t - usize::from(i <= t);
                    if t_other == m {
                        return Err(format!(
                            "single {} fired at margin 0 in {}",
                            branch.outcome,
                            class_name(m, t)
                        ));
                    }
                }
                BasisIndex::Blank => {
                    if t == m {
                        return Err(format!(
                            "blank fired on a balanced {}",
                            class_name(m, t)
                        ));
                    }
                }
            }
        }

        // Output branches must answer the class value; recursion covers every
        // child class reachable from any arrangement of this class.
        let mut max_queries = 0u32;
        for (outcome, (_, kind)) in &expected {
            if *kind == ExpectedKind::OutputZero {
                if value {
                    return Err(format!(
                        "outcome {} outputs 0 on a true {}",
                        outcome,
                        class_name(m, t)
                    ));
                }
                self.leaf_checks += 1;
                max_queries = max_queries.max(1);
            }
        }
        for child_t in child_classes(self.family, m, t, s) {
            let child = self.class_facts(m - 1, child_t)?;
            if child.value != value {
                return Err(format!(
                    "{} recurses into a child of different value (child ones={child_t})",
                    class_name(m, t)
                ));
            }
            max_queries = max_queries.max(1 + child.max_queries);
        }
        Ok(ClassFacts { value, max_queries })
    }
}

/// The branches a weight class must produce on its representative input,
/// with their exact rational probabilities.
fn expected_class_branches(
    family: Family,
    m: usize,
    t: usize,
    s: usize,
) -> BTreeMap<BasisIndex, (Ratio, ExpectedKind)> {
    let mut expected = BTreeMap::new();
    match family {
        Family::Exact => {
            if t != m {
                let d = (s as i64 - 2 * t as i64).unsigned_abs();
                expected.insert(
                    BasisIndex::Blank,
                    (
                        Ratio::new(d * d, (s * s) as u64),
                        ExpectedKind::OutputZero,
                    ),
                );
            }
            for i in 1..=t {
                for j in t + 1..=s {
                    expected.insert(
                        BasisIndex::Pair(i, j),
                        (Ratio::new(1, (m * m) as u64), ExpectedKind::RecursePair),
                    );
                }
            }
        }
        Family::Maj => {
            let den = (4 * m * m * (2 * m + 1)) as u64;
            for i in 1..=s {
                let t_other = t - usize::from(i <= t);
                if t_other != m {
                    let diff = 2 * (m as i64 - t_other as i64);
                    expected.insert(
                        BasisIndex::Single(i),
                        (
                            Ratio::new((diff * diff) as u64, den),
                            ExpectedKind::RecurseSingle,
                        ),
                    );
                }
            }
            for i in 1..=t {
                for j in t + 1..=s {
                    expected.insert(
                        BasisIndex::Pair(i, j),
                        (
                            Ratio::new((4 * (2 * m - 1)) as u64, den),
                            ExpectedKind::RecursePair,
                        ),
                    );
                }
            }
        }
    }
    expected
}

/// Every child weight class reachable from some arrangement of this class.
fn child_classes(family: Family, m: usize, t: usize, s: usize) -> BTreeSet<usize> {
    let mut kids = BTreeSet::new();
    if t > 0 && t < s {
        // a pair removes one 1 and one 0
        kids.insert(t - 1);
    }
    if family == Family::Maj {
        for discarded_one in [true, false] {
            let a = usize::from(discarded_one);
            let available = if discarded_one { t } else { s - t };
            if available == 0 {
                continue;
            }
            let t_other = t - a;
            if t_other == m {
                continue; // the single outcome has amplitude zero
            }
            // the arbitrary partner can be a 1 or a 0 when one remains
            if t_other >= 1 {
                kids.insert(t - a - 1);
            }
            if (s - 1) - t_other >= 1 {
                kids.insert(t - a);
            }
        }
    }
    kids
}

fn verify_symmetric(family: FunctionFamily, k: usize, n: usize) -> VerificationReport {
    let budget = family.budget(n, k);
    let mut report = VerificationReport {
        family,
        k,
        n,
        mode: VerifyMode::Symmetric,
        inputs_checked: 0,
        leaves_checked: 0,
        max_queries_observed: 0,
        budget,
        worst_norm_residual: 0.0,
        worst_probability_sum_error: 0.0,
        status: VerifyStatus::Pass,
    };

    if family == FunctionFamily::Threshold && (k == 0 || k > n) {
        let answer = k == 0;
        for weight in 0..=n {
            if family.value(k, weight) != answer {
                report.status = VerifyStatus::Fail {
                    witness: format!("degenerate threshold disagrees at weight {weight}"),
                };
                return report;
            }
        }
        report.inputs_checked = n as u64 + 1;
        report.leaves_checked = n as u64 + 1;
        return report;
    }

    let (pad_ones, m) = match family {
        FunctionFamily::Exact => {
            if 2 * k < n {
                (n - 2 * k, n - k)
            } else {
                (0, k)
            }
        }
        FunctionFamily::Threshold => {
            if 2 * k <= n {
                (n - 2 * k + 1, n - k)
            } else {
                (0, k - 1)
            }
        }
    };

    let mut sweep = ClassSweep::new(family.algorithm());
    for weight in 0..=n {
        let expected = family.value(k, weight);
        match sweep.class_facts(m, weight + pad_ones) {
            Ok(facts) => {
                if facts.value != expected {
                    report.status = VerifyStatus::Fail {
                        witness: format!(
                            "weight {weight}: every leaf answers {} but f = {}",
                            facts.value as u8, expected as u8
                        ),
                    };
                    break;
                }
                report.max_queries_observed = report.max_queries_observed.max(facts.max_queries);
            }
            Err(witness) => {
                report.status = VerifyStatus::Fail { witness };
                break;
            }
        }
    }
    report.inputs_checked = sweep.classes_visited;
    report.leaves_checked = sweep.leaf_checks;
    report.worst_norm_residual = sweep.worst_norm;
    report.worst_probability_sum_error = sweep.worst_prob_sum;
    if report.passed() && report.max_queries_observed > budget {
        report.status = VerifyStatus::Fail {
            witness: format!(
                "worst path uses {} queries, budget {}",
                report.max_queries_observed, budget
            ),
        };
    }
    report
}

// ---------------------------------------------------------------------------
// Gap table
// ---------------------------------------------------------------------------

/// One row of the quantum-vs-deterministic table. The quantum column is the
/// verified worst-case query count, not the formula; the formula is asserted
/// against it when the table is built.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub family: FunctionFamily,
    pub k: usize,
    pub n: usize,
    pub quantum: u32,
    pub deterministic: usize,
}

/// Build the table for every (family, k, n) with `n ≤ max_n`, running
/// symmetric verification for each row.
pub fn table_rows(max_n: usize, config: &VerifyConfig) -> Result<Vec<TableRow>> {
    if max_n > config.symmetric_cap {
        return Err(Error::CapExceeded {
            n: max_n,
            cap: config.symmetric_cap,
            mode: "symmetric".into(),
        });
    }
    let mut rows = Vec::new();
    for n in 1..=max_n {
        for family in [FunctionFamily::Exact, FunctionFamily::Threshold] {
            for k in 0..=n {
                let report = verify_instance(family, k, n, VerifyMode::Symmetric, config)?;
                if !report.passed() {
                    return Err(Error::VerificationFailed(
                        report.witness().unwrap_or("unknown").to_string(),
                    ));
                }
                let formula = family.budget(n, k);
                if report.max_queries_observed != formula {
                    return Err(Error::VerificationFailed(format!(
                        "{family} k={k} n={n}: verified budget {} differs from formula {}",
                        report.max_queries_observed, formula
                    )));
                }
                let f = match family {
                    FunctionFamily::Exact => SymmetricFunction::exact(k, n),
                    FunctionFamily::Threshold => SymmetricFunction::threshold(k, n),
                };
                rows.push(TableRow {
                    family,
                    k,
                    n,
                    quantum: report.max_queries_observed,
                    deterministic: f.deterministic_complexity(),
                });
            }
        }
    }
    Ok(rows)
}

/// Convenience: residuals of the constructed transformations for a family
/// at level `m` (`u1` is checked at the level size implied by `m`).
pub fn isometry_residuals(family: Family, m: usize) -> Result<(f64, f64)> {
    let spec = AlgorithmSpec::new(family, m);
    if m == 0 {
        return Err(Error::BaseLevel);
    }
    let u1 = build_u1(spec.level_size())?;
    let u2 = match family {
        Family::Exact => build_u2_exact(m)?,
        Family::Maj => build_u2_maj(m)?,
    };
    Ok((check_isometry(&u1), check_isometry(&u2)))
}
