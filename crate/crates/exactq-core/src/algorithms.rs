//! The recursive query algorithms for EXACT and MAJORITY: construction of
//! the two level transformations, single-level execution, exhaustive
//! branching over measurement outcomes, and seeded sampling of one branch.
//!
//! One level of either algorithm runs `U2 · Q · U1` on the blank state and
//! measures. For EXACT over `2m` active bits the blank outcome decides the
//! answer is 0 and a pair outcome `|i,j⟩` certifies `x_i ≠ x_j`, so the pair
//! is removed and the level recurses on `2m−2` bits. MAJORITY over `2m+1`
//! bits never decides early: a single outcome `|i⟩` allows discarding `x_i`
//! together with one arbitrary other bit, a pair outcome is removed as in
//! EXACT, and the base level reads the one remaining bit with a query.

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use crate::basis::{basis_dim, BasisIndex};
use crate::error::{Error, Result};
use crate::isometry::PartialIsometry;
use crate::oracle::{pad_for_exact, pad_for_threshold, PaddedInput};
use crate::rational::Ratio;
use crate::state::StateVector;

/// A measurement outcome is recorded iff its squared amplitude exceeds this.
pub const AMPLITUDE_FLOOR: f64 = 1e-18;
/// Amplitudes the closed form says are exactly zero must stay below this.
pub const ZERO_AMPLITUDE_TOLERANCE: f64 = 1e-12;

/// The two algorithm families, named by their level semantics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Decides whether exactly half of the active bits are 1; level size `2m`.
    Exact,
    /// Decides the majority value of the active bits; level size `2m+1`.
    Maj,
}

/// One recursion level of a family, parameterized by `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgorithmSpec {
    pub family: Family,
    pub m: usize,
}

impl AlgorithmSpec {
    pub fn new(family: Family, m: usize) -> Self {
        AlgorithmSpec { family, m }
    }

    /// Number of active inputs at this level.
    pub fn level_size(&self) -> usize {
        match self.family {
            Family::Exact => 2 * self.m,
            Family::Maj => 2 * self.m + 1,
        }
    }

    /// The level entered after removing two inputs, if this is not the base.
    pub fn child(&self) -> Option<AlgorithmSpec> {
        (self.m > 0).then(|| AlgorithmSpec::new(self.family, self.m - 1))
    }
}

/// First transformation: maps the blank state to the even superposition of
/// all single states.
pub fn build_u1(level_size: usize) -> Result<PartialIsometry> {
    if level_size == 0 {
        return Err(Error::EmptyLevel);
    }
    let amp = 1.0 / (level_size as f64).sqrt();
    let mut column = vec![0.0; basis_dim(level_size)];
    for i in 1..=level_size {
        column[BasisIndex::Single(i).canonical_index(level_size)?] = amp;
    }
    PartialIsometry::new(level_size, vec![BasisIndex::Blank], vec![column])
}

/// Second transformation for EXACT at level `m ≥ 1` (size `s = 2m`):
///
/// `U2|i⟩ = Σ_{j>i} |i,j⟩/√s − Σ_{j<i} |j,i⟩/√s + |0⟩/√s`
pub fn build_u2_exact(m: usize) -> Result<PartialIsometry> {
    if m == 0 {
        return Err(Error::BaseLevel);
    }
    let s = 2 * m;
    let amp = 1.0 / (s as f64).sqrt();
    let dim = basis_dim(s);
    let mut sources = Vec::with_capacity(s);
    let mut columns = Vec::with_capacity(s);
    for i in 1..=s {
        let mut column = vec![0.0; dim];
        column[0] = amp;
        for j in i + 1..=s {
            column[BasisIndex::Pair(i, j).canonical_index(s)?] = amp;
        }
        for j in 1..i {
            column[BasisIndex::Pair(j, i).canonical_index(s)?] = -amp;
        }
        sources.push(BasisIndex::Single(i));
        columns.push(column);
    }
    PartialIsometry::new(s, sources, columns)
}

/// Second transformation for MAJORITY at level `m ≥ 1` (size `s = 2m+1`):
///
/// `U2|i⟩ = Σ_{j>i} √(2m−1)/(2m) |i,j⟩ − Σ_{j<i} √(2m−1)/(2m) |j,i⟩
///          + Σ_{j≠i} 1/(2m) |j⟩`
pub fn build_u2_maj(m: usize) -> Result<PartialIsometry> {
    if m == 0 {
        return Err(Error::BaseLevel);
    }
    let s = 2 * m + 1;
    let pair_amp = (2.0 * m as f64 - 1.0).sqrt() / (2.0 * m as f64);
    let single_amp = 1.0 / (2.0 * m as f64);
    let dim = basis_dim(s);
    let mut sources = Vec::with_capacity(s);
    let mut columns = Vec::with_capacity(s);
    for i in 1..=s {
        let mut column = vec![0.0; dim];
        for j in i + 1..=s {
            column[BasisIndex::Pair(i, j).canonical_index(s)?] = pair_amp;
        }
        for j in 1..i {
            column[BasisIndex::Pair(j, i).canonical_index(s)?] = -pair_amp;
        }
        for j in 1..=s {
            if j != i {
                column[BasisIndex::Single(j).canonical_index(s)?] = single_amp;
            }
        }
        sources.push(BasisIndex::Single(i));
        columns.push(column);
    }
    PartialIsometry::new(s, sources, columns)
}

/// Which other bit a MAJORITY single outcome discards along with `x_i`.
/// Correctness does not depend on the choice; the default keeps traces
/// reproducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MajDiscard {
    SmallestOther,
    LargestOther,
}

impl MajDiscard {
    fn partner(self, i: usize, level_size: usize) -> usize {
        match self {
            MajDiscard::SmallestOther => {
                if i == 1 {
                    2
                } else {
                    1
                }
            }
            MajDiscard::LargestOther => {
                if i == level_size {
                    level_size - 1
                } else {
                    level_size
                }
            }
        }
    }
}

/// What a measured outcome leads to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchAction {
    /// The algorithm stops and outputs this bit.
    Output(bool),
    /// The algorithm removes these two level-local indices and recurses.
    Recurse { remove_locals: [usize; 2] },
}

/// One measurement outcome of a level with its probability and action.
#[derive(Clone, Debug)]
pub struct BranchOutcome {
    pub outcome: BasisIndex,
    pub probability: f64,
    /// The probability as the exact rational the closed form predicts.
    pub exact_probability: Ratio,
    pub action: BranchAction,
}

/// All outcomes of one level, plus the level's numeric health.
#[derive(Clone, Debug)]
pub struct LevelOutcomes {
    pub level_size: usize,
    pub branches: Vec<BranchOutcome>,
    /// `|‖ψ‖ − 1|` of the simulated post-U2 state.
    pub norm_error: f64,
    /// `|Σ p − 1|` over the recorded branches.
    pub probability_sum_error: f64,
}

/// Both transformations of one level, built and validated together.
/// Sweeps that simulate many inputs at the same level size construct these
/// once and reuse them.
pub fn build_level_isometries(
    spec: &AlgorithmSpec,
) -> Result<(PartialIsometry, PartialIsometry)> {
    if spec.m == 0 {
        return Err(Error::BaseLevel);
    }
    let u1 = build_u1(spec.level_size())?;
    let u2 = match spec.family {
        Family::Exact => build_u2_exact(spec.m)?,
        Family::Maj => build_u2_maj(spec.m)?,
    };
    Ok((u1, u2))
}

/// Run `U2 · Q · U1` on the blank state of one level. Increments the query
/// counter once.
pub fn simulate_level(spec: &AlgorithmSpec, input: &mut PaddedInput) -> Result<StateVector> {
    let (u1, u2) = build_level_isometries(spec)?;
    simulate_level_prepared(&u1, &u2, input)
}

/// As [`simulate_level`], with the level transformations already built.
pub fn simulate_level_prepared(
    u1: &PartialIsometry,
    u2: &PartialIsometry,
    input: &mut PaddedInput,
) -> Result<StateVector> {
    let s = u1.level_size();
    if input.active_len() != s {
        return Err(Error::LevelSizeMismatch {
            got: input.active_len(),
            expected: s,
        });
    }
    let prepared = u1.apply(&StateVector::blank(s))?;
    let queried = input.apply_query(&prepared)?;
    u2.apply(&queried)
}

/// Measure one level exhaustively: every basis state with squared amplitude
/// above [`AMPLITUDE_FLOOR`] becomes a branch. Amplitudes on states without a
/// defined action, and dust above [`ZERO_AMPLITUDE_TOLERANCE`] on states the
/// closed form zeroes out, are implementation bugs and are rejected.
pub fn level_outcomes(spec: &AlgorithmSpec, input: &mut PaddedInput) -> Result<LevelOutcomes> {
    level_outcomes_with_discard(spec, input, MajDiscard::SmallestOther)
}

pub fn level_outcomes_with_discard(
    spec: &AlgorithmSpec,
    input: &mut PaddedInput,
    discard: MajDiscard,
) -> Result<LevelOutcomes> {
    let (u1, u2) = build_level_isometries(spec)?;
    level_outcomes_prepared(spec, &u1, &u2, input, discard)
}

/// As [`level_outcomes_with_discard`], with the transformations prebuilt.
pub fn level_outcomes_prepared(
    spec: &AlgorithmSpec,
    u1: &PartialIsometry,
    u2: &PartialIsometry,
    input: &mut PaddedInput,
    discard: MajDiscard,
) -> Result<LevelOutcomes> {
    let s = spec.level_size();
    let ones = input.ones_among_active();
    let psi = simulate_level_prepared(u1, u2, input)?;
    let norm_error = (psi.norm() - 1.0).abs();

    let mut branches = Vec::new();
    let mut probability_sum = 0.0;
    for (state, amplitude) in psi.iter() {
        let probability = amplitude * amplitude;
        if probability <= AMPLITUDE_FLOOR {
            if amplitude.abs() >= ZERO_AMPLITUDE_TOLERANCE {
                return Err(Error::UnexpectedAmplitude {
                    state: state.to_string(),
                    amplitude,
                });
            }
            continue;
        }
        let action = match (spec.family, state) {
            (Family::Exact, BasisIndex::Blank) => BranchAction::Output(false),
            (Family::Exact, BasisIndex::Pair(i, j)) | (Family::Maj, BasisIndex::Pair(i, j)) => {
                BranchAction::Recurse {
                    remove_locals: [i, j],
                }
            }
            (Family::Maj, BasisIndex::Single(i)) => {
                let partner = discard.partner(i, s);
                BranchAction::Recurse {
                    remove_locals: [i.min(partner), i.max(partner)],
                }
            }
            _ => {
                return Err(Error::UnexpectedAmplitude {
                    state: state.to_string(),
                    amplitude,
                })
            }
        };
        let exact_probability = exact_branch_probability(spec, ones, state, input)?;
        probability_sum += probability;
        branches.push(BranchOutcome {
            outcome: state,
            probability,
            exact_probability,
            action,
        });
    }
    Ok(LevelOutcomes {
        level_size: s,
        branches,
        norm_error,
        probability_sum_error: (probability_sum - 1.0).abs(),
    })
}

/// The closed-form probability of a measured outcome, as a reduced fraction.
///
/// With `t` ones among `s = 2m` active bits, EXACT yields the blank with
/// probability `(s−2t)²/s²` and each unequal pair with probability `1/m²`.
/// MAJORITY over `s = 2m+1` bits yields `|i⟩` with probability
/// `(2m − 2·t_{−i})² / ((2m)²(2m+1))` where `t_{−i}` counts ones among the
/// other bits, and each unequal pair with probability `4(2m−1)/((2m)²(2m+1))`.
fn exact_branch_probability(
    spec: &AlgorithmSpec,
    ones: usize,
    state: BasisIndex,
    input: &PaddedInput,
) -> Result<Ratio> {
    let m = spec.m as i64;
    let t = ones as i64;
    Ok(match (spec.family, state) {
        (Family::Exact, BasisIndex::Blank) => {
            let s = 2 * m;
            Ratio::new(((s - 2 * t) * (s - 2 * t)) as u64, (s * s) as u64)
        }
        (Family::Exact, BasisIndex::Pair(..)) => Ratio::new(1, (m * m) as u64),
        (Family::Maj, BasisIndex::Single(i)) => {
            let t_other = t - i64::from(input.bit(i)?);
            let num = 4 * (m - t_other) * (m - t_other);
            let den = 4 * m * m * (2 * m + 1);
            Ratio::new(num as u64, den as u64)
        }
        (Family::Maj, BasisIndex::Pair(..)) => {
            Ratio::new((4 * (2 * m - 1)) as u64, (4 * m * m * (2 * m + 1)) as u64)
        }
        _ => {
            return Err(Error::UnexpectedAmplitude {
                state: state.to_string(),
                amplitude: f64::NAN,
            })
        }
    })
}

/// Read the one remaining bit with a single query: prepare
/// `(|0⟩ + |1⟩)/√2`, query, and compare signs.
pub fn read_remaining_bit(input: &mut PaddedInput) -> Result<bool> {
    if input.active_len() != 1 {
        return Err(Error::LevelSizeMismatch {
            got: input.active_len(),
            expected: 1,
        });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = StateVector::from_amplitudes(1, vec![h, h])?;
    let queried = input.apply_query(&psi)?;
    Ok(queried.amplitude(BasisIndex::Single(1))? < 0.0)
}

/// A node of the exhaustive branch tree.
#[derive(Clone, Debug)]
pub enum BranchNode {
    /// The algorithm has produced an answer after `queries` queries.
    Leaf { answer: bool, queries: u32 },
    /// A measured level with all its outcome branches.
    Level(LevelNode),
}

#[derive(Clone, Debug)]
pub struct LevelNode {
    pub m: usize,
    pub level_size: usize,
    pub norm_error: f64,
    pub probability_sum_error: f64,
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub outcome: BasisIndex,
    pub probability: f64,
    pub exact_probability: Ratio,
    /// Global input positions removed by this branch; empty for outputs.
    pub removed_global: Vec<usize>,
    pub node: BranchNode,
}

/// The full tree of measurement outcomes of one run.
#[derive(Clone, Debug)]
pub struct BranchTree {
    pub family: Family,
    pub root: BranchNode,
}

/// One leaf of the unfolded tree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeafSummary {
    pub answer: bool,
    /// Product of the branch probabilities along the path.
    pub probability: f64,
    pub queries: u32,
}

impl BranchTree {
    /// Unfold every root-to-leaf path. Exponential in the instance size;
    /// intended for small instances and tests.
    pub fn leaves(&self) -> Vec<LeafSummary> {
        let mut out = Vec::new();
        collect_leaves(&self.root, 1.0, &mut out);
        out
    }

    /// The worst-case number of queries over all paths.
    pub fn max_queries(&self) -> u32 {
        max_queries(&self.root)
    }

    /// Total probability mass reaching the leaves.
    pub fn leaf_probability_total(&self) -> f64 {
        self.leaves().iter().map(|l| l.probability).sum()
    }
}

fn collect_leaves(node: &BranchNode, weight: f64, out: &mut Vec<LeafSummary>) {
    match node {
        BranchNode::Leaf { answer, queries } => out.push(LeafSummary {
            answer: *answer,
            probability: weight,
            queries: *queries,
        }),
        BranchNode::Level(level) => {
            for branch in &level.branches {
                collect_leaves(&branch.node, weight * branch.probability, out);
            }
        }
    }
}

fn max_queries(node: &BranchNode) -> u32 {
    match node {
        BranchNode::Leaf { queries, .. } => *queries,
        BranchNode::Level(level) => level
            .branches
            .iter()
            .map(|b| max_queries(&b.node))
            .max()
            .unwrap_or(0),
    }
}

/// Enumerate every reachable measurement branch of the recursion.
pub fn run_full(spec: &AlgorithmSpec, input: PaddedInput) -> Result<BranchTree> {
    run_full_with_discard(spec, input, MajDiscard::SmallestOther)
}

pub fn run_full_with_discard(
    spec: &AlgorithmSpec,
    input: PaddedInput,
    discard: MajDiscard,
) -> Result<BranchTree> {
    Ok(BranchTree {
        family: spec.family,
        root: full_node(spec, input, discard)?,
    })
}

fn full_node(spec: &AlgorithmSpec, mut input: PaddedInput, discard: MajDiscard) -> Result<BranchNode> {
    if spec.m == 0 {
        return base_leaf(spec, &mut input);
    }
    let outcomes = level_outcomes_with_discard(spec, &mut input, discard)?;
    let child_spec = spec.child().expect("m >= 1");
    let mut branches = Vec::with_capacity(outcomes.branches.len());
    for outcome in outcomes.branches {
        let branch = match outcome.action {
            BranchAction::Output(answer) => Branch {
                outcome: outcome.outcome,
                probability: outcome.probability,
                exact_probability: outcome.exact_probability,
                removed_global: Vec::new(),
                node: BranchNode::Leaf {
                    answer,
                    queries: input.queries_used(),
                },
            },
            BranchAction::Recurse { remove_locals } => {
                let removed_global = remove_locals
                    .iter()
                    .map(|&l| input.active_indices()[l - 1])
                    .collect();
                let child_input = input.remove_indices(&remove_locals)?;
                Branch {
                    outcome: outcome.outcome,
                    probability: outcome.probability,
                    exact_probability: outcome.exact_probability,
                    removed_global,
                    node: full_node(&child_spec, child_input, discard)?,
                }
            }
        };
        branches.push(branch);
    }
    Ok(BranchNode::Level(LevelNode {
        m: spec.m,
        level_size: outcomes.level_size,
        norm_error: outcomes.norm_error,
        probability_sum_error: outcomes.probability_sum_error,
        branches,
    }))
}

fn base_leaf(spec: &AlgorithmSpec, input: &mut PaddedInput) -> Result<BranchNode> {
    let answer = match spec.family {
        // EXACT on zero bits holds vacuously: output 1 without a query.
        Family::Exact => true,
        Family::Maj => read_remaining_bit(input)?,
    };
    Ok(BranchNode::Leaf {
        answer,
        queries: input.queries_used(),
    })
}

/// One measured level of a sampled run.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LevelRecord {
    #[serde(rename = "size")]
    pub level_size: usize,
    pub outcome: BasisIndex,
    pub probability: f64,
    #[serde(rename = "p_exact")]
    pub exact_probability: Ratio,
    #[serde(rename = "removed")]
    pub removed_global: Vec<usize>,
}

/// The path taken by one sampled run of the recursion.
#[derive(Clone, Debug)]
pub struct RunTrace {
    pub levels: Vec<LevelRecord>,
    pub answer: bool,
    pub queries: u32,
}

/// Sample one measurement branch per level, proportionally to probability,
/// using a deterministic seeded generator. The same seed and input always
/// produce the same trace.
pub fn run_sampled(spec: &AlgorithmSpec, input: PaddedInput, seed: u64) -> Result<RunTrace> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut levels = Vec::new();
    let mut current = *spec;
    let mut input = input;
    loop {
        if current.m == 0 {
            let node = base_leaf(&current, &mut input)?;
            let BranchNode::Leaf { answer, queries } = node else {
                unreachable!("base level yields a leaf");
            };
            if current.family == Family::Maj {
                levels.push(LevelRecord {
                    level_size: 1,
                    outcome: BasisIndex::Single(1),
                    probability: 1.0,
                    exact_probability: Ratio::one(),
                    removed_global: vec![input.active_indices()[0]],
                });
            }
            return Ok(RunTrace {
                levels,
                answer,
                queries,
            });
        }
        let outcomes = level_outcomes(&current, &mut input)?;
        let chosen = sample_branch(&outcomes.branches, rng.random::<f64>());
        let outcome = &outcomes.branches[chosen];
        match outcome.action {
            BranchAction::Output(answer) => {
                levels.push(LevelRecord {
                    level_size: outcomes.level_size,
                    outcome: outcome.outcome,
                    probability: outcome.probability,
                    exact_probability: outcome.exact_probability,
                    removed_global: Vec::new(),
                });
                return Ok(RunTrace {
                    levels,
                    answer,
                    queries: input.queries_used(),
                });
            }
            BranchAction::Recurse { remove_locals } => {
                let removed_global: Vec<usize> = remove_locals
                    .iter()
                    .map(|&l| input.active_indices()[l - 1])
                    .collect();
                levels.push(LevelRecord {
                    level_size: outcomes.level_size,
                    outcome: outcome.outcome,
                    probability: outcome.probability,
                    exact_probability: outcome.exact_probability,
                    removed_global,
                });
                input = input.remove_indices(&remove_locals)?;
                current = current.child().expect("m >= 1");
            }
        }
    }
}

fn sample_branch(branches: &[BranchOutcome], u: f64) -> usize {
    let mut cumulative = 0.0;
    for (i, branch) in branches.iter().enumerate() {
        cumulative += branch.probability;
        if u < cumulative {
            return i;
        }
    }
    branches.len() - 1
}

/// The worst-case query budget for EXACT_k^n: `max(k, n−k)`.
pub fn exact_budget(n: usize, k: usize) -> u32 {
    k.max(n - k) as u32
}

/// The worst-case query budget for Th_k^n: `max(k, n−k+1)` in the proper
/// range, 0 for the constant cases `k = 0` and `k > n`.
pub fn threshold_budget(n: usize, k: usize) -> u32 {
    if k == 0 || k > n {
        0
    } else {
        k.max(n - k + 1) as u32
    }
}

/// Pad an EXACT_k^n instance and sample one branch path. Returns the trace
/// and the query budget `max(k, n−k)`.
pub fn trace_exact(x: &[bool], k: usize, seed: u64) -> Result<(RunTrace, u32)> {
    let (input, m) = pad_for_exact(x, k)?;
    let trace = run_sampled(&AlgorithmSpec::new(Family::Exact, m), input, seed)?;
    Ok((trace, exact_budget(x.len(), k)))
}

/// Pad a Th_k^n instance via the majority reduction and sample one branch
/// path. The constant cases `k = 0` and `k = n+1` are answered directly
/// with zero queries and an empty trace.
pub fn trace_threshold(x: &[bool], k: usize, seed: u64) -> Result<(RunTrace, u32)> {
    let n = x.len();
    if k == 0 || k == n + 1 {
        return Ok((
            RunTrace {
                levels: Vec::new(),
                answer: k == 0,
                queries: 0,
            },
            0,
        ));
    }
    if k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let (input, m) = pad_for_threshold(x, k)?;
    let trace = run_sampled(&AlgorithmSpec::new(Family::Maj, m), input, seed)?;
    Ok((trace, threshold_budget(n, k)))
}

/// Decide EXACT_k^n. Every branch of an exact algorithm agrees, so one
/// sampled path is authoritative. Returns the answer and the budget.
pub fn solve_exact(x: &[bool], k: usize) -> Result<(bool, u32)> {
    let (trace, budget) = trace_exact(x, k, 0)?;
    Ok((trace.answer, budget))
}

/// Decide Th_k^n. Returns the answer and the budget.
pub fn solve_threshold(x: &[bool], k: usize) -> Result<(bool, u32)> {
    let (trace, budget) = trace_threshold(x, k, 0)?;
    Ok((trace.answer, budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::parse_bits;

    fn input(text: &str) -> PaddedInput {
        PaddedInput::new(parse_bits(text).unwrap())
    }

    fn assert_close(got: &[f64], want: &[f64]) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-15, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn u1_columns() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u1 = build_u1(2).unwrap();
        assert_close(u1.column(BasisIndex::Blank).unwrap(), &[0.0, h, h, 0.0]);

        let u1 = build_u1(1).unwrap();
        assert_close(u1.column(BasisIndex::Blank).unwrap(), &[0.0, 1.0]);

        let u1 = build_u1(4).unwrap();
        let column = u1.column(BasisIndex::Blank).unwrap();
        for amp in &column[1..=4] {
            assert!((amp - 0.5).abs() < 1e-15);
        }

        assert!(matches!(build_u1(0), Err(Error::EmptyLevel)));
    }

    #[test]
    fn u2_exact_level_one_columns() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u2 = build_u2_exact(1).unwrap();
        // basis order at s = 2: blank, |1⟩, |2⟩, |1,2⟩
        assert_close(u2.column(BasisIndex::Single(1)).unwrap(), &[h, 0.0, 0.0, h]);
        assert_close(u2.column(BasisIndex::Single(2)).unwrap(), &[h, 0.0, 0.0, -h]);
        assert!(matches!(build_u2_exact(0), Err(Error::BaseLevel)));
    }

    #[test]
    fn u2_maj_level_one_columns() {
        let u2 = build_u2_maj(1).unwrap();
        // basis order at s = 3: blank, singles 1-3, pairs (1,2), (1,3), (2,3)
        assert_eq!(
            u2.column(BasisIndex::Single(1)).unwrap(),
            &[0.0, 0.0, 0.5, 0.5, 0.5, 0.5, 0.0]
        );
        assert!(matches!(build_u2_maj(0), Err(Error::BaseLevel)));
    }

    #[test]
    fn u2_exact_maps_the_signed_superposition_to_a_pair() {
        // post-query state for x = 01 at m = 1, applied through U2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u2 = build_u2_exact(1).unwrap();
        let psi = StateVector::from_amplitudes(2, vec![0.0, h, -h, 0.0]).unwrap();
        let out = u2.apply(&psi).unwrap();
        let expected = [0.0, 0.0, 0.0, 1.0];
        for (a, e) in out.amplitudes().iter().zip(expected) {
            assert!((a - e).abs() < 1e-15, "{:?}", out.amplitudes());
        }
    }

    #[test]
    fn exact_level_on_a_constant_input_decides_zero() {
        let mut inp = input("0000");
        let outcomes = level_outcomes(&AlgorithmSpec::new(Family::Exact, 2), &mut inp).unwrap();
        assert_eq!(outcomes.branches.len(), 1);
        let b = &outcomes.branches[0];
        assert_eq!(b.outcome, BasisIndex::Blank);
        assert!((b.probability - 1.0).abs() < 1e-14);
        assert_eq!(b.action, BranchAction::Output(false));
        assert_eq!(inp.queries_used(), 1);
    }

    #[test]
    fn exact_level_on_a_balanced_input_yields_unequal_pairs() {
        let mut inp = input("0110");
        let outcomes = level_outcomes(&AlgorithmSpec::new(Family::Exact, 2), &mut inp).unwrap();
        let got: Vec<(BasisIndex, f64)> = outcomes
            .branches
            .iter()
            .map(|b| (b.outcome, b.probability))
            .collect();
        let expected = [
            BasisIndex::Pair(1, 2),
            BasisIndex::Pair(1, 3),
            BasisIndex::Pair(2, 4),
            BasisIndex::Pair(3, 4),
        ];
        assert_eq!(got.len(), 4);
        for ((outcome, probability), want) in got.iter().zip(expected) {
            assert_eq!(*outcome, want);
            assert!((probability - 0.25).abs() < 1e-14);
        }
        for b in &outcomes.branches {
            assert_eq!(b.exact_probability, Ratio::new(1, 4));
        }
    }

    #[test]
    fn maj_level_branches_carry_thirds() {
        let mut inp = input("100");
        let outcomes = level_outcomes(&AlgorithmSpec::new(Family::Maj, 1), &mut inp).unwrap();
        let got: Vec<(BasisIndex, f64)> = outcomes
            .branches
            .iter()
            .map(|b| (b.outcome, b.probability))
            .collect();
        assert_eq!(got.len(), 3);
        let expected = [
            BasisIndex::Single(1),
            BasisIndex::Pair(1, 2),
            BasisIndex::Pair(1, 3),
        ];
        for ((outcome, probability), want) in got.iter().zip(expected) {
            assert_eq!(*outcome, want);
            assert!((probability - 1.0 / 3.0).abs() < 1e-14);
        }
        // the single outcome discards x_1 and the smallest other index
        assert_eq!(
            outcomes.branches[0].action,
            BranchAction::Recurse {
                remove_locals: [1, 2]
            }
        );
    }

    #[test]
    fn full_tree_for_the_motivating_instance() {
        let tree = run_full(&AlgorithmSpec::new(Family::Exact, 2), input("1100")).unwrap();
        let leaves = tree.leaves();
        assert!(!leaves.is_empty());
        assert!(leaves.iter().all(|l| l.answer));
        assert_eq!(tree.max_queries(), 2);
        assert!((tree.leaf_probability_total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_tree_on_all_zeros_decides_immediately() {
        let tree = run_full(&AlgorithmSpec::new(Family::Exact, 2), input("0000")).unwrap();
        let leaves = tree.leaves();
        assert_eq!(leaves.len(), 1);
        assert!(!leaves[0].answer);
        assert_eq!(leaves[0].queries, 1);
    }

    #[test]
    fn maj_three_on_one_one_answers_zero_in_two_queries() {
        let tree = run_full(&AlgorithmSpec::new(Family::Maj, 1), input("100")).unwrap();
        let leaves = tree.leaves();
        assert_eq!(leaves.len(), 3);
        for leaf in leaves {
            assert!(!leaf.answer);
            assert_eq!(leaf.queries, 2);
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let spec = AlgorithmSpec::new(Family::Exact, 3);
        for seed in [0, 7, 123456789] {
            let a = run_sampled(&spec, input("011010"), seed).unwrap();
            let b = run_sampled(&spec, input("011010"), seed).unwrap();
            assert_eq!(a.answer, b.answer);
            assert_eq!(a.queries, b.queries);
            assert_eq!(a.levels.len(), b.levels.len());
            for (x, y) in a.levels.iter().zip(&b.levels) {
                assert_eq!(x.outcome, y.outcome);
                assert_eq!(x.removed_global, y.removed_global);
            }
        }
    }

    #[test]
    fn sampled_answers_on_known_instances() {
        let (answer, queries) = {
            let trace = run_sampled(
                &AlgorithmSpec::new(Family::Exact, 2),
                input("0000"),
                99,
            )
            .unwrap();
            (trace.answer, trace.queries)
        };
        assert_eq!((answer, queries), (false, 1));

        for seed in 0..16 {
            let trace =
                run_sampled(&AlgorithmSpec::new(Family::Exact, 3), input("111000"), seed).unwrap();
            assert_eq!((trace.answer, trace.queries), (true, 3));
        }
    }

    #[test]
    fn solver_dispatch() {
        assert_eq!(
            solve_exact(&parse_bits("0110").unwrap(), 2).unwrap(),
            (true, 2)
        );
        assert_eq!(
            solve_threshold(&parse_bits("10101").unwrap(), 3).unwrap(),
            (true, 3)
        );
        assert_eq!(
            solve_exact(&parse_bits("00000").unwrap(), 0).unwrap(),
            (true, 5)
        );
        assert_eq!(
            solve_threshold(&parse_bits("0000").unwrap(), 0).unwrap(),
            (true, 0)
        );
        assert_eq!(
            solve_threshold(&parse_bits("0000").unwrap(), 5).unwrap(),
            (false, 0)
        );
        assert!(solve_exact(&parse_bits("0110").unwrap(), 5).is_err());
        assert!(solve_threshold(&parse_bits("0000").unwrap(), 6).is_err());
    }

    #[test]
    fn discard_variant_is_also_exact_on_small_majorities() {
        for n in [3usize, 5] {
            let m = (n - 1) / 2;
            for mask in 0u32..(1 << n) {
                let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let expected = bits.iter().filter(|&&b| b).count() > n / 2;
                let tree = run_full_with_discard(
                    &AlgorithmSpec::new(Family::Maj, m),
                    PaddedInput::new(bits),
                    MajDiscard::LargestOther,
                )
                .unwrap();
                for leaf in tree.leaves() {
                    assert_eq!(leaf.answer, expected);
                    assert_eq!(leaf.queries, (m + 1) as u32);
                }
            }
        }
    }
}
