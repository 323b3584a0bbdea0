//! Simulation and exhaustive certification of exact quantum query algorithms
//! for the symmetric Boolean functions EXACT and THRESHOLD.
//!
//! EXACT_k^n asks whether exactly `k` of `n` input bits are 1; Th_k^n asks
//! whether at least `k` are. Both admit recursive quantum query algorithms
//! that are *exact* (correct with certainty on every input and every
//! measurement outcome) using `max(k, n−k)` and `max(k, n−k+1)` queries
//! respectively, roughly half of the `n` queries any deterministic decision
//! tree needs. This crate implements those algorithms over their structured
//! level basis (blank, single and pair states), certifies exactness and the
//! query budgets over whole input spaces, and computes the deterministic
//! baseline `D(f)` they are measured against.
//!
//! The pieces:
//!
//! - [`basis`], [`state`], [`isometry`]: the level Hilbert space. States are
//!   real vectors in a fixed canonical basis order; the two per-level
//!   transformations are partial isometries applied with an explicit
//!   support check.
//! - [`oracle`]: input bits plus constant padding, the phase query
//!   transformation, and query accounting. Padding reduces any instance to
//!   a balanced EXACT or a majority instance.
//! - [`algorithms`]: level construction and execution, exhaustive branch
//!   trees, seeded sampling, and the `solve_exact` / `solve_threshold`
//!   entry points.
//! - [`verify`]: full-input-space and symmetry-memoized verification,
//!   isometry residuals, closed-form state checks, and the
//!   quantum-vs-deterministic gap table.
//! - [`classical`]: symmetric functions, the exact decision-tree depth
//!   `D(f)`, and the OR/NOR restriction witnesses behind the lower bounds.
//!
//! ```
//! use exactq_core::{parse_bits, solve_exact, solve_threshold};
//! use exactq_core::verify::{verify_instance, FunctionFamily, VerifyConfig, VerifyMode};
//!
//! // decide single instances
//! let x = parse_bits("0110").unwrap();
//! assert_eq!(solve_exact(&x, 2).unwrap(), (true, 2));
//! assert_eq!(solve_threshold(&x, 3).unwrap(), (false, 3));
//!
//! // certify a whole input space: every branch of every input, within budget
//! let report = verify_instance(
//!     FunctionFamily::Exact,
//!     2,
//!     4,
//!     VerifyMode::Full,
//!     &VerifyConfig::default(),
//! )
//! .unwrap();
//! assert!(report.passed());
//! assert_eq!(report.max_queries_observed, 2);
//! ```

pub mod algorithms;
pub mod basis;
pub mod classical;
mod error;
pub mod isometry;
pub mod oracle;
pub mod rational;
pub mod state;
pub mod verify;

pub use algorithms::{
    run_full, run_sampled, solve_exact, solve_threshold, AlgorithmSpec, BranchTree, Family,
    RunTrace,
};
pub use basis::BasisIndex;
pub use error::{Error, Result};
pub use isometry::PartialIsometry;
pub use oracle::{parse_bits, PaddedInput};
pub use rational::Ratio;
pub use state::StateVector;
pub use verify::{
    verify_instance, FunctionFamily, VerificationReport, VerifyConfig, VerifyMode, VerifyStatus,
};
