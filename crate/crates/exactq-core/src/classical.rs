//! Symmetric Boolean functions, their exact deterministic query complexity,
//! and the restriction identities behind the lower bounds.

use crate::error::{Error, Result};

/// A symmetric Boolean function of arity `n`, stored as its value on each
/// possible number of ones: `f(x) = values[|x|]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricFunction {
    n: usize,
    values: Vec<bool>,
}

impl SymmetricFunction {
    /// Wrap a value vector `v_0 .. v_n` (length `n + 1`).
    pub fn new(values: Vec<bool>) -> Self {
        assert!(!values.is_empty(), "value vector must cover weight 0");
        SymmetricFunction {
            n: values.len() - 1,
            values,
        }
    }

    /// EXACT_k^n: true iff exactly `k` of the `n` bits are 1.
    pub fn exact(k: usize, n: usize) -> Self {
        Self::new((0..=n).map(|t| t == k).collect())
    }

    /// Th_k^n: true iff at least `k` of the `n` bits are 1.
    pub fn threshold(k: usize, n: usize) -> Self {
        Self::new((0..=n).map(|t| t >= k).collect())
    }

    /// MAJ_n for odd `n`.
    pub fn majority(n: usize) -> Self {
        assert!(n % 2 == 1, "majority needs odd arity");
        Self::threshold(n / 2 + 1, n)
    }

    /// True iff the weight is exactly `k` or exactly `n−k`.
    pub fn exact_either(k: usize, n: usize) -> Self {
        Self::new((0..=n).map(|t| t == k || t == n - k).collect())
    }

    pub fn constant(value: bool, n: usize) -> Self {
        Self::new(vec![value; n + 1])
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn value_at_weight(&self, t: usize) -> bool {
        self.values[t]
    }

    pub fn evaluate(&self, x: &[bool]) -> bool {
        assert_eq!(x.len(), self.n);
        self.values[x.iter().filter(|&&b| b).count()]
    }

    /// Exact deterministic decision-tree depth.
    ///
    /// For a symmetric function any unqueried bit is interchangeable, so the
    /// game state is just (zeros seen, ones seen). With `a` zeros and `b`
    /// ones revealed the final weight can still be anything in `[b, n−a]`:
    ///
    ///   dp(a,b) = 0 if v is constant on [b, n−a],
    ///             1 + max(dp(a+1,b), dp(a,b+1)) otherwise.
    ///
    /// The value dp(0,0) equals D(f); the WLOG step is cross-validated
    /// against an exhaustive decision-tree search for small n in the tests.
    pub fn deterministic_complexity(&self) -> usize {
        let n = self.n;
        // dp[a][b], filled by decreasing number of open bits
        let mut dp = vec![vec![0usize; n + 2]; n + 2];
        for revealed in (0..=n).rev() {
            for a in 0..=revealed {
                let b = revealed - a;
                let window = &self.values[b..=n - a];
                dp[a][b] = if window.iter().all(|&v| v == window[0]) {
                    0
                } else {
                    1 + dp[a + 1][b].max(dp[a][b + 1])
                };
            }
        }
        dp[0][0]
    }
}

/// Check the EXACT lower-bound restriction: fixing the first `k` bits of
/// EXACT_k^n to 1 leaves exactly the negation of OR on the remaining
/// `n−k` bits. Verified exhaustively over all assignments.
pub fn exact_lower_bound_witness(k: usize, n: usize) -> Result<bool> {
    if k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let f = SymmetricFunction::exact(k, n);
    let free = n - k;
    for mask in 0u64..(1 << free) {
        let weight = mask.count_ones() as usize;
        let restricted = f.value_at_weight(k + weight);
        let not_or = mask == 0;
        if restricted != not_or {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check the THRESHOLD lower-bound restriction: fixing the first `k−1` bits
/// of Th_k^n to 1 leaves exactly OR on the remaining `n−k+1` bits.
pub fn threshold_lower_bound_witness(k: usize, n: usize) -> Result<bool> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let f = SymmetricFunction::threshold(k, n);
    let free = n - k + 1;
    for mask in 0u64..(1 << free) {
        let weight = mask.count_ones() as usize;
        let restricted = f.value_at_weight(k - 1 + weight);
        let or = mask != 0;
        if restricted != or {
            return Ok(false);
        }
    }
    Ok(true)
}
