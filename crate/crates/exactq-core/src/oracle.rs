//! Input bits, constant padding, the phase query, and query accounting.
//!
//! A [`PaddedInput`] owns the real input bits, any constant bits appended by
//! the padding reductions, the list of global positions still in play at the
//! current recursion level, and the query counter. Pad bits are queried
//! exactly like real bits; every application of the query transformation
//! costs one query regardless of how many basis states it touches.

use crate::basis::BasisIndex;
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Bit positions are 1-based throughout, matching the `x_1 .. x_n` input
/// convention (leftmost character of a bit string is `x_1`).
#[derive(Clone, Debug, PartialEq)]
pub struct PaddedInput {
    real_bits: Vec<bool>,
    pad_bits: Vec<bool>,
    /// Global positions (into real ++ pad) still active, in ascending order.
    active: Vec<usize>,
    queries_used: u32,
}

impl PaddedInput {
    /// An unpadded input with every bit active.
    pub fn new(real_bits: Vec<bool>) -> Self {
        Self::with_padding(real_bits, Vec::new())
    }

    /// An input with constant bits appended; all positions start active.
    pub fn with_padding(real_bits: Vec<bool>, pad_bits: Vec<bool>) -> Self {
        let total = real_bits.len() + pad_bits.len();
        PaddedInput {
            real_bits,
            pad_bits,
            active: (1..=total).collect(),
            queries_used: 0,
        }
    }

    pub fn real_len(&self) -> usize {
        self.real_bits.len()
    }

    pub fn pad_len(&self) -> usize {
        self.pad_bits.len()
    }

    pub fn active_len(&self) -> usize {
        self.active.len()
    }

    /// Global positions still in play, in level-local order.
    pub fn active_indices(&self) -> &[usize] {
        &self.active
    }

    pub fn queries_used(&self) -> u32 {
        self.queries_used
    }

    fn global_bit(&self, global: usize) -> bool {
        if global <= self.real_bits.len() {
            self.real_bits[global - 1]
        } else {
            self.pad_bits[global - 1 - self.real_bits.len()]
        }
    }

    fn check_local(&self, local: usize) -> Result<()> {
        if local == 0 || local > self.active.len() {
            return Err(Error::LocalIndexOutOfRange {
                index: local,
                active: self.active.len(),
            });
        }
        Ok(())
    }

    /// The bit at the given level-local index (1-based).
    pub fn bit(&self, local: usize) -> Result<bool> {
        self.check_local(local)?;
        Ok(self.global_bit(self.active[local - 1]))
    }

    /// The signed bit `(−1)^{x_i}` at a level-local index: `+1` for a 0 bit,
    /// `−1` for a 1 bit.
    pub fn signed_bit(&self, local: usize) -> Result<f64> {
        Ok(if self.bit(local)? { -1.0 } else { 1.0 })
    }

    /// Number of 1 bits among the active positions.
    pub fn ones_among_active(&self) -> usize {
        self.active.iter().filter(|&&g| self.global_bit(g)).count()
    }

    /// The active bit values in level-local order.
    pub fn active_bits(&self) -> Vec<bool> {
        self.active.iter().map(|&g| self.global_bit(g)).collect()
    }

    /// The query transformation: multiplies the amplitude of every single
    /// state `|i⟩` by the signed bit it queries and leaves the blank and pair
    /// states unchanged. Costs exactly one query per application.
    pub fn apply_query(&mut self, psi: &StateVector) -> Result<StateVector> {
        if psi.level_size() != self.active.len() {
            return Err(Error::LevelSizeMismatch {
                got: psi.level_size(),
                expected: self.active.len(),
            });
        }
        let mut out = psi.clone();
        for local in 1..=self.active.len() {
            let idx = BasisIndex::Single(local).canonical_index(psi.level_size())?;
            out.amplitudes_mut()[idx] *= self.signed_bit(local)?;
        }
        self.queries_used += 1;
        Ok(out)
    }

    /// A copy with the given level-local indices removed from the active
    /// list; the order of the remaining positions and the query counter are
    /// preserved.
    pub fn remove_indices(&self, locals: &[usize]) -> Result<PaddedInput> {
        for (i, &a) in locals.iter().enumerate() {
            self.check_local(a)?;
            if locals[..i].contains(&a) {
                return Err(Error::DuplicateLocalIndex { index: a });
            }
        }
        let active = self
            .active
            .iter()
            .enumerate()
            .filter(|(pos, _)| !locals.contains(&(pos + 1)))
            .map(|(_, &g)| g)
            .collect();
        Ok(PaddedInput {
            real_bits: self.real_bits.clone(),
            pad_bits: self.pad_bits.clone(),
            active,
            queries_used: self.queries_used,
        })
    }
}

/// Parse a bit string of '0'/'1' characters, leftmost character first.
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    if text.is_empty() {
        return Err(Error::EmptyBitString);
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidBitChar { found: other }),
        })
        .collect()
}

/// Render bits back to text, `x_1` leftmost.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Reduce an EXACT_k^n instance to a balanced EXACT_m^{2m} instance by
/// appending known constants. Returns the padded input and the level
/// parameter `m = max(k, n−k)`.
///
/// With `2k < n` the input is extended by `n−2k` ones; with `2k > n` by
/// `2k−n` zeros; a balanced instance is passed through unchanged.
pub fn pad_for_exact(x: &[bool], k: usize) -> Result<(PaddedInput, usize)> {
    let n = x.len();
    if k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let (pad, m) = if 2 * k < n {
        (vec![true; n - 2 * k], n - k)
    } else if 2 * k > n {
        (vec![false; 2 * k - n], k)
    } else {
        (Vec::new(), k)
    };
    Ok((PaddedInput::with_padding(x.to_vec(), pad), m))
}

/// Reduce a Th_k^n instance with `1 ≤ k ≤ n` to a majority instance
/// MAJ_{2m+1}. Returns the padded input and `m`, so the query budget is
/// `m + 1 = max(k, n−k+1)`.
///
/// With `2k ≤ n` the input is extended by `n−2k+1` ones; otherwise by
/// `2k−n−1` zeros. Degenerate thresholds (`k = 0`, `k > n`) are constants
/// and are answered by the caller without a reduction.
pub fn pad_for_threshold(x: &[bool], k: usize) -> Result<(PaddedInput, usize)> {
    let n = x.len();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let (pad, m) = if 2 * k <= n {
        (vec![true; n - 2 * k + 1], n - k)
    } else {
        (vec![false; 2 * k - n - 1], k - 1)
    };
    Ok((PaddedInput::with_padding(x.to_vec(), pad), m))
}
