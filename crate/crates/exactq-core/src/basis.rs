//! Basis-state labels for one recursion level.
//!
//! A level over `s` active inputs uses the blank state, the single states
//! `|1⟩ .. |s⟩`, and the pair states `|i,j⟩` with `i < j`. The canonical
//! enumeration order is blank, then singles ascending, then pairs in
//! lexicographic order; serialized traces rely on this order being stable.

use std::fmt;

use crate::error::{Error, Result};

/// Label of one basis state at a level with `s` active inputs.
///
/// Single and pair indices are level-local and 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisIndex {
    /// The workspace state tied to no input bit.
    Blank,
    /// State from which the i-th active input is queried.
    Single(usize),
    /// Ordered pair state with `1 <= i < j <= s`.
    Pair(usize, usize),
}

/// Number of basis states at level size `s`: `1 + s + s(s-1)/2`.
pub fn basis_dim(level_size: usize) -> usize {
    1 + level_size + level_size * level_size.saturating_sub(1) / 2
}

/// All basis states of a level in canonical order.
pub fn enumerate(level_size: usize) -> impl Iterator<Item = BasisIndex> {
    let singles = (1..=level_size).map(BasisIndex::Single);
    let pairs = (1..level_size)
        .flat_map(move |i| (i + 1..=level_size).map(move |j| BasisIndex::Pair(i, j)));
    std::iter::once(BasisIndex::Blank).chain(singles).chain(pairs)
}

impl BasisIndex {
    pub fn validate(self, level_size: usize) -> Result<()> {
        let ok = match self {
            BasisIndex::Blank => true,
            BasisIndex::Single(i) => (1..=level_size).contains(&i),
            BasisIndex::Pair(i, j) => i >= 1 && i < j && j <= level_size,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidBasisState {
                state: self.to_string(),
                level_size,
            })
        }
    }

    /// Position of this state in the canonical order for `level_size`.
    pub fn canonical_index(self, level_size: usize) -> Result<usize> {
        self.validate(level_size)?;
        Ok(match self {
            BasisIndex::Blank => 0,
            BasisIndex::Single(i) => i,
            BasisIndex::Pair(i, j) => {
                // Pairs (a, _) with a < i come first, (i-1)*s - i(i-1)/2 of them.
                let before = (i - 1) * level_size - i * (i - 1) / 2;
                1 + level_size + before + (j - i - 1)
            }
        })
    }

    /// Inverse of [`canonical_index`](Self::canonical_index).
    pub fn from_canonical(position: usize, level_size: usize) -> Result<Self> {
        if position >= basis_dim(level_size) {
            return Err(Error::InvalidCanonicalPosition {
                position,
                level_size,
            });
        }
        if position == 0 {
            return Ok(BasisIndex::Blank);
        }
        if position <= level_size {
            return Ok(BasisIndex::Single(position));
        }
        let mut rest = position - level_size - 1;
        for i in 1..level_size {
            let block = level_size - i;
            if rest < block {
                return Ok(BasisIndex::Pair(i, i + 1 + rest));
            }
            rest -= block;
        }
        unreachable!("position bounded by basis_dim");
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisIndex::Blank => write!(f, "blank"),
            BasisIndex::Single(i) => write!(f, "single({i})"),
            BasisIndex::Pair(i, j) => write!(f, "pair({i},{j})"),
        }
    }
}

impl serde::Serialize for BasisIndex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
