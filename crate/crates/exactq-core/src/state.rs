//! Real-amplitude state vectors over the level basis.
//!
//! Every amplitude the algorithms produce is real (signs only, no complex
//! phases), so states are plain `f64` vectors in canonical basis order.

use crate::basis::{self, BasisIndex};
use crate::error::{Error, Result};

/// A real vector over the basis of one recursion level.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    level_size: usize,
    amplitudes: Vec<f64>,
}

impl StateVector {
    /// The all-zero vector (not a physical state until written to).
    pub fn zeros(level_size: usize) -> Self {
        StateVector {
            level_size,
            amplitudes: vec![0.0; basis_dim(level_size)],
        }
    }

    /// The starting state `|0⟩` with amplitude 1 on the blank state.
    pub fn blank(level_size: usize) -> Self {
        let mut v = Self::zeros(level_size);
        v.amplitudes[0] = 1.0;
        v
    }

    /// A unit vector on a single basis state.
    pub fn basis_state(level_size: usize, state: BasisIndex) -> Result<Self> {
        let mut v = Self::zeros(level_size);
        v.amplitudes[state.canonical_index(level_size)?] = 1.0;
        Ok(v)
    }

    /// Wrap raw amplitudes given in canonical order.
    pub fn from_amplitudes(level_size: usize, amplitudes: Vec<f64>) -> Result<Self> {
        let expected = basis_dim(level_size);
        if amplitudes.len() != expected {
            return Err(Error::AmplitudeCount {
                got: amplitudes.len(),
                expected,
            });
        }
        Ok(StateVector {
            level_size,
            amplitudes,
        })
    }

    pub fn level_size(&self) -> usize {
        self.level_size
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, state: BasisIndex) -> Result<f64> {
        Ok(self.amplitudes[state.canonical_index(self.level_size)?])
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [f64] {
        &mut self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.level_size != other.level_size {
            return Err(Error::LevelSizeMismatch {
                got: other.level_size,
                expected: self.level_size,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Amplitudes paired with their basis labels, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (BasisIndex, f64)> + '_ {
        basis::enumerate(self.level_size).zip(self.amplitudes.iter().copied())
    }
}

fn basis_dim(level_size: usize) -> usize {
    basis::basis_dim(level_size)
}
