//! Partial isometries: norm-preserving maps specified column-by-column on a
//! subspace of the level basis.
//!
//! The algorithms' transformations are defined only on the states that can
//! actually be reached (the blank state for the first transformation, the
//! singles for the second). We apply the partial map directly and reject any
//! state with support outside the specified sources instead of completing the
//! map to a full unitary.

use crate::basis::{basis_dim, BasisIndex};
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Columns must be unit length and pairwise orthogonal within this tolerance.
pub const COLUMN_TOLERANCE: f64 = 1e-12;
/// An input state may carry at most this much norm outside the source span.
pub const SUPPORT_TOLERANCE: f64 = 1e-12;

/// A linear map given by one output column per source basis state.
#[derive(Clone, Debug)]
pub struct PartialIsometry {
    level_size: usize,
    sources: Vec<BasisIndex>,
    columns: Vec<Vec<f64>>,
}

impl PartialIsometry {
    /// Build a partial isometry, verifying dimensions and that the columns
    /// pass the unit-norm and pairwise-orthogonality checks.
    pub fn new(
        level_size: usize,
        sources: Vec<BasisIndex>,
        columns: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let v = Self::new_unchecked(level_size, sources, columns)?;
        let residual = v.orthonormality_residual();
        if residual >= COLUMN_TOLERANCE {
            return Err(Error::ColumnsNotOrthonormal { residual });
        }
        Ok(v)
    }

    /// Build without the orthonormality check. Dimensions are still enforced.
    /// Intended for negative controls in verification code.
    pub fn new_unchecked(
        level_size: usize,
        sources: Vec<BasisIndex>,
        columns: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if columns.len() != sources.len() {
            return Err(Error::AmplitudeCount {
                got: columns.len(),
                expected: sources.len(),
            });
        }
        let dim = basis_dim(level_size);
        for source in &sources {
            source.validate(level_size)?;
        }
        for column in &columns {
            if column.len() != dim {
                return Err(Error::AmplitudeCount {
                    got: column.len(),
                    expected: dim,
                });
            }
        }
        let mut seen = sources.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != sources.len() {
            return Err(Error::DuplicateLocalIndex { index: 0 });
        }
        Ok(PartialIsometry {
            level_size,
            sources,
            columns,
        })
    }

    pub fn level_size(&self) -> usize {
        self.level_size
    }

    pub fn sources(&self) -> &[BasisIndex] {
        &self.sources
    }

    /// The output column for a given source state, if it is one.
    pub fn column(&self, source: BasisIndex) -> Option<&[f64]> {
        self.sources
            .iter()
            .position(|s| *s == source)
            .map(|i| self.columns[i].as_slice())
    }

    /// Worst deviation of the column Gram matrix from the identity:
    /// `max(|⟨c_i,c_i⟩ − 1|, |⟨c_i,c_j⟩|)` over all column pairs.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, ci) in self.columns.iter().enumerate() {
            for (j, cj) in self.columns.iter().enumerate().skip(i) {
                let dot: f64 = ci.iter().zip(cj).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Apply the map to a state whose support lies in the source span.
    ///
    /// Returns `Σ_b ψ[b] · column(b)`. The caller's state must have residual
    /// norm below [`SUPPORT_TOLERANCE`] outside the sources; anything larger
    /// signals a misuse of a partial map outside its domain.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.level_size() != self.level_size {
            return Err(Error::LevelSizeMismatch {
                got: psi.level_size(),
                expected: self.level_size,
            });
        }
        let mut out = StateVector::zeros(self.level_size);
        let mut in_span_sq = 0.0;
        for (source, column) in self.sources.iter().zip(&self.columns) {
            let coeff = psi.amplitude(*source)?;
            if coeff == 0.0 {
                continue;
            }
            in_span_sq += coeff * coeff;
            for (o, c) in out.amplitudes_mut().iter_mut().zip(column) {
                *o += coeff * c;
            }
        }
        let residual = (psi.norm_squared() - in_span_sq).max(0.0).sqrt();
        if residual >= SUPPORT_TOLERANCE {
            return Err(Error::SupportViolation { residual });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn haar_pair(level_size: usize) -> PartialIsometry {
        // One column mapping blank to an even superposition of singles.
        let amp = 1.0 / (level_size as f64).sqrt();
        let mut column = vec![0.0; basis_dim(level_size)];
        for i in 1..=level_size {
            column[BasisIndex::Single(i).canonical_index(level_size).unwrap()] = amp;
        }
        PartialIsometry::new(level_size, vec![BasisIndex::Blank], vec![column]).unwrap()
    }

    #[test]
    fn applying_to_source_state_returns_its_column() {
        let v = haar_pair(3);
        let out = v.apply(&StateVector::blank(3)).unwrap();
        assert_eq!(out.amplitudes(), v.column(BasisIndex::Blank).unwrap());
    }

    #[test]
    fn rejects_states_outside_the_source_span() {
        let v = haar_pair(3);
        let psi = StateVector::basis_state(3, BasisIndex::Single(1)).unwrap();
        match v.apply(&psi) {
            Err(Error::SupportViolation { residual }) => assert!(residual > 0.9),
            other => panic!("expected support violation, got {other:?}"),
        }
    }

    #[test]
    fn constructor_rejects_non_unit_columns() {
        let mut column = vec![0.0; basis_dim(2)];
        column[1] = 0.5;
        let err = PartialIsometry::new(2, vec![BasisIndex::Blank], vec![column]);
        assert!(matches!(err, Err(Error::ColumnsNotOrthonormal { .. })));
    }
}
