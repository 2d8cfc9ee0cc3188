//! Observation matrix with optional labels and a known/unknown mask.

use nalgebra::DMatrix;

use crate::error::{HmmdrError, Result};

/// An `n x p` data set. Labels are optional per row; `known` marks the rows
/// whose label may be used during fitting (semi-supervised and supervised
/// modes). Rows are never reordered: all bookkeeping is mask-based.
#[derive(Debug, Clone)]
pub struct Dataset {
    x: DMatrix<f64>,
    labels: Vec<Option<usize>>,
    known: Vec<bool>,
}

impl Dataset {
    /// Unlabelled data.
    pub fn unlabelled(x: DMatrix<f64>) -> Result<Self> {
        let n = x.nrows();
        Dataset::build(x, vec![None; n], vec![false; n])
    }

    /// Fully labelled data with every label available to fitting.
    pub fn labelled(x: DMatrix<f64>, labels: Vec<usize>) -> Result<Self> {
        let n = x.nrows();
        if labels.len() != n {
            return Err(HmmdrError::domain(format!(
                "label vector length {} does not match {} rows",
                labels.len(),
                n
            )));
        }
        let labels = labels.into_iter().map(Some).collect();
        Dataset::build(x, labels, vec![true; n])
    }

    /// Data with per-row optional labels and an explicit known mask.
    pub fn with_mask(
        x: DMatrix<f64>,
        labels: Vec<Option<usize>>,
        known: Vec<bool>,
    ) -> Result<Self> {
        Dataset::build(x, labels, known)
    }

    fn build(x: DMatrix<f64>, labels: Vec<Option<usize>>, known: Vec<bool>) -> Result<Self> {
        let n = x.nrows();
        if x.ncols() == 0 || n == 0 {
            return Err(HmmdrError::domain("data matrix must be non-empty".to_string()));
        }
        if labels.len() != n || known.len() != n {
            return Err(HmmdrError::domain(format!(
                "labels ({}) and mask ({}) must both have one entry per row ({n})",
                labels.len(),
                known.len()
            )));
        }
        if let Some((i, _)) = x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(HmmdrError::domain(format!(
                "non-finite value in data matrix (row {}, column {})",
                i % n,
                i / n
            )));
        }
        for (i, (&k, l)) in known.iter().zip(&labels).enumerate() {
            if k && l.is_none() {
                return Err(HmmdrError::domain(format!(
                    "row {i} is marked known but has no label"
                )));
            }
        }
        Ok(Dataset { x, labels, known })
    }

    /// Replace the known mask (e.g. after a random known/unknown split).
    pub fn set_known_mask(&mut self, known: Vec<bool>) -> Result<()> {
        if known.len() != self.n() {
            return Err(HmmdrError::domain(format!(
                "mask length {} does not match {} rows",
                known.len(),
                self.n()
            )));
        }
        for (i, &k) in known.iter().enumerate() {
            if k && self.labels[i].is_none() {
                return Err(HmmdrError::domain(format!(
                    "row {i} cannot be marked known without a label"
                )));
            }
        }
        self.known = known;
        Ok(())
    }

    /// Same rows, different observation matrix (used when substituting
    /// projected variables for the original ones).
    pub fn with_features(&self, x: DMatrix<f64>) -> Result<Self> {
        if x.nrows() != self.n() {
            return Err(HmmdrError::domain(format!(
                "replacement matrix has {} rows, expected {}",
                x.nrows(),
                self.n()
            )));
        }
        Dataset::build(x, self.labels.clone(), self.known.clone())
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Count of rows whose label is available to fitting.
    pub fn k_known(&self) -> usize {
        self.known.iter().filter(|&&k| k).count()
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn known_mask(&self) -> &[bool] {
        &self.known
    }

    /// Label of row `i` if it is available to fitting.
    pub fn known_label(&self, i: usize) -> Option<usize> {
        if self.known[i] {
            self.labels[i]
        } else {
            None
        }
    }

    /// Number of classes among known labels (`max + 1`), requiring every
    /// class below the maximum to have at least one known row.
    pub fn known_class_count(&self) -> Result<usize> {
        let mut seen: Vec<bool> = Vec::new();
        for i in 0..self.n() {
            if let Some(l) = self.known_label(i) {
                if l >= seen.len() {
                    seen.resize(l + 1, false);
                }
                seen[l] = true;
            }
        }
        if seen.is_empty() {
            return Err(HmmdrError::domain(
                "no known labels present in the data set".to_string(),
            ));
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(HmmdrError::domain(format!(
                "class {missing} has no known observation"
            )));
        }
        Ok(seen.len())
    }

    /// Rows with `known == true`, as a new data set (all rows labelled).
    pub fn known_subset(&self) -> Result<(Dataset, Vec<usize>)> {
        let rows: Vec<usize> = (0..self.n()).filter(|&i| self.known[i]).collect();
        if rows.is_empty() {
            return Err(HmmdrError::domain(
                "no known rows to fit on".to_string(),
            ));
        }
        let x = DMatrix::from_fn(rows.len(), self.p(), |r, c| self.x[(rows[r], c)]);
        let labels = rows.iter().map(|&i| self.labels[i]).collect();
        let known = vec![true; rows.len()];
        Ok((Dataset::build(x, labels, known)?, rows))
    }
}
