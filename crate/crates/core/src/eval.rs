//! Partition agreement: adjusted Rand index and confusion tables.

use std::collections::BTreeMap;

use crate::error::{HmmdrError, Result};

/// Adjusted Rand index between two partitions given as per-item class
/// indices. Pair counts are accumulated in exact integer arithmetic; the
/// only floating-point operation is the final division.
pub fn ari(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(HmmdrError::domain(format!(
            "partitions have different lengths: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(HmmdrError::domain("partitions must be non-empty".to_string()));
    }

    let mut cells: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u64> = BTreeMap::new();
    for (&ai, &bi) in a.iter().zip(b) {
        *cells.entry((ai, bi)).or_insert(0) += 1;
        *rows.entry(ai).or_insert(0) += 1;
        *cols.entry(bi).or_insert(0) += 1;
    }

    let choose2 = |m: u64| -> u128 { (m as u128) * (m as u128 - 1) / 2 };
    let s_cells: u128 = cells.values().map(|&m| choose2(m)).sum();
    let s_rows: u128 = rows.values().map(|&m| choose2(m)).sum();
    let s_cols: u128 = cols.values().map(|&m| choose2(m)).sum();
    let total = choose2(a.len() as u64);

    // ARI = (S_cells - S_rows S_cols / T) / ((S_rows + S_cols)/2 - S_rows S_cols / T),
    // cleared of denominators: multiply through by 2T.
    let num = 2 * (total as i128) * (s_cells as i128) - 2 * (s_rows as i128) * (s_cols as i128);
    let den = (total as i128) * (s_rows as i128 + s_cols as i128)
        - 2 * (s_rows as i128) * (s_cols as i128);
    if den == 0 {
        // No chance-corrected information (e.g. all singletons vs all
        // singletons, or a single item); the partitions coincide.
        return Ok(1.0);
    }
    Ok(num as f64 / den as f64)
}

/// Cross-tabulation of two partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Confusion {
    /// Distinct class indices of the first partition, ascending.
    pub row_classes: Vec<usize>,
    /// Distinct class indices of the second partition, ascending.
    pub col_classes: Vec<usize>,
    /// `counts[i][j]` = number of items with classes
    /// `(row_classes[i], col_classes[j])`.
    pub counts: Vec<Vec<u64>>,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.col_classes.len())
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }
}

/// Contingency table of two equal-length partitions.
pub fn confusion(a: &[usize], b: &[usize]) -> Result<Confusion> {
    if a.len() != b.len() {
        return Err(HmmdrError::domain(format!(
            "partitions have different lengths: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(HmmdrError::domain("partitions must be non-empty".to_string()));
    }
    let mut row_classes: Vec<usize> = a.to_vec();
    row_classes.sort_unstable();
    row_classes.dedup();
    let mut col_classes: Vec<usize> = b.to_vec();
    col_classes.sort_unstable();
    col_classes.dedup();

    let row_of: BTreeMap<usize, usize> =
        row_classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let col_of: BTreeMap<usize, usize> =
        col_classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    let mut counts = vec![vec![0u64; col_classes.len()]; row_classes.len()];
    for (&ai, &bi) in a.iter().zip(b) {
        counts[row_of[&ai]][col_of[&bi]] += 1;
    }
    Ok(Confusion { row_classes, col_classes, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identical_partitions_score_one() {
        let a = [0, 0, 1, 1, 2, 2];
        assert_eq!(ari(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn crossed_pairs_fixture() {
        let a = [1, 1, 2, 2];
        let b = [1, 2, 1, 2];
        assert_relative_eq!(ari(&a, &b).unwrap(), -0.5, epsilon = 1e-15);
    }

    #[test]
    fn relabelling_is_invisible() {
        let a = [0, 0, 1, 2, 2, 1, 0];
        let relabelled: Vec<usize> = a.iter().map(|&c| [5, 9, 3][c]).collect();
        assert_eq!(ari(&a, &relabelled).unwrap(), 1.0);
    }

    #[test]
    fn symmetric_in_arguments() {
        let a = [0, 0, 1, 1, 2, 2, 0, 1];
        let b = [0, 1, 1, 1, 2, 0, 0, 2];
        assert_eq!(ari(&a, &b).unwrap(), ari(&b, &a).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(ari(&[0, 1], &[0]).is_err());
        assert!(confusion(&[0, 1], &[0]).is_err());
    }

    #[test]
    fn confusion_diagonal_for_identical_partitions() {
        let a = [0, 0, 1, 2, 2];
        let c = confusion(&a, &a).unwrap();
        assert_eq!(c.total(), 5);
        for (i, row) in c.counts.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if i == j {
                    assert!(v > 0);
                } else {
                    assert_eq!(v, 0);
                }
            }
        }
    }

    #[test]
    fn confusion_margins_match_class_sizes() {
        let a = [0, 0, 0, 1, 1, 2];
        let b = [1, 1, 0, 0, 0, 0];
        let c = confusion(&a, &b).unwrap();
        assert_eq!(c.total(), 6);
        assert_eq!(c.row_sums(), vec![3, 2, 1]);
        assert_eq!(c.col_sums(), vec![4, 2]);
    }
}
