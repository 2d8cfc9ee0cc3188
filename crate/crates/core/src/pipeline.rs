//! The end-to-end loop: fit a mixture, estimate the reduction directions,
//! project, greedily select variables, refit on the selection, and iterate
//! until nothing more can be discarded.

use nalgebra::DMatrix;
use rand::Rng;

use crate::dataset::Dataset;
use crate::error::{HmmdrError, Result};
use crate::eval;
use crate::featsel::{self, FeatureSelection};
use crate::mixfit::{self, FitConfig, MixtureModel, Mode};
use crate::subspace::{self, SubspaceBasis};

/// Settings for a pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Inclusive component search range.
    pub g_min: usize,
    pub g_max: usize,
    /// Aitken tolerance for every EM fit.
    pub epsilon: f64,
    /// EM iteration cap.
    pub max_iter: usize,
    /// Standardize each column to mean 0, variance 1 before fitting.
    pub standardize: bool,
    /// Cap on outer fit/reduce/select iterations.
    pub max_outer: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            g_min: 1,
            g_max: 6,
            epsilon: 1e-5,
            max_iter: 500,
            standardize: true,
            max_outer: 10,
        }
    }
}

impl PipelineConfig {
    fn fit_config(&self) -> FitConfig {
        FitConfig { epsilon: self.epsilon, max_iter: self.max_iter }
    }

    fn g_range(&self) -> (usize, usize) {
        (self.g_min, self.g_max)
    }
}

/// Per-column statistics applied before fitting.
#[derive(Debug, Clone)]
pub struct Standardization {
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

/// Everything a pipeline run produces.
#[derive(Debug, Clone)]
pub struct HmmdrResult {
    /// Mixture fitted on the final selected variables.
    pub final_model: MixtureModel,
    /// Basis computed at each outer iteration.
    pub basis_history: Vec<SubspaceBasis>,
    /// Selection made at the last outer iteration.
    pub selected_features: FeatureSelection,
    /// Directions from the (standardized) input space to the final
    /// variables, composition of every projection step; `p x d_final`.
    pub composed_directions: DMatrix<f64>,
    /// Final variables for every row; `n x d_final`.
    pub projected: DMatrix<f64>,
    /// MAP class for each scored row.
    pub assignments: Vec<usize>,
    /// Posterior probability backing each assignment.
    pub max_posterior: Vec<f64>,
    /// Row indices the assignments refer to: every row in clustering and
    /// classification, the unknown rows in discriminant analysis.
    pub scored_rows: Vec<usize>,
    /// Outer-loop iterations performed.
    pub iterations: usize,
    /// Agreement with the true labels where they exist: all labelled rows in
    /// clustering, only unknown labelled rows otherwise.
    pub ari_vs_truth: Option<f64>,
    /// Standardization applied to the input columns, when enabled.
    pub standardization: Option<Standardization>,
}

impl HmmdrResult {
    /// Number of variables retained.
    pub fn n_features(&self) -> usize {
        self.selected_features.selected.len()
    }
}

/// Run the full loop on `data` under `mode`.
pub fn run_hmmdr(data: &Dataset, mode: Mode, config: &PipelineConfig) -> Result<HmmdrResult> {
    if config.g_min < 1 || config.g_min > config.g_max {
        return Err(HmmdrError::domain(format!(
            "invalid component range {}..={}",
            config.g_min, config.g_max
        )));
    }
    if config.max_outer < 1 {
        return Err(HmmdrError::domain("outer-loop cap must be at least 1".to_string()));
    }

    let (x0, standardization) = if config.standardize {
        let (x, s) = standardize(data.x());
        (x, Some(s))
    } else {
        (data.x().clone(), None)
    };
    let mut current = data.with_features(x0)?;
    let fit_cfg = config.fit_config();

    let mut model = mixfit::fit_mixture(&current, mode, config.g_range(), &fit_cfg)
        .map_err(|e| e.at_stage("initial-fit", 0))?;

    let mut basis_history: Vec<SubspaceBasis> = Vec::new();
    let mut composed: Option<DMatrix<f64>> = None;
    let mut iterations = 0usize;

    let selection = loop {
        iterations += 1;

        let fit_data = match mode {
            Mode::Discriminant => {
                current
                    .known_subset()
                    .map_err(|e| e.at_stage("overall-covariance", iterations))?
                    .0
            }
            _ => current.clone(),
        };
        let sigma = subspace::overall_covariance(&fit_data)
            .map_err(|e| e.at_stage("overall-covariance", iterations))?;
        let kernel = subspace::kernel_matrix(&model, &sigma)
            .map_err(|e| e.at_stage("kernel", iterations))?;
        let basis = subspace::solve_directions(&kernel, &sigma)
            .map_err(|e| e.at_stage("directions", iterations))?;

        let vars = subspace::project(current.x(), &basis)
            .map_err(|e| e.at_stage("projection", iterations))?;
        let sel = featsel::greedy_select(&vars, &current, mode, config.g_range(), &fit_cfg)
            .map_err(|e| e.at_stage("feature-selection", iterations))?;

        let kept_all = sel.selected.len() == vars.ncols();
        let picked = DMatrix::from_fn(basis.directions.nrows(), sel.selected.len(), |r, c| {
            basis.directions[(r, sel.selected[c])]
        });
        composed = Some(match composed {
            None => picked,
            Some(prev) => prev * picked,
        });
        let new_x = DMatrix::from_fn(vars.nrows(), sel.selected.len(), |r, c| {
            vars[(r, sel.selected[c])]
        });
        current = current
            .with_features(new_x)
            .map_err(|e| e.at_stage("projection", iterations))?;
        model = sel.best_model.clone();
        basis_history.push(basis);

        if kept_all || iterations >= config.max_outer {
            break sel;
        }
    };
    let composed = composed.unwrap();

    let resp = mixfit::e_step(&current, &model)
        .map_err(|e| e.at_stage("scoring", iterations))?;
    let all_assignments = mixfit::map_classify(&resp);
    let scored_rows: Vec<usize> = match mode {
        Mode::Discriminant => (0..data.n()).filter(|&i| !data.known_mask()[i]).collect(),
        _ => (0..data.n()).collect(),
    };
    let assignments: Vec<usize> = scored_rows.iter().map(|&i| all_assignments[i]).collect();
    let max_posterior: Vec<f64> = scored_rows
        .iter()
        .map(|&i| resp.z_hat.row(i).max())
        .collect();

    let ari_rows: Vec<usize> = match mode {
        Mode::Clustering => (0..data.n()).collect(),
        _ => (0..data.n()).filter(|&i| !data.known_mask()[i]).collect(),
    };
    let mut truth = Vec::new();
    let mut predicted = Vec::new();
    for &i in &ari_rows {
        if let Some(label) = data.labels()[i] {
            truth.push(label);
            predicted.push(all_assignments[i]);
        }
    }
    let ari_vs_truth = if truth.len() >= 2 {
        eval::ari(&truth, &predicted).ok()
    } else {
        None
    };

    Ok(HmmdrResult {
        final_model: model,
        basis_history,
        selected_features: selection,
        composed_directions: composed,
        projected: current.x().clone(),
        assignments,
        max_posterior,
        scored_rows,
        iterations,
        ari_vs_truth,
        standardization,
    })
}

/// Known/unknown split: each row is known with probability `p_known`,
/// redrawing within each class until it has at least one known row (one row
/// is forced when `p_known` is 0 or the redraw budget runs out).
pub fn split_known<R: Rng + ?Sized>(
    labels: &[usize],
    rng: &mut R,
    p_known: f64,
) -> Result<Vec<bool>> {
    if labels.is_empty() {
        return Err(HmmdrError::domain("no labels to split".to_string()));
    }
    if !(0.0..=1.0).contains(&p_known) {
        return Err(HmmdrError::domain(format!(
            "known-probability must lie in [0, 1], got {p_known}"
        )));
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &l) in labels.iter().enumerate() {
        classes.entry(l).or_default().push(i);
    }
    let mut mask = vec![false; labels.len()];
    for rows in classes.values() {
        if p_known == 0.0 {
            let pick = rows[rng.random_range(0..rows.len())];
            mask[pick] = true;
            continue;
        }
        let mut produced = false;
        for _ in 0..1000 {
            for &i in rows {
                if rng.random::<f64>() < p_known {
                    mask[i] = true;
                    produced = true;
                }
            }
            if produced {
                break;
            }
        }
        if !produced {
            let pick = rows[rng.random_range(0..rows.len())];
            mask[pick] = true;
        }
    }
    Ok(mask)
}

fn standardize(x: &DMatrix<f64>) -> (DMatrix<f64>, Standardization) {
    let n = x.nrows();
    let p = x.ncols();
    let mut mean = vec![0.0; p];
    let mut sd = vec![1.0; p];
    for c in 0..p {
        let col = x.column(c);
        let m = col.mean();
        let var = if n > 1 {
            col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        mean[c] = m;
        sd[c] = if var.sqrt() > 1e-12 { var.sqrt() } else { 1.0 };
    }
    let z = DMatrix::from_fn(n, p, |r, c| (x[(r, c)] - mean[c]) / sd[c]);
    (z, Standardization { mean, sd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn split_all_known_when_probability_one() {
        let labels = vec![0, 0, 1, 1, 2];
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let mask = split_known(&labels, &mut rng, 1.0).unwrap();
        assert!(mask.iter().all(|&k| k));
    }

    #[test]
    fn split_forces_one_per_class_at_probability_zero() {
        let labels = vec![0, 0, 0, 1, 1, 2, 2, 2, 2];
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mask = split_known(&labels, &mut rng, 0.0).unwrap();
        for class in 0..3usize {
            let known = labels
                .iter()
                .zip(&mask)
                .filter(|(l, k)| **l == class && **k)
                .count();
            assert_eq!(known, 1, "class {class}");
        }
    }

    #[test]
    fn split_fraction_tracks_probability() {
        let labels: Vec<usize> = (0..10_000).map(|i| i % 2).collect();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mask = split_known(&labels, &mut rng, 0.5).unwrap();
        let frac = mask.iter().filter(|&&k| k).count() as f64 / mask.len() as f64;
        // 3 binomial standard errors around 0.5.
        assert!((frac - 0.5).abs() < 3.0 * 0.5 / (10_000f64).sqrt());
    }

    #[test]
    fn split_rejects_bad_probability() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        assert!(split_known(&[0, 1], &mut rng, -0.1).is_err());
        assert!(split_known(&[0, 1], &mut rng, 1.5).is_err());
        assert!(split_known(&[], &mut rng, 0.5).is_err());
    }

    #[test]
    fn standardize_centers_and_scales() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 10.0, 2.0, 20.0, 3.0, 30.0, 4.0, 40.0]);
        let (z, s) = standardize(&x);
        for c in 0..2 {
            let m = z.column(c).mean();
            assert!(m.abs() < 1e-12);
            let var = z
                .column(c)
                .iter()
                .map(|v| (v - m).powi(2))
                .sum::<f64>()
                / 3.0;
            assert!((var - 1.0).abs() < 1e-12);
        }
        assert_eq!(s.mean[0], 2.5);
    }

    #[test]
    fn constant_column_does_not_divide_by_zero() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 5.0, 2.0, 5.0, 3.0, 5.0]);
        let (z, s) = standardize(&x);
        assert_eq!(s.sd[1], 1.0);
        assert!(z.iter().all(|v| v.is_finite()));
    }
}
