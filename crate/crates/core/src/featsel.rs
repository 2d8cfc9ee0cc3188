//! Greedy forward selection of projected variables by BIC differences: a
//! candidate enters when the best clustering model on the enlarged set beats
//! the best model on the current set plus a Gaussian regression of the
//! candidate on it.

use nalgebra::{DMatrix, DVector};

use crate::dataset::Dataset;
use crate::error::{HmmdrError, Result};
use crate::mixfit::{fit_mixture, FitConfig, MixtureModel, Mode};

/// Outcome of the greedy search.
#[derive(Debug, Clone)]
pub struct FeatureSelection {
    /// Column indices into the candidate variable matrix, in inclusion order.
    pub selected: Vec<usize>,
    /// BIC difference recorded at each inclusion (parallel to `selected`).
    pub bic_diffs: Vec<f64>,
    /// Best mixture fitted on the selected columns (in inclusion order).
    pub best_model: MixtureModel,
}

/// BIC of the Gaussian linear regression of `target` on `predictors` with an
/// intercept: `r = q + 2` free parameters (slopes, intercept, variance) and
/// the variance estimated with divisor `n`. `q = 0` is the intercept-only
/// model. Rank-deficient normal equations fall back to a small ridge.
pub fn bic_reg(target: &DVector<f64>, predictors: &DMatrix<f64>) -> Result<f64> {
    let n = target.len();
    if n < 2 {
        return Err(HmmdrError::domain(format!(
            "regression needs at least 2 rows, got {n}"
        )));
    }
    let q = predictors.ncols();
    if q > 0 && predictors.nrows() != n {
        return Err(HmmdrError::domain(format!(
            "predictors have {} rows, target has {n}",
            predictors.nrows()
        )));
    }

    let mut design = DMatrix::from_element(n, q + 1, 1.0);
    if q > 0 {
        design.view_mut((0, 1), (n, q)).copy_from(predictors);
    }
    let xtx = design.transpose() * &design;
    let xty = design.transpose() * target;
    let beta = match xtx.clone().cholesky() {
        Some(ch) => ch.solve(&xty),
        None => {
            let ridge = &xtx + DMatrix::identity(q + 1, q + 1) * 1e-8;
            ridge
                .cholesky()
                .ok_or_else(|| {
                    HmmdrError::numerical(
                        "regression normal equations are singular even with ridge".to_string(),
                    )
                })?
                .solve(&xty)
        }
    };
    let residual = target - design * beta;
    let sigma2 = (residual.norm_squared() / n as f64).max(1e-12);
    let loglik = -0.5 * n as f64 * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0);
    let r = q + 2;
    Ok(2.0 * loglik - r as f64 * (n as f64).ln())
}

/// BIC difference for adding `candidate` to the current selection:
/// `BIC_clust(s + candidate) - [BIC_clust(s) + BIC_reg(candidate | s)]`.
pub fn bic_diff(
    candidate: usize,
    current: &FeatureSelection,
    variables: &DMatrix<f64>,
    template: &Dataset,
    mode: Mode,
    g_range: (usize, usize),
    config: &FitConfig,
) -> Result<f64> {
    if current.selected.contains(&candidate) {
        return Err(HmmdrError::domain(format!(
            "candidate column {candidate} is already selected"
        )));
    }
    let (diff, _) = candidate_diff(
        candidate,
        &current.selected,
        current.best_model.bic,
        variables,
        template,
        mode,
        g_range,
        config,
    )?;
    Ok(diff)
}

#[allow(clippy::too_many_arguments)]
fn candidate_diff(
    candidate: usize,
    selected: &[usize],
    current_bic: f64,
    variables: &DMatrix<f64>,
    template: &Dataset,
    mode: Mode,
    g_range: (usize, usize),
    config: &FitConfig,
) -> Result<(f64, MixtureModel)> {
    let mut cols = selected.to_vec();
    cols.push(candidate);
    let model = fit_on_columns(variables, &cols, template, mode, g_range, config)?;
    let rows = regression_rows(template, mode);
    let target = gather_column(variables, candidate, &rows);
    let predictors = gather_columns(variables, selected, &rows);
    let reg = bic_reg(&target, &predictors)?;
    Ok((model.bic - (current_bic + reg), model))
}

/// Forward greedy search. The first feature is the one whose best clustering
/// model most exceeds the single-component (no clustering) model on the same
/// feature, and it is always retained; afterwards, the best positive BIC
/// difference enters until every remaining difference is nonpositive. There
/// is no backward step.
pub fn greedy_select(
    variables: &DMatrix<f64>,
    template: &Dataset,
    mode: Mode,
    g_range: (usize, usize),
    config: &FitConfig,
) -> Result<FeatureSelection> {
    let d = variables.ncols();
    if d == 0 {
        return Err(HmmdrError::domain(
            "no candidate variables to select from".to_string(),
        ));
    }
    if variables.nrows() != template.n() {
        return Err(HmmdrError::domain(format!(
            "variable matrix has {} rows, data set has {}",
            variables.nrows(),
            template.n()
        )));
    }

    // First feature: best clustering model vs the no-clustering model.
    let mut first: Option<(usize, f64, MixtureModel)> = None;
    for i in 0..d {
        let model = fit_on_columns(variables, &[i], template, mode, g_range, config)?;
        let baseline = no_clustering_bic(variables, i, template, mode, config)?;
        let diff = model.bic - baseline;
        if first.as_ref().map(|(_, b, _)| diff > *b).unwrap_or(true) {
            first = Some((i, diff, model));
        }
    }
    let (first_col, first_diff, mut best_model) = first.unwrap();
    let mut selected = vec![first_col];
    let mut bic_diffs = vec![first_diff];

    loop {
        let remaining: Vec<usize> = (0..d).filter(|c| !selected.contains(c)).collect();
        if remaining.is_empty() {
            break;
        }
        let mut step: Option<(usize, f64, MixtureModel)> = None;
        for &cand in &remaining {
            let (diff, model) = candidate_diff(
                cand,
                &selected,
                best_model.bic,
                variables,
                template,
                mode,
                g_range,
                config,
            )?;
            if step.as_ref().map(|(_, b, _)| diff > *b).unwrap_or(true) {
                step = Some((cand, diff, model));
            }
        }
        let (cand, diff, model) = step.unwrap();
        if diff <= 0.0 {
            break;
        }
        selected.push(cand);
        bic_diffs.push(diff);
        best_model = model;
    }

    Ok(FeatureSelection { selected, bic_diffs, best_model })
}

/// Best mixture over the component range on the given columns (in order),
/// under the requested mode.
pub(crate) fn fit_on_columns(
    variables: &DMatrix<f64>,
    cols: &[usize],
    template: &Dataset,
    mode: Mode,
    g_range: (usize, usize),
    config: &FitConfig,
) -> Result<MixtureModel> {
    let all: Vec<usize> = (0..variables.nrows()).collect();
    let x = gather_columns(variables, cols, &all);
    let data = template.with_features(x)?;
    fit_mixture(&data, mode, g_range, config)
}

/// BIC of the single-component (no clustering) model on one column, on the
/// rows the mode's likelihood uses.
fn no_clustering_bic(
    variables: &DMatrix<f64>,
    col: usize,
    template: &Dataset,
    mode: Mode,
    config: &FitConfig,
) -> Result<f64> {
    let rows = regression_rows(template, mode);
    let x = gather_columns(variables, &[col], &rows);
    let data = Dataset::unlabelled(x)?;
    Ok(fit_mixture(&data, Mode::Clustering, (1, 1), config)?.bic)
}

/// Rows entering the regression (and no-clustering) BIC terms: the known
/// rows in discriminant mode, every row otherwise, matching the rows behind
/// the mixture BIC terms.
fn regression_rows(template: &Dataset, mode: Mode) -> Vec<usize> {
    match mode {
        Mode::Discriminant => (0..template.n())
            .filter(|&i| template.known_mask()[i])
            .collect(),
        _ => (0..template.n()).collect(),
    }
}

fn gather_column(variables: &DMatrix<f64>, col: usize, rows: &[usize]) -> DVector<f64> {
    DVector::from_fn(rows.len(), |r, _| variables[(rows[r], col)])
}

fn gather_columns(variables: &DMatrix<f64>, cols: &[usize], rows: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| variables[(rows[r], cols[c])])
}
