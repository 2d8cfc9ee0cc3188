//! Reduction subspace: the kernel matrix built from variation in component
//! means and covariances of a fitted mixture, its generalized
//! eigen-decomposition against the overall covariance, and data projection.

use nalgebra::{DMatrix, DVector};

use crate::dataset::Dataset;
use crate::error::{HmmdrError, Result};
use crate::ghd;
use crate::mixfit::MixtureModel;

/// Ordered Sigma-orthonormal direction basis.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    /// `p x d`; column `i` is the i-th direction.
    pub directions: DMatrix<f64>,
    /// Non-increasing; strictly positive except in the fully degenerate
    /// single-component case, where one zero-eigenvalue direction is kept so
    /// downstream selection always has a candidate.
    pub eigenvalues: Vec<f64>,
    /// The SPD matrix the directions are orthonormal against.
    pub sigma_overall: DMatrix<f64>,
}

impl SubspaceBasis {
    pub fn d(&self) -> usize {
        self.directions.ncols()
    }
}

/// Overall covariance of the data with divisor `n` about the sample mean.
pub fn overall_covariance(data: &Dataset) -> Result<DMatrix<f64>> {
    let n = data.n();
    if n < 2 {
        return Err(HmmdrError::domain(format!(
            "overall covariance needs at least 2 rows, got {n}"
        )));
    }
    let p = data.p();
    let mean = data.x().row_mean().transpose();
    let mut cov = DMatrix::zeros(p, p);
    let mut d = DVector::zeros(p);
    for i in 0..n {
        for c in 0..p {
            d[c] = data.x()[(i, c)] - mean[c];
        }
        for r in 0..p {
            for c in r..p {
                cov[(r, c)] += d[r] * d[c];
            }
        }
    }
    cov /= n as f64;
    for r in 0..p {
        for c in 0..r {
            cov[(r, c)] = cov[(c, r)];
        }
    }
    Ok(cov)
}

/// Kernel `M = M_I Sigma^{-1} M_I + M_II`, where `M_I` aggregates variation
/// of the component means of the observed vector about their weighted mean
/// and `M_II` aggregates variation of the component covariances about the
/// pooled within-cluster covariance.
pub fn kernel_matrix(model: &MixtureModel, sigma_overall: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let p = model.dim();
    if sigma_overall.nrows() != p || sigma_overall.ncols() != p {
        return Err(HmmdrError::domain(format!(
            "overall covariance is {}x{}, model dimension is {p}",
            sigma_overall.nrows(),
            sigma_overall.ncols()
        )));
    }
    let chol = sigma_overall.clone().cholesky().ok_or_else(|| {
        HmmdrError::numerical("overall covariance is singular; cannot build kernel".to_string())
    })?;

    let means: Vec<DVector<f64>> = model.components.iter().map(ghd::gh_mean).collect();
    let covs: Vec<DMatrix<f64>> = model.components.iter().map(ghd::gh_covariance).collect();

    let mut global_mean = DVector::zeros(p);
    let mut pooled = DMatrix::zeros(p, p);
    for (g, w) in model.weights.iter().enumerate() {
        global_mean += &means[g] * *w;
        pooled += &covs[g] * *w;
    }

    let mut m_means = DMatrix::zeros(p, p);
    for (g, w) in model.weights.iter().enumerate() {
        let d = &means[g] - &global_mean;
        m_means += (&d * d.transpose()) * *w;
    }

    let mut kernel = &m_means * chol.solve(&m_means);
    for (g, w) in model.weights.iter().enumerate() {
        let d = &covs[g] - &pooled;
        kernel += (&d * chol.solve(&d.transpose())) * *w;
    }

    let sym = (&kernel + kernel.transpose()) * 0.5;
    Ok(sym)
}

/// Solve `M v = l Sigma v` by Cholesky whitening: with `Sigma = L L'`, the
/// symmetric problem `L^{-1} M L^{-T} w = l w` is solved and the directions
/// back-transformed as `v = L^{-T} w`, which makes them Sigma-orthonormal by
/// construction. Eigenvalues below `1e-8` of the largest are dropped; one
/// direction is always retained.
pub fn solve_directions(m: &DMatrix<f64>, sigma_overall: &DMatrix<f64>) -> Result<SubspaceBasis> {
    let p = m.nrows();
    if m.ncols() != p || sigma_overall.nrows() != p || sigma_overall.ncols() != p {
        return Err(HmmdrError::domain(
            "kernel and overall covariance must be square with equal size".to_string(),
        ));
    }
    let chol = sigma_overall.clone().cholesky().ok_or_else(|| {
        HmmdrError::numerical(
            "overall covariance is not positive definite; cannot whiten".to_string(),
        )
    })?;
    let l = chol.l();
    let y = l
        .solve_lower_triangular(m)
        .ok_or_else(|| HmmdrError::numerical("triangular solve failed".to_string()))?;
    let w = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| HmmdrError::numerical("triangular solve failed".to_string()))?;
    let w = (&w + w.transpose()) * 0.5;

    let eig = w.symmetric_eigen();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let l_max = eig.eigenvalues[order[0]].max(0.0);
    let threshold = l_max * 1e-8;
    let mut keep: Vec<usize> = order
        .iter()
        .cloned()
        .filter(|&i| eig.eigenvalues[i] > threshold && eig.eigenvalues[i] > 0.0)
        .collect();
    if keep.is_empty() {
        // Degenerate kernel (e.g. a one-component model): keep the leading
        // direction so the pipeline always has at least one variable.
        keep.push(order[0]);
    }

    let lt = l.transpose();
    let mut directions = DMatrix::zeros(p, keep.len());
    let mut eigenvalues = Vec::with_capacity(keep.len());
    for (col, &i) in keep.iter().enumerate() {
        let wi = eig.eigenvectors.column(i).clone_owned();
        let v = lt
            .solve_upper_triangular(&wi)
            .ok_or_else(|| HmmdrError::numerical("triangular solve failed".to_string()))?;
        directions.set_column(col, &v);
        eigenvalues.push(eig.eigenvalues[i].max(0.0));
    }

    Ok(SubspaceBasis {
        directions,
        eigenvalues,
        sigma_overall: sigma_overall.clone(),
    })
}

/// Project rows of `x` onto the basis: `x * directions`.
pub fn project(x: &DMatrix<f64>, basis: &SubspaceBasis) -> Result<DMatrix<f64>> {
    if x.ncols() != basis.directions.nrows() {
        return Err(HmmdrError::domain(format!(
            "data has {} columns, basis expects {}",
            x.ncols(),
            basis.directions.nrows()
        )));
    }
    Ok(x * &basis.directions)
}
