//! Generalized hyperbolic component: parameters, log-density, moments of the
//! observed vector, and random generation through the normal mean-variance
//! mixture construction `x = mu + Y alpha + sqrt(Y) U` with
//! `Y ~ GIG(omega, 1, lambda)` and `U ~ N(0, Sigma)`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{HmmdrError, Result};
use crate::specfun::{self, GigParams};

/// Parameters of one generalized hyperbolic component.
#[derive(Debug, Clone)]
pub struct GhComponent {
    pub(crate) lambda: f64,
    pub(crate) omega: f64,
    pub(crate) mu: DVector<f64>,
    pub(crate) sigma: DMatrix<f64>,
    pub(crate) alpha: DVector<f64>,
}

impl GhComponent {
    pub fn new(
        lambda: f64,
        omega: f64,
        mu: DVector<f64>,
        sigma: DMatrix<f64>,
        alpha: DVector<f64>,
    ) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(HmmdrError::parameter(format!("index must be finite, got {lambda}")));
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(HmmdrError::parameter(format!(
                "concentration must be positive, got {omega}"
            )));
        }
        let p = mu.len();
        if alpha.len() != p || sigma.nrows() != p || sigma.ncols() != p {
            return Err(HmmdrError::parameter(format!(
                "dimension mismatch: mu {}, alpha {}, sigma {}x{}",
                p,
                alpha.len(),
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if mu.iter().chain(alpha.iter()).chain(sigma.iter()).any(|v| !v.is_finite()) {
            return Err(HmmdrError::parameter("non-finite component parameter".to_string()));
        }
        let scale = sigma.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..p {
            for j in (i + 1)..p {
                if (sigma[(i, j)] - sigma[(j, i)]).abs() > 1e-8 * scale {
                    return Err(HmmdrError::parameter(format!(
                        "scale matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if sigma.clone().cholesky().is_none() {
            return Err(HmmdrError::parameter(
                "scale matrix is not positive definite".to_string(),
            ));
        }
        Ok(GhComponent { lambda, omega, mu, sigma, alpha })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }
}

/// Squared Mahalanobis distance `(x - mu)' Sigma^{-1} (x - mu)`.
pub fn mahalanobis(x: &DVector<f64>, mu: &DVector<f64>, sigma: &DMatrix<f64>) -> Result<f64> {
    if x.len() != mu.len() || sigma.nrows() != x.len() || sigma.ncols() != x.len() {
        return Err(HmmdrError::domain(format!(
            "dimension mismatch: x {}, mu {}, sigma {}x{}",
            x.len(),
            mu.len(),
            sigma.nrows(),
            sigma.ncols()
        )));
    }
    let chol = sigma.clone().cholesky().ok_or_else(|| {
        HmmdrError::numerical(
            "scale matrix is singular or indefinite; cannot form Mahalanobis distance".to_string(),
        )
    })?;
    let diff = x - mu;
    let w = chol
        .l()
        .solve_lower_triangular(&diff)
        .ok_or_else(|| HmmdrError::numerical("triangular solve failed".to_string()))?;
    Ok(w.norm_squared())
}

/// Per-component quantities reused across density evaluations.
pub(crate) struct GhCache {
    chol: Cholesky<f64, Dyn>,
    pub(crate) sigma_inv_alpha: DVector<f64>,
    /// omega + alpha' Sigma^{-1} alpha
    pub(crate) psi: f64,
    /// lambda - p/2
    pub(crate) lambda_tilde: f64,
    /// -(p/2) log 2 pi - (1/2) log |Sigma| - log K_lambda(omega)
    log_const: f64,
}

impl GhCache {
    pub(crate) fn new(c: &GhComponent) -> Result<Self> {
        let p = c.dim();
        let chol = c.sigma.clone().cholesky().ok_or_else(|| {
            HmmdrError::numerical("scale matrix is not positive definite".to_string())
        })?;
        let log_det = 2.0 * chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        let sigma_inv_alpha = chol.solve(&c.alpha);
        let alpha_quad = c.alpha.dot(&sigma_inv_alpha);
        let log_k = specfun::log_bessel_k(c.lambda, c.omega)?;
        Ok(GhCache {
            chol,
            sigma_inv_alpha,
            psi: c.omega + alpha_quad,
            lambda_tilde: c.lambda - p as f64 / 2.0,
            log_const: -(p as f64 / 2.0) * (2.0 * std::f64::consts::PI).ln()
                - 0.5 * log_det
                - log_k,
        })
    }

    /// log density and the chi = omega + delta needed for the E-step moments.
    pub(crate) fn log_density_chi(&self, c: &GhComponent, x: &DVector<f64>) -> Result<(f64, f64)> {
        let diff = x - &c.mu;
        let w = self
            .chol
            .l_dirty()
            .solve_lower_triangular(&diff)
            .ok_or_else(|| HmmdrError::numerical("triangular solve failed".to_string()))?;
        let delta = w.norm_squared();
        let skew = diff.dot(&self.sigma_inv_alpha);
        let chi = c.omega + delta;
        let arg = (self.psi * chi).sqrt();
        let log_k = specfun::log_bessel_k(self.lambda_tilde, arg)?;
        let logf = self.log_const
            + 0.5 * self.lambda_tilde * (chi.ln() - self.psi.ln())
            + log_k
            + skew;
        Ok((logf, chi))
    }
}

/// Log of the generalized hyperbolic density at `x`.
pub fn gh_log_density(x: &DVector<f64>, theta: &GhComponent) -> Result<f64> {
    if x.len() != theta.dim() {
        return Err(HmmdrError::domain(format!(
            "x has dimension {}, component has {}",
            x.len(),
            theta.dim()
        )));
    }
    let cache = GhCache::new(theta)?;
    Ok(cache.log_density_chi(theta, x)?.0)
}

/// Mean of the observed vector: `mu + alpha` (eta fixed at 1).
pub fn gh_mean(theta: &GhComponent) -> DVector<f64> {
    &theta.mu + &theta.alpha
}

/// Covariance kernel of the observed vector: `Sigma + alpha alpha'`.
pub fn gh_covariance(theta: &GhComponent) -> DMatrix<f64> {
    &theta.sigma + &theta.alpha * theta.alpha.transpose()
}

/// Draw `n` GIG variates.
///
/// Ratio-of-uniforms with a shift to the mode; the bounding rectangle comes
/// from the exact stationarity cubic of `(y - mode)^2 h(y)`, so the sampler
/// is valid for every `(omega, lambda)`.
pub fn sample_gig<R: Rng + ?Sized>(p: &GigParams, rng: &mut R, n: usize) -> Vec<f64> {
    let sampler = GigSampler::new(p.omega, p.lambda);
    (0..n).map(|_| p.eta * sampler.draw(rng)).collect()
}

pub(crate) struct GigSampler {
    lambda: f64,
    omega: f64,
    mode: f64,
    log_h_mode: f64,
    v_lo: f64,
    v_hi: f64,
}

impl GigSampler {
    pub(crate) fn new(omega: f64, lambda: f64) -> Self {
        let mode = ((lambda - 1.0) + ((lambda - 1.0).powi(2) + omega * omega).sqrt()) / omega;
        let log_h = |y: f64| (lambda - 1.0) * y.ln() - 0.5 * omega * (y + 1.0 / y);
        let log_h_mode = log_h(mode);
        // v(y) = (y - mode) sqrt(h(y) / h(mode)); stationary points of v^2
        // solve y^3 + a2 y^2 + a1 y + a0 = 0.
        let a2 = -(2.0 * (lambda + 1.0) / omega + mode);
        let a1 = 2.0 * mode * (lambda - 1.0) / omega - 1.0;
        let a0 = mode;
        let v_at = |y: f64| (y - mode) * (0.5 * (log_h(y) - log_h_mode)).exp();

        let mut v_lo = 0.0f64;
        let mut v_hi = 0.0f64;
        for root in cubic_roots(a2, a1, a0) {
            if root.is_finite() && root > 0.0 {
                let v = v_at(root);
                if root < mode {
                    v_lo = v_lo.min(v);
                } else {
                    v_hi = v_hi.max(v);
                }
            }
        }
        // Fallback search in case root selection lost a side to rounding.
        if v_lo == 0.0 {
            v_lo = -scan_side_max(|y| -v_at(y), mode / 1e6, mode);
        }
        if v_hi == 0.0 {
            let mut upper = mode + 1.0;
            while log_h(upper) - log_h_mode > -800.0 && upper < 1e300 {
                upper *= 2.0;
            }
            v_hi = scan_side_max(v_at, mode, upper);
        }
        // Tiny inflation so floating-point error in the bound can never bias
        // the acceptance region.
        let pad = 1.0 + 1e-8;
        GigSampler {
            lambda,
            omega,
            mode,
            log_h_mode,
            v_lo: v_lo * pad,
            v_hi: v_hi * pad,
        }
    }

    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let u: f64 = rng.random();
            if u <= 0.0 {
                continue;
            }
            let w: f64 = rng.random();
            let v = self.v_lo + (self.v_hi - self.v_lo) * w;
            let y = self.mode + v / u;
            if y <= 0.0 {
                continue;
            }
            let log_h = (self.lambda - 1.0) * y.ln() - 0.5 * self.omega * (y + 1.0 / y);
            if 2.0 * u.ln() <= log_h - self.log_h_mode {
                return y;
            }
        }
    }
}

/// Coarse maximization used only as a fallback bound when a stationarity
/// root is lost to rounding: geometric grid scan followed by golden-section
/// refinement.
fn scan_side_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let (lo, hi) = (lo.max(1e-300), hi.max(lo * (1.0 + 1e-12)));
    let steps = 512;
    let ratio = (hi / lo).powf(1.0 / steps as f64);
    let mut best_x = lo;
    let mut best = f64::NEG_INFINITY;
    let mut x = lo;
    for _ in 0..=steps {
        let v = f(x);
        if v > best {
            best = v;
            best_x = x;
        }
        x *= ratio;
    }
    let (mut a, mut b) = (best_x / ratio, best_x * ratio);
    let inv_phi = 0.618_033_988_749_894_9;
    for _ in 0..80 {
        let c = b - inv_phi * (b - a);
        let d = a + inv_phi * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    f(0.5 * (a + b)).max(best)
}

/// Real roots of the monic cubic `y^3 + a y^2 + b y + c`.
fn cubic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = 0.25 * q * q + p * p * p / 27.0;
    if disc > 0.0 {
        let r = disc.sqrt();
        let y = (-0.5 * q + r).cbrt() + (-0.5 * q - r).cbrt();
        vec![y - shift]
    } else if p.abs() < 1e-300 {
        vec![(-q).cbrt() - shift]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let theta = (3.0 * q / (p * m)).clamp(-1.0, 1.0).acos() / 3.0;
        (0..3)
            .map(|k| {
                m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift
            })
            .collect()
    }
}

/// Draw `n` observations from a generalized hyperbolic component.
pub fn sample_gh<R: Rng + ?Sized>(
    theta: &GhComponent,
    rng: &mut R,
    n: usize,
) -> Result<DMatrix<f64>> {
    let gig = GigParams::with_unit_eta(theta.omega, theta.lambda)?;
    let ys = sample_gig(&gig, rng, n);
    sample_gh_given_y(theta, &ys, rng)
}

/// Normal mean-variance mixture draws with the latent variates supplied by
/// the caller; `ys = 1` for every row collapses to `N(mu, Sigma)`.
pub fn sample_gh_given_y<R: Rng + ?Sized>(
    theta: &GhComponent,
    ys: &[f64],
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let p = theta.dim();
    let chol = theta
        .sigma
        .clone()
        .cholesky()
        .ok_or_else(|| HmmdrError::numerical("scale matrix is not positive definite".to_string()))?;
    let l = chol.l();
    let mut out = DMatrix::zeros(ys.len(), p);
    let mut z = DVector::zeros(p);
    for (i, &y) in ys.iter().enumerate() {
        if !y.is_finite() || y <= 0.0 {
            return Err(HmmdrError::domain(format!(
                "latent mixing value must be positive, got {y} at row {i}"
            )));
        }
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(rng);
        }
        let x = &theta.mu + &theta.alpha * y + (&l * &z) * y.sqrt();
        out.row_mut(i).copy_from(&x.transpose());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn component_1d(lambda: f64, omega: f64, mu: f64, sigma: f64, alpha: f64) -> GhComponent {
        GhComponent::new(
            lambda,
            omega,
            DVector::from_element(1, mu),
            DMatrix::from_element(1, 1, sigma),
            DVector::from_element(1, alpha),
        )
        .unwrap()
    }

    #[test]
    fn mahalanobis_zero_at_center_and_euclidean_under_identity() {
        let mu = DVector::from_row_slice(&[1.0, -2.0]);
        let sigma = DMatrix::identity(2, 2);
        assert_eq!(mahalanobis(&mu, &mu, &sigma).unwrap(), 0.0);
        let x = DVector::from_row_slice(&[4.0, 2.0]);
        assert_relative_eq!(mahalanobis(&x, &mu, &sigma).unwrap(), 25.0, epsilon = 1e-12);
    }

    #[test]
    fn mahalanobis_rejects_singular_scale() {
        let mu = DVector::zeros(2);
        let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let err = mahalanobis(&mu, &mu, &sigma).unwrap_err();
        assert!(matches!(err, HmmdrError::Numerical(_)));
    }

    #[test]
    fn component_validation() {
        let ok = GhComponent::new(
            0.5,
            1.0,
            DVector::zeros(2),
            DMatrix::identity(2, 2),
            DVector::zeros(2),
        );
        assert!(ok.is_ok());
        let bad_omega = GhComponent::new(
            0.5,
            -1.0,
            DVector::zeros(2),
            DMatrix::identity(2, 2),
            DVector::zeros(2),
        );
        assert!(bad_omega.is_err());
        let asym = GhComponent::new(
            0.5,
            1.0,
            DVector::zeros(2),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.5, -0.5, 1.0]),
            DVector::zeros(2),
        );
        assert!(asym.is_err());
    }

    #[test]
    fn density_symmetric_when_skewness_vanishes() {
        let c = GhComponent::new(
            1.0,
            2.0,
            DVector::from_row_slice(&[0.5, -1.0]),
            DMatrix::from_row_slice(2, 2, &[1.3, 0.4, 0.4, 0.9]),
            DVector::zeros(2),
        )
        .unwrap();
        for t in [
            DVector::from_row_slice(&[0.7, 0.1]),
            DVector::from_row_slice(&[-1.2, 2.0]),
        ] {
            let plus = gh_log_density(&(c.mu() + &t), &c).unwrap();
            let minus = gh_log_density(&(c.mu() - &t), &c).unwrap();
            assert_relative_eq!(plus, minus, epsilon = 1e-10);
        }
    }

    #[test]
    fn density_invariant_under_coordinate_permutation() {
        let c = GhComponent::new(
            0.7,
            1.5,
            DVector::from_row_slice(&[0.3, -0.8, 1.1]),
            DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 1.5]),
            DVector::from_row_slice(&[0.5, -0.1, 0.2]),
        )
        .unwrap();
        let x = DVector::from_row_slice(&[1.0, 0.2, -0.4]);
        let perm = [2usize, 0, 1];
        let permuted = GhComponent::new(
            0.7,
            1.5,
            DVector::from_fn(3, |i, _| c.mu()[perm[i]]),
            DMatrix::from_fn(3, 3, |i, j| c.sigma()[(perm[i], perm[j])]),
            DVector::from_fn(3, |i, _| c.alpha()[perm[i]]),
        )
        .unwrap();
        let xp = DVector::from_fn(3, |i, _| x[perm[i]]);
        assert_relative_eq!(
            gh_log_density(&x, &c).unwrap(),
            gh_log_density(&xp, &permuted).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn mean_and_covariance_formulas() {
        let c = GhComponent::new(
            1.0,
            2.0,
            DVector::from_row_slice(&[1.0, 2.0]),
            DMatrix::identity(2, 2),
            DVector::from_row_slice(&[0.5, -0.5]),
        )
        .unwrap();
        assert_eq!(gh_mean(&c), DVector::from_row_slice(&[1.5, 1.5]));
        let cov = gh_covariance(&c);
        let expected =
            DMatrix::from_row_slice(2, 2, &[1.25, -0.25, -0.25, 1.25]);
        assert_relative_eq!((cov - expected).norm(), 0.0, epsilon = 1e-12);

        let plain = component_1d(1.0, 2.0, 0.0, 1.5, 0.0);
        assert_eq!(gh_covariance(&plain)[(0, 0)], 1.5);
        assert_eq!(gh_mean(&plain)[0], 0.0);
    }

    #[test]
    fn gig_draws_are_positive_and_deterministic() {
        let p = GigParams::with_unit_eta(1.3, -0.4).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let a = sample_gig(&p, &mut rng, 500);
        assert!(a.iter().all(|&y| y > 0.0));
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let b = sample_gig(&p, &mut rng, 500);
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_mixing_gives_multivariate_normal_moments() {
        let c = GhComponent::new(
            1.0,
            1.0,
            DVector::from_row_slice(&[2.0, -1.0]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 0.5]),
            DVector::zeros(2),
        )
        .unwrap();
        let n = 40_000;
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let x = sample_gh_given_y(&c, &vec![1.0; n], &mut rng).unwrap();
        let mean = x.row_mean();
        assert!((mean[0] - 2.0).abs() < 3.0 * (1.0f64 / n as f64).sqrt() * 1.5);
        assert!((mean[1] + 1.0).abs() < 3.0 * (0.5f64 / n as f64).sqrt() * 1.5);
        let mut cov = DMatrix::zeros(2, 2);
        for i in 0..n {
            let d = DVector::from_row_slice(&[x[(i, 0)] - mean[0], x[(i, 1)] - mean[1]]);
            cov += &d * d.transpose();
        }
        cov /= n as f64;
        assert!((cov[(0, 0)] - 1.0).abs() < 0.03);
        assert!((cov[(0, 1)] - 0.3).abs() < 0.03);
        assert!((cov[(1, 1)] - 0.5).abs() < 0.03);
    }

    #[test]
    fn gh_sampling_rejects_bad_latents() {
        let c = component_1d(1.0, 1.0, 0.0, 1.0, 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        assert!(sample_gh_given_y(&c, &[1.0, -2.0], &mut rng).is_err());
    }
}
