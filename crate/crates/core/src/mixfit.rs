//! EM fitting of generalized hyperbolic mixtures under the clustering,
//! classification (semi-supervised), and discriminant-analysis likelihoods,
//! with Aitken-accelerated stopping, BIC selection of the component count,
//! and MAP classification.

mod ward;

use nalgebra::{DMatrix, DVector};

use crate::dataset::Dataset;
use crate::error::{HmmdrError, Result};
use crate::ghd::{GhCache, GhComponent};
use crate::specfun::{self, log_sum_exp};
use ward::WardTree;

/// Learning paradigm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Unsupervised: labels, if any, are ignored.
    Clustering,
    /// Semi-supervised: rows with known labels are pinned one-hot, all rows
    /// drive parameter estimation.
    Classification,
    /// Supervised: parameters are estimated from known rows only, one
    /// component per class; remaining rows are scored afterwards.
    Discriminant,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Clustering => write!(f, "clustering"),
            Mode::Classification => write!(f, "classification"),
            Mode::Discriminant => write!(f, "discriminant"),
        }
    }
}

/// EM settings.
#[derive(Debug, Clone)]
pub struct FitConfig {
    /// Aitken tolerance.
    pub epsilon: f64,
    /// Cap on EM iterations (E-steps).
    pub max_iter: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { epsilon: 1e-5, max_iter: 500 }
    }
}

/// A fitted generalized hyperbolic mixture.
#[derive(Debug, Clone)]
pub struct MixtureModel {
    /// Mixing proportions; strictly positive, sum to one.
    pub weights: Vec<f64>,
    pub components: Vec<GhComponent>,
    /// Observed log-likelihood after each E-step.
    pub loglik_trace: Vec<f64>,
    /// `2 l - r log n` for the data the model was fitted on.
    pub bic: f64,
    pub mode: Mode,
}

impl MixtureModel {
    pub fn g(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    /// Final observed log-likelihood.
    pub fn loglik(&self) -> f64 {
        *self.loglik_trace.last().unwrap_or(&f64::NEG_INFINITY)
    }
}

/// Posterior membership probabilities and conditional moments of the latent
/// mixing variable, one entry per (row, component).
#[derive(Debug, Clone)]
pub struct Responsibilities {
    /// `n x G`; rows sum to one, known rows are exactly one-hot.
    pub z_hat: DMatrix<f64>,
    /// E[Y | x_i, component g]
    pub y: DMatrix<f64>,
    /// E[1/Y | x_i, component g]
    pub y_inv: DMatrix<f64>,
    /// E[log Y | x_i, component g]
    pub log_y: DMatrix<f64>,
    /// Mixture log-density of each row (log-sum-exp of the weighted
    /// component terms; for known rows, the pinned component's term).
    pub row_loglik: Vec<f64>,
}

/// E-step: posterior responsibilities and conditional GIG moments under
/// `model`. Rows whose label is known (and the mode is not clustering) are
/// pinned one-hot.
pub fn e_step(data: &Dataset, model: &MixtureModel) -> Result<Responsibilities> {
    Ok(e_step_with_loglik(data, model)?.0)
}

fn e_step_with_loglik(data: &Dataset, model: &MixtureModel) -> Result<(Responsibilities, f64)> {
    let n = data.n();
    let g = model.g();
    if data.p() != model.dim() {
        return Err(HmmdrError::parameter(format!(
            "data has {} columns, model expects {}",
            data.p(),
            model.dim()
        )));
    }
    let caches: Vec<GhCache> = model
        .components
        .iter()
        .map(GhCache::new)
        .collect::<Result<_>>()?;
    let log_w: Vec<f64> = model.weights.iter().map(|w| w.ln()).collect();

    let mut z = DMatrix::zeros(n, g);
    let mut y = DMatrix::from_element(n, g, 1.0);
    let mut y_inv = DMatrix::from_element(n, g, 1.0);
    let mut log_y = DMatrix::zeros(n, g);
    let mut row_loglik = vec![0.0; n];
    let mut loglik = 0.0;
    let mut terms = vec![0.0; g];
    let mut xi = DVector::zeros(data.p());

    for i in 0..n {
        xi.copy_from(&data.x().row(i).transpose());
        let pinned = match model.mode {
            Mode::Clustering => None,
            _ => data.known_label(i),
        };
        if let Some(k) = pinned {
            if k >= g {
                return Err(HmmdrError::fitting(format!(
                    "row {i} has known class {k} but the model has only {g} components"
                )));
            }
            let (logf, chi) = caches[k].log_density_chi(&model.components[k], &xi)?;
            if !logf.is_finite() {
                return Err(HmmdrError::fitting(format!(
                    "non-finite density at row {i}, component {k}"
                )));
            }
            z[(i, k)] = 1.0;
            let m = specfun::gig_conditional_moments(caches[k].psi, chi, caches[k].lambda_tilde)?;
            y[(i, k)] = m.y;
            y_inv[(i, k)] = m.y_inv;
            log_y[(i, k)] = m.log_y;
            row_loglik[i] = log_w[k] + logf;
        } else {
            for (j, cache) in caches.iter().enumerate() {
                let (logf, chi) = cache.log_density_chi(&model.components[j], &xi)?;
                if !logf.is_finite() {
                    return Err(HmmdrError::fitting(format!(
                        "non-finite density at row {i}, component {j}"
                    )));
                }
                terms[j] = log_w[j] + logf;
                let m = specfun::gig_conditional_moments(cache.psi, chi, cache.lambda_tilde)?;
                y[(i, j)] = m.y;
                y_inv[(i, j)] = m.y_inv;
                log_y[(i, j)] = m.log_y;
            }
            let lse = log_sum_exp(&terms);
            if !lse.is_finite() {
                return Err(HmmdrError::fitting(format!(
                    "non-finite mixture density at row {i}"
                )));
            }
            let mut row_sum = 0.0;
            for j in 0..g {
                let v = (terms[j] - lse).exp();
                z[(i, j)] = v;
                row_sum += v;
            }
            for j in 0..g {
                z[(i, j)] /= row_sum;
            }
            row_loglik[i] = lse;
        }
        loglik += row_loglik[i];
    }

    Ok((Responsibilities { z_hat: z, y, y_inv, log_y, row_loglik }, loglik))
}

/// M-step: closed-form weighted updates for the mixing proportions, location,
/// skewness, and scale, and a bounded coordinate ascent for the GIG shape
/// pair. `current` supplies the mode and the shape starting points.
pub fn m_step(
    data: &Dataset,
    resp: &Responsibilities,
    current: &MixtureModel,
) -> Result<MixtureModel> {
    let (weights, components) = update_params(data, resp, current)?;
    Ok(MixtureModel {
        weights,
        components,
        loglik_trace: current.loglik_trace.clone(),
        bic: current.bic,
        mode: current.mode,
    })
}

fn update_params(
    data: &Dataset,
    resp: &Responsibilities,
    current: &MixtureModel,
) -> Result<(Vec<f64>, Vec<GhComponent>)> {
    let n = data.n();
    let p = data.p();
    let g = current.g();
    let min_size = (p + 1) as f64;

    let mut z = resp.z_hat.clone();
    let mut grabbed: Vec<bool> = vec![false; n];
    let mut reinits = 0usize;
    let sizes = loop {
        let sizes: Vec<f64> = (0..g).map(|j| z.column(j).sum()).collect();
        let collapsed = sizes.iter().position(|&s| s < min_size);
        let Some(comp) = collapsed else { break sizes };
        reinits += 1;
        if reinits > 3 {
            return Err(HmmdrError::fitting(format!(
                "component {comp} collapsed (effective size below {min_size}) and re-initialization failed"
            )));
        }
        // Hand the worst-fitting free rows to the collapsed component.
        let mut order: Vec<usize> = (0..n)
            .filter(|&i| {
                !grabbed[i]
                    && (current.mode == Mode::Clustering || data.known_label(i).is_none())
            })
            .collect();
        order.sort_by(|&a, &b| {
            resp.row_loglik[a]
                .partial_cmp(&resp.row_loglik[b])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let need = p + 2;
        if order.len() < need {
            return Err(HmmdrError::fitting(format!(
                "component {comp} collapsed and too few free rows remain to re-seed it"
            )));
        }
        for &i in order.iter().take(need) {
            grabbed[i] = true;
            for j in 0..g {
                z[(i, j)] = 0.0;
            }
            z[(i, comp)] = 1.0;
        }
    };

    let mut weights = Vec::with_capacity(g);
    let mut components = Vec::with_capacity(g);
    for j in 0..g {
        let ng = sizes[j];
        weights.push(ng / n as f64);

        let mut a_bar = 0.0;
        let mut b_bar = 0.0;
        let mut c_bar = 0.0;
        let mut x_bar = DVector::zeros(p);
        let mut xb_bar = DVector::zeros(p);
        for i in 0..n {
            let w = z[(i, j)];
            if w == 0.0 {
                continue;
            }
            a_bar += w * resp.y[(i, j)];
            b_bar += w * resp.y_inv[(i, j)];
            c_bar += w * resp.log_y[(i, j)];
            for c in 0..p {
                x_bar[c] += w * data.x()[(i, c)];
                xb_bar[c] += w * resp.y_inv[(i, j)] * data.x()[(i, c)];
            }
        }
        a_bar /= ng;
        b_bar /= ng;
        c_bar /= ng;
        x_bar /= ng;
        xb_bar /= ng;

        let denom = a_bar * b_bar - 1.0;
        let (mu, alpha) = if denom.abs() < 1e-10 {
            // Degenerate mixing distribution: Gaussian limit.
            (x_bar.clone(), DVector::zeros(p))
        } else {
            (
                (&xb_bar * a_bar - &x_bar) / denom,
                (&x_bar * b_bar - &xb_bar) / denom,
            )
        };

        let mut scatter = DMatrix::zeros(p, p);
        let mut diff = DVector::zeros(p);
        for i in 0..n {
            let w = z[(i, j)];
            if w == 0.0 {
                continue;
            }
            for c in 0..p {
                diff[c] = data.x()[(i, c)] - mu[c];
            }
            let wb = w * resp.y_inv[(i, j)];
            for r in 0..p {
                for c in r..p {
                    scatter[(r, c)] += wb * diff[r] * diff[c];
                }
            }
        }
        scatter /= ng;
        for r in 0..p {
            for c in 0..r {
                scatter[(r, c)] = scatter[(c, r)];
            }
        }
        let centred = &x_bar - &mu;
        scatter -= &centred * alpha.transpose();
        scatter -= &alpha * centred.transpose();
        scatter += (&alpha * alpha.transpose()) * a_bar;
        let sigma = floor_spd(&scatter)?;

        let prev = &current.components[j];
        let (lambda, omega) = update_shape(prev.lambda(), prev.omega(), a_bar, b_bar, c_bar);

        components.push(GhComponent::new(lambda, omega, mu, sigma, alpha)?);
    }

    Ok((weights, components))
}

/// Symmetrize and floor the eigenvalues of an updated scale matrix at
/// `1e-6 trace / p` (with a tiny absolute floor for fully degenerate cases).
fn floor_spd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let p = m.nrows();
    if m.iter().any(|v| !v.is_finite()) {
        return Err(HmmdrError::fitting(
            "scale update produced non-finite entries".to_string(),
        ));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let trace: f64 = eig.eigenvalues.iter().sum::<f64>().max(0.0);
    let floor = (1e-6 * trace / p as f64).max(1e-12);
    let vals = DVector::from_fn(p, |i, _| eig.eigenvalues[i].max(floor));
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose())
}

/// Bounded coordinate ascent of
/// `q(lambda, omega) = -log K_lambda(omega) + (lambda - 1) c - (omega / 2)(a + b)`,
/// golden-section per coordinate (log scale in omega); never returns a point
/// with smaller `q` than the starting one.
fn update_shape(lambda0: f64, omega0: f64, a_bar: f64, b_bar: f64, c_bar: f64) -> (f64, f64) {
    const LAMBDA_LO: f64 = -20.0;
    const LAMBDA_HI: f64 = 20.0;
    const OMEGA_LO: f64 = 1e-4;
    const OMEGA_HI: f64 = 1e4;

    let q = |l: f64, w: f64| -> f64 {
        match specfun::log_bessel_k(l, w) {
            Ok(lk) => -lk + (l - 1.0) * c_bar - 0.5 * w * (a_bar + b_bar),
            Err(_) => f64::NEG_INFINITY,
        }
    };

    let start = (
        lambda0.clamp(LAMBDA_LO, LAMBDA_HI),
        omega0.clamp(OMEGA_LO, OMEGA_HI),
    );
    let q_start = q(start.0, start.1);

    let mut lambda = start.0;
    let mut omega = start.1;
    for _ in 0..2 {
        lambda = golden_max(|l| q(l, omega), LAMBDA_LO, LAMBDA_HI);
        let lw = golden_max(|lw| q(lambda, lw.exp()), OMEGA_LO.ln(), OMEGA_HI.ln());
        omega = lw.exp();
    }
    if q(lambda, omega) >= q_start {
        (lambda, omega)
    } else {
        start
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..48 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        c
    } else {
        d
    }
}

/// Aitken-accelerated stopping rule on the last three log-likelihoods:
/// converged when the extrapolated asymptote exceeds the current value by a
/// positive amount smaller than `epsilon`. A stationary sequence counts as
/// converged; non-finite input does not.
pub fn aitken_converged(loglik: &[f64], epsilon: f64) -> bool {
    if loglik.len() < 3 || !epsilon.is_finite() || epsilon <= 0.0 {
        return false;
    }
    let l0 = loglik[loglik.len() - 3];
    let l1 = loglik[loglik.len() - 2];
    let l2 = loglik[loglik.len() - 1];
    if !l0.is_finite() || !l1.is_finite() || !l2.is_finite() {
        return false;
    }
    let d1 = l1 - l0;
    let d2 = l2 - l1;
    if d2 == 0.0 {
        return true;
    }
    if d1 == 0.0 {
        return false;
    }
    let a = d2 / d1;
    if a >= 1.0 {
        return false;
    }
    let gap = d2 / (1.0 - a); // l_infinity - l^(k)
    gap > 0.0 && gap < epsilon
}

/// Bayesian information criterion `2 l - r log n`.
pub fn bic(loglik: f64, r: usize, n: usize) -> f64 {
    2.0 * loglik - (r as f64) * (n as f64).ln()
}

/// Free parameters of a `g`-component generalized hyperbolic mixture in
/// dimension `p`: `g - 1` weights plus, per component, the shape pair, the
/// location and skewness vectors, and the scale matrix.
pub fn free_parameter_count(g: usize, p: usize) -> usize {
    (g - 1) + g * (2 + 2 * p + p * (p + 1) / 2)
}

/// MAP classification: per-row argmax of the responsibilities, ties broken
/// towards the lowest component index.
pub fn map_classify(resp: &Responsibilities) -> Vec<usize> {
    let mut out = Vec::with_capacity(resp.z_hat.nrows());
    for i in 0..resp.z_hat.nrows() {
        let mut best = 0usize;
        let mut best_v = resp.z_hat[(i, 0)];
        for j in 1..resp.z_hat.ncols() {
            if resp.z_hat[(i, j)] > best_v {
                best_v = resp.z_hat[(i, j)];
                best = j;
            }
        }
        out.push(best);
    }
    out
}

/// Fit a mixture under `mode`, searching the inclusive component range and
/// returning the best-BIC model (clustering and classification) or the
/// one-component-per-class fit on the known rows (discriminant analysis).
///
/// Fitting is deterministic: initialization is Ward-linkage agglomeration
/// (plus class anchoring where labels are known), and every numerical step
/// is seed-free.
pub fn fit_mixture(
    data: &Dataset,
    mode: Mode,
    g_range: (usize, usize),
    config: &FitConfig,
) -> Result<MixtureModel> {
    let (g_min, g_max) = g_range;
    if g_min < 1 || g_min > g_max {
        return Err(HmmdrError::domain(format!(
            "invalid component range {g_min}..={g_max}"
        )));
    }

    match mode {
        Mode::Clustering => {
            let ward = WardTree::build(data.x());
            let mut candidates = Vec::new();
            for g in g_min..=g_max.min(data.n()) {
                let init = ward.cut(g);
                candidates.push((g, em_fit(data, mode, g, &init, config)));
            }
            pick_best(candidates)
        }
        Mode::Classification => {
            let classes = data.known_class_count()?;
            let lo = g_min.max(classes);
            if lo > g_max {
                return Err(HmmdrError::domain(format!(
                    "component range {g_min}..={g_max} cannot hold the {classes} known classes"
                )));
            }
            let mut ward: Option<WardTree> = None;
            let mut candidates = Vec::new();
            for g in lo..=g_max.min(data.n()) {
                if g > classes && ward.is_none() {
                    ward = Some(WardTree::build(data.x()));
                }
                let init = classification_init(data, g, classes, ward.as_ref());
                candidates.push((g, em_fit(data, mode, g, &init, config)));
            }
            pick_best(candidates)
        }
        Mode::Discriminant => {
            let (sub, _) = data.known_subset()?;
            let classes = sub.known_class_count()?;
            let init: Vec<usize> = (0..sub.n())
                .map(|i| sub.known_label(i).unwrap())
                .collect();
            em_fit(&sub, mode, classes, &init, config)
        }
    }
}

/// Fit a single component count from an explicit hard initial assignment.
/// Used by the search above and directly testable (e.g. label-permutation
/// equivariance of the fit).
pub fn fit_with_initial_assignment(
    data: &Dataset,
    mode: Mode,
    g: usize,
    init: &[usize],
    config: &FitConfig,
) -> Result<MixtureModel> {
    if init.len() != data.n() {
        return Err(HmmdrError::domain(format!(
            "initial assignment has {} entries for {} rows",
            init.len(),
            data.n()
        )));
    }
    if init.iter().any(|&c| c >= g) {
        return Err(HmmdrError::domain(format!(
            "initial assignment references a component >= {g}"
        )));
    }
    em_fit(data, mode, g, init, config)
}

fn pick_best(candidates: Vec<(usize, Result<MixtureModel>)>) -> Result<MixtureModel> {
    let mut best: Option<MixtureModel> = None;
    let mut causes = Vec::new();
    for (g, outcome) in candidates {
        match outcome {
            Ok(model) => {
                let better = best
                    .as_ref()
                    .map(|b| model.bic > b.bic)
                    .unwrap_or(true);
                if better {
                    best = Some(model);
                }
            }
            Err(e) => causes.push(format!("G={g}: {e}")),
        }
    }
    best.ok_or(HmmdrError::AllFitsFailed { causes })
}

/// Anchor components 0..classes-1 at the known class centroids; when extra
/// components are requested, seed them with the Ward clusters farthest from
/// every class centroid. Unknown rows go to the nearest seed.
fn classification_init(
    data: &Dataset,
    g: usize,
    classes: usize,
    ward: Option<&WardTree>,
) -> Vec<usize> {
    let p = data.p();
    let n = data.n();
    let mut seeds: Vec<DVector<f64>> = Vec::with_capacity(g);
    for class in 0..classes {
        let mut c = DVector::zeros(p);
        let mut count = 0.0;
        for i in 0..n {
            if data.known_label(i) == Some(class) {
                c += data.x().row(i).transpose();
                count += 1.0;
            }
        }
        seeds.push(c / count);
    }
    if g > classes {
        let cut = ward.expect("ward tree required for extra components").cut(g);
        let mut centroids = vec![DVector::zeros(p); g];
        let mut counts = vec![0.0f64; g];
        for i in 0..n {
            centroids[cut[i]] += data.x().row(i).transpose();
            counts[cut[i]] += 1.0;
        }
        for (c, &k) in centroids.iter_mut().zip(&counts) {
            if k > 0.0 {
                *c /= k;
            }
        }
        // Farthest-from-any-class clusters become the extra seeds.
        let mut ranked: Vec<(usize, f64)> = (0..g)
            .filter(|&c| counts[c] > 0.0)
            .map(|c| {
                let d = seeds
                    .iter()
                    .map(|s| (&centroids[c] - s).norm_squared())
                    .fold(f64::INFINITY, f64::min);
                (c, d)
            })
            .collect();
        ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        for (c, _) in ranked.into_iter().take(g - classes) {
            seeds.push(centroids[c].clone());
        }
        // Degenerate data may not yield enough distinct clusters; duplicate
        // the last seed so the component count is respected.
        while seeds.len() < g {
            seeds.push(seeds.last().unwrap().clone());
        }
    }

    (0..n)
        .map(|i| {
            if let Some(class) = data.known_label(i) {
                class
            } else {
                let xi = data.x().row(i).transpose();
                let mut best = 0usize;
                let mut best_d = f64::INFINITY;
                for (s, seed) in seeds.iter().enumerate() {
                    let d = (&xi - seed).norm_squared();
                    if d < best_d {
                        best_d = d;
                        best = s;
                    }
                }
                best
            }
        })
        .collect()
}

fn em_fit(
    data: &Dataset,
    mode: Mode,
    g: usize,
    init: &[usize],
    config: &FitConfig,
) -> Result<MixtureModel> {
    let (weights, components) = initial_params(data, g, init)?;
    let mut model = MixtureModel {
        weights,
        components,
        loglik_trace: Vec::new(),
        bic: f64::NAN,
        mode,
    };
    for _ in 0..config.max_iter.max(1) {
        let (resp, ll) = e_step_with_loglik(data, &model)?;
        model.loglik_trace.push(ll);
        if aitken_converged(&model.loglik_trace, config.epsilon) {
            break;
        }
        let (w, c) = update_params(data, &resp, &model)?;
        model.weights = w;
        model.components = c;
    }
    let r = free_parameter_count(g, data.p());
    model.bic = bic(model.loglik(), r, data.n());
    Ok(model)
}

/// Moment-based parameters from a hard assignment: per-group mean and
/// covariance (global covariance for tiny groups), zero skewness, unit
/// shape pair.
fn initial_params(
    data: &Dataset,
    g: usize,
    init: &[usize],
) -> Result<(Vec<f64>, Vec<GhComponent>)> {
    let n = data.n();
    let p = data.p();
    let global_mean = data.x().row_mean().transpose();
    let mut global_cov = DMatrix::zeros(p, p);
    for i in 0..n {
        let d = data.x().row(i).transpose() - &global_mean;
        global_cov += &d * d.transpose();
    }
    global_cov /= n as f64;

    let mut weights = Vec::with_capacity(g);
    let mut comps = Vec::with_capacity(g);
    for j in 0..g {
        let rows: Vec<usize> = (0..n).filter(|&i| init[i] == j).collect();
        if rows.is_empty() {
            return Err(HmmdrError::fitting(format!(
                "initial assignment left component {j} empty"
            )));
        }
        let mut mean = DVector::zeros(p);
        for &i in &rows {
            mean += data.x().row(i).transpose();
        }
        mean /= rows.len() as f64;
        let sigma = if rows.len() >= p + 2 {
            let mut cov = DMatrix::zeros(p, p);
            for &i in &rows {
                let d = data.x().row(i).transpose() - &mean;
                cov += &d * d.transpose();
            }
            cov /= rows.len() as f64;
            cov
        } else {
            global_cov.clone()
        };
        let sigma = floor_spd(&sigma)?;
        weights.push(rows.len() as f64 / n as f64);
        comps.push(GhComponent::new(1.0, 1.0, mean, sigma, DVector::zeros(p))?);
    }
    Ok((weights, comps))
}
