//! Shared oracles for the integration suites: adaptive quadrature, an
//! integral-representation evaluation of log K independent of the library's
//! series/expansion code path, GIG moment quadrature, set-partition
//! enumeration, and a brute-force pair-counting ARI.

#![allow(dead_code)]

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// `ln cosh(u)` without overflow.
fn ln_cosh(u: f64) -> f64 {
    let a = u.abs();
    a - std::f64::consts::LN_2 + (-2.0 * a).exp().ln_1p()
}

/// `ln int exp(ln_f)` over `[lo, hi]`: scale by the grid maximum, integrate
/// the normalized integrand, and return the log.
pub fn log_integral_exp(ln_f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let grid = 4096;
    let mut peak = f64::NEG_INFINITY;
    for i in 0..=grid {
        let t = lo + (hi - lo) * i as f64 / grid as f64;
        peak = peak.max(ln_f(t));
    }
    let g = |t: f64| {
        let v = ln_f(t) - peak;
        if v < -745.0 {
            0.0
        } else {
            v.exp()
        }
    };
    let integral = adaptive_simpson(&g, lo, hi, 1e-13);
    peak + integral.ln()
}

/// Quadrature oracle for `log K_nu(x)` from the integral representation
/// `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt`, evaluated with the
/// factor `exp(-x)` pulled out so large arguments stay representable.
pub fn log_bessel_k_quadrature(nu: f64, x: f64) -> f64 {
    let nu = nu.abs();
    // exponent of the scaled integrand: -x (cosh t - 1) + ln cosh(nu t)
    let ln_f = move |t: f64| -x * 2.0 * (0.5 * t).sinh().powi(2) + ln_cosh(nu * t);
    let peak_t = (nu / x).asinh();
    let mut hi = peak_t + 1.0;
    let peak_val = ln_f(peak_t);
    while ln_f(hi) > peak_val - 120.0 {
        hi += 1.0;
    }
    -x + log_integral_exp(&ln_f, 0.0, hi)
}

/// Weighted integral `int_0^inf w(y) f(y) dy` of a positive density given on
/// the log scale, by quadrature after the substitution `y = e^u`. The weight
/// may be signed (e.g. `ln y`).
pub fn density_weighted_quadrature(
    log_density: &dyn Fn(f64) -> f64,
    weight: &dyn Fn(f64) -> f64,
) -> f64 {
    // density part of the integrand in u, used for scaling and bounds
    let ln_d = move |u: f64| log_density(u.exp()) + u;
    let mut lo = -1.0f64;
    let mut hi = 1.0f64;
    let mut peak = ln_d(0.0);
    for _ in 0..500 {
        peak = peak.max(ln_d(lo)).max(ln_d(hi));
        let mut grown = false;
        if ln_d(lo) > peak - 120.0 {
            lo -= 1.0;
            grown = true;
        }
        if ln_d(hi) > peak - 120.0 {
            hi += 1.0;
            grown = true;
        }
        if !grown {
            break;
        }
    }
    let g = move |u: f64| {
        let v = ln_d(u) - peak;
        if v < -745.0 {
            0.0
        } else {
            v.exp() * weight(u.exp())
        }
    };
    peak.exp() * adaptive_simpson(&g, lo, hi, 1e-13)
}

/// Every partition of `n` items as restricted-growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn rec(current: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for v in 0..=max_used + 1 {
            current[pos] = v;
            rec(current, pos + 1, max_used.max(v), out);
        }
    }
    if n == 0 {
        return out;
    }
    rec(&mut current, 1, 0, &mut out);
    out
}

/// Chance-corrected pairwise agreement computed directly from the four pair
/// categories, independent of any contingency-table bookkeeping.
pub fn brute_force_ari(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let (mut n11, mut n00, mut n10, mut n01) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..n {
        for j in (i + 1)..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => n11 += 1.0,
                (false, false) => n00 += 1.0,
                (true, false) => n10 += 1.0,
                (false, true) => n01 += 1.0,
            }
        }
    }
    let num = 2.0 * (n00 * n11 - n01 * n10);
    let den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
    if den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / std::f64::consts::SQRT_2))
}

/// Kolmogorov-Smirnov statistic of a sample against a CDF.
pub fn ks_statistic(sample: &mut [f64], cdf: &dyn Fn(f64) -> f64) -> f64 {
    sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sample.len() as f64;
    let mut d = 0.0f64;
    for (i, &y) in sample.iter().enumerate() {
        let f = cdf(y);
        d = d.max((f - i as f64 / n).abs());
        d = d.max((f - (i as f64 + 1.0) / n).abs());
    }
    d
}

/// Inverse-Gaussian CDF with unit mean and shape `omega`; the closed form of
/// GIG(omega, 1, -1/2).
pub fn inverse_gaussian_cdf(y: f64, omega: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let s = (omega / y).sqrt();
    normal_cdf(s * (y - 1.0)) + (2.0 * omega).exp() * normal_cdf(-s * (y + 1.0))
}
