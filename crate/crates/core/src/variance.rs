//! Noise-scale estimation from the observed singular spectrum.
//!
//! The bulk of the singular values of `Y = A + (sigma/sqrt(n)) W` follows the
//! sigma-scaled Marchenko-Pastur law. The estimator picks the sigma whose
//! predicted CDF `F(s/sigma)` is closest, in Kolmogorov-Smirnov distance, to
//! the empirical CDF of the singular values falling inside the predicted
//! support window `[sigma*|1-sqrt(c)|, sigma*(1+sqrt(c))]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mp_law::MpLaw;

/// Number of points in the coarse geometric search grid.
const COARSE_GRID: usize = 512;
/// Number of points in the refinement pass around the coarse incumbent.
const REFINE_GRID: usize = 64;

/// Estimated noise scale together with its goodness-of-fit diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct SigmaEstimate {
    /// The estimated noise scale (the `sigma` of `Y = A + (sigma/sqrt(n)) W`).
    pub sigma_hat: f64,
    /// Kolmogorov-Smirnov distance at `sigma_hat`.
    pub ks_value: f64,
    /// Number of singular values inside the fitted support window.
    pub window_count: usize,
    /// Total number of candidate scales evaluated.
    pub grid_size: usize,
}

/// Kolmogorov-Smirnov distance between the empirical CDF of the singular
/// values falling in `[sigma*|1-sqrt(c)|, sigma*(1+sqrt(c))]` and the
/// Marchenko-Pastur CDF `F(s/sigma)`.
///
/// Input order does not matter; the window is sorted internally. An empty
/// window returns the worst-case distance 1.
pub fn ks_objective(sigma: f64, values: &[f64], c: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "noise scale must be positive, got {sigma}"
        )));
    }
    if values.is_empty() {
        return Err(Error::InvalidParameter(
            "ks_objective needs at least one singular value".into(),
        ));
    }
    let law = MpLaw::new(c)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite singular values"));
    Ok(ks_on_sorted(sigma, &sorted, &law))
}

// `sorted` ascending. Window membership is closed on both ends.
fn ks_on_sorted(sigma: f64, sorted: &[f64], law: &MpLaw) -> f64 {
    let (lo_edge, hi_edge) = law.support();
    let window = window_slice(sigma, sorted, lo_edge, hi_edge);
    if window.is_empty() {
        return 1.0;
    }
    let n = window.len() as f64;
    let mut max_dev: f64 = 0.0;
    for (i, &s) in window.iter().enumerate() {
        let midpoint = (i as f64 + 0.5) / n;
        max_dev = max_dev.max((law.cdf(s / sigma) - midpoint).abs());
    }
    max_dev + 1.0 / (2.0 * n)
}

// Window membership is closed on both ends. The closure is applied with a
// tiny relative tolerance: the search evaluates scales at which a singular
// value sits exactly on a window edge, and bare comparisons would let the
// last rounding error decide inclusion there. The multiplicative slack keeps
// the window scale-equivariant.
const EDGE_SLACK: f64 = 1e-12;

fn window_slice(sigma: f64, sorted: &[f64], lo_edge: f64, hi_edge: f64) -> &[f64] {
    let lo = sigma * lo_edge * (1.0 - EDGE_SLACK);
    let hi = sigma * hi_edge * (1.0 + EDGE_SLACK);
    let start = sorted.partition_point(|&v| v < lo);
    let end = sorted.partition_point(|&v| v <= hi);
    &sorted[start..end.max(start)]
}

/// Estimate the noise scale from the full set of `min(m, n)` singular values
/// of an observed m x n matrix.
///
/// The search runs over a geometric grid of scales constrained to those
/// where the support window captures more than half of the spectrum and
/// `sigma * (1 + sqrt(c)) < 2 * lambda_1`. Grid construction is
/// multiplicative in the data, so the estimate is scale-equivariant:
/// `estimate_sigma(beta * values) = beta * estimate_sigma(values)`.
pub fn estimate_sigma(values: &[f64], m: usize, n: usize) -> Result<SigmaEstimate> {
    let kmin = m.min(n);
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(
            "matrix dimensions must be positive".into(),
        ));
    }
    if values.len() != kmin {
        return Err(Error::InvalidParameter(format!(
            "expected {kmin} singular values for a {m}x{n} matrix, got {}",
            values.len()
        )));
    }
    if kmin < 8 {
        return Err(Error::InvalidParameter(format!(
            "noise-scale estimation needs at least 8 singular values, got {kmin}"
        )));
    }
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidParameter(
            "singular values must be finite and non-negative".into(),
        ));
    }

    let c = m as f64 / n as f64;
    let law = MpLaw::new(c)?;
    let (lo_edge, hi_edge) = law.support();

    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite singular values"));
    let lambda_1 = *sorted.last().expect("non-empty");
    if lambda_1 <= 0.0 {
        return Err(Error::InvalidParameter(
            "largest singular value must be positive".into(),
        ));
    }
    let sigma_hi = 2.0 * lambda_1 / hi_edge;

    let feasible =
        |sigma: f64| -> bool { 2 * window_slice(sigma, &sorted, lo_edge, hi_edge).len() > kmin };

    // The window count only changes where a singular value crosses a window
    // edge, so the smallest feasible scale is one of these candidates.
    let mut candidates: Vec<f64> = Vec::with_capacity(2 * sorted.len());
    for &s in &sorted {
        if s > 0.0 {
            candidates.push(s / hi_edge);
            if lo_edge > 0.0 {
                candidates.push(s / lo_edge);
            }
        }
    }
    candidates.retain(|&s| s > 0.0 && s < sigma_hi);
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let sigma_lo = candidates
        .iter()
        .copied()
        .find(|&s| feasible(s))
        .ok_or_else(|| {
            Error::InfeasibleSigmaRange(format!(
                "no scale below {sigma_hi:.6e} captures more than {kmin}/2 singular values"
            ))
        })?;

    let ratio = (sigma_hi / sigma_lo).powf(1.0 / COARSE_GRID as f64);
    let coarse: Vec<f64> = (0..COARSE_GRID)
        .map(|i| sigma_lo * ratio.powi(i as i32))
        .collect();

    let mut evaluated: Vec<(f64, f64)> = Vec::with_capacity(COARSE_GRID + REFINE_GRID);
    let mut best_idx = 0usize;
    let mut best_k = f64::INFINITY;
    for (i, &sigma) in coarse.iter().enumerate() {
        if !feasible(sigma) {
            continue;
        }
        let k = ks_on_sorted(sigma, &sorted, &law);
        if k < best_k {
            best_k = k;
            best_idx = i;
        }
        evaluated.push((sigma, k));
    }
    debug_assert!(best_k.is_finite(), "sigma_lo itself is always feasible");

    let refine_lo = coarse[best_idx.saturating_sub(1)];
    let refine_hi = if best_idx + 1 < COARSE_GRID {
        coarse[best_idx + 1]
    } else {
        sigma_hi
    };
    let refine_ratio = (refine_hi / refine_lo).powf(1.0 / REFINE_GRID as f64);
    for j in 0..REFINE_GRID {
        let sigma = refine_lo * refine_ratio.powi(j as i32);
        if sigma >= sigma_hi || !feasible(sigma) {
            continue;
        }
        let k = ks_on_sorted(sigma, &sorted, &law);
        evaluated.push((sigma, k));
    }

    // Argmin over everything evaluated; ties go to the smaller scale.
    let (sigma_hat, ks_value) = evaluated
        .into_iter()
        .min_by(|(sa, ka), (sb, kb)| {
            ka.partial_cmp(kb)
                .expect("finite distances")
                .then(sa.partial_cmp(sb).expect("finite scales"))
        })
        .expect("at least one feasible scale was evaluated");

    Ok(SigmaEstimate {
        sigma_hat,
        ks_value,
        window_count: window_slice(sigma_hat, &sorted, lo_edge, hi_edge).len(),
        grid_size: COARSE_GRID + REFINE_GRID,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_gaussian, singular_values, RngStream};
    use approx::assert_abs_diff_eq;

    fn noise_singular_values(m: usize, n: usize, seed: u64, stream: u64) -> Vec<f64> {
        let w = random_gaussian(m, n, &mut RngStream::new(seed, stream));
        singular_values(&w.scale(1.0 / (n as f64).sqrt())).unwrap()
    }

    // Inverse CDF by bisection, for constructing exact-quantile inputs.
    fn mp_quantile(law: &MpLaw, p: f64) -> f64 {
        let (mut lo, mut hi) = law.support();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if law.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn ks_rejects_bad_arguments() {
        assert!(ks_objective(0.0, &[1.0], 1.0).is_err());
        assert!(ks_objective(-1.0, &[1.0], 1.0).is_err());
        assert!(ks_objective(1.0, &[], 1.0).is_err());
    }

    #[test]
    fn ks_is_one_on_empty_window() {
        // Sigma so large that every value falls below the window.
        let k = ks_objective(1e9, &[1.0, 2.0, 3.0], 0.25).unwrap();
        assert_eq!(k, 1.0);
    }

    #[test]
    fn ks_at_exact_quantiles_is_half_over_n() {
        let c = 0.5;
        let law = MpLaw::new(c).unwrap();
        let n = 64;
        let sigma = 2.0;
        let values: Vec<f64> = (1..=n)
            .map(|i| sigma * mp_quantile(&law, (i as f64 - 0.5) / n as f64))
            .collect();
        let k = ks_objective(sigma, &values, c).unwrap();
        assert_abs_diff_eq!(k, 1.0 / (2.0 * n as f64), epsilon = 1e-9);
    }

    #[test]
    fn ks_prefers_true_scale_on_noise() {
        let values = noise_singular_values(300, 300, 77, 0);
        let k_true = ks_objective(1.0, &values, 1.0).unwrap();
        let k_high = ks_objective(1.5, &values, 1.0).unwrap();
        let k_low = ks_objective(0.7, &values, 1.0).unwrap();
        assert!(k_true < k_high, "{k_true} vs {k_high}");
        assert!(k_true < k_low, "{k_true} vs {k_low}");
    }

    #[test]
    fn ks_order_invariant() {
        let mut values = noise_singular_values(40, 60, 5, 0);
        let k1 = ks_objective(1.0, &values, 40.0 / 60.0).unwrap();
        values.reverse();
        let k2 = ks_objective(1.0, &values, 40.0 / 60.0).unwrap();
        assert_eq!(k1, k2);
    }

    #[test]
    fn estimates_unit_scale_on_pure_noise() {
        let values = noise_singular_values(500, 500, 2024, 3);
        let est = estimate_sigma(&values, 500, 500).unwrap();
        assert!(
            (0.95..=1.05).contains(&est.sigma_hat),
            "sigma_hat {}",
            est.sigma_hat
        );
        assert!(2 * est.window_count > 500);
        let recheck = ks_objective(est.sigma_hat, &values, 1.0).unwrap();
        assert_abs_diff_eq!(recheck, est.ks_value, epsilon = 1e-12);
    }

    #[test]
    fn scale_equivariance_is_exact() {
        let values = noise_singular_values(200, 150, 9, 1);
        let base = estimate_sigma(&values, 200, 150).unwrap();
        for beta in [3.0, 0.125, 7.39] {
            let scaled: Vec<f64> = values.iter().map(|v| beta * v).collect();
            let est = estimate_sigma(&scaled, 200, 150).unwrap();
            let rel = (est.sigma_hat / (beta * base.sigma_hat) - 1.0).abs();
            assert!(rel <= 1e-12, "beta {beta}: relative deviation {rel}");
        }
    }

    #[test]
    fn tolerates_low_rank_signal() {
        // Rank-5 signal with singular values 3 on top of unit noise.
        let m = 500;
        let n = 500;
        let w = random_gaussian(m, n, &mut RngStream::new(31, 0));
        let a = crate::linalg::DenseMatrix::from_diag(m, n, &[3.0; 5]).unwrap();
        let y = a.add_scaled(&w, 1.0 / (n as f64).sqrt()).unwrap();
        let values = singular_values(&y).unwrap();
        let est = estimate_sigma(&values, m, n).unwrap();
        assert!(
            (0.93..=1.07).contains(&est.sigma_hat),
            "sigma_hat {}",
            est.sigma_hat
        );
    }

    #[test]
    fn permutation_invariant() {
        let mut values = noise_singular_values(100, 80, 13, 2);
        let est1 = estimate_sigma(&values, 100, 80).unwrap();
        values.rotate_left(17);
        values.swap(0, 5);
        let est2 = estimate_sigma(&values, 100, 80).unwrap();
        assert_eq!(est1.sigma_hat.to_bits(), est2.sigma_hat.to_bits());
    }

    #[test]
    fn infeasible_spectrum_is_reported() {
        // Two far-apart clusters of 4 with c = 4: no window captures > 4 of 8.
        let values = vec![1.0, 1.0, 1.0, 1.0, 100.0, 100.0, 100.0, 100.0];
        let err = estimate_sigma(&values, 32, 8).unwrap_err();
        assert!(matches!(err, Error::InfeasibleSigmaRange(_)));
    }

    #[test]
    fn validates_input_shape() {
        assert!(estimate_sigma(&[1.0; 7], 7, 7).is_err());
        assert!(estimate_sigma(&[1.0; 15], 10, 20).is_err());
        assert!(estimate_sigma(&[0.0; 10], 10, 10).is_err());
    }
}
