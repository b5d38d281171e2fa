//! Reconstruction schemes. Every scheme returns an estimate of the form
//! `sum_j c_j u_j(Y) v_j(Y)'`, so a scheme is fully described by the
//! coefficients it assigns to the singular triples of the observed matrix.
//!
//! Besides plain hard/soft thresholding there are three oracle baselines
//! (granted access to the true signal `A`) and the RMT scheme, which needs
//! nothing but the observed matrix: it estimates the noise scale from the
//! spectrum, inverts the noise's effect on each detected singular value, and
//! discounts for the rotation of the singular vectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm_sq, svd, DenseMatrix, SvdFactors};
use crate::spectrum::{shrink_coefficient, SpikeEstimate};
use crate::variance::estimate_sigma;

/// Noise scale a reconstruction was computed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaUsed {
    /// The input was taken as already sigma = 1 normalized.
    KnownUnit,
    /// A concrete scale, fixed by the caller or estimated from the spectrum.
    Value(f64),
}

impl Serialize for SigmaUsed {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SigmaUsed::KnownUnit => ser.serialize_str("known-unit"),
            SigmaUsed::Value(v) => ser.serialize_f64(*v),
        }
    }
}

/// A reconstructed signal estimate in the SVD basis of the observed matrix.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// The estimate itself.
    pub a_hat: DenseMatrix,
    /// Coefficient applied to each singular triple of the observed matrix.
    pub coefficients: Vec<f64>,
    /// Stable scheme label, e.g. `rmt`, `hard_oracle`, `soft:1.5`.
    pub scheme_id: String,
    pub sigma_used: SigmaUsed,
    /// Per-component shrinkage diagnostics; populated by the RMT scheme.
    pub diagnostics: Option<Vec<SpikeEstimate>>,
}

impl Reconstruction {
    fn new(
        factors: &SvdFactors,
        coefficients: Vec<f64>,
        scheme_id: impl Into<String>,
        sigma_used: SigmaUsed,
        diagnostics: Option<Vec<SpikeEstimate>>,
    ) -> Result<Self> {
        let a_hat = factors.compose_with(&coefficients)?;
        Ok(Self {
            a_hat,
            coefficients,
            scheme_id: scheme_id.into(),
            sigma_used,
            diagnostics,
        })
    }

    /// Number of non-zero coefficients.
    pub fn detected_rank(&self) -> usize {
        self.coefficients.iter().filter(|c| **c != 0.0).count()
    }
}

/// Squared-Frobenius reconstruction loss `||a_hat - a||_F^2`.
pub fn loss(a: &DenseMatrix, a_hat: &DenseMatrix) -> Result<f64> {
    a.check_same_shape(a_hat)?;
    Ok(a.as_array()
        .iter()
        .zip(a_hat.as_array().iter())
        .map(|(x, y)| (y - x) * (y - x))
        .sum())
}

/// Keep singular values at or above `lambda`, zero the rest.
pub fn hard_threshold(factors: &SvdFactors, lambda: f64) -> Result<Reconstruction> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "hard threshold must be positive, got {lambda}"
        )));
    }
    let coefficients = factors
        .values()
        .iter()
        .map(|&d| if d >= lambda { d } else { 0.0 })
        .collect();
    Reconstruction::new(
        factors,
        coefficients,
        format!("hard:{lambda}"),
        SigmaUsed::KnownUnit,
        None,
    )
}

/// Subtract `nu` from every singular value, clipping at zero.
pub fn soft_threshold(factors: &SvdFactors, nu: f64) -> Result<Reconstruction> {
    if !nu.is_finite() || nu <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "soft threshold must be positive, got {nu}"
        )));
    }
    let coefficients = factors
        .values()
        .iter()
        .map(|&d| (d - nu).max(0.0))
        .collect();
    Reconstruction::new(
        factors,
        coefficients,
        format!("soft:{nu}"),
        SigmaUsed::KnownUnit,
        None,
    )
}

// b_j = u_j' A v_j, the signal's coordinates in the observed SVD basis.
fn signal_coordinates(factors: &SvdFactors, a: &DenseMatrix) -> Vec<f64> {
    let av = a.as_array().dot(factors.right());
    (0..factors.values().len())
        .map(|j| factors.left().column(j).dot(&av.column(j)))
        .collect()
}

// Loss of a coefficient scheme against `a`, via the orthonormal-basis
// identity: ||A - sum c_j u_j v_j'||^2 = ||A||^2 - sum b_j^2 + sum (b_j - c_j)^2.
fn coefficient_loss(norm_a_sq: f64, coords: &[f64], coefficients: &[f64]) -> f64 {
    let coord_mass: f64 = coords.iter().map(|b| b * b).sum();
    let misfit: f64 = coords
        .iter()
        .zip(coefficients)
        .map(|(b, c)| (b - c) * (b - c))
        .sum();
    norm_a_sq - coord_mass + misfit
}

/// Best hard-thresholding reconstruction for a caller who knows the signal:
/// the loss is constant between consecutive singular values, so the exact
/// minimizer is found by evaluating every truncation rank. Ties go to the
/// smaller rank.
pub fn oracle_hard(y: &DenseMatrix, a: &DenseMatrix) -> Result<Reconstruction> {
    y.check_same_shape(a)?;
    oracle_hard_from_svd(&svd(y)?, a)
}

pub fn oracle_hard_from_svd(factors: &SvdFactors, a: &DenseMatrix) -> Result<Reconstruction> {
    let d = factors.values();
    let coords = signal_coordinates(factors, a);
    let norm_a_sq = frobenius_norm_sq(a);

    // loss(t+1) = loss(t) + (b_t - d_t)^2 - b_t^2, starting from loss(0) = ||A||^2.
    let mut best_rank = 0usize;
    let mut best_loss = norm_a_sq;
    let mut running = norm_a_sq;
    for t in 0..d.len() {
        let b = coords[t];
        running += (b - d[t]) * (b - d[t]) - b * b;
        if running < best_loss {
            best_loss = running;
            best_rank = t + 1;
        }
    }

    let coefficients: Vec<f64> = d
        .iter()
        .enumerate()
        .map(|(j, &dj)| if j < best_rank { dj } else { 0.0 })
        .collect();
    Reconstruction::new(
        factors,
        coefficients,
        "hard_oracle",
        SigmaUsed::KnownUnit,
        None,
    )
}

/// Best soft-thresholding reconstruction for a caller who knows the signal.
/// On each interval between consecutive singular values the loss is a
/// quadratic in the shift `nu`; each piece is solved in closed form and the
/// global minimum taken over piece minima and endpoints (`nu = 0` included).
/// Ties go to the smaller shift.
pub fn oracle_soft(y: &DenseMatrix, a: &DenseMatrix) -> Result<Reconstruction> {
    y.check_same_shape(a)?;
    oracle_soft_from_svd(&svd(y)?, a)
}

pub fn oracle_soft_from_svd(factors: &SvdFactors, a: &DenseMatrix) -> Result<Reconstruction> {
    let d = factors.values();
    let k = d.len();
    let coords = signal_coordinates(factors, a);
    let norm_a_sq = frobenius_norm_sq(a);

    let loss_at = |nu: f64| -> f64 {
        let coefficients: Vec<f64> = d.iter().map(|&dj| (dj - nu).max(0.0)).collect();
        coefficient_loss(norm_a_sq, &coords, &coefficients)
    };

    // Candidates: piece endpoints plus the clamped minimizer of each piece.
    // On [d_{t+1}, d_t] exactly the first t coefficients are active and the
    // quadratic's vertex is at mean(d_j - b_j | j <= t).
    let mut candidates: Vec<f64> = vec![0.0];
    candidates.extend(d.iter().copied());
    let mut shift_sum = 0.0;
    for t in 1..=k {
        shift_sum += d[t - 1] - coords[t - 1];
        let vertex = shift_sum / t as f64;
        let piece_lo = if t < k { d[t] } else { 0.0 };
        let piece_hi = d[t - 1];
        candidates.push(vertex.clamp(piece_lo.min(piece_hi), piece_hi));
    }
    candidates.retain(|nu| nu.is_finite() && *nu >= 0.0);
    candidates.sort_by(|x, y| x.partial_cmp(y).expect("finite"));

    let mut best_nu = 0.0;
    let mut best_loss = f64::INFINITY;
    for &nu in &candidates {
        let l = loss_at(nu);
        if l < best_loss {
            best_loss = l;
            best_nu = nu;
        }
    }

    let coefficients: Vec<f64> = d.iter().map(|&dj| (dj - best_nu).max(0.0)).collect();
    Reconstruction::new(
        factors,
        coefficients,
        "soft_oracle",
        SigmaUsed::KnownUnit,
        None,
    )
}

/// The orthogonally invariant oracle: the projection of the signal onto the
/// observed singular basis, `c_j = <A, u_j v_j'>`. Coefficients may be
/// negative. No coefficient scheme on the same basis can have smaller loss.
pub fn oracle_oi(y: &DenseMatrix, a: &DenseMatrix) -> Result<Reconstruction> {
    y.check_same_shape(a)?;
    oracle_oi_from_svd(&svd(y)?, a)
}

pub fn oracle_oi_from_svd(factors: &SvdFactors, a: &DenseMatrix) -> Result<Reconstruction> {
    let coefficients = signal_coordinates(factors, a);
    Reconstruction::new(
        factors,
        coefficients,
        "oi_oracle",
        SigmaUsed::KnownUnit,
        None,
    )
}

/// RMT scheme for a sigma = 1 normalized observation `Y = A + n^{-1/2} W`:
/// each singular value above the bulk edge `1 + sqrt(m/n)` is replaced by
/// the shrunk estimate `lambda_a_hat * cos_left * cos_right`; everything at
/// or below the edge is zeroed.
pub fn rmt_known_sigma(y: &DenseMatrix) -> Result<Reconstruction> {
    rmt_known_sigma_from_svd(&svd(y)?)
}

pub fn rmt_known_sigma_from_svd(factors: &SvdFactors) -> Result<Reconstruction> {
    let m = factors.left().nrows();
    let n = factors.right().nrows();
    let c = m as f64 / n as f64;
    let estimates: Vec<SpikeEstimate> = factors
        .values()
        .iter()
        .map(|&d| shrink_coefficient(d, c))
        .collect();
    let coefficients: Vec<f64> = estimates.iter().map(|e| e.coefficient).collect();
    Reconstruction::new(
        factors,
        coefficients,
        "rmt",
        SigmaUsed::KnownUnit,
        Some(estimates),
    )
}

/// RMT scheme at a caller-supplied noise scale: `sigma * G_o(Y / sigma)`
/// where `G_o` is [`rmt_known_sigma`].
pub fn rmt_fixed_sigma(y: &DenseMatrix, sigma: f64) -> Result<Reconstruction> {
    rmt_fixed_sigma_from_svd(&svd(y)?, sigma)
}

pub fn rmt_fixed_sigma_from_svd(factors: &SvdFactors, sigma: f64) -> Result<Reconstruction> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "noise scale must be positive, got {sigma}"
        )));
    }
    rmt_at_sigma(factors, sigma, SigmaUsed::Value(sigma))
}

/// RMT scheme with the noise scale estimated from the spectrum:
/// `sigma_hat * G_o(Y / sigma_hat)` where `G_o` is [`rmt_known_sigma`].
/// Scale-equivariant by construction.
pub fn rmt_reconstruct(y: &DenseMatrix) -> Result<Reconstruction> {
    rmt_reconstruct_from_svd(&svd(y)?)
}

pub fn rmt_reconstruct_from_svd(factors: &SvdFactors) -> Result<Reconstruction> {
    let m = factors.left().nrows();
    let n = factors.right().nrows();
    let sigma = estimate_sigma(factors.values(), m, n)?.sigma_hat;
    rmt_at_sigma(factors, sigma, SigmaUsed::Value(sigma))
}

fn rmt_at_sigma(factors: &SvdFactors, sigma: f64, sigma_used: SigmaUsed) -> Result<Reconstruction> {
    let m = factors.left().nrows();
    let n = factors.right().nrows();
    let c = m as f64 / n as f64;
    let estimates: Vec<SpikeEstimate> = factors
        .values()
        .iter()
        .map(|&d| shrink_coefficient(d / sigma, c))
        .collect();
    let coefficients: Vec<f64> = estimates.iter().map(|e| sigma * e.coefficient).collect();
    Reconstruction::new(factors, coefficients, "rmt", sigma_used, Some(estimates))
}
