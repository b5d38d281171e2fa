//! Asymptotic maps between the spectrum of a low-rank signal and the
//! spectrum of its noisy observation, at aspect ratio `c = m/n`.
//!
//! A signal singular value above the detection threshold `c^{1/4}` pushes the
//! corresponding observed singular value above the noise bulk edge
//! `1 + sqrt(c)`; below the threshold it is indistinguishable from noise.
//! All functions here work on sigma-normalized inputs; rescaling is the
//! caller's job.

use serde::Serialize;

use crate::error::{Error, Result};

/// Per-component diagnostics of the shrinkage map applied to one observed
/// singular value (sigma-normalized).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpikeEstimate {
    /// Observed singular value this estimate was derived from.
    pub lambda_y: f64,
    /// Estimated signal singular value; 0 when not detected.
    pub lambda_a_hat: f64,
    /// Estimated squared cosine between left singular vectors; 0 when not
    /// detected.
    pub cos2_left: f64,
    /// Estimated squared cosine between right singular vectors; 0 when not
    /// detected.
    pub cos2_right: f64,
    /// Shrinkage coefficient `lambda_a_hat * cos_left * cos_right`.
    pub coefficient: f64,
    /// Whether `lambda_y` clears the bulk edge `1 + sqrt(c)` (strictly).
    pub detected: bool,
}

fn check_aspect(c: f64) -> Result<()> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "aspect ratio must be a positive finite number, got {c}"
        )));
    }
    Ok(())
}

/// Limit of the observed singular value produced by a signal singular value
/// `lambda_a`: `sqrt(1 + lambda_a^2 + c + c/lambda_a^2)` above the detection
/// threshold `c^{1/4}`, the bulk edge `1 + sqrt(c)` at or below it.
/// Continuous at the threshold.
pub fn forward_limit(lambda_a: f64, c: f64) -> f64 {
    let threshold = c.powf(0.25);
    if lambda_a <= threshold {
        return 1.0 + c.sqrt();
    }
    let t = lambda_a * lambda_a;
    (1.0 + t + c + c / t).sqrt()
}

/// Invert [`forward_limit`] for an observed value above the bulk edge:
/// the estimated signal singular value.
///
/// Fails when `lambda_y` is at or below the edge, or when floating-point
/// jitter right at the edge drives the discriminant negative; callers that
/// gate on detection treat that case as "not detected".
pub fn inverse_estimate(lambda_y: f64, c: f64) -> Result<f64> {
    check_aspect(c)?;
    if lambda_y <= 1.0 + c.sqrt() {
        return Err(Error::InvalidParameter(format!(
            "observed value {lambda_y} is not above the bulk edge {}",
            1.0 + c.sqrt()
        )));
    }
    let g = lambda_y * lambda_y - (1.0 + c);
    let disc = g * g - 4.0 * c;
    if disc < 0.0 {
        return Err(Error::InvalidParameter(
            "observed value is numerically at the bulk edge".into(),
        ));
    }
    Ok((0.5 * (g + disc.sqrt())).sqrt())
}

/// Limiting squared cosine between the left singular vectors of signal and
/// observation, as a function of the (estimated) signal singular value.
pub fn cos2_left(lambda_a_hat: f64, c: f64) -> Result<f64> {
    check_above_threshold(lambda_a_hat, c)?;
    let t = lambda_a_hat * lambda_a_hat;
    Ok((1.0 - c / (t * t)) / (1.0 + c / t))
}

/// Right-vector counterpart of [`cos2_left`].
pub fn cos2_right(lambda_a_hat: f64, c: f64) -> Result<f64> {
    check_above_threshold(lambda_a_hat, c)?;
    let t = lambda_a_hat * lambda_a_hat;
    Ok((1.0 - c / (t * t)) / (1.0 + 1.0 / t))
}

fn check_above_threshold(lambda_a_hat: f64, c: f64) -> Result<()> {
    check_aspect(c)?;
    if lambda_a_hat <= c.powf(0.25) {
        return Err(Error::InvalidParameter(format!(
            "signal singular value {lambda_a_hat} is not above the detection threshold {}",
            c.powf(0.25)
        )));
    }
    Ok(())
}

/// Full shrinkage map for one observed singular value: detection gate,
/// signal-value estimate, cosine estimates, and the final coefficient
/// `lambda_a_hat * cos_left * cos_right`.
///
/// Values at or below the bulk edge (and the measure-zero jitter case where
/// the discriminant goes negative) come back undetected with a zero
/// coefficient.
pub fn shrink_coefficient(lambda_y: f64, c: f64) -> SpikeEstimate {
    let undetected = SpikeEstimate {
        lambda_y,
        lambda_a_hat: 0.0,
        cos2_left: 0.0,
        cos2_right: 0.0,
        coefficient: 0.0,
        detected: false,
    };
    if lambda_y <= 1.0 + c.sqrt() {
        return undetected;
    }
    let lambda_a_hat = match inverse_estimate(lambda_y, c) {
        Ok(v) => v,
        Err(_) => return undetected,
    };
    let t = lambda_a_hat * lambda_a_hat;
    let cos2_l = ((1.0 - c / (t * t)) / (1.0 + c / t)).clamp(0.0, 1.0);
    let cos2_r = ((1.0 - c / (t * t)) / (1.0 + 1.0 / t)).clamp(0.0, 1.0);
    SpikeEstimate {
        lambda_y,
        lambda_a_hat,
        cos2_left: cos2_l,
        cos2_right: cos2_r,
        coefficient: lambda_a_hat * (cos2_l * cos2_r).sqrt(),
        detected: true,
    }
}
