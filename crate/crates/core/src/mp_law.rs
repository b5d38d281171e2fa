//! Marchenko-Pastur singular-value law for `n^{-1/2} W` noise, parameterized
//! by the aspect ratio `c = m/n`.
//!
//! The density lives on `[sqrt(a), sqrt(b)]` with `a = (1 - sqrt(c))^2` and
//! `b = (1 + sqrt(c))^2`; for `c > 1` it describes the `min(m, n)` non-zero
//! singular values, so its total mass is always 1.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// The law of the singular values of `n^{-1/2} W` in the limit
/// `m/n -> c`, as density, CDF, and support edges.
#[derive(Debug, Clone, Copy)]
pub struct MpLaw {
    c: f64,
    a: f64,
    b: f64,
}

impl MpLaw {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "aspect ratio must be a positive finite number, got {c}"
            )));
        }
        let sqrt_c = c.sqrt();
        Ok(Self {
            c,
            a: (1.0 - sqrt_c) * (1.0 - sqrt_c),
            b: (1.0 + sqrt_c) * (1.0 + sqrt_c),
        })
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.c
    }

    /// Support edges `(|1 - sqrt(c)|, 1 + sqrt(c))`.
    pub fn support(&self) -> (f64, f64) {
        let sqrt_c = self.c.sqrt();
        ((1.0 - sqrt_c).abs(), 1.0 + sqrt_c)
    }

    /// Density of the singular-value law; zero off the support.
    pub fn density(&self, s: f64) -> f64 {
        if s < 0.0 {
            return 0.0;
        }
        let t = s * s;
        if t < self.a || t > self.b {
            return 0.0;
        }
        if s == 0.0 {
            // Only reachable when a = 0 (c = 1); the quarter-circle limit.
            return self.b.sqrt() / PI;
        }
        ((self.b - t) * (t - self.a)).sqrt() / (s * PI * self.c.min(1.0))
    }

    /// Closed-form CDF: 0 below the support, 1 above, strictly increasing
    /// in between.
    pub fn cdf(&self, x: f64) -> f64 {
        let (lower, upper) = self.support();
        if x <= lower {
            return 0.0;
        }
        if x >= upper {
            return 1.0;
        }
        if self.c == 1.0 {
            // Quarter-circle special case, a = 0, b = 4.
            return (x * (4.0 - x * x).sqrt() + 4.0 * (x / 2.0).asin()) / (2.0 * PI);
        }
        let sqrt_c = self.c.sqrt();
        let q = (1.0 + self.c) / (2.0 * sqrt_c);
        let z = ((x * x - (1.0 + self.c)) / (2.0 * sqrt_c)).clamp(-1.0, 1.0);
        let g = Self::antiderivative(z, q);
        let g_lo = Self::antiderivative(-1.0, q);
        (sqrt_c * (g - g_lo) / (PI * self.c.min(1.0))).clamp(0.0, 1.0)
    }

    // Antiderivative of sqrt(1 - z^2) / (z + q) for q > 1, with the arctan
    // term replaced by its limit +-pi/2 at the removable endpoints z = +-1.
    fn antiderivative(z: f64, q: f64) -> f64 {
        let root = (1.0 - z * z).max(0.0).sqrt();
        let scale = (q * q - 1.0).max(0.0).sqrt();
        let arctan_term = if root * scale == 0.0 {
            if q * z + 1.0 >= 0.0 {
                FRAC_PI_2
            } else {
                -FRAC_PI_2
            }
        } else {
            ((q * z + 1.0) / (scale * root)).atan()
        };
        root + q * z.asin() - scale * arctan_term
    }
}
