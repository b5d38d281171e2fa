//! Shared test oracles, independent of the production code paths.
//
// Each test binary pulls in the subset it needs.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

/// Marchenko-Pastur CDF by numerical integration of the density. The density
/// is integrated in the angle variable `s^2 = (a+b)/2 + (b-a)/2 * sin(t)`,
/// which removes the square-root edge behavior, so composite Simpson
/// converges far past the tolerances asserted in the tests.
pub struct QuadratureOracle {
    pub c: f64,
    pub a: f64,
    pub b: f64,
}

impl QuadratureOracle {
    pub fn new(c: f64) -> Self {
        let sqrt_c = c.sqrt();
        Self {
            c,
            a: (1.0 - sqrt_c) * (1.0 - sqrt_c),
            b: (1.0 + sqrt_c) * (1.0 + sqrt_c),
        }
    }

    // Density mass element in the angle variable.
    fn integrand(&self, t: f64) -> f64 {
        let sin_t = t.sin();
        if self.c == 1.0 {
            // cos^2 t / (1 + sin t) simplified; finite at t = -pi/2.
            return (1.0 - sin_t) / PI;
        }
        let s_sq = 0.5 * (self.a + self.b) + 0.5 * (self.b - self.a) * sin_t;
        let cos_t = t.cos();
        (self.b - self.a) * (self.b - self.a) * cos_t * cos_t / (8.0 * PI * self.c.min(1.0) * s_sq)
    }

    pub fn angle_of(&self, x: f64) -> f64 {
        if x <= self.a.sqrt() {
            return -FRAC_PI_2;
        }
        if x >= self.b.sqrt() {
            return FRAC_PI_2;
        }
        let z = (x * x - 0.5 * (self.a + self.b)) / (0.5 * (self.b - self.a));
        z.clamp(-1.0, 1.0).asin()
    }

    pub fn simpson(&self, lo: f64, hi: f64, intervals: usize) -> f64 {
        let n = intervals.max(2) & !1; // even
        let h = (hi - lo) / n as f64;
        let mut sum = self.integrand(lo) + self.integrand(hi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * self.integrand(lo + i as f64 * h);
        }
        sum * h / 3.0
    }

    /// CDF at x by integrating the density from the lower support edge.
    pub fn cdf(&self, x: f64) -> f64 {
        self.simpson(-FRAC_PI_2, self.angle_of(x), 4096)
    }

    /// Integral of the density between two points.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        self.simpson(self.angle_of(lo), self.angle_of(hi), 4096)
    }

    /// CDF at every point of an ascending grid, integrating incrementally so
    /// large grids stay cheap.
    pub fn cdf_profile(&self, xs_ascending: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(xs_ascending.len());
        let mut cum = 0.0;
        let mut prev_angle = -FRAC_PI_2;
        for &x in xs_ascending {
            let angle = self.angle_of(x);
            debug_assert!(angle >= prev_angle, "grid must be ascending");
            cum += self.simpson(prev_angle, angle, 64);
            prev_angle = angle;
            out.push(cum);
        }
        out
    }
}

/// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((f - i as f64 / n).abs());
        sup = sup.max((f - (i as f64 + 1.0) / n).abs());
    }
    sup
}
