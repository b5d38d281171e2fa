//! Seeded Monte-Carlo comparison of the reconstruction schemes.
//!
//! Signals are diagonal (the loss distribution of any scheme acting on
//! singular values depends on the signal only through its spectrum), drawn
//! from a grid of ranks, spectral profiles, and leading singular values.
//! Each grid cell gets one noise draw from its own RNG stream, every scheme
//! reconstructs the same observation, and losses are summarized as average
//! relative excess loss (AREL) against the orthogonally invariant oracle.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{random_gaussian, svd, DenseMatrix, RngStream};
use crate::schemes::{
    loss, oracle_hard_from_svd, oracle_oi_from_svd, oracle_soft_from_svd, rmt_reconstruct_from_svd,
};

/// Scheme keys of a benchmark run, in reporting order.
pub const SCHEME_KEYS: [&str; 4] = ["soft_oracle", "hard_oracle", "rmt", "oi_oracle"];

/// Spectral profile of a generated signal: how the singular values decay
/// from `lambda_max` down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// All `rank` singular values equal to `lambda_max`.
    Equal,
    /// Linear decay; the smallest value is `lambda_max / rank` (kept strictly
    /// positive so the signal genuinely has the requested rank).
    LinearToZero,
    /// Linear decay ending at `lambda_max / 2`.
    LinearToHalf,
    /// Geometric decay by the given factor per step.
    Exp(f64),
}

impl Profile {
    /// The eight benchmark profiles.
    pub fn all() -> Vec<Profile> {
        let mut out = vec![Profile::Equal, Profile::LinearToZero, Profile::LinearToHalf];
        out.extend([0.5, 0.7, 0.9, 0.95, 0.99].map(Profile::Exp));
        out
    }

    pub fn label(&self) -> String {
        match self {
            Profile::Equal => "equal".into(),
            Profile::LinearToZero => "linear-to-zero".into(),
            Profile::LinearToHalf => "linear-to-half".into(),
            Profile::Exp(q) => format!("exp({q})"),
        }
    }

    /// Non-increasing singular values, starting at `lambda_max`.
    pub fn singular_values(&self, rank: usize, lambda_max: f64) -> Vec<f64> {
        let r = rank as f64;
        (1..=rank)
            .map(|j| {
                let j = j as f64;
                match self {
                    Profile::Equal => lambda_max,
                    Profile::LinearToZero => lambda_max * (r - j + 1.0) / r,
                    Profile::LinearToHalf => {
                        if rank == 1 {
                            lambda_max
                        } else {
                            lambda_max * (1.0 - (j - 1.0) / (2.0 * (r - 1.0)))
                        }
                    }
                    Profile::Exp(q) => lambda_max * q.powi(j as i32 - 1),
                }
            })
            .collect()
    }
}

impl Serialize for Profile {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.label())
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// One grid cell: dimensions, rank, leading singular value, decay profile.
#[derive(Debug, Clone, Serialize)]
pub struct SignalSpec {
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    pub lambda_max: f64,
    pub profile: Profile,
}

impl SignalSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidSignalSpec(
                "dimensions must be positive".into(),
            ));
        }
        if self.rank == 0 {
            return Err(Error::InvalidSignalSpec("rank must be at least 1".into()));
        }
        if self.rank > self.m.min(self.n) / 10 {
            return Err(Error::InvalidSignalSpec(format!(
                "rank {} exceeds the benchmark cap min(m, n)/10 = {}",
                self.rank,
                self.m.min(self.n) / 10
            )));
        }
        if !self.lambda_max.is_finite() || self.lambda_max <= 0.0 {
            return Err(Error::InvalidSignalSpec(format!(
                "leading singular value must be positive, got {}",
                self.lambda_max
            )));
        }
        if let Profile::Exp(q) = self.profile {
            if !(0.0 < q && q <= 1.0) {
                return Err(Error::InvalidSignalSpec(format!(
                    "geometric decay factor must be in (0, 1], got {q}"
                )));
            }
        }
        Ok(())
    }
}

/// Diagonal m x n signal with the profile's singular values.
pub fn generate_signal(spec: &SignalSpec) -> Result<DenseMatrix> {
    spec.validate()?;
    let values = spec.profile.singular_values(spec.rank, spec.lambda_max);
    DenseMatrix::from_diag(spec.m, spec.n, &values)
}

/// Losses and relative excess losses of one reconstruction trial.
#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub spec: SignalSpec,
    pub master_seed: u64,
    pub trial_index: u64,
    /// Squared-Frobenius loss per scheme.
    pub losses: BTreeMap<String, f64>,
    /// Relative excess loss per scheme: `loss / loss(oi_oracle) - 1`.
    /// Empty when the trial is excluded.
    pub rel: BTreeMap<String, f64>,
    /// True when `loss(oi_oracle) < 1e-12` makes REL undefined.
    pub excluded: bool,
}

/// Run every scheme on `Y = A + n^{-1/2} W`, with `W` drawn from the stream
/// `(master_seed, trial_index)`. Deterministic in the pair.
pub fn run_trial(spec: &SignalSpec, master_seed: u64, trial_index: u64) -> Result<TrialReport> {
    let a = generate_signal(spec)?;
    let mut stream = RngStream::new(master_seed, trial_index);
    let w = random_gaussian(spec.m, spec.n, &mut stream);
    let y = a.add_scaled(&w, 1.0 / (spec.n as f64).sqrt())?;
    let factors = svd(&y)?;

    let reconstructions = [
        oracle_soft_from_svd(&factors, &a)?,
        oracle_hard_from_svd(&factors, &a)?,
        rmt_reconstruct_from_svd(&factors)?,
        oracle_oi_from_svd(&factors, &a)?,
    ];

    let mut losses = BTreeMap::new();
    for r in &reconstructions {
        losses.insert(r.scheme_id.clone(), loss(&a, &r.a_hat)?);
    }

    let oi_loss = losses["oi_oracle"];
    let excluded = oi_loss < 1e-12;
    let mut rel = BTreeMap::new();
    if !excluded {
        for (key, l) in &losses {
            let r = if key == "oi_oracle" {
                0.0
            } else {
                l / oi_loss - 1.0
            };
            rel.insert(key.clone(), r);
        }
    }

    Ok(TrialReport {
        spec: spec.clone(),
        master_seed,
        trial_index,
        losses,
        rel,
        excluded,
    })
}

/// Shape of the benchmark grid actually run.
#[derive(Debug, Clone, Serialize)]
pub struct GridDescription {
    pub ranks: Vec<usize>,
    pub profiles: Vec<String>,
    /// Number of leading-singular-value multipliers (0.9, 1.0, ..., 10.0).
    pub multiplier_count: usize,
    /// The detection threshold `c^{1/4}` the multipliers are scaled by.
    pub threshold_scale: f64,
}

/// Aggregated benchmark results.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub m: usize,
    pub n: usize,
    pub master_seed: u64,
    pub grid: GridDescription,
    /// Average relative excess loss per scheme over the included cells.
    pub arel: BTreeMap<String, f64>,
    pub trial_count: usize,
    pub excluded_count: usize,
    /// Wall time is informational only and deliberately not serialized, so
    /// identical runs produce byte-identical reports.
    #[serde(skip)]
    pub wall_time_secs: f64,
}

/// The benchmark grid for an m x n run, in trial-index order: rank
/// (outermost), then profile, then leading-value multiplier (innermost).
///
/// Ranks are `{1, 3, 10, 32, 100}` capped at `min(m, n)/10`; the leading
/// singular value ranges over `{0.9, 1.0, ..., 10.0} * c^{1/4}`.
pub fn grid_cells(m: usize, n: usize) -> Result<Vec<SignalSpec>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidSignalSpec(
            "dimensions must be positive".into(),
        ));
    }
    let cap = m.min(n) / 10;
    let ranks: Vec<usize> = [1usize, 3, 10, 32, 100]
        .into_iter()
        .filter(|r| *r <= cap)
        .collect();
    if ranks.is_empty() {
        return Err(Error::InvalidSignalSpec(format!(
            "min(m, n) = {} is too small for the benchmark grid (needs >= 10)",
            m.min(n)
        )));
    }
    let c = m as f64 / n as f64;
    let threshold = c.powf(0.25);
    let mut cells = Vec::new();
    for &rank in &ranks {
        for profile in Profile::all() {
            for tenth in 9..=100u32 {
                cells.push(SignalSpec {
                    m,
                    n,
                    rank,
                    lambda_max: f64::from(tenth) / 10.0 * threshold,
                    profile,
                });
            }
        }
    }
    Ok(cells)
}

/// Run the full grid with one noise draw per cell and aggregate AREL per
/// scheme. `threads = 1` runs serially; more threads split the trials over a
/// local pool. The reduction is a fixed-order fold over trial indices, so the
/// report does not depend on the thread count.
pub fn run_suite(m: usize, n: usize, master_seed: u64, threads: usize) -> Result<SuiteReport> {
    run_suite_with_trials(m, n, master_seed, threads).map(|(report, _)| report)
}

/// Like [`run_suite`], additionally returning every per-trial report in
/// trial-index order.
pub fn run_suite_with_trials(
    m: usize,
    n: usize,
    master_seed: u64,
    threads: usize,
) -> Result<(SuiteReport, Vec<TrialReport>)> {
    let start = Instant::now();
    let cells = grid_cells(m, n)?;

    let reports: Vec<TrialReport> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| {
            use rayon::prelude::*;
            cells
                .par_iter()
                .enumerate()
                .map(|(i, spec)| run_trial(spec, master_seed, i as u64))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        cells
            .iter()
            .enumerate()
            .map(|(i, spec)| run_trial(spec, master_seed, i as u64))
            .collect::<Result<Vec<_>>>()?
    };

    let mut sums: BTreeMap<String, f64> = BTreeMap::new();
    let mut included = 0usize;
    let mut excluded_count = 0usize;
    for report in &reports {
        if report.excluded {
            excluded_count += 1;
            continue;
        }
        included += 1;
        for (key, rel) in &report.rel {
            *sums.entry(key.clone()).or_insert(0.0) += rel;
        }
    }
    if included == 0 {
        return Err(Error::InvalidParameter(
            "every trial was excluded; AREL is undefined".into(),
        ));
    }
    let arel = sums
        .into_iter()
        .map(|(k, v)| (k, v / included as f64))
        .collect();

    let first = &cells[0];
    let grid = GridDescription {
        ranks: {
            let mut ranks: Vec<usize> = cells.iter().map(|c| c.rank).collect();
            ranks.dedup();
            ranks
        },
        profiles: Profile::all().iter().map(Profile::label).collect(),
        multiplier_count: 92,
        threshold_scale: first.lambda_max / 0.9,
    };

    let report = SuiteReport {
        m,
        n,
        master_seed,
        grid,
        arel,
        trial_count: reports.len(),
        excluded_count,
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    Ok((report, reports))
}

/// Header for the per-trial CSV emitted by the benchmark.
pub fn trial_csv_header() -> String {
    let mut cols = vec![
        "trial_index".to_string(),
        "m".into(),
        "n".into(),
        "rank".into(),
        "profile".into(),
        "lambda_max".into(),
        "excluded".into(),
    ];
    for key in SCHEME_KEYS {
        cols.push(format!("loss_{key}"));
    }
    for key in SCHEME_KEYS {
        cols.push(format!("rel_{key}"));
    }
    cols.join(",")
}

/// One per-trial CSV row matching [`trial_csv_header`].
pub fn trial_csv_row(report: &TrialReport) -> String {
    let mut cols = vec![
        report.trial_index.to_string(),
        report.spec.m.to_string(),
        report.spec.n.to_string(),
        report.spec.rank.to_string(),
        report.spec.profile.label(),
        format!("{}", report.spec.lambda_max),
        (report.excluded as u8).to_string(),
    ];
    for key in SCHEME_KEYS {
        cols.push(format!("{}", report.losses[key]));
    }
    for key in SCHEME_KEYS {
        match report.rel.get(key) {
            Some(r) => cols.push(format!("{r}")),
            None => cols.push(String::new()),
        }
    }
    cols.join(",")
}
