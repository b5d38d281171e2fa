//! Command-line interface: denoise a matrix, estimate its noise scale,
//! dump spectrum diagnostics or the Marchenko-Pastur law as plot data, and
//! run the seeded benchmark suite.
//!
//! Matrices travel as header-less CSV (comma-separated decimal floats);
//! reports are JSON with a `schema_version` field. Exit codes: 0 success,
//! 2 usage, 3 I/O, 4 malformed CSV, 5 infeasible noise-scale search,
//! 6 failed decomposition, 1 anything else.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rmt_denoise::{
    csv_io, estimate_sigma, hard_threshold, rmt_fixed_sigma, rmt_reconstruct,
    run_suite_with_trials, shrink_coefficient, sim, singular_values, soft_threshold, svd, Error,
    MpLaw, Reconstruction, SigmaUsed,
};

const SCHEMA_VERSION: u32 = 1;

/// Low-rank matrix denoising in additive Gaussian noise.
///
/// The default convention is `Y = A + (sigma/sqrt(n)) W` with `W` standard
/// normal (`--noise-scaling sqrt-n`). Pass `--noise-scaling none` to declare
/// `Y = A + sigma W` instead; noise scales you pass in or get back are then
/// interpreted in that convention.
#[derive(Parser)]
#[command(name = "rmt-denoise", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct a low-rank signal from a noisy matrix CSV.
    Denoise(DenoiseArgs),
    /// Estimate the noise scale from a matrix CSV; prints JSON to stdout.
    EstimateSigma(EstimateSigmaArgs),
    /// Per-singular-value shrinkage diagnostics as CSV rows on stdout
    /// (scree data): lambda_y, detected, lambda_a_hat, cos2_left,
    /// cos2_right, coefficient.
    Spectrum(SpectrumArgs),
    /// Marchenko-Pastur density and CDF on a uniform grid, as CSV rows
    /// `s,density,cdf` on stdout.
    MpLaw(MpLawArgs),
    /// Run the benchmark grid and write per-trial CSV plus a summary JSON.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct DenoiseArgs {
    /// Input matrix CSV.
    input: PathBuf,
    /// Output CSV for the reconstructed matrix.
    output: PathBuf,
    /// Reconstruction scheme: `rmt`, `hard:<lambda>`, or `soft:<nu>`.
    #[arg(long, value_parser = parse_scheme)]
    scheme: SchemeSpec,
    /// Noise scale for the rmt scheme: `auto` (estimate from the spectrum)
    /// or a positive number. Not accepted by hard/soft thresholding.
    #[arg(long, value_parser = parse_sigma)]
    sigma: Option<SigmaArg>,
    #[arg(long, value_enum, default_value_t = NoiseScaling::SqrtN)]
    noise_scaling: NoiseScaling,
    /// Where to write the JSON report (default: output path with a
    /// `.report.json` extension).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateSigmaArgs {
    /// Input matrix CSV.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = NoiseScaling::SqrtN)]
    noise_scaling: NoiseScaling,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Input matrix CSV.
    input: PathBuf,
    /// Noise scale used to normalize the spectrum: `auto` or a positive
    /// number.
    #[arg(long, value_parser = parse_sigma, default_value = "auto")]
    sigma: SigmaArg,
    #[arg(long, value_enum, default_value_t = NoiseScaling::SqrtN)]
    noise_scaling: NoiseScaling,
}

#[derive(Args)]
struct MpLawArgs {
    /// Aspect ratio m/n of the law.
    #[arg(long)]
    c: f64,
    /// Number of grid points across the support (at least 2).
    #[arg(long)]
    points: usize,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of rows (required unless `--table aspect`).
    #[arg(long)]
    m: Option<usize>,
    /// Number of columns (required unless `--table square`).
    #[arg(long)]
    n: Option<usize>,
    /// Master seed; every grid cell derives its own stream from it.
    #[arg(long)]
    seed: u64,
    /// Output directory for `trials.csv` and `summary.json`.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: RMT_DENOISE_THREADS or 1).
    #[arg(long)]
    threads: Option<usize>,
    /// Preset: `square` sets n = m; `aspect` fixes m = 2000 and varies n.
    #[arg(long, value_enum)]
    table: Option<TablePreset>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum NoiseScaling {
    /// Y = A + (sigma / sqrt(n)) W.
    SqrtN,
    /// Y = A + sigma W.
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum TablePreset {
    Square,
    Aspect,
}

#[derive(Clone, Copy)]
enum SchemeSpec {
    Rmt,
    Hard(f64),
    Soft(f64),
}

#[derive(Clone, Copy)]
enum SigmaArg {
    Auto,
    Fixed(f64),
}

fn parse_scheme(text: &str) -> Result<SchemeSpec, String> {
    if text == "rmt" {
        return Ok(SchemeSpec::Rmt);
    }
    if let Some(value) = text.strip_prefix("hard:") {
        let lambda: f64 = value
            .parse()
            .map_err(|_| format!("bad threshold {value:?}"))?;
        return Ok(SchemeSpec::Hard(lambda));
    }
    if let Some(value) = text.strip_prefix("soft:") {
        let nu: f64 = value
            .parse()
            .map_err(|_| format!("bad threshold {value:?}"))?;
        return Ok(SchemeSpec::Soft(nu));
    }
    Err(format!(
        "unknown scheme {text:?}; expected rmt, hard:<lambda>, or soft:<nu>"
    ))
}

fn parse_sigma(text: &str) -> Result<SigmaArg, String> {
    if text == "auto" {
        return Ok(SigmaArg::Auto);
    }
    let value: f64 = text
        .parse()
        .map_err(|_| format!("bad noise scale {text:?}; expected `auto` or a number"))?;
    if !value.is_finite() || value <= 0.0 {
        return Err(format!("noise scale must be positive, got {value}"));
    }
    Ok(SigmaArg::Fixed(value))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 3,
        Error::RaggedCsv { .. }
        | Error::CsvParse { .. }
        | Error::EmptyCsv
        | Error::NonFinite { .. }
        | Error::EmptyMatrix { .. } => 4,
        Error::InfeasibleSigmaRange(_) => 5,
        Error::SvdFailed => 6,
        _ => 1,
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Denoise(args) => denoise(args),
        Command::EstimateSigma(args) => estimate_sigma_cmd(args),
        Command::Spectrum(args) => spectrum(args),
        Command::MpLaw(args) => mp_law(args),
        Command::Simulate(args) => simulate(args),
    }
}

// Conversion between the user's sigma convention and the internal one
// (which always carries the 1/sqrt(n) factor explicitly).
fn to_internal_sigma(user: f64, scaling: NoiseScaling, n: usize) -> f64 {
    match scaling {
        NoiseScaling::SqrtN => user,
        NoiseScaling::None => user * (n as f64).sqrt(),
    }
}

fn to_user_sigma(internal: f64, scaling: NoiseScaling, n: usize) -> f64 {
    match scaling {
        NoiseScaling::SqrtN => internal,
        NoiseScaling::None => internal / (n as f64).sqrt(),
    }
}

#[derive(Serialize)]
struct DenoiseReport<'a> {
    schema_version: u32,
    scheme_id: &'a str,
    /// Noise scale in the caller's convention, or "known-unit" for schemes
    /// that never look at it.
    sigma_used: serde_json::Value,
    detected_rank: usize,
    m: usize,
    n: usize,
    coefficients: &'a [f64],
}

fn denoise(args: DenoiseArgs) -> Result<(), Error> {
    let y = csv_io::read_matrix_csv(&args.input)?;
    let n = y.cols();

    let reconstruction: Reconstruction = match args.scheme {
        SchemeSpec::Rmt => match args.sigma.unwrap_or(SigmaArg::Auto) {
            SigmaArg::Auto => rmt_reconstruct(&y)?,
            SigmaArg::Fixed(user) => {
                rmt_fixed_sigma(&y, to_internal_sigma(user, args.noise_scaling, n))?
            }
        },
        SchemeSpec::Hard(lambda) => {
            reject_sigma_flag(&args.sigma, "hard")?;
            hard_threshold(&svd(&y)?, lambda)?
        }
        SchemeSpec::Soft(nu) => {
            reject_sigma_flag(&args.sigma, "soft")?;
            soft_threshold(&svd(&y)?, nu)?
        }
    };

    csv_io::write_matrix_csv(&args.output, &reconstruction.a_hat)?;

    let sigma_used = match reconstruction.sigma_used {
        SigmaUsed::KnownUnit => serde_json::Value::from("known-unit"),
        SigmaUsed::Value(internal) => {
            serde_json::Value::from(to_user_sigma(internal, args.noise_scaling, n))
        }
    };
    let report = DenoiseReport {
        schema_version: SCHEMA_VERSION,
        scheme_id: &reconstruction.scheme_id,
        sigma_used,
        detected_rank: reconstruction.detected_rank(),
        m: y.rows(),
        n,
        coefficients: &reconstruction.coefficients,
    };
    let report_path = args
        .report
        .unwrap_or_else(|| args.output.with_extension("report.json"));
    write_json(&report_path, &report)?;
    Ok(())
}

fn reject_sigma_flag(sigma: &Option<SigmaArg>, scheme: &str) -> Result<(), Error> {
    if sigma.is_some() {
        return Err(Error::InvalidParameter(format!(
            "--sigma only applies to the rmt scheme, not {scheme} thresholding"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct SigmaReport {
    schema_version: u32,
    sigma_hat: f64,
    ks_value: f64,
    window_count: usize,
    grid_size: usize,
    m: usize,
    n: usize,
}

fn estimate_sigma_cmd(args: EstimateSigmaArgs) -> Result<(), Error> {
    let y = csv_io::read_matrix_csv(&args.input)?;
    let values = singular_values(&y)?;
    let est = estimate_sigma(&values, y.rows(), y.cols())?;
    let report = SigmaReport {
        schema_version: SCHEMA_VERSION,
        sigma_hat: to_user_sigma(est.sigma_hat, args.noise_scaling, y.cols()),
        ks_value: est.ks_value,
        window_count: est.window_count,
        grid_size: est.grid_size,
        m: y.rows(),
        n: y.cols(),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("serializable")
    );
    Ok(())
}

fn spectrum(args: SpectrumArgs) -> Result<(), Error> {
    let y = csv_io::read_matrix_csv(&args.input)?;
    let (m, n) = (y.rows(), y.cols());
    let values = singular_values(&y)?;
    let sigma = match args.sigma {
        SigmaArg::Auto => estimate_sigma(&values, m, n)?.sigma_hat,
        SigmaArg::Fixed(user) => to_internal_sigma(user, args.noise_scaling, n),
    };
    let c = m as f64 / n as f64;
    let mut out = String::new();
    for &d in &values {
        let est = shrink_coefficient(d / sigma, c);
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            est.lambda_y,
            u8::from(est.detected),
            est.lambda_a_hat,
            est.cos2_left,
            est.cos2_right,
            est.coefficient
        ));
    }
    print!("{out}");
    Ok(())
}

fn mp_law(args: MpLawArgs) -> Result<(), Error> {
    if args.points < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 grid points, got {}",
            args.points
        )));
    }
    let law = MpLaw::new(args.c)?;
    let (lo, hi) = law.support();
    let mut out = String::new();
    for i in 0..args.points {
        let s = lo + (hi - lo) * i as f64 / (args.points - 1) as f64;
        out.push_str(&format!("{},{},{}\n", s, law.density(s), law.cdf(s)));
    }
    print!("{out}");
    Ok(())
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    schema_version: u32,
    #[serde(flatten)]
    report: &'a sim::SuiteReport,
}

fn simulate(args: SimulateArgs) -> Result<(), Error> {
    let (m, n) = match args.table {
        Some(TablePreset::Square) => {
            let m = args
                .m
                .ok_or_else(|| Error::InvalidParameter("--table square needs --m".into()))?;
            if args.n.is_some_and(|n| n != m) {
                return Err(Error::InvalidParameter(
                    "--table square runs m = n; drop --n or set it equal to --m".into(),
                ));
            }
            (m, m)
        }
        Some(TablePreset::Aspect) => {
            let n = args
                .n
                .ok_or_else(|| Error::InvalidParameter("--table aspect needs --n".into()))?;
            (args.m.unwrap_or(2000), n)
        }
        None => {
            let m = args
                .m
                .ok_or_else(|| Error::InvalidParameter("--m is required".into()))?;
            let n = args
                .n
                .ok_or_else(|| Error::InvalidParameter("--n is required".into()))?;
            (m, n)
        }
    };
    let threads = args.threads.unwrap_or_else(|| {
        std::env::var("RMT_DENOISE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(1)
    });
    if threads == 0 {
        return Err(Error::InvalidParameter("--threads must be positive".into()));
    }
    if threads > 1 {
        // Keep the BLAS library single-threaded so trial-level parallelism
        // does not oversubscribe the cores.
        std::env::set_var("OPENBLAS_NUM_THREADS", "1");
    }

    fs::create_dir_all(&args.out)?;
    let (report, trials) = run_suite_with_trials(m, n, args.seed, threads)?;

    let mut csv = String::with_capacity(trials.len() * 160);
    csv.push_str(&sim::trial_csv_header());
    csv.push('\n');
    for trial in &trials {
        csv.push_str(&sim::trial_csv_row(trial));
        csv.push('\n');
    }
    fs::write(args.out.join("trials.csv"), csv)?;

    let summary = SummaryFile {
        schema_version: SCHEMA_VERSION,
        report: &report,
    };
    write_json(&args.out.join("summary.json"), &summary)?;

    if report.excluded_count > 0 {
        eprintln!(
            "warning: {} of {} trials had an ill-defined relative excess loss and were excluded",
            report.excluded_count, report.trial_count
        );
    }
    eprintln!(
        "{} trials ({}x{}, seed {}) in {:.1}s; AREL: {}",
        report.trial_count,
        m,
        n,
        args.seed,
        report.wall_time_secs,
        report
            .arel
            .iter()
            .map(|(k, v)| format!("{k}={v:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
