//! Reconstruction of low-rank matrices observed with additive Gaussian noise.
//!
//! The observation model is `Y = A + (sigma / sqrt(n)) * W` with `A` an
//! unknown low-rank m x n signal and `W` i.i.d. standard normal. The crate
//! provides:
//!
//! - [`linalg`]: dense matrices, thin SVD, seeded random generation;
//! - [`mp_law`]: the Marchenko-Pastur singular-value law (density, closed-form
//!   CDF, support edges);
//! - [`variance`]: a noise-scale estimator that fits the observed spectrum to
//!   the Marchenko-Pastur CDF by Kolmogorov-Smirnov distance;
//! - [`spectrum`]: asymptotic maps between signal and observed singular
//!   values, singular-vector cosine estimates, and the resulting shrinkage
//!   coefficient;
//! - [`schemes`]: reconstruction schemes (hard/soft thresholding, their
//!   oracle versions, the orthogonally invariant oracle, and the RMT scheme
//!   with known or estimated noise scale);
//! - [`sim`]: a seeded Monte-Carlo harness that compares the schemes over a
//!   grid of signal shapes and aggregates average relative excess losses.
//!
//! All schemes act on the singular values of `Y` only, producing estimates of
//! the form `sum_j c_j u_j v_j'` in the SVD basis of `Y`.

pub mod csv_io;
pub mod error;
pub mod linalg;
pub mod mp_law;
pub mod schemes;
pub mod sim;
pub mod spectrum;
pub mod variance;

pub use error::{Error, Result};
pub use linalg::{
    compose, frobenius_norm_sq, matrix_inner_product, random_gaussian, random_orthogonal,
    singular_values, svd, DenseMatrix, RngStream, SvdFactors,
};
pub use mp_law::MpLaw;
pub use schemes::{
    hard_threshold, loss, oracle_hard, oracle_oi, oracle_soft, rmt_fixed_sigma, rmt_known_sigma,
    rmt_reconstruct, soft_threshold, Reconstruction, SigmaUsed,
};
pub use sim::{
    generate_signal, grid_cells, run_suite, run_suite_with_trials, run_trial, Profile, SignalSpec,
    SuiteReport, TrialReport,
};
pub use spectrum::{
    cos2_left, cos2_right, forward_limit, inverse_estimate, shrink_coefficient, SpikeEstimate,
};
pub use variance::{estimate_sigma, ks_objective, SigmaEstimate};
