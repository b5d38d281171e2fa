//! Dense matrices, thin SVD, and seeded random matrix generation.
//!
//! Everything is `f64`, row-major, and immutable after construction. All
//! randomness flows through [`RngStream`] so that any consumer can be
//! reproduced from a `(master_seed, stream_index)` pair.

use ndarray::{Array1, Array2};
use ndarray_linalg::{JobSvd, QR, SVDDC};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Dense real matrix. Construction validates that every entry is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    data: Array2<f64>,
}

impl DenseMatrix {
    /// Wrap an existing array, rejecting empty shapes and non-finite entries.
    pub fn from_array(data: Array2<f64>) -> Result<Self> {
        let (rows, cols) = data.dim();
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        for ((i, j), &v) in data.indexed_iter() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
        Ok(Self { data })
    }

    /// Build from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyMatrix {
                rows: rows.len(),
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        let cols = rows[0].len();
        let mut flat = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedCsv {
                    row: i + 1,
                    expected: cols,
                    got: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        let data =
            Array2::from_shape_vec((rows.len(), cols), flat).expect("shape determined from input");
        Self::from_array(data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            data: Array2::zeros((rows, cols)),
        }
    }

    /// m x n matrix with `values` on the main diagonal, zeros elsewhere.
    pub fn from_diag(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        if values.len() > rows.min(cols) {
            return Err(Error::InvalidParameter(format!(
                "{} diagonal entries do not fit a {rows}x{cols} matrix",
                values.len()
            )));
        }
        let mut data = Array2::zeros((rows, cols));
        for (i, &v) in values.iter().enumerate() {
            data[[i, i]] = v;
        }
        Self::from_array(data)
    }

    // Results of internal arithmetic on finite inputs; skip the O(mn) re-scan.
    fn from_array_unchecked(data: Array2<f64>) -> Self {
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self { data }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[[row, col]]
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_array_unchecked(self.data.t().to_owned())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_array_unchecked(&self.data * factor)
    }

    /// `self + factor * other`, e.g. signal plus scaled noise.
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_array_unchecked(
            &self.data + &(&other.data * factor),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_array_unchecked(&self.data - &other.data))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::ShapeMismatch {
                left_rows: self.rows(),
                left_cols: self.cols(),
                right_rows: other.rows(),
                right_cols: other.cols(),
            });
        }
        Ok(Self::from_array_unchecked(self.data.dot(&other.data)))
    }

    pub(crate) fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.data.dim() != other.data.dim() {
            return Err(Error::ShapeMismatch {
                left_rows: self.rows(),
                left_cols: self.cols(),
                right_rows: other.rows(),
                right_cols: other.cols(),
            });
        }
        Ok(())
    }
}

/// Thin singular value decomposition: `k = min(m, n)` triples, values
/// non-increasing, singular vectors stored as matrix columns.
///
/// Sign convention: within each triple, the left vector's entry of largest
/// absolute value is non-negative (ties broken by lowest index). This keeps
/// repeated runs bit-identical; individual vectors inside a block of repeated
/// singular values are still decomposition-dependent.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    left: Array2<f64>,
    values: Vec<f64>,
    right: Array2<f64>,
}

impl SvdFactors {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// m x k matrix whose j-th column is the left singular vector u_j.
    pub fn left(&self) -> &Array2<f64> {
        &self.left
    }

    /// n x k matrix whose j-th column is the right singular vector v_j.
    pub fn right(&self) -> &Array2<f64> {
        &self.right
    }

    pub fn rank_hint(&self) -> usize {
        self.values.len()
    }

    /// Reconstruct `sum_j coefficients[j] * u_j v_j'`.
    pub fn compose_with(&self, coefficients: &[f64]) -> Result<DenseMatrix> {
        compose(coefficients, &self.left, &self.right)
    }
}

/// Thin SVD with the deterministic sign convention described on
/// [`SvdFactors`]. Fails (never returns garbage) if the underlying
/// decomposition does not converge.
pub fn svd(y: &DenseMatrix) -> Result<SvdFactors> {
    let (u, s, vt) = y
        .as_array()
        .svddc(JobSvd::Some)
        .map_err(|_| Error::SvdFailed)?;
    let mut left = u.ok_or(Error::SvdFailed)?;
    let mut right = vt.ok_or(Error::SvdFailed)?.t().to_owned();
    let values: Vec<f64> = s.to_vec();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::SvdFailed);
    }

    for j in 0..values.len() {
        let col = left.column(j);
        let mut pivot = 0;
        let mut best = -1.0;
        for (i, &v) in col.iter().enumerate() {
            if v.abs() > best {
                best = v.abs();
                pivot = i;
            }
        }
        if left[[pivot, j]] < 0.0 {
            left.column_mut(j).mapv_inplace(|v| -v);
            right.column_mut(j).mapv_inplace(|v| -v);
        }
    }

    Ok(SvdFactors {
        left,
        values,
        right,
    })
}

/// Squared Frobenius norm, sum of squared entries.
pub fn frobenius_norm_sq(b: &DenseMatrix) -> f64 {
    b.as_array().iter().map(|v| v * v).sum()
}

/// Trace inner product `<A, B> = tr(A'B)`, i.e. the entrywise dot product.
pub fn matrix_inner_product(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    a.check_same_shape(b)?;
    Ok(a.as_array()
        .iter()
        .zip(b.as_array().iter())
        .map(|(x, y)| x * y)
        .sum())
}

/// Reconstruct `sum_j coefficients[j] * u_j v_j'` from vector columns.
pub fn compose(
    coefficients: &[f64],
    left: &Array2<f64>,
    right: &Array2<f64>,
) -> Result<DenseMatrix> {
    if coefficients.len() != left.ncols() || coefficients.len() != right.ncols() {
        return Err(Error::LengthMismatch {
            coefficients: coefficients.len(),
            vectors: left.ncols().min(right.ncols()),
        });
    }
    let mut scaled = left.to_owned();
    for (j, &c) in coefficients.iter().enumerate() {
        scaled.column_mut(j).mapv_inplace(|v| v * c);
    }
    Ok(DenseMatrix::from_array_unchecked(scaled.dot(&right.t())))
}

/// Seedable, splittable random stream. Every consumer owns exactly one
/// stream; independent streams come from distinct `(master_seed, index)`
/// pairs, so parallel trials reproduce regardless of scheduling order.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    /// Derive stream `index` of the generator family seeded by `master_seed`.
    pub fn new(master_seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(index);
        Self { rng }
    }

    fn sample_standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

/// m x n matrix of i.i.d. standard normal entries drawn from `stream`.
pub fn random_gaussian(rows: usize, cols: usize, stream: &mut RngStream) -> DenseMatrix {
    assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
    let data = Array2::from_shape_simple_fn((rows, cols), || stream.sample_standard_normal());
    DenseMatrix::from_array_unchecked(data)
}

/// Haar-distributed k x k orthogonal matrix: QR of a Gaussian matrix with the
/// R-diagonal sign correction.
pub fn random_orthogonal(k: usize, stream: &mut RngStream) -> DenseMatrix {
    assert!(k > 0, "order must be positive");
    let g = random_gaussian(k, k, stream);
    let (mut q, r): (Array2<f64>, Array2<f64>) =
        g.as_array().qr().expect("QR of a finite square matrix");
    for j in 0..k {
        if r[[j, j]] < 0.0 {
            q.column_mut(j).mapv_inplace(|v| -v);
        }
    }
    DenseMatrix::from_array_unchecked(q)
}

/// Singular values of `b`, non-increasing. Values only; cheaper than [`svd`]
/// when the vectors are not needed.
pub fn singular_values(b: &DenseMatrix) -> Result<Vec<f64>> {
    let (_, s, _) = b
        .as_array()
        .svddc(JobSvd::None)
        .map_err(|_| Error::SvdFailed)?;
    let values: Array1<f64> = s;
    Ok(values.to_vec())
}
