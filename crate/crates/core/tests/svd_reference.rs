//! Checks the production SVD against an independent reference: a one-sided
//! Jacobi decomposition implemented here from scratch, plus the classical
//! singular-value perturbation inequality.

use rmt_denoise::{random_gaussian, singular_values, svd, DenseMatrix, RngStream};

/// Singular values by one-sided Jacobi orthogonalization. Deliberately
/// independent of the production path: no LAPACK, plain column rotations
/// until all column pairs are orthogonal.
fn jacobi_singular_values(a: &DenseMatrix) -> Vec<f64> {
    // Work tall: columns of the m >= n orientation.
    let tall = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.transpose()
    };
    let (m, n) = (tall.rows(), tall.cols());
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..m).map(|i| tall.get(i, j)).collect())
        .collect();

    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..m {
                    let vp = cols[p][i];
                    let vq = cols[q][i];
                    cols[p][i] = cs * vp - sn * vq;
                    cols[q][i] = sn * vp + cs * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = cols.iter().map(|col| dot(col, col).sqrt()).collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    values
}

#[test]
fn production_svd_matches_jacobi_reference() {
    let y = random_gaussian(50, 30, &mut RngStream::new(314, 0));
    let reference = jacobi_singular_values(&y);
    let factors = svd(&y).unwrap();
    assert_eq!(reference.len(), factors.values().len());
    for (got, want) in factors.values().iter().zip(&reference) {
        assert!(
            (got - want).abs() < 1e-9,
            "singular value mismatch: {got} vs {want}"
        );
    }
}

#[test]
fn jacobi_reference_agrees_on_wide_matrices() {
    let y = random_gaussian(12, 25, &mut RngStream::new(17, 1));
    let reference = jacobi_singular_values(&y);
    let factors = svd(&y).unwrap();
    for (got, want) in factors.values().iter().zip(&reference) {
        assert!((got - want).abs() < 1e-10);
    }
}

#[test]
fn singular_value_shifts_are_bounded_by_perturbation_norm() {
    // sum_j (lambda_j(C) - lambda_j(B))^2 <= ||C - B||_F^2 on random pairs.
    let mut stream = RngStream::new(2718, 0);
    for trial in 0..50 {
        let rows = 3 + (trial % 7);
        let cols = 3 + (trial % 5);
        let b = random_gaussian(rows, cols, &mut stream);
        let c = b
            .add_scaled(&random_gaussian(rows, cols, &mut stream), 0.3)
            .unwrap();
        let sv_b = singular_values(&b).unwrap();
        let sv_c = singular_values(&c).unwrap();
        let shift: f64 = sv_b.iter().zip(&sv_c).map(|(x, y)| (x - y) * (x - y)).sum();
        let diff = rmt_denoise::frobenius_norm_sq(&c.sub(&b).unwrap());
        assert!(
            shift <= diff * (1.0 + 1e-12) + 1e-12,
            "trial {trial}: {shift} > {diff}"
        );
    }
}
