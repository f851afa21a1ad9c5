use nalgebra::{DMatrix, DVector, Matrix6};

use super::{max_norm, stability_spectral, DiffusionMatrix, DriftMatrix};
use crate::error::{Error, Result};

/// Solves A X + X Aᵀ + Q = 0 for square A by vectorization:
/// (I ⊗ A + A ⊗ I) vec X = −vec Q, with one step of iterative refinement.
///
/// The system is scaled by ‖A‖_max first; X is unchanged by the scaling.
/// A symmetric Q yields a symmetrized X.
pub fn solve_continuous_lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n || q.shape() != (n, n) {
        return Err(Error::Numerical(format!("Lyapunov shapes mismatch: A {:?}, Q {:?}", a.shape(), q.shape())));
    }
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::Numerical("Lyapunov operator is singular (zero or non-finite A)".into()));
    }
    let a = a / scale;
    let rhs = DVector::from_iterator(n * n, q.iter().map(|v| -v / scale));

    let nn = n * n;
    let mut k = DMatrix::<f64>::zeros(nn, nn);
    for j in 0..n {
        for i in 0..n {
            let row = i + n * j;
            for m in 0..n {
                // (I ⊗ A): X(m, j) contributes A(i, m)
                k[(row, m + n * j)] += a[(i, m)];
                // (A ⊗ I): X(i, m) contributes A(j, m)
                k[(row, i + n * m)] += a[(j, m)];
            }
        }
    }

    let lu = k.clone().full_piv_lu();
    let mut x = lu.solve(&rhs).ok_or_else(|| Error::Numerical("Lyapunov operator is singular".into()))?;
    let r = &rhs - &k * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("Lyapunov solution is not finite".into()));
    }

    let mut out = DMatrix::from_column_slice(n, n, x.as_slice());
    if q == &q.transpose() {
        out = (&out + out.transpose()) * 0.5;
    }
    Ok(out)
}

/// Stationary covariance of the linearized dynamics, A V + V Aᵀ + F = 0,
/// in the convention where a vacuum quadrature has variance 1/2.
pub fn solve_lyapunov(a: &DriftMatrix, f: &DiffusionMatrix) -> Result<Matrix6<f64>> {
    let verdict = stability_spectral(a)?;
    if !verdict.stable {
        return Err(Error::NoStationaryCovariance { abscissa: verdict.spectral_abscissa });
    }
    let a_dyn = DMatrix::from_column_slice(6, 6, a.0.as_slice());
    let f_dyn = DMatrix::from_column_slice(6, 6, f.0.as_slice());
    let v = solve_continuous_lyapunov(&a_dyn, &f_dyn)?;
    Ok(Matrix6::from_column_slice(v.as_slice()))
}

/// ‖A V + V Aᵀ + F‖_max
pub fn lyapunov_residual(a: &DriftMatrix, v: &Matrix6<f64>, f: &DiffusionMatrix) -> f64 {
    max_norm(&(a.0 * v + v * a.0.transpose() + f.0))
}
