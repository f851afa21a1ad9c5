//! Two independent stability tests for the drift matrix: the spectral
//! abscissa from a Schur decomposition, and the Routh-Hurwitz determinant
//! conditions on the characteristic polynomial.

use nalgebra::{DMatrix, Matrix6};
use num_complex::Complex64;
use serde::Serialize;

use super::{max_norm, rows, DriftMatrix};
use crate::error::{Error, Result};

/// Points with |spectral abscissa| ≤ MARGINAL_BAND · ‖A‖_max are marginal.
pub const MARGINAL_BAND: f64 = 1e-6;

/// Hurwitz minors within this fraction of their Hadamard bound are treated
/// as zero.
const HURWITZ_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityVerdict {
    /// All eigenvalues of A have negative real part.
    pub stable: bool,
    /// Within the marginal band around the stability boundary.
    pub marginal: bool,
    /// Largest real part of the eigenvalues of A, rad/s.
    pub spectral_abscissa: f64,
    /// Routh-Hurwitz outcome; `None` when the determinant test is
    /// indeterminate (or was not run).
    pub hurwitz_pass: Option<bool>,
}

impl StabilityVerdict {
    /// Stable and clear of the marginal band.
    pub fn usable(&self) -> bool {
        self.stable && !self.marginal
    }
}

pub fn eigenvalues(a: &Matrix6<f64>) -> Result<[Complex64; 6]> {
    let schur = nalgebra::Schur::try_new(*a, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical(format!("eigenvalue iteration did not converge for matrix {:?}", rows(a))))?;
    let ev = schur.complex_eigenvalues();
    let mut out = [Complex64::new(0.0, 0.0); 6];
    for (o, v) in out.iter_mut().zip(ev.iter()) {
        *o = Complex64::new(v.re, v.im);
    }
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical(format!("non-finite eigenvalues for matrix {:?}", rows(a))));
    }
    Ok(out)
}

pub fn spectral_abscissa(a: &Matrix6<f64>) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Spectral verdict only; `hurwitz_pass` is left empty.
pub fn stability_spectral(a: &DriftMatrix) -> Result<StabilityVerdict> {
    if a.0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("non-finite drift matrix {:?}", rows(&a.0))));
    }
    let abscissa = spectral_abscissa(&a.0)?;
    Ok(StabilityVerdict {
        stable: abscissa < 0.0,
        marginal: abscissa.abs() <= MARGINAL_BAND * max_norm(&a.0),
        spectral_abscissa: abscissa,
        hurwitz_pass: None,
    })
}

/// Monic characteristic polynomial det(λI − M) = λ⁶ + a₁λ⁵ + … + a₆,
/// returned as [1, a₁, …, a₆], by the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(m: &Matrix6<f64>) -> [f64; 7] {
    let n = 6;
    let mut coeffs = [0.0; 7];
    coeffs[0] = 1.0;
    let mut mk = Matrix6::<f64>::zeros();
    for k in 1..=n {
        mk = m * mk + Matrix6::identity() * coeffs[k - 1];
        coeffs[k] = -(m * mk).trace() / k as f64;
    }
    coeffs
}

/// Leading principal minors Δ₁…Δ₆ of the Hurwitz matrix of a monic
/// degree-6 polynomial, each paired with its Hadamard bound.
pub fn hurwitz_minors(coeffs: &[f64; 7]) -> [(f64, f64); 6] {
    let n = 6usize;
    let a = |k: isize| -> f64 {
        if (0..=n as isize).contains(&k) {
            coeffs[k as usize]
        } else {
            0.0
        }
    };
    // h_ij = a_{2j - i}, 1-indexed.
    let h = DMatrix::from_fn(n, n, |i, j| a(2 * (j as isize + 1) - (i as isize + 1)));
    let mut out = [(0.0, 0.0); 6];
    for (k, slot) in out.iter_mut().enumerate() {
        let sub = h.view((0, 0), (k + 1, k + 1)).into_owned();
        let bound: f64 = sub.row_iter().map(|r| r.norm()).product();
        *slot = (sub.determinant(), bound);
    }
    out
}

/// Routh-Hurwitz test: all Hurwitz minors positive. Minors too close to
/// zero to resolve make the test indeterminate unless another minor is
/// decisively negative.
pub fn stability_hurwitz(a: &DriftMatrix) -> Result<bool> {
    if a.0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("non-finite drift matrix {:?}", rows(&a.0))));
    }
    let scale = max_norm(&a.0);
    if scale == 0.0 {
        return Err(Error::Indeterminate("zero drift matrix".into()));
    }
    let coeffs = characteristic_polynomial(&(a.0 / scale));
    let minors = hurwitz_minors(&coeffs);
    let mut unresolved = None;
    for (k, &(det, bound)) in minors.iter().enumerate() {
        let tol = HURWITZ_TOLERANCE * bound;
        if det < -tol {
            return Ok(false);
        }
        if det <= tol && unresolved.is_none() {
            unresolved = Some((k + 1, det, bound));
        }
    }
    match unresolved {
        None => Ok(true),
        Some((k, det, bound)) => Err(Error::Indeterminate(format!(
            "Hurwitz minor {k} = {det:.3e} is within tolerance of zero (bound {bound:.3e})"
        ))),
    }
}

/// Full verdict: spectral abscissa plus the Hurwitz cross-check.
pub fn assess_stability(a: &DriftMatrix) -> Result<StabilityVerdict> {
    let mut verdict = stability_spectral(a)?;
    verdict.hurwitz_pass = match stability_hurwitz(a) {
        Ok(pass) => Some(pass),
        Err(Error::Indeterminate(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(verdict)
}
