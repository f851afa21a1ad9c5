//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use magcoh_core::dynamics::{eigenvalues, max_norm};
use magcoh_core::SystemParams;
use nalgebra::{Matrix2, Matrix6, Vector2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Magnon amplitude from the fixed point ṁ = 0 with the cavity eliminated,
/// solved as a real 2×2 system in (Re m, Im m):
///
/// 0 = −(γ_m + iΔ̃_m) m − g² m / (γ_a + iΔ_a) + ξ e^{iφ} m* + Ω_l
pub fn magnon_amplitude_oracle(p: &SystemParams, drive: f64, detuning: f64) -> Complex64 {
    let k = Complex64::new(p.gamma_a, p.delta_a);
    let c_m = -Complex64::new(p.gamma_m, detuning) - p.g_ma * p.g_ma / k;
    let c_conj = Complex64::from_polar(p.xi, p.phi);
    // c_m (x + iy) + c_conj (x − iy) = −Ω_l
    let col_x = c_m + c_conj;
    let col_y = Complex64::i() * (c_m - c_conj);
    let m = Matrix2::new(col_x.re, col_y.re, col_x.im, col_y.im);
    let sol = m.lu().solve(&Vector2::new(-drive, 0.0)).expect("non-singular fixed point");
    Complex64::new(sol[0], sol[1])
}

/// ∫₀^∞ e^{At} F e^{Aᵀt} dt by interval doubling:
/// V(2τ) = V(τ) + E V(τ) Eᵀ with E = e^{Aτ}, starting from Taylor series
/// on a short interval.
pub fn lyapunov_integral_oracle(a: &Matrix6<f64>, f: &Matrix6<f64>) -> Matrix6<f64> {
    let abscissa = eigenvalues(a).unwrap().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    assert!(abscissa < 0.0, "oracle needs a stable matrix");
    let horizon = 40.0 / abscissa.abs();

    let norm = max_norm(a) * 6.0;
    let mut tau = 0.25 / norm;
    // E0 = Σ (Aτ)^n / n!, V0 = Σ τ^{n+1}/(n+1)! Lⁿ(F), L(X) = AX + XAᵀ.
    let mut e = Matrix6::identity();
    let mut term = Matrix6::identity();
    let mut v = Matrix6::zeros();
    // x_n = τ^{n+1}/(n+1)! Lⁿ(F)
    let mut x = f * tau;
    for n in 1..40 {
        term = term * a * (tau / n as f64);
        e += term;
        v += x;
        x = (a * x + x * a.transpose()) * (tau / (n as f64 + 1.0));
    }
    while tau < horizon {
        v += e * v * e.transpose();
        e = e * e;
        tau *= 2.0;
    }
    (v + v.transpose()) * 0.5
}

/// Symplectic eigenvalues from the eigenvalues of −(SV)², which are the
/// squares w_k² (each twice). Descending.
pub fn symplectic_oracle(v: &Matrix6<f64>) -> [f64; 3] {
    let s = magcoh_core::gaussian::symplectic_form();
    let sv = s * v;
    let m = -(sv * sv);
    let mut sq: Vec<f64> = eigenvalues(&m).unwrap().iter().map(|z| z.re.max(0.0).sqrt()).collect();
    sq.sort_by(|a, b| b.total_cmp(a));
    [(sq[0] + sq[1]) / 2.0, (sq[2] + sq[3]) / 2.0, (sq[4] + sq[5]) / 2.0]
}

/// Reference parameter set with random variations that keep the system
/// in the same regime. Not every draw is stable.
pub fn random_params(rng: &mut impl Rng) -> SystemParams {
    let base = SystemParams::paper_defaults();
    let ga = base.gamma_a;
    SystemParams {
        g_ma: rng.random_range(0.0..1.2) * base.omega_b,
        xi: rng.random_range(0.0..1.5) * ga,
        phi: rng.random_range(0.0..TAU),
        drive_power: rng.random_range(0.0..1e-3),
        temperature: rng.random_range(0.01..50.0),
        gamma_m: rng.random_range(0.1..1.0) * ga,
        delta_a: rng.random_range(0.5..1.5) * base.omega_b,
        ..base
    }
}

/// Random drift-shaped matrix: the sparsity pattern of the linearized
/// dynamics with O(1) entries.
pub fn random_drift_shape(rng: &mut impl Rng) -> Matrix6<f64> {
    let ga = rng.random_range(0.05..1.0);
    let da = rng.random_range(-2.0..2.0);
    let g = rng.random_range(0.0..2.0);
    let gm = rng.random_range(0.05..1.0);
    let gphi = rng.random_range(-1.5..1.5);
    let det = rng.random_range(-2.0..2.0);
    let dphi = rng.random_range(-1.5..1.5);
    let big_g = rng.random_range(0.0..2.0);
    let wb = rng.random_range(0.1..2.0);
    let gb = rng.random_range(0.01..0.5);
    #[rustfmt::skip]
    let m = Matrix6::new(
        -ga,  da,  0.0,           g,            0.0,    0.0,
        -da, -ga, -g,             0.0,          0.0,    0.0,
        0.0,  g,  -(gm + gphi),   det + dphi,  -big_g,  0.0,
        -g,   0.0, -(det - dphi), -(gm - gphi), 0.0,    0.0,
        0.0,  0.0, 0.0,           0.0,          0.0,    wb,
        0.0,  0.0, 0.0,           big_g,       -wb,    -gb,
    );
    m
}

pub fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Symplectic matrix acting as a rotation on one mode's block.
pub fn block_rotation(mode: usize, theta: f64) -> Matrix6<f64> {
    let mut r = Matrix6::identity();
    r.fixed_view_mut::<2, 2>(2 * mode, 2 * mode).copy_from(&rotation(theta));
    r
}

/// Random symplectic matrix built from local rotations, single-mode
/// squeezers and two-mode beam splitters.
pub fn random_symplectic(rng: &mut impl Rng) -> Matrix6<f64> {
    let mut s = Matrix6::identity();
    for _ in 0..4 {
        for mode in 0..3 {
            s = block_rotation(mode, rng.random_range(0.0..TAU)) * s;
            let r: f64 = rng.random_range(-1.0..1.0);
            let mut sq = Matrix6::identity();
            sq[(2 * mode, 2 * mode)] = r.exp();
            sq[(2 * mode + 1, 2 * mode + 1)] = (-r).exp();
            s = sq * s;
        }
        let (i, j) = match rng.random_range(0..3) {
            0 => (0, 1),
            1 => (1, 2),
            _ => (0, 2),
        };
        let t: f64 = rng.random_range(0.0..PI);
        let (sn, cs) = t.sin_cos();
        let mut bs = Matrix6::identity();
        for q in 0..2 {
            bs[(2 * i + q, 2 * i + q)] = cs;
            bs[(2 * j + q, 2 * j + q)] = cs;
            bs[(2 * i + q, 2 * j + q)] = sn;
            bs[(2 * j + q, 2 * i + q)] = -sn;
        }
        s = bs * s;
    }
    s
}

pub fn thermal_product(n: [f64; 3]) -> Matrix6<f64> {
    Matrix6::from_diagonal(&nalgebra::Vector6::new(
        2.0 * n[0] + 1.0,
        2.0 * n[0] + 1.0,
        2.0 * n[1] + 1.0,
        2.0 * n[1] + 1.0,
        2.0 * n[2] + 1.0,
        2.0 * n[2] + 1.0,
    ))
}

pub fn rel_max(a: &Matrix6<f64>, b: &Matrix6<f64>) -> f64 {
    max_norm(&(a - b)) / max_norm(b)
}
