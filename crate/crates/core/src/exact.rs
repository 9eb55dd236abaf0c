//! Exact solution by normal-mode diagonalisation.
//!
//! In mass-weighted coordinates `ρ = M^{1/2}·r` the potential is `ρᵀBρ/2`
//! with `B = [[ω², δωΩ], [δωΩ, Ω²]]`. The rotation `q = Rρ` diagonalises `B`
//! to `diag(λ₁, λ₂)`, and the eigenfunctions are products of `D_n` in the
//! arguments `ξ = G·r`, `G = √2·F·R·M^{1/2}`, `F = diag(√ω₁, √ω₂)`.
//!
//! The eigenpair is evaluated in closed form so that the `λ₁ > λ₂` ordering
//! and the branch of `θ` are fixed.

use std::f64::consts::PI;

use crate::linalg::Mat2;
use crate::params::{StateIndex, SystemParams};
use crate::pcf::{self, PcfError};

/// Normal-mode data of the coupled system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalModes {
    /// Squared normal frequencies, `lambda1 > lambda2 > 0`.
    pub lambda1: f64,
    pub lambda2: f64,
    /// Mixing angle in `(−π/2, π/2)`.
    pub theta: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// Rows are the normalised eigenvectors of `B`.
    pub r: Mat2,
    /// `diag(√ω₁, √ω₂)`.
    pub f: Mat2,
    /// `ξ = G·(x, y)ᵀ`.
    pub g: Mat2,
}

impl NormalModes {
    pub fn new(p: &SystemParams) -> Self {
        let (lambda1, lambda2) = eigenvalues(p);
        let theta = angle_from_lambda1(p, lambda1);
        let (s, c) = theta.sin_cos();
        let omega1 = lambda1.sqrt();
        let omega2 = lambda2.sqrt();
        let (m, big_m) = (p.m(), p.big_m());
        let g = Mat2::new(
            (2.0 * m * omega1).sqrt() * c,
            (2.0 * big_m * omega1).sqrt() * s,
            -(2.0 * m * omega2).sqrt() * s,
            (2.0 * big_m * omega2).sqrt() * c,
        );
        NormalModes {
            lambda1,
            lambda2,
            theta,
            omega1,
            omega2,
            r: Mat2::new(c, s, -s, c),
            f: Mat2::diag(omega1.sqrt(), omega2.sqrt()),
            g,
        }
    }
}

/// Mass-weighted potential matrix `B`.
pub fn b_matrix(p: &SystemParams) -> Mat2 {
    let (w, big_w, d) = (p.omega(), p.big_omega(), p.delta());
    Mat2::new(w * w, d * w * big_w, d * w * big_w, big_w * big_w)
}

/// `(λ₁, λ₂)`, the eigenvalues of `B` with `λ₁ > λ₂ > 0`.
pub fn eigenvalues(p: &SystemParams) -> (f64, f64) {
    let (w2, big_w2, d) = (p.omega() * p.omega(), p.big_omega() * p.big_omega(), p.delta());
    let split = ((w2 - big_w2).powi(2) + 4.0 * d * d * w2 * big_w2).sqrt();
    let lambda1 = 0.5 * (w2 + big_w2 + split);
    // det B / λ₁ avoids cancellation when the split is close to the trace.
    let lambda2 = w2 * big_w2 * (1.0 - d * d) / lambda1;
    (lambda1, lambda2)
}

fn angle_from_lambda1(p: &SystemParams, lambda1: f64) -> f64 {
    let big_w2 = p.big_omega() * p.big_omega();
    // λ₁ − Ω² ≥ ω² − Ω² > 0 whenever Ω < ω, so the denominator never vanishes.
    (p.delta() * p.omega() * p.big_omega() / (lambda1 - big_w2)).atan()
}

/// `θ = arctan(δωΩ / (λ₁ − Ω²))`.
pub fn mixing_angle(p: &SystemParams) -> f64 {
    angle_from_lambda1(p, eigenvalues(p).0)
}

/// `E_{nl} = ω₁(n + ½) + ω₂(l + ½)`.
pub fn exact_energy(p: &SystemParams, s: StateIndex) -> f64 {
    let (l1, l2) = eigenvalues(p);
    l1.sqrt() * (s.n as f64 + 0.5) + l2.sqrt() * (s.l as f64 + 0.5)
}

pub fn g_matrix(p: &SystemParams) -> Mat2 {
    NormalModes::new(p).g
}

/// `|det G| = 2(1 − δ²)^{1/4}·√(mMωΩ)`, the Jacobian `dξ₁dξ₂/dxdy`.
pub fn volume_element(p: &SystemParams) -> f64 {
    2.0 * (1.0 - p.delta() * p.delta()).powf(0.25) * (p.m() * p.big_m() * p.omega() * p.big_omega()).sqrt()
}

/// Normalised exact eigenfunction `Ψ_{nl}(x, y)`:
///
/// `Ψ = (mMωΩ√(1 − δ²))^{1/4} / √(π·n!·l!) · D_n(ξ₁)·D_l(ξ₂)`, `ξ = G·(x, y)ᵀ`.
pub fn exact_wavefunction(p: &SystemParams, s: StateIndex, x: f64, y: f64) -> Result<f64, PcfError> {
    let modes = NormalModes::new(p);
    exact_wavefunction_with(&modes, p, s, x, y)
}

/// As [`exact_wavefunction`], reusing precomputed normal modes.
pub fn exact_wavefunction_with(
    modes: &NormalModes,
    p: &SystemParams,
    s: StateIndex,
    x: f64,
    y: f64,
) -> Result<f64, PcfError> {
    let [xi1, xi2] = modes.g.apply([x, y]);
    let norm = (volume_element(p) / (2.0 * PI)).sqrt();
    Ok(norm * pcf::d_n_normalized(s.n, xi1)? * pcf::d_n_normalized(s.l, xi2)?)
}
