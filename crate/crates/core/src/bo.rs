//! Born-Oppenheimer channel functions and couplings.
//!
//! For fixed `y`, the fast Hamiltonian
//! `h = −∂²ₓ/2m + mω²x²/2 + MΩ²y²/2 + c·x·y` is a displaced oscillator with
//! eigenfunctions `χ_n = (mω/π)^{1/4}·D_n(z)/√n!`, where
//! `z = √(2mω)·x + √(2MΩ²/ω)·δ·y`, and potential curves
//! `ε_n(y) = ω(n + ½) + (1 − δ²)·MΩ²y²/2`.
//!
//! Because `z` is linear in `y`, the couplings `α_{ln} = ⟨χ_l|∂_yχ_n⟩` and
//! `β_{ln} = ⟨χ_l|∂²_yχ_n⟩` are constants: `α` lives on `|l − n| = 1`,
//! `β` on `l − n ∈ {0, ±2}`.

use std::f64::consts::PI;

use crate::linalg::Mat2;
use crate::params::{StateIndex, SystemParams};
use crate::pcf::{self, PcfError};

/// Partial derivatives of the linear map `z(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZGeometry {
    /// `∂ₓz = √(2mω) > 0`
    pub dz_dx: f64,
    /// `∂_y z = √(2MΩ²/ω)·δ`
    pub dz_dy: f64,
    /// `∂_y x` along lines of constant `z`: `−∂_y z / ∂ₓz = −√(M/m)·Ωδ/ω`.
    pub dx_dy: f64,
}

impl ZGeometry {
    pub fn new(p: &SystemParams) -> Self {
        let dz_dx = (2.0 * p.m() * p.omega()).sqrt();
        let dz_dy = (2.0 * p.big_m() * p.big_omega().powi(2) / p.omega()).sqrt() * p.delta();
        ZGeometry { dz_dx, dz_dy, dx_dy: -dz_dy / dz_dx }
    }

    pub fn z(&self, x: f64, y: f64) -> f64 {
        self.dz_dx * x + self.dz_dy * y
    }
}

/// `ω̃₁ = ω(1 + δ²Ω²/(2ω²))`
pub fn omega1_tilde(p: &SystemParams) -> f64 {
    let w = p.omega();
    w * (1.0 + p.delta().powi(2) * p.big_omega().powi(2) / (2.0 * w * w))
}

/// `ω̃₂ = Ω√(1 − δ²)`
pub fn omega2_tilde(p: &SystemParams) -> f64 {
    p.big_omega() * (1.0 - p.delta().powi(2)).sqrt()
}

/// Normalised fast-coordinate eigenfunction `χ_n(x, y)`; `∫χ_n² dx = 1` for every `y`.
pub fn chi_n(n: usize, x: f64, y: f64, p: &SystemParams) -> Result<f64, PcfError> {
    let z = ZGeometry::new(p).z(x, y);
    Ok((p.m() * p.omega() / PI).powf(0.25) * pcf::d_n_normalized(n, z)?)
}

/// Potential curve `ε_n(y)`.
pub fn epsilon_n(n: usize, y: f64, p: &SystemParams) -> f64 {
    p.omega() * (n as f64 + 0.5) + 0.5 * (1.0 - p.delta().powi(2)) * p.big_m() * p.big_omega().powi(2) * y * y
}

/// Diagonal second-order coupling `β_nn = ⟨χ_n|∂²_yχ_n⟩ = −(MΩ²δ²/ω)(n + ½)`.
pub fn beta_diag(n: usize, p: &SystemParams) -> f64 {
    -(p.big_m() * p.big_omega().powi(2) * p.delta().powi(2) / p.omega()) * (n as f64 + 0.5)
}

/// First-order coupling `α = ⟨χ_l|∂_yχ_n⟩`.
///
/// Nonzero only for `l = n − 1` (`(∂_y z/2)·√n`) and `l = n + 1`
/// (`−(∂_y z/2)·√(n+1)`). The diagonal (Berry connection) is zero.
pub fn alpha_offdiag(l: usize, n: usize, p: &SystemParams) -> f64 {
    let a = 0.5 * ZGeometry::new(p).dz_dy;
    if l + 1 == n {
        a * (n as f64).sqrt()
    } else if l == n + 1 {
        -a * (n as f64 + 1.0).sqrt()
    } else {
        0.0
    }
}

/// Off-diagonal second-order coupling `β = ⟨χ_l|∂²_yχ_n⟩` for `l ≠ n`.
///
/// From `∂²_yχ_n = a²(√(n(n−1))·χ_{n−2} − (2n+1)·χ_n + √((n+1)(n+2))·χ_{n+2})`
/// with `a = ∂_y z/2`. Returns 0 on the diagonal; see [`beta_diag`].
pub fn beta_offdiag(l: usize, n: usize, p: &SystemParams) -> f64 {
    let a = 0.5 * ZGeometry::new(p).dz_dy;
    let nf = n as f64;
    if l + 2 == n {
        a * a * (nf * (nf - 1.0)).sqrt()
    } else if l == n + 2 {
        a * a * ((nf + 1.0) * (nf + 2.0)).sqrt()
    } else {
        0.0
    }
}

/// Full `β_{ln}` including the diagonal.
pub fn beta_coupling(l: usize, n: usize, p: &SystemParams) -> f64 {
    if l == n {
        beta_diag(n, p)
    } else {
        beta_offdiag(l, n, p)
    }
}

/// Residuals `−β_{ln}·φ − 2α_{ln}·ϑ` of the off-diagonal projections of the
/// phase-space equations, for the neighbouring channels `l = n ± 1, n ± 2`.
///
/// The projected solver only integrates the diagonal equation; these are
/// reported as a diagnostic and are not imposed as constraints.
pub fn offdiagonal_residuals(n: usize, phi: f64, vartheta: f64, p: &SystemParams) -> Vec<(usize, f64)> {
    let neighbours = [n.checked_sub(2), n.checked_sub(1), Some(n + 1), Some(n + 2)];
    neighbours
        .into_iter()
        .flatten()
        .map(|l| (l, -beta_offdiag(l, n, p) * phi - 2.0 * alpha_offdiag(l, n, p) * vartheta))
        .collect()
}

/// `Ẽ_{nl} = ω̃₁(n + ½) + ω̃₂(l + ½)`.
pub fn bo_energy(p: &SystemParams, s: StateIndex) -> f64 {
    omega1_tilde(p) * (s.n as f64 + 0.5) + omega2_tilde(p) * (s.l as f64 + 0.5)
}

/// `ỹ = y·√(2MΩ)·(1 − δ²)^{1/4}`.
pub fn y_tilde(y: f64, p: &SystemParams) -> f64 {
    y * dy_tilde_dy(p)
}

fn dy_tilde_dy(p: &SystemParams) -> f64 {
    (2.0 * p.big_m() * p.big_omega()).sqrt() * (1.0 - p.delta().powi(2)).powf(0.25)
}

/// Normalised slow-coordinate function
/// `φ_{nl}(ỹ) = (4M²Ω²(1 − δ²))^{1/8} / (√l!·(2π)^{1/4}) · D_l(ỹ)`; `∫φ² dy = 1`.
pub fn varphi_nl(l: usize, y_tilde: f64, p: &SystemParams) -> Result<f64, PcfError> {
    let prefactor = (dy_tilde_dy(p) / (2.0 * PI).sqrt()).sqrt();
    Ok(prefactor * pcf::d_n_normalized(l, y_tilde)?)
}

/// `G̃ = [[√(2mω), √(2MΩ²/ω)·δ], [0, √(2MΩ)(1 − δ²)^{1/4}]]`, so that
/// `(z, ỹ)ᵀ = G̃·(x, y)ᵀ`.
pub fn g_tilde(p: &SystemParams) -> Mat2 {
    let geom = ZGeometry::new(p);
    Mat2::new(geom.dz_dx, geom.dz_dy, 0.0, dy_tilde_dy(p))
}

/// `R̃ = F̃⁻¹·G̃·M^{−1/2}/√2`, `F̃ = diag(√ω̃₁, √ω̃₂)`. Upper triangular and
/// not orthogonal for `δ ≠ 0`.
pub fn r_tilde(p: &SystemParams) -> Mat2 {
    let f_inv = Mat2::diag(1.0 / omega1_tilde(p).sqrt(), 1.0 / omega2_tilde(p).sqrt());
    let mass_inv = Mat2::diag(1.0 / p.m().sqrt(), 1.0 / p.big_m().sqrt());
    (f_inv * g_tilde(p) * mass_inv).scale(std::f64::consts::FRAC_1_SQRT_2)
}

/// Normalised BO product `Ψ̃_{nl}(x, y) = χ_n(x, y)·φ_{nl}(ỹ(y))`, evaluated
/// through `ξ̃ = G̃·(x, y)ᵀ`.
pub fn bo_wavefunction(p: &SystemParams, s: StateIndex, x: f64, y: f64) -> Result<f64, PcfError> {
    bo_wavefunction_with(&g_tilde(p), s, x, y)
}

/// As [`bo_wavefunction`], reusing a precomputed `G̃`.
pub fn bo_wavefunction_with(g_tilde: &Mat2, s: StateIndex, x: f64, y: f64) -> Result<f64, PcfError> {
    let [z, yt] = g_tilde.apply([x, y]);
    // |det G̃| = 2(1 − δ²)^{1/4}·√(mMωΩ)
    let norm = (g_tilde.det().abs() / (2.0 * PI)).sqrt();
    Ok(norm * pcf::d_n_normalized(s.n, z)? * pcf::d_n_normalized(s.l, yt)?)
}

/// Per-channel BO data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoChannel {
    pub n: usize,
    pub beta_nn: f64,
    pub omega1_tilde: f64,
    pub omega2_tilde: f64,
    pub g_tilde: Mat2,
    pub r_tilde: Mat2,
}

impl BoChannel {
    pub fn new(p: &SystemParams, n: usize) -> Self {
        BoChannel {
            n,
            beta_nn: beta_diag(n, p),
            omega1_tilde: omega1_tilde(p),
            omega2_tilde: omega2_tilde(p),
            g_tilde: g_tilde(p),
            r_tilde: r_tilde(p),
        }
    }

    pub fn energy(&self, l: usize) -> f64 {
        self.omega1_tilde * (self.n as f64 + 0.5) + self.omega2_tilde * (l as f64 + 0.5)
    }
}
