//! Accuracy of the BO approximation against the exact solution.
//!
//! Energies: the relative error `ε = (Ẽ − E)/E` splits into per-mode parts
//! `ε_ω = ω̃₁/ω − ω̄₁` and `ε_Ω = ω̃₂/ω − ω̄₂`, which depend only on
//! `(δ, Ω̄)`. Wavefunctions: the overlap `σ_nl = ⟨Ψ_nl|Ψ̃_nl⟩`. Geometry: the
//! QU factorisation of `G`, whose sign-flipped triangular factor tracks `G̃`.

mod dataset;
mod figures;

pub use dataset::{Cell, Column, ColumnKind, Dataset};
pub use figures::{
    delta_grid, figure1, figure2, figure3, figure3_deltas, figure4, figure5, qu_sweep, sign_disagreements,
    FIGURE1_RESOLUTION, FIGURE2_STEP,
    FIGURE3_DELTA_MAX, FIGURE3_DELTA_STEP, FIGURE3_MAX_INDEX,
};

use std::f64::consts::PI;

use thiserror::Error;

use crate::bo;
use crate::exact;
use crate::linalg::Mat2;
use crate::params::{StateIndex, SystemParams};
use crate::pcf::{self, PcfError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("zero-error line is undefined when δ = 0 (ε_Ω = 0)")]
    DegenerateLine,
    #[error("overlap quadrature not converged: |σ_K − σ_K/2| = {estimate:e} at K = {nodes}")]
    QuadratureNotConverged { estimate: f64, nodes: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Pcf(#[from] PcfError),
}

impl AnalysisError {
    pub fn name(&self) -> &'static str {
        match self {
            AnalysisError::DegenerateLine => "DegenerateLine",
            AnalysisError::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            AnalysisError::InvalidArgument(_) => "InvalidArgument",
            AnalysisError::Pcf(e) => e.name(),
        }
    }
}

/// Reduced frequencies and per-mode errors at `(δ, Ω̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeErrors {
    pub omega_bar1: f64,
    pub omega_bar2: f64,
    pub eps_omega: f64,
    pub eps_big_omega: f64,
}

/// Cancellation-free `ε_ω`, `ε_Ω`, `ω̄₁` and `ω̄₂`.
pub fn mode_errors(delta: f64, omega_bar: f64) -> ModeErrors {
    let (d2, w2) = (delta * delta, omega_bar * omega_bar);
    let gap = 1.0 - w2;
    let split = (gap * gap + 4.0 * d2 * w2).sqrt();
    // λ̄₁ − 1 = 2δ²Ω̄²/(s + 1 − Ω̄²)
    let lambda1_excess = 2.0 * d2 * w2 / (split + gap);
    let lambda1 = 1.0 + lambda1_excess;
    let omega_bar1 = lambda1.sqrt();
    let omega_bar2 = omega_bar * (1.0 - d2).sqrt() / omega_bar1;

    // a = ω̃₁/ω = 1 + δ²Ω̄²/2;  a² − λ̄₁ = δ²Ω̄²(1 − 2/(s + 1 − Ω̄²)) + δ⁴Ω̄⁴/4
    let a = 1.0 + 0.5 * d2 * w2;
    let a2_minus_lambda1 = d2 * w2 * (1.0 - 2.0 / (split + gap)) + 0.25 * d2 * d2 * w2 * w2;
    let eps_omega = a2_minus_lambda1 / (a + omega_bar1);

    // ε_Ω = Ω̄√(1 − δ²)·(1 − 1/ω̄₁) = Ω̄√(1 − δ²)·(λ̄₁ − 1)/(ω̄₁(ω̄₁ + 1))
    let eps_big_omega = omega_bar * (1.0 - d2).sqrt() * lambda1_excess / (omega_bar1 * (omega_bar1 + 1.0));
    ModeErrors { omega_bar1, omega_bar2, eps_omega, eps_big_omega }
}

/// Relative BO energy error from the reduced form, for real-valued `n`, `l`.
pub fn reduced_relative_error(delta: f64, omega_bar: f64, n: f64, l: f64) -> f64 {
    let e = mode_errors(delta, omega_bar);
    (e.eps_omega * (n + 0.5) + e.eps_big_omega * (l + 0.5)) / (e.omega_bar1 * (n + 0.5) + e.omega_bar2 * (l + 0.5))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBreakdown {
    /// `(Ẽ − E)/E` from the two energies.
    pub eps_bo: f64,
    /// The same quantity from the reduced per-mode form.
    pub eps_bo_reduced: f64,
    pub eps_omega: f64,
    pub eps_big_omega: f64,
    pub omega_bar1: f64,
    pub omega_bar2: f64,
    pub region_b: f64,
}

pub fn error_breakdown(p: &SystemParams, s: StateIndex) -> ErrorBreakdown {
    let exact_e = exact::exact_energy(p, s);
    let bo_e = bo::bo_energy(p, s);
    let (delta, omega_bar) = (p.delta(), p.omega_bar());
    let modes = mode_errors(delta, omega_bar);
    ErrorBreakdown {
        eps_bo: (bo_e - exact_e) / exact_e,
        eps_bo_reduced: reduced_relative_error(delta, omega_bar, s.n as f64, s.l as f64),
        eps_omega: modes.eps_omega,
        eps_big_omega: modes.eps_big_omega,
        omega_bar1: modes.omega_bar1,
        omega_bar2: modes.omega_bar2,
        region_b: region_b(delta, omega_bar),
    }
}

/// `𝓑(δ, Ω̄) = 4(5δ² − 4) + 4(2δ² − 1)Ω̄² + δ⁶Ω̄⁴`, the published region
/// polynomial. Near its zero set it disagrees in sign with `ε_ω`; see
/// [`omega_error_discriminant`].
pub fn region_b(delta: f64, omega_bar: f64) -> f64 {
    let (d2, w2) = (delta * delta, omega_bar * omega_bar);
    4.0 * (5.0 * d2 - 4.0) + 4.0 * (2.0 * d2 - 1.0) * w2 + d2 * d2 * d2 * w2 * w2
}

/// `4(5δ² − 4) + 4δ²(2δ² − 1)Ω̄² + δ⁶Ω̄⁴`, whose sign equals `sign(ε_ω)` for
/// `0 < |δ| < 1`, `0 < Ω̄ < 1`.
///
/// Squaring `a = 1 + δ²Ω̄²/2` against `λ̄₁` reduces `sign(a − ω̄₁)` to the
/// sign of this polynomial.
pub fn omega_error_discriminant(delta: f64, omega_bar: f64) -> f64 {
    let (d2, w2) = (delta * delta, omega_bar * omega_bar);
    4.0 * (5.0 * d2 - 4.0) + 4.0 * d2 * (2.0 * d2 - 1.0) * w2 + d2 * d2 * d2 * w2 * w2
}

/// Zero of `ε(n, l)` in the `(n, l)` plane: `l = slope·n + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroErrorLine {
    pub slope: f64,
    pub intercept: f64,
}

pub fn zero_error_line(p: &SystemParams) -> Result<ZeroErrorLine, AnalysisError> {
    zero_error_line_reduced(p.delta(), p.omega_bar())
}

pub fn zero_error_line_reduced(delta: f64, omega_bar: f64) -> Result<ZeroErrorLine, AnalysisError> {
    let e = mode_errors(delta, omega_bar);
    if e.eps_big_omega == 0.0 {
        return Err(AnalysisError::DegenerateLine);
    }
    let ratio = e.eps_omega / e.eps_big_omega;
    Ok(ZeroErrorLine { slope: -ratio, intercept: -0.5 * (1.0 + ratio) })
}

/// Coupling that minimises `G₂₁(δ)` at fixed `Ω̄`:
/// `δ* = √((1 − Ω̄²)(3 + 5Ω̄² − √(9 − 2Ω̄² − 7Ω̄⁴))) / (2√2·Ω̄)`.
pub fn delta_star(omega_bar: f64) -> Result<f64, AnalysisError> {
    if !(omega_bar > 0.0 && omega_bar < 1.0) {
        return Err(AnalysisError::InvalidArgument(format!("Omega_bar must lie in (0, 1), got {omega_bar}")));
    }
    let w2 = omega_bar * omega_bar;
    let inner = 3.0 + 5.0 * w2 - (9.0 - 2.0 * w2 - 7.0 * w2 * w2).sqrt();
    Ok(((1.0 - w2) * inner).sqrt() / (2.0 * std::f64::consts::SQRT_2 * omega_bar))
}

/// Golden-section minimiser of `δ ↦ G₂₁(δ)` on `(0, 1)` for the given masses
/// and frequencies. Returns `(δ, G₂₁)`.
pub fn minimize_g21(p: &SystemParams, tol: f64) -> Result<(f64, f64), AnalysisError> {
    let g21 = |d: f64| -> Result<f64, AnalysisError> {
        let q = p.with_delta(d).map_err(|e| AnalysisError::InvalidArgument(e.to_string()))?;
        Ok(exact::g_matrix(&q)[(1, 0)])
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, 1.0 - 1e-12);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (g21(c)?, g21(d)?);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g21(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = g21(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, g21(x)?))
}

/// Overlap `σ_nl` with its quadrature convergence estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap {
    pub sigma: f64,
    /// `|σ_K − σ_{K/2}|`.
    pub estimate: f64,
    pub nodes: usize,
}

/// Smallest node count accepted by [`overlap_sigma`].
pub const MIN_OVERLAP_NODES: usize = 40;
/// Largest estimate [`overlap_sigma`] accepts as converged.
pub const OVERLAP_TOLERANCE: f64 = 1e-6;

/// `σ_nl = ∬ Ψ_nl·Ψ̃_nl dx dy` by `K × K` Gauss–Hermite quadrature.
///
/// In the exact normal coordinates `ξ = G·r` the BO arguments are
/// `ξ̃ = T·ξ`, `T = G̃·G⁻¹`, and
/// `σ = (1/2π)∬ d̂_n(ξ₁)d̂_l(ξ₂)d̂_n(ξ̃₁)d̂_l(ξ̃₂) dξ`.
/// The combined Gaussian is `exp(−ξᵀAξ)`, `A = (I + TᵀT)/4`; rotating to its
/// principal axes and scaling, `ξ = V·Λ^{−1/2}·t`, leaves a polynomial
/// against `e^{−|t|²}`, which the rule integrates exactly once
/// `K > n + l`.
pub fn overlap_sigma(p: &SystemParams, s: StateIndex, nodes: usize) -> Result<Overlap, AnalysisError> {
    let rules = OverlapRules::new(nodes)?;
    overlap_sigma_with(p, s, &rules)
}

/// The `K`- and `K/2`-node rules used by [`overlap_sigma`], built once for
/// sweeps.
#[derive(Debug, Clone)]
pub struct OverlapRules {
    full: pcf::QuadratureRule,
    half: pcf::QuadratureRule,
}

impl OverlapRules {
    pub fn new(nodes: usize) -> Result<Self, AnalysisError> {
        if nodes < MIN_OVERLAP_NODES {
            return Err(AnalysisError::InvalidArgument(format!(
                "overlap needs at least {MIN_OVERLAP_NODES} quadrature nodes, got {nodes}"
            )));
        }
        Ok(OverlapRules { full: pcf::gauss_hermite(nodes)?, half: pcf::gauss_hermite(nodes / 2)? })
    }

    pub fn nodes(&self) -> usize {
        self.full.len()
    }
}

/// [`overlap_sigma`] with prebuilt rules.
pub fn overlap_sigma_with(p: &SystemParams, s: StateIndex, rules: &OverlapRules) -> Result<Overlap, AnalysisError> {
    Ok(overlap_batch(p, &[s], rules)?[0])
}

/// Overlaps for several states at one parameter set, sharing the quadrature
/// grid and the polynomial evaluations.
pub fn overlap_batch(p: &SystemParams, states: &[StateIndex], rules: &OverlapRules) -> Result<Vec<Overlap>, AnalysisError> {
    let top = states.iter().map(|s| s.n.max(s.l)).max().unwrap_or(0);
    if top > pcf::DEFAULT_MAX_ORDER {
        return Err(PcfError::OrderTooLarge { n: top, max: pcf::DEFAULT_MAX_ORDER }.into());
    }
    let nodes = rules.nodes();
    let frame = OverlapFrame::new(p);
    let full = frame.integrate(states, top, &rules.full);
    let half = frame.integrate(states, top, &rules.half);
    full.into_iter()
        .zip(half)
        .map(|(sigma, coarse)| {
            let estimate = (sigma - coarse).abs();
            if estimate <= OVERLAP_TOLERANCE {
                Ok(Overlap { sigma, estimate, nodes })
            } else {
                Err(AnalysisError::QuadratureNotConverged { estimate, nodes })
            }
        })
        .collect()
}

struct OverlapFrame {
    /// `ξ = map·t`
    map: Mat2,
    /// `ξ̃ = t_mat·ξ`
    t_mat: Mat2,
    prefactor: f64,
}

impl OverlapFrame {
    fn new(p: &SystemParams) -> Self {
        let g = exact::g_matrix(p);
        let g_inv = g.inverse().expect("det G > 0 for |δ| < 1");
        let t_mat = bo::g_tilde(p) * g_inv;
        let a = (Mat2::IDENTITY + t_mat.transpose() * t_mat).scale(0.25);
        let ([l1, l2], v) = a.symmetric_eigen();
        let map = v * Mat2::diag(1.0 / l1.sqrt(), 1.0 / l2.sqrt());
        let prefactor = 1.0 / (2.0 * PI * (l1 * l2).sqrt());
        OverlapFrame { map, t_mat, prefactor }
    }

    fn integrate(&self, states: &[StateIndex], top: usize, rule: &pcf::QuadratureRule) -> Vec<f64> {
        let mut sums = vec![0.0; states.len()];
        for (&t1, &w1) in rule.nodes().iter().zip(rule.weights()) {
            for (&t2, &w2) in rule.nodes().iter().zip(rule.weights()) {
                let xi = self.map.apply([t1, t2]);
                let xt = self.t_mat.apply(xi);
                let (h1, h2) = (pcf::he_normalized_upto(top, xi[0]), pcf::he_normalized_upto(top, xi[1]));
                let (h3, h4) = (pcf::he_normalized_upto(top, xt[0]), pcf::he_normalized_upto(top, xt[1]));
                let w = w1 * w2;
                for (sum, s) in sums.iter_mut().zip(states) {
                    *sum += w * h1[s.n] * h2[s.l] * h3[s.n] * h4[s.l];
                }
            }
        }
        sums.iter().map(|v| v * self.prefactor).collect()
    }
}

/// QU factorisation `G = Q·U` and the sign-flipped factor `Ũ = −σ₃·U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuFactors {
    pub q: Mat2,
    pub u: Mat2,
    pub u_tilde: Mat2,
    /// `max |G̃ᵢⱼ − Ũᵢⱼ|`.
    pub deviation: f64,
}

/// Householder QU of `G` with the branch fixed by `U₁₁ < 0 < U₂₂`.
///
/// Under this branch `Ũ = diag(−1, 1)·U` has a positive diagonal like `G̃`,
/// and `Q`, `U` vary continuously with `δ`.
pub fn qu_decompose(p: &SystemParams) -> QuFactors {
    let g = exact::g_matrix(p);
    let (mut q, mut u) = g.householder_qr();
    if u[(0, 0)] > 0.0 {
        flip_row_col(&mut q, &mut u, 0);
    }
    if u[(1, 1)] < 0.0 {
        flip_row_col(&mut q, &mut u, 1);
    }
    let u_tilde = Mat2::diag(-1.0, 1.0) * u;
    let deviation = (bo::g_tilde(p) - u_tilde).max_abs();
    QuFactors { q, u, u_tilde, deviation }
}

/// Negates row `k` of `U` and column `k` of `Q`, leaving `Q·U` unchanged.
fn flip_row_col(q: &mut Mat2, u: &mut Mat2, k: usize) {
    for j in 0..2 {
        u[(k, j)] = -u[(k, j)];
        q[(j, k)] = -q[(j, k)];
    }
}
