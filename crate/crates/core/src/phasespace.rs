//! Phase space of the projected BO channel equation.
//!
//! Projecting the slow equation onto channel `n` (with the Berry connection
//! `α_nn = 0`) gives the linear first-order system
//!
//! ```text
//! φ′ = ϑ
//! ϑ′ = q(y)·φ,   q(y) = 2M(ε_n(y) − E) − β_nn
//! ```
//!
//! with the origin as its only fixed point. Where `q < 0` the local matrix
//! `A_n = [[0, 1], [q, 0]]` has an imaginary eigenvalue pair (elliptic), where
//! `q > 0` a real pair (hyperbolic). Bound states are trajectories that decay
//! into the hyperbolic region on both sides; [`shoot_eigenvalue`] finds them.

use num_complex::Complex64;
use thiserror::Error;

use crate::bo;
use crate::params::{StateIndex, SystemParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseSpaceError {
    #[error("step size fell below {min_step:e} while refining on [{y_start}, {y_end}]")]
    StepUnderflow { y_start: f64, y_end: f64, min_step: f64 },
    #[error("trajectory diverged (|φ| > 1e300) at y = {y}")]
    Overflow { y: f64 },
    #[error("mismatch does not change sign on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("bisection did not reach tolerance after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("converged trajectory has {found} nodes, expected {expected}")]
    NodeCountMismatch { expected: usize, found: usize },
    #[error("invalid integration request: {0}")]
    InvalidInterval(String),
}

impl PhaseSpaceError {
    pub fn name(&self) -> &'static str {
        match self {
            PhaseSpaceError::StepUnderflow { .. } => "StepUnderflow",
            PhaseSpaceError::Overflow { .. } => "Overflow",
            PhaseSpaceError::BracketFailure { .. } => "BracketFailure",
            PhaseSpaceError::NonConvergence { .. } => "NonConvergence",
            PhaseSpaceError::NodeCountMismatch { .. } => "NodeCountMismatch",
            PhaseSpaceError::InvalidInterval(_) => "InvalidInterval",
        }
    }
}

const OVERFLOW_LIMIT: f64 = 1e300;
const MAX_BISECTIONS: usize = 200;

/// A point `(y, φ, ϑ)` of the extended phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub y: f64,
    pub phi: f64,
    pub vartheta: f64,
}

impl PhaseState {
    pub fn new(y: f64, phi: f64, vartheta: f64) -> Self {
        PhaseState { y, phi, vartheta }
    }

    fn norm(&self) -> f64 {
        self.phi.hypot(self.vartheta)
    }
}

/// Dense solution of the channel equation on an increasing `y` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub n: usize,
    pub energy: f64,
    pub samples: Vec<PhaseState>,
    /// Sign changes of `φ` along `samples`.
    pub node_count: usize,
}

impl Trajectory {
    fn from_samples(n: usize, energy: f64, samples: Vec<PhaseState>) -> Self {
        let node_count = count_nodes(&samples);
        Trajectory { n, energy, samples, node_count }
    }

    pub fn last(&self) -> PhaseState {
        *self.samples.last().expect("trajectory has at least one sample")
    }

    /// `∫φ² dy` by the trapezoidal rule on the sample grid.
    pub fn norm_squared(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| 0.5 * (w[1].y - w[0].y) * (w[0].phi.powi(2) + w[1].phi.powi(2)))
            .sum()
    }
}

fn count_nodes(samples: &[PhaseState]) -> usize {
    let mut last_sign = 0.0;
    let mut nodes = 0;
    for s in samples {
        if s.phi == 0.0 {
            continue;
        }
        let sign = s.phi.signum();
        if last_sign != 0.0 && sign != last_sign {
            nodes += 1;
        }
        last_sign = sign;
    }
    nodes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    /// Imaginary eigenvalue pair: oscillatory, classically allowed.
    Elliptic,
    /// Real eigenvalue pair: exponential, classically forbidden.
    Hyperbolic,
    /// Zero eigenvalue: a non-adiabatic turning point.
    Parabolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub y: f64,
    pub eig1: Complex64,
    pub eig2: Complex64,
    pub classification: Stability,
}

/// Step-doubling control for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Number of RK4 steps on the first pass.
    pub initial_steps: usize,
    /// Accept once doubling the step count changes the final state by less
    /// than this, relative to the state norm.
    pub tolerance: f64,
    /// Give up (with `StepUnderflow`) below this step size.
    pub min_step: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { initial_steps: 256, tolerance: 1e-10, min_step: 1e-6 }
    }
}

/// `q(y) = 2M(ε_n(y) − E) − β_nn`.
pub fn field_coefficient(n: usize, energy: f64, y: f64, p: &SystemParams) -> f64 {
    2.0 * p.big_m() * (bo::epsilon_n(n, y, p) - energy) - bo::beta_diag(n, p)
}

/// `(φ′, ϑ′)` at `state`.
pub fn tangent_field(n: usize, energy: f64, state: PhaseState, p: &SystemParams) -> (f64, f64) {
    (state.vartheta, field_coefficient(n, energy, state.y, p) * state.phi)
}

/// `A_n(y)` with the Berry connection set to zero.
pub fn a_matrix(n: usize, energy: f64, y: f64, p: &SystemParams) -> [[f64; 2]; 2] {
    a_matrix_with_berry(n, energy, y, 0.0, p)
}

/// General `A_n(y) = [[0, 1], [q, −2α_nn]]` keeping a Berry connection
/// `α_nn`. For real channel functions `α_nn = 0`; this form exists to probe
/// the structure of the field.
pub fn a_matrix_with_berry(n: usize, energy: f64, y: f64, alpha_nn: f64, p: &SystemParams) -> [[f64; 2]; 2] {
    [[0.0, 1.0], [field_coefficient(n, energy, y, p), -2.0 * alpha_nn]]
}

/// Eigenvalues `−α ± √(α² + q)` of [`a_matrix_with_berry`], ordered with the
/// negative root first.
pub fn a_matrix_eigenvalues(n: usize, energy: f64, y: f64, alpha_nn: f64, p: &SystemParams) -> (Complex64, Complex64) {
    let disc = Complex64::new(alpha_nn * alpha_nn + field_coefficient(n, energy, y, p), 0.0).sqrt();
    let shift = Complex64::new(-alpha_nn, 0.0);
    (shift - disc, shift + disc)
}

/// Linear stability of the fixed point at `y`: eigenvalues `∓√q`.
///
/// `q` is classified as zero (parabolic) when it is below rounding level
/// relative to the terms it is built from.
pub fn stability_eigenvalues(n: usize, energy: f64, y: f64, p: &SystemParams) -> StabilityReport {
    let q = field_coefficient(n, energy, y, p);
    let scale = 2.0 * p.big_m() * bo::epsilon_n(n, y, p).abs().max(energy.abs()) + bo::beta_diag(n, p).abs();
    let (eig1, eig2) = a_matrix_eigenvalues(n, energy, y, 0.0, p);
    let classification = if q.abs() <= 4.0 * f64::EPSILON * scale {
        Stability::Parabolic
    } else if q < 0.0 {
        Stability::Elliptic
    } else {
        Stability::Hyperbolic
    };
    StabilityReport { y, eig1, eig2, classification }
}

/// Non-adiabatic turning points `y± = ±√(2(E − ω̃₁(n+½))/(MΩ²(1 − δ²)))`,
/// or `None` when `E < ω̃₁(n+½)`.
pub fn turning_points(n: usize, energy: f64, p: &SystemParams) -> Option<(f64, f64)> {
    let excess = energy - bo::omega1_tilde(p) * (n as f64 + 0.5);
    if excess < 0.0 {
        return None;
    }
    let stiffness = p.big_m() * p.big_omega().powi(2) * (1.0 - p.delta().powi(2));
    let y = (2.0 * excess / stiffness).sqrt();
    Some((-y, y))
}

fn rk4_step(n: usize, energy: f64, s: PhaseState, h: f64, p: &SystemParams) -> PhaseState {
    let f = |y: f64, phi: f64, vt: f64| tangent_field(n, energy, PhaseState::new(y, phi, vt), p);
    let (k1p, k1v) = f(s.y, s.phi, s.vartheta);
    let (k2p, k2v) = f(s.y + 0.5 * h, s.phi + 0.5 * h * k1p, s.vartheta + 0.5 * h * k1v);
    let (k3p, k3v) = f(s.y + 0.5 * h, s.phi + 0.5 * h * k2p, s.vartheta + 0.5 * h * k2v);
    let (k4p, k4v) = f(s.y + h, s.phi + h * k3p, s.vartheta + h * k3v);
    PhaseState {
        y: s.y + h,
        phi: s.phi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        vartheta: s.vartheta + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    }
}

/// Fixed-step RK4 pass; `samples` collects every step when given.
fn rk4_pass(
    n: usize,
    energy: f64,
    init: PhaseState,
    y_end: f64,
    steps: usize,
    p: &SystemParams,
    mut samples: Option<&mut Vec<PhaseState>>,
) -> Result<PhaseState, PhaseSpaceError> {
    let y_start = init.y;
    let h = (y_end - y_start) / steps as f64;
    let mut s = init;
    if let Some(out) = samples.as_deref_mut() {
        out.clear();
        out.reserve(steps + 1);
        out.push(s);
    }
    for i in 1..=steps {
        s = rk4_step(n, energy, s, h, p);
        // pin the grid to avoid drift in y
        s.y = if i == steps { y_end } else { y_start + i as f64 * h };
        if s.phi.is_nan() || s.phi.abs() > OVERFLOW_LIMIT || !s.vartheta.is_finite() {
            return Err(PhaseSpaceError::Overflow { y: s.y });
        }
        if let Some(out) = samples.as_deref_mut() {
            out.push(s);
        }
    }
    Ok(s)
}

fn validate_interval(y_start: f64, y_end: f64, init: PhaseState) -> Result<(), PhaseSpaceError> {
    if !(y_start.is_finite() && y_end.is_finite() && y_start < y_end) {
        return Err(PhaseSpaceError::InvalidInterval(format!("need finite y_start < y_end, got [{y_start}, {y_end}]")));
    }
    if !(init.phi.is_finite() && init.vartheta.is_finite()) {
        return Err(PhaseSpaceError::InvalidInterval("initial state must be finite".into()));
    }
    Ok(())
}

/// Step doubling until successive final states agree; returns the final
/// state and the accepted step count.
fn integrate_to_end(
    n: usize,
    energy: f64,
    init: PhaseState,
    y_end: f64,
    ctrl: StepControl,
    p: &SystemParams,
) -> Result<(PhaseState, usize), PhaseSpaceError> {
    let span = y_end - init.y;
    let mut steps = ctrl.initial_steps.max(1);
    let mut coarse = rk4_pass(n, energy, init, y_end, steps, p, None)?;
    loop {
        if span / ((2 * steps) as f64) < ctrl.min_step {
            return Err(PhaseSpaceError::StepUnderflow { y_start: init.y, y_end, min_step: ctrl.min_step });
        }
        steps *= 2;
        let fine = rk4_pass(n, energy, init, y_end, steps, p, None)?;
        let diff = (fine.phi - coarse.phi).hypot(fine.vartheta - coarse.vartheta);
        let scale = fine.norm();
        if diff <= ctrl.tolerance * scale || scale == 0.0 {
            return Ok((fine, steps));
        }
        coarse = fine;
    }
}

/// Integrates channel `n` at trial energy `E` from `y_start` to `y_end`,
/// starting from `(init.phi, init.vartheta)` (`init.y` is ignored).
///
/// RK4 on a uniform grid; the step count doubles until the final state
/// changes by less than `ctrl.tolerance` relative to its norm.
pub fn integrate(
    n: usize,
    energy: f64,
    y_start: f64,
    y_end: f64,
    init: PhaseState,
    ctrl: StepControl,
    p: &SystemParams,
) -> Result<Trajectory, PhaseSpaceError> {
    let init = PhaseState { y: y_start, ..init };
    validate_interval(y_start, y_end, init)?;
    let (_, steps) = integrate_to_end(n, energy, init, y_end, ctrl, p)?;
    let mut samples = Vec::new();
    rk4_pass(n, energy, init, y_end, steps, p, Some(&mut samples))?;
    Ok(Trajectory::from_samples(n, energy, samples))
}

/// Default shooting bracket `Ẽ_nl ± ω̃₂/2`, which contains exactly one
/// eigenvalue of channel `n`.
pub fn default_bracket(s: StateIndex, p: &SystemParams) -> (f64, f64) {
    let e = bo::bo_energy(p, s);
    let half = 0.5 * bo::omega2_tilde(p);
    (e - half, e + half)
}

/// Half-width `Y = 2y₊ + 5/√(Mω̃₂)` of the shooting domain, using the
/// turning point at the upper end of `bracket`.
pub fn shooting_half_width(n: usize, bracket: (f64, f64), p: &SystemParams) -> f64 {
    let y_plus = turning_points(n, bracket.1, p).map_or(0.0, |(_, y)| y);
    2.0 * y_plus + 5.0 / (p.big_m() * bo::omega2_tilde(p)).sqrt()
}

/// Converged shooting solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootingResult {
    pub energy: f64,
    pub iterations: usize,
    /// Final normalised Wronskian mismatch at `y = 0`.
    pub mismatch: f64,
    /// Two-sided solution on `[−Y, Y]`, normalised to `∫φ² dy = 1`.
    pub trajectory: Trajectory,
}

/// Integrates inward from `−Y` with the decaying tail `(1, κ)`, `κ = √q(−Y)`.
fn left_solution(n: usize, energy: f64, half_width: f64, ctrl: StepControl, p: &SystemParams) -> Result<PhaseState, PhaseSpaceError> {
    let init = tail_state(n, energy, half_width, p);
    Ok(integrate_to_end(n, energy, init, 0.0, ctrl, p)?.0)
}

fn tail_state(n: usize, energy: f64, half_width: f64, p: &SystemParams) -> PhaseState {
    let kappa = field_coefficient(n, energy, -half_width, p).max(0.0).sqrt();
    PhaseState::new(-half_width, 1.0, kappa)
}

/// Normalised Wronskian `(φ_L·ϑ_R − ϑ_L·φ_R)/(|L|·|R|)` at `y = 0`. The right
/// solution is the mirror image `(φ_L, −ϑ_L)` because `ε_n` is even in `y`.
fn mismatch(left: PhaseState) -> f64 {
    let right = PhaseState::new(0.0, left.phi, -left.vartheta);
    let norm = left.norm() * right.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (left.phi * right.vartheta - left.vartheta * right.phi) / norm
}

/// Finds the channel-`n` eigenvalue with `l` nodes inside `bracket` by
/// two-sided shooting and bisection on the matching mismatch at `y = 0`.
///
/// Stops once the bracket is narrower than `tol·|E|`.
pub fn shoot_eigenvalue(
    s: StateIndex,
    p: &SystemParams,
    bracket: (f64, f64),
    tol: f64,
) -> Result<ShootingResult, PhaseSpaceError> {
    shoot_eigenvalue_with(s, p, bracket, tol, StepControl::default())
}

pub fn shoot_eigenvalue_with(
    s: StateIndex,
    p: &SystemParams,
    bracket: (f64, f64),
    tol: f64,
    ctrl: StepControl,
) -> Result<ShootingResult, PhaseSpaceError> {
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || tol.is_nan() || tol <= 0.0 {
        return Err(PhaseSpaceError::InvalidInterval(format!("bad bracket [{lo}, {hi}] or tolerance {tol}")));
    }
    let n = s.n;
    let half_width = shooting_half_width(n, bracket, p);
    let eval = |e: f64| left_solution(n, e, half_width, ctrl, p).map(mismatch);

    let mut f_lo = eval(lo)?;
    let f_hi = eval(hi)?;
    if f_lo == 0.0 {
        hi = lo;
    } else if f_hi == 0.0 {
        lo = hi;
    } else if f_lo.signum() == f_hi.signum() {
        return Err(PhaseSpaceError::BracketFailure { lo, hi });
    }

    let mut iterations = 0;
    while hi - lo > tol * (0.5 * (lo + hi)).abs() {
        if iterations == MAX_BISECTIONS {
            return Err(PhaseSpaceError::NonConvergence { iterations });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let f_mid = eval(mid)?;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
        } else if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let energy = 0.5 * (lo + hi);

    let trajectory = two_sided_trajectory(n, energy, half_width, ctrl, p)?;
    if trajectory.node_count != s.l {
        return Err(PhaseSpaceError::NodeCountMismatch { expected: s.l, found: trajectory.node_count });
    }
    let final_mismatch = mismatch(left_solution(n, energy, half_width, ctrl, p)?);
    Ok(ShootingResult { energy, iterations, mismatch: final_mismatch, trajectory })
}

/// Joins the left solution on `[−Y, 0]` with the mirrored right solution,
/// scaled by least squares to match at `y = 0`, and normalises.
fn two_sided_trajectory(
    n: usize,
    energy: f64,
    half_width: f64,
    ctrl: StepControl,
    p: &SystemParams,
) -> Result<Trajectory, PhaseSpaceError> {
    let left = integrate(n, energy, -half_width, 0.0, tail_state(n, energy, half_width, p), ctrl, p)?;
    let l0 = left.last();
    let r0 = PhaseState::new(0.0, l0.phi, -l0.vartheta);
    let scale = (l0.phi * r0.phi + l0.vartheta * r0.vartheta) / (r0.phi * r0.phi + r0.vartheta * r0.vartheta);

    let mut samples = left.samples.clone();
    samples.extend(
        left.samples
            .iter()
            .rev()
            .skip(1)
            .map(|s| PhaseState::new(-s.y, scale * s.phi, -scale * s.vartheta)),
    );
    let mut merged = Trajectory::from_samples(n, energy, samples);
    let norm = merged.norm_squared().sqrt();
    if norm > 0.0 {
        for s in &mut merged.samples {
            s.phi /= norm;
            s.vartheta /= norm;
        }
    }
    Ok(merged)
}
