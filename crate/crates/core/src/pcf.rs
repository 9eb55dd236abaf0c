//! Integer-order parabolic cylinder (Weber) functions.
//!
//! For non-negative integer `n`, `D_n(z) = e^{-z²/4}·He_n(z)`, where `He_n` is
//! the probabilists' Hermite polynomial (`He_n(z) = 2^{-n/2}·H_n(z/√2)`). All
//! evaluations run the three-term forward recurrence
//! `He_{k+1} = z·He_k − k·He_{k−1}` with a running power-of-ten rescaling, so
//! the Gaussian envelope and the polynomial growth never overflow or
//! underflow separately.
//!
//! Also here: closed-form inner products and `x`, `x²` matrix elements of
//! `D_n(z(x, y))` over `x`, and Gauss–Hermite rules used as quadrature
//! oracles.

use std::f64::consts::PI;

use thiserror::Error;

use crate::bo::ZGeometry;

/// Largest order accepted by the evaluation routines.
pub const DEFAULT_MAX_ORDER: usize = 200;

const RESCALE_THRESHOLD: f64 = 1e100;
const RESCALE_FACTOR: f64 = 1e-100;
const LN_RESCALE: f64 = 230.258_509_299_404_57; // 100·ln(10)

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PcfError {
    #[error("order {n} exceeds the supported maximum {max}")]
    OrderTooLarge { n: usize, max: usize },
    #[error("Gauss-Hermite node count must lie in 2..=256, got {0}")]
    InvalidNodeCount(usize),
    #[error("root {index} of the {count}-node Gauss-Hermite rule did not converge")]
    ConvergenceFailure { count: usize, index: usize },
}

impl PcfError {
    pub fn name(&self) -> &'static str {
        match self {
            PcfError::OrderTooLarge { .. } => "OrderTooLarge",
            PcfError::InvalidNodeCount(_) => "InvalidNodeCount",
            PcfError::ConvergenceFailure { .. } => "ConvergenceFailure",
        }
    }
}

fn check_order(n: usize) -> Result<(), PcfError> {
    if n > DEFAULT_MAX_ORDER {
        Err(PcfError::OrderTooLarge { n, max: DEFAULT_MAX_ORDER })
    } else {
        Ok(())
    }
}

/// `n!` as a float. Exact up to `n = 22`, correctly rounded products beyond.
pub fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `D_n(z)`.
pub fn d_n(n: usize, z: f64) -> Result<f64, PcfError> {
    check_order(n)?;
    let envelope = -0.25 * z * z;
    if n == 0 {
        return Ok(envelope.exp());
    }
    let mut prev = 1.0;
    let mut cur = z;
    let mut log_scale = 0.0;
    for k in 1..n {
        let next = z * cur - k as f64 * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_THRESHOLD {
            cur *= RESCALE_FACTOR;
            prev *= RESCALE_FACTOR;
            log_scale += LN_RESCALE;
        }
    }
    Ok(cur * (log_scale + envelope).exp())
}

/// `D_n(z)/√(n!)`, the orthonormal-scaled function. Stays `O(1)` near the
/// origin for every order.
pub fn d_n_normalized(n: usize, z: f64) -> Result<f64, PcfError> {
    check_order(n)?;
    Ok(*d_normalized_upto(n, z).last().expect("non-empty"))
}

/// `[D_0(z)/√0!, …, D_nmax(z)/√nmax!]`.
///
/// Panics if `nmax` exceeds [`DEFAULT_MAX_ORDER`]; use [`d_n_normalized`] for
/// checked access.
pub fn d_normalized_upto(nmax: usize, z: f64) -> Vec<f64> {
    normalized_recurrence(nmax, z, -0.25 * z * z)
}

/// `[He_0(z)/√0!, …, He_nmax(z)/√nmax!]`, the polynomial part of
/// [`d_normalized_upto`] without the Gaussian envelope.
///
/// Panics if `nmax` exceeds [`DEFAULT_MAX_ORDER`].
pub fn he_normalized_upto(nmax: usize, z: f64) -> Vec<f64> {
    normalized_recurrence(nmax, z, 0.0)
}

fn normalized_recurrence(nmax: usize, z: f64, envelope: f64) -> Vec<f64> {
    assert!(nmax <= DEFAULT_MAX_ORDER, "order {nmax} exceeds {DEFAULT_MAX_ORDER}");
    let mut out = Vec::with_capacity(nmax + 1);
    // p_k = He_k(z)/√k!,  p_{k+1} = (z·p_k − √k·p_{k−1})/√(k+1)
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut log_scale = 0.0;
    for k in 0..=nmax {
        out.push(cur * (log_scale + envelope).exp());
        if k == nmax {
            break;
        }
        let kf = k as f64;
        let next = (z * cur - kf.sqrt() * prev) / (kf + 1.0).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_THRESHOLD {
            cur *= RESCALE_FACTOR;
            prev *= RESCALE_FACTOR;
            log_scale += LN_RESCALE;
        }
    }
    out
}

/// `D′_n(z)`, from the differentiated polynomial recurrence
/// `He′_{k+1} = He_k + z·He′_k − k·He′_{k−1}` and
/// `D′_n = e^{-z²/4}(He′_n − (z/2)·He_n)`.
///
/// None of the three standard `D_ν` recurrence identities is used, so this is
/// an independent route for checking them.
pub fn d_n_derivative(n: usize, z: f64) -> Result<f64, PcfError> {
    check_order(n)?;
    let envelope = -0.25 * z * z;
    let (mut he_prev, mut he) = (0.0, 1.0);
    let (mut dhe_prev, mut dhe) = (0.0, 0.0);
    let mut log_scale = 0.0;
    for k in 0..n {
        let kf = k as f64;
        let he_next = z * he - kf * he_prev;
        let dhe_next = he + z * dhe - kf * dhe_prev;
        he_prev = he;
        he = he_next;
        dhe_prev = dhe;
        dhe = dhe_next;
        if he.abs().max(dhe.abs()) > RESCALE_THRESHOLD {
            he *= RESCALE_FACTOR;
            he_prev *= RESCALE_FACTOR;
            dhe *= RESCALE_FACTOR;
            dhe_prev *= RESCALE_FACTOR;
            log_scale += LN_RESCALE;
        }
    }
    Ok((dhe - 0.5 * z * he) * (log_scale + envelope).exp())
}

/// Residuals of the three `D_ν` identities at `(ν, z)`:
///
/// 1. `D_{ν+1} − z·D_ν + ν·D_{ν−1}`
/// 2. `D′_ν + (z/2)·D_ν − ν·D_{ν−1}`
/// 3. `D′_ν − (z/2)·D_ν + D_{ν+1}`
///
/// `scales` holds the largest term magnitude entering each identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceResiduals {
    pub residuals: [f64; 3],
    pub scales: [f64; 3],
}

impl RecurrenceResiduals {
    pub fn relative(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (o, (r, s)) in out.iter_mut().zip(self.residuals.iter().zip(&self.scales)) {
            *o = if *s > 0.0 { r.abs() / s } else { r.abs() };
        }
        out
    }

    pub fn max_relative(&self) -> f64 {
        self.relative().into_iter().fold(0.0, f64::max)
    }
}

/// For `n = 0` the `ν·D_{ν−1}` terms vanish identically.
pub fn recurrence_residuals(n: usize, z: f64) -> Result<RecurrenceResiduals, PcfError> {
    check_order(n + 1)?;
    let nf = n as f64;
    let lower = if n == 0 { 0.0 } else { d_n(n - 1, z)? };
    let mid = d_n(n, z)?;
    let upper = d_n(n + 1, z)?;
    let deriv = d_n_derivative(n, z)?;
    let terms = [
        [upper, z * mid, nf * lower],
        [deriv, 0.5 * z * mid, nf * lower],
        [deriv, 0.5 * z * mid, upper],
    ];
    let residuals = [
        upper - z * mid + nf * lower,
        deriv + 0.5 * z * mid - nf * lower,
        deriv - 0.5 * z * mid + upper,
    ];
    let scales = terms.map(|t| t.iter().fold(0.0_f64, |acc, x| acc.max(x.abs())));
    Ok(RecurrenceResiduals { residuals, scales })
}

/// `∫ D_l(z) D_n(z) dx = √(2π)·n!·δ_{ln} / ∂ₓz` for `z` linear in `x`.
pub fn inner_product_dd(l: usize, n: usize, dz_dx: f64) -> f64 {
    if l != n {
        return 0.0;
    }
    (2.0 * PI).sqrt() * factorial(n) / dz_dx
}

/// `∫ zᵏ D_l(z) D_n(z) dz` for `k = 0, 1, 2`, from
/// `z·D_n = D_{n+1} + n·D_{n−1}` and the orthogonality of `D_n` on the line.
fn z_moment(k: u32, l: usize, n: usize) -> f64 {
    let norm = (2.0 * PI).sqrt() * factorial(n);
    let nf = n as f64;
    match k {
        0 => {
            if l == n {
                norm
            } else {
                0.0
            }
        }
        1 => {
            if l == n + 1 {
                norm * (nf + 1.0)
            } else if l + 1 == n {
                norm
            } else {
                0.0
            }
        }
        2 => {
            if l == n {
                norm * (2.0 * nf + 1.0)
            } else if l + 2 == n {
                norm
            } else if l == n + 2 {
                norm * (nf + 1.0) * (nf + 2.0)
            } else {
                0.0
            }
        }
        _ => unreachable!("only moments up to z² are needed"),
    }
}

/// `⟨D_l(z)|x·D_n(z)⟩ = ∫ x·D_l(z)·D_n(z) dx` at fixed `y`, with
/// `z = (∂ₓz)·x + (∂_y z)·y`.
///
/// Substituting `x = (z − (∂_y z)·y)/∂ₓz` gives a band of width one:
/// `[∫z·D_lD_n dz − (∂_y z)·y·∫D_lD_n dz] / (∂ₓz)²`. The first integral
/// couples `l = n ± 1` and survives at `y = 0`.
pub fn matrix_element_x(l: usize, n: usize, y: f64, geom: &ZGeometry) -> f64 {
    let g = geom.dz_dx;
    let shift = geom.dz_dy * y;
    (z_moment(1, l, n) - shift * z_moment(0, l, n)) / (g * g)
}

/// `⟨D_l(z)|x²·D_n(z)⟩ = ∫ x²·D_l(z)·D_n(z) dx` at fixed `y`.
///
/// Equals `[∫z²D_lD_n − 2s∫zD_lD_n + s²∫D_lD_n] / (∂ₓz)³` with
/// `s = (∂_y z)·y`. The cross term couples `|l − n| = 1` and is nonzero for
/// `y ≠ 0`; it vanishes by parity when `l = n`.
pub fn matrix_element_x2(l: usize, n: usize, y: f64, geom: &ZGeometry) -> f64 {
    let g = geom.dz_dx;
    let shift = geom.dz_dy * y;
    (z_moment(2, l, n) - 2.0 * shift * z_moment(1, l, n) + shift * shift * z_moment(0, l, n)) / (g * g * g)
}

/// Gauss–Hermite rule for the weight `e^{−t²}` on the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `wᵢ·e^{tᵢ²}`, for integrands that carry their own decay.
    unweighted: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Ascending, symmetric about zero.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `≈ ∫ f(t)·e^{−t²} dt`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }

    /// `≈ ∫ f(x) dx` with `x = center + scale·t`; exact when
    /// `f(x)·e^{t²}` is a polynomial of degree `< 2K` in `t`.
    pub fn integrate_line<F: FnMut(f64) -> f64>(&self, center: f64, scale: f64, mut f: F) -> f64 {
        scale
            * self
                .nodes
                .iter()
                .zip(&self.unweighted)
                .map(|(&t, &w)| w * f(center + scale * t))
                .sum::<f64>()
    }

    /// `≈ ∬ f(t₁, t₂)·e^{−t₁²−t₂²} dt₁dt₂` on the tensor-product grid.
    pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let mut total = 0.0;
        for (&t1, &w1) in self.nodes.iter().zip(&self.weights) {
            let mut row = 0.0;
            for (&t2, &w2) in self.nodes.iter().zip(&self.weights) {
                row += w2 * f(t1, t2);
            }
            total += w1 * row;
        }
        total
    }
}

/// Orthonormal Hermite recurrence: returns `(p_K(z), p_{K−1}(z))` with
/// `p_0 = π^{−1/4}`.
fn orthonormal_hermite(count: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 1..=count {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

/// Gauss–Hermite nodes and weights for `2 ≤ K ≤ 256`.
///
/// The positive roots of `H_K` are bracketed by a sign scan on a grid finer
/// than the smallest root spacing `≈ π/√(2K+1)`, then refined by Newton
/// steps that fall back to bisection whenever they leave the bracket.
/// Weights come from `w = 2/p′_K(z)²` at the refined root.
pub fn gauss_hermite(count: usize) -> Result<QuadratureRule, PcfError> {
    if !(2..=256).contains(&count) {
        return Err(PcfError::InvalidNodeCount(count));
    }
    const MAX_ITER: usize = 200;
    let nf = count as f64;
    let half = count / 2;
    let derivative = |z: f64| {
        let (_, pm1) = orthonormal_hermite(count, z);
        (2.0 * nf).sqrt() * pm1
    };

    // Scan (0, √(2K+1)]; for odd K the root at 0 is added separately.
    let z_max = (2.0 * nf + 1.0).sqrt();
    let h = PI / (4.0 * z_max);
    let mut brackets = Vec::with_capacity(half);
    let mut a = if count % 2 == 1 { 0.5 * h } else { 0.0 };
    let mut fa = orthonormal_hermite(count, a).0;
    while a < z_max && brackets.len() < half {
        let b = a + h;
        let fb = orthonormal_hermite(count, b).0;
        if fa == 0.0 {
            brackets.push((a, a));
        } else if fa.signum() != fb.signum() {
            brackets.push((a, b));
        }
        a = b;
        fa = fb;
    }
    if brackets.len() != half {
        return Err(PcfError::ConvergenceFailure { count, index: brackets.len() });
    }

    let mut roots = Vec::with_capacity(half);
    for (index, &(mut lo, mut hi)) in brackets.iter().enumerate() {
        let f_lo = orthonormal_hermite(count, lo).0;
        let mut z = 0.5 * (lo + hi);
        let mut converged = lo == hi;
        for _ in 0..MAX_ITER {
            if converged {
                break;
            }
            let (f, pm1) = orthonormal_hermite(count, z);
            if f == 0.0 {
                break;
            }
            if f.signum() == f_lo.signum() {
                lo = z;
            } else {
                hi = z;
            }
            let newton = z - f / ((2.0 * nf).sqrt() * pm1);
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            converged = (next - z).abs() <= 1e-15 * z.abs().max(1.0);
            z = next;
        }
        if !converged && orthonormal_hermite(count, z).0 != 0.0 {
            return Err(PcfError::ConvergenceFailure { count, index });
        }
        roots.push(z);
    }

    let mut nodes = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for &z in roots.iter().rev() {
        nodes.push(-z);
        weights.push(2.0 / derivative(z).powi(2));
    }
    if count % 2 == 1 {
        nodes.push(0.0);
        weights.push(2.0 / derivative(0.0).powi(2));
    }
    for &z in &roots {
        nodes.push(z);
        weights.push(2.0 / derivative(z).powi(2));
    }
    let unweighted = nodes.iter().zip(&weights).map(|(t, w): (&f64, &f64)| (w.ln() + t * t).exp()).collect();
    Ok(QuadratureRule { nodes, weights, unweighted })
}
