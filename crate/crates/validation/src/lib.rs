//! Numerical probes used by the acceptance suite: finite-difference
//! couplings, grid maxima, and a uniform PASS/FAIL report line.

use std::f64::consts::SQRT_2;
use std::io::Write;

use bopshox::bo::{self, ZGeometry};
use bopshox::pcf::QuadratureRule;
use bopshox::SystemParams;

/// Prints `criterion N: PASS|FAIL  detail` and returns `pass`.
///
/// Writes to the stdout handle directly so the line survives the test
/// harness's output capture.
pub fn report(criterion: u8, pass: bool, detail: &str) -> bool {
    let line = format!("criterion {criterion}: {}  {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    pass
}

/// `∫ f(x) dx` over the Gaussian envelope of the fast channel at `y`.
pub fn integrate_fast(p: &SystemParams, y: f64, rule: &QuadratureRule, f: impl Fn(f64) -> f64) -> f64 {
    let g = ZGeometry::new(p);
    rule.integrate_line(-g.dz_dy * y / g.dz_dx, SQRT_2 / g.dz_dx, f)
}

/// `∂^order f/∂y^order` at `y` (order 1 or 2) by central differences with
/// two Richardson extrapolation levels.
pub fn central_derivative(f: impl Fn(f64) -> f64, y: f64, order: u8, h: f64) -> f64 {
    let d = |h: f64| match order {
        1 => (f(y + h) - f(y - h)) / (2.0 * h),
        2 => (f(y + h) - 2.0 * f(y) + f(y - h)) / (h * h),
        _ => panic!("order must be 1 or 2"),
    };
    let (d1, d2, d4) = (d(h), d(h / 2.0), d(h / 4.0));
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d4 - d2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

/// `⟨χ_l|∂^order_y χ_n⟩` at `y` by finite differences under quadrature.
pub fn fd_coupling(l: usize, n: usize, y: f64, order: u8, p: &SystemParams, rule: &QuadratureRule) -> f64 {
    let chi = |n: usize, x: f64, y: f64| bo::chi_n(n, x, y, p).expect("order within range");
    integrate_fast(p, y, rule, |x| chi(l, x, y) * central_derivative(|t| chi(n, x, t), y, order, 1e-2))
}

/// Maximum of `f` over a `points × points` grid on `[−half, half]²`.
pub fn grid_max(half: f64, points: usize, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
    let coord = |i: usize| -half + 2.0 * half * i as f64 / (points - 1) as f64;
    let mut best = f64::NEG_INFINITY;
    for i in 0..points {
        for j in 0..points {
            best = best.max(f(coord(i), coord(j)));
        }
    }
    best
}
