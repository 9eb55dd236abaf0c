//! Fixed-size 2×2 real matrices.

use std::ops::{Add, Mul, Neg, Sub};

/// Row-major 2×2 matrix. Indices are zero-based: `a[(0, 1)]` is the
/// first-row, second-column element (`A₁₂` in one-based notation).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2([[a11, a12], [a21, a22]])
    }

    pub fn diag(d1: f64, d2: f64) -> Self {
        Mat2([[d1, 0.0], [0.0, d2]])
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.0;
        Mat2([[a, c], [b, d]])
    }

    pub fn det(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    /// `None` when the matrix is exactly singular.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let [[a, b], [c, d]] = self.0;
        Some(Mat2([[d / det, -b / det], [-c / det, a / det]]))
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let [[a, b], [c, d]] = self.0;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    pub fn scale(&self, s: f64) -> Self {
        let [[a, b], [c, d]] = self.0;
        Mat2([[s * a, s * b], [s * c, s * d]])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    /// Entries in row-major order `[a11, a12, a21, a22]`.
    pub fn entries(&self) -> [f64; 4] {
        let [[a, b], [c, d]] = self.0;
        [a, b, c, d]
    }

    /// Eigen-decomposition of a symmetric matrix by a single Jacobi rotation.
    ///
    /// Returns `(eigenvalues, V)` with `A = V·diag(eigenvalues)·Vᵀ`, the
    /// columns of `V` being the eigenvectors and `eigenvalues[0] >= eigenvalues[1]`.
    /// Only the upper triangle is read.
    pub fn symmetric_eigen(&self) -> ([f64; 2], Mat2) {
        let a = self.0[0][0];
        let b = self.0[0][1];
        let d = self.0[1][1];
        if b == 0.0 {
            return if a >= d {
                ([a, d], Mat2::IDENTITY)
            } else {
                ([d, a], Mat2::new(0.0, 1.0, 1.0, 0.0))
            };
        }
        // tan(2φ) = 2b / (a - d); pick the rotation that puts the larger
        // eigenvalue first.
        let half_diff = 0.5 * (a - d);
        let radius = half_diff.hypot(b);
        let mean = 0.5 * (a + d);
        // The eigenvalue of larger magnitude is free of cancellation; the
        // other comes from the determinant.
        let det = a * d - b * b;
        let (big, small) = if mean >= 0.0 {
            let big = mean + radius;
            (big, det / big)
        } else {
            let small = mean - radius;
            (det / small, small)
        };
        // Eigenvector of `big`: (b, big - a) or (big - d, b), whichever is better conditioned.
        let (vx, vy) = if half_diff >= 0.0 { (radius + half_diff, b) } else { (b, radius - half_diff) };
        let norm = vx.hypot(vy);
        let (c, s) = (vx / norm, vy / norm);
        ([big, small], Mat2::new(c, -s, s, c))
    }

    /// Householder QR: `self = Q·U` with `Q` orthogonal and `U` upper
    /// triangular.
    ///
    /// The reflector is chosen so that `U₁₁ = -sign(A₁₁)·‖a₁‖`; the second
    /// diagonal entry is left with whatever sign the reflection produces.
    pub fn householder_qr(&self) -> (Mat2, Mat2) {
        let a11 = self.0[0][0];
        let a21 = self.0[1][0];
        let col_norm = a11.hypot(a21);
        if col_norm == 0.0 {
            return (Mat2::IDENTITY, *self);
        }
        let alpha = if a11 >= 0.0 { -col_norm } else { col_norm };
        // v = a₁ - α·e₁, H = I - 2vvᵀ/(vᵀv)
        let v1 = a11 - alpha;
        let v2 = a21;
        let vtv = v1 * v1 + v2 * v2;
        if vtv == 0.0 {
            return (Mat2::IDENTITY, *self);
        }
        let h = Mat2::new(
            1.0 - 2.0 * v1 * v1 / vtv,
            -2.0 * v1 * v2 / vtv,
            -2.0 * v2 * v1 / vtv,
            1.0 - 2.0 * v2 * v2 / vtv,
        );
        let mut u = h * *self;
        u.0[0][0] = alpha;
        u.0[1][0] = 0.0;
        // H is symmetric and orthogonal, so Q = Hᵀ = H.
        (h, u)
    }
}

impl std::ops::Index<(usize, usize)> for Mat2 {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        Mat2([[a + e, b + f], [c + g, d + h]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}
