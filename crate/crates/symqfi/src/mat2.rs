//! Dense 2x2 complex matrices for single-qubit generators and unitaries.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Row-major 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

impl Mat2 {
    pub fn zeros() -> Mat2 {
        Mat2([[ZERO; 2]; 2])
    }

    pub fn identity() -> Mat2 {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn sigma_x() -> Mat2 {
        Mat2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn sigma_y() -> Mat2 {
        Mat2([[ZERO, -I], [I, ZERO]])
    }

    pub fn sigma_z() -> Mat2 {
        Mat2([[ONE, ZERO], [ZERO, -ONE]])
    }

    /// `s*I + vx*sigma_x + vy*sigma_y + vz*sigma_z` with real coefficients.
    pub fn from_pauli(s: f64, v: [f64; 3]) -> Mat2 {
        Mat2([
            [C64::new(s + v[2], 0.0), C64::new(v[0], -v[1])],
            [C64::new(v[0], v[1]), C64::new(s - v[2], 0.0)],
        ])
    }

    /// Inverse of `from_pauli` applied to the Hermitian part.
    pub fn pauli_coefficients(&self) -> (f64, [f64; 3]) {
        let m = &self.0;
        let s = (m[0][0].re + m[1][1].re) / 2.0;
        let vx = (m[0][1].re + m[1][0].re) / 2.0;
        let vy = (m[1][0].im - m[0][1].im) / 2.0;
        let vz = (m[0][0].re - m[1][1].re) / 2.0;
        (s, [vx, vy, vz])
    }

    pub fn add(&self, b: &Mat2) -> Mat2 {
        let mut out = Mat2::zeros();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][c] + b.0[r][c];
            }
        }
        out
    }

    pub fn sub(&self, b: &Mat2) -> Mat2 {
        let mut out = Mat2::zeros();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][c] - b.0[r][c];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] *= s;
            }
        }
        out
    }

    pub fn matmul(&self, b: &Mat2) -> Mat2 {
        let mut out = Mat2::zeros();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][0] * b.0[0][c] + self.0[r][1] * b.0[1][c];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                m = m.max(self.0[r][c].norm());
            }
        }
        m
    }

    pub fn max_abs_diff(&self, b: &Mat2) -> f64 {
        self.sub(b).max_abs()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.matmul(&self.adjoint()).max_abs_diff(&Mat2::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let (s, v) = self.pauli_coefficients();
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        (s - r, s + r)
    }
}
