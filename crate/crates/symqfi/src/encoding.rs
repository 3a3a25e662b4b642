//! Parameter encoding by identical single-qubit unitaries.
//!
//! A generator model supplies G(theta) = g0 I + g . sigma and its
//! theta-derivative. From it come the single-qubit unitary
//! U = exp(-i G) in closed axis-angle form, the local generator
//! K = i (dU/dtheta) U+, seminorm-based information bounds, and the
//! matrix elements of U^(x)N between Dicke states together with their
//! theta-derivatives.
//!
//! The Dicke-basis matrix elements are evaluated by a partition sum over
//! site assignments. Its terms are products of multinomial weights
//! (up to ~4^N) and entry powers (down to ~2^-N), so the sum cancels
//! heavily; see `dd` for why the accumulation runs in double-double
//! arithmetic. An independent route through the projected collective
//! generator and a dense matrix exponential ([`projected_unitary_oracle`])
//! is kept solely to cross-check this code path.

use std::fmt;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

use crate::dd::{Cdd, Dd};
use crate::linalg;
use crate::mat2::Mat2;
use crate::symspace::{one_body_operator, SpinAxis, SymOperator, SymspaceError};

pub type C64 = Complex64;

/// Largest system size for the collective routines; beyond this the
/// binomial intermediates leave the comfortable f64 exponent range.
pub const MAX_COLLECTIVE_QUBITS: u32 = 200;

const UNITARITY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("unknown generator '{0}', expected \"linear-phase\" or \"rotating\"")]
    UnknownGenerator(String),
    #[error("single-qubit matrix is not unitary: residual {0:.3e}")]
    NotUnitary(f64),
    #[error("system must contain at least one qubit")]
    EmptySystem,
    #[error("collective matrix elements limited to {MAX_COLLECTIVE_QUBITS} qubits, got {0}")]
    SystemTooLarge(u32),
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error(transparent)]
    Symspace(#[from] SymspaceError),
}

pub type Result<T> = std::result::Result<T, EncodingError>;

/// Pauli expansion of a Hermitian generator: scalar I + vector . sigma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorCoeffs {
    pub scalar: f64,
    pub vector: [f64; 3],
}

type CoeffFn = Arc<dyn Fn(f64) -> GeneratorCoeffs + Send + Sync>;

/// Differentiable one-parameter family of single-qubit generators.
#[derive(Clone)]
pub struct GeneratorModel {
    name: String,
    coeffs: CoeffFn,
    derivative: CoeffFn,
}

impl fmt::Debug for GeneratorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorModel").field("name", &self.name).finish()
    }
}

impl GeneratorModel {
    /// The derivative closure must be the exact theta-derivative of the
    /// coefficient closure; bound checks and the collective derivatives
    /// all assume it.
    pub fn new(
        name: impl Into<String>,
        coeffs: impl Fn(f64) -> GeneratorCoeffs + Send + Sync + 'static,
        derivative: impl Fn(f64) -> GeneratorCoeffs + Send + Sync + 'static,
    ) -> Self {
        GeneratorModel {
            name: name.into(),
            coeffs: Arc::new(coeffs),
            derivative: Arc::new(derivative),
        }
    }

    /// G = (theta/2) sigma_x: pure phase accumulation around x.
    pub fn linear_phase() -> Self {
        GeneratorModel::new(
            "linear-phase",
            |theta| GeneratorCoeffs { scalar: 0.0, vector: [theta / 2.0, 0.0, 0.0] },
            |_| GeneratorCoeffs { scalar: 0.0, vector: [0.5, 0.0, 0.0] },
        )
    }

    /// G = cos(theta) sigma_z + sin(theta) sigma_x: fixed unit strength,
    /// rotating axis.
    pub fn rotating() -> Self {
        GeneratorModel::new(
            "rotating",
            |theta| GeneratorCoeffs { scalar: 0.0, vector: [theta.sin(), 0.0, theta.cos()] },
            |theta| GeneratorCoeffs { scalar: 0.0, vector: [theta.cos(), 0.0, -theta.sin()] },
        )
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "linear-phase" => Ok(GeneratorModel::linear_phase()),
            "rotating" => Ok(GeneratorModel::rotating()),
            other => Err(EncodingError::UnknownGenerator(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coeffs(&self, theta: f64) -> GeneratorCoeffs {
        (self.coeffs)(theta)
    }

    pub fn derivative(&self, theta: f64) -> GeneratorCoeffs {
        (self.derivative)(theta)
    }
}

/// (sinc r, (cos r - sinc r) / r^2).
///
/// The second factor cancels catastrophically when evaluated directly for
/// small r, so both switch to quartic series below r = 1e-2; the series
/// truncation error there is ~1e-17 while the direct form has already
/// lost seven digits.
fn sinc_pair(r: f64) -> (f64, f64) {
    if r < 1e-2 {
        let q = r * r;
        let s = 1.0 - q / 6.0 + q * q / 120.0;
        let h = -1.0 / 3.0 + q / 30.0 - q * q / 840.0;
        (s, h)
    } else {
        let s = r.sin() / r;
        ((s), (r.cos() - s) / (r * r))
    }
}

/// Closed-form U = exp(-i G(theta)) and its exact theta-derivative.
///
/// With G = g0 I + g . sigma, r = |g|:
///   U  = e^{-i g0} (cos r I - i sinc r (g . sigma))
///   dU = e^{-i g0} [ -i g0' U~ - (g.g') sinc r I
///                    - i (h(r) (g.g') g + sinc r g') . sigma ]
/// where U~ is the bracketed part of U and h(r) = (cos r - sinc r)/r^2.
pub fn single_qubit_unitary(gen: &GeneratorModel, theta: f64) -> (Mat2, Mat2) {
    let g = gen.coeffs(theta);
    let dg = gen.derivative(theta);
    let v = g.vector;
    let dv = dg.vector;
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let (s, h) = sinc_pair(r);
    let cos_r = r.cos();
    let v_dot_dv = v[0] * dv[0] + v[1] * dv[1] + v[2] * dv[2];

    let phase = C64::from_polar(1.0, -g.scalar);
    let core = Mat2::identity()
        .scale(C64::new(cos_r, 0.0))
        .add(&Mat2::from_pauli(0.0, v).scale(C64::new(0.0, -s)));
    let u = core.scale(phase);

    let w = [
        h * v_dot_dv * v[0] + s * dv[0],
        h * v_dot_dv * v[1] + s * dv[1],
        h * v_dot_dv * v[2] + s * dv[2],
    ];
    let bracket = core
        .scale(C64::new(0.0, -dg.scalar))
        .add(&Mat2::identity().scale(C64::new(-s * v_dot_dv, 0.0)))
        .add(&Mat2::from_pauli(0.0, w).scale(C64::new(0.0, -1.0)));
    let du = bracket.scale(phase);
    (u, du)
}

/// Local generator of parameter changes, K = i (dU/dtheta) U+. Hermitian
/// up to rounding for any exact (U, dU) pair.
pub fn local_k_theta(gen: &GeneratorModel, theta: f64) -> Mat2 {
    let (u, du) = single_qubit_unitary(gen, theta);
    du.matmul(&u.adjoint()).scale(C64::new(0.0, 1.0))
}

/// Spectral spread lambda_max - lambda_min of the Hermitian part.
pub fn seminorm(m: &Mat2) -> f64 {
    let (_, v) = m.pauli_coefficients();
    2.0 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// N^2 seminorm(K_theta)^2: information ceiling for product encodings.
pub fn qfi_upper_bound(gen: &GeneratorModel, theta: f64, n_qubits: u32) -> f64 {
    let sn = seminorm(&local_k_theta(gen, theta));
    let n = n_qubits as f64;
    n * n * sn * sn
}

/// Theta-independent ceiling (2 sin(1) N)^2 for the rotating model, whose
/// K_theta has seminorm exactly 2 sin(1) at every theta.
pub fn rotating_envelope(n_qubits: u32) -> f64 {
    let edge = 2.0 * 1.0f64.sin() * n_qubits as f64;
    edge * edge
}

/// Dicke-basis matrix elements of U^(x)N and their theta-derivatives.
#[derive(Debug, Clone)]
pub struct CollectiveEncoding {
    n_qubits: u32,
    theta: f64,
    c: Array2<C64>,
    dc: Array2<C64>,
}

impl CollectiveEncoding {
    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn c(&self) -> &Array2<C64> {
        &self.c
    }

    pub fn dc(&self) -> &Array2<C64> {
        &self.dc
    }
}

pub fn collective_encoding(
    gen: &GeneratorModel,
    theta: f64,
    n_qubits: u32,
) -> Result<CollectiveEncoding> {
    let (u, du) = single_qubit_unitary(gen, theta);
    let (c, dc) = collective_matrix_elements(&u, &du, n_qubits)?;
    Ok(CollectiveEncoding { n_qubits, theta, c, dc })
}

/// Partition-sum evaluation of C_mn = <Dicke_m| U^(x)N |Dicke_n> and its
/// derivative for an arbitrary unitary U and its theta-derivative dU.
///
/// Site assignments are grouped by the occupation pattern
/// (w0, w1, w2, w3) = (#00, #01, #10, #11) of entry usages; one free
/// index t = w3 remains. Multinomial weights advance by exact integer
/// ratios and all products accumulate in double-double precision, keeping
/// absolute entry errors near 1e-18 through N = 100 where plain f64 looses
/// everything past 1e-3.
pub fn collective_matrix_elements(
    u: &Mat2,
    du: &Mat2,
    n_qubits: u32,
) -> Result<(Array2<C64>, Array2<C64>)> {
    if n_qubits == 0 {
        return Err(EncodingError::EmptySystem);
    }
    if n_qubits > MAX_COLLECTIVE_QUBITS {
        return Err(EncodingError::SystemTooLarge(n_qubits));
    }
    let residual = u.unitarity_residual();
    if residual > UNITARITY_TOL {
        return Err(EncodingError::NotUnitary(residual));
    }

    let n = n_qubits as usize;
    let dim = n + 1;

    // Entry power tables p[e][q] = entry_e^q in double-double. A zero
    // entry propagates 0^0 = 1, 0^q = 0 on its own.
    let entries = [u.0[0][0], u.0[0][1], u.0[1][0], u.0[1][1]];
    let dentries = [
        Cdd::new(du.0[0][0].re, du.0[0][0].im),
        Cdd::new(du.0[0][1].re, du.0[0][1].im),
        Cdd::new(du.0[1][0].re, du.0[1][0].im),
        Cdd::new(du.0[1][1].re, du.0[1][1].im),
    ];
    let mut powers: Vec<Vec<Cdd>> = Vec::with_capacity(4);
    for e in entries {
        let base = Cdd::new(e.re, e.im);
        let mut table = vec![Cdd::ONE; n + 1];
        for q in 1..=n {
            table[q] = table[q - 1].mul(base);
        }
        powers.push(table);
    }

    // Pascal triangle in double-double; exact until entries exceed 2^106,
    // afterwards accurate to ~1e-32 relative.
    let mut pascal: Vec<Vec<Dd>> = Vec::with_capacity(dim);
    pascal.push(vec![Dd::ONE]);
    for i in 1..=n {
        let prev = &pascal[i - 1];
        let mut row = vec![Dd::ONE; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1].add(prev[j]);
        }
        pascal.push(row);
    }
    let inv_sqrt_binom: Vec<Dd> = (0..dim)
        .map(|m| Dd::ONE.div(pascal[n][m].sqrt()))
        .collect();

    let mut c = Array2::<C64>::zeros((dim, dim));
    let mut dc = Array2::<C64>::zeros((dim, dim));

    for m in 0..dim {
        for nn in 0..dim {
            let t0 = (m + nn).saturating_sub(n);
            let t1 = m.min(nn);
            let w0_start = n + t0 - m - nn;
            let w1_start = nn - t0;
            let w2_start = m - t0;
            // N! / (w0! w1! w2! w3!) as a product of binomials.
            let mut weight = pascal[n][w0_start]
                .mul(pascal[n - w0_start][w1_start])
                .mul(pascal[n - w0_start - w1_start][w2_start]);

            let mut c_acc = Cdd::ZERO;
            let mut dc_acc = Cdd::ZERO;
            for t in t0..=t1 {
                let w = [n + t - m - nn, nn - t, m - t, t];
                let f = [
                    powers[0][w[0]],
                    powers[1][w[1]],
                    powers[2][w[2]],
                    powers[3][w[3]],
                ];
                let front = f[0].mul(f[1]);
                let back = f[2].mul(f[3]);
                c_acc = c_acc.add(front.mul(back).mul_dd(weight));

                for (e, &we) in w.iter().enumerate() {
                    if we == 0 {
                        continue;
                    }
                    let rest = match e {
                        0 => powers[0][we - 1].mul(f[1]).mul(back),
                        1 => f[0].mul(powers[1][we - 1]).mul(back),
                        2 => front.mul(powers[2][we - 1]).mul(f[3]),
                        _ => front.mul(f[2]).mul(powers[3][we - 1]),
                    };
                    dc_acc = dc_acc.add(
                        rest.mul(dentries[e]).mul_dd(weight.mul_f64(we as f64)),
                    );
                }

                if t < t1 {
                    // (w1 w2) moves of one site each from 01/10 to 11/00.
                    let numer = (w[1] * w[2]) as f64;
                    let denom = ((t + 1) * (w[0] + 1)) as f64;
                    weight = weight.mul_f64(numer).div(Dd::from_f64(denom));
                }
            }

            let norm = inv_sqrt_binom[m].mul(inv_sqrt_binom[nn]);
            c[[m, nn]] = c_acc.mul_dd(norm).to_complex();
            dc[[m, nn]] = dc_acc.mul_dd(norm).to_complex();
        }
    }
    Ok((c, dc))
}

/// Collective generator block sum_i K^(i) projected on the symmetric
/// subspace: N k0 I + 2 k . S with K = k0 I + k . sigma.
pub fn collective_generator_block(
    gen: &GeneratorModel,
    theta: f64,
    n_qubits: u32,
) -> Result<SymOperator> {
    let k = local_k_theta(gen, theta);
    let (k0, kv) = k.pauli_coefficients();
    let mut acc = SymOperator::identity(n_qubits)?.scaled(C64::new(n_qubits as f64 * k0, 0.0));
    for (axis, coeff) in [
        (SpinAxis::X, kv[0]),
        (SpinAxis::Y, kv[1]),
        (SpinAxis::Z, kv[2]),
    ] {
        if coeff != 0.0 {
            let op = one_body_operator(axis, n_qubits)?;
            acc.add_scaled(C64::new(2.0 * coeff, 0.0), &op)?;
        }
    }
    Ok(acc.hermitized())
}

/// Independent construction of the same collective unitary: project the
/// generator onto the subspace and exponentiate by eigendecomposition.
/// Exists to cross-check [`collective_matrix_elements`]; do not use it as
/// the production route, or disagreement between the two stops meaning
/// anything.
pub fn projected_unitary_oracle(
    gen: &GeneratorModel,
    theta: f64,
    n_qubits: u32,
) -> Result<Array2<C64>> {
    let g = gen.coeffs(theta);
    let mut block = SymOperator::identity(n_qubits)?
        .scaled(C64::new(n_qubits as f64 * g.scalar, 0.0));
    for (axis, coeff) in [
        (SpinAxis::X, g.vector[0]),
        (SpinAxis::Y, g.vector[1]),
        (SpinAxis::Z, g.vector[2]),
    ] {
        if coeff != 0.0 {
            let op = one_body_operator(axis, n_qubits)?;
            block.add_scaled(C64::new(2.0 * coeff, 0.0), &op)?;
        }
    }
    linalg::unitary_from_hermitian(block.hermitized().matrix())
        .map_err(|e| EncodingError::Eigensolver(e.to_string()))
}
