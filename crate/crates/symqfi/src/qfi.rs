//! Quantum Fisher information of pure states under product encodings.
//!
//! Three routes compute the same quantity and exist to check one another:
//!
//! * [`qfi_symmetric`]: the production route, from Dicke-basis matrix
//!   elements of the encoding and their derivatives.
//! * [`qfi_variance`]: four times the variance of a collective generator
//!   block in the encoded state.
//! * [`qfi_full_oracle`]: brute force in the full 2^N product space,
//!   feasible only for small systems.
//!
//! All routes clamp tiny negative rounding residues to zero and record
//! the clamped amount; a residue beyond 1e-9 is reported as an error
//! instead of silently hidden.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::encoding::{
    local_k_theta, single_qubit_unitary, CollectiveEncoding, EncodingError, GeneratorModel,
};
use crate::mat2::Mat2;
use crate::symspace::{binomial_f64, SymOperator, SymState, SymspaceError};

pub type C64 = Complex64;

/// Largest qubit count accepted by the full-space oracle route.
pub const FULL_ORACLE_MAX_QUBITS: u32 = 10;

const NEGATIVE_TOL: f64 = 1e-9;
const HERMITICITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum QfiError {
    #[error("state has {state} qubits but the operand has {operand}")]
    QubitCountMismatch { state: u32, operand: u32 },
    #[error("generator operand is not Hermitian: residual {0:.3e}")]
    NotHermitian(f64),
    #[error("information value {0:.6e} is negative beyond rounding tolerance")]
    NegativeQfi(f64),
    #[error("information value is not finite")]
    NonFinite,
    #[error("full-space oracle limited to {FULL_ORACLE_MAX_QUBITS} qubits, got {0}")]
    FullOracleTooLarge(u32),
    #[error("Cramer-Rao bound requires strictly positive information, got {0:.6e}")]
    NonPositiveInformation(f64),
    #[error("tradeoff bound is stated for even qubit counts, got {0}")]
    OddSystem(u32),
    #[error("normalized gap must be nonnegative, got {0:.6e}")]
    NegativeGap(f64),
    #[error(transparent)]
    Symspace(#[from] SymspaceError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

pub type Result<T> = std::result::Result<T, QfiError>;

/// Which computational path produced a QFI value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QfiRoute {
    Symmetric,
    Variance,
    FullOracle,
}

impl std::fmt::Display for QfiRoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            QfiRoute::Symmetric => "symmetric",
            QfiRoute::Variance => "variance",
            QfiRoute::FullOracle => "full-oracle",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QfiResult {
    pub value: f64,
    pub route: QfiRoute,
    pub n_qubits: u32,
    /// Encoding parameter, when the route needed one.
    pub theta: Option<f64>,
    /// Magnitude of the negative rounding residue clamped away, zero when
    /// the raw value was already nonnegative.
    pub negative_residual: f64,
}

fn clamp(raw: f64) -> Result<(f64, f64)> {
    if !raw.is_finite() {
        return Err(QfiError::NonFinite);
    }
    if raw < -NEGATIVE_TOL {
        return Err(QfiError::NegativeQfi(raw));
    }
    if raw < 0.0 {
        Ok((0.0, -raw))
    } else {
        Ok((raw, 0.0))
    }
}

/// F = 4 ( ||dC a||^2 - |<C a, dC a>|^2 ) for a normalized input state a.
pub fn qfi_symmetric(state: &SymState, encoding: &CollectiveEncoding) -> Result<QfiResult> {
    if state.n_qubits() != encoding.n_qubits() {
        return Err(QfiError::QubitCountMismatch {
            state: state.n_qubits(),
            operand: encoding.n_qubits(),
        });
    }
    let alpha = state.amplitudes();
    let transported = encoding.c().dot(alpha);
    let velocity = encoding.dc().dot(alpha);
    let speed2: f64 = velocity.iter().map(|v| v.norm_sqr()).sum();
    let overlap: C64 = transported
        .iter()
        .zip(velocity.iter())
        .map(|(t, v)| t.conj() * v)
        .sum();
    let raw = 4.0 * (speed2 - overlap.norm_sqr());
    let (value, negative_residual) = clamp(raw)?;
    Ok(QfiResult {
        value,
        route: QfiRoute::Symmetric,
        n_qubits: state.n_qubits(),
        theta: Some(encoding.theta()),
        negative_residual,
    })
}

/// F = 4 Var_state(K) for a Hermitian collective block K.
///
/// Evaluate it in the encoded state C a with K the generator block at the
/// same theta; for theta-independent blocks that commute with the
/// encoding, the input state works directly.
pub fn qfi_variance(state: &SymState, k_block: &SymOperator) -> Result<QfiResult> {
    if state.n_qubits() != k_block.n_qubits() {
        return Err(QfiError::QubitCountMismatch {
            state: state.n_qubits(),
            operand: k_block.n_qubits(),
        });
    }
    let residual = k_block.hermiticity_residual();
    if residual > HERMITICITY_TOL {
        return Err(QfiError::NotHermitian(residual));
    }
    let alpha = state.amplitudes();
    let k_alpha = k_block.matrix().dot(alpha);
    let second: f64 = k_alpha.iter().map(|v| v.norm_sqr()).sum();
    let first: C64 = alpha
        .iter()
        .zip(k_alpha.iter())
        .map(|(a, v)| a.conj() * v)
        .sum();
    let raw = 4.0 * (second - first.re * first.re);
    let (value, negative_residual) = clamp(raw)?;
    Ok(QfiResult {
        value,
        route: QfiRoute::Variance,
        n_qubits: state.n_qubits(),
        theta: None,
        negative_residual,
    })
}

fn apply_single_qubit(psi: &mut [C64], site: u32, m: &Mat2) {
    let mask = 1usize << site;
    for j in 0..psi.len() {
        if j & mask == 0 {
            let a = psi[j];
            let b = psi[j | mask];
            psi[j] = m.0[0][0] * a + m.0[0][1] * b;
            psi[j | mask] = m.0[1][0] * a + m.0[1][1] * b;
        }
    }
}

/// Brute-force QFI in the full 2^N space, bypassing every symmetric-
/// subspace construction: embed the state, apply U site by site, apply
/// the local generator site by site, and assemble the fluctuation.
pub fn qfi_full_oracle(state: &SymState, gen: &GeneratorModel, theta: f64) -> Result<QfiResult> {
    let n = state.n_qubits();
    if n > FULL_ORACLE_MAX_QUBITS {
        return Err(QfiError::FullOracleTooLarge(n));
    }
    let (u, _) = single_qubit_unitary(gen, theta);
    let k = local_k_theta(gen, theta);
    let size = 1usize << n;

    let mut psi = vec![C64::new(0.0, 0.0); size];
    for (j, slot) in psi.iter_mut().enumerate() {
        let exc = j.count_ones();
        *slot = state.amplitudes()[exc as usize] / binomial_f64(n, exc).sqrt();
    }
    for site in 0..n {
        apply_single_qubit(&mut psi, site, &u);
    }

    let mut phi = vec![C64::new(0.0, 0.0); size];
    let mut scratch = vec![C64::new(0.0, 0.0); size];
    for site in 0..n {
        scratch.copy_from_slice(&psi);
        apply_single_qubit(&mut scratch, site, &k);
        for (acc, v) in phi.iter_mut().zip(scratch.iter()) {
            *acc += *v;
        }
    }

    let speed2: f64 = phi.iter().map(|v| v.norm_sqr()).sum();
    let overlap: C64 = psi
        .iter()
        .zip(phi.iter())
        .map(|(p, q)| p.conj() * q)
        .sum();
    let raw = 4.0 * (speed2 - overlap.norm_sqr());
    let (value, negative_residual) = clamp(raw)?;
    Ok(QfiResult {
        value,
        route: QfiRoute::FullOracle,
        n_qubits: n,
        theta: Some(theta),
        negative_residual,
    })
}

/// Cramer-Rao floor on the estimator standard deviation, 1 / sqrt(F).
pub fn cramer_rao_bound(qfi: f64) -> Result<f64> {
    if !qfi.is_finite() || qfi <= 0.0 {
        return Err(QfiError::NonPositiveInformation(qfi));
    }
    Ok(1.0 / qfi.sqrt())
}

/// Ceiling on the phase QFI of a ground state with normalized spectral
/// gap g (even N): N^2 - N^2 (N^2 - 4) g / 24.
pub fn tradeoff_bound(n_qubits: u32, normalized_gap: f64) -> Result<f64> {
    if n_qubits == 0 {
        return Err(QfiError::Symspace(SymspaceError::EmptySystem));
    }
    if n_qubits % 2 != 0 {
        return Err(QfiError::OddSystem(n_qubits));
    }
    if !(normalized_gap >= 0.0) {
        return Err(QfiError::NegativeGap(normalized_gap));
    }
    let n2 = (n_qubits as f64) * (n_qubits as f64);
    Ok(n2 - n2 * (n2 - 4.0) * normalized_gap / 24.0)
}

/// Phase QFI of the Dicke state with the given excitation number under
/// the linear phase encoding: N + 2 n (N - n).
pub fn dicke_phase_qfi(n_qubits: u32, excitations: u32) -> Result<f64> {
    if n_qubits == 0 {
        return Err(QfiError::Symspace(SymspaceError::EmptySystem));
    }
    if excitations > n_qubits {
        return Err(QfiError::Symspace(SymspaceError::ExcitationsTooLarge {
            excitations,
            n_qubits,
        }));
    }
    let n = n_qubits as f64;
    let x = excitations as f64;
    Ok(n + 2.0 * x * (n - x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{collective_encoding, collective_generator_block};
    use crate::symspace::SpinAxis;
    use ndarray::Array1;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sym_state(n: u32, amps: Vec<C64>) -> SymState {
        SymState::from_unnormalized(n, Array1::from(amps)).unwrap()
    }

    fn ghz_computational(n: u32) -> SymState {
        let mut amps = vec![C64::new(0.0, 0.0); n as usize + 1];
        amps[0] = C64::new(1.0, 0.0);
        amps[n as usize] = C64::new(1.0, 0.0);
        sym_state(n, amps)
    }

    fn ghz_x_basis(n: u32) -> SymState {
        // (|+>^N + |->^N)/sqrt(2): Dicke amplitudes ~ sqrt(C(N,n)) on even n.
        let amps: Vec<C64> = (0..=n)
            .map(|j| {
                if j % 2 == 0 {
                    C64::new(binomial_f64(n, j).sqrt(), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        sym_state(n, amps)
    }

    #[test]
    fn balanced_dicke_reaches_closed_form() {
        let state = SymState::dicke(4, 2).unwrap();
        let enc = collective_encoding(&GeneratorModel::linear_phase(), 0.6, 4).unwrap();
        let r = qfi_symmetric(&state, &enc).unwrap();
        assert!((r.value - 12.0).abs() < 1e-9, "{}", r.value);
        assert_eq!(r.route, QfiRoute::Symmetric);
        assert_eq!(r.theta, Some(0.6));

        let oracle = qfi_full_oracle(&state, &GeneratorModel::linear_phase(), 0.6).unwrap();
        assert!((oracle.value - 12.0).abs() < 1e-9);

        let sx = crate::symspace::one_body_operator(SpinAxis::X, 4).unwrap();
        let var = qfi_variance(&state, &sx).unwrap();
        assert!((var.value - 12.0).abs() < 1e-9);
        assert_eq!(var.theta, None);
    }

    #[test]
    fn dicke_closed_form_table() {
        for n in [2u32, 5, 9] {
            for exc in 0..=n {
                let expected = dicke_phase_qfi(n, exc).unwrap();
                let state = SymState::dicke(n, exc).unwrap();
                let enc = collective_encoding(&GeneratorModel::linear_phase(), 1.1, n).unwrap();
                let got = qfi_symmetric(&state, &enc).unwrap().value;
                assert!((got - expected).abs() < 1e-9, "n={n} exc={exc}");
            }
        }
        assert!((dicke_phase_qfi(6, 0).unwrap() - 6.0).abs() < 1e-15);
        assert!(matches!(
            dicke_phase_qfi(3, 4),
            Err(QfiError::Symspace(SymspaceError::ExcitationsTooLarge { .. }))
        ));
    }

    #[test]
    fn ghz_states_bracket_the_phase_information() {
        for n in [3u32, 5, 8] {
            let nf = n as f64;
            let enc = collective_encoding(&GeneratorModel::linear_phase(), 0.37, n).unwrap();

            let cat_x = qfi_symmetric(&ghz_x_basis(n), &enc).unwrap().value;
            assert!((cat_x - nf * nf).abs() < 1e-8, "n={n}: {cat_x}");

            let cat_z = qfi_symmetric(&ghz_computational(n), &enc).unwrap().value;
            assert!((cat_z - nf).abs() < 1e-9, "n={n}: {cat_z}");
        }
    }

    #[test]
    fn computational_ghz_saturates_a_z_phase_encoding() {
        let half_z = GeneratorModel::new(
            "half-z",
            |theta| crate::encoding::GeneratorCoeffs {
                scalar: 0.0,
                vector: [0.0, 0.0, theta / 2.0],
            },
            |_| crate::encoding::GeneratorCoeffs { scalar: 0.0, vector: [0.0, 0.0, 0.5] },
        );
        for n in [4u32, 7] {
            let enc = collective_encoding(&half_z, 0.52, n).unwrap();
            let got = qfi_symmetric(&ghz_computational(n), &enc).unwrap().value;
            let nf = n as f64;
            assert!((got - nf * nf).abs() < 1e-8, "n={n}: {got}");
        }
    }

    #[test]
    fn routes_agree_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(5151);
        for gen in [GeneratorModel::linear_phase(), GeneratorModel::rotating()] {
            for n in [2u32, 5, 7] {
                let state = SymState::haar_random(n, &mut rng).unwrap();
                let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let enc = collective_encoding(&gen, theta, n).unwrap();

                let sym = qfi_symmetric(&state, &enc).unwrap().value;
                let oracle = qfi_full_oracle(&state, &gen, theta).unwrap().value;

                let transported = SymState::from_unnormalized(n, enc.c().dot(state.amplitudes()))
                    .unwrap();
                let block = collective_generator_block(&gen, theta, n).unwrap();
                let var = qfi_variance(&transported, &block).unwrap().value;

                let scale = sym.abs().max(1.0);
                assert!((sym - oracle).abs() < 1e-8 * scale, "{} n={n}", gen.name());
                assert!((sym - var).abs() < 1e-8 * scale, "{} n={n}", gen.name());
            }
        }
    }

    #[test]
    fn global_phase_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        let state = SymState::haar_random(6, &mut rng).unwrap();
        let rotated = SymState::new(
            6,
            state.amplitudes().mapv(|v| v * C64::from_polar(1.0, 0.3)),
        )
        .unwrap();
        let enc = collective_encoding(&GeneratorModel::rotating(), 1.9, 6).unwrap();
        let a = qfi_symmetric(&state, &enc).unwrap().value;
        let b = qfi_symmetric(&rotated, &enc).unwrap().value;
        assert!((a - b).abs() < 1e-10 * a.max(1.0));
    }

    #[test]
    fn variance_route_validates_inputs() {
        let state = SymState::dicke(3, 1).unwrap();
        let sx4 = crate::symspace::one_body_operator(SpinAxis::X, 4).unwrap();
        assert!(matches!(
            qfi_variance(&state, &sx4),
            Err(QfiError::QubitCountMismatch { state: 3, operand: 4 })
        ));

        let mut skew = crate::symspace::SymOperator::zeros(3).unwrap();
        skew.add_scaled(
            C64::new(0.0, 1.0),
            &crate::symspace::one_body_operator(SpinAxis::Z, 3).unwrap(),
        )
        .unwrap();
        assert!(matches!(qfi_variance(&state, &skew), Err(QfiError::NotHermitian(_))));
    }

    #[test]
    fn oracle_size_guard() {
        let state = SymState::dicke(11, 5).unwrap();
        assert!(matches!(
            qfi_full_oracle(&state, &GeneratorModel::linear_phase(), 0.1),
            Err(QfiError::FullOracleTooLarge(11))
        ));
    }

    #[test]
    fn eigenstates_carry_zero_information() {
        // |+>^N is an eigenstate of the linear phase generator S_x; the
        // raw value is a rounding residue that must clamp to >= 0.
        let n = 5u32;
        let amps: Vec<C64> = (0..=n)
            .map(|j| C64::new(binomial_f64(n, j).sqrt(), 0.0))
            .collect();
        let state = sym_state(n, amps);
        let enc = collective_encoding(&GeneratorModel::linear_phase(), 0.8, n).unwrap();
        let r = qfi_symmetric(&state, &enc).unwrap();
        assert!(r.value >= 0.0);
        assert!(r.value < 1e-10, "{}", r.value);
        assert!(r.negative_residual <= NEGATIVE_TOL);
    }

    #[test]
    fn clamp_policy() {
        assert_eq!(clamp(2.5).unwrap(), (2.5, 0.0));
        assert_eq!(clamp(-1e-12).unwrap(), (0.0, 1e-12));
        assert!(matches!(clamp(-1e-3), Err(QfiError::NegativeQfi(_))));
        assert!(matches!(clamp(f64::NAN), Err(QfiError::NonFinite)));
    }

    #[test]
    fn scalar_bounds() {
        assert!((cramer_rao_bound(100.0).unwrap() - 0.1).abs() < 1e-15);
        // Heisenberg scaling 1/N and shot-noise scaling 1/sqrt(N).
        let n = 7.0f64;
        assert!((cramer_rao_bound(n * n).unwrap() - 1.0 / n).abs() < 1e-15);
        assert!((cramer_rao_bound(n).unwrap() - 1.0 / n.sqrt()).abs() < 1e-15);
        assert!(matches!(
            cramer_rao_bound(0.0),
            Err(QfiError::NonPositiveInformation(_))
        ));

        assert!((tradeoff_bound(10, 0.0).unwrap() - 100.0).abs() < 1e-12);
        assert!((tradeoff_bound(10, 0.1).unwrap() - 60.0).abs() < 1e-12);
        assert!((tradeoff_bound(4, 0.5).unwrap() - 12.0).abs() < 1e-12);
        assert!(matches!(tradeoff_bound(5, 0.1), Err(QfiError::OddSystem(5))));
        assert!(matches!(tradeoff_bound(4, -0.2), Err(QfiError::NegativeGap(_))));
    }

    #[test]
    fn result_serializes_with_kebab_route() {
        let state = SymState::dicke(4, 2).unwrap();
        let enc = collective_encoding(&GeneratorModel::linear_phase(), 0.0, 4).unwrap();
        let r = qfi_symmetric(&state, &enc).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"route\":\"symmetric\""));
        assert!(text.contains("\"n_qubits\":4"));
    }
}
