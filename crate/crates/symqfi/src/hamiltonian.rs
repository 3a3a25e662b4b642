//! Random k-body permutation-invariant Hamiltonians on the symmetric
//! subspace: sampling, assembly, spectra, and energy normalization.
//!
//! A spec fixes N, an interaction order k, and one real coefficient per
//! correlator index of that order. The operator of interest is the shifted
//! combination -S^2 + H, whose spectra are compared across sizes after
//! rescaling energies by (mean - min) of the spectrum.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::symspace::{
    correlator, total_spin_squared, CorrelatorCache, CorrelatorIndex, SymOperator, SymState,
    SymspaceError, count_correlators,
};

pub type C64 = Complex64;

#[derive(Debug, Error)]
pub enum HamiltonianError {
    #[error("interaction order k = {k} must satisfy 1 <= k <= N = {n_qubits}")]
    InvalidOrder { k: u32, n_qubits: u32 },
    #[error("expected {expected} coefficients for order {k}, got {actual}")]
    WrongCoefficientCount { k: u32, expected: u64, actual: usize },
    #[error("coefficient for {index} is not finite")]
    NonFiniteCoefficient { index: CorrelatorIndex },
    #[error("duplicate coefficient entry for {0}")]
    DuplicateCoefficient(CorrelatorIndex),
    #[error("coefficient entry {index} has order {found}, spec requires {expected}")]
    WrongOrderEntry { index: CorrelatorIndex, found: u32, expected: u32 },
    #[error("matrix is not Hermitian: residual {0:.3e}")]
    NotHermitian(f64),
    #[error("spectrum is flat (width {width:.3e}); energies cannot be normalized")]
    FlatSpectrum { width: f64 },
    #[error("normalization denominator mean - min = {denominator:.3e} is numerically zero")]
    NormalizationDegenerate { denominator: f64 },
    #[error("degeneracy tolerance must be finite and non-negative, got {0}")]
    BadTolerance(f64),
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error(transparent)]
    Symspace(#[from] SymspaceError),
    #[error("JSON decode failed: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HamiltonianError>;

/// Default relative gap threshold below which a ground state is flagged
/// degenerate.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

/// Coefficients of a fixed-order permutation-invariant Hamiltonian
/// H = sum Gamma_abc S_abc over a + b + c = k.
///
/// Coefficients are stored in lexicographic (a, b, c) order; the optional
/// seed records how they were drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct PiHamiltonianSpec {
    n_qubits: u32,
    k: u32,
    coefficients: Vec<f64>,
    seed: Option<u64>,
}

impl PiHamiltonianSpec {
    /// `coefficients` must follow lexicographic (a, b, c) order over the
    /// order-k index set.
    pub fn new(n_qubits: u32, k: u32, coefficients: Vec<f64>, seed: Option<u64>) -> Result<Self> {
        if k == 0 || k > n_qubits {
            return Err(HamiltonianError::InvalidOrder { k, n_qubits });
        }
        let expected = count_correlators(k);
        if coefficients.len() as u64 != expected {
            return Err(HamiltonianError::WrongCoefficientCount {
                k,
                expected,
                actual: coefficients.len(),
            });
        }
        for (index, &value) in CorrelatorIndex::all_with_order(k).iter().zip(&coefficients) {
            if !value.is_finite() {
                return Err(HamiltonianError::NonFiniteCoefficient { index: *index });
            }
        }
        Ok(PiHamiltonianSpec { n_qubits, k, coefficients, seed })
    }

    /// Spec with a single nonzero coefficient.
    pub fn single_term(n_qubits: u32, index: CorrelatorIndex, gamma: f64) -> Result<Self> {
        let k = index.order();
        if k == 0 || k > n_qubits {
            return Err(HamiltonianError::InvalidOrder { k, n_qubits });
        }
        if !gamma.is_finite() {
            return Err(HamiltonianError::NonFiniteCoefficient { index });
        }
        let indices = CorrelatorIndex::all_with_order(k);
        let coefficients = indices
            .iter()
            .map(|i| if *i == index { gamma } else { 0.0 })
            .collect();
        Ok(PiHamiltonianSpec { n_qubits, k, coefficients, seed: None })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn set_seed(&mut self, seed: Option<u64>) {
        self.seed = seed;
    }

    pub fn coefficient_slice(&self) -> &[f64] {
        &self.coefficients
    }

    /// (index, coefficient) pairs in lexicographic order.
    pub fn coefficients(&self) -> impl Iterator<Item = (CorrelatorIndex, f64)> + '_ {
        CorrelatorIndex::all_with_order(self.k)
            .into_iter()
            .zip(self.coefficients.iter().copied())
    }

    pub fn coefficient(&self, index: CorrelatorIndex) -> Option<f64> {
        self.coefficients()
            .find(|(i, _)| *i == index)
            .map(|(_, v)| v)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.coefficients.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn to_json(&self) -> String {
        let coeffs = self
            .coefficients()
            .map(|(index, gamma)| CoeffJson { a: index.a, b: index.b, c: index.c, gamma })
            .collect();
        serde_json::to_string_pretty(&SpecJson {
            n_qubits: self.n_qubits,
            k: self.k,
            seed: self.seed,
            coeffs,
        })
        .expect("spec serialization")
    }

    /// Accepts entries in any order; missing indices default to zero,
    /// duplicates and order mismatches are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpecJson = serde_json::from_str(text)?;
        if raw.k == 0 || raw.k > raw.n_qubits {
            return Err(HamiltonianError::InvalidOrder { k: raw.k, n_qubits: raw.n_qubits });
        }
        let indices = CorrelatorIndex::all_with_order(raw.k);
        let mut coefficients = vec![0.0f64; indices.len()];
        let mut seen = vec![false; indices.len()];
        for entry in &raw.coeffs {
            let index = CorrelatorIndex::new(entry.a, entry.b, entry.c);
            if index.order() != raw.k {
                return Err(HamiltonianError::WrongOrderEntry {
                    index,
                    found: index.order(),
                    expected: raw.k,
                });
            }
            let pos = indices.binary_search(&index).expect("order checked");
            if seen[pos] {
                return Err(HamiltonianError::DuplicateCoefficient(index));
            }
            seen[pos] = true;
            coefficients[pos] = entry.gamma;
        }
        PiHamiltonianSpec::new(raw.n_qubits, raw.k, coefficients, raw.seed)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    n_qubits: u32,
    k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    coeffs: Vec<CoeffJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffJson {
    a: u32,
    b: u32,
    c: u32,
    gamma: f64,
}

/// Draws i.i.d. standard-normal coefficients, one per order-k index in
/// lexicographic order.
pub fn sample_spec<R: Rng + ?Sized>(n_qubits: u32, k: u32, rng: &mut R) -> Result<PiHamiltonianSpec> {
    if k == 0 || k > n_qubits {
        return Err(HamiltonianError::InvalidOrder { k, n_qubits });
    }
    let coefficients = (0..count_correlators(k))
        .map(|_| rng.sample(StandardNormal))
        .collect();
    PiHamiltonianSpec::new(n_qubits, k, coefficients, None)
}

/// Diagonal ensemble: only S_k00, S_0k0 and S_00k carry coefficients,
/// drawn in lexicographic order of their indices.
pub fn sample_diagonal_spec<R: Rng + ?Sized>(
    n_qubits: u32,
    k: u32,
    rng: &mut R,
) -> Result<PiHamiltonianSpec> {
    if k == 0 || k > n_qubits {
        return Err(HamiltonianError::InvalidOrder { k, n_qubits });
    }
    let indices = CorrelatorIndex::all_with_order(k);
    let mut coefficients = vec![0.0f64; indices.len()];
    for (pos, index) in indices.iter().enumerate() {
        let on_axis = (index.a == k && index.b == 0 && index.c == 0)
            || (index.a == 0 && index.b == k && index.c == 0)
            || (index.a == 0 && index.b == 0 && index.c == k);
        if on_axis {
            coefficients[pos] = rng.sample(StandardNormal);
        }
    }
    PiHamiltonianSpec::new(n_qubits, k, coefficients, None)
}

/// Uniaxial two-body instance Gamma_002 = gamma. For gamma > 0 and even N
/// the ground state is the balanced Dicke state, the raw gap is gamma/2,
/// and the normalized gap is 12 / (N (N + 2)).
pub fn lmg_spec(n_qubits: u32, gamma: f64) -> Result<PiHamiltonianSpec> {
    PiHamiltonianSpec::single_term(n_qubits, CorrelatorIndex::new(0, 0, 2), gamma)
}

/// H = sum Gamma_abc S_abc. Exactly-zero coefficients contribute nothing
/// and their correlators are never built.
pub fn assemble(spec: &PiHamiltonianSpec, cache: &CorrelatorCache) -> Result<SymOperator> {
    let mut acc = SymOperator::zeros(spec.n_qubits)?;
    for (index, gamma) in spec.coefficients() {
        if gamma == 0.0 {
            continue;
        }
        let term = correlator(spec.n_qubits, index, cache)?;
        acc.add_scaled(C64::new(gamma, 0.0), &term)?;
    }
    Ok(acc)
}

/// The shifted operator -S^2 + H.
pub fn symmetrize(h: &SymOperator) -> Result<SymOperator> {
    let s2 = total_spin_squared(h.n_qubits())?;
    Ok(s2.scaled(C64::new(-1.0, 0.0)).add(h)?)
}

const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues ascending, eigenvectors phase-fixed so the largest-modulus
/// amplitude is real positive.
pub fn eigendecompose(h: &SymOperator) -> Result<(Array1<f64>, Array2<C64>)> {
    let residual = h.hermiticity_residual();
    if residual > HERMITICITY_TOL {
        return Err(HamiltonianError::NotHermitian(residual));
    }
    linalg::eigh_ascending(h.matrix()).map_err(|e| HamiltonianError::Eigensolver(e.to_string()))
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub state: SymState,
    pub energy0: f64,
    /// Raw gap between the two lowest eigenvalues.
    pub gap: f64,
    /// True when the gap is below `tol` times the spectral width.
    pub degenerate: bool,
    pub spectrum: Vec<f64>,
}

pub fn ground_state(h: &SymOperator, degeneracy_tol: f64) -> Result<GroundStateResult> {
    if !degeneracy_tol.is_finite() || degeneracy_tol < 0.0 {
        return Err(HamiltonianError::BadTolerance(degeneracy_tol));
    }
    let (values, vectors) = eigendecompose(h)?;
    let dim = values.len();
    let energy0 = values[0];
    let gap = values[1] - values[0];
    let width = values[dim - 1] - values[0];
    let degenerate = gap <= degeneracy_tol * width;
    let state = SymState::from_unnormalized(h.n_qubits(), vectors.column(0).to_owned())?;
    Ok(GroundStateResult {
        state,
        energy0,
        gap,
        degenerate,
        spectrum: values.to_vec(),
    })
}

/// Gap between the two lowest levels divided by (mean - min) of the
/// spectrum, the scale used to compare spectra across system sizes.
/// The spectrum must be sorted ascending.
pub fn normalized_gap(spectrum: &[f64]) -> Result<f64> {
    let width = spectrum[spectrum.len() - 1] - spectrum[0];
    let scale = spectrum
        .iter()
        .fold(1.0f64, |m, v| m.max(v.abs()));
    if width <= 1e-12 * scale {
        return Err(HamiltonianError::FlatSpectrum { width });
    }
    let mean = spectrum.iter().sum::<f64>() / spectrum.len() as f64;
    let denominator = mean - spectrum[0];
    if denominator <= 1e-12 * scale {
        return Err(HamiltonianError::NormalizationDegenerate { denominator });
    }
    Ok((spectrum[1] - spectrum[0]) / denominator)
}

/// (H - min I) / (mean - min): ground energy 0, mean level 1.
pub fn normalize_energy(h: &SymOperator) -> Result<SymOperator> {
    let (values, _) = eigendecompose(h)?;
    let dim = values.len();
    let min = values[0];
    let width = values[dim - 1] - min;
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if width <= 1e-12 * scale {
        return Err(HamiltonianError::FlatSpectrum { width });
    }
    let mean = values.sum() / dim as f64;
    let denominator = mean - min;
    if denominator <= 1e-12 * scale {
        return Err(HamiltonianError::NormalizationDegenerate { denominator });
    }
    let mut shifted = h.clone();
    let eye = SymOperator::identity(h.n_qubits())?;
    shifted.add_scaled(C64::new(-min, 0.0), &eye)?;
    Ok(shifted.scaled(C64::new(1.0 / denominator, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symspace::{brute_force_correlator, dicke_isometry, SpinAxis, one_body_operator};
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spec_validation() {
        assert!(matches!(
            PiHamiltonianSpec::new(4, 0, vec![], None),
            Err(HamiltonianError::InvalidOrder { .. })
        ));
        assert!(matches!(
            PiHamiltonianSpec::new(2, 3, vec![0.0; 10], None),
            Err(HamiltonianError::InvalidOrder { .. })
        ));
        assert!(matches!(
            PiHamiltonianSpec::new(4, 2, vec![0.0; 5], None),
            Err(HamiltonianError::WrongCoefficientCount { .. })
        ));
        assert!(matches!(
            PiHamiltonianSpec::new(4, 2, vec![0.0, f64::NAN, 0.0, 0.0, 0.0, 0.0], None),
            Err(HamiltonianError::NonFiniteCoefficient { .. })
        ));
    }

    #[test]
    fn sample_draws_in_lexicographic_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let spec = sample_spec(40, 6, &mut rng).unwrap();
        assert_eq!(spec.coefficient_slice().len(), 28);

        let mut replay = ChaCha8Rng::seed_from_u64(99);
        let direct: Vec<f64> = (0..28).map(|_| replay.sample(StandardNormal)).collect();
        assert_eq!(spec.coefficient_slice(), &direct[..]);
    }

    #[test]
    fn single_term_assembles_to_scaled_correlator() {
        let cache = CorrelatorCache::new();
        let gamma = -1.7;
        let spec = PiHamiltonianSpec::single_term(4, CorrelatorIndex::new(0, 0, 2), gamma).unwrap();
        let h = assemble(&spec, &cache).unwrap();
        let s002 = correlator(4, CorrelatorIndex::new(0, 0, 2), &cache).unwrap();
        let expected = s002.scaled(C64::new(gamma, 0.0));
        assert!(h.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn assemble_matches_full_space_projection() {
        // Same sum built term by term in the 2^N basis and projected.
        let cache = CorrelatorCache::new();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = sample_spec(6, 2, &mut rng).unwrap();
        let fast = assemble(&spec, &cache).unwrap();
        let mut slow = SymOperator::zeros(6).unwrap();
        for (index, gamma) in spec.coefficients() {
            let term = brute_force_correlator(6, index).unwrap();
            slow.add_scaled(C64::new(gamma, 0.0), &term).unwrap();
        }
        assert!(fast.max_abs_diff(&slow).unwrap() < 1e-12);
    }

    #[test]
    fn symmetrize_of_zero_is_minus_casimir() {
        let zero = SymOperator::zeros(2).unwrap();
        let shifted = symmetrize(&zero).unwrap();
        let expected = SymOperator::identity(2).unwrap().scaled(C64::new(-2.0, 0.0));
        assert!(shifted.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn eigendecompose_diagonal() {
        let sz = one_body_operator(SpinAxis::Z, 2).unwrap();
        let (values, vectors) = eigendecompose(&sz).unwrap();
        assert_eq!(values.to_vec(), vec![-1.0, 0.0, 1.0]);
        // ascending order maps to basis columns 2, 1, 0
        for (col, basis) in [(0usize, 2usize), (1, 1), (2, 0)] {
            assert!((vectors[[basis, col]] - C64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn eigendecompose_rejects_non_hermitian() {
        let m = array![
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(0.5, 0.0), C64::new(0.0, 0.0)]
        ];
        let op = SymOperator::new(1, m).unwrap();
        assert!(matches!(
            eigendecompose(&op),
            Err(HamiltonianError::NotHermitian(_))
        ));
    }

    #[test]
    fn eigendecompose_reconstructs() {
        let cache = CorrelatorCache::new();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let spec = sample_spec(8, 3, &mut rng).unwrap();
        let h = symmetrize(&assemble(&spec, &cache).unwrap()).unwrap();
        let (values, vectors) = eigendecompose(&h).unwrap();
        let dim = values.len();
        let mut rec = Array2::<C64>::zeros((dim, dim));
        for j in 0..dim {
            for r in 0..dim {
                for c in 0..dim {
                    rec[[r, c]] +=
                        vectors[[r, j]] * C64::new(values[j], 0.0) * vectors[[c, j]].conj();
                }
            }
        }
        let rec_op = SymOperator::new(8, rec).unwrap();
        let scale = h.max_abs();
        assert!(rec_op.max_abs_diff(&h).unwrap() <= 1e-9 * scale);
    }

    #[test]
    fn lmg_ground_state_and_gaps() {
        let cache = CorrelatorCache::new();
        for n in [4u32, 10, 16] {
            let spec = lmg_spec(n, 1.0).unwrap();
            let ht = symmetrize(&assemble(&spec, &cache).unwrap()).unwrap();
            let gs = ground_state(&ht, DEFAULT_DEGENERACY_TOL).unwrap();
            assert!(!gs.degenerate, "n = {n}");
            // balanced Dicke state up to phase
            let balanced = SymState::dicke(n, n / 2).unwrap();
            let overlap = gs.state.inner(&balanced).unwrap().norm();
            assert!((overlap - 1.0).abs() < 1e-10, "n = {n}, overlap {overlap}");
            assert!((gs.gap - 0.5).abs() < 1e-10, "raw gap at n = {n}");

            let normalized = normalized_gap(&gs.spectrum).unwrap();
            let expected = 12.0 / (n as f64 * (n as f64 + 2.0));
            assert!(
                (normalized - expected).abs() <= 1e-10 * expected,
                "n = {n}: {normalized} vs {expected}"
            );
        }
    }

    #[test]
    fn lmg_negative_coupling_is_degenerate() {
        let cache = CorrelatorCache::new();
        let spec = lmg_spec(6, -1.0).unwrap();
        let ht = symmetrize(&assemble(&spec, &cache).unwrap()).unwrap();
        let gs = ground_state(&ht, DEFAULT_DEGENERACY_TOL).unwrap();
        assert!(gs.degenerate);
    }

    #[test]
    fn degeneracy_flag_example() {
        let m = Array2::from_diag(&array![
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0)
        ]);
        let op = SymOperator::new(2, m).unwrap();
        let gs = ground_state(&op, 1e-8).unwrap();
        assert!(gs.degenerate);
        assert_eq!(gs.gap, 0.0);
    }

    #[test]
    fn normalize_energy_examples() {
        let m = Array2::from_diag(&array![
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0)
        ]);
        let op = SymOperator::new(2, m).unwrap();
        let normalized = normalize_energy(&op).unwrap();
        assert!(normalized.max_abs_diff(&op).unwrap() < 1e-14);

        let flat = SymOperator::identity(3).unwrap().scaled(C64::new(4.0, 0.0));
        assert!(matches!(
            normalize_energy(&flat),
            Err(HamiltonianError::FlatSpectrum { .. })
        ));
    }

    #[test]
    fn normalization_degenerate_when_mean_hugs_minimum() {
        // 15 levels at zero and one at 1e-11: not flat at f64 resolution,
        // but mean - min is below the 1e-12 guard.
        let mut diag = vec![C64::new(0.0, 0.0); 16];
        diag[15] = C64::new(1e-11, 0.0);
        let m = Array2::from_diag(&Array1::from_vec(diag));
        let op = SymOperator::new(15, m).unwrap();
        assert!(matches!(
            normalize_energy(&op),
            Err(HamiltonianError::NormalizationDegenerate { .. })
        ));
    }

    #[test]
    fn spec_json_round_trip_and_rejections() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut spec = sample_spec(5, 2, &mut rng).unwrap();
        spec.set_seed(Some(3));
        let text = spec.to_json();
        let back = PiHamiltonianSpec::from_json(&text).unwrap();
        assert_eq!(back, spec);

        let sparse = r#"{"n_qubits": 4, "k": 2, "coeffs": [{"a":0,"b":0,"c":2,"gamma":1.5}]}"#;
        let lmg = PiHamiltonianSpec::from_json(sparse).unwrap();
        assert_eq!(lmg.coefficient(CorrelatorIndex::new(0, 0, 2)), Some(1.5));
        assert_eq!(lmg.coefficient(CorrelatorIndex::new(2, 0, 0)), Some(0.0));

        let dup = r#"{"n_qubits": 4, "k": 2, "coeffs": [
            {"a":0,"b":0,"c":2,"gamma":1.0}, {"a":0,"b":0,"c":2,"gamma":2.0}]}"#;
        assert!(matches!(
            PiHamiltonianSpec::from_json(dup),
            Err(HamiltonianError::DuplicateCoefficient(_))
        ));

        let wrong_order = r#"{"n_qubits": 4, "k": 2, "coeffs": [{"a":1,"b":1,"c":1,"gamma":1.0}]}"#;
        assert!(matches!(
            PiHamiltonianSpec::from_json(wrong_order),
            Err(HamiltonianError::WrongOrderEntry { .. })
        ));

        let unknown = r#"{"n_qubits": 4, "k": 2, "coeffs": [], "extra": true}"#;
        assert!(matches!(
            PiHamiltonianSpec::from_json(unknown),
            Err(HamiltonianError::Json(_))
        ));
    }

    #[test]
    fn diagonal_sample_touches_only_axes() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let spec = sample_diagonal_spec(8, 3, &mut rng).unwrap();
        for (index, gamma) in spec.coefficients() {
            let on_axis = index == CorrelatorIndex::new(3, 0, 0)
                || index == CorrelatorIndex::new(0, 3, 0)
                || index == CorrelatorIndex::new(0, 0, 3);
            if on_axis {
                assert!(gamma != 0.0);
            } else {
                assert_eq!(gamma, 0.0);
            }
        }
    }

    #[test]
    fn projected_assembly_stays_in_block() {
        // Permutation-invariant sums commute with the symmetric projector,
        // so assembling inside the block then embedding matches embedding
        // the ground state directly. Checked via the isometry.
        let v = dicke_isometry(4).unwrap();
        let cache = CorrelatorCache::new();
        let s101 = correlator(4, CorrelatorIndex::new(1, 0, 1), &cache).unwrap();
        let bf = brute_force_correlator(4, CorrelatorIndex::new(1, 0, 1)).unwrap();
        // The brute-force path already projects through v; agreement plus
        // unit Gram of v (tested in symspace) pins the embedding.
        assert!(s101.max_abs_diff(&bf).unwrap() < 1e-13);
        assert_eq!(v.nrows(), 5);
    }
}
