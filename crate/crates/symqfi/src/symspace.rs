//! Operators and states on the symmetric (permutation-invariant) subspace
//! of N qubits.
//!
//! The subspace is spanned by the N+1 Dicke states, indexed here by the
//! number of excitations n = 0..N. Index 0 is the all-zero product state,
//! which is the maximal eigenvector of the collective S_z; the S_z
//! eigenvalue at index n is m = N/2 - n. All matrices in this module are
//! (N+1) x (N+1) and act on amplitude vectors in this basis.
//!
//! Collective k-body correlators `S_abc` average products of a copies of
//! sigma_x/2, b of sigma_y/2 and c of sigma_z/2 over all tuples of
//! distinct sites, weighted by 1/k!. They are built by a three-step
//! recursion that lowers one axis at a time (z, then y, then x), which
//! keeps every intermediate inside the symmetric block; the independent
//! [`brute_force_correlator`] assembles the same operator in the full
//! 2^N space and projects it, and exists purely to check the recursion.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;

/// Largest qubit count for which full 2^N-space constructions are allowed.
pub const BRUTE_FORCE_MAX_QUBITS: u32 = 12;

#[derive(Debug, Error)]
pub enum SymspaceError {
    #[error("system must contain at least one qubit")]
    EmptySystem,
    #[error("correlator order {order} exceeds qubit count {n_qubits}")]
    OrderTooLarge { order: u32, n_qubits: u32 },
    #[error("excitation count {excitations} exceeds qubit count {n_qubits}")]
    ExcitationsTooLarge { excitations: u32, n_qubits: u32 },
    #[error("full-space construction supports at most {BRUTE_FORCE_MAX_QUBITS} qubits, got {0}")]
    BruteForceTooLarge(u32),
    #[error("expected dimension {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("state norm deviates from 1 by {0:.3e}, beyond the safe renormalization window")]
    NotNormalized(f64),
    #[error("cannot normalize a state with zero norm")]
    ZeroNorm,
    #[error("JSON decode failed: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SymspaceError>;

/// Collective spin component label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

/// Exponent triple (a, b, c) labelling the correlator S_abc.
///
/// The derived ordering is lexicographic in (a, b, c); enumeration helpers
/// below rely on it.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct CorrelatorIndex {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl CorrelatorIndex {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        CorrelatorIndex { a, b, c }
    }

    /// Total order k = a + b + c.
    pub fn order(&self) -> u32 {
        self.a + self.b + self.c
    }

    /// All triples with a + b + c = k, lexicographically ascending.
    pub fn all_with_order(k: u32) -> Vec<CorrelatorIndex> {
        let mut out = Vec::with_capacity(count_correlators(k) as usize);
        for a in 0..=k {
            for b in 0..=(k - a) {
                out.push(CorrelatorIndex::new(a, b, k - a - b));
            }
        }
        out
    }

    /// All triples with order <= max_order, ascending in order then lex.
    pub fn all_up_to_order(max_order: u32) -> Vec<CorrelatorIndex> {
        let mut out = Vec::with_capacity(total_terms(max_order) as usize);
        for k in 0..=max_order {
            out.extend(CorrelatorIndex::all_with_order(k));
        }
        out
    }
}

impl std::fmt::Display for CorrelatorIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "S_{}{}{}", self.a, self.b, self.c)
    }
}

/// Number of distinct correlators of order k: (k+1)(k+2)/2.
pub fn count_correlators(k: u32) -> u64 {
    let k = k as u64;
    (k + 1) * (k + 2) / 2
}

/// Number of correlators of any order up to n: (n+1)(n+2)(n+3)/6.
pub fn total_terms(n: u32) -> u64 {
    let n = n as u64;
    (n + 1) * (n + 2) * (n + 3) / 6
}

/// Binomial coefficient as f64 (exact for arguments small enough to matter).
pub(crate) fn binomial_f64(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for j in 1..=k {
        acc = acc * ((n - k + j) as f64) / (j as f64);
    }
    acc
}

/// Linear operator on the symmetric subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SymOperator {
    n_qubits: u32,
    matrix: Array2<C64>,
}

impl SymOperator {
    pub fn new(n_qubits: u32, matrix: Array2<C64>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(SymspaceError::EmptySystem);
        }
        let dim = n_qubits as usize + 1;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(SymspaceError::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(SymOperator { n_qubits, matrix })
    }

    pub fn zeros(n_qubits: u32) -> Result<Self> {
        let dim = n_qubits as usize + 1;
        Self::new(n_qubits, Array2::zeros((dim, dim)))
    }

    pub fn identity(n_qubits: u32) -> Result<Self> {
        let dim = n_qubits as usize + 1;
        Self::new(n_qubits, Array2::eye(dim))
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.n_qubits as usize + 1
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    fn check_same(&self, other: &SymOperator) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(SymspaceError::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &SymOperator) -> Result<SymOperator> {
        self.check_same(other)?;
        Ok(SymOperator {
            n_qubits: self.n_qubits,
            matrix: self.matrix.dot(&other.matrix),
        })
    }

    pub fn add(&self, other: &SymOperator) -> Result<SymOperator> {
        self.check_same(other)?;
        Ok(SymOperator {
            n_qubits: self.n_qubits,
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &SymOperator) -> Result<SymOperator> {
        self.check_same(other)?;
        Ok(SymOperator {
            n_qubits: self.n_qubits,
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn scaled(&self, factor: C64) -> SymOperator {
        SymOperator {
            n_qubits: self.n_qubits,
            matrix: self.matrix.mapv(|v| v * factor),
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: C64, other: &SymOperator) -> Result<()> {
        self.check_same(other)?;
        self.matrix.zip_mut_with(&other.matrix, |s, &o| *s += factor * o);
        Ok(())
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    pub fn max_abs_diff(&self, other: &SymOperator) -> Result<f64> {
        self.check_same(other)?;
        let mut m = 0.0f64;
        for (s, o) in self.matrix.iter().zip(other.matrix.iter()) {
            m = m.max((s - o).norm());
        }
        Ok(m)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let dim = self.dim();
        let mut m = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                m = m.max((self.matrix[[r, c]] - self.matrix[[c, r]].conj()).norm());
            }
        }
        m
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Exact Hermitian symmetrization (A + A~)/2, mirrored entry by entry.
    pub fn hermitized(mut self) -> SymOperator {
        let dim = self.dim();
        for r in 0..dim {
            self.matrix[[r, r]] = C64::new(self.matrix[[r, r]].re, 0.0);
            for c in (r + 1)..dim {
                let avg = (self.matrix[[r, c]] + self.matrix[[c, r]].conj()) * 0.5;
                self.matrix[[r, c]] = avg;
                self.matrix[[c, r]] = avg.conj();
            }
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&OperatorJson::from(self)).expect("operator serialization")
    }

    pub fn from_json(text: &str) -> Result<SymOperator> {
        let raw: OperatorJson = serde_json::from_str(text)?;
        raw.into_operator()
    }
}

/// Row-major split-complex wire form of an operator.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    pub n_qubits: u32,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&SymOperator> for OperatorJson {
    fn from(op: &SymOperator) -> Self {
        OperatorJson {
            n_qubits: op.n_qubits,
            re: op.matrix.iter().map(|v| v.re).collect(),
            im: op.matrix.iter().map(|v| v.im).collect(),
        }
    }
}

impl OperatorJson {
    pub fn into_operator(self) -> Result<SymOperator> {
        if self.n_qubits == 0 {
            return Err(SymspaceError::EmptySystem);
        }
        let dim = self.n_qubits as usize + 1;
        let expected = dim * dim;
        if self.re.len() != expected || self.im.len() != expected {
            return Err(SymspaceError::DimensionMismatch {
                expected,
                actual: self.re.len().max(self.im.len()),
            });
        }
        let data: Vec<C64> = self
            .re
            .iter()
            .zip(self.im.iter())
            .map(|(&re, &im)| C64::new(re, im))
            .collect();
        let matrix = Array2::from_shape_vec((dim, dim), data).expect("shape checked");
        SymOperator::new(self.n_qubits, matrix)
    }
}

/// Pure state on the symmetric subspace, unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SymState {
    n_qubits: u32,
    amplitudes: Array1<C64>,
}

impl SymState {
    /// Accepts amplitudes already normalized to 1e-12 and renormalizes the
    /// residual rounding exactly.
    pub fn new(n_qubits: u32, amplitudes: Array1<C64>) -> Result<Self> {
        Self::with_tolerance(n_qubits, amplitudes, 1e-12)
    }

    fn with_tolerance(n_qubits: u32, amplitudes: Array1<C64>, tol: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(SymspaceError::EmptySystem);
        }
        let dim = n_qubits as usize + 1;
        if amplitudes.len() != dim {
            return Err(SymspaceError::DimensionMismatch {
                expected: dim,
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol {
            return Err(SymspaceError::NotNormalized((norm - 1.0).abs()));
        }
        Ok(SymState {
            n_qubits,
            amplitudes: amplitudes.mapv(|v| v / norm),
        })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn from_unnormalized(n_qubits: u32, amplitudes: Array1<C64>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(SymspaceError::EmptySystem);
        }
        let dim = n_qubits as usize + 1;
        if amplitudes.len() != dim {
            return Err(SymspaceError::DimensionMismatch {
                expected: dim,
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(SymspaceError::ZeroNorm);
        }
        Ok(SymState {
            n_qubits,
            amplitudes: amplitudes.mapv(|v| v / norm),
        })
    }

    /// Dicke state with the given excitation count.
    pub fn dicke(n_qubits: u32, excitations: u32) -> Result<Self> {
        if n_qubits == 0 {
            return Err(SymspaceError::EmptySystem);
        }
        if excitations > n_qubits {
            return Err(SymspaceError::ExcitationsTooLarge { excitations, n_qubits });
        }
        let dim = n_qubits as usize + 1;
        let mut amplitudes = Array1::zeros(dim);
        amplitudes[excitations as usize] = C64::new(1.0, 0.0);
        Ok(SymState { n_qubits, amplitudes })
    }

    /// Haar-random pure state of the subspace: normalized complex Gaussian.
    pub fn haar_random<R: Rng + ?Sized>(n_qubits: u32, rng: &mut R) -> Result<Self> {
        if n_qubits == 0 {
            return Err(SymspaceError::EmptySystem);
        }
        let dim = n_qubits as usize + 1;
        let amplitudes = Array1::from_iter((0..dim).map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        }));
        Self::from_unnormalized(n_qubits, amplitudes)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.n_qubits as usize + 1
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SymState) -> Result<C64> {
        if self.n_qubits != other.n_qubits {
            return Err(SymspaceError::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateJson {
            n_qubits: self.n_qubits,
            re: self.amplitudes.iter().map(|v| v.re).collect(),
            im: self.amplitudes.iter().map(|v| v.im).collect(),
        })
        .expect("state serialization")
    }

    /// Decodes and normalizes a wire-form state. Returns the state together
    /// with the norm deviation found, so callers can warn when it exceeds
    /// their threshold.
    pub fn from_json(text: &str) -> Result<(SymState, f64)> {
        let raw: StateJson = serde_json::from_str(text)?;
        if raw.n_qubits == 0 {
            return Err(SymspaceError::EmptySystem);
        }
        let dim = raw.n_qubits as usize + 1;
        if raw.re.len() != dim || raw.im.len() != dim {
            return Err(SymspaceError::DimensionMismatch {
                expected: dim,
                actual: raw.re.len().max(raw.im.len()),
            });
        }
        let amplitudes = Array1::from_iter(
            raw.re.iter().zip(raw.im.iter()).map(|(&re, &im)| C64::new(re, im)),
        );
        let norm = amplitudes.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let state = SymState::from_unnormalized(raw.n_qubits, amplitudes)?;
        Ok((state, (norm - 1.0).abs()))
    }
}

/// Wire form of a symmetric-subspace state.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub n_qubits: u32,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Collective one-body operator S_x, S_y or S_z (spin-1/2 convention).
pub fn one_body_operator(axis: SpinAxis, n_qubits: u32) -> Result<SymOperator> {
    if n_qubits == 0 {
        return Err(SymspaceError::EmptySystem);
    }
    let n = n_qubits as usize;
    let dim = n + 1;
    let mut matrix = Array2::<C64>::zeros((dim, dim));
    match axis {
        SpinAxis::Z => {
            for col in 0..dim {
                matrix[[col, col]] = C64::new(n_qubits as f64 / 2.0 - col as f64, 0.0);
            }
        }
        SpinAxis::X | SpinAxis::Y => {
            for col in 0..dim {
                // Raising part: n excitations -> n - 1 raises m by one.
                if col >= 1 {
                    let amp = 0.5 * ((col * (n - col + 1)) as f64).sqrt();
                    matrix[[col - 1, col]] = match axis {
                        SpinAxis::X => C64::new(amp, 0.0),
                        _ => C64::new(0.0, -amp),
                    };
                }
                if col < n {
                    let amp = 0.5 * (((n - col) * (col + 1)) as f64).sqrt();
                    matrix[[col + 1, col]] = match axis {
                        SpinAxis::X => C64::new(amp, 0.0),
                        _ => C64::new(0.0, amp),
                    };
                }
            }
        }
    }
    SymOperator::new(n_qubits, matrix)
}

/// Memoized store of built correlators, shareable across threads.
///
/// Concurrent misses may build the same entry twice; both builds follow the
/// identical arithmetic, so whichever lands is bit-for-bit the same.
#[derive(Debug, Default)]
pub struct CorrelatorCache {
    map: Mutex<HashMap<(u32, u32, u32, u32), Arc<SymOperator>>>,
}

impl CorrelatorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, key: (u32, u32, u32, u32)) -> Option<Arc<SymOperator>> {
        self.map.lock().expect("cache poisoned").get(&key).cloned()
    }

    fn insert(&self, key: (u32, u32, u32, u32), op: Arc<SymOperator>) -> Arc<SymOperator> {
        self.map
            .lock()
            .expect("cache poisoned")
            .entry(key)
            .or_insert(op)
            .clone()
    }
}

/// Collective correlator S_abc on the symmetric subspace.
pub fn correlator(
    n_qubits: u32,
    index: CorrelatorIndex,
    cache: &CorrelatorCache,
) -> Result<Arc<SymOperator>> {
    if n_qubits == 0 {
        return Err(SymspaceError::EmptySystem);
    }
    if index.order() > n_qubits {
        return Err(SymspaceError::OrderTooLarge {
            order: index.order(),
            n_qubits,
        });
    }
    Ok(build_correlator(n_qubits, index.a, index.b, index.c, cache))
}

fn build_correlator(
    n: u32,
    a: u32,
    b: u32,
    c: u32,
    cache: &CorrelatorCache,
) -> Arc<SymOperator> {
    let key = (n, a, b, c);
    if let Some(hit) = cache.get(key) {
        return hit;
    }
    let built = Arc::new(compute_correlator(n, a, b, c, cache));
    cache.insert(key, built)
}

/// Recursion that strips one factor from the last nonzero axis (c, then b,
/// then a). Every subterm has strictly smaller total order, so the depth is
/// bounded by k and each (a, b, c) is built once per cache.
fn compute_correlator(n: u32, a: u32, b: u32, c: u32, cache: &CorrelatorCache) -> SymOperator {
    let k = a + b + c;
    if k == 0 {
        return SymOperator::identity(n).expect("n >= 1");
    }
    if k == 1 {
        let axis = if a == 1 {
            SpinAxis::X
        } else if b == 1 {
            SpinAxis::Y
        } else {
            SpinAxis::Z
        };
        return one_body_operator(axis, n).expect("n >= 1");
    }

    let kf = k as f64;
    let nf = n as f64;
    let op = if c > 0 {
        // S_abc = (1/k) S_{a,b,c-1} S_z - (N-k+2)(c-1)/(4k(k-1)) S_{a,b,c-2}
        //         + (i/2k) (a S_{a-1,b+1,c-1} - b S_{a+1,b-1,c-1})
        let lead = build_correlator(n, a, b, c - 1, cache);
        let sz = one_body_operator(SpinAxis::Z, n).expect("n >= 1");
        let mut acc = lead.matmul(&sz).expect("same n").scaled(C64::new(1.0 / kf, 0.0));
        if c >= 2 {
            let coeff = (nf - kf + 2.0) * (c as f64 - 1.0) / (4.0 * kf * (kf - 1.0));
            let lower = build_correlator(n, a, b, c - 2, cache);
            acc.add_scaled(C64::new(-coeff, 0.0), &lower).expect("same n");
        }
        if a >= 1 {
            let swap = build_correlator(n, a - 1, b + 1, c - 1, cache);
            acc.add_scaled(C64::new(0.0, a as f64 / (2.0 * kf)), &swap)
                .expect("same n");
        }
        if b >= 1 {
            let swap = build_correlator(n, a + 1, b - 1, c - 1, cache);
            acc.add_scaled(C64::new(0.0, -(b as f64) / (2.0 * kf)), &swap)
                .expect("same n");
        }
        acc
    } else if b > 0 {
        // S_ab0 = (1/k) S_{a,b-1,0} S_y - (N-k+2)(b-1)/(4k(k-1)) S_{a,b-2,0}
        //         - (i a / 2k) S_{a-1,b-1,1}
        let lead = build_correlator(n, a, b - 1, 0, cache);
        let sy = one_body_operator(SpinAxis::Y, n).expect("n >= 1");
        let mut acc = lead.matmul(&sy).expect("same n").scaled(C64::new(1.0 / kf, 0.0));
        if b >= 2 {
            let coeff = (nf - kf + 2.0) * (b as f64 - 1.0) / (4.0 * kf * (kf - 1.0));
            let lower = build_correlator(n, a, b - 2, 0, cache);
            acc.add_scaled(C64::new(-coeff, 0.0), &lower).expect("same n");
        }
        if a >= 1 {
            let swap = build_correlator(n, a - 1, b - 1, 1, cache);
            acc.add_scaled(C64::new(0.0, -(a as f64) / (2.0 * kf)), &swap)
                .expect("same n");
        }
        acc
    } else {
        // S_a00 = (1/a) S_{a-1,0,0} S_x - (N-a+2)/(4a) S_{a-2,0,0}
        let lead = build_correlator(n, a - 1, 0, 0, cache);
        let sx = one_body_operator(SpinAxis::X, n).expect("n >= 1");
        let mut acc = lead
            .matmul(&sx)
            .expect("same n")
            .scaled(C64::new(1.0 / a as f64, 0.0));
        let coeff = (nf - a as f64 + 2.0) * (a as f64 - 1.0) / (4.0 * a as f64 * (a as f64 - 1.0));
        let lower = build_correlator(n, a - 2, 0, 0, cache);
        acc.add_scaled(C64::new(-coeff, 0.0), &lower).expect("same n");
        acc
    };
    // The exact operator is Hermitian; strip the O(eps) asymmetry so the
    // type invariant holds by construction.
    op.hermitized()
}

/// Isometry from the symmetric subspace into the 2^N computational basis.
/// Row n holds the Dicke state with n excitations; bit s of a column index
/// is the state of qubit s.
pub fn dicke_isometry(n_qubits: u32) -> Result<Array2<C64>> {
    if n_qubits == 0 {
        return Err(SymspaceError::EmptySystem);
    }
    if n_qubits > BRUTE_FORCE_MAX_QUBITS {
        return Err(SymspaceError::BruteForceTooLarge(n_qubits));
    }
    let n = n_qubits as usize;
    let dim = n + 1;
    let size = 1usize << n;
    let mut v = Array2::<C64>::zeros((dim, size));
    for j in 0..size {
        let exc = (j as u64).count_ones() as usize;
        v[[exc, j]] = C64::new(1.0 / binomial_f64(n_qubits, exc as u32).sqrt(), 0.0);
    }
    Ok(v)
}

/// Reference construction of S_abc: every placement of the Pauli factors
/// on distinct sites is applied as a sparse string in the 2^N basis, and
/// the total is projected onto the Dicke basis. Exponential in N; exists
/// only to validate [`correlator`].
pub fn brute_force_correlator(n_qubits: u32, index: CorrelatorIndex) -> Result<SymOperator> {
    if n_qubits == 0 {
        return Err(SymspaceError::EmptySystem);
    }
    if n_qubits > BRUTE_FORCE_MAX_QUBITS {
        return Err(SymspaceError::BruteForceTooLarge(n_qubits));
    }
    if index.order() > n_qubits {
        return Err(SymspaceError::OrderTooLarge {
            order: index.order(),
            n_qubits,
        });
    }
    let n = n_qubits as usize;
    let (a, b, c) = (index.a as usize, index.b as usize, index.c as usize);
    let k = a + b + c;
    let dim = n + 1;
    let size = 1u64 << n;

    // Sign accumulation per (excitations-out, excitations-in) pair. The
    // common factor i^b and the 1/(k! 2^k) normalization are applied once
    // at the end.
    let mut signs = Array2::<f64>::zeros((dim, dim));
    let sites: Vec<usize> = (0..n).collect();
    for xs in sites.iter().copied().combinations(a) {
        let mask_x = bitmask(&xs);
        let rest: Vec<usize> = sites.iter().copied().filter(|s| !xs.contains(s)).collect();
        for ys in rest.iter().copied().combinations(b) {
            let mask_y = bitmask(&ys);
            let rest2: Vec<usize> = rest.iter().copied().filter(|s| !ys.contains(s)).collect();
            for zs in rest2.iter().copied().combinations(c) {
                let mask_z = bitmask(&zs);
                let flip = mask_x | mask_y;
                let sign_mask = mask_y | mask_z;
                for j in 0..size {
                    let row = (j ^ flip).count_ones() as usize;
                    let col = j.count_ones() as usize;
                    let sign = 1.0 - 2.0 * ((j & sign_mask).count_ones() & 1) as f64;
                    signs[[row, col]] += sign;
                }
            }
        }
    }

    let phase = match b % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    };
    let scale = factorial_f64(a) * factorial_f64(b) * factorial_f64(c)
        / (factorial_f64(k) * (2.0f64).powi(k as i32));
    let mut matrix = Array2::<C64>::zeros((dim, dim));
    for row in 0..dim {
        for col in 0..dim {
            let norm = (binomial_f64(n_qubits, row as u32) * binomial_f64(n_qubits, col as u32))
                .sqrt();
            matrix[[row, col]] = phase * signs[[row, col]] * scale / norm;
        }
    }
    SymOperator::new(n_qubits, matrix)
}

fn bitmask(sites: &[usize]) -> u64 {
    sites.iter().fold(0u64, |m, &s| m | (1u64 << s))
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0f64, |acc, j| acc * j as f64)
}

/// Total spin squared S_x^2 + S_y^2 + S_z^2. On the symmetric block this
/// equals S(S+1) with S = N/2, and also 3N/4 + 2(S_200 + S_020 + S_002).
pub fn total_spin_squared(n_qubits: u32) -> Result<SymOperator> {
    let sx = one_body_operator(SpinAxis::X, n_qubits)?;
    let sy = one_body_operator(SpinAxis::Y, n_qubits)?;
    let sz = one_body_operator(SpinAxis::Z, n_qubits)?;
    let mut acc = sx.matmul(&sx)?;
    acc.add_scaled(C64::new(1.0, 0.0), &sy.matmul(&sy)?)?;
    acc.add_scaled(C64::new(1.0, 0.0), &sz.matmul(&sz)?)?;
    Ok(acc.hermitized())
}
