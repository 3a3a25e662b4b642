//! Greedy minimal spanning sets of collective correlators.
//!
//! The correlators S_abc, taken over all orders up to N, span the full
//! space of permutation-invariant operators on the symmetric subspace,
//! whose real (Hermitian) dimension is (N+1)^2. Scanning them in order of
//! k and lexicographic (a, b, c) within each k, and keeping only those
//! with a nonnegligible component outside the span of what came before,
//! yields a canonical minimal generating list.

use serde_json::json;

use super::{ExperimentError, Result};
use crate::symspace::{correlator, CorrelatorCache, CorrelatorIndex};

/// Orthogonalization acceptance threshold on unit-norm candidates.
const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct HaarSetReport {
    pub n_qubits: u32,
    /// Dimension of the span of all correlators, i.e. the number kept.
    pub final_rank: usize,
    /// Accepted indices in scan order (k ascending, lex within k).
    pub indices: Vec<CorrelatorIndex>,
}

impl HaarSetReport {
    pub fn to_json(&self) -> String {
        let indices: Vec<_> = self
            .indices
            .iter()
            .map(|idx| json!({ "k": idx.order(), "a": idx.a, "b": idx.b, "c": idx.c }))
            .collect();
        serde_json::to_string_pretty(&json!({
            "N": self.n_qubits,
            "final_rank": self.final_rank,
            "indices": indices,
        }))
        .expect("static shape serializes")
    }
}

fn realify(op: &ndarray::Array2<crate::symspace::C64>) -> Vec<f64> {
    let mut v = Vec::with_capacity(2 * op.len());
    for x in op.iter() {
        v.push(x.re);
        v.push(x.im);
    }
    v
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Scan correlators in canonical order and keep each one that enlarges
/// the span. Orthogonalization is modified Gram-Schmidt, run twice per
/// candidate so the residual is trustworthy near the acceptance edge.
pub fn haar_minimal_set(n_qubits: u32, cache: &CorrelatorCache) -> Result<HaarSetReport> {
    let dim = n_qubits as usize + 1;
    let full_rank = dim * dim;

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(full_rank);
    let mut accepted: Vec<CorrelatorIndex> = Vec::with_capacity(full_rank);

    'scan: for k in 0..=n_qubits {
        for index in CorrelatorIndex::all_with_order(k) {
            let op = correlator(n_qubits, index, cache)?;
            let mut v = realify(op.matrix());
            let scale = norm(&v);
            if scale == 0.0 {
                continue;
            }
            for x in v.iter_mut() {
                *x /= scale;
            }
            for _ in 0..2 {
                for b in &basis {
                    let overlap = dot(&v, b);
                    for (x, y) in v.iter_mut().zip(b.iter()) {
                        *x -= overlap * y;
                    }
                }
            }
            let residual = norm(&v);
            if residual > RANK_TOL {
                for x in v.iter_mut() {
                    *x /= residual;
                }
                basis.push(v);
                accepted.push(index);
                if basis.len() == full_rank {
                    break 'scan;
                }
            }
        }
    }

    if basis.len() < full_rank {
        return Err(ExperimentError::RankDeficient {
            n_qubits,
            rank: basis.len(),
            expected: full_rank,
        });
    }

    Ok(HaarSetReport {
        n_qubits,
        final_rank: basis.len(),
        indices: accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_is_the_full_operator_dimension() {
        let cache = CorrelatorCache::new();
        for n in [1u32, 2, 3, 4, 5] {
            let report = haar_minimal_set(n, &cache).unwrap();
            let expected = ((n + 1) * (n + 1)) as usize;
            assert_eq!(report.final_rank, expected, "n = {n}");
            assert_eq!(report.indices.len(), expected);
        }
    }

    #[test]
    fn accepted_indices_follow_scan_order_without_duplicates() {
        let cache = CorrelatorCache::new();
        let report = haar_minimal_set(4, &cache).unwrap();
        for pair in report.indices.windows(2) {
            let (p, q) = (pair[0], pair[1]);
            assert!(
                (p.order(), p) < (q.order(), q),
                "{p} does not precede {q}"
            );
        }
    }

    #[test]
    fn json_shape() {
        let cache = CorrelatorCache::new();
        let report = haar_minimal_set(2, &cache).unwrap();
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(value["N"], 2);
        assert_eq!(value["final_rank"], 9);
        assert_eq!(value["indices"].as_array().unwrap().len(), 9);
        assert_eq!(value["indices"][0]["k"], 0);
        assert_eq!(value["indices"][0]["a"], 0);
    }
}
