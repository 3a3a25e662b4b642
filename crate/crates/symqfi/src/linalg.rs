//! Hermitian eigensolves with a deterministic eigenvector convention.

use ndarray::{Array1, Array2, ShapeBuilder};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

pub(crate) use ndarray_linalg::error::LinalgError;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Each eigenvector is rescaled so its largest-modulus entry (lowest index
/// on ties) is real and positive. LAPACK's output phases depend on the
/// backend; this pins them so repeated runs are bit-identical.
pub(crate) fn eigh_ascending(
    m: &Array2<Complex64>,
) -> Result<(Array1<f64>, Array2<Complex64>), LinalgError> {
    // Hand LAPACK a column-major copy: the wrapper returns conjugated
    // eigenvectors for row-major complex input (it maps the buffer to the
    // transpose, which for Hermitian input is the conjugate).
    let mut fortran = Array2::zeros(m.raw_dim().f());
    fortran.assign(m);
    let (mut values, mut vectors) = fortran.eigh(UPLO::Lower)?;

    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("non-finite eigenvalue"));
    if order.iter().enumerate().any(|(i, &j)| i != j) {
        let values_sorted = Array1::from_iter(order.iter().map(|&j| values[j]));
        let mut vectors_sorted = Array2::zeros(vectors.raw_dim());
        for (i, &j) in order.iter().enumerate() {
            vectors_sorted.column_mut(i).assign(&vectors.column(j));
        }
        values = values_sorted;
        vectors = vectors_sorted;
    }

    for mut col in vectors.columns_mut() {
        let mut best = 0usize;
        let mut best_mod = -1.0f64;
        for (i, v) in col.iter().enumerate() {
            let m = v.norm();
            if m > best_mod {
                best_mod = m;
                best = i;
            }
        }
        if best_mod > 0.0 {
            let phase = col[best] / Complex64::new(best_mod, 0.0);
            let correction = phase.conj();
            for v in col.iter_mut() {
                *v *= correction;
            }
        }
    }

    Ok((values, vectors))
}

/// `exp(-i H)` for Hermitian `H`, via the eigendecomposition.
pub(crate) fn unitary_from_hermitian(
    h: &Array2<Complex64>,
) -> Result<Array2<Complex64>, LinalgError> {
    let (values, vectors) = eigh_ascending(h)?;
    let dim = values.len();
    let mut scaled = vectors.clone();
    for (j, mut col) in scaled.columns_mut().into_iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -values[j]);
        for v in col.iter_mut() {
            *v *= phase;
        }
    }
    let mut out = Array2::zeros((dim, dim));
    ndarray::linalg::general_mat_mul(
        Complex64::new(1.0, 0.0),
        &scaled,
        &vectors.t().mapv(|v| v.conj()),
        Complex64::new(0.0, 0.0),
        &mut out,
    );
    Ok(out)
}
