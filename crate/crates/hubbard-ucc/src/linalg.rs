//! Internal dense eigensolving for sector-sized matrices.
//!
//! nalgebra's symmetric eigensolver is generic over the complex field, so
//! Hermitian input goes straight through it; a purely real matrix takes a
//! real-arithmetic shortcut. Columns come back sorted by eigenvalue.

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;

/// Eigendecomposition with ascending eigenvalues; column k of `vectors`
/// belongs to `values[k]` and the columns are orthonormal.
pub(crate) struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Array2<Complex64>,
}

/// Frobenius norm.
pub(crate) fn frobenius(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest Hermiticity defect max_ij |H_ij - conj(H_ji)|.
pub(crate) fn hermiticity_defect(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    worst
}

/// Full eigendecomposition of a Hermitian matrix.
pub(crate) fn eigh(h: &Array2<Complex64>) -> Eigh {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "matrix must be square");
    assert!(n > 0, "matrix must be nonempty");
    let imag_max = h.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag_max == 0.0 {
        return eigh_real(h);
    }

    let m = DMatrix::from_fn(n, n, |i, j| h[[i, j]]);
    let se = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors[[row, col]] = se.eigenvectors[(row, k)];
        }
    }
    Eigh { values, vectors }
}

/// Unitary exp(iH) of a Hermitian matrix, via its eigendecomposition.
pub(crate) fn exp_i_hermitian(h: &Array2<Complex64>) -> Array2<Complex64> {
    let n = h.nrows();
    let eig = eigh(h);
    let mut out = Array2::zeros((n, n));
    for k in 0..n {
        let phase = Complex64::from_polar(1.0, eig.values[k]);
        for a in 0..n {
            let left = eig.vectors[[a, k]] * phase;
            for b in 0..n {
                out[[a, b]] += left * eig.vectors[[b, k]].conj();
            }
        }
    }
    out
}

/// Fast path: the matrix is already real symmetric.
fn eigh_real(h: &Array2<Complex64>) -> Eigh {
    let n = h.nrows();
    let m = DMatrix::from_fn(n, n, |i, j| h[[i, j]].re);
    let se = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors[[row, col]] = Complex64::new(se.eigenvectors[(row, k)], 0.0);
        }
    }
    Eigh { values, vectors }
}
