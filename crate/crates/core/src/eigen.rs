//! Hermitian eigensolver (cyclic Jacobi) and singular-value helpers.
//!
//! Jacobi is deterministic and accurate to a few ulps at the dimensions this
//! crate targets (n up to a couple hundred), which is what the golden-output
//! and residual contracts elsewhere in the crate rely on.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix};

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and a unitary `q` with
/// `a = q * diag(values) * q^*`. The input is Hermitized as `(a + a^*)/2`
/// before iterating, so slightly perturbed inputs are accepted.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut m = a.add(&a.adjoint())?.scale(Complex64::new(0.5, 0.0));
    let mut q = ComplexMatrix::identity(n);

    if n == 1 {
        return Ok((vec![m[(0, 0)].re], q));
    }

    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let stop = scale * 1e-15;

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        if off <= stop {
            break;
        }
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apr = m[(p, r)];
                let beta = apr.norm();
                if beta <= stop / (n as f64) {
                    continue;
                }
                // phase factor making the pivot real, then a real rotation
                let phase = apr / beta;
                let app = m[(p, p)].re;
                let arr = m[(r, r)].re;
                let tau = (arr - app) / (2.0 * beta);
                let t = -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                apply_rotation(&mut m, &mut q, p, r, phase, c, s);
            }
        }
    }

    // diagonal is real up to roundoff at this point
    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());

    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut sorted_q = ComplexMatrix::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        sorted_q.set_column(new_j, &q.column(old_j));
    }
    Ok((sorted_vals, sorted_q))
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for r in 0..n {
            if p != r {
                acc += m[(p, r)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Two-sided update with the unitary plane rotation
/// V = [[c*phase, -s*phase], [s, c]] on columns (p, r):
/// m <- V^* m V, q <- q V.
fn apply_rotation(
    m: &mut ComplexMatrix,
    q: &mut ComplexMatrix,
    p: usize,
    r: usize,
    phase: Complex64,
    c: f64,
    s: f64,
) {
    let n = m.rows();
    let cp = Complex::new(c, 0.0) * phase;
    let sp = Complex::new(s, 0.0) * phase;
    let cr = Complex::new(c, 0.0);
    let sr = Complex::new(s, 0.0);

    // m <- m V
    for i in 0..n {
        let mp = m[(i, p)];
        let mr = m[(i, r)];
        m[(i, p)] = cp * mp + sr * mr;
        m[(i, r)] = -sp * mp + cr * mr;
    }
    // m <- V^* m
    for j in 0..n {
        let mp = m[(p, j)];
        let mr = m[(r, j)];
        m[(p, j)] = cp.conj() * mp + sr * mr;
        m[(r, j)] = -sp.conj() * mp + cr * mr;
    }
    // q <- q V
    for i in 0..n {
        let qp = q[(i, p)];
        let qr = q[(i, r)];
        q[(i, p)] = cp * qp + sr * qr;
        q[(i, r)] = -sp * qp + cr * qr;
    }
}

/// Singular values in descending order, via the Hermitian eigenvalues of A*A.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let gram = if a.rows() >= a.cols() {
        a.adjoint().matmul(a).expect("shapes agree")
    } else {
        a.matmul(&a.adjoint()).expect("shapes agree")
    };
    let (vals, _) = hermitian_eigen(&gram).expect("gram matrix is square");
    let mut svals: Vec<f64> = vals.into_iter().map(|v| v.max(0.0).sqrt()).collect();
    svals.reverse();
    svals
}

/// Operator (spectral) norm: the largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Rank at a relative threshold, by column-pivoted Gram-Schmidt.
/// Used as an eigensolver-independent oracle in tests and reports.
pub fn rank_with_tol(a: &ComplexMatrix, tol: f64) -> usize {
    let mut cols: Vec<Vec<Complex64>> = (0..a.cols()).map(|j| a.column(j)).collect();
    let scale = cols
        .iter()
        .map(|c| crate::matrix::vec_norm(c))
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    loop {
        // pick the column with the largest residual norm
        let (best, best_norm) = cols
            .iter()
            .enumerate()
            .map(|(k, c)| (k, crate::matrix::vec_norm(c)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap_or((0, 0.0));
        if best_norm <= tol * scale {
            break;
        }
        let mut v = cols.swap_remove(best);
        let inv = Complex64::new(1.0 / crate::matrix::vec_norm(&v), 0.0);
        v = crate::matrix::vec_scale(&v, inv);
        for c in cols.iter_mut() {
            let coeff = crate::matrix::vec_inner(c, &v);
            for (ci, vi) in c.iter_mut().zip(v.iter()) {
                *ci -= coeff * vi;
            }
        }
        basis.push(v);
        if cols.is_empty() {
            break;
        }
    }
    basis.len()
}

/// Gram-Schmidt with one reorthogonalization pass. Columns must be
/// linearly independent; the R diagonal is real positive by construction.
pub fn orthonormalize_columns(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    let k = a.cols();
    if k > n {
        return Err(Error::dim("orthonormalize", k, n));
    }
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = a.column(j);
        for _ in 0..2 {
            for u in &q {
                let coeff = crate::matrix::vec_inner(&v, u);
                for (vi, ui) in v.iter_mut().zip(u.iter()) {
                    *vi -= coeff * ui;
                }
            }
        }
        let norm = crate::matrix::vec_norm(&v);
        if norm <= 1e-12 {
            return Err(Error::dim("orthonormalize: dependent column", j, k));
        }
        q.push(crate::matrix::vec_scale(
            &v,
            Complex64::new(1.0 / norm, 0.0),
        ));
    }
    let mut out = ComplexMatrix::zeros(n, k);
    for (j, col) in q.iter().enumerate() {
        out.set_column(j, col);
    }
    Ok(out)
}
