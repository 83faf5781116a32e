//! Spectral decomposition of unitary matrices with eigenvalue clustering.
//!
//! A unitary U is normal, so U = H1 + i H2 with commuting Hermitian parts
//! H1 = (U + U*)/2 and H2 = (U - U*)/(2i). We diagonalize H1, then refine
//! each (near-)degenerate H1 eigenspace by diagonalizing the restriction of
//! H2 to it. This yields a joint eigenbasis using only the Hermitian Jacobi
//! solver, and in particular splits conjugate eigenvalue pairs, which share
//! the same H1 eigenvalue.

use std::f64::consts::TAU;
use std::ops::Range;

use serde::Serialize;

use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix};

/// Tolerance at which a matrix is accepted as unitary on input.
pub const UNITARY_INPUT_TOL: f64 = 1e-8;
/// Default circular-arc tolerance for merging eigenvalues into clusters.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
/// Gap tolerance for grouping eigenvalues of H1 before the H2 refinement.
const H1_GROUP_TOL: f64 = 1e-9;
/// Threshold for picking the leading entry when fixing column phases.
const PHASE_PIVOT_TOL: f64 = 1e-8;

/// One eigenvalue cluster: unimodular representative, multiplicity, and the
/// contiguous range of columns of `w` spanning its eigenspace.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub xi: Complex64,
    pub mult: usize,
    pub col_range: Range<usize>,
}

impl Serialize for Cluster {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Cluster", 4)?;
        st.serialize_field("xi", &[self.xi.re, self.xi.im])?;
        st.serialize_field("arg", &principal_arg(self.xi))?;
        st.serialize_field("mult", &self.mult)?;
        st.serialize_field("col_range", &[self.col_range.start, self.col_range.end])?;
        st.end()
    }
}

/// U = W * diag(xi_j I_{n_j}) * W^* with clusters ordered by principal
/// argument in [0, 2pi) and eigenvector columns grouped contiguously.
#[derive(Debug, Clone)]
pub struct UnitarySpectralDecomposition {
    w: ComplexMatrix,
    clusters: Vec<Cluster>,
}

impl UnitarySpectralDecomposition {
    pub fn w(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn dim(&self) -> usize {
        self.w.rows()
    }

    /// Number of distinct eigenvalue clusters (d).
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.mult).collect()
    }

    /// Orthonormal basis of the eigenspace of cluster j (columns of W).
    pub fn cluster_basis(&self, j: usize) -> Result<ComplexMatrix> {
        let c = self.clusters.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: self.clusters.len(),
        })?;
        Ok(self.w.column_block(c.col_range.clone()))
    }

    /// Orthogonal projection onto the eigenspace of cluster j.
    pub fn eigenprojection(&self, j: usize) -> Result<ComplexMatrix> {
        let b = self.cluster_basis(j)?;
        b.matmul(&b.adjoint())
    }

    /// diag(xi_j I_{n_j}) in the clustered column order.
    pub fn diagonal_matrix(&self) -> ComplexMatrix {
        let mut d = Vec::with_capacity(self.dim());
        for c in &self.clusters {
            d.extend(std::iter::repeat_n(c.xi, c.mult));
        }
        ComplexMatrix::from_diag(&d)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.w
            .matmul(&self.diagonal_matrix())
            .unwrap()
            .matmul(&self.w.adjoint())
            .unwrap()
    }

    /// `||U - W diag W*||_F` against the given matrix.
    pub fn reconstruction_residual(&self, u: &ComplexMatrix) -> f64 {
        self.reconstruct().frobenius_distance(u)
    }
}

/// Spectral decomposition of a unitary matrix with clustering of nearby
/// eigenvalues at circular-arc tolerance `cluster_tol`.
pub fn spectral_decompose_unitary(
    u: &ComplexMatrix,
    cluster_tol: f64,
) -> Result<UnitarySpectralDecomposition> {
    assert!(cluster_tol > 0.0, "cluster_tol must be positive");
    let residual = u.unitary_residual()?;
    if residual > UNITARY_INPUT_TOL {
        return Err(Error::NotUnitary {
            residual,
            tol: UNITARY_INPUT_TOL,
        });
    }
    let n = u.rows();

    let h1 = u.add(&u.adjoint())?.scale(Complex64::new(0.5, 0.0));
    let h2 = u.sub(&u.adjoint())?.scale(Complex64::new(0.0, -0.5));

    let (vals1, mut q) = hermitian_eigen(&h1)?;

    // refine each near-degenerate H1 eigenspace with H2
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals1[end] - vals1[end - 1] <= H1_GROUP_TOL {
            end += 1;
        }
        if end - start > 1 {
            let block = q.column_block(start..end);
            let restricted = block.adjoint().matmul(&h2)?.matmul(&block)?;
            let (_, s) = hermitian_eigen(&restricted)?;
            let rotated = block.matmul(&s)?;
            for j in 0..end - start {
                q.set_column(start + j, &rotated.column(j));
            }
        }
        start = end;
    }

    // Rayleigh quotients give the eigenvalues; normalize onto the circle
    let mut eigs: Vec<(f64, usize)> = Vec::with_capacity(n); // (principal arg, column)
    for k in 0..n {
        let col = q.column(k);
        let ucol = u.mul_vec(&col)?;
        let xi = crate::matrix::vec_inner(&ucol, &col);
        let arg = principal_arg(xi);
        eigs.push((arg, k));
    }
    eigs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let groups = cluster_circular(&eigs.iter().map(|e| e.0).collect::<Vec<_>>(), cluster_tol)?;

    // assemble clusters in order of representative argument, columns contiguous
    let mut entries: Vec<(f64, Vec<usize>, Complex64)> = Vec::with_capacity(groups.len());
    for g in &groups {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut cols = Vec::with_capacity(g.len());
        for &idx in g {
            sum += Complex64::from_polar(1.0, eigs[idx].0);
            cols.push(eigs[idx].1);
        }
        let rep = sum / sum.norm();
        // representatives a hair below 2 pi order as (negative) near-zero,
        // so the seam at arg 0 cannot flip the cluster order under roundoff
        let mut key = principal_arg(rep);
        if TAU - key <= cluster_tol {
            key -= TAU;
        }
        entries.push((key, cols, rep));
    }
    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut w = ComplexMatrix::zeros(n, n);
    let mut clusters = Vec::with_capacity(entries.len());
    let mut offset = 0;
    for (_, cols, rep) in entries {
        let mult = cols.len();
        for (slot, &col) in cols.iter().enumerate() {
            let fixed = fix_column_phase(&q.column(col));
            w.set_column(offset + slot, &fixed);
        }
        clusters.push(Cluster {
            xi: rep,
            mult,
            col_range: offset..offset + mult,
        });
        offset += mult;
    }

    Ok(UnitarySpectralDecomposition { w, clusters })
}

/// Principal argument in [0, 2pi).
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Circular arc distance between two unimodular values, in [0, pi].
pub fn arc_distance(a: Complex64, b: Complex64) -> f64 {
    let d = (a * b.conj()).arg().abs();
    d.min(TAU - d)
}

/// Group sorted principal arguments into clusters: adjacent values (including
/// the wrap-around pair) merge when their arc gap is <= tol. Any gap inside
/// the ambiguous band [tol/2, 2 tol] aborts with ClusteringUnstable so the
/// caller can retry with a different tolerance.
fn cluster_circular(sorted_args: &[f64], tol: f64) -> Result<Vec<Vec<usize>>> {
    let n = sorted_args.len();
    if n == 1 {
        return Ok(vec![vec![0]]);
    }

    // circular gap after index i
    let gap_after = |i: usize| -> f64 {
        if i + 1 < n {
            sorted_args[i + 1] - sorted_args[i]
        } else {
            sorted_args[0] + TAU - sorted_args[n - 1]
        }
    };

    for i in 0..n {
        let g = gap_after(i);
        if g >= tol / 2.0 && g <= 2.0 * tol {
            return Err(Error::ClusteringUnstable {
                gap: g,
                cluster_tol: tol,
            });
        }
    }

    let boundary: Vec<usize> = (0..n).filter(|&i| gap_after(i) > tol).collect();
    if boundary.is_empty() {
        return Ok(vec![(0..n).collect()]);
    }

    // walk circularly starting just after the last boundary
    let start = (boundary[boundary.len() - 1] + 1) % n;
    let mut groups = Vec::with_capacity(boundary.len());
    let mut current = Vec::new();
    for step in 0..n {
        let i = (start + step) % n;
        current.push(i);
        if gap_after(i) > tol {
            groups.push(std::mem::take(&mut current));
        }
    }
    debug_assert!(current.is_empty());
    Ok(groups)
}

/// Make the first significant entry of the column real positive.
fn fix_column_phase(col: &[Complex64]) -> Vec<Complex64> {
    for z in col {
        if z.norm() > PHASE_PIVOT_TOL {
            let phase = z / z.norm();
            return crate::matrix::vec_scale(col, phase.conj());
        }
    }
    col.to_vec()
}
