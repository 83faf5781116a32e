//! Subspaces of C^n as orthonormal column bases, with basis-independent
//! comparison through principal angles.

use crate::eigen::{operator_norm, orthonormalize_columns, singular_values};
use crate::error::{Error, Result};
use crate::matrix::{vec_inner, vec_norm, vec_scale, Complex64, ComplexMatrix, ZERO};

/// Tolerance for the orthonormality invariant of a stored basis.
pub const BASIS_TOL: f64 = 1e-10;
/// Principal-angle residual below which two subspaces count as equal.
pub const SUBSPACE_EQ_TOL: f64 = 1e-8;

/// A subspace of C^n, stored as orthonormal basis columns. The trivial
/// subspace is represented by an empty column list.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    columns: Vec<Vec<Complex64>>,
}

impl Subspace {
    /// The zero subspace of C^n.
    pub fn trivial(ambient: usize) -> Self {
        assert!(ambient >= 1);
        Self {
            ambient,
            columns: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_basis(&ComplexMatrix::identity(ambient)).expect("identity is orthonormal")
    }

    /// Wrap an already-orthonormal basis; rejects defective input.
    pub fn from_basis(basis: &ComplexMatrix) -> Result<Self> {
        let gram = basis.adjoint().matmul(basis)?;
        let defect = gram.frobenius_distance(&ComplexMatrix::identity(basis.cols()));
        if defect > BASIS_TOL {
            return Err(Error::dim("orthonormal basis defect", defect, BASIS_TOL));
        }
        Ok(Self {
            ambient: basis.rows(),
            columns: (0..basis.cols()).map(|j| basis.column(j)).collect(),
        })
    }

    /// Orthonormalize a spanning set (columns) into a subspace.
    pub fn from_spanning(columns: &ComplexMatrix) -> Result<Self> {
        let q = orthonormalize_columns(columns)?;
        Self::from_basis(&q)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.columns.len() == self.ambient
    }

    pub fn basis_columns(&self) -> &[Vec<Complex64>] {
        &self.columns
    }

    /// Basis as a matrix; `None` for the trivial subspace.
    pub fn basis_matrix(&self) -> Option<ComplexMatrix> {
        if self.columns.is_empty() {
            return None;
        }
        let mut m = ComplexMatrix::zeros(self.ambient, self.columns.len());
        for (j, col) in self.columns.iter().enumerate() {
            m.set_column(j, col);
        }
        Some(m)
    }

    /// Orthogonal projection onto the subspace.
    pub fn projector(&self) -> ComplexMatrix {
        match self.basis_matrix() {
            Some(b) => b.matmul(&b.adjoint()).expect("shapes agree"),
            None => ComplexMatrix::zeros(self.ambient, self.ambient),
        }
    }

    /// Distance of a vector to the subspace.
    pub fn distance(&self, x: &[Complex64]) -> f64 {
        assert_eq!(x.len(), self.ambient);
        let mut residual = x.to_vec();
        for col in &self.columns {
            let coeff = vec_inner(&residual, col);
            for (r, c) in residual.iter_mut().zip(col.iter()) {
                *r -= coeff * c;
            }
        }
        vec_norm(&residual)
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Subspace {
        let k = self.ambient - self.dim();
        if k == 0 {
            return Subspace::trivial(self.ambient);
        }
        // deflate the standard basis against ours, pivoted greedily
        let mut candidates: Vec<Vec<Complex64>> = (0..self.ambient)
            .map(|j| {
                let mut e = vec![ZERO; self.ambient];
                e[j] = crate::matrix::ONE;
                for col in &self.columns {
                    let coeff = vec_inner(&e, col);
                    for (r, c) in e.iter_mut().zip(col.iter()) {
                        *r -= coeff * c;
                    }
                }
                e
            })
            .collect();
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(k);
        while basis.len() < k {
            let (best, _) = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, vec_norm(c)))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .expect("complement candidates exhausted");
            let mut v = candidates.swap_remove(best);
            for _ in 0..2 {
                for b in &basis {
                    let coeff = vec_inner(&v, b);
                    for (vi, bi) in v.iter_mut().zip(b.iter()) {
                        *vi -= coeff * bi;
                    }
                }
                for col in &self.columns {
                    let coeff = vec_inner(&v, col);
                    for (vi, ci) in v.iter_mut().zip(col.iter()) {
                        *vi -= coeff * ci;
                    }
                }
            }
            let norm = vec_norm(&v);
            assert!(norm > 1e-10, "complement pivot collapsed");
            basis.push(vec_scale(&v, Complex64::new(1.0 / norm, 0.0)));
        }
        Subspace {
            ambient: self.ambient,
            columns: basis,
        }
    }

    /// Principal-angle residual against another subspace of the same
    /// dimension: max |sigma_k - 1| over singular values of the basis
    /// overlap matrix. Zero iff the subspaces coincide.
    pub fn principal_angle_residual(&self, other: &Subspace) -> Option<f64> {
        if self.ambient != other.ambient || self.dim() != other.dim() {
            return None;
        }
        if self.is_trivial() {
            return Some(0.0);
        }
        let a = self.basis_matrix().unwrap();
        let b = other.basis_matrix().unwrap();
        let overlap = a.adjoint().matmul(&b).unwrap();
        let res = singular_values(&overlap)
            .into_iter()
            .map(|s| (s - 1.0).abs())
            .fold(0.0f64, f64::max);
        Some(res)
    }

    /// Dimension match plus principal-angle residual at tolerance.
    pub fn approx_eq(&self, other: &Subspace) -> bool {
        matches!(self.principal_angle_residual(other), Some(r) if r <= SUBSPACE_EQ_TOL)
    }

    /// `||(I - P) A P||` in operator norm: how far `A` moves the subspace.
    pub fn invariance_defect(&self, a: &ComplexMatrix) -> f64 {
        let p = self.projector();
        let ip = ComplexMatrix::identity(self.ambient).sub(&p).unwrap();
        let m = ip.matmul(a).unwrap().matmul(&p).unwrap();
        operator_norm(&m)
    }
}
