//! Dense complex matrices and vectors.
//!
//! Row-major storage over `Complex<f64>`. This is the carrier type for every
//! unitary, projection, and basis in the crate. The JSON wire format is
//! `{"rows": n, "cols": m, "data": [[re, im], ...]}` with `data` row-major.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build a matrix from row-major data. Rejects empty shapes, length
    /// mismatches, and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::dim("matrix data length", data.len(), rows * cols));
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix shape must be at least 1x1");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Rows given as slices of (re, im) pairs; test-friendly literal input.
    pub fn from_rows(rows: &[&[(f64, f64)]]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::EmptyMatrix);
        }
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::dim("row length", row.len(), c));
            }
            data.extend(row.iter().map(|&(re, im)| Complex64::new(re, im)));
        }
        Self::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        assert!(j < self.cols);
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    /// Columns `range` as an n x k matrix.
    pub fn column_block(&self, range: std::ops::Range<usize>) -> Self {
        assert!(range.end <= self.cols && !range.is_empty());
        Self::from_fn(self.rows, range.len(), |i, j| self[(i, range.start + j)])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dim(
                "matmul",
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != x.len() {
            return Err(Error::dim("matrix-vector product", self.cols, x.len()));
        }
        let mut y = vec![ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = ZERO;
            for j in 0..self.cols {
                acc += self[(i, j)] * x[j];
            }
            y[i] = acc;
        }
        Ok(y)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(
                "elementwise op",
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||self - other||_F`; panics on shape mismatch.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Residual `||M*M - I||_F` of a square matrix.
    pub fn unitary_residual(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let gram = self.adjoint().matmul(self)?;
        Ok(gram.frobenius_distance(&Self::identity(self.rows)))
    }

    /// Residual `||M - M^t||_F`.
    pub fn symmetry_residual(&self) -> f64 {
        self.frobenius_distance(&self.transpose())
    }

    pub fn check_unitary(&self, tol: f64) -> Result<UnitaryCheckReport> {
        let residual = self.unitary_residual()?;
        Ok(UnitaryCheckReport {
            residual,
            tol,
            is_unitary: residual <= tol,
        })
    }

    /// blockdiag(blocks); every block square.
    pub fn block_diag(blocks: &[ComplexMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows()).sum();
        assert!(n >= 1, "block_diag needs at least one nonempty block");
        let mut m = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            assert!(b.is_square());
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m[(off + i, off + j)] = b[(i, j)];
                }
            }
            off += b.rows();
        }
        m
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Result of a unitarity check: `is_unitary` iff `residual <= tol`.
#[derive(Debug, Clone, Serialize)]
pub struct UnitaryCheckReport {
    pub residual: f64,
    pub tol: f64,
    pub is_unitary: bool,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ComplexMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let pairs: Vec<[f64; 2]> = self.data.iter().map(|z| [z.re, z.im]).collect();
        st.serialize_field("data", &pairs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let data = raw
            .data
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(raw.rows, raw.cols, data).map_err(de::Error::custom)
    }
}

// Vector helpers. Vectors are plain `Vec<Complex64>` / `&[Complex64]`.

/// Inner product, linear in the first argument: `sum_k x_k * conj(y_k)`.
pub fn vec_inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_conj(x: &[Complex64]) -> Vec<Complex64> {
    x.iter().map(|z| z.conj()).collect()
}

pub fn vec_sub(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y.iter()).map(|(a, b)| a - b).collect()
}

pub fn vec_scale(x: &[Complex64], s: Complex64) -> Vec<Complex64> {
    x.iter().map(|z| z * s).collect()
}

pub fn vec_dist(x: &[Complex64], y: &[Complex64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Standard basis vector e_k of C^n.
pub fn basis_vector(n: usize, k: usize) -> Vec<Complex64> {
    assert!(k < n);
    let mut v = vec![ZERO; n];
    v[k] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap2() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]]).unwrap()
    }

    #[test]
    fn matmul_identity_fixes() {
        let m = ComplexMatrix::from_rows(&[&[(1.0, 2.0), (0.5, -1.0)], &[(0.0, 3.0), (2.0, 0.0)]])
            .unwrap();
        let id = ComplexMatrix::identity(2);
        assert_eq!(id.matmul(&m).unwrap(), m);
        assert_eq!(m.matmul(&id).unwrap(), m);
    }

    #[test]
    fn matmul_swap_involution() {
        let s = swap2();
        let p = s.matmul(&s).unwrap();
        assert_eq!(p, ComplexMatrix::identity(2));
    }

    #[test]
    fn matmul_matches_triple_loop_oracle() {
        // fixed pseudo-random 3x3 pair; oracle is an explicit triple loop
        let a = ComplexMatrix::from_fn(3, 3, |i, j| {
            Complex64::new(
                (i * 3 + j) as f64 * 0.37 - 1.0,
                (i as f64) - 0.5 * (j as f64),
            )
        });
        let b = ComplexMatrix::from_fn(3, 3, |i, j| {
            Complex64::new(0.11 * (j as f64 + 1.0), (i * j) as f64 * 0.21 - 0.4)
        });
        let fast = a.matmul(&b).unwrap();
        let mut slow = ComplexMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = ZERO;
                for k in 0..3 {
                    acc += a[(i, k)] * b[(k, j)];
                }
                slow[(i, j)] = acc;
            }
        }
        assert!(fast.frobenius_distance(&slow) <= 1e-14);
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 2);
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn adjoint_of_diag_i() {
        let m = ComplexMatrix::from_diag(&[I]);
        let adj = m.adjoint();
        assert_eq!(adj[(0, 0)], -I);
    }

    #[test]
    fn transpose_nilpotent() {
        let m = ComplexMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(0.0, 0.0), (0.0, 0.0)]])
            .unwrap();
        let t = m.transpose();
        assert_eq!(t[(1, 0)], ONE);
        assert_eq!(t[(0, 1)], ZERO);
        assert_eq!(t.transpose(), m);
    }

    #[test]
    fn adjoint_is_conj_of_transpose() {
        let m = ComplexMatrix::from_fn(4, 4, |i, j| {
            Complex64::new((i + 2 * j) as f64 * 0.3 - 1.1, (3 * i + j) as f64 * 0.17)
        });
        assert_eq!(m.adjoint(), m.transpose().conj());
    }

    #[test]
    fn check_unitary_identity_and_scalar() {
        let id = ComplexMatrix::identity(4);
        let rep = id.check_unitary(1e-12).unwrap();
        assert_eq!(rep.residual, 0.0);
        assert!(rep.is_unitary);

        // diag(2): M*M - I = diag(3), residual 3
        let two = ComplexMatrix::from_diag(&[Complex64::new(2.0, 0.0)]);
        let rep = two.check_unitary(1e-12).unwrap();
        assert!((rep.residual - 3.0).abs() <= 1e-15);
        assert!(!rep.is_unitary);
    }

    #[test]
    fn check_unitary_rejects_rectangular() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            m.check_unitary(1e-9),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn constructor_rejects_nan_and_empty() {
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![Complex64::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(0, 3, vec![]),
            Err(Error::EmptyMatrix)
        ));
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![ZERO; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = ComplexMatrix::from_rows(&[
            &[(0.1 + 0.2, -1.0 / 3.0), (1e-300, 2.5)],
            &[(std::f64::consts::PI, 0.0), (-0.0, 1.0)],
        ])
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back); // bitwise: serde_json uses shortest round-trip floats
    }

    #[test]
    fn json_rejects_nonfinite() {
        let s = r#"{"rows":1,"cols":1,"data":[[1e999,0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(s).is_err());
    }
}
