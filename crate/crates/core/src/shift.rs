//! Discretized bilateral shifts on the unit circle.
//!
//! The grid is the nN-th roots of unity xi_k = e^{2 pi i k / (nN)}. The
//! model operator is multiplication by xi^N, whose spectrum is the n base
//! roots of unity, each with multiplicity N. Grid functions decompose as
//! f = sum_j xi^{j-1} (f_j o psi) with psi(xi) = xi^N: the Wold transform,
//! realized exactly by DFT-coefficient residue classes. Conjugations in the
//! family of the model are pointwise N x N symmetric unitary symbols Phi on
//! the base grid.
//!
//! Grid functions carry the normalized circle measure: the norm of a sample
//! vector is the root mean square, which is what makes the Wold transform a
//! norm identity.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use serde::Serialize;

use crate::antilinear::{csymmetry_residual, Conjugation};
use crate::decomp::{principal_arg, spectral_decompose_unitary, DEFAULT_CLUSTER_TOL};
use crate::error::{Error, Result};
use crate::family::ConjugationParametrization;
use crate::matrix::{basis_vector, Complex64, ComplexMatrix, ZERO};
use crate::subspace::Subspace;

/// Tolerance for the pointwise symmetric-unitary invariant of a Phi symbol.
pub const PHI_TOL: f64 = 1e-9;

/// Cyclic shift e_k -> e_{k+1 mod n}: the permutation model of the
/// bilateral shift on a finite grid.
#[derive(Debug, Clone)]
pub struct CyclicShiftModel {
    n: usize,
    u: ComplexMatrix,
}

impl CyclicShiftModel {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadParams {
                reason: format!("cyclic shift needs n >= 2, got {n}"),
            });
        }
        let mut u = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            u[((k + 1) % n, k)] = crate::matrix::ONE;
        }
        Ok(Self { n, u })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }
}

/// Multiplication by xi^N on the nN-point grid of unit roots.
#[derive(Debug, Clone)]
pub struct PowerShiftModel {
    base_n: usize,
    power: usize,
    u: ComplexMatrix,
}

impl PowerShiftModel {
    pub fn new(base_n: usize, power: usize) -> Result<Self> {
        if base_n < 2 || power < 1 {
            return Err(Error::BadParams {
                reason: format!(
                    "power shift needs n >= 2 and N >= 1, got n = {base_n}, N = {power}"
                ),
            });
        }
        let m = base_n * power;
        let diag: Vec<Complex64> = (0..m).map(|k| unit_root(k * power, m)).collect();
        Ok(Self {
            base_n,
            power,
            u: ComplexMatrix::from_diag(&diag),
        })
    }

    pub fn base_size(&self) -> usize {
        self.base_n
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn grid_size(&self) -> usize {
        self.base_n * self.power
    }

    /// The multiplication operator M_{xi^N} as a diagonal matrix.
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    /// xi_k = e^{2 pi i k / (nN)}.
    pub fn grid_point(&self, k: usize) -> Complex64 {
        unit_root(k, self.grid_size())
    }

    /// eta_l = e^{2 pi i l / n} on the base grid.
    pub fn base_point(&self, l: usize) -> Complex64 {
        unit_root(l, self.base_n)
    }

    /// Wold transform: split f (nN samples) into N base-grid functions f_j
    /// with DFT coefficients f_hat(N q + j - 1).
    pub fn wold_transform(&self, f: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
        let m = self.grid_size();
        if f.len() != m {
            return Err(Error::dim("wold transform", f.len(), m));
        }
        let coeffs = fourier_coefficients(f);
        let mut parts = Vec::with_capacity(self.power);
        for j in 0..self.power {
            let base_coeffs: Vec<Complex64> = (0..self.base_n)
                .map(|q| coeffs[self.power * q + j])
                .collect();
            parts.push(fourier_samples(&base_coeffs));
        }
        Ok(parts)
    }

    /// Reassemble f from its Wold components; exact inverse of the forward
    /// transform.
    pub fn wold_inverse(&self, parts: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
        if parts.len() != self.power {
            return Err(Error::dim("wold inverse", parts.len(), self.power));
        }
        let m = self.grid_size();
        let mut coeffs = vec![ZERO; m];
        for (j, part) in parts.iter().enumerate() {
            if part.len() != self.base_n {
                return Err(Error::dim(
                    "wold inverse component",
                    part.len(),
                    self.base_n,
                ));
            }
            let base_coeffs = fourier_coefficients(part);
            for q in 0..self.base_n {
                coeffs[self.power * q + j] = base_coeffs[q];
            }
        }
        Ok(fourier_samples(&coeffs))
    }

    /// Residual of W M_psi W* against the block-diagonal base shift, swept
    /// over the standard basis.
    pub fn intertwine_residual(&self) -> f64 {
        let m = self.grid_size();
        let mut worst: f64 = 0.0;
        for k in 0..m {
            let e = basis_vector(m, k);
            let shifted = self.u.mul_vec(&e).expect("dimensions agree");
            let lhs = self.wold_transform(&shifted).expect("length checked");
            let parts = self.wold_transform(&e).expect("length checked");
            let mut dist_sq = 0.0;
            for (part, transformed) in parts.iter().zip(lhs.iter()) {
                for l in 0..self.base_n {
                    let rhs = self.base_point(l) * part[l];
                    dist_sq += (transformed[l] - rhs).norm_sqr();
                }
            }
            worst = worst.max(dist_sq.sqrt());
        }
        worst
    }

    /// The conjugation C f = sum_j (conj(f_j) o psi) sum_k h_k (phi_{k,j} o psi)
    /// attached to a valid Phi symbol.
    pub fn conjugation_from_phi(&self, phi: &PhiSymbol) -> Result<Conjugation> {
        if phi.base_size() != self.base_n || phi.block_size() != self.power {
            return Err(Error::dim(
                "phi symbol shape",
                format!(
                    "{}x({}x{})",
                    phi.base_size(),
                    phi.block_size(),
                    phi.block_size()
                ),
                format!("{}x({}x{})", self.base_n, self.power, self.power),
            ));
        }
        let m = self.grid_size();
        let mut a = ComplexMatrix::zeros(m, m);
        for k in 0..m {
            let parts = self.wold_transform(&basis_vector(m, k))?;
            for p in 0..m {
                let xi = self.grid_point(p);
                let b = p % self.base_n; // xi_p^N is the b-th base point
                let mut val = ZERO;
                for (j, part) in parts.iter().enumerate() {
                    let mut carrier = ZERO;
                    let mut xi_pow = crate::matrix::ONE;
                    for r in 0..self.power {
                        carrier += xi_pow * phi.value(b)[(r, j)];
                        xi_pow *= xi;
                    }
                    val += part[b].conj() * carrier;
                }
                a[(p, k)] = val;
            }
        }
        Conjugation::new(a)
    }

    /// Family parametrization of the model unitary.
    pub fn parametrization(&self) -> Result<ConjugationParametrization> {
        ConjugationParametrization::from_unitary(&self.u, DEFAULT_CLUSTER_TOL)
    }
}

fn unit_root(k: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * ((k % m) as f64) / m as f64)
}

/// f_hat(q) = (1/m) sum_k f(xi_k) xi_k^{-q}: coefficients of the
/// interpolating trigonometric polynomial.
fn fourier_coefficients(samples: &[Complex64]) -> Vec<Complex64> {
    let m = samples.len();
    let scale = 1.0 / m as f64;
    (0..m)
        .map(|q| {
            let mut acc = ZERO;
            for (k, &s) in samples.iter().enumerate() {
                acc += s * unit_root(m - (k * q) % m, m); // xi_k^{-q}
            }
            acc * scale
        })
        .collect()
}

/// f(xi_k) = sum_q f_hat(q) xi_k^q.
fn fourier_samples(coeffs: &[Complex64]) -> Vec<Complex64> {
    let m = coeffs.len();
    (0..m)
        .map(|k| {
            let mut acc = ZERO;
            for (q, &c) in coeffs.iter().enumerate() {
                acc += c * unit_root((k * q) % m, m);
            }
            acc
        })
        .collect()
}

/// Root-mean-square norm: the discrete analog of the L^2 norm under the
/// normalized circle measure.
pub fn grid_norm(v: &[Complex64]) -> f64 {
    (v.iter().map(|z| z.norm_sqr()).sum::<f64>() / v.len() as f64).sqrt()
}

/// Pointwise N x N matrix symbol on the base grid, symmetric unitary at
/// every grid point. These are exactly the free parameters of the
/// conjugation family of the power-shift model.
#[derive(Debug, Clone)]
pub struct PhiSymbol {
    values: Vec<ComplexMatrix>,
}

impl PhiSymbol {
    pub fn new(values: Vec<ComplexMatrix>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadParams {
                reason: "phi symbol needs at least one grid point".into(),
            });
        }
        let n = values[0].rows();
        for (grid_index, v) in values.iter().enumerate() {
            if v.rows() != n || v.cols() != n {
                return Err(Error::dim("phi block shape", v.rows(), n));
            }
            let unitary_residual = v.unitary_residual()?;
            let symmetry_residual = v.symmetry_residual();
            if unitary_residual > PHI_TOL || symmetry_residual > PHI_TOL {
                return Err(Error::InvalidPhi {
                    grid_index,
                    unitary_residual,
                    symmetry_residual,
                });
            }
        }
        Ok(Self { values })
    }

    pub fn base_size(&self) -> usize {
        self.values.len()
    }

    pub fn block_size(&self) -> usize {
        self.values[0].rows()
    }

    pub fn value(&self, l: usize) -> &ComplexMatrix {
        &self.values[l]
    }

    /// Constant symbol e^{i theta} I_N: the unimodular-multiplier family.
    pub fn constant_phase(model: &PowerShiftModel, theta: f64) -> Self {
        let block = ComplexMatrix::identity(model.power()).scale(Complex64::from_polar(1.0, theta));
        Self {
            values: vec![block; model.base_size()],
        }
    }

    /// Scalar symbol (N = 1) from arbitrary unimodular grid values.
    pub fn unimodular(model: &PowerShiftModel, values: &[Complex64]) -> Result<Self> {
        if model.power() != 1 {
            return Err(Error::BadParams {
                reason: "unimodular symbols require N = 1".into(),
            });
        }
        if values.len() != model.base_size() {
            return Err(Error::dim(
                "unimodular symbol",
                values.len(),
                model.base_size(),
            ));
        }
        Self::new(
            values
                .iter()
                .map(|&z| ComplexMatrix::from_diag(&[z]))
                .collect(),
        )
    }
}

/// The two-block family for psi(z) = z^2 from real grid functions s, alpha,
/// beta with 0 <= s <= 1:
///
///   phi_11 = e^{i alpha} s,   phi_22 = e^{i beta} s,
///   phi_12 = phi_21 = i e^{i (alpha + beta)/2} sqrt(1 - s^2).
pub fn z2_family(
    model: &PowerShiftModel,
    s: &[f64],
    alpha: &[f64],
    beta: &[f64],
) -> Result<PhiSymbol> {
    if model.power() != 2 {
        return Err(Error::BadParams {
            reason: format!("z^2 family requires N = 2, got N = {}", model.power()),
        });
    }
    let n = model.base_size();
    if s.len() != n || alpha.len() != n || beta.len() != n {
        return Err(Error::dim("z2 family grid functions", s.len(), n));
    }
    for (index, &value) in s.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::RangeError { index, value });
        }
    }
    let values: Vec<ComplexMatrix> = (0..n)
        .map(|l| {
            let (sl, al, bl) = (s[l], alpha[l], beta[l]);
            let off = Complex64::from_polar(1.0, (al + bl) / 2.0)
                * Complex64::new(0.0, 1.0)
                * (1.0 - sl * sl).max(0.0).sqrt();
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(0, 0)] = Complex64::from_polar(sl, al);
            m[(1, 1)] = Complex64::from_polar(sl, bl);
            m[(0, 1)] = off;
            m[(1, 0)] = off;
            m
        })
        .collect();
    PhiSymbol::new(values)
}

/// The sin/cos conjugation symbol: Phi(eta) with rows
/// [sin t, cos t; cos t, -sin t] at t = Arg(eta). Pointwise a real symmetric
/// orthogonal matrix.
pub fn sincos_phi(model: &PowerShiftModel) -> Result<PhiSymbol> {
    if model.power() != 2 {
        return Err(Error::BadParams {
            reason: "sincos preset requires N = 2".into(),
        });
    }
    let values: Vec<ComplexMatrix> = (0..model.base_size())
        .map(|l| {
            let t = model.base_point(l).arg(); // Arg in (-pi, pi]
            let (s, c) = t.sin_cos();
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(0, 0)] = Complex64::new(s, 0.0);
            m[(0, 1)] = Complex64::new(c, 0.0);
            m[(1, 0)] = Complex64::new(c, 0.0);
            m[(1, 1)] = Complex64::new(-s, 0.0);
            m
        })
        .collect();
    PhiSymbol::new(values)
}

/// Constant-s drifting-phase family: s(t) = s, alpha(t) = lambda t,
/// beta(t) = -pi - lambda t, evaluated at t = Arg(eta) in (-pi, pi].
pub fn lambda_drift_phi(model: &PowerShiftModel, s: f64, lambda: f64) -> Result<PhiSymbol> {
    let n = model.base_size();
    let ts: Vec<f64> = (0..n).map(|l| model.base_point(l).arg()).collect();
    let s_grid = vec![s; n];
    let alpha: Vec<f64> = ts.iter().map(|&t| lambda * t).collect();
    let beta: Vec<f64> = ts
        .iter()
        .map(|&t| -std::f64::consts::PI - lambda * t)
        .collect();
    z2_family(model, &s_grid, &alpha, &beta)
}

/// Unitary DFT matrix F[j][k] = e^{-2 pi i j k / n} / sqrt(n).
pub fn dft_matrix(n: usize) -> ComplexMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |j, k| unit_root(n - (j * k) % n, n) * scale)
}

/// Analysis of the DFT matrix as the finite Fourier-transform analog.
#[derive(Debug, Clone, Serialize)]
pub struct DftReport {
    pub n: usize,
    /// Multiplicities of the eigenvalues (1, -1, -i, i), in that order.
    pub multiplicities: [usize; 4],
    /// Largest distance of a cluster representative to its fourth root.
    pub eigenvalue_residual: f64,
    /// Block dimensions of the conjugation family.
    pub block_dims: Vec<usize>,
    /// ||J F J - F*|| for the entrywise conjugation J.
    pub entrywise_csym_residual: f64,
    pub entrywise_is_member: bool,
}

/// Spectral analysis of F_n: eigenvalues in {1, -1, -i, i}, their
/// multiplicities, the family parametrization, and the membership of the
/// entrywise conjugation (F_n is symmetric, so J F J = conj(F) = F*).
pub fn dft_model(n: usize) -> Result<DftReport> {
    if n < 2 {
        return Err(Error::BadParams {
            reason: format!("dft model needs n >= 2, got {n}"),
        });
    }
    let f = dft_matrix(n);
    let dec = spectral_decompose_unitary(&f, DEFAULT_CLUSTER_TOL)?;
    let roots = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
    ];
    let mut multiplicities = [0usize; 4];
    let mut eigenvalue_residual: f64 = 0.0;
    for c in dec.clusters() {
        let (best, dist) = roots
            .iter()
            .enumerate()
            .map(|(i, &r)| (i, (c.xi - r).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        multiplicities[best] += c.mult;
        eigenvalue_residual = eigenvalue_residual.max(dist);
    }
    let j = Conjugation::entrywise(n);
    let entrywise_csym_residual = csymmetry_residual(&f, j.as_op())?;
    Ok(DftReport {
        n,
        multiplicities,
        eigenvalue_residual,
        block_dims: dec.multiplicities(),
        entrywise_csym_residual,
        entrywise_is_member: entrywise_csym_residual <= 1e-10,
    })
}

/// The flip fixture: H = l^2(O1) + l^2(O2) + l^2(O1) with U pointwise
/// multiplication by the grid point and C(f, g, h) = (conj h, conj g,
/// conj f). C U C = U* holds exactly, yet C moves the first-two-summands
/// subspace K: the bilateral-shift splitting is not C-invariant.
#[derive(Debug, Clone)]
pub struct FlipFixture {
    pub u: ComplexMatrix,
    pub c: Conjugation,
    pub k: Subspace,
    /// ||C U C - U*||_F, exact zero up to roundoff.
    pub csym_residual: f64,
    /// Unit vector in K whose image under C leaves K.
    pub witness: Vec<Complex64>,
    /// Distance of C(witness) to K.
    pub witness_defect: f64,
}

pub fn flip_example(n: usize, omega1: &BTreeSet<usize>) -> Result<FlipFixture> {
    if omega1.is_empty() {
        return Err(Error::BadPartition {
            reason: "Omega_1 is empty".into(),
        });
    }
    if let Some(&bad) = omega1.iter().find(|&&k| k >= n) {
        return Err(Error::BadPartition {
            reason: format!("grid index {bad} out of range for n = {n}"),
        });
    }
    let omega2: Vec<usize> = (0..n).filter(|k| !omega1.contains(k)).collect();
    if omega2.is_empty() {
        return Err(Error::BadPartition {
            reason: "Omega_2 is empty".into(),
        });
    }
    let o1: Vec<usize> = omega1.iter().copied().collect();
    let n1 = o1.len();
    let n2 = omega2.len();
    let dim = 2 * n1 + n2;

    // coordinates: [O1 | O2 | O1], each multiplied by its grid point
    let mut diag = Vec::with_capacity(dim);
    for &k in &o1 {
        diag.push(unit_root(k, n));
    }
    for &k in &omega2 {
        diag.push(unit_root(k, n));
    }
    for &k in &o1 {
        diag.push(unit_root(k, n));
    }
    let u = ComplexMatrix::from_diag(&diag);

    // flip matrix: swap the two O1 summands, fix the middle
    let mut a = ComplexMatrix::zeros(dim, dim);
    for i in 0..n1 {
        a[(i, n1 + n2 + i)] = crate::matrix::ONE;
        a[(n1 + n2 + i, i)] = crate::matrix::ONE;
    }
    for i in 0..n2 {
        a[(n1 + i, n1 + i)] = crate::matrix::ONE;
    }
    let c = Conjugation::new(a)?;
    let csym_residual = csymmetry_residual(&u, c.as_op())?;

    let k_basis =
        ComplexMatrix::from_fn(
            dim,
            n1 + n2,
            |i, j| {
                if i == j {
                    crate::matrix::ONE
                } else {
                    ZERO
                }
            },
        );
    let k = Subspace::from_basis(&k_basis)?;

    let witness = basis_vector(dim, 0); // first O1 summand
    let image = c.apply(&witness)?;
    let witness_defect = k.distance(&image);

    Ok(FlipFixture {
        u,
        c,
        k,
        csym_residual,
        witness,
        witness_defect,
    })
}

/// Largest deviation of |phi_11|^2 + |phi_21|^2 from 1 and of |phi_11| from
/// |phi_22| over the grid: the pointwise unitarity identities of a 2x2
/// symbol.
pub fn z2_unitarity_identities(phi: &PhiSymbol) -> (f64, f64) {
    let mut norm_dev: f64 = 0.0;
    let mut diag_dev: f64 = 0.0;
    for l in 0..phi.base_size() {
        let v = phi.value(l);
        let col = v[(0, 0)].norm_sqr() + v[(1, 0)].norm_sqr();
        norm_dev = norm_dev.max((col - 1.0).abs());
        diag_dev = diag_dev.max((v[(0, 0)].norm() - v[(1, 1)].norm()).abs());
    }
    (norm_dev, diag_dev)
}

/// Sort key for reports: the principal argument of a cluster representative.
pub fn cluster_argument(xi: Complex64) -> f64 {
    principal_arg(xi)
}
