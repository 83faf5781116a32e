//! Antilinear operators and conjugations on C^n.
//!
//! An antilinear operator is stored by the matrix `a` of the map
//! `x -> a * conj(x)`. A conjugation (antilinear, isometric, involutive) is
//! exactly such a map with `a` symmetric unitary, which is the invariant the
//! [`Conjugation`] type enforces.

use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{vec_conj, vec_inner, vec_norm, vec_scale, Complex64, ComplexMatrix};

/// Tolerance for the symmetric-unitary invariants of [`Conjugation`].
pub const CONJUGATION_TOL: f64 = 1e-10;
/// Frobenius tolerance under which two antilinear operators count as equal.
pub const OP_EQ_TOL: f64 = 1e-12;

/// The map `x -> a * conj(x)` for a square matrix `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOp {
    a: ComplexMatrix,
}

impl AntilinearOp {
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        Ok(Self { a })
    }

    /// Entrywise conjugation J on C^n (a = I).
    pub fn entrywise_conj(n: usize) -> Self {
        Self {
            a: ComplexMatrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.a.mul_vec(&vec_conj(x))
    }

    /// Matrix-level equality at the crate-wide operator tolerance.
    pub fn approx_eq(&self, other: &AntilinearOp) -> bool {
        self.dim() == other.dim() && self.a.frobenius_distance(&other.a) <= OP_EQ_TOL
    }
}

/// A linear or antilinear operator, closed under composition.
#[derive(Debug, Clone)]
pub enum Operator {
    Linear(ComplexMatrix),
    Antilinear(AntilinearOp),
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Linear(m) => m.rows(),
            Operator::Antilinear(op) => op.dim(),
        }
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        match self {
            Operator::Linear(m) => m.mul_vec(x),
            Operator::Antilinear(op) => op.apply(x),
        }
    }

    /// Composition `self . other` (apply `other` first).
    ///
    /// antilinear . antilinear = linear      A * conj(B)
    /// linear     . antilinear = antilinear  M * B
    /// antilinear . linear     = antilinear  A * conj(M)
    /// linear     . linear     = linear      M1 * M2
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        use Operator::*;
        Ok(match (self, other) {
            (Linear(m1), Linear(m2)) => Linear(m1.matmul(m2)?),
            (Linear(m), Antilinear(b)) => Antilinear(AntilinearOp::new(m.matmul(b.matrix())?)?),
            (Antilinear(a), Linear(m)) => {
                Antilinear(AntilinearOp::new(a.matrix().matmul(&m.conj())?)?)
            }
            (Antilinear(a), Antilinear(b)) => Linear(a.matrix().matmul(&b.matrix().conj())?),
        })
    }

    pub fn as_antilinear(&self) -> Option<&AntilinearOp> {
        match self {
            Operator::Antilinear(op) => Some(op),
            Operator::Linear(_) => None,
        }
    }

    pub fn as_linear(&self) -> Option<&ComplexMatrix> {
        match self {
            Operator::Linear(m) => Some(m),
            Operator::Antilinear(_) => None,
        }
    }
}

/// Residual report of the conjugation test for an antilinear operator.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugationCheck {
    pub unitary_residual: f64,
    pub symmetry_residual: f64,
    pub tol: f64,
    pub is_conjugation: bool,
}

/// Check whether `op` is a conjugation: its matrix must be unitary and
/// symmetric within `tol`.
pub fn conjugation_check(op: &AntilinearOp, tol: f64) -> ConjugationCheck {
    let unitary_residual = op.matrix().unitary_residual().expect("op matrix is square");
    let symmetry_residual = op.matrix().symmetry_residual();
    ConjugationCheck {
        unitary_residual,
        symmetry_residual,
        tol,
        is_conjugation: unitary_residual <= tol && symmetry_residual <= tol,
    }
}

/// An antilinear, isometric, involutive map: `x -> a * conj(x)` with `a`
/// symmetric unitary at [`CONJUGATION_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct Conjugation {
    op: AntilinearOp,
}

impl Conjugation {
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        let op = AntilinearOp::new(a)?;
        let check = conjugation_check(&op, CONJUGATION_TOL);
        if !check.is_conjugation {
            return Err(Error::NotConjugation {
                unitary_residual: check.unitary_residual,
                symmetry_residual: check.symmetry_residual,
            });
        }
        Ok(Self { op })
    }

    /// Entrywise conjugation on C^n.
    pub fn entrywise(n: usize) -> Self {
        Self {
            op: AntilinearOp::entrywise_conj(n),
        }
    }

    pub fn as_op(&self) -> &AntilinearOp {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.op.apply(x)
    }

    pub fn into_op(self) -> AntilinearOp {
        self.op
    }
}

/// Residual of the C-symmetry identity: `||C U C - U*||_F`, computed as
/// `||a conj(u) conj(a) - u*||_F` since the linear map C U C has matrix
/// `a conj(u) conj(a)`.
pub fn csymmetry_residual(u: &ComplexMatrix, op: &AntilinearOp) -> Result<f64> {
    if !u.is_square() {
        return Err(Error::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    if u.rows() != op.dim() {
        return Err(Error::dim("csymmetry", u.rows(), op.dim()));
    }
    let a = op.matrix();
    let cuc = a.matmul(&u.conj())?.matmul(&a.conj())?;
    Ok(cuc.frobenius_distance(&u.adjoint()))
}

/// Report of the C-symmetry test `C U C = U*`.
#[derive(Debug, Clone, Serialize)]
pub struct CsymmetryCheck {
    pub residual: f64,
    pub tol: f64,
    pub is_csymmetric: bool,
}

pub fn is_csymmetric(u: &ComplexMatrix, c: &Conjugation, tol: f64) -> Result<CsymmetryCheck> {
    let residual = csymmetry_residual(u, c.as_op())?;
    Ok(CsymmetryCheck {
        residual,
        tol,
        is_csymmetric: residual <= tol,
    })
}

/// Takagi factor of a symmetric unitary: `q` unitary with `a = q q^t`.
#[derive(Debug, Clone)]
pub struct TakagiFactor {
    pub q: ComplexMatrix,
}

/// Tolerance for accepting the input of the Takagi factorization.
pub const TAKAGI_INPUT_TOL: f64 = 1e-8;

/// Takagi factorization v = q q^t of a symmetric unitary v.
///
/// The conjugation C = v . conj fixes a real-dimension-n subspace of C^n
/// pointwise, and any orthonormal real-basis q_1..q_n of that subspace
/// assembles into a unitary q with v = q q^t. We harvest the fixed subspace
/// as the image of x -> x + C x over the candidates e_k, i e_k and
/// orthonormalize greedily. On the fixed subspace the complex inner product
/// is real, so real Gram-Schmidt already yields complex-orthonormal columns.
pub fn takagi_symmetric_unitary(v: &ComplexMatrix) -> Result<TakagiFactor> {
    let unitary_residual = v.unitary_residual()?;
    let symmetry_residual = v.symmetry_residual();
    if unitary_residual > TAKAGI_INPUT_TOL || symmetry_residual > TAKAGI_INPUT_TOL {
        return Err(Error::NotSymmetricUnitary {
            unitary_residual,
            symmetry_residual,
        });
    }
    let n = v.rows();
    // kill the antisymmetric part before harvesting fixed vectors
    let sym = v.add(&v.transpose())?.scale(Complex64::new(0.5, 0.0));

    // candidates T(e_k) = e_k + v e_k and T(i e_k) = i (e_k - v e_k)
    let mut candidates: Vec<Vec<Complex64>> = Vec::with_capacity(2 * n);
    for k in 0..n {
        let col = sym.column(k);
        let mut plus = col.clone();
        let mut minus = col;
        for (i, (p, m)) in plus.iter_mut().zip(minus.iter_mut()).enumerate() {
            let e = if i == k {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let vcol = *p;
            *p = e + vcol;
            *m = (e - vcol) * Complex64::new(0.0, 1.0);
        }
        candidates.push(plus);
        candidates.push(minus);
    }

    let mut q = ComplexMatrix::zeros(n, n);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while basis.len() < n {
        // greedy pivot: largest residual candidate, ties by insertion order
        let (best, best_norm) = candidates
            .iter()
            .enumerate()
            .map(|(k, c)| (k, vec_norm(c)))
            .fold((usize::MAX, -1.0), |acc, (k, nm)| {
                if nm > acc.1 + 1e-12 {
                    (k, nm)
                } else {
                    acc
                }
            });
        if best == usize::MAX || best_norm <= 1e-8 {
            // cannot happen for a genuine symmetric unitary
            return Err(Error::NotSymmetricUnitary {
                unitary_residual,
                symmetry_residual,
            });
        }
        let mut vnew = candidates.remove(best);
        for _ in 0..2 {
            for b in &basis {
                let coeff = vec_inner(&vnew, b);
                for (vi, bi) in vnew.iter_mut().zip(b.iter()) {
                    *vi -= coeff * bi;
                }
            }
        }
        let norm = vec_norm(&vnew);
        if norm <= 1e-8 {
            continue;
        }
        let unit = vec_scale(&vnew, Complex64::new(1.0 / norm, 0.0));
        for c in candidates.iter_mut() {
            let coeff = vec_inner(c, &unit);
            for (ci, ui) in c.iter_mut().zip(unit.iter()) {
                *ci -= coeff * ui;
            }
        }
        q.set_column(basis.len(), &unit);
        basis.push(unit);
    }
    Ok(TakagiFactor { q })
}

/// Unitary whose columns are fixed by the conjugation: C q_k = q_k.
pub fn real_basis(c: &Conjugation) -> Result<ComplexMatrix> {
    Ok(takagi_symmetric_unitary(c.matrix())?.q)
}

impl Serialize for AntilinearOp {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("AntilinearOp", 4)?;
        st.serialize_field("kind", "antilinear")?;
        st.serialize_field("rows", &self.a.rows())?;
        st.serialize_field("cols", &self.a.cols())?;
        let pairs: Vec<[f64; 2]> = self.a.data().iter().map(|z| [z.re, z.im]).collect();
        st.serialize_field("data", &pairs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for AntilinearOp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            kind: String,
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.kind != "antilinear" {
            return Err(de::Error::custom(format!(
                "expected kind \"antilinear\", got \"{}\"",
                raw.kind
            )));
        }
        let data = raw
            .data
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        let m = ComplexMatrix::new(raw.rows, raw.cols, data).map_err(de::Error::custom)?;
        AntilinearOp::new(m).map_err(de::Error::custom)
    }
}

impl Serialize for Conjugation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.op.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Conjugation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let op = AntilinearOp::deserialize(deserializer)?;
        Conjugation::new(op.matrix().clone()).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::{haar_unitary, symmetric_unitary};
    use crate::matrix::{basis_vector, vec_dist, I, ONE, ZERO};

    fn swap_conj() -> Conjugation {
        let a = ComplexMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]])
            .unwrap();
        Conjugation::new(a).unwrap()
    }

    #[test]
    fn entrywise_conj_applies() {
        let c = Conjugation::entrywise(2);
        let x = vec![Complex64::new(1.0, 1.0), Complex64::new(2.0, 0.0)];
        let y = c.apply(&x).unwrap();
        assert_eq!(y[0], Complex64::new(1.0, -1.0));
        assert_eq!(y[1], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn swap_conj_on_i_e1() {
        // hand multiplication: swap . conj (i, 0) = (0, -i)
        let c = swap_conj();
        let y = c.apply(&[I, ZERO]).unwrap();
        assert_eq!(y[0], ZERO);
        assert_eq!(y[1], -I);
    }

    #[test]
    fn antilinearity_axiom() {
        let c = Conjugation::new(symmetric_unitary(5, 11)).unwrap();
        let x: Vec<Complex64> = (0..5)
            .map(|k| Complex64::new(0.3 * k as f64 - 0.7, 0.9 - 0.2 * k as f64))
            .collect();
        let alpha = Complex64::new(-0.4, 1.3);
        let lhs = c.apply(&vec_scale(&x, alpha)).unwrap();
        let rhs = vec_scale(&c.apply(&x).unwrap(), alpha.conj());
        assert!(vec_dist(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn compose_table() {
        let n = 2;
        let j = Operator::Antilinear(AntilinearOp::entrywise_conj(n));
        // J . J -> linear identity
        let jj = j.compose(&j).unwrap();
        assert!(
            jj.as_linear()
                .unwrap()
                .frobenius_distance(&ComplexMatrix::identity(n))
                <= 1e-15
        );

        // (swap-conj) . (swap-conj) -> swap * conj(swap) = I
        let s = Operator::Antilinear(swap_conj().into_op());
        let ss = s.compose(&s).unwrap();
        assert!(
            ss.as_linear()
                .unwrap()
                .frobenius_distance(&ComplexMatrix::identity(n))
                <= 1e-15
        );

        // linear . antilinear and antilinear . linear act correctly on vectors
        let m = Operator::Linear(haar_unitary(n, 4));
        let x = vec![Complex64::new(0.2, -0.4), Complex64::new(1.0, 0.7)];
        let la = m.compose(&s).unwrap();
        let direct = m.apply(&s.apply(&x).unwrap()).unwrap();
        assert!(vec_dist(&la.apply(&x).unwrap(), &direct) <= 1e-12);
        let al = s.compose(&m).unwrap();
        let direct = s.apply(&m.apply(&x).unwrap()).unwrap();
        assert!(vec_dist(&al.apply(&x).unwrap(), &direct) <= 1e-12);
    }

    #[test]
    fn involution_for_random_conjugations() {
        for seed in 0..5 {
            let c = Conjugation::new(symmetric_unitary(4, seed)).unwrap();
            let op = Operator::Antilinear(c.into_op());
            let cc = op.compose(&op).unwrap();
            assert!(
                cc.as_linear()
                    .unwrap()
                    .frobenius_distance(&ComplexMatrix::identity(4))
                    <= 1e-10
            );
        }
    }

    #[test]
    fn conjugation_check_examples() {
        let id = AntilinearOp::entrywise_conj(3);
        assert!(conjugation_check(&id, 1e-12).is_conjugation);

        let swap = swap_conj();
        assert!(conjugation_check(swap.as_op(), 1e-12).is_conjugation);

        // a = [[0,1],[-1,0]]: C^2 = a conj(a) = -I, not a conjugation
        let skew = AntilinearOp::new(
            ComplexMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(-1.0, 0.0), (0.0, 0.0)]])
                .unwrap(),
        )
        .unwrap();
        let check = conjugation_check(&skew, 1e-9);
        assert!(!check.is_conjugation);
        assert!(check.unitary_residual <= 1e-15); // unitary but not symmetric
        assert!(check.symmetry_residual > 1.0);
        assert!(Conjugation::new(skew.matrix().clone()).is_err());
    }

    #[test]
    fn csymmetry_examples() {
        // C_s(I) is the set of all conjugations
        let c = Conjugation::new(symmetric_unitary(4, 2)).unwrap();
        let rep = is_csymmetric(&ComplexMatrix::identity(4), &c, 1e-10).unwrap();
        assert!(rep.is_csymmetric);

        // diag(1,-1) vs swap-conj: CUC = diag(-1,1) != U*
        let u = ComplexMatrix::from_diag(&[ONE, -ONE]);
        let rep = is_csymmetric(&u, &swap_conj(), 1e-9).unwrap();
        assert!(!rep.is_csymmetric);
        assert!((rep.residual - 8.0f64.sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn polarization_identity() {
        // <Cx, Cy> = <y, x>
        let c = Conjugation::new(symmetric_unitary(6, 8)).unwrap();
        let x: Vec<Complex64> = (0..6)
            .map(|k| Complex64::new(k as f64, -(k as f64) * 0.5))
            .collect();
        let y: Vec<Complex64> = (0..6)
            .map(|k| Complex64::new(1.0 - k as f64 * 0.2, 0.3))
            .collect();
        let lhs = vec_inner(&c.apply(&x).unwrap(), &c.apply(&y).unwrap());
        let rhs = vec_inner(&y, &x);
        assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn transfer_lemma() {
        // V C V* is a conjugation for unitary V
        let c = Conjugation::new(symmetric_unitary(5, 3)).unwrap();
        let v = haar_unitary(5, 14);
        let a = v
            .matmul(c.matrix())
            .unwrap()
            .matmul(&v.transpose())
            .unwrap();
        assert!(Conjugation::new(a).is_ok());
    }

    #[test]
    fn uc_product_lemma() {
        // UC is a conjugation iff C is in the symmetry family of U
        let n = 4;
        let c = Conjugation::new(symmetric_unitary(n, 21)).unwrap();
        let generic = haar_unitary(n, 22);
        let uc = Operator::Linear(generic.clone())
            .compose(&Operator::Antilinear(c.as_op().clone()))
            .unwrap();
        let uc_is_conj = conjugation_check(uc.as_antilinear().unwrap(), 1e-9).is_conjugation;
        let csym = csymmetry_residual(&generic, c.as_op()).unwrap() <= 1e-9;
        assert_eq!(uc_is_conj, csym);

        // positive instance: every conjugation is in the family of the identity
        let uc = Operator::Linear(ComplexMatrix::identity(n))
            .compose(&Operator::Antilinear(c.as_op().clone()))
            .unwrap();
        assert!(conjugation_check(uc.as_antilinear().unwrap(), 1e-9).is_conjugation);
    }

    #[test]
    fn takagi_identity_and_swap() {
        let t = takagi_symmetric_unitary(&ComplexMatrix::identity(3)).unwrap();
        assert!(t.q.frobenius_distance(&ComplexMatrix::identity(3)) <= 1e-12);

        let swap = swap_conj();
        let t = takagi_symmetric_unitary(swap.matrix()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected =
            ComplexMatrix::from_rows(&[&[(s, 0.0), (0.0, s)], &[(s, 0.0), (0.0, -s)]]).unwrap();
        assert!(t.q.frobenius_distance(&expected) <= 1e-12);
        let qqt = t.q.matmul(&t.q.transpose()).unwrap();
        assert!(qqt.frobenius_distance(swap.matrix()) <= 1e-12);
    }

    #[test]
    fn takagi_recovers_random_symmetric_unitary() {
        for seed in 0..4 {
            let v = symmetric_unitary(8, 100 + seed);
            let t = takagi_symmetric_unitary(&v).unwrap();
            assert!(t.q.unitary_residual().unwrap() <= 1e-10);
            let qqt = t.q.matmul(&t.q.transpose()).unwrap();
            assert!(qqt.frobenius_distance(&v) <= 1e-9);
        }
    }

    #[test]
    fn takagi_rejects_non_symmetric() {
        let u = haar_unitary(4, 5); // generic: not symmetric
        assert!(matches!(
            takagi_symmetric_unitary(&u),
            Err(Error::NotSymmetricUnitary { .. })
        ));
    }

    #[test]
    fn real_basis_is_fixed_pointwise() {
        // entrywise conj: Q = I is admissible and the algorithm returns it
        let q = real_basis(&Conjugation::entrywise(3)).unwrap();
        assert!(q.frobenius_distance(&ComplexMatrix::identity(3)) <= 1e-12);

        // swap conj: columns of (1/sqrt2)[[1,i],[1,-i]] are fixed
        let c = swap_conj();
        let q = real_basis(&c).unwrap();
        for k in 0..2 {
            let col = q.column(k);
            let fixed = c.apply(&col).unwrap();
            assert!(vec_dist(&fixed, &col) <= 1e-12);
        }

        // random conjugation, n = 6
        let c = Conjugation::new(symmetric_unitary(6, 55)).unwrap();
        let q = real_basis(&c).unwrap();
        assert!(q.unitary_residual().unwrap() <= 1e-10);
        for k in 0..6 {
            let col = q.column(k);
            assert!(vec_dist(&c.apply(&col).unwrap(), &col) <= 1e-9);
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let c = Conjugation::new(symmetric_unitary(3, 77)).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"kind\":\"antilinear\""));
        let back: Conjugation = serde_json::from_str(&s).unwrap();
        assert!(back.matrix().frobenius_distance(c.matrix()) == 0.0);

        // loading a non-conjugation as Conjugation fails, as AntilinearOp succeeds
        let skew = AntilinearOp::new(
            ComplexMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(-1.0, 0.0), (0.0, 0.0)]])
                .unwrap(),
        )
        .unwrap();
        let s = serde_json::to_string(&skew).unwrap();
        assert!(serde_json::from_str::<Conjugation>(&s).is_err());
        assert!(serde_json::from_str::<AntilinearOp>(&s).is_ok());

        // wrong kind tag is rejected
        let bad = s.replace("antilinear", "linear");
        assert!(serde_json::from_str::<AntilinearOp>(&bad).is_err());
    }

    #[test]
    fn apply_dimension_mismatch() {
        let c = Conjugation::entrywise(2);
        assert!(c.apply(&[ONE]).is_err());
        assert!(c.apply(&basis_vector(2, 0)).is_ok());
    }
}
