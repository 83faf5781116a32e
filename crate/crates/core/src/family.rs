//! The family of conjugations C with C U C = U* for a fixed unitary U.
//!
//! With U = W diag(xi_j I_{n_j}) W*, the members are exactly
//! C = W blockdiag(V_1..V_d) J W* with each V_j an n_j x n_j symmetric
//! unitary and J the entrywise conjugation; the antilinear matrix of such a
//! member is a = W blockdiag(V_j) W^t. This module builds members from
//! blocks, samples them, recovers blocks from members, and provides the
//! commutant-form test, the U = J1 J2 factorization, and the spectral
//! commutation check.

use rand::Rng;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::antilinear::{AntilinearOp, Conjugation};
use crate::decomp::{spectral_decompose_unitary, UnitarySpectralDecomposition, UNITARY_INPUT_TOL};
use crate::error::{Error, Result};
use crate::haar::{rng_from_seed, symmetric_unitary_with};
use crate::matrix::ComplexMatrix;

/// Frobenius tolerance for the symmetric-unitary invariant of blocks.
pub const BLOCK_TOL: f64 = 1e-9;
/// Off-block-diagonal mass beyond which a conjugation is not a member.
pub const MEMBER_TOL: f64 = 1e-9;

/// The d free blocks of a family member, the j-th of size n_j x n_j.
#[derive(Debug, Clone)]
pub struct BlockList {
    blocks: Vec<ComplexMatrix>,
}

impl BlockList {
    /// Validates every block as symmetric unitary at [`BLOCK_TOL`].
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        for (index, b) in blocks.iter().enumerate() {
            let unitary_residual = b.unitary_residual()?;
            let symmetry_residual = b.symmetry_residual();
            if unitary_residual > BLOCK_TOL || symmetry_residual > BLOCK_TOL {
                return Err(Error::InvalidBlock {
                    index,
                    unitary_residual,
                    symmetry_residual,
                });
            }
        }
        Ok(Self { blocks })
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self {
            blocks: dims.iter().map(|&n| ComplexMatrix::identity(n)).collect(),
        }
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.rows()).collect()
    }
}

impl Serialize for BlockList {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.blocks.len()))?;
        for b in &self.blocks {
            seq.serialize_element(b)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for BlockList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<ComplexMatrix>::deserialize(d)?;
        BlockList::new(blocks).map_err(serde::de::Error::custom)
    }
}

/// Complete parametrization of the conjugation family of one unitary.
#[derive(Debug, Clone)]
pub struct ConjugationParametrization {
    u: ComplexMatrix,
    dec: UnitarySpectralDecomposition,
}

impl ConjugationParametrization {
    pub fn from_unitary(u: &ComplexMatrix, cluster_tol: f64) -> Result<Self> {
        let dec = spectral_decompose_unitary(u, cluster_tol)?;
        Ok(Self { u: u.clone(), dec })
    }

    pub fn new(u: ComplexMatrix, dec: UnitarySpectralDecomposition) -> Self {
        Self { u, dec }
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn decomposition(&self) -> &UnitarySpectralDecomposition {
        &self.dec
    }

    pub fn dim(&self) -> usize {
        self.dec.dim()
    }

    /// One block dimension per eigenvalue cluster.
    pub fn block_dims(&self) -> Vec<usize> {
        self.dec.multiplicities()
    }

    /// Member built from explicit blocks: a = W blockdiag(V_j) W^t.
    pub fn build_from_blocks(&self, blocks: &BlockList) -> Result<Conjugation> {
        let expected = self.block_dims();
        let given = blocks.dims();
        if given != expected {
            return Err(Error::BlockDimsMismatch { given, expected });
        }
        let w = self.dec.w();
        let inner = ComplexMatrix::block_diag(blocks.blocks());
        let a = w.matmul(&inner)?.matmul(&w.transpose())?;
        Conjugation::new(a)
    }

    /// The canonical member: all blocks identity, a = W W^t.
    pub fn canonical_member(&self) -> Conjugation {
        self.build_from_blocks(&BlockList::identity(&self.block_dims()))
            .expect("identity blocks are symmetric unitary")
    }

    /// Random member with independent Haar-induced blocks V_j = A_j A_j^t.
    pub fn sample_member_with(&self, rng: &mut impl Rng) -> Conjugation {
        let blocks: Vec<ComplexMatrix> = self
            .block_dims()
            .iter()
            .map(|&n| symmetric_unitary_with(n, rng))
            .collect();
        self.build_from_blocks(&BlockList::new(blocks).expect("sampled blocks are valid"))
            .expect("sampled member construction cannot fail")
    }

    /// Deterministic random member for a fixed seed.
    pub fn sample_member(&self, seed: u64) -> Conjugation {
        self.sample_member_with(&mut rng_from_seed(seed))
    }

    /// Recover the blocks of a member: M = W* a conj(W) must be block
    /// diagonal with symmetric unitary blocks.
    ///
    /// The reported off-block mass is the Frobenius norm of the strictly
    /// upper off-block entries of M; M is symmetric whenever `c` is a
    /// conjugation, so the lower entries carry the same mass.
    pub fn extract_blocks(&self, c: &Conjugation) -> Result<BlockList> {
        if c.dim() != self.dim() {
            return Err(Error::dim("extract_blocks", c.dim(), self.dim()));
        }
        let w = self.dec.w();
        let m = w.adjoint().matmul(c.matrix())?.matmul(&w.conj())?;

        let dims = self.block_dims();
        let mut off_mass_sq = 0.0;
        let mut blocks = Vec::with_capacity(dims.len());
        let mut offset = 0;
        for &nj in &dims {
            let mut b = ComplexMatrix::zeros(nj, nj);
            for i in 0..nj {
                for j in 0..nj {
                    b[(i, j)] = m[(offset + i, offset + j)];
                }
            }
            // strictly upper off-block entries to the right of this block
            for i in offset..offset + nj {
                for j in offset + nj..self.dim() {
                    off_mass_sq += m[(i, j)].norm_sqr();
                }
            }
            blocks.push(b);
            offset += nj;
        }
        let off_block_mass = off_mass_sq.sqrt();
        if off_block_mass > MEMBER_TOL {
            return Err(Error::NotMember { off_block_mass });
        }
        BlockList::new(blocks)
    }

    /// Whether `c` belongs to the family, with the off-block diagnostic.
    pub fn membership(&self, c: &Conjugation) -> Result<MembershipReport> {
        match self.extract_blocks(c) {
            Ok(blocks) => Ok(MembershipReport {
                is_member: true,
                off_block_mass: 0.0,
                blocks: Some(blocks),
            }),
            Err(Error::NotMember { off_block_mass }) => Ok(MembershipReport {
                is_member: false,
                off_block_mass,
                blocks: None,
            }),
            Err(e) => Err(e),
        }
    }

    /// Factor the unitary as J1 J2 with J1 the canonical member and
    /// J2 = U* J1; both land in the family.
    pub fn factor(&self) -> Result<(Conjugation, Conjugation)> {
        let j1 = self.canonical_member();
        let a2 = self.u.adjoint().matmul(j1.matrix())?;
        let j2 = Conjugation::new(a2)?;
        Ok((j1, j2))
    }

    /// Residual table of a member candidate against this family's unitary.
    pub fn member_residuals(&self, c: &Conjugation) -> Result<MemberResiduals> {
        let csym = crate::antilinear::csymmetry_residual(&self.u, c.as_op())?;
        let a = c.matrix();
        let involution = a
            .matmul(&a.conj())?
            .frobenius_distance(&ComplexMatrix::identity(self.dim()));
        let isometry = a.unitary_residual()?;
        Ok(MemberResiduals {
            csymmetry: csym,
            involution,
            isometry,
        })
    }
}

/// Residuals of the three defining identities of a family member.
#[derive(Debug, Clone, Serialize)]
pub struct MemberResiduals {
    /// ||C U C - U*||_F
    pub csymmetry: f64,
    /// ||C^2 - I||_F
    pub involution: f64,
    /// ||a* a - I||_F (isometry of the antilinear map)
    pub isometry: f64,
}

impl MemberResiduals {
    pub fn max(&self) -> f64 {
        self.csymmetry.max(self.involution).max(self.isometry)
    }
}

#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub is_member: bool,
    pub off_block_mass: f64,
    pub blocks: Option<BlockList>,
}

/// Commutant-form conditions for C = V J_B in the orthonormal basis B:
/// `[V]_B` symmetric and `[V]_B [U]_B^t = [U]_B [V]_B`. Their conjunction is
/// equivalent to C U C = U*.
#[derive(Debug, Clone, Serialize)]
pub struct CommutantReport {
    pub symmetric_ok: bool,
    pub intertwine_ok: bool,
    pub symmetric_residual: f64,
    pub intertwine_residual: f64,
}

impl CommutantReport {
    pub fn both(&self) -> bool {
        self.symmetric_ok && self.intertwine_ok
    }
}

/// Evaluate the commutant conditions of an antilinear operator against a
/// unitary, in the given orthonormal basis (columns of `basis`).
///
/// V is the linear operator C composed with the basis conjugation J_B, whose
/// matrix in B is `B* a conj(B)`.
pub fn commutant_conditions(
    u: &ComplexMatrix,
    op: &AntilinearOp,
    basis: &ComplexMatrix,
    tol: f64,
) -> Result<CommutantReport> {
    let n = op.dim();
    if u.rows() != n || u.cols() != n || basis.rows() != n || basis.cols() != n {
        return Err(Error::dim("commutant_conditions", u.rows(), n));
    }
    let basis_residual = basis.unitary_residual()?;
    if basis_residual > UNITARY_INPUT_TOL {
        return Err(Error::NotUnitary {
            residual: basis_residual,
            tol: UNITARY_INPUT_TOL,
        });
    }
    let v_b = basis.adjoint().matmul(op.matrix())?.matmul(&basis.conj())?;
    let u_b = basis.adjoint().matmul(u)?.matmul(basis)?;

    let symmetric_residual = v_b.symmetry_residual();
    let left = v_b.matmul(&u_b.transpose())?;
    let right = u_b.matmul(&v_b)?;
    let intertwine_residual = left.frobenius_distance(&right);

    Ok(CommutantReport {
        symmetric_ok: symmetric_residual <= tol,
        intertwine_ok: intertwine_residual <= tol,
        symmetric_residual,
        intertwine_residual,
    })
}

/// Factor a unitary as a product of two conjugations: U = J1 J2 with
/// J1 the canonical family member and J2 = U* J1. Both factors land in the
/// family of U.
pub fn factor_unitary(u: &ComplexMatrix) -> Result<(Conjugation, Conjugation)> {
    ConjugationParametrization::from_unitary(u, crate::decomp::DEFAULT_CLUSTER_TOL)?.factor()
}

/// Transport a conjugation along a unitary: W C W*, with antilinear matrix
/// w a w^t. Maps the family of U onto the family of W U W*.
pub fn transport_family(w: &ComplexMatrix, c: &Conjugation) -> Result<Conjugation> {
    let residual = w.unitary_residual()?;
    if residual > UNITARY_INPUT_TOL {
        return Err(Error::NotUnitary {
            residual,
            tol: UNITARY_INPUT_TOL,
        });
    }
    let a = w.matmul(c.matrix())?.matmul(&w.transpose())?;
    Conjugation::new(a)
}

/// Spectral commutation report: C E C = E for every cluster projection E
/// (equivalently every spectral subset, by additivity).
#[derive(Debug, Clone, Serialize)]
pub struct SpectralCommutationReport {
    pub max_residual: f64,
    pub tol: f64,
    pub commutes: bool,
}

pub fn check_spectral_commutation(
    dec: &UnitarySpectralDecomposition,
    c: &Conjugation,
    tol: f64,
) -> Result<SpectralCommutationReport> {
    if c.dim() != dec.dim() {
        return Err(Error::dim("spectral commutation", c.dim(), dec.dim()));
    }
    let a = c.matrix();
    let mut max_residual: f64 = 0.0;
    for j in 0..dec.cluster_count() {
        let e = dec.eigenprojection(j)?;
        // C E C is linear with matrix a conj(E) conj(a)
        let cec = a.matmul(&e.conj())?.matmul(&a.conj())?;
        max_residual = max_residual.max(cec.frobenius_distance(&e));
    }
    Ok(SpectralCommutationReport {
        max_residual,
        tol,
        commutes: max_residual <= tol,
    })
}
