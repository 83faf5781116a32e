//! Hyperinvariant subspace lattice of a unitary matrix and the equivalence
//! with conjugation invariance.
//!
//! For a matrix unitary the hyperinvariant subspaces are exactly the 2^d
//! spectral subspaces E(Omega)H. Each is also H_mu for the counting measure
//! on Omega, and each is invariant under every member of the conjugation
//! family. Conversely a subspace invariant under every member is
//! hyperinvariant; the audit certifies the converse direction statistically
//! by hunting for a member that moves a candidate subspace.

use rand::Rng;
use serde::Serialize;

use crate::antilinear::Conjugation;
use crate::decomp::UnitarySpectralDecomposition;
use crate::eigen::operator_norm;
use crate::error::{Error, Result};
use crate::family::ConjugationParametrization;
use crate::haar::{random_subspace_basis, rng_from_seed};
use crate::matrix::ComplexMatrix;
use crate::spectral::{h_mu_subspace, AtomicMeasure, SpectralSet};
use crate::subspace::Subspace;

/// Hard cap on 2^d enumeration.
pub const MAX_LATTICE_CLUSTERS: usize = 20;
/// Cap on d for the full equivalence audit.
pub const MAX_AUDIT_CLUSTERS: usize = 6;
/// Defect above which a subspace counts as genuinely moved, well above
/// residual noise.
pub const DEFAULT_DEFECT_TOL: f64 = 1e-6;

/// One member of the hyperinvariant lattice: the spectral subspace of a
/// cluster subset, tagged with its generating measure.
#[derive(Debug, Clone)]
pub struct LatticeMember {
    pub omega: SpectralSet,
    pub subspace: Subspace,
    pub measure: AtomicMeasure,
}

/// All 2^d spectral subspaces E(Omega)H, indexed by subset bitmask.
pub fn hyperinvariant_lattice(dec: &UnitarySpectralDecomposition) -> Result<Vec<LatticeMember>> {
    let d = dec.cluster_count();
    if d > MAX_LATTICE_CLUSTERS {
        return Err(Error::TooManyClusters {
            d,
            max: MAX_LATTICE_CLUSTERS,
        });
    }
    let mut members = Vec::with_capacity(1 << d);
    for mask in 0..(1usize << d) {
        let omega = SpectralSet::from_bitmask(mask, d);
        let measure = AtomicMeasure::counting(d, &omega)?;
        let subspace = h_mu_subspace(dec, &measure);
        members.push(LatticeMember {
            omega,
            subspace,
            measure,
        });
    }
    Ok(members)
}

/// Defect `||(I - P_M) C P_M||` in operator norm: the antilinear map
/// (I - P) C P has matrix (I - P) a conj(P).
pub fn conjugation_invariance_defect(m: &Subspace, c: &Conjugation) -> Result<f64> {
    if m.ambient_dim() != c.dim() {
        return Err(Error::dim("invariance defect", m.ambient_dim(), c.dim()));
    }
    if m.is_trivial() {
        return Ok(0.0);
    }
    let p = m.projector();
    let ip = ComplexMatrix::identity(m.ambient_dim()).sub(&p)?;
    let leak = ip.matmul(c.matrix())?.matmul(&p.conj())?;
    Ok(operator_norm(&leak))
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceCheck {
    pub defect: f64,
    pub tol: f64,
    pub invariant: bool,
}

pub fn is_invariant_under_conjugation(
    m: &Subspace,
    c: &Conjugation,
    tol: f64,
) -> Result<InvarianceCheck> {
    let defect = conjugation_invariance_defect(m, c)?;
    Ok(InvarianceCheck {
        defect,
        tol,
        invariant: defect <= tol,
    })
}

/// Verdict of the sampled invariance test.
#[derive(Debug, Clone)]
pub enum InvarianceVerdict {
    /// Canonical member and all samples left the subspace in place.
    /// This is evidence, not proof: a witness may exist beyond the sample.
    InvariantAll { samples: usize, max_defect: f64 },
    /// Some member moves the subspace. `sample_index` is `None` when the
    /// canonical member is already a witness.
    Witness {
        sample_index: Option<usize>,
        defect: f64,
        conjugation: Conjugation,
    },
}

impl InvarianceVerdict {
    pub fn found_witness(&self) -> bool {
        matches!(self, InvarianceVerdict::Witness { .. })
    }
}

/// Test a subspace against the canonical member plus `samples` random
/// members, returning the first witness that moves it beyond the defect
/// threshold.
pub fn conjugation_invariance_test(
    p: &ConjugationParametrization,
    m: &Subspace,
    samples: usize,
    seed: u64,
) -> Result<InvarianceVerdict> {
    conjugation_invariance_test_with_tol(p, m, samples, seed, DEFAULT_DEFECT_TOL)
}

pub fn conjugation_invariance_test_with_tol(
    p: &ConjugationParametrization,
    m: &Subspace,
    samples: usize,
    seed: u64,
    defect_tol: f64,
) -> Result<InvarianceVerdict> {
    let mut max_defect: f64 = 0.0;

    let canonical = p.canonical_member();
    let defect = conjugation_invariance_defect(m, &canonical)?;
    if defect > defect_tol {
        return Ok(InvarianceVerdict::Witness {
            sample_index: None,
            defect,
            conjugation: canonical,
        });
    }
    max_defect = max_defect.max(defect);

    let mut rng = rng_from_seed(seed);
    for i in 0..samples {
        let c = p.sample_member_with(&mut rng);
        let defect = conjugation_invariance_defect(m, &c)?;
        if defect > defect_tol {
            return Ok(InvarianceVerdict::Witness {
                sample_index: Some(i),
                defect,
                conjugation: c,
            });
        }
        max_defect = max_defect.max(defect);
    }
    Ok(InvarianceVerdict::InvariantAll {
        samples,
        max_defect,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditConfig {
    /// Random members drawn per invariance test.
    pub samples: usize,
    /// Random non-lattice subspaces probed for witnesses.
    pub probes: usize,
    pub seed: u64,
    pub defect_tol: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            samples: 50,
            probes: 20,
            seed: 0,
            defect_tol: DEFAULT_DEFECT_TOL,
        }
    }
}

/// Audit row for one lattice member.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeVerdict {
    /// Cluster subset, as sorted indices.
    pub omega: SpectralSet,
    pub dim: usize,
    /// Spectral form E(Omega)H holds by construction.
    pub spectral_form: bool,
    /// The subspace equals H_mu for the counting measure on omega.
    pub h_mu_match: bool,
    /// No sampled member moved it.
    pub invariant: bool,
    pub max_defect: f64,
    /// Witness matrix if a member moved a lattice subspace (theorem
    /// violation; kept for diagnosis).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Conjugation>,
}

/// Audit row for one random probe subspace.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeVerdict {
    pub dim: usize,
    /// "witness" or "inconclusive"; a probe is never declared invariant.
    pub status: String,
    pub defect: f64,
    /// How many members were tried before the witness appeared (0 = the
    /// canonical member).
    pub tries: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub dim: usize,
    pub cluster_count: usize,
    pub lattice: Vec<LatticeVerdict>,
    pub probes: Vec<ProbeVerdict>,
    pub lattice_all_pass: bool,
    pub inconclusive_count: usize,
}

/// Full equivalence audit: every lattice member must be h_mu-representable
/// and invariant under sampled members; every random non-lattice subspace
/// must be moved by some member. Probes without a witness are reported as
/// inconclusive, never as invariant.
pub fn equivalence_audit(
    p: &ConjugationParametrization,
    config: &AuditConfig,
) -> Result<AuditReport> {
    let dec = p.decomposition();
    let d = dec.cluster_count();
    if d > MAX_AUDIT_CLUSTERS {
        return Err(Error::TooManyClusters {
            d,
            max: MAX_AUDIT_CLUSTERS,
        });
    }
    let n = dec.dim();
    let lattice = hyperinvariant_lattice(dec)?;

    let mut lattice_verdicts = Vec::with_capacity(lattice.len());
    for member in &lattice {
        let h_mu = h_mu_subspace(dec, &member.measure);
        let h_mu_match = h_mu.approx_eq(&member.subspace);
        let verdict = conjugation_invariance_test_with_tol(
            p,
            &member.subspace,
            config.samples,
            config.seed,
            config.defect_tol,
        )?;
        let (invariant, max_defect, witness) = match verdict {
            InvarianceVerdict::InvariantAll { max_defect, .. } => (true, max_defect, None),
            InvarianceVerdict::Witness {
                defect,
                conjugation,
                ..
            } => (false, defect, Some(conjugation)),
        };
        lattice_verdicts.push(LatticeVerdict {
            omega: member.omega.clone(),
            dim: member.subspace.dim(),
            spectral_form: true,
            h_mu_match,
            invariant,
            max_defect,
            witness,
        });
    }

    // random non-lattice probes; n = 1 has no proper nontrivial subspaces
    let mut probes = Vec::new();
    let mut inconclusive_count = 0;
    if n >= 2 {
        let mut rng = rng_from_seed(config.seed.wrapping_add(0x70b5));
        for probe_idx in 0..config.probes {
            let subspace = loop {
                let dim = rng.random_range(1..n);
                let basis = random_subspace_basis(n, dim, &mut rng);
                let s = Subspace::from_basis(&basis)?;
                if !lattice.iter().any(|m| m.subspace.approx_eq(&s)) {
                    break s;
                }
            };
            let verdict = conjugation_invariance_test_with_tol(
                p,
                &subspace,
                config.samples,
                config.seed.wrapping_add(probe_idx as u64 + 1),
                config.defect_tol,
            )?;
            match verdict {
                InvarianceVerdict::Witness {
                    sample_index,
                    defect,
                    ..
                } => probes.push(ProbeVerdict {
                    dim: subspace.dim(),
                    status: "witness".into(),
                    defect,
                    tries: sample_index.map_or(0, |i| i + 1),
                }),
                InvarianceVerdict::InvariantAll { max_defect, .. } => {
                    inconclusive_count += 1;
                    probes.push(ProbeVerdict {
                        dim: subspace.dim(),
                        status: "inconclusive".into(),
                        defect: max_defect,
                        tries: config.samples,
                    });
                }
            }
        }
    }

    let lattice_all_pass = lattice_verdicts
        .iter()
        .all(|v| v.spectral_form && v.h_mu_match && v.invariant);

    Ok(AuditReport {
        config: config.clone(),
        dim: n,
        cluster_count: d,
        lattice: lattice_verdicts,
        probes,
        lattice_all_pass,
        inconclusive_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antilinear::Conjugation;
    use crate::decomp::{spectral_decompose_unitary, DEFAULT_CLUSTER_TOL};
    use crate::haar::{rng_from_seed, unitary_with_multiplicities};
    use crate::matrix::{Complex64, ComplexMatrix, I, ONE, ZERO};

    fn param(u: &ComplexMatrix) -> ConjugationParametrization {
        ConjugationParametrization::from_unitary(u, DEFAULT_CLUSTER_TOL).unwrap()
    }

    fn span_e1(n: usize) -> Subspace {
        Subspace::from_basis(&ComplexMatrix::from_fn(n, 1, |i, _| {
            if i == 0 {
                ONE
            } else {
                ZERO
            }
        }))
        .unwrap()
    }

    #[test]
    fn invariance_defect_examples() {
        let full = Subspace::full(3);
        let c = Conjugation::new(crate::haar::symmetric_unitary(3, 1)).unwrap();
        assert!(conjugation_invariance_defect(&full, &c).unwrap() <= 1e-12);

        // span{e1} under entrywise conj: invariant
        let s = span_e1(2);
        let j = Conjugation::entrywise(2);
        assert!(conjugation_invariance_defect(&s, &j).unwrap() <= 1e-12);

        // span{e1} under swap-conj: defect exactly 1
        let swap = Conjugation::new(
            ComplexMatrix::from_rows(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]])
                .unwrap(),
        )
        .unwrap();
        let defect = conjugation_invariance_defect(&s, &swap).unwrap();
        assert!((defect - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn lattice_of_simple_and_degenerate_spectra() {
        // d = 1: exactly {0, H}
        let u = ComplexMatrix::from_diag(&[Complex64::new(0.6, 0.8); 2]);
        let dec = spectral_decompose_unitary(&u, DEFAULT_CLUSTER_TOL).unwrap();
        let lat = hyperinvariant_lattice(&dec).unwrap();
        assert_eq!(lat.len(), 2);
        assert!(lat[0].subspace.is_trivial());
        assert!(lat[1].subspace.is_full());

        // U = diag(1, i): four members 0, span e1, span e2, C^2
        let u = ComplexMatrix::from_diag(&[ONE, I]);
        let dec = spectral_decompose_unitary(&u, DEFAULT_CLUSTER_TOL).unwrap();
        let lat = hyperinvariant_lattice(&dec).unwrap();
        assert_eq!(lat.len(), 4);
        let dims: Vec<usize> = lat.iter().map(|m| m.subspace.dim()).collect();
        assert_eq!(dims, vec![0, 1, 1, 2]);
        assert!(lat[1].subspace.approx_eq(&span_e1(2)));
    }

    #[test]
    fn commutant_oracle_for_two_by_two_diagonal() {
        // brute-force oracle: a subspace is hyperinvariant iff it is
        // invariant under every matrix commuting with U. For U = diag(1, i)
        // the commutant is the diagonal algebra; for U = diag(l, l) it is
        // everything.
        let distinct = param(&ComplexMatrix::from_diag(&[ONE, I]));
        let lat = hyperinvariant_lattice(distinct.decomposition()).unwrap();
        // span{e1} is in the lattice: invariant under all diagonals, check
        assert!(lat.iter().any(|m| m.subspace.approx_eq(&span_e1(2))));

        // for the scalar diag(l, l) only the trivial members exist
        let scalar = param(&ComplexMatrix::from_diag(&[I, I]));
        let lat = hyperinvariant_lattice(scalar.decomposition()).unwrap();
        assert_eq!(lat.len(), 2);
        // and span{e1}, invariant for U itself, is NOT in the lattice
        assert!(!lat.iter().any(|m| m.subspace.approx_eq(&span_e1(2))));
    }

    #[test]
    fn multiplicity_two_eigenspace_slice_is_not_lattice() {
        // U = diag(1, i, i): span{e2} is invariant for U but not
        // hyperinvariant (a commuting matrix mixes e2 and e3)
        let u = ComplexMatrix::from_diag(&[ONE, I, I]);
        let p = param(&u);
        let lat = hyperinvariant_lattice(p.decomposition()).unwrap();
        let e2 = Subspace::from_basis(&ComplexMatrix::from_fn(3, 1, |i, _| {
            if i == 1 {
                ONE
            } else {
                ZERO
            }
        }))
        .unwrap();
        assert!(!lat.iter().any(|m| m.subspace.approx_eq(&e2)));

        // a sampled member mixes e2 and e3: witness expected quickly
        let verdict = conjugation_invariance_test(&p, &e2, 10, 7).unwrap();
        assert!(verdict.found_witness());
    }

    #[test]
    fn lattice_members_are_reducing_and_closed() {
        let mut rng = rng_from_seed(40);
        let u = unitary_with_multiplicities(&[1, 2, 2], &mut rng);
        let dec = spectral_decompose_unitary(&u, DEFAULT_CLUSTER_TOL).unwrap();
        let lat = hyperinvariant_lattice(&dec).unwrap();
        let d = dec.cluster_count();

        for m in &lat {
            // reducing: ||(I - P) U P|| and ||(I - P) U* P|| tiny
            assert!(m.subspace.invariance_defect(&u) <= 1e-10);
            assert!(m.subspace.invariance_defect(&u.adjoint()) <= 1e-10);
        }

        // closure under complement and intersection
        for m in &lat {
            let comp_omega = m.omega.complement(d);
            let comp_mask: usize = comp_omega.members().map(|j| 1 << j).sum();
            assert!(lat[comp_mask].subspace.approx_eq(&m.subspace.complement()));
        }
        for m1 in &lat {
            for m2 in &lat {
                let inter = m1.omega.intersection(&m2.omega);
                let mask: usize = inter.members().map(|j| 1 << j).sum();
                // intersection of spectral subspaces is the spectral
                // subspace of the intersection; compare via projectors
                let p1 = m1.subspace.projector();
                let p2 = m2.subspace.projector();
                let pi = lat[mask].subspace.projector();
                assert!(p1.matmul(&p2).unwrap().frobenius_distance(&pi) <= 1e-9);
            }
        }
    }

    #[test]
    fn spectral_subspaces_are_invariant_for_all_samples() {
        let mut rng = rng_from_seed(91);
        let u = unitary_with_multiplicities(&[2, 1, 1], &mut rng);
        let p = param(&u);
        let lat = hyperinvariant_lattice(p.decomposition()).unwrap();
        for m in &lat {
            let verdict = conjugation_invariance_test(&p, &m.subspace, 25, 3).unwrap();
            assert!(!verdict.found_witness());
        }
    }

    #[test]
    fn scalar_unitary_moves_every_proper_subspace() {
        // U = I: the family is all conjugations; witnesses abound
        let u = ComplexMatrix::identity(3);
        let p = param(&u);
        let s = span_e1(3);
        let verdict = conjugation_invariance_test(&p, &s, 20, 1).unwrap();
        assert!(verdict.found_witness());
    }

    #[test]
    fn audit_simple_spectrum() {
        let mut rng = rng_from_seed(17);
        let u = unitary_with_multiplicities(&[1, 1, 1], &mut rng);
        let p = param(&u);
        let report = equivalence_audit(
            &p,
            &AuditConfig {
                samples: 30,
                probes: 10,
                seed: 5,
                defect_tol: DEFAULT_DEFECT_TOL,
            },
        )
        .unwrap();
        assert_eq!(report.lattice.len(), 8);
        assert!(report.lattice_all_pass);
        assert_eq!(report.inconclusive_count, 0);
        assert!(report.probes.iter().all(|p| p.status == "witness"));
    }

    #[test]
    fn audit_identity_unitary() {
        let p = param(&ComplexMatrix::identity(3));
        let report = equivalence_audit(
            &p,
            &AuditConfig {
                samples: 20,
                probes: 8,
                seed: 2,
                defect_tol: DEFAULT_DEFECT_TOL,
            },
        )
        .unwrap();
        assert_eq!(report.lattice.len(), 2); // only 0 and H
        assert!(report.lattice_all_pass);
        assert_eq!(report.inconclusive_count, 0);
    }

    #[test]
    fn audit_two_cluster_degenerate() {
        // U = diag(1, 1, -1): lattice is {0, E_1, E_{-1}, H}
        let u = ComplexMatrix::from_diag(&[ONE, ONE, -ONE]);
        let p = param(&u);
        let lat = hyperinvariant_lattice(p.decomposition()).unwrap();
        assert_eq!(lat.len(), 4);
        let mut dims: Vec<usize> = lat.iter().map(|m| m.subspace.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![0, 1, 2, 3]);
        let report = equivalence_audit(
            &p,
            &AuditConfig {
                samples: 25,
                probes: 10,
                seed: 8,
                defect_tol: DEFAULT_DEFECT_TOL,
            },
        )
        .unwrap();
        assert!(report.lattice_all_pass);
        assert_eq!(report.inconclusive_count, 0);
    }

    #[test]
    fn audit_rejects_large_d() {
        let diag: Vec<Complex64> = (0..7)
            .map(|k| Complex64::from_polar(1.0, 0.8 * k as f64))
            .collect();
        let p = param(&ComplexMatrix::from_diag(&diag));
        assert!(matches!(
            equivalence_audit(&p, &AuditConfig::default()),
            Err(Error::TooManyClusters { .. })
        ));
    }
}
