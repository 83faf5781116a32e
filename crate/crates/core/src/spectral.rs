//! Spectral projections, elementary measures, H_mu subspaces, and the
//! lattice of atomic measures over a finite spectrum.
//!
//! A matrix unitary has finitely many eigenvalue clusters, so Borel sets
//! collapse to subsets of the cluster index set and every measure in sight is
//! atomic. The measure operations below are the standard Boolean operations
//! evaluated in that atomic setting: join is the atom-wise sum and meet the
//! atom-wise minimum.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::Serialize;

use crate::decomp::UnitarySpectralDecomposition;
use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix};
use crate::subspace::Subspace;

/// Relative mass below which an atom counts as absent.
const ATOM_EPS: f64 = 1e-12;

/// A finite model of a Borel subset of the spectrum: a set of cluster indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSet {
    members: BTreeSet<usize>,
}

impl SpectralSet {
    pub fn empty() -> Self {
        Self {
            members: BTreeSet::new(),
        }
    }

    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        Self {
            members: members.into_iter().collect(),
        }
    }

    pub fn all(d: usize) -> Self {
        Self::new(0..d)
    }

    /// Subset encoded by a bitmask over d clusters.
    pub fn from_bitmask(mask: usize, d: usize) -> Self {
        Self::new((0..d).filter(|j| mask & (1 << j) != 0))
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.members.contains(&j)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn intersection(&self, other: &SpectralSet) -> SpectralSet {
        Self {
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }

    pub fn complement(&self, d: usize) -> SpectralSet {
        Self::new((0..d).filter(|j| !self.members.contains(j)))
    }
}

impl Serialize for SpectralSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.members.iter())
    }
}

/// Finite positive measure supported on cluster indices. Zero-mass atoms are
/// never stored. Measures remember the cluster count of the decomposition
/// they refer to, so lattice operations can reject mixing incompatible ones.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    cluster_count: usize,
    atoms: BTreeMap<usize, f64>,
}

impl AtomicMeasure {
    pub fn zero(cluster_count: usize) -> Self {
        Self {
            cluster_count,
            atoms: BTreeMap::new(),
        }
    }

    pub fn new(
        cluster_count: usize,
        atoms: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (j, mass) in atoms {
            if j >= cluster_count {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    len: cluster_count,
                });
            }
            assert!(
                mass >= 0.0 && mass.is_finite(),
                "masses must be finite and >= 0"
            );
            if mass > 0.0 {
                *map.entry(j).or_insert(0.0) += mass;
            }
        }
        Ok(Self {
            cluster_count,
            atoms: map,
        })
    }

    /// Point mass at cluster j.
    pub fn point_mass(cluster_count: usize, j: usize, mass: f64) -> Result<Self> {
        Self::new(cluster_count, [(j, mass)])
    }

    /// Counting measure restricted to a spectral set.
    pub fn counting(cluster_count: usize, omega: &SpectralSet) -> Result<Self> {
        Self::new(cluster_count, omega.members().map(|j| (j, 1.0)))
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    pub fn mass(&self, j: usize) -> f64 {
        self.atoms.get(&j).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.values().sum()
    }

    pub fn support(&self) -> SpectralSet {
        SpectralSet::new(self.atoms.keys().copied())
    }

    pub fn atoms(&self) -> &BTreeMap<usize, f64> {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }
}

impl Serialize for AtomicMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        // {"atoms": {"<cluster_index>": mass}}
        struct Atoms<'a>(&'a BTreeMap<usize, f64>);
        impl Serialize for Atoms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (j, mass) in self.0 {
                    map.serialize_entry(&j.to_string(), mass)?;
                }
                map.end()
            }
        }
        let mut st = serializer.serialize_struct("AtomicMeasure", 1)?;
        st.serialize_field("atoms", &Atoms(&self.atoms))?;
        st.end()
    }
}

fn check_same_clusters(m1: &AtomicMeasure, m2: &AtomicMeasure) -> Result<()> {
    if m1.cluster_count != m2.cluster_count {
        return Err(Error::ClusterSetMismatch {
            left: m1.cluster_count,
            right: m2.cluster_count,
        });
    }
    Ok(())
}

/// Join: atom-wise sum, (m1 v m2)(atom) = m1(atom) + m2(atom).
pub fn measure_join(m1: &AtomicMeasure, m2: &AtomicMeasure) -> Result<AtomicMeasure> {
    check_same_clusters(m1, m2)?;
    let mut atoms = m1.atoms.clone();
    for (&j, &mass) in &m2.atoms {
        *atoms.entry(j).or_insert(0.0) += mass;
    }
    Ok(AtomicMeasure {
        cluster_count: m1.cluster_count,
        atoms,
    })
}

/// Meet: atom-wise minimum, the partition infimum evaluated for atomic
/// measures.
pub fn measure_meet(m1: &AtomicMeasure, m2: &AtomicMeasure) -> Result<AtomicMeasure> {
    check_same_clusters(m1, m2)?;
    let mut atoms = BTreeMap::new();
    for (&j, &mass) in &m1.atoms {
        let m = mass.min(m2.mass(j));
        if m > 0.0 {
            atoms.insert(j, m);
        }
    }
    Ok(AtomicMeasure {
        cluster_count: m1.cluster_count,
        atoms,
    })
}

/// Absolute continuity m1 << m2: support inclusion for atomic measures.
pub fn abs_continuous(m1: &AtomicMeasure, m2: &AtomicMeasure) -> Result<bool> {
    check_same_clusters(m1, m2)?;
    Ok(m1.atoms.keys().all(|j| m2.atoms.contains_key(j)))
}

/// Spectral projection E(Omega) = sum of eigenprojections over the set.
pub fn spectral_projection(
    dec: &UnitarySpectralDecomposition,
    omega: &SpectralSet,
) -> Result<ComplexMatrix> {
    let n = dec.dim();
    let d = dec.cluster_count();
    let mut e = ComplexMatrix::zeros(n, n);
    for j in omega.members() {
        if j >= d {
            return Err(Error::IndexOutOfRange { index: j, len: d });
        }
        e = e.add(&dec.eigenprojection(j)?)?;
    }
    Ok(e)
}

/// Elementary measure mu_x: mass ||P_j x||^2 at cluster j. Atoms whose
/// relative mass vanishes are dropped.
pub fn elementary_measure(
    dec: &UnitarySpectralDecomposition,
    x: &[Complex64],
) -> Result<AtomicMeasure> {
    if x.len() != dec.dim() {
        return Err(Error::dim("elementary measure", x.len(), dec.dim()));
    }
    let total: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return Ok(AtomicMeasure::zero(dec.cluster_count()));
    }
    let mut atoms = BTreeMap::new();
    for j in 0..dec.cluster_count() {
        let basis = dec.cluster_basis(j)?;
        // ||P_j x||^2 = ||B_j^* x||^2 for orthonormal columns B_j
        let coeffs = basis.adjoint().mul_vec(x)?;
        let mass: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
        if mass > ATOM_EPS * total {
            atoms.insert(j, mass);
        }
    }
    Ok(AtomicMeasure {
        cluster_count: dec.cluster_count(),
        atoms,
    })
}

/// H_mu = {x : mu_x << mu}: for an atomic spectrum this is the direct sum of
/// the eigenspaces over the support of mu, returned as an orthonormal basis.
///
/// Panics if `mu` refers to a different cluster count than `dec`.
pub fn h_mu_subspace(dec: &UnitarySpectralDecomposition, mu: &AtomicMeasure) -> Subspace {
    assert_eq!(
        mu.cluster_count(),
        dec.cluster_count(),
        "measure and decomposition must share the cluster set"
    );
    let n = dec.dim();
    let cols: Vec<Vec<Complex64>> = mu
        .support()
        .members()
        .flat_map(|j| {
            let basis = dec.cluster_basis(j).expect("support indices are in range");
            (0..basis.cols())
                .map(move |k| basis.column(k))
                .collect::<Vec<_>>()
        })
        .collect();
    if cols.is_empty() {
        return Subspace::trivial(n);
    }
    let mut m = ComplexMatrix::zeros(n, cols.len());
    for (j, col) in cols.iter().enumerate() {
        m.set_column(j, col);
    }
    Subspace::from_basis(&m).expect("cluster bases are orthonormal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{spectral_decompose_unitary, DEFAULT_CLUSTER_TOL};
    use crate::matrix::{basis_vector, I, ONE};

    fn diag_1_i_i() -> UnitarySpectralDecomposition {
        let u = ComplexMatrix::from_diag(&[ONE, I, I]);
        spectral_decompose_unitary(&u, DEFAULT_CLUSTER_TOL).unwrap()
    }

    #[test]
    fn projection_empty_and_full() {
        let dec = diag_1_i_i();
        let d = dec.cluster_count();
        let zero = spectral_projection(&dec, &SpectralSet::empty()).unwrap();
        assert_eq!(zero.frobenius_norm(), 0.0);
        let full = spectral_projection(&dec, &SpectralSet::all(d)).unwrap();
        assert!(full.frobenius_distance(&ComplexMatrix::identity(3)) <= 1e-12);
    }

    #[test]
    fn projection_of_i_cluster() {
        let dec = diag_1_i_i();
        // cluster of eigenvalue i: index 1 (ordering by principal argument)
        let p = spectral_projection(&dec, &SpectralSet::new([1])).unwrap();
        let expected = ComplexMatrix::from_diag(&[Complex64::new(0.0, 0.0), ONE, ONE]);
        assert!(p.frobenius_distance(&expected) <= 1e-12);
    }

    #[test]
    fn projection_rejects_bad_index() {
        let dec = diag_1_i_i();
        assert!(matches!(
            spectral_projection(&dec, &SpectralSet::new([7])),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn elementary_measure_rejects_wrong_dimension() {
        let dec = diag_1_i_i();
        assert!(matches!(
            elementary_measure(&dec, &[ONE, ONE]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn elementary_measure_examples() {
        let dec = diag_1_i_i();

        let zero = elementary_measure(&dec, &[Complex64::new(0.0, 0.0); 3]).unwrap();
        assert!(zero.is_zero());

        let e1 = elementary_measure(&dec, &basis_vector(3, 0)).unwrap();
        assert_eq!(e1.support().len(), 1);
        assert!((e1.mass(0) - 1.0).abs() <= 1e-14);

        let x = vec![
            Complex64::new(0.3, -0.1),
            Complex64::new(0.0, 0.8),
            Complex64::new(-0.5, 0.2),
        ];
        let mu = elementary_measure(&dec, &x).unwrap();
        let m1 = x[0].norm_sqr();
        let m2 = x[1].norm_sqr() + x[2].norm_sqr();
        assert!((mu.mass(0) - m1).abs() <= 1e-12);
        assert!((mu.mass(1) - m2).abs() <= 1e-12);
        assert!((mu.total_mass() - (m1 + m2)).abs() <= 1e-10);
    }

    #[test]
    fn h_mu_examples() {
        let dec = diag_1_i_i();

        let zero = h_mu_subspace(&dec, &AtomicMeasure::zero(dec.cluster_count()));
        assert!(zero.is_trivial());

        let everywhere =
            AtomicMeasure::counting(dec.cluster_count(), &SpectralSet::all(dec.cluster_count()))
                .unwrap();
        assert!(h_mu_subspace(&dec, &everywhere).is_full());

        // mu = point mass at eigenvalue i -> span{e2, e3}
        let delta_i = AtomicMeasure::point_mass(dec.cluster_count(), 1, 1.0).unwrap();
        let h = h_mu_subspace(&dec, &delta_i);
        assert_eq!(h.dim(), 2);
        // brute-force membership oracle over the standard basis: x in H_mu
        // iff mu_x << mu
        for k in 0..3 {
            let x = basis_vector(3, k);
            let mu_x = elementary_measure(&dec, &x).unwrap();
            let member = abs_continuous(&mu_x, &delta_i).unwrap();
            let geometric = h.distance(&x) <= 1e-10;
            assert_eq!(member, geometric, "basis vector {k}");
        }
    }

    #[test]
    #[should_panic(expected = "share the cluster set")]
    fn h_mu_rejects_foreign_measure() {
        let dec = diag_1_i_i();
        let foreign = AtomicMeasure::point_mass(7, 3, 1.0).unwrap();
        let _ = h_mu_subspace(&dec, &foreign);
    }

    #[test]
    fn lattice_examples() {
        let zero = AtomicMeasure::zero(3);
        let m = AtomicMeasure::new(3, [(0, 2.0), (1, 3.0)]).unwrap();
        assert!(measure_meet(&m, &zero).unwrap().is_zero());

        let j = measure_join(
            &AtomicMeasure::point_mass(3, 0, 2.0).unwrap(),
            &AtomicMeasure::point_mass(3, 0, 3.0).unwrap(),
        )
        .unwrap();
        assert!((j.mass(0) - 5.0).abs() <= 1e-15);

        // meet({0:2, 1:3}, {0:1}) = {0:1}; oracle: enumerate the two-atom
        // partitions {A, complement} and take the infimum
        let m2 = AtomicMeasure::point_mass(3, 0, 1.0).unwrap();
        let meet = measure_meet(&m, &m2).unwrap();
        let mut inf = f64::INFINITY;
        for mask in 0..4usize {
            // measure of (Omega cap A) under m plus (Omega minus A) under m2,
            // Omega = {0, 1}
            let mut v = 0.0;
            for atom in [0usize, 1] {
                if mask & (1 << atom) != 0 {
                    v += m.mass(atom);
                } else {
                    v += m2.mass(atom);
                }
            }
            inf = inf.min(v);
        }
        assert!((meet.total_mass() - inf).abs() <= 1e-15);
        assert!((meet.mass(0) - 1.0).abs() <= 1e-15);
        assert_eq!(meet.mass(1), 0.0);
    }

    #[test]
    fn abs_continuity_examples() {
        let zero = AtomicMeasure::zero(2);
        let any = AtomicMeasure::new(2, [(0, 0.1), (1, 9.0)]).unwrap();
        assert!(abs_continuous(&zero, &any).unwrap());

        let m1 = AtomicMeasure::point_mass(2, 0, 5.0).unwrap();
        assert!(abs_continuous(&m1, &any).unwrap());

        let both = AtomicMeasure::new(2, [(0, 1.0), (1, 1.0)]).unwrap();
        let only0 = AtomicMeasure::point_mass(2, 0, 1.0).unwrap();
        assert!(!abs_continuous(&both, &only0).unwrap());

        let other = AtomicMeasure::zero(3);
        assert!(matches!(
            abs_continuous(&any, &other),
            Err(Error::ClusterSetMismatch { .. })
        ));
    }

    #[test]
    fn projection_lattice_identity() {
        // E(O1) E(O2) = E(O1 cap O2), full enumeration for d = 3
        let dec = {
            let u = ComplexMatrix::from_diag(&[ONE, I, -ONE, I, -I]);
            spectral_decompose_unitary(&u, DEFAULT_CLUSTER_TOL).unwrap()
        };
        let d = dec.cluster_count();
        assert_eq!(d, 4);
        for mask1 in 0..(1usize << d) {
            for mask2 in 0..(1usize << d) {
                let o1 = SpectralSet::from_bitmask(mask1, d);
                let o2 = SpectralSet::from_bitmask(mask2, d);
                let e1 = spectral_projection(&dec, &o1).unwrap();
                let e2 = spectral_projection(&dec, &o2).unwrap();
                let inter = spectral_projection(&dec, &o1.intersection(&o2)).unwrap();
                assert!(e1.matmul(&e2).unwrap().frobenius_distance(&inter) <= 1e-10);
            }
        }
    }

    #[test]
    fn measure_json_schema() {
        let m = AtomicMeasure::new(4, [(0, 1.5), (2, 0.25)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"atoms":{"0":1.5,"2":0.25}}"#);
    }
}
