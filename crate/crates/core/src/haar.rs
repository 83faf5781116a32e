//! Seeded random fixtures: Haar unitaries, random symmetric unitaries,
//! random subspaces. Everything is a pure function of an explicit seed
//! (ChaCha8 stream), so outputs are bitwise reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::eigen::orthonormalize_columns;
use crate::matrix::{Complex64, ComplexMatrix};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of iid standard complex Gaussians (variance 1 per entry).
pub fn complex_gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal) * inv_sqrt2,
            rng.sample::<f64, _>(StandardNormal) * inv_sqrt2,
        )
    })
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix.
///
/// Gram-Schmidt yields the unique Q whose R factor has a positive real
/// diagonal, which is exactly the phase convention Haar sampling needs.
pub fn haar_unitary_with(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    assert!(n >= 1);
    loop {
        let g = complex_gaussian(n, n, rng);
        if let Ok(q) = orthonormalize_columns(&g) {
            return q;
        }
        // a singular Gaussian sample has probability zero; retry if hit
    }
}

/// Deterministic Haar unitary for a fixed seed.
pub fn haar_unitary(n: usize, seed: u64) -> ComplexMatrix {
    haar_unitary_with(n, &mut rng_from_seed(seed))
}

/// Random symmetric unitary V = A A^t with A Haar (circular orthogonal
/// ensemble). These are the free block parameters of the conjugation family.
pub fn symmetric_unitary_with(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let a = haar_unitary_with(n, rng);
    a.matmul(&a.transpose()).expect("square")
}

pub fn symmetric_unitary(n: usize, seed: u64) -> ComplexMatrix {
    symmetric_unitary_with(n, &mut rng_from_seed(seed))
}

/// Orthonormal basis of a uniformly random `dim`-dimensional subspace of C^n.
pub fn random_subspace_basis(n: usize, dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    assert!(dim >= 1 && dim <= n);
    loop {
        let g = complex_gaussian(n, dim, rng);
        if let Ok(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

/// Unitary with a prescribed spectrum profile: distinct well-separated
/// eigenvalues with the given multiplicities, conjugated by a Haar basis.
/// Test/report fixture for exercising degenerate spectra.
pub fn unitary_with_multiplicities(mults: &[usize], rng: &mut impl Rng) -> ComplexMatrix {
    let d = mults.len();
    assert!(d >= 1);
    let n: usize = mults.iter().sum();
    // distinct arguments, jittered but kept well apart
    let mut diag = Vec::with_capacity(n);
    for (j, &m) in mults.iter().enumerate() {
        let base = 2.0 * std::f64::consts::PI * (j as f64) / (d as f64);
        let jitter: f64 = rng.random_range(-0.2..0.2) * std::f64::consts::PI / (d as f64);
        let xi = Complex64::from_polar(1.0, base + jitter);
        diag.extend(std::iter::repeat_n(xi, m));
    }
    let w = haar_unitary_with(n, rng);
    let d_mat = ComplexMatrix::from_diag(&diag);
    w.matmul(&d_mat).unwrap().matmul(&w.adjoint()).unwrap()
}
