//! Seeded random inputs: Ginibre density matrices, Haar unitaries, Gaussian
//! observables and real orthogonal matrices.
//!
//! Every generator comes in two flavours: a `*_with` form that draws from a
//! caller-owned RNG, and a convenience form that seeds a fresh ChaCha stream.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{adjoint, c, orthonormalize_columns, CMatrix, Hermitian, Unitary, C64};
use crate::observables::Observable;
use crate::states::DensityMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(gaussian(rng), gaussian(rng))
}

/// `rows × cols` matrix of independent standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    Array2::from_shape_simple_fn((rows, cols), || complex_gaussian(rng))
}

/// `G G^H / Tr(G G^H)` for an `n × n` Ginibre `G` (full rank almost surely).
pub fn ginibre_density_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    rank_density_with(n, n, rng)
}

/// `G G^H / Tr(G G^H)` for an `n × rank` Ginibre `G`: a random state of the
/// given rank.
pub fn rank_density_with<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    assert!(n >= 1 && (1..=n).contains(&rank), "rank must lie in 1..=n");
    let g = ginibre(n, rank, rng);
    let w = g.dot(&adjoint(&g));
    let t: f64 = w.diag().iter().map(|z| z.re).sum();
    let h = Hermitian::from_upper(w.mapv(|z| z / t)).expect("square");
    DensityMatrix::validate(h).expect("Wishart matrices are valid states")
}

pub fn random_ginibre_density(n: usize, seed: u64) -> DensityMatrix {
    ginibre_density_with(n, &mut rng(seed))
}

/// Haar-random unitary: Gram-Schmidt QR of a Ginibre matrix, with the
/// triangular factor's diagonal made positive.
pub fn unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Unitary {
    let q = orthonormalize_columns(&ginibre(n, n, rng));
    Unitary::new(q).expect("orthonormalized columns")
}

pub fn random_unitary(n: usize, seed: u64) -> Unitary {
    unitary_with(n, &mut rng(seed))
}

/// `(A + A^H)/2` for Gaussian `A`.
pub fn observable_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Observable {
    let a = ginibre(n, n, rng);
    let h = (&a + &adjoint(&a)).mapv(|z| z * 0.5);
    Observable::new(Hermitian::from_upper(h).expect("square"))
}

pub fn random_observable(n: usize, seed: u64) -> Observable {
    observable_with(n, &mut rng(seed))
}

/// Random unit vector with Gaussian components.
pub fn pure_vector_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Real orthogonal `n × n` matrix from QR of a real Gaussian matrix.
pub fn orthogonal_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Array2<f64> {
    let g = Array2::from_shape_simple_fn((n, n), || c(gaussian(rng), 0.0));
    orthonormalize_columns(&g).mapv(|z| z.re)
}
