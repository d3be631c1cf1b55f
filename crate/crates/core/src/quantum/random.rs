//! Seeded random states, unitaries and Hamiltonians.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::state::{DensityMatrix, PureState};
use crate::linalg::{inner, vec_norm, ComplexMatrix, C64};

/// A position in a tree of independent random streams.
///
/// `child(i)` derives the i-th sub-stream; the generator for a node depends
/// only on the root seed and the path to it, so work split across threads
/// draws the same numbers as a sequential run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeedStream {
    seed: u64,
    stream: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn child(self, index: u64) -> Self {
        Self {
            seed: self.seed,
            stream: splitmix(self.stream ^ splitmix(index.wrapping_add(0x632b_e59b_d9b4_e019))),
        }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

pub(crate) fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng))
}

/// Haar-random pure state: a normalized complex Gaussian vector, with the
/// global phase chosen to make the first amplitude real and non-negative.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    assert!(dim > 0, "dimension must be positive");
    if dim == 1 {
        return PureState::basis(1, 0);
    }
    loop {
        let mut v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let norm = vec_norm(&v);
        if norm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0].conj() / v[0].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        v.iter_mut().for_each(|z| *z *= phase / norm);
        v[0] = C64::new(v[0].norm(), 0.0);
        return PureState::from_unit_unchecked(v);
    }
}

/// Hilbert–Schmidt random mixed state `GG^dag / Tr(GG^dag)`.
pub fn random_density_hs<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = ginibre(rng, dim);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_matrix_unchecked(w.scale_real(1.0 / tr))
}

/// Mixed state of rank at most `rank`: `GG^dag` with `G` of shape dim x rank.
pub fn random_density_rank<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, rank, |_, _| complex_gaussian(rng));
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_matrix_unchecked(w.scale_real(1.0 / tr))
}

/// Haar-random unitary by Gram–Schmidt on Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        // two passes keep the basis orthonormal to machine precision
        for _ in 0..2 {
            for q in &cols {
                let c = inner(q, &v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = vec_norm(&v);
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// GUE-like Hermitian matrix `(G + G^dag)/2` scaled by `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> ComplexMatrix {
    let g = ginibre(rng, dim);
    (&g + &g.adjoint()).scale_real(0.5 * scale)
}
