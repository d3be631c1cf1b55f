//! Dense complex linear algebra.
//!
//! Matrices are small (a few hundred rows at most in practice) and row-major.
//! The Hermitian eigensolver is the one expensive kernel; everything built on
//! functions of Hermitian matrices (exponentials, square roots, norms) goes
//! through it.

mod eigen;
mod matrix;

pub use eigen::{
    exp_from_eig, herm_eig, herm_eig_with, mat_exp_herm, mat_sqrt_psd, mat_sqrt_psd_with,
    spectral_norm, HermitianEig, Sign,
};
pub use matrix::{inner, vec_norm, ComplexMatrix, C64};
pub(crate) use matrix::ZERO;

use crate::error::{Error, Result};

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Which factor of `S ⊗ E` survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    S,
    E,
}

/// Partial trace of an operator on `S ⊗ E`.
pub fn partial_trace(m: &ComplexMatrix, dim_s: usize, dim_e: usize, keep: Keep) -> Result<ComplexMatrix> {
    let n = dim_s * dim_e;
    if !m.is_square() || m.rows() != n || n == 0 {
        return Err(Error::dims(format!(
            "partial trace of a {}x{} matrix over {dim_s}x{dim_e}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(match keep {
        Keep::S => ComplexMatrix::from_fn(dim_s, dim_s, |a, b| {
            (0..dim_e).map(|e| m[(a * dim_e + e, b * dim_e + e)]).sum()
        }),
        Keep::E => ComplexMatrix::from_fn(dim_e, dim_e, |a, b| {
            (0..dim_s).map(|s| m[(s * dim_e + a, s * dim_e + b)]).sum()
        }),
    })
}

/// Reduced state `Tr_E |v⟩⟨v|` (or `Tr_S`) of a composite vector, without
/// forming the outer product.
pub fn partial_trace_pure(v: &[C64], dim_s: usize, dim_e: usize, keep: Keep) -> Result<ComplexMatrix> {
    if v.len() != dim_s * dim_e || v.is_empty() {
        return Err(Error::dims(format!(
            "vector of length {} is not on {dim_s}x{dim_e}",
            v.len()
        )));
    }
    Ok(match keep {
        Keep::S => ComplexMatrix::from_fn(dim_s, dim_s, |a, b| {
            (0..dim_e)
                .map(|e| v[a * dim_e + e] * v[b * dim_e + e].conj())
                .sum()
        }),
        Keep::E => ComplexMatrix::from_fn(dim_e, dim_e, |a, b| {
            (0..dim_s)
                .map(|s| v[s * dim_e + a] * v[s * dim_e + b].conj())
                .sum()
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn kron_layout_is_system_major() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = m(&[&[0.0, 5.0], &[6.0, 7.0]]);
        let k = kron(&a, &b);
        assert_eq!(k[(0, 1)], C64::new(5.0, 0.0));
        assert_eq!(k[(1, 2)], C64::new(12.0, 0.0));
        assert_eq!(k[(3, 3)], C64::new(28.0, 0.0));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = m(&[&[0.25, 0.1], &[0.1, 0.75]]);
        let b = m(&[&[0.5, 0.0, 0.0], &[0.0, 0.3, 0.0], &[0.0, 0.0, 0.2]]);
        let ab = kron(&a, &b);
        assert!((&partial_trace(&ab, 2, 3, Keep::S).unwrap() - &a).max_abs() < 1e-15);
        assert!((&partial_trace(&ab, 2, 3, Keep::E).unwrap() - &b).max_abs() < 1e-15);
        assert!(partial_trace(&ab, 3, 3, Keep::S).is_err());
    }

    #[test]
    fn pure_partial_trace_matches_dense() {
        let v: Vec<C64> = (0..6).map(|k| C64::new(k as f64, 1.0 - k as f64)).collect();
        let dense = ComplexMatrix::outer(&v, &v);
        for keep in [Keep::S, Keep::E] {
            let a = partial_trace(&dense, 2, 3, keep).unwrap();
            let b = partial_trace_pure(&v, 2, 3, keep).unwrap();
            assert!((&a - &b).max_abs() < 1e-13);
        }
    }
}
