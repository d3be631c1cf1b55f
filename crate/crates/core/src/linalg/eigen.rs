use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// Spectral decomposition `A = V diag(λ) V^dag` of a Hermitian matrix.
///
/// Eigenvalues are ascending; column `j` of `eigenvectors` belongs to
/// `eigenvalues[j]`. Each eigenvector is phase-fixed so that its first
/// largest-modulus component is real and positive, which makes the basis
/// reproducible across runs.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// Which exponential [`mat_exp_herm`] computes: `e^{-iHt}` or `e^{+iHt}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

impl HermitianEig {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, j: usize) -> Vec<C64> {
        self.eigenvectors.column(j)
    }

    /// `V diag(f(λ)) V^dag`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let scaled = ComplexMatrix::from_fn(n, n, |i, j| v[(i, j)] * weights[j]);
        &scaled * &v.adjoint()
    }

    /// `max |(V diag(λ) V^dag - A)_ij|`.
    pub fn reconstruction_error(&self, a: &ComplexMatrix) -> f64 {
        (&self.map(|l| C64::new(l, 0.0)) - a).max_abs()
    }
}

/// Hermitian eigendecomposition with default tolerances.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    herm_eig_with(a, &Tolerances::default())
}

/// Hermitian eigendecomposition.
///
/// The matrix is first split into the connected components of its nonzero
/// pattern; each component is an independent eigenproblem. Dense input is a
/// single component, while Hamiltonians with a conserved quantity (the
/// Jaynes–Cummings model has 2x2 excitation blocks) decompose into many small
/// ones. Each block goes through nalgebra's Householder/QR solver.
pub fn herm_eig_with(a: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEig> {
    a.ensure_hermitian(tol.hermitian)?;
    let n = a.dim();
    let h = a.hermitian_part();

    // (eigenvalue, block leading index, sparse eigenvector)
    type Pair = (f64, usize, Vec<(usize, C64)>);
    let mut pairs: Vec<Pair> = Vec::with_capacity(n);
    for block in components(&h) {
        let m = block.len();
        if m == 1 {
            let i = block[0];
            pairs.push((h[(i, i)].re, i, vec![(i, C64::new(1.0, 0.0))]));
            continue;
        }
        let sub = DMatrix::<C64>::from_fn(m, m, |r, c| h[(block[r], block[c])]);
        let eig = sub
            .try_symmetric_eigen(f64::EPSILON, 0)
            .ok_or(Error::NoConvergence(m))?;
        for k in 0..m {
            let col: Vec<(usize, C64)> = (0..m)
                .map(|r| (block[r], eig.eigenvectors[(r, k)]))
                .collect();
            pairs.push((eig.eigenvalues[k], block[0], col));
        }
    }
    // Ascending eigenvalue; ties ordered by the block's leading index.
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    let mut vecs = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (j, (lambda, _, col)) in pairs.into_iter().enumerate() {
        let phase = phase_fix(&col);
        for (i, z) in col {
            vecs[(i, j)] = z * phase;
        }
        values.push(lambda);
    }
    Ok(HermitianEig {
        eigenvalues: values,
        eigenvectors: vecs,
    })
}

/// Connected components of the graph with an edge wherever `h_ij != 0`.
fn components(h: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = h.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if h[(i, j)] != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn phase_fix(col: &[(usize, C64)]) -> C64 {
    let mut best = ZERO;
    let mut best_abs = -1.0;
    for (_, z) in col {
        // strict comparison keeps the first of several equal-modulus entries
        if z.norm() > best_abs * (1.0 + 1e-12) {
            best_abs = z.norm();
            best = *z;
        }
    }
    if best_abs > 0.0 {
        best.conj() / best_abs
    } else {
        C64::new(1.0, 0.0)
    }
}

/// `e^{∓iHt}` computed as `V diag(e^{∓iλt}) V^dag`.
pub fn mat_exp_herm(h: &ComplexMatrix, t: f64, sign: Sign) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(exp_from_eig(&herm_eig(h)?, t, sign))
}

pub fn exp_from_eig(eig: &HermitianEig, t: f64, sign: Sign) -> ComplexMatrix {
    let s = match sign {
        Sign::Minus => -1.0,
        Sign::Plus => 1.0,
    };
    eig.map(|l| C64::from_polar(1.0, s * l * t))
}

/// Principal square root of a positive semidefinite matrix.
pub fn mat_sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    mat_sqrt_psd_with(a, &Tolerances::default())
}

pub fn mat_sqrt_psd_with(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = herm_eig_with(a, tol)?;
    let scale = a.max_abs().max(1.0);
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol.psd_reject * scale {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.map(|l| C64::new(l.max(0.0).sqrt(), 0.0)))
}

/// Largest singular value.
///
/// Hermitian input uses `max |λ|` directly; anything else goes through the
/// eigenvalues of `A^dag A`.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if !a.is_square() {
        return Err(Error::dims(format!(
            "spectral norm needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    if a.hermitian_defect() <= 1e-14 * scale {
        let eig = herm_eig(a)?;
        return Ok(eig.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs())));
    }
    // Normalizing first keeps A^dag A well inside the exponent range.
    let b = a.scale_real(1.0 / scale);
    let gram = (&b.adjoint() * &b).hermitian_part();
    let top = herm_eig(&gram)?.eigenvalues.last().copied().unwrap_or(0.0);
    Ok(top.max(0.0).sqrt() * scale)
}
