//! Dense complex linear algebra: Hermitian eigendecomposition, matrix
//! exponentials of Hermitian generators, principal logarithms of unitary
//! matrices, and the norm / unitarity diagnostics the rest of the crate is
//! built on.
//!
//! Matrices are dense [`CMatrix`] values (`ndarray::Array2<Complex64>`).
//! Everything here is a pure function over immutable inputs; all tolerances
//! are module constants with `_with_tol` variants for per-call override.

use nalgebra::DMatrix;
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major logical order.
pub type CMatrix = Array2<C64>;

/// Default tolerance for Hermiticity checks.
pub const DEFAULT_HERMITICITY_TOL: f64 = 1e-9;
/// Default tolerance for unitarity checks.
pub const DEFAULT_UNITARITY_TOL: f64 = 1e-8;
/// Eigenphases within this distance of −π are resolved to the +π side of the
/// principal branch (−π, π].
pub const BRANCH_BOUNDARY: f64 = 1e-12;
/// Gap below which eigenvalues of the Hermitian part of a unitary are treated
/// as one degenerate cluster during joint diagonalization.
const CLUSTER_GAP: f64 = 1e-7;

/// d × d identity.
pub fn identity(d: usize) -> CMatrix {
    Array2::from_shape_fn((d, d), |(i, j)| {
        if i == j {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Conjugate transpose.
pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    ndarray::linalg::kron(a, b)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entrywise difference |a − b|.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Largest entrywise difference after aligning the global phase of `a` to
/// `b` (phase from arg tr(a†b)); circuit equality is always tested this way.
pub fn max_abs_diff_mod_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..a.nrows() {
            acc += a[[k, i]].conj() * b[[k, i]];
        }
        tr += acc;
    }
    if tr.norm() < 1e-300 {
        return max_abs_diff(a, b);
    }
    let phase = C64::from_polar(1.0, tr.arg());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x * phase - y).norm()))
}

/// max |m − m†|.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    worst
}

/// max |m†m − I|.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    let g = adjoint(m).dot(m);
    let mut worst: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[[i, j]] - C64::new(expect, 0.0)).norm());
        }
    }
    worst
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.nrows() == m.ncols() && hermiticity_residual(m) <= tol * max_abs(m).max(1.0)
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.nrows() == m.ncols() && unitarity_residual(m) <= tol
}

/// Spectral decomposition H = V · diag(λ) · V† of a Hermitian matrix.
///
/// Eigenvalues are real and ascending; eigenvector columns are orthonormal.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Array1<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    /// V · diag(λ) · V†.
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..d {
            let lam = C64::new(self.eigenvalues[j], 0.0);
            for i in 0..d {
                scaled[[i, j]] *= lam;
            }
        }
        scaled.dot(&adjoint(&self.eigenvectors))
    }

    /// V · diag(e^{−i·s·λ}) · V†, the evolution operator generated by the
    /// decomposed Hamiltonian at phase s.
    pub fn evolution_operator(&self, s: f64) -> CMatrix {
        let d = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..d {
            let ph = C64::from_polar(1.0, -s * self.eigenvalues[j]);
            for i in 0..d {
                scaled[[i, j]] *= ph;
            }
        }
        scaled.dot(&adjoint(&self.eigenvectors))
    }

    /// Apply e^{−i·s·H} to a vector without materializing the operator:
    /// V · (e^{−isλ} ∘ (V†ψ)).
    pub fn evolve_vector(&self, s: f64, psi: &[C64]) -> Vec<C64> {
        let d = self.eigenvalues.len();
        debug_assert_eq!(psi.len(), d);
        let v = &self.eigenvectors;
        let mut coeffs = vec![C64::new(0.0, 0.0); d];
        for j in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..d {
                acc += v[[i, j]].conj() * psi[i];
            }
            coeffs[j] = acc * C64::from_polar(1.0, -s * self.eigenvalues[j]);
        }
        let mut out = vec![C64::new(0.0, 0.0); d];
        for i in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..d {
                acc += v[[i, j]] * coeffs[j];
            }
            out[i] = acc;
        }
        out
    }
}

/// Eigendecompose a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(h: &CMatrix) -> Result<EigenDecomposition> {
    eig_hermitian_with_tol(h, DEFAULT_HERMITICITY_TOL)
}

pub fn eig_hermitian_with_tol(h: &CMatrix, tol: f64) -> Result<EigenDecomposition> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch {
            left: h.nrows(),
            right: h.ncols(),
        });
    }
    let residual = hermiticity_residual(h);
    if residual > tol * max_abs(h).max(1.0) {
        return Err(Error::NotHermitian { residual, tol });
    }
    let d = h.nrows();
    // Symmetrize exactly before handing off, so roundoff in the caller's
    // matrix cannot leak a non-Hermitian part into the solver.
    let m = DMatrix::from_fn(d, d, |i, j| (h[[i, j]] + h[[j, i]].conj()) * 0.5);
    let eig = nalgebra::linalg::SymmetricEigen::try_new(m, f64::EPSILON, 200 * d.max(8))
        .ok_or(Error::NonConvergence)?;

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

    let eigenvalues = Array1::from_iter(order.iter().map(|&j| eig.eigenvalues[j]));
    let eigenvectors = Array2::from_shape_fn((d, d), |(i, j)| eig.eigenvectors[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// e^{−i·s·h} for Hermitian h via the spectral route.
pub fn expm_i_hermitian(h: &CMatrix, s: f64) -> Result<CMatrix> {
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("phase s = {s} not finite")));
    }
    Ok(eig_hermitian(h)?.evolution_operator(s))
}

/// Principal logarithm of a unitary: the Hermitian L with u = e^{iL} and all
/// eigenphases of u in (−π, π], the −π/+π boundary resolved to +π.
///
/// u is normal, so it is diagonalized jointly through its commuting Hermitian
/// parts C = (u+u†)/2 and S = (u−u†)/(2i): eigenvectors come from C, with
/// degenerate C-clusters split by diagonalizing S restricted to the cluster.
/// This keeps conjugate eigenphase pairs (equal cosine, opposite sine) apart
/// without perturbing the input, which matters here because the spectra of
/// hypercube walks are heavily degenerate.
pub fn logm_unitary_principal(u: &CMatrix) -> Result<CMatrix> {
    logm_unitary_principal_with_tol(u, DEFAULT_UNITARITY_TOL)
}

pub fn logm_unitary_principal_with_tol(u: &CMatrix, tol: f64) -> Result<CMatrix> {
    if u.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch {
            left: u.nrows(),
            right: u.ncols(),
        });
    }
    let residual = unitarity_residual(u);
    if residual > tol {
        return Err(Error::NotUnitary { residual, tol });
    }
    let d = u.nrows();
    let udag = adjoint(u);
    let half = C64::new(0.5, 0.0);
    let minus_half_i = C64::new(0.0, -0.5);
    let c_part: CMatrix = Array2::from_shape_fn((d, d), |(i, j)| (u[[i, j]] + udag[[i, j]]) * half);
    let s_part: CMatrix =
        Array2::from_shape_fn((d, d), |(i, j)| (u[[i, j]] - udag[[i, j]]) * minus_half_i);

    let eig = eig_hermitian_with_tol(&c_part, 1e-6)?;
    let mut vectors = eig.eigenvectors;

    // Split C-degenerate clusters with S.
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && eig.eigenvalues[end] - eig.eigenvalues[end - 1] < CLUSTER_GAP {
            end += 1;
        }
        let width = end - start;
        if width > 1 {
            let block_cols = vectors.slice(ndarray::s![.., start..end]).to_owned();
            let b = adjoint(&block_cols).dot(&s_part).dot(&block_cols);
            let b_herm: CMatrix =
                Array2::from_shape_fn((width, width), |(i, j)| (b[[i, j]] + b[[j, i]].conj()) * half);
            let sub = eig_hermitian_with_tol(&b_herm, 1e-6)?;
            let rotated = block_cols.dot(&sub.eigenvectors);
            vectors.slice_mut(ndarray::s![.., start..end]).assign(&rotated);
        }
        start = end;
    }

    // Per-column eigenphase from the quadratic forms against C and S.
    let mut log = Array2::from_elem((d, d), C64::new(0.0, 0.0));
    for j in 0..d {
        let col: Vec<C64> = (0..d).map(|i| vectors[[i, j]]).collect();
        let cos_q = quadratic_form(&c_part, &col);
        let sin_q = quadratic_form(&s_part, &col);
        let mut theta = sin_q.atan2(cos_q);
        if theta <= -std::f64::consts::PI + BRANCH_BOUNDARY {
            theta += 2.0 * std::f64::consts::PI;
        }
        for r in 0..d {
            for c in 0..d {
                log[[r, c]] += col[r] * col[c].conj() * theta;
            }
        }
    }
    // Exact Hermitian symmetrization.
    Ok(Array2::from_shape_fn((d, d), |(i, j)| {
        (log[[i, j]] + log[[j, i]].conj()) * half
    }))
}

fn quadratic_form(m: &CMatrix, v: &[C64]) -> f64 {
    let d = v.len();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..d {
            row += m[[i, j]] * v[j];
        }
        acc += v[i].conj() * row;
    }
    acc.re
}
