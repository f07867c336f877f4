//! Dense complex Hermitian linear algebra.
//!
//! Everything else in the crate talks to matrices through this module: the
//! eigendecomposition (backed by `nalgebra`), spectral matrix functions, the
//! PSD square root and pseudo-inverse, Loewner-order tests and simultaneous
//! diagonalization of commuting families.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Entrywise tolerance for accepting a user-supplied matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues above `-PSD_CLAMP` are treated as roundoff and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Default relative rank cutoff for [`pinv_psd`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[inline]
pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A square complex matrix that is Hermitian by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

/// Eigenvalues sorted ascending with the matching unitary eigenvector matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `U diag(λ) U†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        rebuild(&self.eigenvectors, &self.eigenvalues)
    }
}

fn rebuild(u: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let mut scaled = u.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    scaled * u.adjoint()
}

fn max_asymmetry(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in j..n {
            worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    worst
}

impl HermitianMatrix {
    /// Validates Hermitian symmetry to [`HERMITIAN_TOL`] and stores the
    /// exactly symmetrized matrix.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let asymmetry = max_asymmetry(&m);
        if asymmetry > HERMITIAN_TOL {
            return Err(Error::NonHermitianInput { asymmetry });
        }
        Ok(Self::hermitian_part(&m))
    }

    /// `(m + m†)/2`, without any symmetry check. Used for matrices that are
    /// Hermitian in exact arithmetic but carry roundoff.
    pub fn hermitian_part(m: &ComplexMatrix) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "hermitian_part of a non-square matrix");
        Self((m + m.adjoint()).scale(0.5))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n, n))
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        Self(ComplexMatrix::identity(n, n).scale(s))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self(ComplexMatrix::from_fn(n, n, |i, j| if i == j { c(d[i]) } else { c(0.0) }))
    }

    /// `K†K`.
    pub fn gram(k: &ComplexMatrix) -> Self {
        Self::hermitian_part(&(k.adjoint() * k))
    }

    /// `K K†`.
    pub fn outer_gram(k: &ComplexMatrix) -> Self {
        Self::hermitian_part(&(k * k.adjoint()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Entrywise complex conjugate (still Hermitian).
    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `K† self K`.
    pub fn congruence(&self, k: &ComplexMatrix) -> Self {
        assert_eq!(k.nrows(), self.dim(), "congruence dimension mismatch");
        Self::hermitian_part(&(k.adjoint() * &self.0 * k))
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self(block_diagonal(&self.0, &other.0))
    }

    pub fn eig(&self) -> EigenDecomposition {
        let se = self.0.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&j| se.eigenvalues[j]).collect();
        let eigenvectors = ComplexMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            se.eigenvectors[(i, order[j])]
        });
        EigenDecomposition { eigenvalues, eigenvectors }
    }

    /// Eigenvalues only, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let mut v: Vec<f64> = self.0.clone().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// `U f(Λ) U†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        let e = self.eig();
        let values: Vec<f64> = e.eigenvalues.iter().map(|&x| f(x)).collect();
        Self::hermitian_part(&rebuild(&e.eigenvectors, &values))
    }

    /// Eigenvalues with roundoff-level negatives clamped to zero, or
    /// [`Error::NotPsd`] when something is genuinely negative.
    fn psd_eig(&self) -> Result<EigenDecomposition> {
        let mut e = self.eig();
        if let Some(&min) = e.eigenvalues.first() {
            if min < -PSD_CLAMP {
                return Err(Error::NotPsd { min_eigenvalue: min });
            }
        }
        for v in &mut e.eigenvalues {
            *v = v.max(0.0);
        }
        Ok(e)
    }

    pub fn sqrt_psd(&self) -> Result<Self> {
        let e = self.psd_eig()?;
        let values: Vec<f64> = e.eigenvalues.iter().map(|x| x.sqrt()).collect();
        Ok(Self::hermitian_part(&rebuild(&e.eigenvectors, &values)))
    }

    pub fn pinv_psd(&self, rank_tol: f64) -> Result<Self> {
        let e = self.psd_eig()?;
        let cutoff = rank_tol * e.eigenvalues.last().copied().unwrap_or(0.0);
        let values: Vec<f64> = e
            .eigenvalues
            .iter()
            .map(|&x| if x > cutoff && x > 0.0 { 1.0 / x } else { 0.0 })
            .collect();
        Ok(Self::hermitian_part(&rebuild(&e.eigenvectors, &values)))
    }

    /// `|self|`, the matrix absolute value.
    pub fn abs(&self) -> Self {
        self.map_spectrum(f64::abs)
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

pub fn block_diagonal(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn eig_hermitian(m: &HermitianMatrix) -> EigenDecomposition {
    m.eig()
}

pub fn sqrt_psd(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    m.sqrt_psd()
}

pub fn pinv_psd(m: &HermitianMatrix, rank_tol: f64) -> Result<HermitianMatrix> {
    m.pinv_psd(rank_tol)
}

/// `a ⪰ b` up to `tol`: the smallest eigenvalue of `a - b` is at least `-tol`.
pub fn loewner_geq(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok((a - b).min_eigenvalue() >= -tol)
}

/// `tr f(m) = Σ f(λ_j)`.
pub fn apply_spectral(m: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<f64> {
    let mut total = 0.0;
    for lambda in m.eigenvalues() {
        let v = f(lambda);
        if !v.is_finite() {
            return Err(Error::Domain { at: lambda });
        }
        total += v;
    }
    Ok(total)
}

/// `‖ab - ba‖_F`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a * b - b * a).norm()
}

/// `‖u†u - I‖_F`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    (u.adjoint() * u - ComplexMatrix::identity(n, n)).norm()
}

/// A unitary whose columns diagonalize every member of a commuting family.
///
/// The first matrix is diagonalized outright; each further matrix is then
/// diagonalized inside the (near-)degenerate eigenspaces left by the previous
/// ones. `gap_tol` is relative to each matrix's spectral scale.
pub fn simultaneous_eigenbasis(family: &[&HermitianMatrix], gap_tol: f64) -> ComplexMatrix {
    let n = family.first().map_or(0, |h| h.dim());
    let mut basis = ComplexMatrix::identity(n, n);
    let mut clusters: Vec<(usize, usize)> = vec![(0, n)];
    for h in family {
        assert_eq!(h.dim(), n, "simultaneous_eigenbasis dimension mismatch");
        let scale = h.as_matrix().norm().max(1.0);
        let mut refined = Vec::with_capacity(n);
        for &(start, len) in &clusters {
            if len == 0 {
                continue;
            }
            let cols = basis.columns(start, len).into_owned();
            let block = HermitianMatrix::hermitian_part(&(cols.adjoint() * h.as_matrix() * &cols));
            let e = block.eig();
            let rotated = &cols * &e.eigenvectors;
            basis.columns_mut(start, len).copy_from(&rotated);
            let mut run_start = 0;
            for j in 1..=len {
                let split = j == len || e.eigenvalues[j] - e.eigenvalues[j - 1] > gap_tol * scale;
                if split {
                    refined.push((start + run_start, j - run_start));
                    run_start = j;
                }
            }
        }
        clusters = refined;
    }
    basis
}

/// Extends orthonormal-ish columns to a full orthonormal basis of `C^dim`
/// by modified Gram-Schmidt against the standard basis.
pub fn complete_orthonormal_basis(columns: &[ComplexVector], dim: usize) -> ComplexMatrix {
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(dim);
    let candidates = columns
        .iter()
        .cloned()
        .chain((0..dim).map(|i| {
            let mut e = ComplexVector::zeros(dim);
            e[i] = c(1.0);
            e
        }));
    for mut v in candidates {
        if basis.len() == dim {
            break;
        }
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v.unscale(norm));
        }
    }
    ComplexMatrix::from_columns(&basis)
}
