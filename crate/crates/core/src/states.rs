//! Gauge-invariant Gaussian states in the complex parametrization.
//!
//! A state is a mean vector `w ∈ C^s` and a Hermitian correlation matrix
//! `corr` with characteristic function `exp(2i Im w*z - z* corr z)`. The
//! correlation matrix includes the vacuum floor, so `corr - I/2` is the
//! photon-number matrix `[Tr ρ a_j* a_k]`. Entropies depend only on the
//! eigenvalues of that matrix (the per-mode occupations).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matstack::{ComplexVector, HermitianMatrix, PSD_CLAMP};
use crate::records::{matrix_from_record, matrix_to_record, vector_from_record, vector_to_record, ComplexRecord, MatrixRecord};
use crate::DEFAULT_TOL;

/// Entropy (nats) of a geometric photon distribution with mean `x`:
/// `g(x) = (x+1) ln(x+1) - x ln x`, with `g(0) = 0`.
///
/// Roundoff-level negative arguments are treated as zero; anything below
/// `-PSD_CLAMP` is outside the domain and yields NaN.
pub fn g(x: f64) -> f64 {
    if x < -PSD_CLAMP {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 0.0;
    }
    (x + 1.0) * x.ln_1p() - x * x.ln()
}

/// `g'(x) = ln(1 + 1/x)`, infinite at zero.
pub fn g_prime(x: f64) -> f64 {
    if x <= 0.0 {
        f64::INFINITY
    } else {
        (1.0 / x).ln_1p()
    }
}

/// `ln[(ν+1)^p - ν^p]`, evaluated without cancellation.
pub(crate) fn ln_power_gap(nu: f64, p: f64) -> f64 {
    let nu = nu.max(0.0);
    if nu == 0.0 {
        return 0.0;
    }
    let ln_ratio = -(1.0 / nu).ln_1p(); // ln(ν/(ν+1))
    p * nu.ln_1p() + (-(p * ln_ratio).exp_m1()).ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRecord", into = "StateRecord")]
pub struct GaussianState {
    mean: ComplexVector,
    corr: HermitianMatrix,
}

impl GaussianState {
    pub fn new(mean: ComplexVector, corr: HermitianMatrix) -> Result<Self> {
        if mean.len() != corr.dim() {
            return Err(Error::DimensionMismatch { expected: corr.dim(), found: mean.len() });
        }
        Ok(Self { mean, corr })
    }

    pub fn vacuum(modes: usize) -> Self {
        assert!(modes >= 1, "a state needs at least one mode");
        Self {
            mean: ComplexVector::zeros(modes),
            corr: HermitianMatrix::scaled_identity(modes, 0.5),
        }
    }

    pub fn coherent(w: ComplexVector) -> Self {
        let modes = w.len();
        assert!(modes >= 1, "a state needs at least one mode");
        Self { mean: w, corr: HermitianMatrix::scaled_identity(modes, 0.5) }
    }

    /// Product of thermal states with the given mean photon numbers.
    pub fn thermal(occupations: &[f64]) -> Self {
        let diag: Vec<f64> = occupations.iter().map(|n| n + 0.5).collect();
        Self {
            mean: ComplexVector::zeros(occupations.len()),
            corr: HermitianMatrix::from_real_diagonal(&diag),
        }
    }

    pub fn modes(&self) -> usize {
        self.corr.dim()
    }

    pub fn mean(&self) -> &ComplexVector {
        &self.mean
    }

    pub fn corr(&self) -> &HermitianMatrix {
        &self.corr
    }

    /// `corr ⪰ I/2` within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.occupation_matrix().min_eigenvalue() >= -tol
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.occupation_matrix().frobenius_norm() <= tol
    }

    /// `corr - I/2`.
    pub fn occupation_matrix(&self) -> HermitianMatrix {
        &self.corr - &HermitianMatrix::scaled_identity(self.modes(), 0.5)
    }

    fn require_valid(&self) -> Result<()> {
        if self.is_valid(DEFAULT_TOL) {
            Ok(())
        } else {
            Err(Error::InvalidState(format!(
                "correlation matrix violates corr >= I/2 (min eigenvalue of corr - I/2 is {:.3e})",
                self.occupation_matrix().min_eigenvalue()
            )))
        }
    }

    /// Eigenvalues of `corr - I/2`, ascending, clamped at zero.
    pub fn occupations(&self) -> Result<Vec<f64>> {
        self.require_valid()?;
        Ok(self.occupation_matrix().eigenvalues().into_iter().map(|x| x.max(0.0)).collect())
    }

    /// `H(ρ) = tr g(corr - I/2)` in nats.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        Ok(self.occupations()?.into_iter().map(g).sum())
    }

    /// `R_p(ρ) = (1/(1-p)) ln Tr ρ^p` with `Tr ρ^p = Π [(ν+1)^p - ν^p]^{-1}`.
    pub fn renyi_entropy(&self, p: f64) -> Result<f64> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::BadOrder(p));
        }
        let occ = self.occupations()?;
        Ok(occ.iter().map(|&nu| ln_power_gap(nu, p)).sum::<f64>() / (p - 1.0))
    }

    /// The `top_k` largest eigenvalues of the density operator, descending.
    ///
    /// The operator is a tensor product of geometric distributions; occupation
    /// tuples are enumerated best-first, so only the returned tuples (and their
    /// immediate successors) are ever visited. Missing entries are zero.
    pub fn spectrum(&self, top_k: usize) -> Result<Vec<f64>> {
        let occ: Vec<f64> = self.occupations()?.into_iter().filter(|&nu| nu > 1e-300).collect();
        // per-mode eigenvalue n is exp(ln_base + n * ln_ratio)
        let ln_base: Vec<f64> = occ.iter().map(|nu| -nu.ln_1p()).collect();
        let ln_ratio: Vec<f64> = occ.iter().map(|nu| -(1.0 / nu).ln_1p()).collect();
        let base_total: f64 = ln_base.iter().sum();

        let mut out = Vec::with_capacity(top_k);
        let mut heap = BinaryHeap::new();
        if top_k > 0 {
            heap.push(HeapEntry { ln_value: base_total, tuple: vec![0; occ.len()] });
        }
        while out.len() < top_k {
            let Some(entry) = heap.pop() else { break };
            out.push(entry.ln_value.exp());
            let last = entry.tuple.iter().rposition(|&n| n > 0).unwrap_or(0);
            for i in last..occ.len() {
                let mut tuple = entry.tuple.clone();
                tuple[i] += 1;
                heap.push(HeapEntry { ln_value: entry.ln_value + ln_ratio[i], tuple });
            }
        }
        out.resize(top_k, 0.0);
        Ok(out)
    }
}

struct HeapEntry {
    ln_value: f64,
    tuple: Vec<u32>,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ln_value.total_cmp(&other.ln_value)
    }
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    modes: usize,
    mean: Vec<ComplexRecord>,
    corr: MatrixRecord,
}

impl TryFrom<StateRecord> for GaussianState {
    type Error = Error;
    fn try_from(r: StateRecord) -> Result<Self> {
        if r.modes == 0 || r.mean.len() != r.modes {
            return Err(Error::ShapeMismatch(format!(
                "state: mean has {} entries for {} modes",
                r.mean.len(),
                r.modes
            )));
        }
        let corr = HermitianMatrix::new(matrix_from_record(&r.corr, r.modes, r.modes, "corr")?)?;
        GaussianState::new(vector_from_record(&r.mean), corr)
    }
}

impl From<GaussianState> for StateRecord {
    fn from(s: GaussianState) -> Self {
        StateRecord {
            modes: s.modes(),
            mean: vector_to_record(&s.mean),
            corr: matrix_to_record(s.corr.as_matrix()),
        }
    }
}
