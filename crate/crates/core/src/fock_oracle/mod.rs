//! Brute-force checks in a photon-number-truncated Hilbert space.
//!
//! The oracle knows nothing about the closed forms in the rest of the crate.
//! One-mode channels are built from explicit two-mode unitaries (a
//! beamsplitter for attenuation, a two-mode squeezer for amplification and
//! for the contravariant branch), states are dense density matrices, and
//! entropies are computed from numerically obtained spectra. Spectra come
//! from faer rather than the nalgebra routines behind `matstack`, so the
//! oracle shares no eigensolver with the code it checks. Multi-mode
//! questions are reduced to one-mode factors with
//! [`diagonalize`](crate::structure::diagonalize) first.

mod channel;
mod dilation;
mod expm;
mod phase_space;
mod witness;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matstack::{ComplexMatrix, ComplexVector, HermitianMatrix};
use crate::sampling::complex_normal;
use crate::states::GaussianState;

pub use channel::{apply_one_mode, complementary_output, tr_f_output, FockChannel};
pub use phase_space::{husimi, wehrl_functional, wehrl_functional_default};
pub use witness::{nearest_coherent, optimizer_witness, optimizer_witness_multi, WitnessReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Probability mass allowed to fall outside a truncation.
    pub leak_tol: f64,
    /// Hard limit on any Fock level index the oracle will allocate.
    pub max_cutoff: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { leak_tol: 1e-9, max_cutoff: 4000 }
    }
}

/// A concave test function with `f(0) = 0`, named for reports and the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConcaveFn {
    /// `-x²`
    NegSquare,
    /// `-x ln x`
    NegXLogX,
    /// `-x^p`, `p ≥ 1`
    NegPower(f64),
    /// `x`; integrates to the trace, used as a normalization check.
    Linear,
}

impl ConcaveFn {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            ConcaveFn::NegSquare => -x * x,
            ConcaveFn::NegXLogX => {
                if x > 0.0 {
                    -x * x.ln()
                } else {
                    0.0
                }
            }
            ConcaveFn::NegPower(p) => -x.max(0.0).powf(p),
            ConcaveFn::Linear => x,
        }
    }
}

impl fmt::Display for ConcaveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConcaveFn::NegSquare => write!(f, "neg-square"),
            ConcaveFn::NegXLogX => write!(f, "neg-xlogx"),
            ConcaveFn::NegPower(p) => write!(f, "neg-power:{p}"),
            ConcaveFn::Linear => write!(f, "linear"),
        }
    }
}

impl FromStr for ConcaveFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "neg-square" => Ok(ConcaveFn::NegSquare),
            "neg-xlogx" => Ok(ConcaveFn::NegXLogX),
            "linear" => Ok(ConcaveFn::Linear),
            _ => {
                let p = s
                    .strip_prefix("neg-power:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .filter(|p| *p >= 1.0)
                    .ok_or_else(|| {
                        Error::InvalidFactor(format!(
                            "unknown function '{s}' (expected neg-square, neg-xlogx, neg-power:<p>=1>, linear)"
                        ))
                    })?;
                Ok(ConcaveFn::NegPower(p))
            }
        }
    }
}

impl Serialize for ConcaveFn {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConcaveFn {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A pure state on levels `0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockPure {
    amplitudes: ComplexVector,
}

impl FockPure {
    /// Accepts amplitudes whose squared norm is within `1e-9` of one, which
    /// leaves room for truncated coherent states.
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm_squared();
        if amplitudes.is_empty() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!("pure state has squared norm {norm}")));
        }
        Ok(Self { amplitudes })
    }

    pub fn number_state(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::CutoffTooSmall(format!("|{n}> does not fit below cutoff {cutoff}")));
        }
        let mut amplitudes = ComplexVector::zeros(cutoff + 1);
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Haar-random: a normalized vector of independent complex normals.
    pub fn haar_random<R: Rng + ?Sized>(rng: &mut R, cutoff: usize) -> Self {
        let v = ComplexVector::from_fn(cutoff + 1, |_, _| complex_normal(rng));
        let norm = v.norm();
        Self { amplitudes: v.unscale(norm) }
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }
}

/// Coherent vector `e^{-|w|²/2} Σ wⁿ/√n! |n>` truncated at `cutoff`.
pub fn coherent_fock(w: Complex64, cutoff: usize) -> Result<FockPure> {
    let amplitudes = coherent_amplitudes(w, cutoff + 1);
    let leaked = 1.0 - amplitudes.norm_squared();
    if leaked > 1e-10 {
        return Err(Error::CutoffTooSmall(format!(
            "coherent amplitude |w| = {:.3} leaks {leaked:.2e} above cutoff {cutoff}",
            w.norm()
        )));
    }
    Ok(FockPure { amplitudes })
}

pub(crate) fn coherent_amplitudes(w: Complex64, dim: usize) -> ComplexVector {
    let mut amps = ComplexVector::zeros(dim);
    let mut a = Complex64::new((-0.5 * w.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        amps[n] = a;
        a = a * w / ((n + 1) as f64).sqrt();
    }
    amps
}

/// A density matrix on levels `0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    matrix: ComplexMatrix,
}

impl FockDensity {
    /// Checks Hermiticity (`1e-12`), positivity (`-1e-10`) and
    /// `1 - leak_tol < tr ρ ≤ 1`.
    pub fn new(matrix: ComplexMatrix, leak_tol: f64) -> Result<Self> {
        let h = HermitianMatrix::new(matrix)?;
        let min = h.min_eigenvalue();
        if min < -1e-10 {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let trace = h.trace();
        if trace > 1.0 + 1e-12 || trace <= 1.0 - leak_tol {
            return Err(Error::InvalidState(format!("trace {trace} outside (1 - {leak_tol:e}, 1]")));
        }
        Ok(Self { matrix: h.into_matrix() })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn from_pure(psi: &FockPure) -> Self {
        let a = psi.amplitudes();
        Self { matrix: a * a.adjoint() }
    }

    pub fn cutoff(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut v = hermitian_eigenvalues(&self.matrix);
        v.reverse();
        v
    }

    /// `Σ f(λ)` over strictly positive eigenvalues.
    pub fn trace_fn(&self, f: ConcaveFn) -> f64 {
        spectrum_trace_fn(&self.spectrum(), f)
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.matrix.diagonal().iter().enumerate().map(|(n, z)| n as f64 * z.re).sum()
    }

    /// `Tr ρ a`.
    pub fn mean_amplitude(&self) -> Complex64 {
        (1..self.dim()).map(|n| self.matrix[(n, n - 1)] * (n as f64).sqrt()).sum()
    }

    /// Restriction to levels `0..=cutoff` (the mass above is dropped).
    pub fn truncate(&self, cutoff: usize) -> Self {
        let d = (cutoff + 1).min(self.dim());
        Self { matrix: self.matrix.view((0, 0), (d, d)).into_owned() }
    }
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub(crate) fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let a = faer::Mat::<Complex64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let mut v = a
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .unwrap_or_else(|_| HermitianMatrix::hermitian_part(m).eigenvalues());
    v.sort_by(f64::total_cmp);
    v
}

pub(crate) fn spectrum_trace_fn(spectrum: &[f64], f: ConcaveFn) -> f64 {
    spectrum.iter().filter(|&&x| x > 0.0).map(|&x| f.eval(x)).sum()
}

/// One-mode Gaussian state in Fock space: the thermal state with the
/// state's occupation, displaced by its mean.
pub fn gaussian_to_fock(state: &GaussianState, cutoff: usize, config: &OracleConfig) -> Result<FockDensity> {
    if state.modes() != 1 {
        return Err(Error::ModeMismatch { expected: 1, found: state.modes() });
    }
    let occupation = state.occupations()?[0];
    let w = state.mean()[0];
    // work on a larger space so the displacement is not distorted by the edge
    let thermal_levels = if occupation > 0.0 {
        let ratio = occupation / (occupation + 1.0);
        ((1e-18f64.ln() / ratio.ln()).ceil() as usize).max(1)
    } else {
        1
    };
    let reach = (thermal_levels as f64).sqrt() + w.norm() + 10.0;
    let big = ((reach * reach).ceil() as usize + 40).max(cutoff + 1);
    if big > config.max_cutoff {
        return Err(Error::CutoffTooSmall(format!("state needs more than {} levels", config.max_cutoff)));
    }
    let generator = expm::displacement_generator(w, big);
    let bound = 2.0 * w.norm() * (big as f64).sqrt();
    let mut rho = ComplexMatrix::zeros(big, big);
    let mut p = 1.0 / (occupation + 1.0);
    let ratio = occupation / (occupation + 1.0);
    for n in 0..thermal_levels.min(big) {
        let mut e = vec![Complex64::new(0.0, 0.0); big];
        e[n] = Complex64::new(1.0, 0.0);
        let col = ComplexVector::from_vec(expm::expm_action(&generator, bound, 1.0, &e));
        rho += &col * col.adjoint() * Complex64::new(p, 0.0);
        p *= ratio;
        if p < 1e-20 {
            break;
        }
    }
    let out = FockDensity { matrix: rho }.truncate(cutoff);
    let leaked = 1.0 - out.trace();
    if leaked > config.leak_tol {
        return Err(Error::CutoffTooSmall(format!("Gaussian state leaks {leaked:.2e} above cutoff {cutoff}")));
    }
    Ok(out)
}

/// `Σ_{j≤n} λ↓_j(ρ) ≥ Σ_{j≤n} λ↓_j(σ) - tol` for every `n`.
pub fn majorizes(rho: &FockDensity, sigma: &FockDensity, tol: f64) -> bool {
    spectrum_majorizes(&rho.spectrum(), &sigma.spectrum(), tol)
}

pub(crate) fn spectrum_majorizes(a: &[f64], b: &[f64], tol: f64) -> bool {
    let n = a.len().max(b.len());
    let (mut sa, mut sb) = (0.0, 0.0);
    for i in 0..n {
        sa += a.get(i).copied().unwrap_or(0.0);
        sb += b.get(i).copied().unwrap_or(0.0);
        if sa < sb - tol {
            return false;
        }
    }
    true
}
