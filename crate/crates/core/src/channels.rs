//! Gauge-covariant and gauge-contravariant Gaussian channels.
//!
//! A channel from `s_A` input modes to `s_B` output modes is stored as
//! `(K, μ, variant)`, where `K` is the `s_A × s_B` matrix appearing in the
//! dual action on displacement operators,
//!
//! ```text
//! covariant:      Φ*[D_B(z)] = D_A(K z)        exp(-z* μ z)
//! contravariant:  Φ*[D_B(z)] = D_A(-conj(K z)) exp(-z* μ z)
//! ```
//!
//! and `μ` is an `s_B × s_B` Hermitian noise matrix. States move through a
//! channel by the adjoint: `corr ↦ K* corr K + μ` (with `corr` conjugated for
//! contravariant channels).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matstack::{block_diagonal, loewner_geq, ComplexMatrix, HermitianMatrix};
use crate::records::{matrix_from_record, matrix_to_record, MatrixRecord};
use crate::states::GaussianState;
use crate::DEFAULT_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Covariant,
    Contravariant,
}

impl Variant {
    pub fn is_contravariant(self) -> bool {
        matches!(self, Variant::Contravariant)
    }

    /// Variant of a composition: contravariant iff exactly one factor is.
    pub fn compose(self, other: Variant) -> Variant {
        if self.is_contravariant() != other.is_contravariant() {
            Variant::Contravariant
        } else {
            Variant::Covariant
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Covariant => "covariant",
            Variant::Contravariant => "contravariant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRecord", into = "ChannelRecord")]
pub struct GaussianChannel {
    variant: Variant,
    k: ComplexMatrix,
    mu: HermitianMatrix,
}

/// Image of a displacement symbol under the dual channel: `z ↦ K z` (or
/// `-conj(K z)` when `conjugated`), damped by `exp(-z* μ z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementImage {
    pub arg_matrix: ComplexMatrix,
    pub damping: HermitianMatrix,
    pub conjugated: bool,
}

impl GaussianChannel {
    /// Checks shapes only. Use [`GaussianChannel::is_valid`] for complete
    /// positivity.
    pub fn new(variant: Variant, k: ComplexMatrix, mu: HermitianMatrix) -> Result<Self> {
        if k.nrows() == 0 || k.ncols() == 0 {
            return Err(Error::ShapeMismatch("channel needs at least one mode on each side".into()));
        }
        if mu.dim() != k.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "mu is {0}x{0} but K has {1} output columns",
                mu.dim(),
                k.ncols()
            )));
        }
        Ok(Self { variant, k, mu })
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            variant: Variant::Covariant,
            k: ComplexMatrix::identity(modes, modes),
            mu: HermitianMatrix::zeros(modes),
        }
    }

    pub fn modes_in(&self) -> usize {
        self.k.nrows()
    }

    pub fn modes_out(&self) -> usize {
        self.k.ncols()
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn k(&self) -> &ComplexMatrix {
        &self.k
    }

    pub fn mu(&self) -> &HermitianMatrix {
        &self.mu
    }

    /// `K* K`, an `s_B × s_B` matrix.
    pub fn gram(&self) -> HermitianMatrix {
        HermitianMatrix::gram(&self.k)
    }

    /// The smallest admissible noise: `½|I - K*K|` for covariant channels,
    /// `½(I + K*K)` for contravariant ones.
    pub fn minimal_noise(&self) -> HermitianMatrix {
        let eye = HermitianMatrix::identity(self.modes_out());
        let gram = self.gram();
        match self.variant {
            Variant::Covariant => (&eye - &gram).abs().scale(0.5),
            Variant::Contravariant => (&eye + &gram).scale(0.5),
        }
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        let half_gap = (&HermitianMatrix::identity(self.modes_out()) - &self.gram()).scale(0.5);
        let ok = match self.variant {
            Variant::Covariant => {
                loewner_geq(&self.mu, &half_gap, tol).unwrap_or(false)
                    && loewner_geq(&self.mu, &half_gap.scale(-1.0), tol).unwrap_or(false)
            }
            Variant::Contravariant => {
                let bound = (&HermitianMatrix::identity(self.modes_out()) + &self.gram()).scale(0.5);
                loewner_geq(&self.mu, &bound, tol).unwrap_or(false)
            }
        };
        ok
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        if self.is_valid(DEFAULT_TOL) {
            Ok(())
        } else {
            Err(Error::InvalidChannel(format!(
                "{} channel violates the complete-positivity bound on mu",
                self.variant.as_str()
            )))
        }
    }

    /// Whether `μ` sits at the variant's minimal solution, within `tol` in
    /// spectral norm.
    pub fn is_extreme(&self, tol: f64) -> Result<bool> {
        self.require_valid()?;
        let diff = &self.mu - &self.minimal_noise();
        let spread = diff.eigenvalues().into_iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Ok(spread <= tol)
    }

    /// Extreme covariant channel with `K*K ⪯ I`.
    pub fn is_extreme_attenuator(&self, tol: f64) -> bool {
        self.variant == Variant::Covariant
            && self.gram().max_eigenvalue() <= 1.0 + tol
            && self.is_extreme(tol).unwrap_or(false)
    }

    /// Extreme covariant channel with `K*K ⪰ I`.
    pub fn is_extreme_amplifier(&self, tol: f64) -> bool {
        self.variant == Variant::Covariant
            && self.gram().min_eigenvalue() >= 1.0 - tol
            && self.is_extreme(tol).unwrap_or(false)
    }

    /// `KK* ≻ 0`: the dual map separates input displacements.
    pub fn is_injective(&self, tol: f64) -> bool {
        HermitianMatrix::outer_gram(&self.k).min_eigenvalue() > tol
    }

    pub fn dual_on_displacement(&self) -> Result<DisplacementImage> {
        self.require_valid()?;
        Ok(DisplacementImage {
            arg_matrix: self.k.clone(),
            damping: self.mu.clone(),
            conjugated: self.variant.is_contravariant(),
        })
    }

    /// Output state for a Gaussian input.
    ///
    /// Covariant: `mean ↦ K* w`, `corr ↦ K* corr K + μ`. Contravariant:
    /// `mean ↦ K* conj(w)`, `corr ↦ K* conj(corr) K + μ`.
    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        self.require_valid()?;
        if state.modes() != self.modes_in() {
            return Err(Error::ModeMismatch { expected: self.modes_in(), found: state.modes() });
        }
        if !state.is_valid(DEFAULT_TOL) {
            return Err(Error::InvalidState("input violates corr >= I/2".into()));
        }
        let kh = self.k.adjoint();
        let (mean, corr) = match self.variant {
            Variant::Covariant => (&kh * state.mean(), state.corr().congruence(&self.k)),
            Variant::Contravariant => (&kh * state.mean().conjugate(), state.corr().conj().congruence(&self.k)),
        };
        GaussianState::new(mean, &corr + &self.mu)
    }

    /// `outer ∘ inner`: first `inner`, then `outer`.
    pub fn compose(outer: &GaussianChannel, inner: &GaussianChannel) -> Result<GaussianChannel> {
        if inner.modes_out() != outer.modes_in() {
            return Err(Error::ModeMismatch { expected: outer.modes_in(), found: inner.modes_out() });
        }
        inner.require_valid()?;
        outer.require_valid()?;
        let (k_in, mu_in) = if outer.variant.is_contravariant() {
            (inner.k.conjugate(), inner.mu.conj())
        } else {
            (inner.k.clone(), inner.mu.clone())
        };
        let k = k_in * &outer.k;
        let mu = &mu_in.congruence(&outer.k) + &outer.mu;
        GaussianChannel::new(inner.variant.compose(outer.variant), k, mu)
    }

    /// Parallel channel on the concatenated modes.
    pub fn tensor(&self, other: &GaussianChannel) -> Result<GaussianChannel> {
        if self.variant != other.variant {
            return Err(Error::MixedVariant);
        }
        GaussianChannel::new(self.variant, block_diagonal(&self.k, &other.k), self.mu.direct_sum(&other.mu))
    }
}

pub fn is_valid_channel(c: &GaussianChannel, tol: f64) -> bool {
    c.is_valid(tol)
}

/// Quantum-limited attenuator: `μ = ½(I - K*K)`, requires `K*K ⪯ I`.
pub fn make_attenuator(k: &ComplexMatrix) -> Result<GaussianChannel> {
    let gram = HermitianMatrix::gram(k);
    let max_gain = gram.max_eigenvalue();
    if max_gain > 1.0 + DEFAULT_TOL {
        return Err(Error::GainTooHigh { max_gain });
    }
    let mu = (&HermitianMatrix::identity(gram.dim()) - &gram).scale(0.5);
    GaussianChannel::new(Variant::Covariant, k.clone(), mu)
}

/// Quantum-limited amplifier: `μ = ½(K*K - I)`, requires `K*K ⪰ I`.
pub fn make_amplifier(k: &ComplexMatrix) -> Result<GaussianChannel> {
    let gram = HermitianMatrix::gram(k);
    let min_gain = gram.min_eigenvalue();
    if min_gain < 1.0 - DEFAULT_TOL {
        return Err(Error::GainTooLow { min_gain });
    }
    let mu = (&gram - &HermitianMatrix::identity(gram.dim())).scale(0.5);
    GaussianChannel::new(Variant::Covariant, k.clone(), mu)
}

/// Extreme contravariant channel: `μ = ½(I + K*K)`.
pub fn make_contravariant(k: &ComplexMatrix) -> Result<GaussianChannel> {
    let gram = HermitianMatrix::gram(k);
    let mu = (&HermitianMatrix::identity(gram.dim()) + &gram).scale(0.5);
    GaussianChannel::new(Variant::Contravariant, k.clone(), mu)
}

pub fn compose(outer: &GaussianChannel, inner: &GaussianChannel) -> Result<GaussianChannel> {
    GaussianChannel::compose(outer, inner)
}

pub fn tensor(c1: &GaussianChannel, c2: &GaussianChannel) -> Result<GaussianChannel> {
    c1.tensor(c2)
}

pub fn apply(c: &GaussianChannel, s: &GaussianState) -> Result<GaussianState> {
    c.apply(s)
}

#[derive(Serialize, Deserialize)]
struct ChannelRecord {
    modes_in: usize,
    modes_out: usize,
    variant: Variant,
    #[serde(rename = "K")]
    k: MatrixRecord,
    mu: MatrixRecord,
}

impl TryFrom<ChannelRecord> for GaussianChannel {
    type Error = Error;
    fn try_from(r: ChannelRecord) -> Result<Self> {
        let k = matrix_from_record(&r.k, r.modes_in, r.modes_out, "K")?;
        let mu = HermitianMatrix::new(matrix_from_record(&r.mu, r.modes_out, r.modes_out, "mu")?)?;
        GaussianChannel::new(r.variant, k, mu)
    }
}

impl From<GaussianChannel> for ChannelRecord {
    fn from(c: GaussianChannel) -> Self {
        ChannelRecord {
            modes_in: c.modes_in(),
            modes_out: c.modes_out(),
            variant: c.variant,
            k: matrix_to_record(&c.k),
            mu: matrix_to_record(c.mu.as_matrix()),
        }
    }
}
