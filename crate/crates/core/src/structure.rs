//! Structural results for gauge channels: factorization through an extreme
//! attenuator, complementary channels and their dilation symbols, and
//! reduction of commuting channels to independent one-mode factors.

use serde::{Deserialize, Serialize};

use crate::channels::{make_amplifier, make_attenuator, make_contravariant, GaussianChannel, Variant};
use crate::error::{Error, Result};
use crate::matstack::{
    c, commutator_norm, complete_orthonormal_basis, simultaneous_eigenbasis, ComplexMatrix, ComplexVector,
    HermitianMatrix, DEFAULT_RANK_TOL,
};
use crate::records::{matrix_to_record, MatrixRecord};
use crate::DEFAULT_TOL;

/// `Φ = second_stage ∘ attenuator`, both factors extreme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub attenuator: GaussianChannel,
    pub second_stage: GaussianChannel,
}

impl Decomposition {
    pub fn recompose(&self) -> Result<GaussianChannel> {
        GaussianChannel::compose(&self.second_stage, &self.attenuator)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorRole {
    Active,
    /// Output mode fed by an extra vacuum input.
    PaddedVacuum,
    /// Input mode discarded by a partial trace.
    TracedOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneModeFactor {
    pub k: f64,
    pub mu: f64,
    pub role: FactorRole,
    pub variant: Variant,
}

impl OneModeFactor {
    /// One-mode complete-positivity bound; traced-out modes carry no channel.
    pub fn is_valid(&self, tol: f64) -> bool {
        match (self.role, self.variant) {
            (FactorRole::TracedOut, _) => true,
            (_, Variant::Covariant) => self.mu >= 0.5 * (1.0 - self.k * self.k).abs() - tol,
            (_, Variant::Contravariant) => self.mu >= 0.5 * (1.0 + self.k * self.k) - tol,
        }
    }

    pub fn channel(&self) -> GaussianChannel {
        GaussianChannel::new(
            self.variant,
            ComplexMatrix::from_element(1, 1, c(self.k)),
            HermitianMatrix::from_real_diagonal(&[self.mu]),
        )
        .expect("1x1 shapes always agree")
    }
}

/// `K = V_A K_d V_B` and `μ = V_B* μ_d V_B` with diagonal `K_d`, `μ_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonalization {
    pub variant: Variant,
    pub pre_unitary: ComplexMatrix,
    pub post_unitary: ComplexMatrix,
    pub factors: Vec<OneModeFactor>,
}

impl Diagonalization {
    pub fn modes_in(&self) -> usize {
        self.pre_unitary.nrows()
    }

    pub fn modes_out(&self) -> usize {
        self.post_unitary.nrows()
    }

    /// The diagonal `s_A × s_B` gain matrix and `s_B × s_B` noise matrix.
    pub fn diagonal_parts(&self) -> (ComplexMatrix, HermitianMatrix) {
        let (s_a, s_b) = (self.modes_in(), self.modes_out());
        let mut k_d = ComplexMatrix::zeros(s_a, s_b);
        for j in 0..s_a.min(s_b) {
            k_d[(j, j)] = c(self.factors[j].k);
        }
        let mu_d: Vec<f64> = self.factors[..s_b].iter().map(|f| f.mu).collect();
        (k_d, HermitianMatrix::from_real_diagonal(&mu_d))
    }

    pub fn reassemble(&self) -> Result<GaussianChannel> {
        let (k_d, mu_d) = self.diagonal_parts();
        let k = &self.pre_unitary * k_d * &self.post_unitary;
        let mu = mu_d.congruence(&self.post_unitary);
        GaussianChannel::new(self.variant, k, mu)
    }
}

/// Factor a valid channel as an extreme attenuator followed by an extreme
/// amplifier (covariant input) or an extreme contravariant channel.
pub fn decompose(ch: &GaussianChannel) -> Result<Decomposition> {
    ch.require_valid()?;
    let gram = ch.gram();
    let eye = HermitianMatrix::identity(ch.modes_out());
    let k2 = match ch.variant() {
        Variant::Covariant => (ch.mu() + &(&gram + &eye).scale(0.5)).sqrt_psd()?,
        Variant::Contravariant => (ch.mu() + &(&gram - &eye).scale(0.5)).sqrt_psd()?,
    };
    let k2_pinv = k2.pinv_psd(DEFAULT_RANK_TOL)?;
    let k1 = ch.k() * k2_pinv.as_matrix();
    match ch.variant() {
        Variant::Covariant => Ok(Decomposition {
            attenuator: make_attenuator(&k1)?,
            second_stage: make_amplifier(k2.as_matrix())?,
        }),
        Variant::Contravariant => Ok(Decomposition {
            // the contravariant stage conjugates what comes before it
            attenuator: make_attenuator(&k1.conjugate())?,
            second_stage: make_contravariant(k2.as_matrix())?,
        }),
    }
}

enum ExtremeBranch {
    Attenuator,
    Amplifier,
}

fn extreme_branch(ch: &GaussianChannel) -> Result<ExtremeBranch> {
    if !ch.is_extreme(DEFAULT_TOL)? {
        return Err(Error::NotExtremal);
    }
    if ch.is_extreme_attenuator(DEFAULT_TOL) {
        return Ok(ExtremeBranch::Attenuator);
    }
    if ch.is_extreme_amplifier(DEFAULT_TOL) {
        if ch.modes_in() != ch.modes_out() {
            return Err(Error::UnsupportedBranch(
                "amplifier dilations are implemented for equal input and output modes".into(),
            ));
        }
        return Ok(ExtremeBranch::Amplifier);
    }
    Err(Error::UnsupportedBranch(format!(
        "extreme {} channel is neither a pure attenuator nor a pure amplifier",
        ch.variant().as_str()
    )))
}

/// The channel to the environment of the canonical dilation.
///
/// An extreme attenuator `K` has the extreme attenuator `sqrt(I - KK*)` as
/// its complement; an extreme amplifier `K` has the extreme contravariant
/// channel `sqrt(conj(K) conj(K)* - I)`.
pub fn complement(ch: &GaussianChannel) -> Result<GaussianChannel> {
    let kkh = HermitianMatrix::outer_gram(ch.k());
    let eye = HermitianMatrix::identity(ch.modes_in());
    match extreme_branch(ch)? {
        ExtremeBranch::Attenuator => make_attenuator((&eye - &kkh).sqrt_psd()?.as_matrix()),
        ExtremeBranch::Amplifier => make_contravariant((&kkh.conj() - &eye).sqrt_psd()?.as_matrix()),
    }
}

/// Block symbol of the dilation.
///
/// Attenuator: the unitary `[[K, sqrt(I - KK*)], [sqrt(I - K*K), -K*]]`.
/// Amplifier: `[[K, sqrt(KK* - I)], [sqrt(K*K - I), K*]]`, which preserves
/// the indefinite form `diag(I, -I)`.
pub fn dilation_unitary_symbol(ch: &GaussianChannel) -> Result<ComplexMatrix> {
    let (s_a, s_b) = (ch.modes_in(), ch.modes_out());
    let k = ch.k();
    let kkh = HermitianMatrix::outer_gram(k);
    let khk = ch.gram();
    let eye_a = HermitianMatrix::identity(s_a);
    let eye_b = HermitianMatrix::identity(s_b);
    let (top_right, bottom_left, bottom_right) = match extreme_branch(ch)? {
        ExtremeBranch::Attenuator => (
            (&eye_a - &kkh).sqrt_psd()?,
            (&eye_b - &khk).sqrt_psd()?,
            -k.adjoint(),
        ),
        ExtremeBranch::Amplifier => ((&kkh - &eye_a).sqrt_psd()?, (&khk - &eye_b).sqrt_psd()?, k.adjoint()),
    };
    let n = s_a + s_b;
    let mut v = ComplexMatrix::zeros(n, n);
    v.view_mut((0, 0), (s_a, s_b)).copy_from(k);
    v.view_mut((0, s_b), (s_a, s_a)).copy_from(top_right.as_matrix());
    v.view_mut((s_a, 0), (s_b, s_b)).copy_from(bottom_left.as_matrix());
    v.view_mut((s_a, s_b), (s_b, s_a)).copy_from(&bottom_right);
    Ok(v)
}

/// Relative tolerance on `‖[K*K, μ]‖_F` for [`diagonalize`].
pub const COMMUTATOR_TOL: f64 = 1e-8;

/// Reduce a channel whose `K*K` commutes with `μ` to one-mode factors.
///
/// Factors are ordered by decreasing gain. With more output than input modes
/// the trailing outputs are fed by vacuum; with more input modes the trailing
/// inputs are traced out.
pub fn diagonalize(ch: &GaussianChannel) -> Result<Diagonalization> {
    ch.require_valid()?;
    let (s_a, s_b) = (ch.modes_in(), ch.modes_out());
    let gram = ch.gram();
    let residual = commutator_norm(gram.as_matrix(), ch.mu().as_matrix());
    let scale = gram.frobenius_norm() * ch.mu().frobenius_norm();
    if residual > COMMUTATOR_TOL * scale.max(f64::MIN_POSITIVE) && residual > 1e-14 {
        return Err(Error::NonCommuting { residual });
    }

    let basis = simultaneous_eigenbasis(&[&gram, ch.mu()], 1e-9);
    let quad = |h: &HermitianMatrix, v: &ComplexVector| (v.adjoint() * h.as_matrix() * v)[(0, 0)].re;
    let mut cols: Vec<ComplexVector> = (0..s_b).map(|j| basis.column(j).into_owned()).collect();
    cols.sort_by(|a, b| quad(&gram, b).total_cmp(&quad(&gram, a)));

    let images: Vec<ComplexVector> = cols.iter().map(|w| ch.k() * w).collect();
    let gains: Vec<f64> = images.iter().map(|v| v.norm()).collect();
    let gain_floor = 1e-12 * gains.first().copied().unwrap_or(0.0).max(1.0);

    let active = s_a.min(s_b);
    let mut left = Vec::with_capacity(active);
    for j in 0..active {
        if gains[j] > gain_floor {
            left.push(images[j].unscale(gains[j]));
        } else {
            break;
        }
    }
    let pre_unitary = complete_orthonormal_basis(&left, s_a);

    let mut w = ComplexMatrix::zeros(s_b, s_b);
    for (j, col) in cols.iter().enumerate() {
        w.set_column(j, col);
    }
    let post_unitary = w.adjoint();

    let variant = ch.variant();
    let mut factors = Vec::with_capacity(s_a.max(s_b));
    for j in 0..s_a.max(s_b) {
        let factor = if j < active {
            let k = if gains[j] > gain_floor { gains[j] } else { 0.0 };
            OneModeFactor { k, mu: quad(ch.mu(), &cols[j]), role: FactorRole::Active, variant }
        } else if s_b > s_a {
            OneModeFactor { k: 0.0, mu: quad(ch.mu(), &cols[j]), role: FactorRole::PaddedVacuum, variant }
        } else {
            OneModeFactor { k: 0.0, mu: 0.0, role: FactorRole::TracedOut, variant }
        };
        factors.push(factor);
    }
    Ok(Diagonalization { variant, pre_unitary, post_unitary, factors })
}

#[derive(Serialize)]
struct DiagonalizationRecord<'a> {
    modes_in: usize,
    modes_out: usize,
    variant: Variant,
    pre_unitary: MatrixRecord,
    post_unitary: MatrixRecord,
    factors: &'a [OneModeFactor],
}

impl Serialize for Diagonalization {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DiagonalizationRecord {
            modes_in: self.modes_in(),
            modes_out: self.modes_out(),
            variant: self.variant,
            pre_unitary: matrix_to_record(&self.pre_unitary),
            post_unitary: matrix_to_record(&self.post_unitary),
            factors: &self.factors,
        }
        .serialize(serializer)
    }
}
