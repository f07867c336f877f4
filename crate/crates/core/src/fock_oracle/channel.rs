//! One-mode channels as sequences of dilation stages.

use super::dilation::{Dilation, DilationKind};
use super::{ConcaveFn, FockDensity, FockPure, OracleConfig};
use crate::channels::Variant;
use crate::error::{Error, Result};
use crate::matstack::ComplexMatrix;
use crate::structure::{FactorRole, OneModeFactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    System,
    Environment,
}

#[derive(Debug, Clone)]
struct Stage {
    dilation: Dilation,
    output: Side,
}

impl Stage {
    fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        match self.output {
            Side::System => self.system_output(rho),
            Side::Environment => self.environment_output(rho),
        }
    }

    /// `Σ_j K_j ρ K_j*` with `K_j |m> = amps[m][j] |sys(m, j)>`.
    fn system_output(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let d = &self.dilation;
        let dim = d.sys_dim();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for m in 0..rho.nrows() {
            let am = &d.amps[m];
            for n in 0..rho.ncols() {
                let r = rho[(m, n)];
                if r.norm_sqr() == 0.0 {
                    continue;
                }
                let an = &d.amps[n];
                for j in 0..am.len().min(an.len()) {
                    out[(d.sys_index(m, j), d.sys_index(n, j))] += r * (am[j] * an[j]);
                }
            }
        }
        out
    }

    /// Partial trace over the system: pairs `(m, j)`, `(n, j')` meet when
    /// they leave the system in the same level.
    fn environment_output(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let d = &self.dilation;
        let dim = d.env_dim();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for m in 0..rho.nrows() {
            let am = &d.amps[m];
            for n in 0..rho.ncols() {
                let r = rho[(m, n)];
                if r.norm_sqr() == 0.0 {
                    continue;
                }
                let an = &d.amps[n];
                for (j, &a) in am.iter().enumerate() {
                    let partner = match d.kind {
                        DilationKind::Beamsplitter => (n + j).checked_sub(m),
                        DilationKind::Squeezer => (m + j).checked_sub(n),
                    };
                    if let Some(jp) = partner {
                        if jp < an.len() {
                            out[(j, jp)] += r * (a * an[jp]);
                        }
                    }
                }
            }
        }
        out
    }
}

/// A one-mode gauge channel realized in Fock space for inputs below a fixed
/// dimension.
#[derive(Debug, Clone)]
pub struct FockChannel {
    input_dim: usize,
    stages: Vec<Stage>,
}

impl FockChannel {
    /// Realize `factor` as an attenuating beamsplitter followed by an
    /// amplifying squeezer (covariant) or by the environment side of a
    /// squeezer (contravariant). Stages that would act trivially are skipped.
    pub fn new(factor: &OneModeFactor, input_dim: usize, config: &OracleConfig) -> Result<Self> {
        check_factor(factor)?;
        let (k, mu) = (factor.k, factor.mu);
        let mut stages = Vec::new();
        let mut dim = input_dim;
        let second = match factor.variant {
            Variant::Covariant => (mu + 0.5 * (k * k + 1.0)).sqrt(),
            Variant::Contravariant => (mu + 0.5 * (k * k - 1.0)).max(0.0).sqrt(),
        };
        let k1 = if second > 0.0 { (k / second).min(1.0) } else { 0.0 };
        if k1 < 1.0 - 1e-15 {
            let dilation = Dilation::beamsplitter(k1, dim)?;
            dim = dilation.sys_dim();
            stages.push(Stage { dilation, output: Side::System });
        }
        match factor.variant {
            Variant::Covariant if second > 1.0 + 1e-15 => {
                stages.push(Stage { dilation: Dilation::squeezer(second, dim, config)?, output: Side::System });
            }
            Variant::Covariant => {}
            Variant::Contravariant => {
                let kappa = (1.0 + second * second).sqrt();
                stages.push(Stage { dilation: Dilation::squeezer(kappa, dim, config)?, output: Side::Environment });
            }
        }
        Ok(Self { input_dim, stages })
    }

    /// The single-stage dilation of an extreme factor, seen from the other
    /// output: the complementary channel.
    pub fn complementary(factor: &OneModeFactor, input_dim: usize, config: &OracleConfig) -> Result<Self> {
        check_factor(factor)?;
        let (k, mu) = (factor.k, factor.mu);
        let tol = 1e-9;
        let stage = match factor.variant {
            Variant::Covariant if k <= 1.0 && (mu - 0.5 * (1.0 - k * k)).abs() <= tol => {
                Stage { dilation: Dilation::beamsplitter(k, input_dim)?, output: Side::Environment }
            }
            Variant::Covariant if k >= 1.0 && (mu - 0.5 * (k * k - 1.0)).abs() <= tol => {
                Stage { dilation: Dilation::squeezer(k, input_dim, config)?, output: Side::Environment }
            }
            Variant::Contravariant if (mu - 0.5 * (1.0 + k * k)).abs() <= tol => {
                let kappa = (1.0 + k * k).sqrt();
                Stage { dilation: Dilation::squeezer(kappa, input_dim, config)?, output: Side::System }
            }
            _ => return Err(Error::NotExtremal),
        };
        Ok(Self { input_dim, stages: vec![stage] })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    /// Probability mass the adaptive truncation may have dropped.
    pub fn leak_estimate(&self) -> f64 {
        self.stages.iter().map(|s| s.dilation.leak_estimate).sum()
    }

    pub fn apply(&self, rho: &FockDensity) -> Result<FockDensity> {
        if rho.dim() > self.input_dim {
            return Err(Error::CutoffTooSmall(format!(
                "channel realized for {} input levels, state has {}",
                self.input_dim,
                rho.dim()
            )));
        }
        let mut m = rho.matrix().clone();
        for stage in &self.stages {
            m = stage.apply(&m);
        }
        Ok(FockDensity::from_matrix_unchecked(m))
    }

    pub fn apply_pure(&self, psi: &FockPure) -> Result<FockDensity> {
        self.apply(&FockDensity::from_pure(psi))
    }
}

fn check_factor(factor: &OneModeFactor) -> Result<()> {
    if factor.role == FactorRole::TracedOut {
        return Err(Error::InvalidFactor("a traced-out mode has no channel to simulate".into()));
    }
    if !(factor.k >= 0.0) || !factor.mu.is_finite() || !factor.is_valid(1e-9) {
        return Err(Error::InvalidFactor(format!(
            "k = {}, mu = {} is not a valid {} one-mode channel",
            factor.k,
            factor.mu,
            factor.variant.as_str()
        )));
    }
    Ok(())
}

pub fn apply_one_mode(factor: &OneModeFactor, rho: &FockDensity, config: &OracleConfig) -> Result<FockDensity> {
    FockChannel::new(factor, rho.dim(), config)?.apply(rho)
}

/// Environment output of the factor's dilation on a pure input.
pub fn complementary_output(factor: &OneModeFactor, psi: &FockPure, config: &OracleConfig) -> Result<FockDensity> {
    FockChannel::complementary(factor, psi.dim(), config)?.apply_pure(psi)
}

/// `Tr f(Φ[ρ])`.
pub fn tr_f_output(factor: &OneModeFactor, rho: &FockDensity, f: ConcaveFn, config: &OracleConfig) -> Result<f64> {
    Ok(apply_one_mode(factor, rho, config)?.trace_fn(f))
}
