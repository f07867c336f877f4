//! Two-mode dilations of the extreme one-mode channels, computed by
//! exponentiating the quadratic generators sector by sector.
//!
//! Both generators conserve a photon-number combination, so the input
//! `|m> ⊗ |0>` evolves inside a single chain of basis states:
//!
//! * beamsplitter `exp(θ(a*b - ab*))`, `cos θ = k`: `|m-j> ⊗ |j>`, `j = 0..=m`
//!   (finite, exact);
//! * two-mode squeezer `exp(r(a*b* - ab))`, `cosh r = κ`: `|m+j> ⊗ |j>`,
//!   `j = 0, 1, …` (infinite, truncated adaptively).

use super::expm::Antisymmetric;
use super::OracleConfig;
use crate::error::{Error, Result};

/// Squeezer sectors are cut where the remaining probability drops below this.
const TAIL_MASS: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DilationKind {
    Beamsplitter,
    Squeezer,
}

/// `U(|m> ⊗ |0>) = Σ_j amps[m][j] |sys(m, j)> ⊗ |j>`.
#[derive(Debug, Clone)]
pub(crate) struct Dilation {
    pub kind: DilationKind,
    pub amps: Vec<Vec<f64>>,
    /// Largest probability mass found in the truncated half of any sector.
    pub leak_estimate: f64,
}

impl Dilation {
    pub fn sys_index(&self, m: usize, j: usize) -> usize {
        match self.kind {
            DilationKind::Beamsplitter => m - j,
            DilationKind::Squeezer => m + j,
        }
    }

    pub fn sys_dim(&self) -> usize {
        (0..self.amps.len())
            .map(|m| self.sys_index(m, self.amps[m].len() - 1) + 1)
            .chain((0..self.amps.len()).map(|m| m + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn env_dim(&self) -> usize {
        self.amps.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Beamsplitter with transmissivity amplitude `k ∈ [0, 1]` on inputs
    /// `|0>, …, |input_dim-1>`.
    pub fn beamsplitter(k: f64, input_dim: usize) -> Result<Self> {
        if !(0.0..=1.0 + 1e-12).contains(&k) {
            return Err(Error::InvalidFactor(format!("beamsplitter amplitude {k} outside [0, 1]")));
        }
        let theta = k.min(1.0).acos();
        let amps = (0..input_dim)
            .map(|m| {
                if m == 0 {
                    return vec![1.0];
                }
                let b = (0..m).map(|i| (((m - i) * (i + 1)) as f64).sqrt()).collect();
                Antisymmetric { b }.evolve_first(theta)
            })
            .collect();
        Ok(Self { kind: DilationKind::Beamsplitter, amps, leak_estimate: 0.0 })
    }

    /// Squeezer with gain `κ ≥ 1`. Each sector starts from
    /// `ceil(κ²(m + 4√m + 10))` levels and doubles until the upper half of
    /// the chain holds less than `leak_tol` of the probability.
    pub fn squeezer(kappa: f64, input_dim: usize, config: &OracleConfig) -> Result<Self> {
        if !(kappa >= 1.0 - 1e-12) {
            return Err(Error::InvalidFactor(format!("squeezer gain {kappa} below 1")));
        }
        let kappa = kappa.max(1.0);
        let r = kappa.acosh();
        let mut amps = Vec::with_capacity(input_dim);
        let mut leak_estimate = 0.0f64;
        for m in 0..input_dim {
            if r == 0.0 {
                amps.push(vec![1.0]);
                continue;
            }
            let mf = m as f64;
            let mut len = (kappa * kappa * (mf + 4.0 * mf.sqrt() + 10.0)).ceil() as usize;
            loop {
                if m + len > config.max_cutoff {
                    return Err(Error::CutoffTooSmall(format!(
                        "squeezer sector {m} needs more than {} levels",
                        config.max_cutoff
                    )));
                }
                let b = (0..len - 1).map(|i| (((m + i + 1) * (i + 1)) as f64).sqrt()).collect();
                let v = Antisymmetric { b }.evolve_first(r);
                let upper: f64 = v[len / 2..].iter().map(|x| x * x).sum();
                if upper < config.leak_tol {
                    leak_estimate = leak_estimate.max(upper);
                    // drop the negligible tail so downstream matrices stay small
                    let mut keep = v.len();
                    let mut tail = 0.0;
                    while keep > 1 && tail + v[keep - 1] * v[keep - 1] < TAIL_MASS {
                        keep -= 1;
                        tail += v[keep] * v[keep];
                    }
                    amps.push(v[..keep].to_vec());
                    break;
                }
                len *= 2;
            }
        }
        Ok(Self { kind: DilationKind::Squeezer, amps, leak_estimate })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_binomial(n: usize, k: usize) -> f64 {
        (1..=k).map(|i| (((n - k + i) as f64) / i as f64).ln()).sum()
    }

    #[test]
    fn beamsplitter_matches_binomial_amplitudes() {
        let k: f64 = 0.6;
        let t = (1.0 - k * k).sqrt();
        let d = Dilation::beamsplitter(k, 12).unwrap();
        for m in 0..12 {
            for j in 0..=m {
                let want = (0.5 * ln_binomial(m, j)).exp() * k.powi((m - j) as i32) * t.powi(j as i32);
                assert!((d.amps[m][j] - want).abs() < 1e-13, "m={m} j={j}");
            }
        }
    }

    #[test]
    fn squeezer_matches_closed_form() {
        let kappa = 2f64.sqrt();
        let r = kappa.acosh();
        let d = Dilation::squeezer(kappa, 8, &OracleConfig::default()).unwrap();
        for m in 0..8 {
            let norm: f64 = d.amps[m].iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            for (j, amp) in d.amps[m].iter().enumerate().take(40) {
                let want = (0.5 * ln_binomial(m + j, j)).exp() * r.tanh().powi(j as i32) / r.cosh().powi(m as i32 + 1);
                assert!((amp - want).abs() < 1e-12, "m={m} j={j}");
            }
        }
        assert!(d.leak_estimate < 1e-9);
    }
}
