//! Minimal output entropies, 1→p norms and the energy-constrained classical
//! capacity of gauge channels.
//!
//! All of these are attained on Gaussian inputs: the entropic quantities on
//! the vacuum, whose image has photon-number matrix `N = μ + (K*K - I)/2`,
//! and the capacity on a Gaussian ensemble of coherent states with input
//! correlation `ν`, for which
//!
//! ```text
//! χ(ν) = tr g(K* ν K + N) - tr g(N)
//! ```
//!
//! (`ν` conjugated for contravariant channels). Everything is returned in
//! nats.

use serde::{Deserialize, Serialize};

use crate::channels::GaussianChannel;
use crate::error::{Error, Result};
use crate::matstack::{apply_spectral, commutator_norm, simultaneous_eigenbasis, ComplexMatrix, HermitianMatrix, PSD_CLAMP};
use crate::records::{matrix_to_record, MatrixRecord};
use crate::states::{g, g_prime, ln_power_gap};

/// `μ + (K*K - I)/2`: photon-number matrix of the vacuum's image.
pub fn vacuum_output_occupation(ch: &GaussianChannel) -> HermitianMatrix {
    let eye = HermitianMatrix::identity(ch.modes_out());
    ch.mu() + &(&ch.gram() - &eye).scale(0.5)
}

/// `tr g(μ + (K*K - I)/2)`, the entropy of the vacuum's image.
pub fn min_output_entropy(ch: &GaussianChannel) -> Result<f64> {
    ch.require_valid()?;
    apply_spectral(&vacuum_output_occupation(ch), g)
}

fn check_order(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::BadOrder(p))
    }
}

/// `Σ_j ln[(n_j + 1)^p - n_j^p]` over the occupations of the vacuum's image.
fn ln_power_gap_total(ch: &GaussianChannel, p: f64) -> Result<f64> {
    check_order(p)?;
    ch.require_valid()?;
    Ok(vacuum_output_occupation(ch).eigenvalues().into_iter().map(|n| ln_power_gap(n, p)).sum())
}

/// `‖Φ‖_{1→p} = det[(N + I)^p - N^p]^{-1/p}`, computed in the log domain.
pub fn one_to_p_norm(ch: &GaussianChannel, p: f64) -> Result<f64> {
    Ok((-ln_power_gap_total(ch, p)? / p).exp())
}

/// `(p/(1-p)) ln ‖Φ‖_{1→p}`.
pub fn min_renyi_entropy(ch: &GaussianChannel, p: f64) -> Result<f64> {
    Ok(ln_power_gap_total(ch, p)? / (p - 1.0))
}

/// Holevo quantity of the Gaussian coherent-state ensemble with input
/// correlation `ν`.
pub fn chi_of_gaussian_ensemble(ch: &GaussianChannel, nu: &HermitianMatrix) -> Result<f64> {
    ch.require_valid()?;
    if nu.dim() != ch.modes_in() {
        return Err(Error::DimensionMismatch { expected: ch.modes_in(), found: nu.dim() });
    }
    let min = nu.min_eigenvalue();
    if min < -PSD_CLAMP {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let nu = if ch.variant().is_contravariant() { nu.conj() } else { nu.clone() };
    let n = vacuum_output_occupation(ch);
    let signal = &nu.congruence(ch.k()) + &n;
    Ok(apply_spectral(&signal, g)? - apply_spectral(&n, g)?)
}

/// Budget `tr(ν ε) ≤ E` with a positive definite energy matrix `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyConstraint {
    epsilon: HermitianMatrix,
    energy: f64,
}

impl EnergyConstraint {
    pub fn new(epsilon: HermitianMatrix, energy: f64) -> Result<Self> {
        if !(energy >= 0.0) || !energy.is_finite() {
            return Err(Error::InvalidConstraint(format!("energy budget must be finite and nonnegative, got {energy}")));
        }
        let min = epsilon.min_eigenvalue();
        if !(min > 0.0) {
            return Err(Error::InvalidConstraint(format!(
                "energy matrix must be positive definite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(Self { epsilon, energy })
    }

    /// One unit of energy per photon in every mode.
    pub fn photon_number(modes: usize, energy: f64) -> Result<Self> {
        Self::new(HermitianMatrix::identity(modes), energy)
    }

    pub fn epsilon(&self) -> &HermitianMatrix {
        &self.epsilon
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapacityMethod {
    /// Water-filling when the problem decouples into modes, otherwise the
    /// general solver.
    #[default]
    Auto,
    /// Per-mode water-filling; fails unless `K` is normal and commutes with
    /// `μ` and `ε`.
    Commuting,
    /// Projected gradient over the full input correlation matrix.
    General,
}

/// One mode of a water-filling solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeAllocation {
    /// `|k_j|²`, the mode's power gain.
    pub gain: f64,
    /// `N_j`, the output noise occupation.
    pub noise: f64,
    /// `ε_j`, energy per input photon.
    pub energy_weight: f64,
    /// Allocated input photons `ν_j`.
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacitySolution {
    pub nu: HermitianMatrix,
    pub capacity_nats: f64,
    /// `χ(ν)` recomputed through the matrix formula.
    pub chi_value: f64,
    pub iterations: usize,
    /// `‖X - P(X + ∇χ)‖_F` in the energy-whitened variable `X = ε^½ ν ε^½`.
    pub kkt_residual: f64,
    pub method: CapacityMethod,
    /// Lagrange multiplier of the budget (water-filling only).
    pub lambda: Option<f64>,
    pub allocations: Option<Vec<ModeAllocation>>,
}

#[derive(Serialize)]
struct CapacityRecord<'a> {
    nu: MatrixRecord,
    capacity_nats: f64,
    chi_value: f64,
    iterations: usize,
    kkt_residual: f64,
    method: CapacityMethod,
    lambda: Option<f64>,
    allocations: Option<&'a [ModeAllocation]>,
}

impl Serialize for CapacitySolution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CapacityRecord {
            nu: matrix_to_record(self.nu.as_matrix()),
            capacity_nats: self.capacity_nats,
            chi_value: self.chi_value,
            iterations: self.iterations,
            kkt_residual: self.kkt_residual,
            method: self.method,
            lambda: self.lambda,
            allocations: self.allocations.as_deref(),
        }
        .serialize(serializer)
    }
}

/// Natural-residual target for the general solver.
pub const KKT_TOL: f64 = 1e-8;
/// Iteration cap for the general solver.
pub const MAX_ITERATIONS: usize = 10_000;
/// Relative commutator tolerance for taking the water-filling path.
pub const COMMUTING_TOL: f64 = 1e-10;

/// Maximize `χ(ν)` over `ν ⪰ 0`, `tr(ν ε) ≤ E`.
pub fn capacity(ch: &GaussianChannel, constraint: &EnergyConstraint, method: CapacityMethod) -> Result<CapacitySolution> {
    ch.require_valid()?;
    let s_a = ch.modes_in();
    if constraint.epsilon.dim() != s_a {
        return Err(Error::DimensionMismatch { expected: s_a, found: constraint.epsilon.dim() });
    }
    // For contravariant channels χ depends on conj(ν); solve for conj(ν)
    // against the conjugated energy matrix and conjugate back.
    let contra = ch.variant().is_contravariant();
    let eps = if contra { constraint.epsilon.conj() } else { constraint.epsilon.clone() };
    let problem = Problem::new(ch.k().clone(), vacuum_output_occupation(ch), eps, constraint.energy);

    let mut sol = match method {
        CapacityMethod::General => problem.solve_general(),
        CapacityMethod::Commuting => problem.solve_commuting().ok_or_else(|| {
            Error::UnsupportedBranch("water-filling needs a normal K commuting with mu and epsilon".into())
        })?,
        CapacityMethod::Auto => match problem.solve_commuting() {
            Some(sol) => sol,
            None => problem.solve_general(),
        },
    };
    if contra {
        sol.nu = sol.nu.conj();
    }
    sol.chi_value = chi_of_gaussian_ensemble(ch, &sol.nu)?;
    if sol.method == CapacityMethod::General {
        sol.capacity_nats = sol.chi_value;
    }
    Ok(sol)
}

/// The covariant-form problem `max tr g(K* ν K + N)` with whitened variable
/// `X = ε^½ ν ε^½` and `B = ε^-½ K`.
struct Problem {
    k: ComplexMatrix,
    n: HermitianMatrix,
    eps: HermitianMatrix,
    eps_inv_sqrt: HermitianMatrix,
    b: ComplexMatrix,
    energy: f64,
}

impl Problem {
    fn new(k: ComplexMatrix, n: HermitianMatrix, eps: HermitianMatrix, energy: f64) -> Self {
        let eps_inv_sqrt = eps.map_spectrum(|x| 1.0 / x.sqrt());
        let b = eps_inv_sqrt.as_matrix() * &k;
        Self { k, n, eps, eps_inv_sqrt, b, energy }
    }

    fn dim(&self) -> usize {
        self.k.nrows()
    }

    fn nu_from_x(&self, x: &HermitianMatrix) -> HermitianMatrix {
        x.congruence(self.eps_inv_sqrt.as_matrix())
    }

    fn x_from_nu(&self, nu: &HermitianMatrix) -> HermitianMatrix {
        nu.congruence(self.eps.sqrt_psd().expect("epsilon is positive definite").as_matrix())
    }

    /// `tr g(B* X B + N)` and its gradient `B g'(B* X B + N) B*`.
    fn value_and_gradient(&self, x: &HermitianMatrix) -> (f64, HermitianMatrix) {
        let m = &x.congruence(&self.b) + &self.n;
        let e = m.eig();
        let value = e.eigenvalues.iter().map(|&v| g(v.max(0.0))).sum();
        let mut scaled = e.eigenvectors.clone();
        for (j, &v) in e.eigenvalues.iter().enumerate() {
            scaled.column_mut(j).scale_mut(g_prime(v.max(1e-300)));
        }
        let inner = scaled * e.eigenvectors.adjoint();
        let grad = HermitianMatrix::hermitian_part(&(&self.b * inner * self.b.adjoint()));
        (value, grad)
    }

    fn value(&self, x: &HermitianMatrix) -> f64 {
        let m = &x.congruence(&self.b) + &self.n;
        m.eigenvalues().into_iter().map(|v| g(v.max(0.0))).sum()
    }

    fn project(&self, x: &HermitianMatrix) -> HermitianMatrix {
        project_onto_budget(x, self.energy)
    }

    fn natural_residual(&self, x: &HermitianMatrix, grad: &HermitianMatrix) -> f64 {
        (x - &self.project(&(x + grad))).frobenius_norm()
    }

    fn base_entropy(&self) -> f64 {
        self.value(&HermitianMatrix::zeros(self.dim()))
    }

    fn zero_solution(&self, method: CapacityMethod) -> CapacitySolution {
        CapacitySolution {
            nu: HermitianMatrix::zeros(self.dim()),
            capacity_nats: 0.0,
            chi_value: 0.0,
            iterations: 0,
            kkt_residual: 0.0,
            method,
            lambda: None,
            allocations: None,
        }
    }

    /// Spectral projected gradient with Barzilai-Borwein steps and a
    /// nonmonotone (Grippo-Lampariello-Lucidi) line search.
    fn solve_general(&self) -> CapacitySolution {
        if self.energy == 0.0 {
            return self.zero_solution(CapacityMethod::General);
        }
        const MEMORY: usize = 10;
        const GAMMA: f64 = 1e-4;
        let s = self.dim();
        let mut x = HermitianMatrix::scaled_identity(s, self.energy / s as f64);
        let (mut value, mut grad) = self.value_and_gradient(&x);
        let mut history = vec![value];
        let mut step = 1.0;
        let mut residual = self.natural_residual(&x, &grad);
        let mut iterations = 0;
        while residual >= KKT_TOL && iterations < MAX_ITERATIONS {
            iterations += 1;
            let direction = &self.project(&(&x + &grad.scale(step))) - &x;
            let slope = inner(&grad, &direction);
            let reference = history.iter().copied().fold(f64::INFINITY, f64::min);
            let mut t = 1.0;
            let (next, next_value) = loop {
                let trial = &x + &direction.scale(t);
                let v = self.value(&trial);
                if v >= reference + GAMMA * t * slope || t < 1e-20 {
                    break (trial, v);
                }
                t *= 0.5;
            };
            let (_, next_grad) = self.value_and_gradient(&next);
            let sx = &next - &x;
            let sy = -inner(&sx, &(&next_grad - &grad));
            step = if sy > 0.0 { (inner(&sx, &sx) / sy).clamp(1e-10, 1e10) } else { 1e10 };
            x = next;
            value = next_value;
            grad = next_grad;
            history.push(value);
            if history.len() > MEMORY {
                history.remove(0);
            }
            residual = self.natural_residual(&x, &grad);
        }
        CapacitySolution {
            nu: self.nu_from_x(&x),
            capacity_nats: value - self.base_entropy(),
            chi_value: f64::NAN,
            iterations,
            kkt_residual: residual,
            method: CapacityMethod::General,
            lambda: None,
            allocations: None,
        }
    }

    /// Water-filling in a basis that diagonalizes `K`, `N` and `ε` at once,
    /// or `None` when no such basis exists.
    fn solve_commuting(&self) -> Option<CapacitySolution> {
        let k = &self.k;
        if k.nrows() != k.ncols() {
            return None;
        }
        let k_scale = k.norm();
        let rel = |a: &ComplexMatrix, b: &ComplexMatrix| {
            commutator_norm(a, b) <= COMMUTING_TOL * (a.norm() * b.norm()).max(1e-300) || commutator_norm(a, b) <= 1e-14
        };
        let kh = k.adjoint();
        let normal = (k * &kh - &kh * k).norm() <= COMMUTING_TOL * (k_scale * k_scale).max(1e-300) + 1e-14;
        if !normal || !rel(k, self.n.as_matrix()) || !rel(k, self.eps.as_matrix()) || !rel(self.n.as_matrix(), self.eps.as_matrix())
        {
            return None;
        }

        let re_part = HermitianMatrix::hermitian_part(&(k + &kh).unscale(2.0));
        let im_part = HermitianMatrix::hermitian_part(&((k - &kh) * num_complex::Complex64::new(0.0, -0.5)));
        let w = simultaneous_eigenbasis(&[&re_part, &im_part, &self.n, &self.eps], 1e-9);
        let quad = |m: &ComplexMatrix, j: usize| {
            let col = w.column(j);
            (col.adjoint() * m * col)[(0, 0)]
        };
        let s = self.dim();
        let mut modes: Vec<ModeAllocation> = (0..s)
            .map(|j| ModeAllocation {
                gain: quad(k, j).norm_sqr(),
                noise: quad(self.n.as_matrix(), j).re.max(0.0),
                energy_weight: quad(self.eps.as_matrix(), j).re,
                nu: 0.0,
            })
            .collect();

        let lambda = water_fill(&mut modes, self.energy);
        let capacity_nats = modes.iter().map(|m| g(m.gain * m.nu + m.noise) - g(m.noise)).sum();
        let diag: Vec<f64> = modes.iter().map(|m| m.nu).collect();
        let nu = HermitianMatrix::from_real_diagonal(&diag).congruence(&w.adjoint());
        let x = self.x_from_nu(&nu);
        let (_, grad) = self.value_and_gradient(&x);
        Some(CapacitySolution {
            kkt_residual: self.natural_residual(&x, &grad),
            nu,
            capacity_nats,
            chi_value: f64::NAN,
            iterations: 0,
            method: CapacityMethod::Commuting,
            lambda,
            allocations: Some(modes),
        })
    }
}

/// Re tr(a b) for Hermitian `a`, `b`.
fn inner(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    a.as_matrix().iter().zip(b.as_matrix().iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Frobenius-nearest point of `{X ⪰ 0, tr X ≤ E}`.
pub fn project_onto_budget(x: &HermitianMatrix, energy: f64) -> HermitianMatrix {
    let e = x.eig();
    let clipped: Vec<f64> = e.eigenvalues.iter().map(|v| v.max(0.0)).collect();
    let values = if clipped.iter().sum::<f64>() <= energy {
        clipped
    } else {
        let tau = simplex_shift(&e.eigenvalues, energy);
        e.eigenvalues.iter().map(|v| (v - tau).max(0.0)).collect()
    };
    let mut scaled = e.eigenvectors.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    HermitianMatrix::hermitian_part(&(scaled * e.eigenvectors.adjoint()))
}

/// The `τ` with `Σ max(v_j - τ, 0) = E`.
fn simplex_shift(values: &[f64], energy: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut running = 0.0;
    let mut tau = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        running += v;
        let candidate = (running - energy) / (i + 1) as f64;
        if v > candidate {
            tau = candidate;
        } else {
            break;
        }
    }
    tau
}

/// Allocation maximizing `Σ g(k_j² ν_j + N_j)` under `Σ ε_j ν_j ≤ E`.
///
/// The optimum has `k_j² g'(k_j² ν_j + N_j) = λ ε_j` on every mode that
/// receives photons; `λ` is found by bisection on a log scale. Returns the
/// multiplier, or `None` when nothing can be allocated.
fn water_fill(modes: &mut [ModeAllocation], energy: f64) -> Option<f64> {
    let usable = modes.iter().any(|m| m.gain > 0.0);
    if energy == 0.0 || !usable {
        for m in modes.iter_mut() {
            m.nu = 0.0;
        }
        return None;
    }
    let alloc = |m: &ModeAllocation, lambda: f64| -> f64 {
        if m.gain <= 0.0 {
            return 0.0;
        }
        let level = 1.0 / (lambda * m.energy_weight / m.gain).exp_m1();
        ((level - m.noise) / m.gain).max(0.0)
    };
    let spend = |lambda: f64| -> f64 { modes.iter().map(|m| m.energy_weight * alloc(m, lambda)).sum() };

    let (mut lo, mut hi) = (1.0, 1.0);
    while spend(hi) > energy {
        hi *= 2.0;
    }
    while spend(lo) <= energy && lo > 1e-300 {
        lo *= 0.5;
    }
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if spend(mid) > energy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = hi;
    let spent = spend(lambda);
    // Bisection leaves a sliver of budget unspent; hand it to the active
    // modes in proportion to their allocation.
    let scale = if spent > 0.0 { energy / spent } else { 1.0 };
    for m in modes.iter_mut() {
        m.nu = alloc(m, lambda) * scale;
    }
    Some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{make_amplifier, make_attenuator, make_contravariant, Variant};
    use crate::matstack::{c, ComplexVector};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn scalar(x: f64) -> ComplexMatrix {
        ComplexMatrix::from_element(1, 1, c(x))
    }

    fn rectangular_problem() -> (GaussianChannel, Problem) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let ch = crate::sampling::random_channel(&mut rng, 3, 2, Variant::Covariant, 1.5, 0.5);
        let eps = &HermitianMatrix::identity(3) + &crate::sampling::random_psd(&mut rng, 3, 0.5);
        let p = Problem::new(ch.k().clone(), vacuum_output_occupation(&ch), eps, 1.5);
        (ch, p)
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let (_, p) = rectangular_problem();
        let x = HermitianMatrix::from_real_diagonal(&[0.4, 0.2, 0.3]);
        let (_, grad) = p.value_and_gradient(&x);
        let h = 1e-6;
        for (i, j) in [(0, 0), (1, 2), (2, 0)] {
            let mut dir = ComplexMatrix::zeros(3, 3);
            dir[(i, j)] = c(1.0);
            dir[(j, i)] = c(1.0);
            let dir = HermitianMatrix::new(dir).unwrap();
            let fd = (p.value(&(&x + &dir.scale(h))) - p.value(&(&x - &dir.scale(h)))) / (2.0 * h);
            assert_abs_diff_eq!(fd, inner(&grad, &dir), epsilon = 1e-7);
        }
    }

    #[test]
    fn general_solver_handles_rectangular_gain() {
        let (ch, p) = rectangular_problem();
        let sol = p.solve_general();
        assert!(sol.kkt_residual < KKT_TOL, "{}", sol.kkt_residual);
        let spent = (sol.nu.as_matrix() * p.eps.as_matrix()).trace().re;
        assert!(spent <= 1.5 + 1e-9);
        let chi = chi_of_gaussian_ensemble(&ch, &sol.nu).unwrap();
        assert_abs_diff_eq!(chi, sol.capacity_nats, epsilon = 1e-10);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(min_output_entropy(&make_attenuator(&scalar(0.6)).unwrap()).unwrap(), 0.0);
        let amp = make_amplifier(&scalar(2f64.sqrt())).unwrap();
        assert_abs_diff_eq!(min_output_entropy(&amp).unwrap(), 2.0 * LN_2, epsilon = 1e-14);
        let con = make_contravariant(&scalar(1.0)).unwrap();
        assert_abs_diff_eq!(min_output_entropy(&con).unwrap(), 2.0 * LN_2, epsilon = 1e-14);
    }

    #[test]
    fn norm_and_renyi_examples() {
        assert_abs_diff_eq!(one_to_p_norm(&GaussianChannel::identity(2), 2.5).unwrap(), 1.0, epsilon = 1e-15);
        let amp = make_amplifier(&scalar(2f64.sqrt())).unwrap();
        assert_abs_diff_eq!(one_to_p_norm(&amp, 2.0).unwrap(), 3f64.powf(-0.5), epsilon = 1e-14);
        assert_abs_diff_eq!(min_renyi_entropy(&amp, 2.0).unwrap(), 3f64.ln(), epsilon = 1e-14);
        assert_eq!(min_renyi_entropy(&make_attenuator(&scalar(0.3)).unwrap(), 3.0).unwrap(), 0.0);
        assert!(matches!(one_to_p_norm(&amp, 1.0), Err(Error::BadOrder(_))));
    }

    #[test]
    fn chi_examples() {
        let id = GaussianChannel::identity(1);
        assert_eq!(chi_of_gaussian_ensemble(&id, &HermitianMatrix::zeros(1)).unwrap(), 0.0);
        let one = HermitianMatrix::from_real_diagonal(&[1.0]);
        assert_abs_diff_eq!(chi_of_gaussian_ensemble(&id, &one).unwrap(), 2.0 * LN_2, epsilon = 1e-14);
        let att = make_attenuator(&scalar(0.5f64.sqrt())).unwrap();
        let two = HermitianMatrix::from_real_diagonal(&[2.0]);
        assert_abs_diff_eq!(chi_of_gaussian_ensemble(&att, &two).unwrap(), 2.0 * LN_2, epsilon = 1e-14);
        let neg = HermitianMatrix::from_real_diagonal(&[-1.0]);
        assert!(matches!(chi_of_gaussian_ensemble(&id, &neg), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn capacity_single_mode() {
        let id = GaussianChannel::identity(1);
        let c1 = EnergyConstraint::photon_number(1, 1.0).unwrap();
        for method in [CapacityMethod::Auto, CapacityMethod::General] {
            let sol = capacity(&id, &c1, method).unwrap();
            assert_abs_diff_eq!(sol.capacity_nats, 2.0 * LN_2, epsilon = 1e-10);
            assert_abs_diff_eq!(sol.nu.as_matrix()[(0, 0)].re, 1.0, epsilon = 1e-9);
            assert!(sol.kkt_residual < KKT_TOL);
        }
        let att = make_attenuator(&scalar(0.5f64.sqrt())).unwrap();
        let sol = capacity(&att, &EnergyConstraint::photon_number(1, 2.0).unwrap(), CapacityMethod::Auto).unwrap();
        assert_abs_diff_eq!(sol.capacity_nats, 2.0 * LN_2, epsilon = 1e-10);
    }

    #[test]
    fn capacity_zero_budget() {
        let amp = make_amplifier(&scalar(1.5)).unwrap();
        for method in [CapacityMethod::Commuting, CapacityMethod::General] {
            let sol = capacity(&amp, &EnergyConstraint::photon_number(1, 0.0).unwrap(), method).unwrap();
            assert_eq!(sol.capacity_nats, 0.0);
            assert_eq!(sol.nu, HermitianMatrix::zeros(1));
        }
    }

    #[test]
    fn capacity_two_mode_paths_agree() {
        let k = ComplexMatrix::identity(2, 2);
        let mu = HermitianMatrix::from_real_diagonal(&[0.0, 1.0]);
        let ch = GaussianChannel::new(Variant::Covariant, k, mu).unwrap();
        let cons = EnergyConstraint::photon_number(2, 2.0).unwrap();
        let fast = capacity(&ch, &cons, CapacityMethod::Commuting).unwrap();
        let slow = capacity(&ch, &cons, CapacityMethod::General).unwrap();
        assert_abs_diff_eq!(fast.capacity_nats, slow.capacity_nats, epsilon = 1e-6);
        assert_abs_diff_eq!(fast.capacity_nats, fast.chi_value, epsilon = 1e-10);
        assert!(fast.kkt_residual < KKT_TOL, "{}", fast.kkt_residual);
        assert!(slow.kkt_residual < KKT_TOL, "{}", slow.kkt_residual);
        assert!(slow.capacity_nats <= fast.capacity_nats + 1e-6);
    }

    #[test]
    fn capacity_inactive_mode() {
        // the second mode is so noisy it receives nothing at a small budget
        let k = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c(1.0), c(0.2)]));
        let mu = HermitianMatrix::from_real_diagonal(&[0.0, 5.0]);
        let ch = GaussianChannel::new(Variant::Covariant, k, mu).unwrap();
        let sol = capacity(&ch, &EnergyConstraint::photon_number(2, 0.1).unwrap(), CapacityMethod::Commuting).unwrap();
        let alloc = sol.allocations.unwrap();
        let noisy = alloc.iter().find(|m| m.noise > 1.0).unwrap();
        let clean = alloc.iter().find(|m| m.noise < 1.0).unwrap();
        assert_eq!(noisy.nu, 0.0);
        assert_abs_diff_eq!(clean.nu, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn contravariant_capacity_conjugates() {
        let con = make_contravariant(&scalar(1.0)).unwrap();
        let cons = EnergyConstraint::photon_number(1, 1.5).unwrap();
        let a = capacity(&con, &cons, CapacityMethod::Commuting).unwrap();
        let b = capacity(&con, &cons, CapacityMethod::General).unwrap();
        assert_abs_diff_eq!(a.capacity_nats, b.capacity_nats, epsilon = 1e-9);
        assert_abs_diff_eq!(a.capacity_nats, g(1.5 + 1.0) - g(1.0), epsilon = 1e-10);
    }

    #[test]
    fn projection_onto_budget() {
        let x = HermitianMatrix::from_real_diagonal(&[3.0, 1.0, -2.0]);
        let p = project_onto_budget(&x, 2.0);
        assert_abs_diff_eq!(p.as_matrix()[(0, 0)].re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.as_matrix()[(1, 1)].re, 0.0, epsilon = 1e-14);
        let p = project_onto_budget(&x, 10.0);
        assert_abs_diff_eq!(p.trace(), 4.0, epsilon = 1e-14);
        let p = project_onto_budget(&HermitianMatrix::from_real_diagonal(&[2.0, 2.0]), 1.0);
        assert_abs_diff_eq!(p.as_matrix()[(0, 0)].re, 0.5, epsilon = 1e-14);
    }
}
