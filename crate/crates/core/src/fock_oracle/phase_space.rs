//! Husimi densities and Wehrl-type functionals `∫ f(⟨z|ρ|z⟩) d²z/π`.
//!
//! In polar coordinates `z = √t e^{iφ}` the measure `d²z/π` becomes
//! `dt dφ/2π`, and for fixed `t` the Husimi density is a trigonometric
//! polynomial in `φ` whose coefficients are sums along the diagonals of `ρ`.
//! The angular integral uses the periodic trapezoid rule; the radial one uses
//! composite Gauss-Legendre panels on `[0, T]`, with `T` far enough out that
//! the density has decayed below roundoff.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ConcaveFn, FockDensity};
use crate::error::{Error, Result};

/// `⟨z|ρ|z⟩`. Exact for the truncated state: the coherent vector is only
/// ever paired with levels where `ρ` has support.
pub fn husimi(rho: &FockDensity, z: Complex64) -> f64 {
    let amps = super::coherent_amplitudes(z, rho.dim());
    let value = amps.dotc(&(rho.matrix() * &amps)).re;
    value.max(0.0)
}

const GL_ORDER: usize = 16;
const MAX_DOUBLINGS: usize = 5;
const CONVERGENCE_TOL: f64 = 1e-5;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

struct Grid {
    /// `(t, weight)` for the radial integral.
    radial: Vec<(f64, f64)>,
    angular: usize,
}

impl Grid {
    fn new(radius_sq: f64, radial_nodes: usize, angular: usize) -> Self {
        let panels = radial_nodes.div_ceil(GL_ORDER).max(1);
        let rule = gauss_legendre(GL_ORDER);
        let width = radius_sq / panels as f64;
        let mut radial = Vec::with_capacity(panels * GL_ORDER);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            for &(x, w) in &rule {
                radial.push((mid + 0.5 * width * x, 0.5 * width * w));
            }
        }
        Self { radial, angular: angular.max(4) }
    }
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for i in 1..n {
        out[i] = out[i - 1] + (i as f64).ln();
    }
    out
}

fn integrate(rho: &FockDensity, f: ConcaveFn, grid: &Grid) -> f64 {
    let dim = rho.dim();
    let lf = ln_factorials(dim);
    let m = rho.matrix();
    let phases: Vec<Vec<Complex64>> = (0..grid.angular)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / grid.angular as f64;
            (0..dim).map(|d| Complex64::from_polar(1.0, d as f64 * phi)).collect()
        })
        .collect();
    let mut total = 0.0;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
    for &(t, weight) in &grid.radial {
        let ln_t = t.ln();
        // p(t, φ) = c_0 + 2 Re Σ_{d>0} c_d e^{idφ}, c_d = Σ_n ρ_{n,n+d} (...)
        for (d, c) in coeffs.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..dim - d {
                let r = m[(n, n + d)];
                if r.norm_sqr() == 0.0 {
                    continue;
                }
                let ln_mag = 0.5 * (2 * n + d) as f64 * ln_t - 0.5 * (lf[n] + lf[n + d]) - t;
                acc += r * ln_mag.exp();
            }
            *c = acc;
        }
        let mut ring = 0.0;
        for phase in &phases {
            let mut p = coeffs[0].re;
            for d in 1..dim {
                p += 2.0 * (coeffs[d] * phase[d]).re;
            }
            ring += f.eval(p.max(0.0));
        }
        total += weight * ring / grid.angular as f64;
    }
    total
}

/// `∫ f(p_ρ(z)) d²z/π`, refined by doubling both node counts until two
/// successive values agree to `1e-5`.
pub fn wehrl_functional(rho: &FockDensity, f: ConcaveFn, radial_nodes: usize, angular_nodes: usize) -> Result<f64> {
    let n = rho.cutoff() as f64;
    let radius_sq = n + 12.0 * (n + 1.0).sqrt() + 40.0;
    let (mut r, mut a) = (radial_nodes.max(GL_ORDER), angular_nodes.max(4));
    let mut previous = integrate(rho, f, &Grid::new(radius_sq, r, a));
    let mut change = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        r *= 2;
        a *= 2;
        let value = integrate(rho, f, &Grid::new(radius_sq, r, a));
        change = (value - previous).abs();
        if change < CONVERGENCE_TOL {
            return Ok(value);
        }
        previous = value;
    }
    Err(Error::QuadratureNotConverged { change })
}

/// [`wehrl_functional`] with node counts scaled to the state's cutoff.
pub fn wehrl_functional_default(rho: &FockDensity, f: ConcaveFn) -> Result<f64> {
    let n = rho.cutoff();
    let radial = GL_ORDER * (8 + n);
    let angular = (4 * (n + 1)).max(16);
    wehrl_functional(rho, f, radial, angular)
}

#[cfg(test)]
mod tests {
    use super::super::{coherent_fock, gaussian_to_fock, FockPure, OracleConfig};
    use super::*;
    use crate::states::{g, GaussianState};
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(16);
        let sum: f64 = rule.iter().map(|(_, w)| w).sum();
        assert_abs_diff_eq!(sum, 2.0, epsilon = 1e-14);
        let x30: f64 = rule.iter().map(|(x, w)| w * x.powi(30)).sum();
        assert_abs_diff_eq!(x30, 2.0 / 31.0, epsilon = 1e-14);
    }

    #[test]
    fn husimi_examples() {
        let z = Complex64::new(0.4, -1.1);
        let vac = FockDensity::from_pure(&FockPure::number_state(0, 0).unwrap());
        assert_abs_diff_eq!(husimi(&vac, z), (-z.norm_sqr()).exp(), epsilon = 1e-15);
        let w = Complex64::new(-0.3, 0.5);
        let coh = FockDensity::from_pure(&coherent_fock(w, 40).unwrap());
        assert_abs_diff_eq!(husimi(&coh, z), (-(z - w).norm_sqr()).exp(), epsilon = 1e-10);
        let one = FockDensity::from_pure(&FockPure::number_state(1, 3).unwrap());
        assert_abs_diff_eq!(husimi(&one, z), z.norm_sqr() * (-z.norm_sqr()).exp(), epsilon = 1e-15);
    }

    #[test]
    fn wehrl_examples() {
        let vac = FockDensity::from_pure(&FockPure::number_state(0, 0).unwrap());
        assert_abs_diff_eq!(wehrl_functional_default(&vac, ConcaveFn::NegXLogX).unwrap(), 1.0, epsilon = 1e-6);
        let one = FockDensity::from_pure(&FockPure::number_state(1, 1).unwrap());
        let euler = 0.577_215_664_901_532_9;
        assert_abs_diff_eq!(wehrl_functional_default(&one, ConcaveFn::NegXLogX).unwrap(), 1.0 + euler, epsilon = 1e-5);
        let coh = FockDensity::from_pure(&coherent_fock(Complex64::new(1.2, 0.3), 40).unwrap());
        assert_abs_diff_eq!(wehrl_functional_default(&coh, ConcaveFn::Linear).unwrap(), 1.0, epsilon = 1e-5);
        assert_abs_diff_eq!(wehrl_functional_default(&coh, ConcaveFn::NegXLogX).unwrap(), 1.0, epsilon = 1e-5);
    }

    #[test]
    fn berezin_lieb_bracket_for_thermal_states() {
        for n in [0.3, 1.0, 2.5] {
            let rho = gaussian_to_fock(&GaussianState::thermal(&[n]), 90, &OracleConfig::default()).unwrap();
            let wehrl = wehrl_functional_default(&rho, ConcaveFn::NegXLogX).unwrap();
            assert_abs_diff_eq!(wehrl, 1.0 + (n + 1.0f64).ln(), epsilon = 1e-5);
            let lower = 1.0 + n.ln();
            assert!(lower <= g(n) && g(n) <= wehrl + 1e-9);
        }
    }
}
