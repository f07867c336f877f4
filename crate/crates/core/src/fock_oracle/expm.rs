//! `exp(t A) v` for sparse generators, by Taylor series over short steps.
//!
//! The generators used here (beamsplitter, two-mode squeezer, displacement)
//! are anti-Hermitian, so each step is well conditioned once `‖t A‖ / steps`
//! is at most one.

use std::ops::{AddAssign, Mul};

use num_complex::Complex64;

pub(crate) trait Amplitude: Copy + Default + AddAssign + Mul<f64, Output = Self> {
    fn norm_sqr(self) -> f64;
}

impl Amplitude for f64 {
    fn norm_sqr(self) -> f64 {
        self * self
    }
}

impl Amplitude for Complex64 {
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
}

fn norm<T: Amplitude>(v: &[T]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `exp(t A) v`, where `apply(x, y)` writes `A x` into `y` and `bound` is an
/// upper bound on `‖A‖`.
pub(crate) fn expm_action<T: Amplitude>(apply: impl Fn(&[T], &mut [T]), bound: f64, t: f64, v: &[T]) -> Vec<T> {
    let steps = ((t.abs() * bound).ceil() as usize).max(1);
    let h = t / steps as f64;
    let mut acc = v.to_vec();
    let mut term = vec![T::default(); v.len()];
    let mut next = vec![T::default(); v.len()];
    for _ in 0..steps {
        term.copy_from_slice(&acc);
        let mut quiet = 0;
        for k in 1..200 {
            apply(&term, &mut next);
            let scale = h / k as f64;
            for (t_i, n_i) in term.iter_mut().zip(&next) {
                *t_i = *n_i * scale;
            }
            for (a, t_i) in acc.iter_mut().zip(&term) {
                *a += *t_i;
            }
            if norm(&term) <= 1e-18 * norm(&acc).max(1e-300) {
                quiet += 1;
                if quiet == 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
    }
    acc
}

/// Real tridiagonal antisymmetric generator with superdiagonal `b`:
/// `(A x)_i = b_{i-1} x_{i-1} - b_i x_{i+1}`.
pub(crate) struct Antisymmetric {
    pub b: Vec<f64>,
}

impl Antisymmetric {
    pub fn dim(&self) -> usize {
        self.b.len() + 1
    }

    pub fn bound(&self) -> f64 {
        2.0 * self.b.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = 0.0;
            if i > 0 {
                acc += self.b[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc -= self.b[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// `exp(t A) e_0`.
    pub fn evolve_first(&self, t: f64) -> Vec<f64> {
        let mut e0 = vec![0.0; self.dim()];
        e0[0] = 1.0;
        expm_action(|x, y| self.apply(x, y), self.bound(), t, &e0)
    }
}

/// `w a* - conj(w) a` on the span of `|0>, …, |dim-1>`.
pub(crate) fn displacement_generator(w: Complex64, dim: usize) -> impl Fn(&[Complex64], &mut [Complex64]) {
    let sq: Vec<f64> = (0..dim).map(|n| (n as f64).sqrt()).collect();
    move |x: &[Complex64], y: &mut [Complex64]| {
        for n in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            if n > 0 {
                acc += w * x[n - 1] * sq[n];
            }
            if n + 1 < dim {
                acc -= w.conj() * x[n + 1] * sq[n + 1];
            }
            y[n] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_generator() {
        // [[0, -1], [1, 0]] generates rotations
        let gen = Antisymmetric { b: vec![1.0] };
        let v = gen.evolve_first(0.7);
        assert!((v[0] - 0.7f64.cos()).abs() < 1e-15);
        assert!((v[1] - 0.7f64.sin()).abs() < 1e-15);
        let v = gen.evolve_first(-12.3);
        assert!((v[0] - 12.3f64.cos()).abs() < 1e-13);
    }

    #[test]
    fn displacement_of_vacuum_is_coherent() {
        let w = Complex64::new(0.8, -0.6);
        let dim = 60;
        let mut e0 = vec![Complex64::new(0.0, 0.0); dim];
        e0[0] = Complex64::new(1.0, 0.0);
        let out = expm_action(displacement_generator(w, dim), 2.0 * w.norm() * (dim as f64).sqrt(), 1.0, &e0);
        let mut want = Complex64::new((-0.5 * w.norm_sqr()).exp(), 0.0);
        for (n, amp) in out.iter().enumerate().take(20) {
            assert!((amp - want).norm() < 1e-13, "n={n}");
            want = want * w / ((n + 1) as f64).sqrt();
        }
    }
}
