//! Gauge-covariant and gauge-contravariant bosonic Gaussian channels.
//!
//! A channel is stored as a triple `(K, μ, variant)`. The crate covers the
//! channel calculus (validity, composition, tensor products, action on
//! states), structural results (decomposition into an extreme attenuator
//! followed by an extreme amplifier or contravariant channel, complementary
//! channels, mode-by-mode diagonalization), the closed-form optimizers
//! (minimal output entropy, 1→p norms, constrained classical capacity), and
//! an independent truncated Fock-space oracle used to check all of it.
//!
//! ```
//! use bosonic_core::{channels, optimizers, ComplexMatrix};
//! use num_complex::Complex64;
//!
//! let k = ComplexMatrix::from_element(1, 1, Complex64::new(2f64.sqrt(), 0.0));
//! let amp = channels::make_amplifier(&k).unwrap();
//! let h = optimizers::min_output_entropy(&amp).unwrap();
//! assert!((h - 2f64.ln() * 2.0).abs() < 1e-12);
//! ```

pub mod channels;
pub mod error;
pub mod fock_oracle;
pub mod matstack;
pub mod optimizers;
pub mod records;
pub mod sampling;
pub mod states;
pub mod structure;

pub use channels::{DisplacementImage, GaussianChannel, Variant};
pub use error::{Error, Result};
pub use matstack::{ComplexMatrix, ComplexVector, HermitianMatrix};
pub use optimizers::{CapacityMethod, CapacitySolution};
pub use states::GaussianState;
pub use structure::{Decomposition, Diagonalization, FactorRole, OneModeFactor};

pub use num_complex::Complex64;

/// Default absolute tolerance for validity and extremality checks.
pub const DEFAULT_TOL: f64 = 1e-9;
