//! Entropic Leggett–Garg inequalities for a driven spin-j system.
//!
//! * [`wigner`]: stable Wigner d-matrices and a series reference.
//! * [`temporal`]: sequential projective-measurement statistics and entropies.
//! * [`cone`]: Shannon-cone inequalities, exact Fourier–Motzkin projection,
//!   redundancy removal and violation evaluation.
//! * [`semiclassics`]: uniform (Airy) WKB approximation and large-spin asymptotics.
//! * [`scan`]: parameter sweeps producing CSV/JSON tables.
//! * [`cli`]: the `elgi` command line.
//!
//! Floating-point code is generic over [`Real`] (`f32`/`f64`); inequality
//! algebra is exact over [`Rational`].

pub mod cli;
pub mod cone;
mod dd;
pub mod error;
pub mod scalar;
pub mod scan;
pub mod semiclassics;
pub mod spin;
pub mod temporal;
pub mod wigner;

pub use error::{Error, Result};
pub use scalar::Real;
pub use spin::{MagneticIndex, Spin};

/// Exact coefficient type for inequalities.
pub type Rational = num_rational::BigRational;

pub type DMatrix64 = wigner::DMatrix<f64>;
pub type DMatrix32 = wigner::DMatrix<f32>;
pub type Schedule64 = temporal::Schedule<f64>;
pub type InitialState64 = temporal::InitialState<f64>;
pub type EntropyVector64 = temporal::EntropyVector<f64>;
pub type JointDistribution64 = temporal::JointDistribution<f64>;
