//! Symmetric norms and anti-norms on Hermitian matrices and spectral scales.
//!
//! The finite algebra is modelled by `n × n` complex matrices with the
//! normalized trace `τ = Tr/n`; the diffuse algebra by non-increasing step
//! functions on `(0, 1)`. Both share the [`spectral::SpectralScale`]
//! representation, on which every gauge and anti-norm is evaluated.

pub mod error;
pub mod functions;
pub mod gauges;
pub mod linalg;
pub mod majorization;
pub mod orbit;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
