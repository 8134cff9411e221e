//! Single-photon reflection from an ensemble-loaded cavity whose dark
//! resonance is switched by a Rydberg-dressed qubit atom.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! numerics: parameter records, ensemble geometry, the frequency-domain
//! elimination solver, a time-domain RK4 cross-check, gate fidelities, the
//! circuit-QED variant and a bounded simplex optimizer. Fourier transforms
//! are supplied by the caller through [`wavepacket::Fourier`].
//!
//! Units: times in µs, rates and frequencies in 1/µs. A value quoted as
//! "MHz" is used with the same number in 1/µs, no factor of 2π anywhere.
//! Lengths are in µm and the dipolar coefficient `c3` in GHz·µm³.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cqed;
pub mod dressing;
pub mod ensemble;
mod error;
pub mod fidelity;
mod linalg;
pub mod optimizer;
pub mod oracle;
pub mod params;
pub mod solver;
pub mod wavepacket;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use cqed::CqedParams;
pub use dressing::{DressedBranch, DressedQubit};
pub use ensemble::{AncillaBin, AncillaEnsemble, Geometry};
pub use fidelity::{GateConfig, GateOutcome, GateTime};
pub use params::SystemParams;
pub use solver::{BinResponse, ReflectionSpectrum};
pub use wavepacket::{Fourier, Wavepacket};
