//! Standard-library companion of `dressgate-core`: FFT backend, figure
//! sweeps, run configuration, CSV output and the command-line runner.

pub mod config;
pub mod export;
pub mod fft;
pub mod run;
pub mod sweeps;
