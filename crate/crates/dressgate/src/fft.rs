//! FFT backend for the core crate and a cached packet builder.

use dressgate_core::wavepacket::{self, Fourier, DEFAULT_WINDOW_RATIO};
use dressgate_core::{Complex64, Error, Result, Wavepacket};
use rustfft::FftPlanner;

/// Forward transform through `rustfft`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RustFft;

impl Fourier for RustFft {
    fn forward(&self, data: &mut [Complex64]) {
        let fft = FftPlanner::<f64>::new().plan_fft_forward(data.len());
        fft.process(data);
    }
}

/// Builds packets of a given spectral width with the default window.
#[derive(Debug, Clone, Copy)]
pub struct PacketFactory {
    n_samples: usize,
    /// σ_ω·σ_T of the truncated shape at this sample count.
    width_product: f64,
}

impl PacketFactory {
    pub fn new(n_samples: usize) -> Result<Self> {
        let width_product = wavepacket::bandwidth_to_sigma_t(1.0, n_samples, &RustFft)?;
        Ok(PacketFactory { n_samples, width_product })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn sigma_t(&self, bandwidth: f64) -> f64 {
        self.width_product / bandwidth
    }

    pub fn make(&self, bandwidth: f64, omega_center: f64) -> Result<Wavepacket> {
        if !(bandwidth > 0.0) || !bandwidth.is_finite() {
            return Err(Error::invalid("bandwidth", bandwidth, "must be positive"));
        }
        let sigma_t = self.sigma_t(bandwidth);
        wavepacket::truncated_gaussian(
            sigma_t,
            DEFAULT_WINDOW_RATIO * sigma_t,
            self.n_samples,
            omega_center,
            &RustFft,
        )
    }
}
