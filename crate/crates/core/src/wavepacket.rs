//! Incident single-photon wave packets and their spectra.
//!
//! Fourier convention: β(t) = (2π)^{-1/2} ∫ dω e^{iωt} β̃(ω), so the forward
//! transform carries e^{−iωt}, the same sign as a standard forward DFT. The
//! frequency-domain amplitude equations use the matching d/dt → iω.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::Range;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Zero-padding factor applied before the transform.
pub const ZERO_PAD: usize = 4;
/// Pulse window length in units of the Gaussian width σ_T.
pub const DEFAULT_WINDOW_RATIO: f64 = 10.0;
/// Default number of time samples across the pulse window.
pub const DEFAULT_SAMPLES: usize = 1024;
/// Spectral weight, relative to the peak, below which a grid point is
/// treated as outside the packet.
pub const SUPPORT_THRESHOLD: f64 = 1e-14;

/// Discrete Fourier transform supplied by the caller.
pub trait Fourier {
    /// In-place unnormalised forward transform, X_k = Σ_n x_n e^{−2πi kn/N}.
    fn forward(&self, data: &mut [Complex64]);
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wavepacket {
    /// Sample times on [0, t_window).
    pub t_grid: Vec<f64>,
    /// β_in(t) at the sample times, ∫|β|²dt = 1.
    pub envelope: Vec<Complex64>,
    /// Ascending frequency grid (detuning from the cavity).
    pub omega_grid: Vec<f64>,
    /// β̃_in(ω) on `omega_grid`.
    pub spectrum: Vec<Complex64>,
    /// Standard deviation of |β̃_in|² over the grid.
    pub sigma_omega: f64,
    pub sigma_t: f64,
    pub t_window: f64,
    pub omega_center: f64,
    amplitude: f64,
}

/// Offset-subtracted, clipped Gaussian of width `sigma_t` centred on the
/// window `[0, t_window]`, modulated to carrier `omega_center`.
pub fn truncated_gaussian(
    sigma_t: f64,
    t_window: f64,
    n_samples: usize,
    omega_center: f64,
    fft: &impl Fourier,
) -> Result<Wavepacket> {
    if !(sigma_t > 0.0) || !sigma_t.is_finite() {
        return Err(Error::invalid("sigma_t", sigma_t, "must be positive"));
    }
    if !(t_window >= 8.0 * sigma_t) || !t_window.is_finite() {
        return Err(Error::invalid(
            "t_window",
            t_window,
            "window must span at least 8 sigma_t",
        ));
    }
    if n_samples < 1024 || !n_samples.is_power_of_two() {
        return Err(Error::invalid(
            "n_samples",
            n_samples as f64,
            "must be a power of two no smaller than 1024",
        ));
    }
    if !omega_center.is_finite() {
        return Err(Error::invalid("omega_center", omega_center, "must be finite"));
    }

    let dt = t_window / n_samples as f64;
    let t_grid: Vec<f64> = (0..n_samples).map(|n| n as f64 * dt).collect();
    let shape: Vec<f64> = t_grid
        .iter()
        .map(|&t| clipped_gaussian(t, sigma_t, t_window))
        .collect();
    let norm2: f64 = shape.iter().map(|x| x * x).sum::<f64>() * dt;
    let amplitude = 1.0 / norm2.sqrt();

    // Baseband transform; the carrier only relabels the frequency axis
    // because the DTFT of x_n e^{iω_c t_n} at ω + ω_c equals that of x_n at ω.
    let total = ZERO_PAD * n_samples;
    let mut buf = vec![Complex64::new(0.0, 0.0); total];
    for (slot, &x) in buf.iter_mut().zip(&shape) {
        *slot = Complex64::new(amplitude * x, 0.0);
    }
    fft.forward(&mut buf);

    let d_omega = 2.0 * PI / (total as f64 * dt);
    let scale = dt / (2.0 * PI).sqrt();
    let half = total / 2;
    let mut omega_grid = Vec::with_capacity(total);
    let mut spectrum = Vec::with_capacity(total);
    for j in 0..total {
        // ascending order: indices half..total are the negative frequencies
        let k = (j + half) % total;
        let signed = j as f64 - half as f64;
        omega_grid.push(signed * d_omega + omega_center);
        spectrum.push(buf[k] * scale);
    }

    let envelope = t_grid
        .iter()
        .zip(&shape)
        .map(|(&t, &x)| Complex64::from_polar(amplitude * x, omega_center * t))
        .collect();

    let mut packet = Wavepacket {
        t_grid,
        envelope,
        omega_grid,
        spectrum,
        sigma_omega: 0.0,
        sigma_t,
        t_window,
        omega_center,
        amplitude,
    };
    packet.sigma_omega = packet.spectral_std();
    Ok(packet)
}

/// Packet with spectral standard deviation `bandwidth`, default window.
pub fn with_bandwidth(
    bandwidth: f64,
    n_samples: usize,
    omega_center: f64,
    fft: &impl Fourier,
) -> Result<Wavepacket> {
    let sigma_t = bandwidth_to_sigma_t(bandwidth, n_samples, fft)?;
    truncated_gaussian(
        sigma_t,
        DEFAULT_WINDOW_RATIO * sigma_t,
        n_samples,
        omega_center,
        fft,
    )
}

/// Gaussian width σ_T whose truncated packet (window 10 σ_T) has spectral
/// standard deviation `target`.
///
/// With the window ratio and sample count fixed the construction is scale
/// free, so σ_ω·σ_T is a constant measured once on a reference packet.
pub fn bandwidth_to_sigma_t(target: f64, n_samples: usize, fft: &impl Fourier) -> Result<f64> {
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::invalid("bandwidth", target, "must be positive"));
    }
    let reference = truncated_gaussian(1.0, DEFAULT_WINDOW_RATIO, n_samples, 0.0, fft)?;
    Ok(reference.sigma_omega / target)
}

fn clipped_gaussian(t: f64, sigma_t: f64, t_window: f64) -> f64 {
    let u = t - 0.5 * t_window;
    let floor = (-t_window * t_window / (8.0 * sigma_t * sigma_t)).exp();
    ((-u * u / (2.0 * sigma_t * sigma_t)).exp() - floor).max(0.0)
}

impl Wavepacket {
    pub fn dt(&self) -> f64 {
        self.t_window / self.t_grid.len() as f64
    }

    pub fn d_omega(&self) -> f64 {
        2.0 * PI / (self.omega_grid.len() as f64 * self.dt())
    }

    /// β_in(t) from the closed form, zero outside the window.
    pub fn amplitude_at(&self, t: f64) -> Complex64 {
        if !(0.0..=self.t_window).contains(&t) {
            return Complex64::new(0.0, 0.0);
        }
        let x = self.amplitude * clipped_gaussian(t, self.sigma_t, self.t_window);
        Complex64::from_polar(x, self.omega_center * t)
    }

    /// |β̃_in(ω)|² on the grid.
    pub fn spectral_density(&self) -> Vec<f64> {
        self.spectrum.iter().map(|b| b.norm_sqr()).collect()
    }

    pub fn norm_time(&self) -> f64 {
        self.envelope.iter().map(|b| b.norm_sqr()).sum::<f64>() * self.dt()
    }

    pub fn norm_spectrum(&self) -> f64 {
        self.spectrum.iter().map(|b| b.norm_sqr()).sum::<f64>() * self.d_omega()
    }

    /// Indices of the contiguous block of grid points carrying spectral
    /// weight above [`SUPPORT_THRESHOLD`] of the peak.
    pub fn support(&self) -> Range<usize> {
        let density = self.spectral_density();
        let peak = density.iter().fold(0.0_f64, |m, &x| m.max(x));
        let cut = SUPPORT_THRESHOLD * peak;
        let first = density.iter().position(|&x| x >= cut).unwrap_or(0);
        let last = density.iter().rposition(|&x| x >= cut).unwrap_or(0);
        first..last + 1
    }

    /// Frequencies of [`Wavepacket::support`].
    pub fn support_grid(&self) -> &[f64] {
        &self.omega_grid[self.support()]
    }

    /// Index of `omega[0]` in the packet grid, checking that every point of
    /// `omega` is the consecutive grid point.
    pub fn grid_offset(&self, omega: &[f64]) -> Result<usize> {
        let grid = &self.omega_grid;
        let dw = self.d_omega();
        let first = *omega
            .first()
            .ok_or(Error::GridMismatch("spectrum is empty"))?;
        let pos = ((first - grid[0]) / dw).round();
        if !(pos >= 0.0) || pos as usize + omega.len() > grid.len() {
            return Err(Error::GridMismatch("spectrum extends past the packet grid"));
        }
        let offset = pos as usize;
        let tol = 1e-9 * dw;
        for (i, &w) in omega.iter().enumerate() {
            if (w - grid[offset + i]).abs() > tol {
                return Err(Error::GridMismatch("spectrum points are not packet grid points"));
            }
        }
        Ok(offset)
    }

    fn spectral_std(&self) -> f64 {
        let density = self.spectral_density();
        let total: f64 = density.iter().sum();
        let mean = density
            .iter()
            .zip(&self.omega_grid)
            .map(|(p, w)| p * w)
            .sum::<f64>()
            / total;
        let var = density
            .iter()
            .zip(&self.omega_grid)
            .map(|(p, w)| p * (w - mean) * (w - mean))
            .sum::<f64>()
            / total;
        var.sqrt()
    }
}

#[cfg(test)]
pub(crate) mod testing {
    //! Direct O(N²) transform standing in for an FFT inside this crate's tests.
    use super::*;

    pub struct NaiveDft;

    impl Fourier for NaiveDft {
        fn forward(&self, data: &mut [Complex64]) {
            let n = data.len();
            let input: Vec<Complex64> = data.to_vec();
            // only the first quarter is non-zero for padded packets
            let last = input.iter().rposition(|x| x.norm_sqr() > 0.0).map_or(0, |i| i + 1);
            for (k, out) in data.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (m, x) in input[..last].iter().enumerate() {
                    let phase = -2.0 * PI * ((k * m) % n) as f64 / n as f64;
                    acc += x * Complex64::from_polar(1.0, phase);
                }
                *out = acc;
            }
        }
    }

    /// Shared 1024-sample packet; building one with the naive transform
    /// takes a moment in debug builds.
    pub fn packet(sigma_t: f64, omega_center: f64) -> Wavepacket {
        truncated_gaussian(sigma_t, 10.0 * sigma_t, 1024, omega_center, &NaiveDft).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testing::{packet, NaiveDft};
    use super::*;

    #[test]
    fn normalised_in_both_domains() {
        let p = packet(2.0, 0.0);
        assert!((p.norm_spectrum() - 1.0).abs() < 1e-10);
        assert!((p.norm_time() - p.norm_spectrum()).abs() < 1e-9);
    }

    #[test]
    fn near_gaussian_bandwidth() {
        let p = packet(2.0, 0.0);
        let ideal = 1.0 / (2.0f64.sqrt() * 2.0);
        assert!((p.sigma_omega / ideal - 1.0).abs() < 0.05, "{}", p.sigma_omega);
    }

    #[test]
    fn carrier_shifts_spectrum() {
        let base = packet(2.0, 0.0);
        let shifted = packet(2.0, 1.7);
        for (a, b) in base.omega_grid.iter().zip(&shifted.omega_grid) {
            assert!((b - a - 1.7).abs() < 1e-12);
        }
        for (a, b) in base.spectrum.iter().zip(&shifted.spectrum) {
            assert!((a - b).norm() < 1e-12);
        }
        // the time samples carry the carrier consistently with the grid
        let probe = shifted.t_grid[300];
        assert!((shifted.envelope[300] - shifted.amplitude_at(probe)).norm() < 1e-12);
    }

    #[test]
    fn grid_is_wide_and_edges_are_empty() {
        let p = packet(2.0, 0.0);
        let lo = p.omega_grid[0];
        let hi = *p.omega_grid.last().unwrap();
        assert!(-lo >= 20.0 * p.sigma_omega && hi >= 20.0 * p.sigma_omega);
        let d = p.spectral_density();
        let peak = d.iter().cloned().fold(0.0, f64::max);
        assert!(d[0] < 1e-8 * peak && *d.last().unwrap() < 1e-8 * peak);
    }

    #[test]
    fn support_excludes_negligible_tails() {
        let p = packet(2.0, 0.0);
        let s = p.support();
        assert!(s.len() < p.omega_grid.len() / 4);
        let inside: f64 = p.spectral_density()[s].iter().sum::<f64>() * p.d_omega();
        assert!((inside - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(truncated_gaussian(1.0, 7.9, 1024, 0.0, &NaiveDft).is_err());
        assert!(truncated_gaussian(0.0, 10.0, 1024, 0.0, &NaiveDft).is_err());
        assert!(truncated_gaussian(1.0, 10.0, 1000, 0.0, &NaiveDft).is_err());
        assert!(truncated_gaussian(1.0, 10.0, 512, 0.0, &NaiveDft).is_err());
        assert!(bandwidth_to_sigma_t(0.0, 1024, &NaiveDft).is_err());
    }

    #[test]
    fn bandwidth_inversion_against_bisection() {
        let target = 0.1;
        let sigma_t = bandwidth_to_sigma_t(target, 1024, &NaiveDft).unwrap();
        // bisection on σ_ω(σ_T), which decreases in σ_T
        let (mut lo, mut hi) = (1.0_f64, 20.0_f64);
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if packet(mid, 0.0).sigma_omega > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!((sigma_t / oracle - 1.0).abs() < 1e-3, "{sigma_t} vs {oracle}");
        assert!((sigma_t - 7.07).abs() < 0.1);
        let built = packet(sigma_t, 0.0);
        assert!((built.sigma_omega / target - 1.0).abs() < 1e-3);

        let one = bandwidth_to_sigma_t(1.0, 1024, &NaiveDft).unwrap();
        assert!((one - 0.707).abs() < 0.01);
        let two = bandwidth_to_sigma_t(2.0, 1024, &NaiveDft).unwrap();
        assert!((two / one - 0.5).abs() < 1e-3);
    }
}
