//! Time-domain cross-check of the frequency-domain solver.
//!
//! Integrates iẋ = Hx + d(t) with classical fixed-step RK4. The state holds
//! the two cavity amplitudes followed by one block (A₁, A₂, B₁, B₂) per bin.
//! Identical atoms of a bin act as one collective mode with coupling g√w.
//! The input drives C₁ through √κ β_in and the output is β_in − √κ C₁.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dressing::{DressedBranch, DressedQubit};
use crate::ensemble::AncillaEnsemble;
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::solver::ReflectionSpectrum;
use crate::wavepacket::Wavepacket;

/// Largest number of bins the oracle accepts.
pub const MAX_BINS: usize = 64;
/// Steps per largest rate must exceed this inverse.
pub const STABILITY_FACTOR: f64 = 0.1;
/// Tolerated gain of total norm over the injected norm.
pub const NORM_GROWTH_LIMIT: f64 = 1e-9;

const PHASE_RESYNC: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    /// Time step.
    pub dt: f64,
    /// Final time; the pulse starts at t = 0.
    pub t_end: f64,
    /// Steps between stored amplitude snapshots, 0 for none.
    pub record_stride: usize,
}

impl IntegrationOptions {
    /// Step `safety` / (largest rate) and `tail` µs of ringing after the pulse.
    pub fn automatic(
        params: &SystemParams,
        dq: &DressedQubit,
        ens: &AncillaEnsemble,
        packet: &Wavepacket,
        safety: f64,
        tail: f64,
    ) -> Self {
        let rate = max_rate(params, dq, ens);
        // an integer number of steps per pulse-sample interval keeps the
        // input samples on the integration grid
        let sample = packet.dt();
        let per_sample = (sample * rate / safety).ceil().max(1.0);
        IntegrationOptions {
            dt: sample / per_sample,
            t_end: packet.t_window + tail.max(5.0 / params.kappa),
            record_stride: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    pub dt: f64,
    /// Times of `beta_in` and `beta_out`, one per step including t = 0.
    pub t_grid: Vec<f64>,
    pub beta_in: Vec<Complex64>,
    pub beta_out: Vec<Complex64>,
    /// Times of the stored amplitude snapshots.
    pub snapshot_times: Vec<f64>,
    /// State vectors [C₁, C₂, (A₁, A₂, B₁, B₂) per bin] at the snapshot times.
    pub amplitudes: Vec<Vec<Complex64>>,
    pub final_state: Vec<Complex64>,
    /// ∫|β_in|²dt by Simpson's rule.
    pub input_norm: f64,
    /// ∫|β_out|²dt.
    pub output_norm: f64,
    /// ∫κ|C₂|²dt, emitted into the spectator channel.
    pub leak_norm: f64,
    /// Σ|x|² at the final time.
    pub residual_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    /// (Σ|a − b|² dω)^{1/2}.
    pub l2: f64,
    /// max |a − b|.
    pub linf: f64,
}

/// Largest frequency scale in the equations of motion.
pub fn max_rate(params: &SystemParams, dq: &DressedQubit, ens: &AncillaEnsemble) -> f64 {
    [
        params.kappa,
        params.eit_rabi,
        dq.delta_bar,
        ens.max_abs_blockade(),
        params.gamma_e,
        ens.g2.sqrt(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

struct Model {
    kappa_half: f64,
    sqrt_kappa: f64,
    gamma_e_half: f64,
    gamma_a_half: f64,
    rabi: f64,
    delta: f64,
    bins: Vec<BinCoefficients>,
}

struct BinCoefficients {
    h: f64,
    driven: f64,
    other: f64,
    cross: f64,
}

impl Model {
    /// ẋ = −i(Hx) + √κ β e₁.
    fn derivative(&self, x: &[Complex64], beta: Complex64, out: &mut [Complex64]) {
        let mi = Complex64::new(0.0, -1.0);
        let (c1, c2) = (x[0], x[1]);
        let mut sum1 = Complex64::new(0.0, 0.0);
        let mut sum2 = Complex64::new(0.0, 0.0);
        for (m, bin) in self.bins.iter().enumerate() {
            let k = 2 + 4 * m;
            let (a1, a2, b1, b2) = (x[k], x[k + 1], x[k + 2], x[k + 3]);
            sum1 += a1 * bin.h;
            sum2 += a2 * bin.h;
            out[k] = mi * (c1 * bin.h + b1 * self.rabi) - a1 * self.gamma_e_half;
            out[k + 1] =
                mi * (a2 * self.delta + c2 * bin.h + b2 * self.rabi) - a2 * self.gamma_e_half;
            out[k + 2] = mi * (a1 * self.rabi + b1 * bin.driven + b2 * bin.cross)
                - b1 * self.gamma_a_half;
            out[k + 3] = mi * (a2 * self.rabi + b2 * (self.delta + bin.other) + b1 * bin.cross)
                - b2 * self.gamma_a_half;
        }
        out[0] = mi * sum1 - c1 * self.kappa_half + beta * self.sqrt_kappa;
        out[1] = mi * (c2 * self.delta + sum2) - c2 * self.kappa_half;
    }
}

/// Integrates the driven amplitude equations for `packet`.
pub fn integrate(
    params: &SystemParams,
    dq: &DressedQubit,
    branch: DressedBranch,
    ens: &AncillaEnsemble,
    packet: &Wavepacket,
    options: &IntegrationOptions,
) -> Result<TimeTrace> {
    params.validate()?;
    if ens.bins.len() > MAX_BINS {
        return Err(Error::invalid(
            "n_bins",
            ens.bins.len() as f64,
            "time-domain oracle is limited to 64 bins",
        ));
    }
    let rate = max_rate(params, dq, ens);
    let dt = options.dt;
    if !(dt > 0.0) || dt * rate >= STABILITY_FACTOR {
        return Err(Error::invalid(
            "dt",
            dt,
            "must be positive and below 0.1 over the largest rate",
        ));
    }
    if !(options.t_end >= packet.t_window + 5.0 / params.kappa) || !options.t_end.is_finite() {
        return Err(Error::invalid(
            "t_end",
            options.t_end,
            "must extend five cavity lifetimes past the pulse",
        ));
    }

    let mix = dq.mixing(branch);
    let model = Model {
        kappa_half: 0.5 * params.kappa,
        sqrt_kappa: params.kappa.sqrt(),
        gamma_e_half: 0.5 * params.gamma_e,
        gamma_a_half: 0.5 * params.gamma_a,
        rabi: params.eit_rabi,
        delta: mix.other_offset,
        bins: ens
            .bins
            .iter()
            .map(|b| BinCoefficients {
                h: b.g * b.weight.sqrt(),
                driven: mix.driven_pop * b.blockade,
                other: mix.other_pop * b.blockade,
                cross: mix.cross * b.blockade,
            })
            .collect(),
    };

    let n_steps = (options.t_end / dt).ceil() as usize;
    let dim = 2 + 4 * ens.bins.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut x = vec![zero; dim];
    let mut k1 = vec![zero; dim];
    let mut k2 = vec![zero; dim];
    let mut k3 = vec![zero; dim];
    let mut k4 = vec![zero; dim];
    let mut tmp = vec![zero; dim];

    let mut trace = TimeTrace {
        dt,
        t_grid: Vec::with_capacity(n_steps + 1),
        beta_in: Vec::with_capacity(n_steps + 1),
        beta_out: Vec::with_capacity(n_steps + 1),
        snapshot_times: Vec::new(),
        amplitudes: Vec::new(),
        final_state: Vec::new(),
        input_norm: 0.0,
        output_norm: 0.0,
        leak_norm: 0.0,
        residual_norm: 0.0,
    };
    let mut leak = Vec::with_capacity(n_steps + 1);

    let record = |step: usize, x: &[Complex64], trace: &mut TimeTrace, leak: &mut Vec<Complex64>| {
        leak.push(x[1] * model.sqrt_kappa);
        let t = step as f64 * dt;
        let b_in = packet.amplitude_at(t);
        trace.t_grid.push(t);
        trace.beta_in.push(b_in);
        trace.beta_out.push(b_in - x[0] * model.sqrt_kappa);
        if options.record_stride > 0 && step % options.record_stride == 0 {
            trace.snapshot_times.push(t);
            trace.amplitudes.push(x.to_vec());
        }
    };

    record(0, &x, &mut trace, &mut leak);
    for step in 0..n_steps {
        let t = step as f64 * dt;
        let b0 = packet.amplitude_at(t);
        let bh = packet.amplitude_at(t + 0.5 * dt);
        let b1 = packet.amplitude_at(t + dt);

        model.derivative(&x, b0, &mut k1);
        for i in 0..dim {
            tmp[i] = x[i] + k1[i] * (0.5 * dt);
        }
        model.derivative(&tmp, bh, &mut k2);
        for i in 0..dim {
            tmp[i] = x[i] + k2[i] * (0.5 * dt);
        }
        model.derivative(&tmp, bh, &mut k3);
        for i in 0..dim {
            tmp[i] = x[i] + k3[i] * dt;
        }
        model.derivative(&tmp, b1, &mut k4);
        for i in 0..dim {
            x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                context: "time integration",
                omega: f64::NAN,
            });
        }
        record(step + 1, &x, &mut trace, &mut leak);
    }

    trace.input_norm = integrated_norm(&trace.beta_in, dt);
    trace.output_norm = integrated_norm(&trace.beta_out, dt);
    trace.leak_norm = integrated_norm(&leak, dt);
    trace.residual_norm = x.iter().map(|v| v.norm_sqr()).sum();
    trace.final_state = x;
    let excess = trace.output_norm + trace.leak_norm + trace.residual_norm - trace.input_norm;
    if excess > NORM_GROWTH_LIMIT {
        return Err(Error::NormGrowth { excess });
    }
    Ok(trace)
}

/// Composite Simpson weight of sample `k` out of `n`, in units of the step.
/// An even sample count closes with a trapezoid on the last interval.
fn simpson_weight(k: usize, n: usize) -> f64 {
    match n {
        1 => return 1.0,
        2 => return 0.5,
        _ => {}
    }
    let m = if n % 2 == 1 { n } else { n - 1 };
    let mut w = if k >= m {
        0.0
    } else if k == 0 || k == m - 1 {
        1.0 / 3.0
    } else if k % 2 == 1 {
        4.0 / 3.0
    } else {
        2.0 / 3.0
    };
    if m < n && (k == m - 1 || k == n - 1) {
        w += 0.5;
    }
    w
}

fn integrated_norm(samples: &[Complex64], dt: f64) -> f64 {
    let n = samples.len();
    samples
        .iter()
        .enumerate()
        .map(|(k, v)| simpson_weight(k, n) * v.norm_sqr())
        .sum::<f64>()
        * dt
}

/// (2π)^{-1/2} ∫ f(t) e^{−iωt} dt by Simpson's rule on samples at
/// t_k = t0 + k·dt.
pub fn fourier_at(samples: &[Complex64], t0: f64, dt: f64, omega: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let norm = dt / (2.0 * PI).sqrt();
    omega
        .iter()
        .map(|&w| {
            let step = Complex64::from_polar(1.0, -w * dt);
            let mut phase = Complex64::from_polar(1.0, -w * t0);
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, s) in samples.iter().enumerate() {
                if k > 0 && k % PHASE_RESYNC == 0 {
                    phase = Complex64::from_polar(1.0, -w * (t0 + k as f64 * dt));
                }
                acc += s * phase * simpson_weight(k, n);
                phase *= step;
            }
            acc * norm
        })
        .collect()
}

/// L² and L∞ distance between two sampled spectra on a grid of spacing `d_omega`.
pub fn discrepancy(a: &[Complex64], b: &[Complex64], d_omega: f64) -> Result<Discrepancy> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch("spectra have different lengths"));
    }
    let mut sum = 0.0;
    let mut linf = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let d = (x - y).norm();
        sum += d * d;
        linf = linf.max(d);
    }
    Ok(Discrepancy {
        l2: (sum * d_omega).sqrt(),
        linf,
    })
}

/// Compares the transformed output of `trace` with R(ω)·β̃_in(ω).
pub fn compare_spectral(
    trace: &TimeTrace,
    spectrum: &ReflectionSpectrum,
    packet: &Wavepacket,
) -> Result<Discrepancy> {
    let offset = packet.grid_offset(&spectrum.omega)?;
    let t0 = trace.t_grid.first().copied().unwrap_or(0.0);
    let measured = fourier_at(&trace.beta_out, t0, trace.dt, &spectrum.omega);
    let expected: Vec<Complex64> = spectrum
        .r
        .iter()
        .zip(&packet.spectrum[offset..offset + spectrum.len()])
        .map(|(r, b)| r * b)
        .collect();
    discrepancy(&measured, &expected, packet.d_omega())
}
