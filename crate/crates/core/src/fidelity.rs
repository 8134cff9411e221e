//! Overlap integrals and the state-averaged controlled-phase gate error.
//!
//! The ideal gate multiplies |0_q 1_ph⟩ by e^{iφ} and leaves the other
//! computational states alone. With reflection overlaps T₀, T₁ and qubit
//! survival amplitude η the obtained evolution projected on the target is
//! diag(1, e^{iφ}T₀, η, T₁η) and the averaged fidelity over d = 4 states is
//! (Tr MM† + |Tr M|²)/20.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dressing::{DressedBranch, DressedQubit};
use crate::ensemble::AncillaEnsemble;
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::solver::{reflect_q0, reflect_q1, ReflectionSpectrum};
use crate::wavepacket::Wavepacket;

const BOUND_SLACK: f64 = 1e-9;
const CLAMP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateOutcome {
    pub t0: Complex64,
    pub t1: Complex64,
    pub eta: f64,
    pub phi: f64,
    pub error: f64,
}

/// Duration entering the qubit decay factor.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum GateTime {
    /// The pulse window of the packet.
    #[default]
    Window,
    /// A fixed duration in µs.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct GateConfig {
    /// Target conditional phase.
    pub phi: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub branch: DressedBranch,
    #[cfg_attr(feature = "serde", serde(default))]
    pub gate_time: GateTime,
}

impl Default for GateConfig {
    fn default() -> Self {
        GateConfig {
            phi: core::f64::consts::PI,
            branch: DressedBranch::Lower,
            gate_time: GateTime::Window,
        }
    }
}

/// T = ∫ dω |β̃_in(ω)|² R*(ω) by the trapezoidal rule.
///
/// `spectrum` must sit on a contiguous block of the packet's frequency grid
/// that covers [`Wavepacket::support`].
pub fn overlap(packet: &Wavepacket, spectrum: &ReflectionSpectrum) -> Result<Complex64> {
    let offset = packet.grid_offset(&spectrum.omega)?;
    let support = packet.support();
    if offset > support.start || offset + spectrum.len() < support.end {
        return Err(Error::GridMismatch("spectrum does not cover the packet support"));
    }
    let n = spectrum.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, r) in spectrum.r.iter().enumerate() {
        let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        acc += r.conj() * (w * packet.spectrum[offset + i].norm_sqr());
    }
    Ok(acc * packet.d_omega())
}

/// Survival amplitude η = exp(−γ T sin²θ / 2).
pub fn eta(gamma_q: f64, t_gate: f64, theta: f64) -> Result<f64> {
    for (name, v) in [("gamma_q", gamma_q), ("t_gate", t_gate), ("theta", theta)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::invalid(name, v, "must be finite and non-negative"));
        }
    }
    let s = theta.sin();
    Ok((-0.5 * gamma_q * t_gate * s * s).exp())
}

/// Average error 1 − (1 + |T₀|² + η² + |T₁|²η² + |1 + e^{iφ}T₀ + η + T₁η|²)/20.
pub fn gate_error(t0: Complex64, t1: Complex64, eta: f64, phi: f64) -> Result<f64> {
    if !(t0.norm() <= 1.0 + BOUND_SLACK) {
        return Err(Error::invalid("T0", t0.norm(), "overlap modulus exceeds one"));
    }
    if !(t1.norm() <= 1.0 + BOUND_SLACK) {
        return Err(Error::invalid("T1", t1.norm(), "overlap modulus exceeds one"));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::invalid("eta", eta, "must lie in (0, 1]"));
    }
    if !phi.is_finite() {
        return Err(Error::invalid("phi", phi, "must be finite"));
    }
    let rotated = Complex64::from_polar(1.0, phi) * t0;
    let coherent = 1.0 + rotated + eta + t1 * eta;
    let fid = (1.0 + t0.norm_sqr() + eta * eta + t1.norm_sqr() * eta * eta + coherent.norm_sqr()) / 20.0;
    Ok(clamp_unit(1.0 - fid))
}

fn clamp_unit(x: f64) -> f64 {
    if x < 0.0 && x > -CLAMP_SLACK {
        0.0
    } else if x > 1.0 && x < 1.0 + CLAMP_SLACK {
        1.0
    } else {
        x
    }
}

/// F = (Tr MM† + |Tr M|²)/20 for a 4×4 overlap matrix given by rows.
pub fn gate_fidelity_matrix<R: AsRef<[Complex64]>>(m: &[R]) -> Result<f64> {
    if m.len() != 4 {
        let cols = m.first().map_or(0, |r| r.as_ref().len());
        return Err(Error::Dimension { rows: m.len(), cols });
    }
    let mut frob = 0.0;
    let mut trace = Complex64::new(0.0, 0.0);
    for (i, row) in m.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != 4 {
            return Err(Error::Dimension { rows: 4, cols: row.len() });
        }
        frob += row.iter().map(|x| x.norm_sqr()).sum::<f64>();
        trace += row[i];
    }
    Ok((frob + trace.norm_sqr()) / 20.0)
}

/// Gate error from precomputed reflection spectra on the packet grid.
pub fn outcome_from_spectra(
    packet: &Wavepacket,
    s0: &ReflectionSpectrum,
    s1: &ReflectionSpectrum,
    eta: f64,
    phi: f64,
) -> Result<GateOutcome> {
    let t0 = overlap(packet, s0)?;
    let t1 = overlap(packet, s1)?;
    let error = gate_error(t0, t1, eta, phi)?;
    Ok(GateOutcome { t0, t1, eta, phi, error })
}

/// Full gate evaluation for the atomic scheme.
pub fn evaluate_gate(
    params: &SystemParams,
    dq: &DressedQubit,
    ens: &AncillaEnsemble,
    packet: &Wavepacket,
    config: &GateConfig,
) -> Result<GateOutcome> {
    let grid = packet.support_grid();
    let s0 = reflect_q0(params, ens.g2, grid)?;
    let s1 = reflect_q1(params, dq, config.branch, ens, grid)?;
    let t_gate = match config.gate_time {
        GateTime::Window => packet.t_window,
        GateTime::Fixed(t) => t,
    };
    let eta = eta(params.gamma_q, t_gate, dq.driven_theta(config.branch))?;
    outcome_from_spectra(packet, &s0, &s1, eta, config.phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dressing::dress;
    use crate::ensemble::{build, Geometry};
    use crate::solver::reflect_empty;
    use crate::wavepacket::testing::packet;
    use alloc::vec;
    use alloc::vec::Vec;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn constant(p: &Wavepacket, value: Complex64) -> ReflectionSpectrum {
        let n = p.omega_grid.len();
        ReflectionSpectrum {
            omega: p.omega_grid.clone(),
            r: vec![value; n],
            c1: vec![c(0.0, 0.0); n],
            c2: vec![c(0.0, 0.0); n],
            leak: vec![0.0; n],
        }
    }

    #[test]
    fn constant_reflection_overlaps() {
        let p = packet(2.0, 0.0);
        assert!((overlap(&p, &constant(&p, c(1.0, 0.0))).unwrap() - 1.0).norm() < 1e-10);
        assert!((overlap(&p, &constant(&p, c(-1.0, 0.0))).unwrap() + 1.0).norm() < 1e-10);
    }

    #[test]
    fn narrowband_empty_cavity_overlap() {
        let p = packet(7.07, 0.0);
        let s = reflect_empty(20.0, p.support_grid()).unwrap();
        let t = overlap(&p, &s).unwrap();
        // R ≈ −1 + 4iω/κ + 8ω²/κ², so T ≈ −1 + 8σ²/κ² on a centred packet
        let series = -1.0 + 8.0 * p.sigma_omega * p.sigma_omega / 400.0;
        assert!((t + 1.0).norm() < 1e-3);
        assert!((t.re - series).abs() < 1e-6, "{t} vs {series}");
    }

    #[test]
    fn overlap_rejects_foreign_grids() {
        let p = packet(2.0, 0.0);
        let shifted: Vec<f64> = p.support_grid().iter().map(|w| w + 0.3 * p.d_omega()).collect();
        let s = reflect_empty(20.0, &shifted).unwrap();
        assert!(matches!(overlap(&p, &s), Err(Error::GridMismatch(_))));
        let support = p.support();
        let short = &p.omega_grid[support.start + 3..support.end];
        let s = reflect_empty(20.0, short).unwrap();
        assert!(matches!(overlap(&p, &s), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(1e-3, 70.7, 0.0).unwrap(), 1.0);
        assert_eq!(eta(0.0, 70.7, 0.4).unwrap(), 1.0);
        let theta = 0.02f64.sqrt().asin();
        assert!((eta(1e-3, 70.7, theta).unwrap() - (-7.07e-4f64).exp()).abs() < 1e-15);
        assert!((eta(1e-3, 70.7, theta).unwrap() - 0.999293).abs() < 1e-6);
        assert!(eta(-1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn gate_error_examples() {
        let phi = 1.1;
        let ideal = gate_error(Complex64::from_polar(1.0, -phi), c(1.0, 0.0), 1.0, phi).unwrap();
        assert!(ideal.abs() < 1e-15);
        assert!((gate_error(c(1.0, 0.0), c(1.0, 0.0), 1.0, PI).unwrap() - 0.6).abs() < 1e-15);
        assert!((gate_error(c(0.0, 0.0), c(0.0, 0.0), 1.0, PI).unwrap() - 0.7).abs() < 1e-15);
        assert!(gate_error(c(1.1, 0.0), c(1.0, 0.0), 1.0, PI).is_err());
        assert!(gate_error(c(1.0, 0.0), c(1.0, 0.0), 0.0, PI).is_err());
    }

    #[test]
    fn matrix_fidelity_examples() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let mut id = [[zero; 4]; 4];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = one;
        }
        assert!((gate_fidelity_matrix(&id).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(gate_fidelity_matrix(&[[zero; 4]; 4]).unwrap(), 0.0);
        assert!(matches!(
            gate_fidelity_matrix(&[[zero; 4]; 3]),
            Err(Error::Dimension { rows: 3, cols: 4 })
        ));
        assert!(matches!(
            gate_fidelity_matrix(&[[zero; 3]; 4]),
            Err(Error::Dimension { rows: 4, cols: 3 })
        ));
    }

    #[test]
    fn no_ensemble_means_no_gate() {
        let mut params = SystemParams::dispersive_cloud();
        params.rho0 = 0.0;
        let ens = build(&params, Geometry::FullCloud { r_min: 0.5, r_max: 20.0 }, 16).unwrap();
        let dq = dress(params.detuning, 0.0).unwrap();
        let p = packet(7.07, 0.0);
        let out = evaluate_gate(&params, &dq, &ens, &p, &GateConfig::default()).unwrap();
        assert!((out.t0 - out.t1).norm() < 1e-14);
        assert!((out.error - 0.6).abs() < 1e-3);
    }

    fn diag(t0: Complex64, t1: Complex64, eta: f64, phi: f64) -> [[Complex64; 4]; 4] {
        let z = c(0.0, 0.0);
        let d = [c(1.0, 0.0), Complex64::from_polar(1.0, phi) * t0, c(eta, 0.0), t1 * eta];
        let mut m = [[z; 4]; 4];
        for i in 0..4 {
            m[i][i] = d[i];
        }
        m
    }

    proptest! {
        #[test]
        fn matrix_and_formula_agree(
            r0 in 0.0f64..1.0, a0 in -PI..PI,
            r1 in 0.0f64..1.0, a1 in -PI..PI,
            eta in 1e-3f64..1.0, phi in -PI..PI,
        ) {
            let t0 = Complex64::from_polar(r0, a0);
            let t1 = Complex64::from_polar(r1, a1);
            let f = gate_fidelity_matrix(&diag(t0, t1, eta, phi)).unwrap();
            let e = gate_error(t0, t1, eta, phi).unwrap();
            prop_assert!((1.0 - f - e).abs() < 1e-14);
        }

        #[test]
        fn decay_only_degrades(phi in -PI..PI, e1 in 0.01f64..1.0, e2 in 0.01f64..1.0) {
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            let t0 = Complex64::from_polar(1.0, -phi);
            let one = c(1.0, 0.0);
            prop_assert!(gate_error(t0, one, lo, phi).unwrap() >= gate_error(t0, one, hi, phi).unwrap() - 1e-15);
        }

        #[test]
        fn exchange_symmetry(r0 in 0.0f64..1.0, a0 in -PI..PI, r1 in 0.0f64..1.0, a1 in -PI..PI, phi in -PI..PI) {
            let t0 = Complex64::from_polar(r0, a0);
            let t1 = Complex64::from_polar(r1, a1);
            let rot = Complex64::from_polar(1.0, phi);
            let a = gate_error(t0, t1, 1.0, phi).unwrap();
            let b = gate_error(t1 / rot, t0 * rot, 1.0, phi).unwrap();
            prop_assert!((a - b).abs() < 1e-14);
        }

        #[test]
        fn error_within_unit_interval(
            r0 in 0.0f64..1.0, a0 in -PI..PI, r1 in 0.0f64..1.0, a1 in -PI..PI,
            eta in 1e-3f64..1.0, phi in -PI..PI,
        ) {
            let e = gate_error(Complex64::from_polar(r0, a0), Complex64::from_polar(r1, a1), eta, phi).unwrap();
            prop_assert!((0.0..=1.0).contains(&e));
        }
    }
}
