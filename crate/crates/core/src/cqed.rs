//! Circuit-QED variant: a transmon ancilla ladder in a microwave resonator.
//!
//! The resonator couples to the ancilla 0↔1 transition with strength g, a
//! classical drive Ω acts on 1↔2 and, with the register transmon in |1⟩,
//! the exchange ε couples |2_a 1_q⟩ to |3_a 0_q⟩. Ladder matrix elements
//! are g, √2·Ω and √3·ε, which gives
//!
//! ```text
//! R_q = 1 − κ / (κ/2 + iω + g²/(Γ₁/2 + iω + 2Ω²/(Γ₂/2 + iω + q·3ε²/(Γ₃/2 + iω))))
//! ```

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fidelity::{outcome_from_spectra, GateOutcome};
use crate::solver::ReflectionSpectrum;
use crate::wavepacket::Wavepacket;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct CqedParams {
    pub kappa: f64,
    /// Resonator–ancilla coupling.
    pub g: f64,
    /// Drive on the ancilla 1↔2 transition.
    #[cfg_attr(feature = "serde", serde(rename = "Omega"))]
    pub omega: f64,
    /// Register–ancilla exchange coupling.
    #[cfg_attr(feature = "serde", serde(rename = "epsilon"))]
    pub eps: f64,
    /// Decay rates of ancilla levels 1, 2 and 3.
    pub gamma: [f64; 3],
    /// Anharmonicities of the two transmons, used only by [`CqedParams::is_valid`].
    pub alpha: [f64; 2],
}

impl CqedParams {
    /// Parameters whose ancilla level i decays at i·Γ₁, with Γ₁ twice the
    /// decay rate of a register qubit of lifetime `qubit_lifetime`.
    pub fn from_qubit_lifetime(
        kappa: f64,
        g: f64,
        omega: f64,
        eps: f64,
        qubit_lifetime: f64,
        alpha: [f64; 2],
    ) -> Result<Self> {
        if !(qubit_lifetime > 0.0) {
            return Err(Error::invalid("lifetime", qubit_lifetime, "must be positive"));
        }
        let g1 = 2.0 / qubit_lifetime;
        let p = CqedParams {
            kappa,
            g,
            omega,
            eps,
            gamma: [g1, 2.0 * g1, 3.0 * g1],
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("kappa", self.kappa),
            ("g", self.g),
            ("Omega", self.omega),
            ("epsilon", self.eps),
            ("Gamma1", self.gamma[0]),
            ("Gamma2", self.gamma[1]),
            ("Gamma3", self.gamma[2]),
            ("alpha1", self.alpha[0]),
            ("alpha2", self.alpha[1]),
        ];
        for (name, v) in named {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, v, "must be finite and non-negative"));
            }
        }
        if self.kappa == 0.0 {
            return Err(Error::invalid("kappa", 0.0, "must be positive"));
        }
        Ok(())
    }

    /// Whether drive and exchange stay well below half the smaller anharmonicity.
    pub fn is_valid(&self) -> bool {
        let alpha_min = self.alpha[0].min(self.alpha[1]);
        self.omega.max(self.eps) < 0.5 * alpha_min
    }
}

/// Reflection with the register transmon in state `q` ∈ {0, 1}.
pub fn reflect_cqed(p: &CqedParams, q: u8, omega_grid: &[f64]) -> Result<ReflectionSpectrum> {
    p.validate()?;
    if q > 1 {
        return Err(Error::invalid("q", q as f64, "qubit state must be 0 or 1"));
    }
    let sk = p.kappa.sqrt();
    let g2 = p.g * p.g;
    let drive2 = 2.0 * p.omega * p.omega;
    let exchange2 = 3.0 * p.eps * p.eps;
    let n = omega_grid.len();
    let mut out = ReflectionSpectrum {
        omega: Vec::with_capacity(n),
        r: Vec::with_capacity(n),
        c1: Vec::with_capacity(n),
        c2: Vec::with_capacity(n),
        leak: Vec::with_capacity(n),
    };
    for &w in omega_grid {
        if !w.is_finite() {
            return Err(Error::NonFinite { context: "frequency grid", omega: w });
        }
        let s = |rate: f64| Complex64::new(0.5 * rate, w);
        let (s_cav, s1, s2, s3) = (s(p.kappa), s(p.gamma[0]), s(p.gamma[1]), s(p.gamma[2]));
        // Each level of the chain kept as num/den so lossless poles stay finite.
        let (num2, den2) = if q == 1 {
            (s2 * s3 + exchange2, s3)
        } else {
            (s2, Complex64::new(1.0, 0.0))
        };
        let num1 = s1 * num2 + drive2 * den2;
        let den1 = num2;
        let c1 = sk * num1 / (s_cav * num1 + g2 * den1);
        if !c1.is_finite() {
            return Err(Error::NonFinite { context: "ladder reflection", omega: w });
        }
        out.omega.push(w);
        out.r.push(1.0 - sk * c1);
        out.c1.push(c1);
        out.c2.push(Complex64::new(0.0, 0.0));
        out.leak.push(0.0);
    }
    Ok(out)
}

/// Gate error for the circuit-QED scheme; the register does not decay
/// through a dressing factor, so η = 1.
pub fn cqed_gate_error(p: &CqedParams, packet: &Wavepacket, phi: f64) -> Result<GateOutcome> {
    let grid = packet.support_grid();
    let s0 = reflect_cqed(p, 0, grid)?;
    let s1 = reflect_cqed(p, 1, grid)?;
    outcome_from_spectra(packet, &s0, &s1, 1.0, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SystemParams;
    use crate::solver::{reflect_empty, reflect_q0};
    use crate::wavepacket::testing::packet;
    use alloc::vec;
    use alloc::vec::Vec;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    fn base() -> CqedParams {
        CqedParams {
            kappa: 40.0,
            g: 60.0,
            omega: 80.0,
            eps: 150.0,
            gamma: [0.06, 0.12, 0.18],
            alpha: [1000.0, 1000.0],
        }
    }

    /// Resonator ⊗ ancilla ladder ⊗ register, restricted to the states
    /// reachable from a resonator photon, solved densely.
    pub(super) fn dense_ladder(p: &CqedParams, q: usize, w: f64) -> Complex64 {
        // state = (photon, ancilla level, register)
        type State = (usize, usize, usize);
        let couplings = |s: State| -> Vec<(State, f64)> {
            let (n, a, r) = s;
            let mut out = Vec::new();
            if n == 1 && a == 0 {
                out.push(((0, 1, r), p.g));
            }
            if n == 0 && a == 1 {
                out.push(((1, 0, r), p.g));
                out.push(((0, 2, r), 2f64.sqrt() * p.omega));
            }
            if n == 0 && a == 2 {
                out.push(((0, 1, r), 2f64.sqrt() * p.omega));
                if r == 1 {
                    out.push(((0, 3, 0), 3f64.sqrt() * p.eps));
                }
            }
            if n == 0 && a == 3 && r == 0 {
                out.push(((0, 2, 1), 3f64.sqrt() * p.eps));
            }
            out
        };
        let start = (1, 0, q);
        let mut states = vec![start];
        let mut i = 0;
        while i < states.len() {
            for (t, _) in couplings(states[i]) {
                if !states.contains(&t) {
                    states.push(t);
                }
            }
            i += 1;
        }
        let dim = states.len();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (i, &s) in states.iter().enumerate() {
            let decay = if s.0 == 1 { p.kappa } else { p.gamma[s.1 - 1] };
            m[(i, i)] = Complex64::new(w, -0.5 * decay);
            for (t, v) in couplings(s) {
                let j = states.iter().position(|&x| x == t).unwrap();
                m[(i, j)] += Complex64::new(v, 0.0);
            }
        }
        let mut rhs = DVector::<Complex64>::zeros(dim);
        rhs[0] = Complex64::new(0.0, -p.kappa.sqrt());
        let x = m.lu().solve(&rhs).unwrap();
        1.0 - p.kappa.sqrt() * x[0]
    }

    #[test]
    fn decoupled_ancilla_is_empty_cavity() {
        let p = CqedParams { g: 0.0, ..base() };
        let w: Vec<f64> = (-50..=50).map(|i| i as f64 * 3.0).collect();
        let e = reflect_empty(p.kappa, &w).unwrap();
        for q in 0..2 {
            let s = reflect_cqed(&p, q, &w).unwrap();
            for (a, b) in s.r.iter().zip(&e.r) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn lossless_dark_state_and_blocked_cavity() {
        let p = CqedParams { gamma: [0.0; 3], ..base() };
        let r0 = reflect_cqed(&p, 0, &[0.0]).unwrap().r[0];
        assert!((r0 + 1.0).norm() < 1e-14);
        let r1 = reflect_cqed(&p, 1, &[0.0]).unwrap().r[0];
        assert!((r1 - 1.0).norm() < 1e-14);
        let strong = CqedParams { eps: 2000.0, omega: 20.0, gamma: [0.1, 0.2, 0.3], ..base() };
        let r1 = reflect_cqed(&strong, 1, &[0.0]).unwrap().r[0];
        assert!((r1 - 1.0).norm() < 1e-2);
        assert!((r1 - dense_ladder(&strong, 1, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn q0_matches_atomic_closed_form() {
        let p = base();
        let atomic = SystemParams {
            kappa: p.kappa,
            eit_rabi: 2f64.sqrt() * p.omega,
            gamma_e: p.gamma[0],
            gamma_a: p.gamma[1],
            ..SystemParams::dispersive_cloud()
        };
        let w: Vec<f64> = (-100..=100).map(|i| i as f64 * 1.7).collect();
        let a = reflect_q0(&atomic, p.g * p.g, &w).unwrap();
        let b = reflect_cqed(&p, 0, &w).unwrap();
        for (x, y) in a.r.iter().zip(&b.r) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn lifetime_construction_and_validity() {
        let p = CqedParams::from_qubit_lifetime(40.0, 60.0, 80.0, 150.0, 33.0, [400.0, 400.0]).unwrap();
        assert!((p.gamma[0] - 2.0 / 33.0).abs() < 1e-15);
        assert!((p.gamma[2] - 3.0 * p.gamma[0]).abs() < 1e-15);
        assert!(p.is_valid());
        let weak = CqedParams { alpha: [250.0, 1000.0], ..p };
        assert!(!weak.is_valid());
        assert!(CqedParams::from_qubit_lifetime(40.0, 60.0, 80.0, 150.0, 0.0, [1.0, 1.0]).is_err());
        assert!(reflect_cqed(&p, 2, &[0.0]).is_err());
    }

    #[test]
    fn ideal_limit_gives_small_error() {
        let p = CqedParams { gamma: [0.0; 3], g: 200.0, ..base() };
        let wide = cqed_gate_error(&p, &packet(2.0, 0.0), core::f64::consts::PI).unwrap();
        let out = cqed_gate_error(&p, &packet(7.07, 0.0), core::f64::consts::PI).unwrap();
        assert!(out.error < 1e-3, "{}", out.error);
        assert!(out.error < wide.error);
        assert_eq!(out.eta, 1.0);
    }

    proptest! {
        #[test]
        fn matches_dense_ladder(
            kappa in 1.0f64..200.0,
            g in 0.0f64..200.0,
            omega in 0.0f64..150.0,
            eps in 0.0f64..200.0,
            g1 in 1e-3f64..2.0,
            w in -300.0f64..300.0,
            q in 0usize..2,
        ) {
            let p = CqedParams { kappa, g, omega, eps, gamma: [g1, 2.0 * g1, 3.0 * g1], alpha: [500.0, 500.0] };
            let r = reflect_cqed(&p, q as u8, &[w]).unwrap().r[0];
            let oracle = dense_ladder(&p, q, w);
            prop_assert!((r - oracle).norm() < 1e-10 * (1.0 + oracle.norm()));
        }
    }
}
