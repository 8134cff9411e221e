//! Physical parameter record shared by every solver.

use crate::error::{Error, Result};

/// All rates, detunings and couplings of the atomic setup.
///
/// Rates are in 1/µs, `c3` in GHz·µm³, `rho0` in atoms/µm³ and
/// `cloud_width` in µm. Config keys use the conventional symbols
/// (`Omega`, `Gamma`, `Delta`, `C3`, `Rc`).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct SystemParams {
    /// Cavity linewidth κ.
    pub kappa: f64,
    /// EIT control Rabi frequency Ω on the ancilla upper transition.
    #[cfg_attr(feature = "serde", serde(rename = "Omega"))]
    pub eit_rabi: f64,
    /// Decay Γ of the ancilla intermediate state.
    #[cfg_attr(feature = "serde", serde(rename = "Gamma"))]
    pub gamma_e: f64,
    /// Ancilla Rydberg-state decay.
    pub gamma_a: f64,
    /// Qubit Rydberg-state decay, enters only through the survival factor.
    pub gamma_q: f64,
    /// Signed detuning Δ of the qubit dressing laser.
    #[cfg_attr(feature = "serde", serde(rename = "Delta"))]
    pub detuning: f64,
    /// Dressing Rabi frequency ε.
    #[cfg_attr(feature = "serde", serde(rename = "epsilon"))]
    pub dressing_rabi: f64,
    /// Dipolar coefficient C₃, signed.
    #[cfg_attr(feature = "serde", serde(rename = "C3"))]
    pub c3: f64,
    /// Single-atom cavity coupling g.
    pub g_single: f64,
    /// Peak ancilla density.
    pub rho0: f64,
    /// Gaussian width R_c of the ancilla cloud.
    #[cfg_attr(feature = "serde", serde(rename = "Rc"))]
    pub cloud_width: f64,
}

impl SystemParams {
    /// Red-detuned dressing of a full Gaussian cloud (dispersive blockade).
    ///
    /// 10¹³ cm⁻³ is 10 µm⁻³. The detuning has the same sign as `c3`, so the
    /// pair state never crosses the dark resonance.
    pub fn dispersive_cloud() -> Self {
        SystemParams {
            kappa: 20.0,
            eit_rabi: 30.0,
            gamma_e: 3.0,
            gamma_a: 1e-3,
            gamma_q: 1e-3,
            detuning: -300.0,
            dressing_rabi: 0.0,
            c3: -30.0,
            g_single: 0.5,
            rho0: 10.0,
            cloud_width: 5.0,
        }
    }

    /// Blue-detuned dressing around a resonant shell of ancillas.
    ///
    /// `detuning` and `dressing_rabi` are placeholders; the shell sweep sets
    /// them from the mixing angle and the resonance radius.
    pub fn resonant_shell() -> Self {
        SystemParams {
            kappa: 20.0,
            eit_rabi: 30.0,
            gamma_e: 3.0,
            gamma_a: 1e-3,
            gamma_q: 1e-3,
            detuning: 140.0,
            dressing_rabi: 0.0,
            c3: -18.0,
            g_single: 0.5,
            rho0: 10.0,
            cloud_width: 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let non_negative = [
            ("kappa", self.kappa),
            ("Omega", self.eit_rabi),
            ("Gamma", self.gamma_e),
            ("gamma_a", self.gamma_a),
            ("gamma_q", self.gamma_q),
            ("epsilon", self.dressing_rabi),
            ("g_single", self.g_single),
            ("rho0", self.rho0),
            ("Rc", self.cloud_width),
        ];
        for (name, value) in non_negative {
            if !value.is_finite() {
                return Err(Error::invalid(name, value, "must be finite"));
            }
            if value < 0.0 {
                return Err(Error::invalid(name, value, "must be non-negative"));
            }
        }
        for (name, value) in [("Delta", self.detuning), ("C3", self.c3)] {
            if !value.is_finite() {
                return Err(Error::invalid(name, value, "must be finite"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        SystemParams::dispersive_cloud().validate().unwrap();
        SystemParams::resonant_shell().validate().unwrap();
    }

    #[test]
    fn rejects_negative_rates() {
        let mut p = SystemParams::dispersive_cloud();
        p.gamma_e = -1.0;
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { name: "Gamma", .. })
        ));
        let mut p = SystemParams::dispersive_cloud();
        p.rho0 = f64::NAN;
        assert!(p.validate().is_err());
    }

    #[test]
    fn signed_fields_may_be_negative() {
        let mut p = SystemParams::dispersive_cloud();
        p.detuning = -1.0;
        p.c3 = 5.0;
        p.validate().unwrap();
    }
}
