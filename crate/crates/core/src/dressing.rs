//! Dressed states of the driven qubit two-level system.
//!
//! The qubit's |1⟩ level is coupled to its Rydberg level |2⟩ by a laser of
//! Rabi frequency ε and detuning Δ. Its eigenstates are
//!
//! ```text
//! |1̄⟩ =  cos Θ |1⟩ − sin Θ |2⟩      (ground-like, Rydberg weight sin²Θ)
//! |2̄⟩ =  cos Θ |2⟩ + sin Θ |1⟩      (Rydberg-like, Rydberg weight cos²Θ)
//! ```
//!
//! with tan 2Θ = 2ε/|Δ| and splitting Δ̄ = √(Δ² + 4ε²). For Δ < 0 the
//! Rydberg-like state lies below the ground-like one, which is carried by
//! [`DressedQubit::signed_splitting`].

use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedQubit {
    /// Signed laser detuning Δ.
    pub detuning: f64,
    /// Dressing Rabi frequency ε.
    pub epsilon: f64,
    /// Mixing angle Θ ∈ [0, π/4].
    pub theta: f64,
    /// Dressed splitting Δ̄ ≥ 0.
    pub delta_bar: f64,
    /// Rydberg weight sin²Θ of the ground-like dressed state.
    pub ryd_pop: f64,
}

/// Which dressed state the qubit is prepared in before the photon arrives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DressedBranch {
    /// Ground-like |1̄⟩.
    #[default]
    Lower,
    /// Rydberg-like |2̄⟩; used for Rydberg populations above one half.
    Upper,
}

/// Blockade coefficients seen by the driven and the spectator dressed
/// channel, and the spectator's energy offset relative to the driven one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ChannelMixing {
    pub driven_pop: f64,
    pub other_pop: f64,
    pub cross: f64,
    pub other_offset: f64,
}

/// Builds the dressed qubit for detuning `detuning` and Rabi frequency `epsilon`.
pub fn dress(detuning: f64, epsilon: f64) -> Result<DressedQubit> {
    if !detuning.is_finite() {
        return Err(Error::invalid("Delta", detuning, "must be finite"));
    }
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid("epsilon", epsilon, "must be finite and non-negative"));
    }
    if detuning == 0.0 && epsilon == 0.0 {
        return Err(Error::invalid(
            "Delta",
            detuning,
            "undriven resonant qubit has no dressed basis",
        ));
    }
    let theta = 0.5 * (2.0 * epsilon).atan2(detuning.abs());
    let s = theta.sin();
    Ok(DressedQubit {
        detuning,
        epsilon,
        theta,
        delta_bar: detuning.hypot(2.0 * epsilon),
        ryd_pop: s * s,
    })
}

/// Dressing Rabi frequency giving the ground-like state Rydberg weight
/// `target_pop` at detuning `detuning`.
pub fn dressing_for_population(detuning: f64, target_pop: f64) -> Result<f64> {
    if !detuning.is_finite() || detuning == 0.0 {
        return Err(Error::invalid("Delta", detuning, "must be finite and non-zero"));
    }
    if !(0.0..0.5).contains(&target_pop) {
        return Err(Error::invalid(
            "target_pop",
            target_pop,
            "must lie in [0, 1/2); one half needs infinite drive",
        ));
    }
    // tan 2Θ = 2√(p(1−p)) / (1 − 2p)
    let p = target_pop;
    Ok(detuning.abs() * (p * (1.0 - p)).sqrt() / (1.0 - 2.0 * p))
}

impl DressedQubit {
    /// Dressed qubit and branch with Rydberg weight `pop` ∈ [0, 1] in the
    /// prepared state. Populations above one half select the Rydberg-like
    /// branch; `pop = 1` is the shelving limit ε = 0.
    pub fn for_population(detuning: f64, pop: f64) -> Result<(DressedQubit, DressedBranch)> {
        if !(0.0..=1.0).contains(&pop) || pop == 0.5 {
            return Err(Error::invalid(
                "pop",
                pop,
                "must lie in [0, 1] and differ from 1/2",
            ));
        }
        if pop < 0.5 {
            let eps = dressing_for_population(detuning, pop)?;
            Ok((dress(detuning, eps)?, DressedBranch::Lower))
        } else {
            let eps = dressing_for_population(detuning, 1.0 - pop)?;
            Ok((dress(detuning, eps)?, DressedBranch::Upper))
        }
    }

    /// Energy of |2̄⟩ minus energy of |1̄⟩.
    pub fn signed_splitting(&self) -> f64 {
        if self.detuning < 0.0 {
            -self.delta_bar
        } else {
            self.delta_bar
        }
    }

    /// Rydberg weight of the prepared state.
    pub fn driven_population(&self, branch: DressedBranch) -> f64 {
        match branch {
            DressedBranch::Lower => self.ryd_pop,
            DressedBranch::Upper => {
                let c = self.theta.cos();
                c * c
            }
        }
    }

    /// Angle whose squared sine is the Rydberg weight of the prepared state.
    pub fn driven_theta(&self, branch: DressedBranch) -> f64 {
        match branch {
            DressedBranch::Lower => self.theta,
            DressedBranch::Upper => FRAC_PI_2 - self.theta,
        }
    }

    pub(crate) fn mixing(&self, branch: DressedBranch) -> ChannelMixing {
        let (s, c) = self.theta.sin_cos();
        match branch {
            DressedBranch::Lower => ChannelMixing {
                driven_pop: s * s,
                other_pop: c * c,
                cross: s * c,
                other_offset: self.signed_splitting(),
            },
            DressedBranch::Upper => ChannelMixing {
                driven_pop: c * c,
                other_pop: s * s,
                cross: s * c,
                other_offset: -self.signed_splitting(),
            },
        }
    }
}
