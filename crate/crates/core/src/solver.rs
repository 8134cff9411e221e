//! Frequency-domain reflection coefficients.
//!
//! Amplitude equations in the single-excitation sector, per unit incident
//! amplitude and with d/dt → iω:
//!
//! ```text
//! (ω − iκ/2) C₁ + Σ g A₁ = −i√κ
//! (ω + δ − iκ/2) C₂ + Σ g A₂ = 0
//! (ω [+δ] − iΓ/2) A_j + g C_j + Ω B_j = 0
//! M_B (B₁, B₂) + Ω (A₁, A₂) = 0
//! ```
//!
//! where δ is the energy of the spectator dressed channel relative to the
//! driven one and M_B carries the dressed-basis blockade of each bin. The
//! reflected field is β_out = β_in − √κ C₁ and the spectator channel leaks
//! κ|C₂|² per unit input. Each bin is eliminated in closed form, leaving a
//! single 2×2 system for the cavity amplitudes.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dressing::{ChannelMixing, DressedBranch, DressedQubit};
use crate::ensemble::AncillaEnsemble;
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::params::SystemParams;

/// Largest tolerated Frobenius condition estimate of the cavity system.
pub const CONDITION_LIMIT: f64 = 1e12;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSpectrum {
    pub omega: Vec<f64>,
    /// β̃_out/β̃_in.
    pub r: Vec<Complex64>,
    /// Cavity amplitude of the driven channel per unit input.
    pub c1: Vec<Complex64>,
    /// Cavity amplitude of the spectator channel per unit input.
    pub c2: Vec<Complex64>,
    /// Output norm fraction lost to the spectator channel, κ|C₂|².
    pub leak: Vec<f64>,
}

/// Contribution g·A₁/C₁ of a single atom of one bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinResponse {
    pub radius: f64,
    pub ratio: Complex64,
}

/// Cavity amplitudes at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    r: Complex64,
    c1: Complex64,
    c2: Complex64,
}

impl ReflectionSpectrum {
    fn with_capacity(n: usize) -> Self {
        ReflectionSpectrum {
            omega: Vec::with_capacity(n),
            r: Vec::with_capacity(n),
            c1: Vec::with_capacity(n),
            c2: Vec::with_capacity(n),
            leak: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, omega: f64, p: Point, kappa: f64) {
        self.omega.push(omega);
        self.r.push(p.r);
        self.c1.push(p.c1);
        self.c2.push(p.c2);
        self.leak.push(kappa * p.c2.norm_sqr());
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::invalid("kappa", kappa, "must be positive"));
    }
    Ok(())
}

fn check_grid(omega_grid: &[f64]) -> Result<()> {
    match omega_grid.iter().find(|w| !w.is_finite()) {
        Some(&w) => Err(Error::NonFinite {
            context: "frequency grid",
            omega: w,
        }),
        None => Ok(()),
    }
}

/// Bare single-sided cavity, R = (ω + iκ/2)/(ω − iκ/2).
pub fn reflect_empty(kappa: f64, omega_grid: &[f64]) -> Result<ReflectionSpectrum> {
    check_kappa(kappa)?;
    check_grid(omega_grid)?;
    let sk = kappa.sqrt();
    let mut out = ReflectionSpectrum::with_capacity(omega_grid.len());
    for &w in omega_grid {
        let pole = Complex64::new(w, -0.5 * kappa);
        let c1 = -I * sk / pole;
        let r = Complex64::new(w, 0.5 * kappa) / pole;
        out.push(w, Point { r, c1, c2: Complex64::new(0.0, 0.0) }, kappa);
    }
    Ok(out)
}

/// EIT-loaded cavity with the qubit in the non-interacting state,
/// R₀ = 1 − κ/(κ/2 + iω + G²/(Γ/2 + iω + Ω²/(γ_a/2 + iω))).
pub fn reflect_q0(params: &SystemParams, g2: f64, omega_grid: &[f64]) -> Result<ReflectionSpectrum> {
    params.validate()?;
    check_kappa(params.kappa)?;
    check_grid(omega_grid)?;
    if !(g2 >= 0.0) || !g2.is_finite() {
        return Err(Error::invalid("G2", g2, "must be finite and non-negative"));
    }
    let sk = params.kappa.sqrt();
    let omega2 = params.eit_rabi * params.eit_rabi;
    let mut out = ReflectionSpectrum::with_capacity(omega_grid.len());
    for &w in omega_grid {
        let s_cav = Complex64::new(0.5 * params.kappa, w);
        let s_e = Complex64::new(0.5 * params.gamma_e, w);
        let s_a = Complex64::new(0.5 * params.gamma_a, w);
        // √κ / (s_cav + G²/(s_e + Ω²/s_a)) with the inner fractions cleared
        let inner = s_e * s_a + omega2;
        let c1 = sk * inner / (s_cav * inner + g2 * s_a);
        if !c1.is_finite() {
            return Err(Error::NonFinite {
                context: "closed-form reflection",
                omega: w,
            });
        }
        out.push(w, Point { r: 1.0 - sk * c1, c1, c2: Complex64::new(0.0, 0.0) }, params.kappa);
    }
    Ok(out)
}

/// Full elimination solve with the qubit prepared in `branch` of `dq`.
pub fn reflect_q1(
    params: &SystemParams,
    dq: &DressedQubit,
    branch: DressedBranch,
    ens: &AncillaEnsemble,
    omega_grid: &[f64],
) -> Result<ReflectionSpectrum> {
    let system = Blocked::new(params, dq, branch, ens)?;
    check_grid(omega_grid)?;
    let mut out = ReflectionSpectrum::with_capacity(omega_grid.len());
    for &w in omega_grid {
        let (p, _) = system.solve(w)?;
        out.push(w, p, params.kappa);
    }
    Ok(out)
}

/// Per-atom contribution g·A₁/C₁ of every bin at frequency `omega`.
pub fn bin_responses(
    params: &SystemParams,
    dq: &DressedQubit,
    branch: DressedBranch,
    ens: &AncillaEnsemble,
    omega: f64,
) -> Result<Vec<BinResponse>> {
    let system = Blocked::new(params, dq, branch, ens)?;
    if !omega.is_finite() {
        return Err(Error::NonFinite {
            context: "frequency grid",
            omega,
        });
    }
    let (p, kernels) = system.solve(omega)?;
    if p.c1 == Complex64::new(0.0, 0.0) {
        return Err(Error::Singular {
            omega,
            condition: f64::INFINITY,
        });
    }
    let ratio_c = p.c2 / p.c1;
    Ok(ens
        .bins
        .iter()
        .zip(kernels)
        .map(|(bin, k)| BinResponse {
            radius: bin.radius,
            ratio: -(bin.g * bin.g) * (k.a + k.b * ratio_c),
        })
        .collect())
}

/// Dressed-qubit system ready for per-frequency elimination.
struct Blocked<'a> {
    params: &'a SystemParams,
    mix: ChannelMixing,
    ens: &'a AncillaEnsemble,
}

impl<'a> Blocked<'a> {
    fn new(
        params: &'a SystemParams,
        dq: &DressedQubit,
        branch: DressedBranch,
        ens: &'a AncillaEnsemble,
    ) -> Result<Self> {
        params.validate()?;
        check_kappa(params.kappa)?;
        if ens.bins.is_empty() {
            return Err(Error::invalid("n_bins", 0.0, "ensemble has no bins"));
        }
        Ok(Blocked {
            params,
            mix: dq.mixing(branch),
            ens,
        })
    }

    /// Cavity amplitudes and, per bin, the kernel K with A = −g K C.
    fn solve(&self, w: f64) -> Result<(Point, Vec<Mat2>)> {
        let p = self.params;
        let m = &self.mix;
        let delta = m.other_offset;
        let omega2 = Complex64::new(p.eit_rabi * p.eit_rabi, 0.0);
        let ga = Complex64::new(w, -0.5 * p.gamma_a);
        let d_a = Mat2::diag(
            Complex64::new(w, -0.5 * p.gamma_e),
            Complex64::new(w + delta, -0.5 * p.gamma_e),
        );
        let rabi = Mat2::diag(omega2, omega2);

        let mut sum = Mat2::ZERO;
        let mut kernels = Vec::with_capacity(self.ens.bins.len());
        for bin in &self.ens.bins {
            let b = bin.blockade;
            let cross = Complex64::new(m.cross * b, 0.0);
            let m_b = Mat2::new(
                ga + m.driven_pop * b,
                cross,
                cross,
                ga + m.other_pop * b + delta,
            );
            // K = (D_A − Ω² M_B⁻¹)⁻¹ = M_B (D_A M_B − Ω²)⁻¹
            let k = match (d_a * m_b - rabi).inverse() {
                Some(inv) => m_b * inv,
                None => {
                    return Err(Error::NonFinite {
                        context: "ancilla block",
                        omega: w,
                    })
                }
            };
            sum = sum + k.scale(Complex64::new(bin.weight * bin.g * bin.g, 0.0));
            kernels.push(k);
        }

        let cavity = Mat2::diag(
            Complex64::new(w, -0.5 * p.kappa),
            Complex64::new(w + delta, -0.5 * p.kappa),
        ) - sum;
        let inv = cavity.inverse().ok_or(Error::Singular {
            omega: w,
            condition: f64::INFINITY,
        })?;
        let condition = cavity.norm() * inv.norm();
        if !condition.is_finite() {
            return Err(Error::NonFinite {
                context: "cavity block",
                omega: w,
            });
        }
        if condition > CONDITION_LIMIT {
            return Err(Error::Singular { omega: w, condition });
        }
        let sk = p.kappa.sqrt();
        let [c1, c2] = inv.apply([-I * sk, Complex64::new(0.0, 0.0)]);
        let r = 1.0 - sk * c1;
        if !(r.is_finite() && c2.is_finite()) {
            return Err(Error::NonFinite {
                context: "reflection",
                omega: w,
            });
        }
        Ok((Point { r, c1, c2 }, kernels))
    }
}
