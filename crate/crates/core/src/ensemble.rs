//! Ancilla geometry: a Gaussian cloud (or a thin shell of it) around the
//! qubit atom, binned radially by blockade strength.
//!
//! Bins carry expected atom counts, so sums over atoms become weighted sums
//! over bins. Weights are exact shell integrals of the Gaussian density.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Default inner cutoff of a full cloud, in µm.
pub const DEFAULT_R_MIN: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncillaBin {
    /// Representative radius in µm.
    pub radius: f64,
    /// Expected number of atoms in the bin.
    pub weight: f64,
    /// Blockade shift C₃/r³ in 1/µs.
    pub blockade: f64,
    /// Single-atom cavity coupling.
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum Geometry {
    FullCloud { r_min: f64, r_max: f64 },
    Shell { r_center: f64, width: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AncillaEnsemble {
    /// Bins in ascending radius.
    pub bins: Vec<AncillaBin>,
    /// Collective coupling G² = Σ weight·g².
    pub g2: f64,
    pub geometry: Geometry,
}

/// Blockade shift in 1/µs for `c3` in GHz·µm³ at distance `r` µm.
pub fn blockade_strength(c3: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", r, "distance must be positive"));
    }
    Ok(1e3 * c3 / (r * r * r))
}

/// Rydberg-level scaling laws: C₃ ≈ −300 n⁴ Hz·µm³ and γ ≈ n⁻³ GHz.
///
/// Returns `(c3, gamma_q)` in GHz·µm³ and 1/µs.
pub fn rydberg_scaling(n: u32) -> Result<(f64, f64)> {
    if !(30..=200).contains(&n) {
        return Err(Error::invalid(
            "n",
            n as f64,
            "principal quantum number outside [30, 200]",
        ));
    }
    let n = n as f64;
    let c3 = -300.0 * n.powi(4) * 1e-9;
    let gamma_q = 1e3 / n.powi(3);
    Ok((c3, gamma_q))
}

/// ∫₀^r 4π r'² ρ₀ exp(−r'²/2s²) dr'.
pub fn cumulative_population(rho0: f64, s: f64, r: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let x = r / (core::f64::consts::SQRT_2 * s);
    let f = s * s * s * (PI / 2.0).sqrt() * libm::erf(x) - s * s * r * (-x * x).exp();
    4.0 * PI * rho0 * f
}

/// Full Gaussian cloud between `r_min` and `r_max`, log-spaced bins.
pub fn build_cloud(
    params: &SystemParams,
    r_min: f64,
    r_max: f64,
    n_bins: usize,
) -> Result<AncillaEnsemble> {
    params.validate()?;
    if !(r_min > 0.0) || !r_min.is_finite() {
        return Err(Error::invalid("r_min", r_min, "must be positive"));
    }
    if !(r_max > r_min) || !r_max.is_finite() {
        return Err(Error::invalid("r_max", r_max, "must exceed r_min"));
    }
    check_bins(n_bins)?;
    let ratio = (r_max / r_min).ln();
    let edges: Vec<f64> = (0..=n_bins)
        .map(|i| match i {
            0 => r_min,
            i if i == n_bins => r_max,
            i => r_min * (ratio * i as f64 / n_bins as f64).exp(),
        })
        .collect();
    from_edges(
        params,
        &edges,
        |a, b| (a * b).sqrt(),
        Geometry::FullCloud { r_min, r_max },
    )
}

/// Only the atoms with r ∈ [r_center − width/2, r_center + width/2],
/// uniformly spaced bins.
pub fn build_shell(
    params: &SystemParams,
    r_center: f64,
    width: f64,
    n_bins: usize,
) -> Result<AncillaEnsemble> {
    params.validate()?;
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::invalid("width", width, "must be positive"));
    }
    if !(r_center - 0.5 * width > 0.0) || !r_center.is_finite() {
        return Err(Error::invalid(
            "r_center",
            r_center,
            "shell must stay clear of the qubit at r = 0",
        ));
    }
    check_bins(n_bins)?;
    let edges = uniform_edges(r_center - 0.5 * width, r_center + 0.5 * width, n_bins);
    from_edges(
        params,
        &edges,
        |a, b| 0.5 * (a + b),
        Geometry::Shell { r_center, width },
    )
}

/// Builds the ensemble described by `geometry`.
pub fn build(params: &SystemParams, geometry: Geometry, n_bins: usize) -> Result<AncillaEnsemble> {
    match geometry {
        Geometry::FullCloud { r_min, r_max } => build_cloud(params, r_min, r_max, n_bins),
        Geometry::Shell { r_center, width } => build_shell(params, r_center, width, n_bins),
    }
}

fn check_bins(n_bins: usize) -> Result<()> {
    if n_bins < 8 {
        return Err(Error::invalid(
            "n_bins",
            n_bins as f64,
            "at least 8 radial bins are required",
        ));
    }
    Ok(())
}

fn uniform_edges(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| match i {
            0 => lo,
            i if i == n => hi,
            i => lo + (hi - lo) * i as f64 / n as f64,
        })
        .collect()
}

fn from_edges(
    params: &SystemParams,
    edges: &[f64],
    representative: impl Fn(f64, f64) -> f64,
    geometry: Geometry,
) -> Result<AncillaEnsemble> {
    let (rho0, s) = (params.rho0, params.cloud_width);
    let mut bins = Vec::with_capacity(edges.len() - 1);
    let mut lower = cumulative_population(rho0, s, edges[0]);
    for pair in edges.windows(2) {
        let upper = cumulative_population(rho0, s, pair[1]);
        let radius = representative(pair[0], pair[1]);
        bins.push(AncillaBin {
            radius,
            weight: (upper - lower).max(0.0),
            blockade: blockade_strength(params.c3, radius)?,
            g: params.g_single,
        });
        lower = upper;
    }
    Ok(AncillaEnsemble::new(bins, geometry))
}

impl AncillaEnsemble {
    pub fn new(bins: Vec<AncillaBin>, geometry: Geometry) -> Self {
        let g2 = bins.iter().map(|b| b.weight * b.g * b.g).sum();
        AncillaEnsemble { bins, g2, geometry }
    }

    pub fn total_weight(&self) -> f64 {
        self.bins.iter().map(|b| b.weight).sum()
    }

    /// Keeps only the bins whose representative radius lies in `[lo, hi]`.
    pub fn restrict(&self, lo: f64, hi: f64) -> AncillaEnsemble {
        let bins = self
            .bins
            .iter()
            .copied()
            .filter(|b| b.radius >= lo && b.radius <= hi)
            .collect();
        AncillaEnsemble::new(bins, Geometry::Shell {
            r_center: 0.5 * (lo + hi),
            width: hi - lo,
        })
    }

    pub fn max_abs_blockade(&self) -> f64 {
        self.bins.iter().fold(0.0, |m, b| m.max(b.blockade.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud_params(rho0: f64, rc: f64) -> SystemParams {
        SystemParams {
            rho0,
            cloud_width: rc,
            ..SystemParams::dispersive_cloud()
        }
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn blockade_examples() {
        assert_eq!(blockade_strength(-30.0, 10.0).unwrap(), -30.0);
        assert_eq!(blockade_strength(-30.0, 1.0).unwrap(), -30000.0);
        assert_eq!(blockade_strength(-18.0, 5.0).unwrap(), -144.0);
        assert!(blockade_strength(-30.0, 0.0).is_err());
        assert!(blockade_strength(-30.0, -1.0).is_err());
    }

    #[test]
    fn scaling_laws() {
        let (c3, g) = rydberg_scaling(100).unwrap();
        assert!((c3 + 30.0).abs() < 1e-12);
        assert!((g - 1e-3).abs() < 1e-15);
        assert!((blockade_strength(c3, 10.0).unwrap() + 30.0).abs() < 1e-12);
        let (c3, g) = rydberg_scaling(50).unwrap();
        assert!((c3 + 1.875).abs() < 1e-12);
        assert!((g - 8e-3).abs() < 1e-15);
        assert!(rydberg_scaling(29).is_err());
        assert!(rydberg_scaling(201).is_err());
    }

    #[test]
    fn empty_cloud() {
        let e = build_cloud(&cloud_params(0.0, 5.0), 0.5, 20.0, 64).unwrap();
        assert!(e.bins.iter().all(|b| b.weight == 0.0));
        assert_eq!(e.g2, 0.0);
    }

    #[test]
    fn cloud_population_matches_gaussian_integral() {
        let rho0 = 1e-2;
        let e = build_cloud(&cloud_params(rho0, 5.0), 0.5, 20.0, 512).unwrap();
        let expected = rho0 * (2.0 * PI).powf(1.5) * 125.0;
        assert!((e.total_weight() / expected - 1.0).abs() < 0.01);
        let g2: f64 = e.bins.iter().map(|b| b.weight * b.g * b.g).sum();
        assert_eq!(g2, e.g2);
    }

    #[test]
    fn bins_ascend_and_respect_c3() {
        let p = cloud_params(10.0, 5.0);
        let e = build_cloud(&p, 0.5, 20.0, 64).unwrap();
        for w in e.bins.windows(2) {
            assert!(w[1].radius > w[0].radius);
        }
        for b in &e.bins {
            let back = b.blockade * b.radius.powi(3) / 1e3;
            assert!((back / p.c3 - 1.0).abs() < 1e-9);
            assert!(b.weight >= 0.0);
        }
    }

    #[test]
    fn lower_cutoff_reaches_stronger_blockade() {
        let p = cloud_params(10.0, 5.0);
        let a = build_cloud(&p, 0.5, 20.0, 64).unwrap();
        let b = build_cloud(&p, 0.25, 20.0, 64).unwrap();
        let ratio = b.max_abs_blockade() / a.max_abs_blockade();
        assert!(ratio > 4.0 && ratio <= 8.0 + 1e-9, "ratio {ratio}");
        let extreme = blockade_strength(p.c3, 0.25).unwrap() / blockade_strength(p.c3, 0.5).unwrap();
        assert!((extreme - 8.0).abs() < 1e-12);
    }

    #[test]
    fn cloud_g2_converges_with_bins() {
        let p = cloud_params(10.0, 5.0);
        let a = build_cloud(&p, 0.5, 20.0, 256).unwrap();
        let b = build_cloud(&p, 0.5, 20.0, 512).unwrap();
        assert!((a.g2 / b.g2 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn shell_matches_radial_quadrature() {
        let p = cloud_params(1e-2, 10.0);
        let e = build_shell(&p, 5.0, 1.0, 32).unwrap();
        let f = |r: f64| 4.0 * PI * 1e-2 * r * r * (-r * r / 200.0).exp();
        let oracle = simpson(f, 4.5, 5.5, 2000);
        assert!((e.total_weight() / oracle - 1.0).abs() < 5e-3);
        assert!((e.total_weight() / oracle - 1.0).abs() < 1e-10);
    }

    #[test]
    fn thin_shell_vanishes() {
        let p = cloud_params(10.0, 10.0);
        let wide = build_shell(&p, 5.0, 1.0, 16).unwrap();
        let thin = build_shell(&p, 5.0, 1e-9, 16).unwrap();
        assert!(thin.g2 < 1e-6 * wide.g2);
    }

    #[test]
    fn shell_is_masked_cloud() {
        let p = cloud_params(10.0, 10.0);
        let edges = uniform_edges(1.0, 9.0, 64);
        let cloud = from_edges(&p, &edges, |a, b| 0.5 * (a + b), Geometry::FullCloud {
            r_min: 1.0,
            r_max: 9.0,
        })
        .unwrap();
        // bins 24..40 span [4, 6]
        let masked = cloud.restrict(4.0, 6.0);
        let shell = build_shell(&p, 5.0, 2.0, 16).unwrap();
        assert_eq!(masked.bins.len(), 16);
        for (a, b) in masked.bins.iter().zip(&shell.bins) {
            assert!((a.radius - b.radius).abs() < 1e-12);
            assert!((a.weight - b.weight).abs() < 1e-9 * b.weight);
        }
        assert!((masked.g2 / shell.g2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_geometry() {
        let p = cloud_params(10.0, 10.0);
        assert!(build_cloud(&p, 0.5, 20.0, 7).is_err());
        assert!(build_cloud(&p, 0.0, 20.0, 64).is_err());
        assert!(build_cloud(&p, 5.0, 2.0, 64).is_err());
        assert!(build_shell(&p, 0.4, 1.0, 16).is_err());
        assert!(build_shell(&p, 5.0, 0.0, 16).is_err());
    }
}
