//! Figure sweeps: each grid point is an independent optimisation, run in
//! parallel and collected in grid order.

use std::f64::consts::PI;

use dressgate_core::cqed::{cqed_gate_error, CqedParams};
use dressgate_core::dressing::dress;
use dressgate_core::ensemble::{self, rydberg_scaling, AncillaEnsemble, Geometry};
use dressgate_core::fidelity::{evaluate_gate, GateConfig, GateOutcome, GateTime};
use dressgate_core::optimizer::{minimize, Axis, SearchSpec};
use dressgate_core::{DressedBranch, DressedQubit, Error, Result, SystemParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fft::PacketFactory;

/// Resolution and search settings shared by every scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    /// Time samples per pulse window.
    pub n_samples: usize,
    /// Radial bins of the ensemble.
    pub n_bins: usize,
    /// Inner cutoff of a full cloud (µm).
    pub r_min: f64,
    /// Outer cutoff of a full cloud in units of the cloud width.
    pub r_max_factor: f64,
    /// Start grid points per optimised axis.
    pub starts: usize,
    /// Best starts refined by simplex descent, 0 for all.
    pub descents: usize,
    /// Evaluation budget per descent.
    pub max_evals: usize,
    /// Objective spread at which a descent stops.
    pub tol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            n_samples: 1024,
            n_bins: 256,
            r_min: ensemble::DEFAULT_R_MIN,
            r_max_factor: 4.0,
            starts: 4,
            descents: 3,
            max_evals: 300,
            tol: 1e-10,
        }
    }
}

impl Numerics {
    pub fn search(&self, axes: Vec<Axis>) -> SearchSpec {
        SearchSpec {
            starts: self.starts,
            descents: self.descents,
            max_evals: self.max_evals,
            tol: self.tol,
            ..SearchSpec::new(axes)
        }
    }

    pub fn full_cloud(&self, params: &SystemParams) -> Geometry {
        Geometry::FullCloud {
            r_min: self.r_min,
            r_max: self.r_max_factor * params.cloud_width,
        }
    }
}

/// Dressed state with Rydberg weight `pop` ∈ [0, 1] in the prepared state.
/// The unreachable value one half is nudged to just below it.
pub fn dressed_for_population(detuning: f64, pop: f64) -> Result<(DressedQubit, DressedBranch)> {
    let pop = if (pop - 0.5).abs() < 1e-9 { 0.5 - 1e-9 } else { pop };
    DressedQubit::for_population(detuning, pop)
}

/// Dressed state with mixing angle `theta` (rad) at detuning `detuning`.
pub fn dressed_for_angle(detuning: f64, theta: f64) -> Result<DressedQubit> {
    if !(0.0..std::f64::consts::FRAC_PI_4).contains(&theta) {
        return Err(Error::invalid("theta", theta, "must lie in [0, pi/4)"));
    }
    dress(detuning, 0.5 * detuning.abs() * (2.0 * theta).tan())
}

/// Atomic system with a fixed ensemble; κ, dressing and pulse vary per call.
#[derive(Debug, Clone)]
pub struct AtomicModel {
    pub params: SystemParams,
    pub ensemble: AncillaEnsemble,
    pub packets: PacketFactory,
}

impl AtomicModel {
    pub fn new(params: SystemParams, geometry: Geometry, numerics: &Numerics) -> Result<Self> {
        params.validate()?;
        Ok(AtomicModel {
            ensemble: ensemble::build(&params, geometry, numerics.n_bins)?,
            packets: PacketFactory::new(numerics.n_samples)?,
            params,
        })
    }

    #[allow(clippy::too_many_arguments)]
    pub fn gate(
        &self,
        kappa: f64,
        dq: &DressedQubit,
        branch: DressedBranch,
        bandwidth: f64,
        omega_center: f64,
        phi: f64,
    ) -> Result<GateOutcome> {
        let params = SystemParams { kappa, ..self.params };
        let packet = self.packets.make(bandwidth, omega_center)?;
        let config = GateConfig { phi, branch, gate_time: GateTime::Window };
        evaluate_gate(&params, dq, &self.ensemble, &packet, &config)
    }
}

fn kappa_axis(lo: f64, hi: f64) -> Axis {
    Axis::log("kappa", lo, hi)
}

// ---------------------------------------------------------------- fig. 2A

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig2aSettings {
    pub bandwidths: Vec<f64>,
    /// Rydberg weight of the prepared qubit state.
    pub populations: Vec<f64>,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub phi: f64,
}

impl Default for Fig2aSettings {
    fn default() -> Self {
        Fig2aSettings {
            bandwidths: vec![0.1, 1.0, 10.0],
            populations: vec![
                0.0, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 0.9, 0.95, 1.0,
            ],
            kappa_min: 20.0,
            kappa_max: 2000.0,
            phi: PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2aRow {
    pub bandwidth: f64,
    pub population: f64,
    pub epsilon: f64,
    pub kappa: f64,
    pub outcome: GateOutcome,
}

pub fn sweep_fig2a(params: &SystemParams, s: &Fig2aSettings, numerics: &Numerics) -> Result<Vec<Fig2aRow>> {
    let model = AtomicModel::new(*params, numerics.full_cloud(params), numerics)?;
    let points: Vec<(f64, f64)> = s
        .bandwidths
        .iter()
        .flat_map(|&b| s.populations.iter().map(move |&p| (b, p)))
        .collect();
    let spec = numerics.search(vec![kappa_axis(s.kappa_min, s.kappa_max)]);
    points
        .par_iter()
        .map(|&(bandwidth, population)| {
            let (dq, branch) = dressed_for_population(params.detuning, population)?;
            let m = minimize(&spec, |x| {
                Ok(model.gate(x[0], &dq, branch, bandwidth, 0.0, s.phi)?.error)
            })?;
            let outcome = model.gate(m.point[0], &dq, branch, bandwidth, 0.0, s.phi)?;
            Ok(Fig2aRow { bandwidth, population, epsilon: dq.epsilon, kappa: m.point[0], outcome })
        })
        .collect()
}

// ---------------------------------------------------------------- fig. 2B

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fig2bMode {
    OptimizeBoth,
    Shelving,
}

impl Fig2bMode {
    pub fn label(self) -> &'static str {
        match self {
            Fig2bMode::OptimizeBoth => "optimize-both",
            Fig2bMode::Shelving => "shelving",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig2bSettings {
    pub principal_numbers: Vec<u32>,
    pub modes: Vec<Fig2bMode>,
    pub bandwidth_min: f64,
    pub bandwidth_max: f64,
    pub population_min: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub phi: f64,
}

impl Default for Fig2bSettings {
    fn default() -> Self {
        Fig2bSettings {
            principal_numbers: vec![50, 70, 100, 140],
            modes: vec![Fig2bMode::OptimizeBoth, Fig2bMode::Shelving],
            bandwidth_min: 0.01,
            bandwidth_max: 30.0,
            population_min: 1e-4,
            kappa_min: 20.0,
            kappa_max: 2000.0,
            phi: PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2bRow {
    pub n: u32,
    pub mode: Fig2bMode,
    pub c3: f64,
    pub gamma: f64,
    pub bandwidth: f64,
    pub population: f64,
    pub kappa: f64,
    pub outcome: GateOutcome,
}

pub fn sweep_fig2b(params: &SystemParams, s: &Fig2bSettings, numerics: &Numerics) -> Result<Vec<Fig2bRow>> {
    let per_n: Vec<Vec<Fig2bRow>> = s
        .principal_numbers
        .par_iter()
        .map(|&n| fig2b_point(params, s, numerics, n))
        .collect::<Result<_>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

fn fig2b_point(params: &SystemParams, s: &Fig2bSettings, numerics: &Numerics, n: u32) -> Result<Vec<Fig2bRow>> {
    let (c3, gamma) = rydberg_scaling(n)?;
    let scaled = SystemParams { c3, gamma_q: gamma, gamma_a: gamma, ..*params };
    let model = AtomicModel::new(scaled, numerics.full_cloud(&scaled), numerics)?;
    let bw_axis = Axis::log("bandwidth", s.bandwidth_min, s.bandwidth_max);
    let k_axis = kappa_axis(s.kappa_min, s.kappa_max);

    let (shelved, shelved_branch) = dressed_for_population(scaled.detuning, 1.0)?;
    let spec = numerics.search(vec![bw_axis.clone(), k_axis.clone()]);
    let shelf = minimize(&spec, |x| {
        Ok(model.gate(x[1], &shelved, shelved_branch, x[0], 0.0, s.phi)?.error)
    })?;

    let mut rows = Vec::new();
    for &mode in &s.modes {
        let row = match mode {
            Fig2bMode::Shelving => Fig2bRow {
                n,
                mode,
                c3,
                gamma,
                bandwidth: shelf.point[0],
                population: 1.0,
                kappa: shelf.point[1],
                outcome: model.gate(shelf.point[1], &shelved, shelved_branch, shelf.point[0], 0.0, s.phi)?,
            },
            Fig2bMode::OptimizeBoth => {
                let mut spec = numerics.search(vec![
                    bw_axis.clone(),
                    Axis::log("population", s.population_min, 1.0),
                    k_axis.clone(),
                ]);
                spec.extra_starts = vec![vec![shelf.point[0], 1.0, shelf.point[1]]];
                let m = minimize(&spec, |x| {
                    let (dq, branch) = dressed_for_population(scaled.detuning, x[1])?;
                    Ok(model.gate(x[2], &dq, branch, x[0], 0.0, s.phi)?.error)
                })?;
                let (dq, branch) = dressed_for_population(scaled.detuning, m.point[1])?;
                Fig2bRow {
                    n,
                    mode,
                    c3,
                    gamma,
                    bandwidth: m.point[0],
                    population: m.point[1],
                    kappa: m.point[2],
                    outcome: model.gate(m.point[2], &dq, branch, m.point[0], 0.0, s.phi)?,
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

// ---------------------------------------------------------------- fig. 3

/// Sign of the dressing detuning relative to the dipolar coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Same sign as C₃: dispersive blockade.
    Red,
    /// Opposite sign to C₃: two-atom resonance at some radius.
    Blue,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Red => "red",
            Side::Blue => "blue",
        }
    }

    /// Signed detuning of magnitude `magnitude` on this side for coefficient `c3`.
    pub fn detuning(self, magnitude: f64, c3: f64) -> f64 {
        let same = if c3 < 0.0 { -magnitude } else { magnitude };
        match self {
            Side::Red => same,
            Side::Blue => -same,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig3Settings {
    pub widths: Vec<f64>,
    pub r_center: f64,
    pub theta: f64,
    pub branch: DressedBranch,
    pub bandwidth: f64,
    pub detuning_min: f64,
    pub detuning_max: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub phi: f64,
}

impl Default for Fig3Settings {
    fn default() -> Self {
        Fig3Settings {
            widths: vec![0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0],
            r_center: 5.0,
            theta: 0.15,
            branch: DressedBranch::Lower,
            bandwidth: 0.1,
            detuning_min: 10.0,
            detuning_max: 3000.0,
            kappa_min: 20.0,
            kappa_max: 2000.0,
            phi: PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Row {
    pub width: f64,
    pub side: Side,
    pub atoms: f64,
    pub detuning: f64,
    pub epsilon: f64,
    pub kappa: f64,
    pub outcome: GateOutcome,
}

pub fn sweep_fig3(params: &SystemParams, s: &Fig3Settings, numerics: &Numerics) -> Result<Vec<Fig3Row>> {
    let points: Vec<(f64, Side)> = s
        .widths
        .iter()
        .flat_map(|&w| [Side::Red, Side::Blue].map(|side| (w, side)))
        .collect();
    let models: Vec<AtomicModel> = s
        .widths
        .iter()
        .map(|&width| AtomicModel::new(*params, Geometry::Shell { r_center: s.r_center, width }, numerics))
        .collect::<Result<_>>()?;
    let eval = |k: usize, x: &[f64]| -> Result<(GateOutcome, DressedQubit)> {
        let (_, side) = points[k];
        let dq = dressed_for_angle(side.detuning(x[0], params.c3), s.theta)?;
        Ok((models[k / 2].gate(x[1], &dq, s.branch, s.bandwidth, 0.0, s.phi)?, dq))
    };
    let search = |k: usize, seeds: &[Vec<f64>]| -> Result<Vec<f64>> {
        let mut spec = numerics.search(vec![
            Axis::log("detuning", s.detuning_min, s.detuning_max),
            kappa_axis(s.kappa_min, s.kappa_max),
        ]);
        // dense detuning scan at a few kappa rows
        let n_detuning = 16 * numerics.starts;
        for j in 0..numerics.starts {
            let kappa = spec.axes[1].to_value((j as f64 + 0.5) / numerics.starts as f64);
            for i in 0..n_detuning {
                let detuning = spec.axes[0].to_value((i as f64 + 0.5) / n_detuning as f64);
                spec.extra_starts.push(vec![detuning, kappa]);
            }
        }
        spec.extra_starts.extend(seeds.iter().cloned());
        Ok(minimize(&spec, |x| Ok(eval(k, x)?.0.error))?.point)
    };
    // second pass: every point also starts from the first-pass optima of its side
    let first: Vec<Vec<f64>> = (0..points.len())
        .into_par_iter()
        .map(|k| search(k, &[]))
        .collect::<Result<_>>()?;
    (0..points.len())
        .into_par_iter()
        .map(|k| {
            let (width, side) = points[k];
            let seeds: Vec<Vec<f64>> = points
                .iter()
                .zip(&first)
                .filter(|((_, other), _)| *other == side)
                .map(|(_, x)| x.clone())
                .collect();
            let x = search(k, &seeds)?;
            let (outcome, dq) = eval(k, &x)?;
            Ok(Fig3Row {
                width,
                side,
                atoms: models[k / 2].ensemble.total_weight(),
                detuning: dq.detuning,
                epsilon: dq.epsilon,
                kappa: x[1],
                outcome,
            })
        })
        .collect()
}

// ---------------------------------------------------------------- fig. 4

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fig4Geometry {
    CloudRed,
    ShellBlue,
}

impl Fig4Geometry {
    pub fn label(self) -> &'static str {
        match self {
            Fig4Geometry::CloudRed => "cloud-red",
            Fig4Geometry::ShellBlue => "shell-blue",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig4Settings {
    pub phis: Vec<f64>,
    pub geometries: Vec<Fig4Geometry>,
    pub theta: f64,
    pub branch: DressedBranch,
    pub bandwidth: f64,
    pub shell_center: f64,
    pub shell_width: f64,
    /// Detuning magnitudes searched for each geometry.
    pub detuning_min: f64,
    pub detuning_max: f64,
    /// Closest approach of the carrier phase axis to 0 and 2π. The carrier
    /// phase is that of the uncoupled-qubit reflection, see [`dark_linewidth`].
    pub carrier_phase_margin: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
}

impl Default for Fig4Settings {
    fn default() -> Self {
        Fig4Settings {
            phis: (0..9).map(|i| PI * i as f64 / 8.0).collect(),
            geometries: vec![Fig4Geometry::CloudRed, Fig4Geometry::ShellBlue],
            theta: 0.15,
            branch: DressedBranch::Lower,
            bandwidth: 0.1,
            shell_center: 5.0,
            shell_width: 1.0,
            detuning_min: 10.0,
            detuning_max: 3000.0,
            carrier_phase_margin: 1e-6,
            kappa_min: 20.0,
            kappa_max: 2000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig4Row {
    pub geometry: Fig4Geometry,
    pub phi: f64,
    pub detuning: f64,
    pub epsilon: f64,
    pub omega_center: f64,
    pub kappa: f64,
    pub outcome: GateOutcome,
}

/// Linewidth of the cavity dark polariton, κΩ²/(Ω² + G²): near ω = 0 the
/// uncoupled-qubit reflection is that of a bare cavity of this width.
pub fn dark_linewidth(kappa: f64, eit_rabi: f64, g2: f64) -> f64 {
    let o2 = eit_rabi * eit_rabi;
    if o2 + g2 > 0.0 {
        kappa * o2 / (o2 + g2)
    } else {
        kappa
    }
}

/// Carrier offset at which a bare cavity of width `linewidth` reflects with
/// phase `phase` ∈ (0, 2π); resonance sits at π.
pub fn carrier_for_phase(linewidth: f64, phase: f64) -> f64 {
    0.5 * linewidth / (0.5 * phase).tan()
}

pub fn sweep_fig4(params: &SystemParams, s: &Fig4Settings, numerics: &Numerics) -> Result<Vec<Fig4Row>> {
    let models: Vec<(Fig4Geometry, AtomicModel)> = s
        .geometries
        .iter()
        .map(|&g| {
            let geometry = match g {
                Fig4Geometry::CloudRed => numerics.full_cloud(params),
                Fig4Geometry::ShellBlue => Geometry::Shell { r_center: s.shell_center, width: s.shell_width },
            };
            Ok((g, AtomicModel::new(*params, geometry, numerics)?))
        })
        .collect::<Result<_>>()?;
    let points: Vec<(usize, f64)> = (0..models.len())
        .flat_map(|i| s.phis.iter().map(move |&phi| (i, phi)))
        .collect();
    let lo = s.carrier_phase_margin;
    let hi = 2.0 * PI - s.carrier_phase_margin;
    let eval = |i: usize, phi: f64, x: &[f64]| -> Result<(GateOutcome, DressedQubit, f64)> {
        let (geometry, model) = &models[i];
        let side = match geometry {
            Fig4Geometry::CloudRed => Side::Red,
            Fig4Geometry::ShellBlue => Side::Blue,
        };
        let dq = dressed_for_angle(side.detuning(x[1], params.c3), s.theta)?;
        let width = dark_linewidth(x[2], params.eit_rabi, model.ensemble.g2);
        let center = carrier_for_phase(width, x[0]);
        Ok((model.gate(x[2], &dq, s.branch, s.bandwidth, center, phi)?, dq, center))
    };
    let search = |i: usize, phi: f64, seeds: &[Vec<f64>]| -> Result<Vec<f64>> {
        let mut spec = numerics.search(vec![
            Axis::linear("carrier_phase", lo, hi),
            Axis::log("detuning", s.detuning_min, s.detuning_max),
            kappa_axis(s.kappa_min, s.kappa_max),
        ]);
        // the uncoupled-qubit reflection alone supplies phase φ at carrier phase φ
        let seed = phi.clamp(lo, hi);
        let grid: Vec<f64> = (0..numerics.starts).map(|k| (k as f64 + 0.5) / numerics.starts as f64).collect();
        for &u in &grid {
            for &v in &grid {
                spec.extra_starts.push(vec![seed, spec.axes[1].to_value(u), spec.axes[2].to_value(v)]);
            }
        }
        spec.extra_starts.extend(seeds.iter().cloned());
        Ok(minimize(&spec, |x| Ok(eval(i, phi, x)?.0.error))?.point)
    };
    // second pass: every point also starts from the first-pass optima of its geometry
    let first: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&(i, phi)| search(i, phi, &[]))
        .collect::<Result<_>>()?;
    points
        .par_iter()
        .map(|&(i, phi)| {
            let seeds: Vec<Vec<f64>> = points
                .iter()
                .zip(&first)
                .filter(|((j, _), _)| *j == i)
                .map(|(_, x)| x.clone())
                .collect();
            let x = search(i, phi, &seeds)?;
            let (outcome, dq, omega_center) = eval(i, phi, &x)?;
            Ok(Fig4Row {
                geometry: models[i].0,
                phi,
                detuning: dq.detuning,
                epsilon: dq.epsilon,
                omega_center,
                kappa: x[2],
                outcome,
            })
        })
        .collect()
}

// ---------------------------------------------------------------- fig. 5

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig5Settings {
    pub couplings: Vec<f64>,
    /// Register qubit lifetimes (µs); the ancilla lives half as long.
    pub lifetimes: Vec<f64>,
    pub epsilon: f64,
    pub alpha: [f64; 2],
    pub bandwidth_min: f64,
    pub bandwidth_max: f64,
    pub drive_min: f64,
    pub drive_max: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub phi: f64,
}

impl Default for Fig5Settings {
    fn default() -> Self {
        Fig5Settings {
            couplings: vec![5.0, 10.0, 20.0, 40.0, 80.0, 160.0, 320.0],
            lifetimes: vec![5.0, 33.0],
            epsilon: 150.0,
            alpha: [1000.0, 1000.0],
            bandwidth_min: 0.01,
            bandwidth_max: 100.0,
            drive_min: 1.0,
            drive_max: 450.0,
            kappa_min: 1.0,
            kappa_max: 3000.0,
            phi: PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig5Row {
    pub lifetime: f64,
    pub g: f64,
    pub bandwidth: f64,
    pub drive: f64,
    pub kappa: f64,
    /// Drive and exchange below half the smaller anharmonicity.
    pub valid: bool,
    pub outcome: GateOutcome,
}

pub fn sweep_fig5(s: &Fig5Settings, numerics: &Numerics) -> Result<Vec<Fig5Row>> {
    let packets = PacketFactory::new(numerics.n_samples)?;
    let points: Vec<(f64, f64)> = s
        .lifetimes
        .iter()
        .flat_map(|&t| s.couplings.iter().map(move |&g| (t, g)))
        .collect();
    points
        .par_iter()
        .map(|&(lifetime, g)| {
            let spec = numerics.search(vec![
                Axis::log("bandwidth", s.bandwidth_min, s.bandwidth_max),
                Axis::log("Omega", s.drive_min, s.drive_max),
                kappa_axis(s.kappa_min, s.kappa_max),
            ]);
            let eval = |x: &[f64]| -> Result<(GateOutcome, CqedParams)> {
                let p = CqedParams::from_qubit_lifetime(x[2], g, x[1], s.epsilon, lifetime, s.alpha)?;
                let packet = packets.make(x[0], 0.0)?;
                Ok((cqed_gate_error(&p, &packet, s.phi)?, p))
            };
            let m = minimize(&spec, |x| Ok(eval(x)?.0.error))?;
            let (outcome, p) = eval(&m.point)?;
            Ok(Fig5Row {
                lifetime,
                g,
                bandwidth: m.point[0],
                drive: m.point[1],
                kappa: m.point[2],
                valid: p.is_valid(),
                outcome,
            })
        })
        .collect()
}
