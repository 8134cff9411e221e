//! Scenario execution: compute tables, then write them with metadata.

use std::path::{Path, PathBuf};

use dressgate_core::cqed::{cqed_gate_error, reflect_cqed};
use dressgate_core::dressing::dress;
use dressgate_core::ensemble;
use dressgate_core::fidelity::evaluate_gate;
use dressgate_core::oracle::{self, IntegrationOptions};
use dressgate_core::solver::{bin_responses, reflect_empty, reflect_q0, reflect_q1};
use dressgate_core::{Error, GateConfig, GateOutcome};
use serde::Serialize;

use crate::config::{ConfigError, ReflectionKind, RunConfig, Scenario};
use crate::export::{self, Cell, Table};
use crate::fft::PacketFactory;
use crate::sweeps::{self, AtomicModel, Fig4Geometry, Side};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Worker threads; all cores when absent.
    pub threads: Option<usize>,
    /// Replace existing outputs.
    pub force: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    /// Human-readable result lines.
    pub summary: Vec<String>,
    /// False when a check scenario missed its threshold.
    pub passed: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Model(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0} exists; pass --force to overwrite")]
    Exists(PathBuf),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Tables and summary of one scenario before anything touches the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Computed {
    /// (file-name suffix, table); the main table has an empty suffix.
    pub tables: Vec<(String, Table)>,
    pub summary: Vec<String>,
    pub passed: bool,
}

#[derive(Serialize)]
struct FileEntry {
    name: String,
    rows: usize,
}

#[derive(Serialize)]
struct Metadata<'a> {
    scenario: &'a str,
    version: &'a str,
    config_sha256: String,
    config: String,
    files: Vec<FileEntry>,
    summary: &'a [String],
    passed: bool,
}

/// Computes the scenario on a pool of `threads` workers and writes its outputs.
pub fn execute(config: &RunConfig, options: &RunOptions) -> Result<RunReport, RunError> {
    config.validate()?;
    let stem = config.stem();
    let main_csv = options.out_dir.join(format!("{stem}.csv"));
    let meta = options.out_dir.join(format!("{stem}.meta.json"));
    if !options.force {
        for path in [&main_csv, &meta] {
            if path.exists() {
                return Err(RunError::Exists(path.clone()));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads.unwrap_or(0))
        .build()?;
    let computed = pool.install(|| compute(config))?;

    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    std::fs::create_dir_all(&options.out_dir).map_err(io(&options.out_dir))?;
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for (suffix, table) in &computed.tables {
        let name = format!("{stem}{suffix}.csv");
        let path = options.out_dir.join(&name);
        if !options.force && path.exists() {
            return Err(RunError::Exists(path));
        }
        export::write_atomic(&path, &table.to_csv()?).map_err(io(&path))?;
        entries.push(FileEntry { name, rows: table.rows.len() });
        files.push(path);
    }
    let canonical = config.to_toml();
    let metadata = Metadata {
        scenario: config.scenario.name(),
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: export::sha256_hex(canonical.as_bytes()),
        config: canonical,
        files: entries,
        summary: &computed.summary,
        passed: computed.passed,
    };
    let json = serde_json::to_vec_pretty(&metadata).expect("metadata serializes");
    export::write_atomic(&meta, &json).map_err(io(&meta))?;
    files.push(meta);
    Ok(RunReport { files, summary: computed.summary, passed: computed.passed })
}

/// Runs the scenario on the current rayon pool without writing files.
pub fn compute(config: &RunConfig) -> Result<Computed, RunError> {
    let params = config.params();
    let numerics = &config.numerics;
    let main = |table: Table, summary: Vec<String>| Computed {
        tables: vec![(String::new(), table)],
        summary,
        passed: true,
    };
    Ok(match config.scenario {
        Scenario::Reflection => reflection(config)?,
        Scenario::GateError => gate_error(config)?,
        Scenario::Fig2a => {
            let s = config.fig2a.clone().unwrap_or_default();
            let rows = sweeps::sweep_fig2a(&params, &s, numerics)?;
            let summary = s
                .bandwidths
                .iter()
                .filter_map(|&b| {
                    rows.iter()
                        .filter(|r| r.bandwidth == b)
                        .min_by(|x, y| x.outcome.error.total_cmp(&y.outcome.error))
                        .map(|r| {
                            format!(
                                "bandwidth {b}: min E = {:.4e} at population {}",
                                r.outcome.error, r.population
                            )
                        })
                })
                .collect();
            main(export::fig2a_table(&params, &rows), summary)
        }
        Scenario::Fig2b => {
            let s = config.fig2b.clone().unwrap_or_default();
            let rows = sweeps::sweep_fig2b(&params, &s, numerics)?;
            let summary = rows
                .iter()
                .map(|r| format!("n {} {}: E = {:.4e}", r.n, r.mode.label(), r.outcome.error))
                .collect();
            main(export::fig2b_table(&params, &rows), summary)
        }
        Scenario::Fig3 => {
            let s = config.fig3.clone().unwrap_or_default();
            let rows = sweeps::sweep_fig3(&params, &s, numerics)?;
            let summary = [Side::Red, Side::Blue]
                .into_iter()
                .filter_map(|side| {
                    rows.iter()
                        .filter(|r| r.side == side)
                        .min_by(|x, y| x.outcome.error.total_cmp(&y.outcome.error))
                        .map(|r| {
                            format!("{}: min E = {:.4e} at width {}", side.label(), r.outcome.error, r.width)
                        })
                })
                .collect();
            main(export::fig3_table(&params, &rows), summary)
        }
        Scenario::Fig4 => {
            let s = config.fig4.clone().unwrap_or_default();
            let rows = sweeps::sweep_fig4(&params, &s, numerics)?;
            let summary = [Fig4Geometry::CloudRed, Fig4Geometry::ShellBlue]
                .into_iter()
                .filter_map(|g| {
                    let mine: Vec<_> = rows.iter().filter(|r| r.geometry == g).collect();
                    let worst = mine.iter().max_by(|x, y| x.outcome.error.total_cmp(&y.outcome.error))?;
                    let best = mine.iter().min_by(|x, y| x.outcome.error.total_cmp(&y.outcome.error))?;
                    Some(format!(
                        "{}: max E = {:.4e} at phi {:.4}, min E = {:.4e} at phi {:.4}",
                        g.label(),
                        worst.outcome.error,
                        worst.phi,
                        best.outcome.error,
                        best.phi
                    ))
                })
                .collect();
            main(export::fig4_table(&params, &rows), summary)
        }
        Scenario::Fig5 => {
            let s = config.fig5.clone().unwrap_or_default();
            let rows = sweeps::sweep_fig5(&s, numerics)?;
            let summary = rows
                .iter()
                .map(|r| format!("lifetime {} g {}: E = {:.4e}", r.lifetime, r.g, r.outcome.error))
                .collect();
            main(export::fig5_table(s.epsilon, &rows), summary)
        }
        Scenario::OracleCheck => oracle_check(config)?,
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn reflection(config: &RunConfig) -> Result<Computed, RunError> {
    let s = config.reflection.clone().unwrap_or_default();
    let params = config.params();
    let grid = linspace(s.omega_min, s.omega_max, s.n_omega);
    let geometry = s.geometry.unwrap_or_else(|| config.numerics.full_cloud(&params));
    let atoms = || ensemble::build(&params, geometry, config.numerics.n_bins);
    let cqed = || config.cqed.ok_or_else(|| ConfigError::Invalid("missing [cqed] table".into()));
    let spectrum = match s.kind {
        ReflectionKind::Empty => reflect_empty(params.kappa, &grid)?,
        ReflectionKind::Q0 => reflect_q0(&params, atoms()?.g2, &grid)?,
        ReflectionKind::Q1 => {
            let dq = dress(params.detuning, params.dressing_rabi)?;
            reflect_q1(&params, &dq, s.branch, &atoms()?, &grid)?
        }
        ReflectionKind::Cqed0 => reflect_cqed(&cqed()?, 0, &grid)?,
        ReflectionKind::Cqed1 => reflect_cqed(&cqed()?, 1, &grid)?,
    };
    let max_dev = spectrum.r.iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
    let mut summary = vec![format!("{} points, max ||R| - 1| = {max_dev:.3e}", spectrum.len())];
    let mut tables = vec![(String::new(), export::spectrum_table(&spectrum))];
    if let Some(w) = s.bin_omega {
        let dq = dress(params.detuning, params.dressing_rabi)?;
        let bins = bin_responses(&params, &dq, s.branch, &atoms()?, w)?;
        let mut t = Table::new(&["radius", "ratio_re", "ratio_im"]);
        for b in &bins {
            t.push(vec![b.radius.into(), b.ratio.re.into(), b.ratio.im.into()]);
        }
        if let Some(peak) = bins.iter().max_by(|a, b| a.ratio.norm().total_cmp(&b.ratio.norm())) {
            summary.push(format!("largest bin response at r = {:.4} um", peak.radius));
        }
        tables.push(("_bins".into(), t));
    }
    Ok(Computed { tables, summary, passed: true })
}

fn outcome_table(lead: &[(&'static str, f64)], o: &GateOutcome) -> Table {
    let mut cols: Vec<&str> = lead.iter().map(|(n, _)| *n).collect();
    cols.extend(["error", "T0_re", "T0_im", "T1_re", "T1_im", "eta", "phi"]);
    let mut t = Table::new(&cols);
    let mut row: Vec<Cell> = lead.iter().map(|(_, v)| Cell::Num(*v)).collect();
    row.extend([o.error, o.t0.re, o.t0.im, o.t1.re, o.t1.im, o.eta, o.phi].map(Cell::Num));
    t.push(row);
    t
}

fn gate_error(config: &RunConfig) -> Result<Computed, RunError> {
    let s = config.gate_error.clone().unwrap_or_default();
    let packets = PacketFactory::new(config.numerics.n_samples)?;
    let packet = packets.make(s.bandwidth, s.omega_center)?;
    let (outcome, lead) = if s.cqed {
        let p = config.cqed.ok_or_else(|| ConfigError::Invalid("missing [cqed] table".into()))?;
        let o = cqed_gate_error(&p, &packet, s.phi)?;
        let lead = vec![
            ("bandwidth", s.bandwidth),
            ("omega_center", s.omega_center),
            ("kappa", p.kappa),
            ("g", p.g),
            ("Omega", p.omega),
            ("epsilon", p.eps),
            ("gamma_1", p.gamma[0]),
            ("gamma_2", p.gamma[1]),
            ("gamma_3", p.gamma[2]),
        ];
        (o, lead)
    } else {
        let params = config.params();
        let geometry = s.geometry.unwrap_or_else(|| config.numerics.full_cloud(&params));
        let model = AtomicModel::new(params, geometry, &config.numerics)?;
        let dq = dress(params.detuning, params.dressing_rabi)?;
        let gate = GateConfig { phi: s.phi, branch: s.branch, gate_time: s.gate_time };
        let o = evaluate_gate(&params, &dq, &model.ensemble, &packet, &gate)?;
        let lead = vec![
            ("bandwidth", s.bandwidth),
            ("omega_center", s.omega_center),
            ("kappa", params.kappa),
            ("Omega", params.eit_rabi),
            ("Gamma", params.gamma_e),
            ("gamma_a", params.gamma_a),
            ("gamma_q", params.gamma_q),
            ("Delta", params.detuning),
            ("epsilon", params.dressing_rabi),
            ("C3", params.c3),
            ("g_single", params.g_single),
            ("rho0", params.rho0),
            ("Rc", params.cloud_width),
            ("atoms", model.ensemble.total_weight()),
        ];
        (o, lead)
    };
    Ok(Computed {
        tables: vec![(String::new(), outcome_table(&lead, &outcome))],
        summary: vec![format!("gate error E = {:.6e}", outcome.error)],
        passed: true,
    })
}

fn oracle_check(config: &RunConfig) -> Result<Computed, RunError> {
    let s = config.oracle.clone().unwrap_or_default();
    let params = config.params();
    let ens = ensemble::build(&params, s.geometry, s.n_bins)?;
    let dq = sweeps::dressed_for_angle(params.detuning, s.theta)?;
    let packet = PacketFactory::new(config.numerics.n_samples)?.make(s.bandwidth, 0.0)?;
    let options = IntegrationOptions::automatic(&params, &dq, &ens, &packet, s.safety, s.tail);
    let trace = oracle::integrate(&params, &dq, s.branch, &ens, &packet, &options)?;
    let spectrum = reflect_q1(&params, &dq, s.branch, &ens, packet.support_grid())?;
    let offset = packet.grid_offset(&spectrum.omega)?;
    let measured = oracle::fourier_at(&trace.beta_out, trace.t_grid[0], trace.dt, &spectrum.omega);
    let expected: Vec<_> = spectrum
        .r
        .iter()
        .zip(&packet.spectrum[offset..])
        .map(|(r, b)| r * b)
        .collect();
    let d = oracle::discrepancy(&measured, &expected, packet.d_omega())?;

    let mut t = Table::new(&["omega", "time_re", "time_im", "freq_re", "freq_im"]);
    for ((w, m), e) in spectrum.omega.iter().zip(&measured).zip(&expected) {
        t.push(vec![(*w).into(), m.re.into(), m.im.into(), e.re.into(), e.im.into()]);
    }
    let passed = d.l2 < s.threshold;
    let lost = trace.input_norm - trace.output_norm - trace.leak_norm - trace.residual_norm;
    Ok(Computed {
        tables: vec![(String::new(), t)],
        summary: vec![
            format!(
                "L2 discrepancy = {:.3e} (threshold {:.1e}) {}",
                d.l2,
                s.threshold,
                if passed { "PASS" } else { "FAIL" }
            ),
            format!("Linf discrepancy = {:.3e}", d.linf),
            format!(
                "norms: input {:.9} output {:.9} leak {:.3e} residual {:.3e} decay {:.3e}",
                trace.input_norm, trace.output_norm, trace.leak_norm, trace.residual_norm, lost
            ),
            format!("steps {} dt {:.4e} us", trace.t_grid.len() - 1, trace.dt),
        ],
        passed,
    })
}
