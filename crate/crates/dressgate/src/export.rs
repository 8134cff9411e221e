//! CSV tables, metadata sidecars and atomic file output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use dressgate_core::ensemble::AncillaEnsemble;
use dressgate_core::fidelity::GateOutcome;
use dressgate_core::{ReflectionSpectrum, SystemParams, Wavepacket};
use sha2::{Digest, Sha256};

use crate::sweeps::{Fig2aRow, Fig2bRow, Fig3Row, Fig4Row, Fig5Row};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `bytes` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp_name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    tmp_name.push(".tmp");
    let tmp: PathBuf = path.with_file_name(tmp_name);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn outcome_columns() -> [&'static str; 7] {
    ["error", "T0_re", "T0_im", "T1_re", "T1_im", "eta", "phi"]
}

fn outcome_cells(o: &GateOutcome) -> Vec<Cell> {
    vec![
        o.error.into(),
        o.t0.re.into(),
        o.t0.im.into(),
        o.t1.re.into(),
        o.t1.im.into(),
        o.eta.into(),
        o.phi.into(),
    ]
}

fn param_columns() -> [&'static str; 10] {
    ["Omega", "Gamma", "gamma_a", "gamma_q", "Delta", "C3", "g_single", "rho0", "Rc", "epsilon"]
}

/// Fixed physical parameters; Δ and ε are taken from the row when optimised.
fn param_cells(p: &SystemParams, detuning: f64, epsilon: f64) -> Vec<Cell> {
    vec![
        p.eit_rabi.into(),
        p.gamma_e.into(),
        p.gamma_a.into(),
        p.gamma_q.into(),
        detuning.into(),
        p.c3.into(),
        p.g_single.into(),
        p.rho0.into(),
        p.cloud_width.into(),
        epsilon.into(),
    ]
}

fn header(lead: &[&'static str], params: bool) -> Vec<&'static str> {
    let mut cols = lead.to_vec();
    if params {
        cols.extend(param_columns());
    }
    cols.extend(outcome_columns());
    cols
}

pub fn fig2a_table(p: &SystemParams, rows: &[Fig2aRow]) -> Table {
    let mut t = Table::new(&header(&["bandwidth", "population", "kappa"], true));
    for r in rows {
        let mut cells = vec![r.bandwidth.into(), r.population.into(), r.kappa.into()];
        cells.extend(param_cells(p, p.detuning, r.epsilon));
        cells.extend(outcome_cells(&r.outcome));
        t.push(cells);
    }
    t
}

pub fn fig2b_table(p: &SystemParams, rows: &[Fig2bRow]) -> Table {
    let mut t = Table::new(&header(&["n", "mode", "bandwidth", "population", "kappa"], true));
    for r in rows {
        let scaled = SystemParams { c3: r.c3, gamma_q: r.gamma, gamma_a: r.gamma, ..*p };
        let eps = crate::sweeps::dressed_for_population(p.detuning, r.population)
            .map(|(dq, _)| dq.epsilon)
            .unwrap_or(f64::NAN);
        let mut cells = vec![
            Cell::Int(r.n as i64),
            r.mode.label().into(),
            r.bandwidth.into(),
            r.population.into(),
            r.kappa.into(),
        ];
        cells.extend(param_cells(&scaled, p.detuning, eps));
        cells.extend(outcome_cells(&r.outcome));
        t.push(cells);
    }
    t
}

pub fn fig3_table(p: &SystemParams, rows: &[Fig3Row]) -> Table {
    let mut t = Table::new(&header(&["width", "side", "atoms", "kappa"], true));
    for r in rows {
        let mut cells = vec![r.width.into(), r.side.label().into(), r.atoms.into(), r.kappa.into()];
        cells.extend(param_cells(p, r.detuning, r.epsilon));
        cells.extend(outcome_cells(&r.outcome));
        t.push(cells);
    }
    t
}

pub fn fig4_table(p: &SystemParams, rows: &[Fig4Row]) -> Table {
    let mut t = Table::new(&header(&["geometry", "target_phi", "omega_center", "kappa"], true));
    for r in rows {
        let mut cells = vec![
            r.geometry.label().into(),
            r.phi.into(),
            r.omega_center.into(),
            r.kappa.into(),
        ];
        cells.extend(param_cells(p, r.detuning, r.epsilon));
        cells.extend(outcome_cells(&r.outcome));
        t.push(cells);
    }
    t
}

pub fn fig5_table(epsilon: f64, rows: &[Fig5Row]) -> Table {
    let mut t = Table::new(&header(
        &["lifetime", "g", "bandwidth", "Omega", "kappa", "epsilon", "valid"],
        false,
    ));
    for r in rows {
        let mut cells = vec![
            r.lifetime.into(),
            r.g.into(),
            r.bandwidth.into(),
            r.drive.into(),
            r.kappa.into(),
            epsilon.into(),
            Cell::Int(r.valid as i64),
        ];
        cells.extend(outcome_cells(&r.outcome));
        t.push(cells);
    }
    t
}

pub fn spectrum_table(s: &ReflectionSpectrum) -> Table {
    let mut t = Table::new(&["omega", "R_re", "R_im", "R_abs2", "leak_2"]);
    for i in 0..s.len() {
        t.push(vec![
            s.omega[i].into(),
            s.r[i].re.into(),
            s.r[i].im.into(),
            s.r[i].norm_sqr().into(),
            s.leak[i].into(),
        ]);
    }
    t
}

pub fn ensemble_table(e: &AncillaEnsemble) -> Table {
    let mut t = Table::new(&["radius", "weight", "B", "g"]);
    for b in &e.bins {
        t.push(vec![b.radius.into(), b.weight.into(), b.blockade.into(), b.g.into()]);
    }
    t
}

pub fn envelope_table(p: &Wavepacket) -> Table {
    let mut t = Table::new(&["t", "re", "im"]);
    for (time, b) in p.t_grid.iter().zip(&p.envelope) {
        t.push(vec![(*time).into(), b.re.into(), b.im.into()]);
    }
    t
}

pub fn packet_spectrum_table(p: &Wavepacket) -> Table {
    let mut t = Table::new(&["omega", "density"]);
    for (w, b) in p.omega_grid.iter().zip(&p.spectrum) {
        t.push(vec![(*w).into(), b.norm_sqr().into()]);
    }
    t
}
