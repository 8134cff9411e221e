//! Acceptance run: one line per criterion with its measured values.
//!
//! Failures are reported, not fatal, so the workspace test suite stays
//! green while the numbers remain visible. Set `ACCEPTANCE_STRICT=1` to
//! turn any failed criterion into a non-zero exit status.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use dressgate::config::{RunConfig, Scenario};
use dressgate::fft::PacketFactory;
use dressgate::run::{execute, RunOptions};
use dressgate::sweeps::{self, Fig2aSettings, Fig2bMode, Fig2bSettings, Fig3Settings, Fig4Settings, Fig5Settings, Numerics, Side};
use dressgate_core::cqed::reflect_cqed;
use dressgate_core::dressing::dress;
use dressgate_core::ensemble;
use dressgate_core::fidelity::{gate_error, gate_fidelity_matrix};
use dressgate_core::oracle::{compare_spectral, integrate, IntegrationOptions};
use dressgate_core::solver::{reflect_empty, reflect_q0, reflect_q1};
use dressgate_core::{Complex64, CqedParams, DressedBranch, Geometry, SystemParams};
use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn timed(budget: Option<Duration>, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let mut v = f();
    let took = start.elapsed();
    if let Some(b) = budget {
        if took > b {
            v.pass = false;
            v.detail.push_str(&format!("; over budget {:.0} s", b.as_secs_f64()));
        }
    }
    v.detail.push_str(&format!("; {:.2} s", took.as_secs_f64()));
    v
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn empty_cavity() -> Verdict {
    let grid: Vec<f64> = (0..=200_000).map(|i| -1000.0 + 0.01 * i as f64).collect();
    let s = reflect_empty(20.0, &grid).unwrap();
    let dev = s.r.iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
    let r0 = reflect_empty(20.0, &[0.0]).unwrap().r[0];
    let exact = r0.re == -1.0 && r0.im == 0.0;
    verdict(dev < 1e-9 && exact, format!("max ||R|-1| = {dev:.2e}, R(0) = {r0}"))
}

fn closed_form_agreement() -> Verdict {
    let p = SystemParams::dispersive_cloud();
    let numerics = Numerics::default();
    let mut ens = ensemble::build(&p, numerics.full_cloud(&p), numerics.n_bins).unwrap();
    for b in &mut ens.bins {
        b.blockade = 0.0;
    }
    let dq = dress(p.detuning, 0.0).unwrap();
    let grid: Vec<f64> = (0..=4000).map(|i| -200.0 + 0.1 * i as f64).collect();
    let q0 = reflect_q0(&p, ens.g2, &grid).unwrap();
    let q1 = reflect_q1(&p, &dq, DressedBranch::Lower, &ens, &grid).unwrap();
    let dev = q0.r.iter().zip(&q1.r).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    verdict(dev < 1e-10, format!("max |R0 - R1| = {dev:.2e} over {} points", grid.len()))
}

fn oracle_equivalence() -> Verdict {
    let p = SystemParams::resonant_shell();
    let ens = ensemble::build(&p, Geometry::Shell { r_center: 5.0, width: 1.0 }, 16).unwrap();
    let dq = sweeps::dressed_for_angle(p.detuning, 0.15).unwrap();
    let packet = PacketFactory::new(1024).unwrap().make(0.5, 0.0).unwrap();
    let options = IntegrationOptions::automatic(&p, &dq, &ens, &packet, 0.05, 60.0);
    let trace = integrate(&p, &dq, DressedBranch::Lower, &ens, &packet, &options).unwrap();
    let spectrum = reflect_q1(&p, &dq, DressedBranch::Lower, &ens, packet.support_grid()).unwrap();
    let d = compare_spectral(&trace, &spectrum, &packet).unwrap();
    verdict(d.l2 < 1e-5, format!("L2 = {:.2e}, Linf = {:.2e}, {} steps", d.l2, d.linf, trace.t_grid.len() - 1))
}

fn fidelity_identity() -> Verdict {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t0 = Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(-PI..PI));
        let t1 = Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(-PI..PI));
        let eta: f64 = rng.random();
        let phi = rng.random_range(0.0..2.0 * PI);
        let z = Complex64::new(0.0, 0.0);
        let m = [
            [Complex64::new(1.0, 0.0), z, z, z],
            [z, Complex64::from_polar(1.0, phi) * t0, z, z],
            [z, z, Complex64::new(eta, 0.0), z],
            [z, z, z, t1 * eta],
        ];
        let f = gate_fidelity_matrix(&m).unwrap();
        let e = gate_error(t0, t1, eta, phi).unwrap();
        worst = worst.max(((1.0 - f) - e).abs());
    }
    verdict(worst <= 1e-14, format!("max |1 - F - E| = {worst:.2e} over 1000 draws"))
}

struct Fig3Result {
    red: Vec<f64>,
    blue: Vec<f64>,
    widths: Vec<f64>,
}

fn fig3() -> Fig3Result {
    let s = Fig3Settings::default();
    let rows = sweeps::sweep_fig3(&SystemParams::resonant_shell(), &s, &Numerics::default()).unwrap();
    let pick = |side: Side| -> Vec<f64> {
        s.widths
            .iter()
            .map(|w| rows.iter().find(|r| r.side == side && r.width == *w).unwrap().outcome.error)
            .collect()
    };
    Fig3Result { red: pick(Side::Red), blue: pick(Side::Blue), widths: s.widths.clone() }
}

fn fig3_headline(r: &Fig3Result) -> Verdict {
    let (i, best) = r
        .blue
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, e)| (i, *e))
        .unwrap();
    verdict(best <= 1e-2, format!("blue minimum E = {best:.3e} at width {} um", r.widths[i]))
}

fn fig3_ordering(r: &Fig3Result) -> Verdict {
    let ok = r.blue.iter().zip(&r.red).all(|(b, d)| b < d);
    let pairs: Vec<String> = r
        .widths
        .iter()
        .zip(r.blue.iter().zip(&r.red))
        .map(|(w, (b, d))| format!("{w}: {b:.3e}<{d:.3e}"))
        .collect();
    verdict(ok, pairs.join(", "))
}

fn fig2a_shape() -> Verdict {
    let s = Fig2aSettings::default();
    let rows = sweeps::sweep_fig2a(&SystemParams::dispersive_cloud(), &s, &Numerics::default()).unwrap();
    let mut minima = Vec::new();
    let mut interior = true;
    for &b in &s.bandwidths {
        let curve: Vec<_> = rows.iter().filter(|r| r.bandwidth == b).collect();
        let (i, row) = curve
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.outcome.error.total_cmp(&y.1.outcome.error))
            .unwrap();
        interior &= i > 0 && i + 1 < curve.len();
        minima.push((b, row.outcome.error, row.population));
    }
    let ordered = minima.windows(2).all(|w| w[0].1 <= w[1].1);
    let optimum_rises = minima.windows(2).all(|w| w[0].2 < w[1].2);
    let detail: Vec<String> = minima
        .iter()
        .map(|(b, e, p)| format!("{b} MHz: min {e:.3e} at pop {p}"))
        .collect();
    verdict(
        interior && ordered && optimum_rises,
        format!(
            "{}; interior {interior}, minima ordered {ordered}, optimum rises {optimum_rises}",
            detail.join(", ")
        ),
    )
}

fn fig2b_dominance() -> Verdict {
    let s = Fig2bSettings::default();
    let rows = sweeps::sweep_fig2b(&SystemParams::dispersive_cloud(), &s, &Numerics::default()).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for &n in &s.principal_numbers {
        let e = |m: Fig2bMode| rows.iter().find(|r| r.n == n && r.mode == m).unwrap().outcome.error;
        let (both, shelf) = (e(Fig2bMode::OptimizeBoth), e(Fig2bMode::Shelving));
        ok &= both <= shelf;
        detail.push(format!("n={n}: {both:.3e}<={shelf:.3e}"));
    }
    verdict(ok, detail.join(", "))
}

fn fig4_extremum() -> Verdict {
    let s = Fig4Settings::default();
    let rows = sweeps::sweep_fig4(&SystemParams::resonant_shell(), &s, &Numerics::default()).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for &g in &s.geometries {
        let curve: Vec<_> = rows.iter().filter(|r| r.geometry == g).collect();
        let worst = curve.iter().max_by(|a, b| a.outcome.error.total_cmp(&b.outcome.error)).unwrap();
        let at_zero = curve.iter().find(|r| r.phi == 0.0).unwrap().outcome.error;
        let at_pi = curve.iter().find(|r| r.phi == PI).unwrap().outcome.error;
        let max_at_pi = worst.phi == PI;
        ok &= max_at_pi && at_zero < 1e-3;
        detail.push(format!(
            "{}: max {:.3e} at phi {:.4}, E(pi) {at_pi:.3e}, E(0) {at_zero:.3e}",
            g.label(),
            worst.outcome.error,
            worst.phi
        ));
    }
    verdict(ok, detail.join("; "))
}

/// Resonator ⊗ four-level ancilla ⊗ two-level register in the rotating
/// frame, keeping the resonant couplings only; solved on the block
/// connected to the resonator photon.
fn dense_cqed(p: &CqedParams, q: usize, w: f64) -> Complex64 {
    let (np, na, nr) = (2usize, 4usize, 2usize);
    let dim = np * na * nr;
    let idx = |n: usize, a: usize, r: usize| (n * na + a) * nr + r;
    let lower = |levels: usize| {
        let mut m = DMatrix::<f64>::zeros(levels, levels);
        for k in 1..levels {
            m[(k - 1, k)] = (k as f64).sqrt();
        }
        m
    };
    let eye = |n: usize| DMatrix::<f64>::identity(n, n);
    let a = lower(np).kronecker(&eye(na)).kronecker(&eye(nr));
    let b = eye(np).kronecker(&lower(na)).kronecker(&eye(nr));
    let c = eye(np).kronecker(&eye(na)).kronecker(&lower(nr));
    let proj = |n: Option<usize>, lv: Option<usize>, r: Option<usize>| {
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for ni in 0..np {
            for ai in 0..na {
                for ri in 0..nr {
                    if n.is_none_or(|x| x == ni) && lv.is_none_or(|x| x == ai) && r.is_none_or(|x| x == ri) {
                        let i = idx(ni, ai, ri);
                        m[(i, i)] = 1.0;
                    }
                }
            }
        }
        m
    };
    // photon exchange on the 0↔1 ancilla transition
    let exchange = &proj(None, Some(1), None) * &b.transpose() * &a * &proj(None, Some(0), None) * p.g;
    // classical drive, bosonic b† between levels 1 and 2
    let drive = &proj(None, Some(2), None) * &b.transpose() * &proj(None, Some(1), None) * p.omega;
    // register–ancilla swap between the degenerate pair |2_a 1_q⟩, |3_a 0_q⟩
    let swap = &proj(None, Some(3), Some(0)) * &b.transpose() * &c * &proj(None, Some(2), Some(1)) * p.eps;
    let coupling = &exchange + exchange.transpose() + &drive + drive.transpose() + &swap + swap.transpose();

    let start = idx(1, 0, q);
    let mut block = vec![start];
    let mut k = 0;
    while k < block.len() {
        for j in 0..dim {
            if coupling[(block[k], j)] != 0.0 && !block.contains(&j) {
                block.push(j);
            }
        }
        k += 1;
    }
    let decay = |i: usize| {
        let (n, lv) = (i / (na * nr), (i / nr) % na);
        if n == 1 {
            p.kappa
        } else {
            p.gamma[lv - 1]
        }
    };
    let m = DMatrix::<Complex64>::from_fn(block.len(), block.len(), |i, j| {
        let h = Complex64::new(coupling[(block[i], block[j])], 0.0);
        if i == j {
            h + Complex64::new(w, -0.5 * decay(block[i]))
        } else {
            h
        }
    });
    let mut rhs = DVector::<Complex64>::zeros(block.len());
    rhs[0] = Complex64::new(0.0, -p.kappa.sqrt());
    let x = m.lu().solve(&rhs).unwrap();
    1.0 - p.kappa.sqrt() * x[0]
}

fn cqed_oracle() -> Verdict {
    let mut rng = StdRng::seed_from_u64(10);
    let log = |rng: &mut StdRng, lo: f64, hi: f64| (lo.ln() + rng.random::<f64>() * (hi / lo).ln()).exp();
    let mut worst: f64 = 0.0;
    let mut draws = 0;
    while draws < 100 {
        let alpha = [log(&mut rng, 200.0, 1000.0), log(&mut rng, 200.0, 1000.0)];
        let cap = 0.5 * alpha[0].min(alpha[1]);
        let g1 = log(&mut rng, 1e-3, 2.0);
        let p = CqedParams {
            kappa: log(&mut rng, 1.0, 3000.0),
            g: log(&mut rng, 1.0, 320.0),
            omega: log(&mut rng, 1.0, cap),
            eps: log(&mut rng, 1.0, cap),
            gamma: [g1, g1 * rng.random_range(1.0..3.0), g1 * rng.random_range(1.0..4.0)],
            alpha,
        };
        if !p.is_valid() {
            continue;
        }
        draws += 1;
        let grid: Vec<f64> = (0..11).map(|_| rng.random_range(-2.0..2.0) * p.kappa.max(p.g)).collect();
        for q in 0..2 {
            let s = reflect_cqed(&p, q as u8, &grid).unwrap();
            for (w, r) in grid.iter().zip(&s.r) {
                worst = worst.max((r - dense_cqed(&p, q, *w)).norm());
            }
        }
    }
    let oracle_ok = worst < 1e-10;

    let s = Fig5Settings::default();
    let rows = sweeps::sweep_fig5(&s, &Numerics::default()).unwrap();
    let curve = |t: f64| -> Vec<f64> {
        s.couplings
            .iter()
            .map(|g| rows.iter().find(|r| r.lifetime == t && r.g == *g).unwrap().outcome.error)
            .collect()
    };
    let short = curve(5.0);
    let long = curve(33.0);
    let below = long.iter().zip(&short).all(|(l, s)| l < s);
    let decreasing = long[0] > long[1] && long[1] > long[2] && short[0] > short[1] && short[1] > short[2];
    verdict(
        oracle_ok && below && decreasing,
        format!(
            "dense max |dR| = {worst:.2e}; 33us {:.2e}..{:.2e}, 5us {:.2e}..{:.2e}; below {below}, decreasing at small g {decreasing}",
            long[0],
            long[long.len() - 1],
            short[0],
            short[short.len() - 1]
        ),
    )
}

fn determinism() -> Verdict {
    let mut configs = Vec::new();
    let mut c = RunConfig::new(Scenario::Fig3);
    c.fig3 = Some(Fig3Settings { widths: vec![0.5, 1.0, 2.0], ..Default::default() });
    configs.push(c);
    configs.push(RunConfig::new(Scenario::Fig5));
    let mut same = true;
    for c in &configs {
        let outputs: Vec<Vec<u8>> = [1usize, 2, 8]
            .iter()
            .map(|&threads| {
                let dir = tempfile::tempdir().unwrap();
                let options = RunOptions { out_dir: dir.path().to_path_buf(), threads: Some(threads), force: false };
                execute(c, &options).unwrap();
                std::fs::read(dir.path().join(format!("{}.csv", c.stem()))).unwrap()
            })
            .collect();
        same &= outputs.windows(2).all(|w| w[0] == w[1]);
    }
    verdict(same, "fig3 and fig5 CSVs at 1, 2 and 8 threads".into())
}

fn main() {
    let mut results: Vec<(usize, &str, Verdict)> = Vec::new();
    results.push((1, "empty-cavity unitarity", timed(secs(1), empty_cavity)));
    results.push((2, "closed form equals full solver", timed(secs(5), closed_form_agreement)));
    results.push((3, "time-domain oracle equivalence", timed(secs(120), oracle_equivalence)));
    results.push((4, "fidelity identity", timed(secs(1), fidelity_identity)));
    let start = Instant::now();
    let f3 = fig3();
    let shared = start.elapsed();
    let over = shared > Duration::from_secs(600);
    for (n, name, mut v) in [
        (5, "shell sweep headline error", fig3_headline(&f3)),
        (6, "shell sweep blue below red", fig3_ordering(&f3)),
    ] {
        if over {
            v.pass = false;
        }
        v.detail.push_str(&format!("; {:.2} s", shared.as_secs_f64()));
        results.push((n, name, v));
    }
    results.push((7, "dressing curves shape", timed(secs(600), fig2a_shape)));
    results.push((8, "optimize-both dominates shelving", timed(secs(600), fig2b_dominance)));
    results.push((9, "phase sweep extremum", timed(secs(600), fig4_extremum)));
    results.push((10, "circuit-QED oracle and ordering", timed(secs(300), cqed_oracle)));
    results.push((11, "thread-count determinism", timed(None, determinism)));

    let failed = results.iter().filter(|r| !r.2.pass).count();
    for (n, name, v) in &results {
        println!("[{}] {n:>2}. {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
