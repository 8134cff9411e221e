//! Deterministic bounded multi-start Nelder–Mead.
//!
//! Search happens in the unit cube; each axis maps it linearly or
//! logarithmically onto its bounds. Every start of a fixed grid is
//! evaluated, then simplex descents run from the best of them. Proposals
//! outside the cube are projected back onto it, so every evaluated point
//! respects the bounds.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Axis {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub scale: Scale,
}

impl Axis {
    pub fn linear(name: &str, lower: f64, upper: f64) -> Self {
        Axis { name: name.into(), lower, upper, scale: Scale::Linear }
    }

    pub fn log(name: &str, lower: f64, upper: f64) -> Self {
        Axis { name: name.into(), lower, upper, scale: Scale::Log }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower <= self.upper) {
            return Err(Error::invalid("bounds", self.lower, "need finite lower <= upper"));
        }
        if self.scale == Scale::Log && !(self.lower > 0.0) {
            return Err(Error::invalid("bounds", self.lower, "log axes need a positive lower bound"));
        }
        Ok(())
    }

    pub fn to_value(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let x = match self.scale {
            Scale::Linear => self.lower + (self.upper - self.lower) * u,
            Scale::Log => self.lower * (self.upper / self.lower).powf(u),
        };
        x.clamp(self.lower, self.upper)
    }

    pub fn to_unit(&self, x: f64) -> f64 {
        if self.upper == self.lower {
            return 0.0;
        }
        let u = match self.scale {
            Scale::Linear => (x - self.lower) / (self.upper - self.lower),
            Scale::Log => (x / self.lower).ln() / (self.upper / self.lower).ln(),
        };
        u.clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields, default))]
pub struct SearchSpec {
    pub axes: Vec<Axis>,
    /// Start grid points per axis.
    pub starts: usize,
    /// Number of best grid points refined by simplex descent, 0 for all.
    pub descents: usize,
    /// Stop once the simplex values spread by less than this.
    pub tol: f64,
    /// Stop once the simplex is smaller than this in the unit cube.
    pub x_tol: f64,
    /// Evaluation budget per descent.
    pub max_evals: usize,
    /// Additional start points in physical coordinates.
    pub extra_starts: Vec<Vec<f64>>,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec {
            axes: Vec::new(),
            starts: 4,
            descents: 0,
            tol: 1e-10,
            x_tol: 1e-6,
            max_evals: 400,
            extra_starts: Vec::new(),
        }
    }
}

impl SearchSpec {
    pub fn new(axes: Vec<Axis>) -> Self {
        SearchSpec { axes, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    /// Every evaluation in the order it was made.
    pub trace: Vec<Evaluation>,
}

struct Counted<'a, F> {
    axes: &'a [Axis],
    objective: F,
    trace: Vec<Evaluation>,
}

impl<F: FnMut(&[f64]) -> Result<f64>> Counted<'_, F> {
    fn eval(&mut self, u: &[f64]) -> Result<f64> {
        let point: Vec<f64> = self.axes.iter().zip(u).map(|(a, &v)| a.to_value(v)).collect();
        let value = (self.objective)(&point)?;
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective { point });
        }
        self.trace.push(Evaluation { point, value });
        Ok(value)
    }
}

/// Minimises `objective` over the box described by `spec`.
pub fn minimize<F>(spec: &SearchSpec, objective: F) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let dim = spec.axes.len();
    if dim == 0 {
        return Err(Error::invalid("axes", 0.0, "at least one free parameter is needed"));
    }
    for a in &spec.axes {
        a.validate()?;
    }
    if spec.starts == 0 {
        return Err(Error::invalid("starts", 0.0, "must be at least one"));
    }
    let mut f = Counted { axes: &spec.axes, objective, trace: Vec::new() };

    let mut starts = start_grid(dim, spec.starts);
    for extra in &spec.extra_starts {
        if extra.len() != dim {
            return Err(Error::invalid("extra_starts", extra.len() as f64, "wrong dimension"));
        }
        starts.push(spec.axes.iter().zip(extra).map(|(a, &x)| a.to_unit(x)).collect());
    }
    let mut scored = Vec::with_capacity(starts.len());
    for u in starts {
        let v = f.eval(&u)?;
        scored.push((v, u));
    }
    // stable sort keeps grid order among ties
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n_desc = if spec.descents == 0 { scored.len() } else { spec.descents.min(scored.len()) };

    let step = 0.5 / spec.starts as f64;
    let mut best = scored[0].clone();
    for (v, u) in scored.into_iter().take(n_desc) {
        let (bv, bu) = nelder_mead(&mut f, u, v, step, spec)?;
        if bv < best.0 {
            best = (bv, bu);
        }
    }
    let point = spec.axes.iter().zip(&best.1).map(|(a, &v)| a.to_value(v)).collect();
    Ok(Minimum { point, value: best.0, trace: f.trace })
}

fn start_grid(dim: usize, k: usize) -> Vec<Vec<f64>> {
    let total = k.pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            (0..dim)
                .map(|_| {
                    let i = idx % k;
                    idx /= k;
                    (i as f64 + 0.5) / k as f64
                })
                .collect()
        })
        .collect()
}

fn project(u: &mut [f64]) {
    for v in u.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
}

fn combine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b − a)
    let mut out: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect();
    project(&mut out);
    out
}

fn nelder_mead<F: FnMut(&[f64]) -> Result<f64>>(
    f: &mut Counted<'_, F>,
    start: Vec<f64>,
    start_value: f64,
    step: f64,
    spec: &SearchSpec,
) -> Result<(f64, Vec<f64>)> {
    let dim = start.len();
    let mut simplex = vec![(start_value, start.clone())];
    for i in 0..dim {
        let mut u = start.clone();
        u[i] = if u[i] + step <= 1.0 { u[i] + step } else { u[i] - step };
        let v = f.eval(&u)?;
        simplex.push((v, u));
    }
    let mut evals = dim;
    while evals < spec.max_evals {
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        let spread = simplex[dim].0 - simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(_, u)| u.iter().zip(&simplex[0].1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= spec.tol && diameter <= spec.x_tol {
            break;
        }
        if diameter == 0.0 {
            break;
        }
        let mut centroid = vec![0.0; dim];
        for (_, u) in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(u) {
                *c += x / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let reflected = combine(&centroid, &worst.1, -1.0);
        let fr = f.eval(&reflected)?;
        evals += 1;
        if fr < simplex[0].0 {
            let expanded = combine(&centroid, &worst.1, -2.0);
            let fe = f.eval(&expanded)?;
            evals += 1;
            simplex[dim] = if fe < fr { (fe, expanded) } else { (fr, reflected) };
            continue;
        }
        if fr < simplex[dim - 1].0 {
            simplex[dim] = (fr, reflected);
            continue;
        }
        let (target, ft) = if fr < worst.0 { (reflected, fr) } else { (worst.1.clone(), worst.0) };
        let contracted = combine(&centroid, &target, 0.5);
        let fc = f.eval(&contracted)?;
        evals += 1;
        if fc < ft {
            simplex[dim] = (fc, contracted);
            continue;
        }
        let best = simplex[0].1.clone();
        for entry in simplex.iter_mut().skip(1) {
            let u = combine(&best, &entry.1, 0.5);
            let v = f.eval(&u)?;
            evals += 1;
            *entry = (v, u);
        }
    }
    simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (v, u) = simplex.swap_remove(0);
    Ok((v, u))
}
