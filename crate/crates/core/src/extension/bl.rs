use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::onedim::LevyMeasureR;
use crate::quadrature::Quadrature;

/// Default number of cells used to discretise densities.
pub const DEFAULT_CELLS: usize = 10_000;
/// Densities are discretised on `[-extent, extent]` with `extent <= EXTENT_CAP`.
pub const EXTENT_CAP: f64 = 100.0;

/// A finite measure on the line given by atoms `(x_i, w_i)`, `w_i >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMeasureR {
    pub atoms: Vec<(f64, f64)>,
}

/// Uniform grid on `[-extent, extent]` used to discretise densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub extent: f64,
    pub cells: usize,
}

impl Grid {
    /// Joint grid for the continuous parts of `measures`, with 5% padding.
    pub fn joint(measures: &[&LevyMeasureR], cells: usize) -> Grid {
        let extent = measures
            .iter()
            .map(|m| m.continuous_part().density_extent(EXTENT_CAP))
            .fold(0.0, f64::max);
        Grid {
            extent: (1.05 * extent).min(EXTENT_CAP),
            cells: cells.max(2) & !1,
        }
    }
}

impl FiniteMeasureR {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms
            .iter()
            .any(|&(x, w)| !x.is_finite() || !(w >= 0.0 && w.is_finite()))
        {
            return Err(Error::InvalidMeasure(
                "finite measure needs finite locations and weights >= 0".into(),
            ));
        }
        Ok(FiniteMeasureR { atoms })
    }

    pub fn zero() -> Self {
        FiniteMeasureR { atoms: Vec::new() }
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// `q δ_0 + (s² ∧ 1) η(ds)`; atoms of `η` are kept exactly, densities are
    /// replaced by their cell masses placed at cell midpoints, and mass beyond
    /// the grid at `±extent`.
    pub fn weighted_levy(q: f64, eta: &LevyMeasureR, grid: &Grid) -> Result<Self> {
        let weight = |s: f64| (s * s).min(1.0);
        let mut atoms: Vec<(f64, f64)> = Vec::new();
        if q != 0.0 {
            atoms.push((0.0, q));
        }
        atoms.extend(
            eta.atomic_part()
                .into_iter()
                .map(|(s, w)| (s, w * weight(s))),
        );
        let dens = eta.continuous_part();
        if !dens.is_zero() {
            let quad = Quadrature::default();
            let x = grid.extent;
            if x > 0.0 {
                let half = grid.cells / 2;
                let h = x / half as f64;
                for k in 0..half {
                    let (l, r) = (k as f64 * h, (k + 1) as f64 * h);
                    let mid = 0.5 * (l + r);
                    let pos = dens.integrate_interval(&weight, l, r, &quad)?;
                    let neg = dens.integrate_interval(&weight, -r, -l, &quad)?;
                    if pos > 0.0 {
                        atoms.push((mid, pos));
                    }
                    if neg > 0.0 {
                        atoms.push((-mid, neg));
                    }
                }
            }
            let tail_pos = dens.integrate_interval(&weight, x, f64::INFINITY, &quad)?;
            let tail_neg = dens.integrate_interval(&weight, f64::NEG_INFINITY, -x, &quad)?;
            if tail_pos > 0.0 {
                atoms.push((x, tail_pos));
            }
            if tail_neg > 0.0 {
                atoms.push((-x, tail_neg));
            }
        }
        FiniteMeasureR::new(atoms)
    }
}

/// Piecewise-linear concave function on `[-1, 1]` given by its breakpoints.
type Concave = Vec<(f64, f64)>;

fn eval_pl(f: &Concave, x: f64) -> f64 {
    let i = f.partition_point(|p| p.0 < x);
    if i == 0 {
        return f[0].1;
    }
    if i == f.len() {
        return f[f.len() - 1].1;
    }
    let (x0, y0) = f[i - 1];
    let (x1, y1) = f[i];
    if x1 == x0 {
        return y0.max(y1);
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// `W(f) = max { V(g) : g ∈ [-1, 1], |g - f| <= d }` for concave `V`.
fn window_max(v: &Concave, d: f64) -> Concave {
    let (imax, _) = v
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, by), (i, p)| {
            if p.1 > by {
                (i, p.1)
            } else {
                (bi, by)
            }
        });
    let mut shifted: Concave = Vec::with_capacity(v.len() + 1);
    shifted.extend(v[..=imax].iter().map(|&(x, y)| (x - d, y)));
    shifted.extend(v[imax..].iter().map(|&(x, y)| (x + d, y)));
    let mut out: Concave = Vec::with_capacity(shifted.len());
    out.push((-1.0, eval_pl(&shifted, -1.0)));
    out.extend(shifted.iter().copied().filter(|p| p.0 > -1.0 && p.0 < 1.0));
    out.push((1.0, eval_pl(&shifted, 1.0)));
    prune(out)
}

/// Drops breakpoints where the function is affine across.
fn prune(f: Concave) -> Concave {
    let mut out: Concave = Vec::with_capacity(f.len());
    for p in f {
        if let Some(last) = out.last() {
            if p.0 <= last.0 {
                continue;
            }
        }
        while out.len() >= 2 {
            let (x0, y0) = out[out.len() - 2];
            let (x1, y1) = out[out.len() - 1];
            let slope_a = (y1 - y0) / (x1 - x0);
            let slope_b = (p.1 - y1) / (p.0 - x1);
            if (slope_a - slope_b).abs() <= 1e-13 * (1.0 + slope_a.abs()) {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// Bounded-Lipschitz distance
/// `sup { ∫ f d(m1 - m2) : |f| <= 1, |f(x) - f(y)| <= |x - y| }`,
/// computed exactly by dynamic programming over the sorted support.
pub fn bl_distance(m1: &FiniteMeasureR, m2: &FiniteMeasureR) -> f64 {
    let mut signed: Vec<(f64, f64)> = m1
        .atoms
        .iter()
        .copied()
        .chain(m2.atoms.iter().map(|&(x, w)| (x, -w)))
        .collect();
    signed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(signed.len());
    for (x, w) in signed {
        match merged.last_mut() {
            Some(last) if last.0 == x => last.1 += w,
            _ => merged.push((x, w)),
        }
    }
    merged.retain(|p| p.1 != 0.0);
    let Some(&(x0, s0)) = merged.first() else {
        return 0.0;
    };
    let mut value: Concave = vec![(-1.0, -s0), (1.0, s0)];
    let mut prev = x0;
    for &(x, s) in &merged[1..] {
        value = window_max(&value, x - prev);
        for p in value.iter_mut() {
            p.1 += s * p.0;
        }
        value = prune(value);
        prev = x;
    }
    value
        .iter()
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0)
}
