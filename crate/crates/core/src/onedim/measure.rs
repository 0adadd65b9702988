//! Lévy measures on the real line and the integration engine shared by every
//! `∫ g dη` in the crate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{Estimate, Quadrature};

/// Parametric densities on `s != 0`, all nonincreasing in `|s|` on each side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DensityFamily {
    /// `c e^{-rate |s|}` on both half-lines.
    Exponential { c: f64, rate: f64 },
    /// `c_± e^{-rate_± |s|} |s|^{-1-alpha}` on the positive/negative half-line.
    TemperedStable {
        c_pos: f64,
        c_neg: f64,
        alpha: f64,
        rate_pos: f64,
        rate_neg: f64,
    },
}

/// One side of a density: `c e^{-rate x} x^{-1-alpha}` for `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Profile {
    pub c: f64,
    pub alpha: f64,
    pub rate: f64,
}

impl Profile {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if self.c == 0.0 {
            return 0.0;
        }
        let power = if self.alpha == -1.0 {
            1.0
        } else {
            x.powf(-1.0 - self.alpha)
        };
        self.c * (-self.rate * x).exp() * power
    }
}

impl DensityFamily {
    pub(crate) fn sides(&self) -> [Profile; 2] {
        match *self {
            DensityFamily::Exponential { c, rate } => [
                Profile {
                    c,
                    alpha: -1.0,
                    rate,
                },
                Profile {
                    c,
                    alpha: -1.0,
                    rate,
                },
            ],
            DensityFamily::TemperedStable {
                c_pos,
                c_neg,
                alpha,
                rate_pos,
                rate_neg,
            } => [
                Profile {
                    c: c_pos,
                    alpha,
                    rate: rate_pos,
                },
                Profile {
                    c: c_neg,
                    alpha,
                    rate: rate_neg,
                },
            ],
        }
    }

    fn alpha(&self) -> f64 {
        match *self {
            DensityFamily::Exponential { .. } => -1.0,
            DensityFamily::TemperedStable { alpha, .. } => alpha,
        }
    }

    fn validate(&self, hi: Option<f64>) -> Result<()> {
        let alpha = self.alpha();
        if !(-1.0..2.0).contains(&alpha) {
            return Err(Error::InvalidMeasure(format!(
                "stability index alpha = {alpha} outside [-1, 2)"
            )));
        }
        for side in self.sides() {
            if !(side.c >= 0.0 && side.c.is_finite())
                || !(side.rate >= 0.0 && side.rate.is_finite())
            {
                return Err(Error::InvalidMeasure(
                    "density coefficients and rates must be finite and nonnegative".into(),
                ));
            }
            if side.c > 0.0 && side.rate == 0.0 && hi.is_none() && alpha <= 0.0 {
                return Err(Error::InvalidMeasure(
                    "untempered density with alpha <= 0 has infinite mass away from the origin"
                        .into(),
                ));
            }
        }
        Ok(())
    }
}

fn one() -> f64 {
    1.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

/// A σ-finite measure on the line with no mass at the origin and
/// `∫ (s² ∧ 1) dη < ∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum LevyMeasureR {
    /// Finitely many atoms `(s_i, w_i)`, `s_i != 0`, `w_i > 0`.
    Atomic {
        atoms: Vec<(f64, f64)>,
    },
    /// `weight · (base density restricted to lo <= |s| <= hi)` pushed forward by `s -> dilation · s`.
    Density {
        density: DensityFamily,
        /// Magnitude bounds `[lo, hi]` of the base variable; `hi = null` means unbounded.
        support: (f64, Option<f64>),
        #[serde(default = "one", skip_serializing_if = "is_one")]
        weight: f64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        dilation: f64,
    },
    Sum {
        parts: Vec<LevyMeasureR>,
    },
}

/// Declared behaviour of an integrand `g` near the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    /// `g` is bounded; only admissible against finite measures.
    Bounded,
    /// `|g(s)| <= C s²` for `|s| <= 1`.
    Quadratic(f64),
}

const PROBE_EXPONENTS: std::ops::RangeInclusive<i32> = 0..=40;

impl LevyMeasureR {
    pub fn zero() -> Self {
        LevyMeasureR::Atomic { atoms: Vec::new() }
    }

    pub fn atomic(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let m = LevyMeasureR::Atomic { atoms };
        m.validate()?;
        Ok(m)
    }

    pub fn dirac(location: f64, weight: f64) -> Result<Self> {
        Self::atomic(vec![(location, weight)])
    }

    pub fn density(density: DensityFamily, lo: f64, hi: Option<f64>) -> Result<Self> {
        let m = LevyMeasureR::Density {
            density,
            support: (lo, hi),
            weight: 1.0,
            dilation: 1.0,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LevyMeasureR::Atomic { atoms } => {
                for &(s, w) in atoms {
                    if s == 0.0 {
                        return Err(Error::InvalidMeasure("atom at the origin".into()));
                    }
                    if !s.is_finite() || !(w > 0.0 && w.is_finite()) {
                        return Err(Error::InvalidMeasure(format!(
                            "atom ({s}, {w}) needs finite location and positive finite weight"
                        )));
                    }
                }
                Ok(())
            }
            LevyMeasureR::Density {
                density,
                support: (lo, hi),
                weight,
                dilation,
            } => {
                if !(*lo >= 0.0 && lo.is_finite()) {
                    return Err(Error::InvalidMeasure(format!("support lower bound {lo}")));
                }
                if let Some(hi) = hi {
                    if !(hi > lo && hi.is_finite()) {
                        return Err(Error::InvalidMeasure(format!(
                            "support [{lo}, {hi}] is empty"
                        )));
                    }
                }
                if !(*weight >= 0.0 && weight.is_finite()) {
                    return Err(Error::InvalidMeasure(format!("weight {weight}")));
                }
                if *dilation == 0.0 || !dilation.is_finite() {
                    return Err(Error::InvalidMeasure(format!("dilation {dilation}")));
                }
                density.validate(*hi)
            }
            LevyMeasureR::Sum { parts } => parts.iter().try_for_each(|p| p.validate()),
        }
    }

    /// Multiply the measure by `factor >= 0`.
    pub fn scaled(&self, factor: f64) -> LevyMeasureR {
        if factor == 0.0 {
            return LevyMeasureR::zero();
        }
        match self {
            LevyMeasureR::Atomic { atoms } => LevyMeasureR::Atomic {
                atoms: atoms.iter().map(|&(s, w)| (s, w * factor)).collect(),
            },
            LevyMeasureR::Density {
                density,
                support,
                weight,
                dilation,
            } => LevyMeasureR::Density {
                density: density.clone(),
                support: *support,
                weight: weight * factor,
                dilation: *dilation,
            },
            LevyMeasureR::Sum { parts } => LevyMeasureR::Sum {
                parts: parts.iter().map(|p| p.scaled(factor)).collect(),
            },
        }
    }

    /// Image measure under `s -> c s`. Mass sent to the origin is dropped.
    pub fn dilated(&self, c: f64) -> LevyMeasureR {
        if c == 0.0 {
            return LevyMeasureR::zero();
        }
        match self {
            LevyMeasureR::Atomic { atoms } => LevyMeasureR::Atomic {
                atoms: atoms
                    .iter()
                    .map(|&(s, w)| (c * s, w))
                    .filter(|&(s, _)| s != 0.0)
                    .collect(),
            },
            LevyMeasureR::Density {
                density,
                support,
                weight,
                dilation,
            } => LevyMeasureR::Density {
                density: density.clone(),
                support: *support,
                weight: *weight,
                dilation: dilation * c,
            },
            LevyMeasureR::Sum { parts } => LevyMeasureR::Sum {
                parts: parts.iter().map(|p| p.dilated(c)).collect(),
            },
        }
    }

    pub fn plus(&self, other: &LevyMeasureR) -> LevyMeasureR {
        match (self, other) {
            (LevyMeasureR::Atomic { atoms: a }, LevyMeasureR::Atomic { atoms: b }) => {
                LevyMeasureR::Atomic {
                    atoms: a.iter().chain(b.iter()).copied().collect(),
                }
            }
            _ => LevyMeasureR::Sum {
                parts: vec![self.clone(), other.clone()],
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LevyMeasureR::Atomic { atoms } => atoms.is_empty(),
            LevyMeasureR::Density {
                weight, density, ..
            } => *weight == 0.0 || density.sides().iter().all(|s| s.c == 0.0),
            LevyMeasureR::Sum { parts } => parts.iter().all(|p| p.is_zero()),
        }
    }

    /// True when `η(R) < ∞`.
    pub fn is_finite(&self) -> bool {
        match self {
            LevyMeasureR::Atomic { .. } => true,
            LevyMeasureR::Density {
                density, support, ..
            } => self.is_zero() || support.0 > 0.0 || density.alpha() < 0.0,
            LevyMeasureR::Sum { parts } => parts.iter().all(|p| p.is_finite()),
        }
    }

    /// Flattened atom list when the measure is purely atomic.
    pub fn as_atoms(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            LevyMeasureR::Atomic { atoms } => Some(atoms.clone()),
            LevyMeasureR::Density { .. } if self.is_zero() => Some(Vec::new()),
            LevyMeasureR::Density { .. } => None,
            LevyMeasureR::Sum { parts } => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.as_atoms()?);
                }
                Some(out)
            }
        }
    }

    /// `∫ g dη`, with quadrature panels split at `±breaks` (given in the variable `s`).
    pub fn integrate<G: Fn(f64) -> Complex64>(
        &self,
        g: &G,
        growth: Growth,
        breaks: &[f64],
        quad: &Quadrature,
    ) -> Result<Estimate> {
        if let Growth::Quadratic(c) = growth {
            if !self.is_finite() {
                check_growth(g, c)?;
            }
        } else if !self.is_finite() {
            return Err(Error::Hypothesis(
                "a bounded integrand is only integrable against a finite measure; declare quadratic growth".into(),
            ));
        }
        self.integrate_unchecked(g, breaks, quad)
    }

    fn integrate_unchecked<G: Fn(f64) -> Complex64>(
        &self,
        g: &G,
        breaks: &[f64],
        quad: &Quadrature,
    ) -> Result<Estimate> {
        match self {
            LevyMeasureR::Atomic { atoms } => {
                Ok(Estimate::exact(atoms.iter().map(|&(s, w)| g(s) * w).sum()))
            }
            LevyMeasureR::Density {
                density,
                support,
                weight,
                dilation,
            } => {
                if *weight == 0.0 {
                    return Ok(Estimate::ZERO);
                }
                let c = *dilation;
                let base_breaks: Vec<f64> = breaks.iter().map(|b| b.abs() / c.abs()).collect();
                let mut total = Estimate::ZERO;
                for (side, sign) in density.sides().iter().zip([1.0, -1.0]) {
                    if side.c == 0.0 {
                        continue;
                    }
                    let f = |x: f64| g(sign * c * x) * side.eval(x);
                    total = total + integrate_half_line(&f, *support, &base_breaks, quad)?;
                }
                Ok(total * *weight)
            }
            LevyMeasureR::Sum { parts } => parts
                .iter()
                .map(|p| p.integrate_unchecked(g, breaks, quad))
                .sum(),
        }
    }

    pub fn integrate_real<G: Fn(f64) -> f64>(
        &self,
        g: &G,
        growth: Growth,
        breaks: &[f64],
        quad: &Quadrature,
    ) -> Result<(f64, f64)> {
        let est = self.integrate(&|s| Complex64::new(g(s), 0.0), growth, breaks, quad)?;
        Ok((est.value.re, est.error))
    }

    /// `∫ (s² ∧ 1) dη`.
    pub fn integrability(&self) -> Result<f64> {
        let (v, _) = self.integrate_real(
            &|s: f64| (s * s).min(1.0),
            Growth::Quadratic(1.0),
            &[1.0],
            &Quadrature::default(),
        )?;
        Ok(v)
    }

    /// `η({|s| > eps})`; infinite when the measure piles up at the origin.
    pub fn mass_beyond(&self, eps: f64) -> Result<f64> {
        if eps == 0.0 && !self.is_finite() {
            return Ok(f64::INFINITY);
        }
        match self {
            LevyMeasureR::Atomic { atoms } => Ok(atoms
                .iter()
                .filter(|(s, _)| s.abs() > eps)
                .map(|(_, w)| w)
                .sum()),
            LevyMeasureR::Density {
                density,
                support,
                weight,
                dilation,
            } => {
                let lo = support.0.max(eps / dilation.abs());
                let hi = support.1;
                if let Some(hi) = hi {
                    if lo >= hi {
                        return Ok(0.0);
                    }
                }
                let quad = Quadrature::default();
                let mut total = 0.0;
                for side in density.sides() {
                    if side.c == 0.0 {
                        continue;
                    }
                    let f = |x: f64| Complex64::new(side.eval(x), 0.0);
                    total += integrate_half_line(&f, (lo, hi), &[], &quad)?.value.re;
                }
                Ok(total * weight)
            }
            LevyMeasureR::Sum { parts } => parts.iter().map(|p| p.mass_beyond(eps)).sum(),
        }
    }

    /// `∫_{|s| <= eps} s² dη`, the variance carried by jumps of size at most `eps`.
    pub fn small_jump_variance(&self, eps: f64) -> Result<f64> {
        let (v, _) = self.integrate_real(
            &|s: f64| if s.abs() <= eps { s * s } else { 0.0 },
            Growth::Quadratic(1.0),
            &[eps],
            &Quadrature::default(),
        )?;
        Ok(v)
    }
}

impl LevyMeasureR {
    /// The atoms of the measure, across all summands.
    pub fn atomic_part(&self) -> Vec<(f64, f64)> {
        match self {
            LevyMeasureR::Atomic { atoms } => atoms.clone(),
            LevyMeasureR::Density { .. } => Vec::new(),
            LevyMeasureR::Sum { parts } => parts.iter().flat_map(|p| p.atomic_part()).collect(),
        }
    }

    /// The measure with its atoms removed.
    pub fn continuous_part(&self) -> LevyMeasureR {
        match self {
            LevyMeasureR::Atomic { .. } => LevyMeasureR::zero(),
            LevyMeasureR::Density { .. } => self.clone(),
            LevyMeasureR::Sum { parts } => LevyMeasureR::Sum {
                parts: parts
                    .iter()
                    .map(|p| p.continuous_part())
                    .filter(|p| !p.is_zero())
                    .collect(),
            },
        }
    }

    /// Magnitude beyond which every density part has relative tail mass below
    /// `e^{-40}`, capped at `cap`.
    pub fn density_extent(&self, cap: f64) -> f64 {
        match self {
            LevyMeasureR::Atomic { .. } => 0.0,
            LevyMeasureR::Density {
                density,
                support: (lo, hi),
                dilation,
                ..
            } => {
                if self.is_zero() {
                    return 0.0;
                }
                let reach = density
                    .sides()
                    .iter()
                    .filter(|s| s.c > 0.0)
                    .map(|s| {
                        if s.rate > 0.0 {
                            lo + 40.0 / s.rate
                        } else {
                            f64::INFINITY
                        }
                    })
                    .fold(0.0, f64::max);
                let base = hi.map_or(reach, |h| h.min(reach));
                (base * dilation.abs()).min(cap)
            }
            LevyMeasureR::Sum { parts } => parts
                .iter()
                .map(|p| p.density_extent(cap))
                .fold(0.0, f64::max),
        }
    }

    /// `∫_{lo < s <= hi} g dη` over the density parts, for `0 <= lo < hi` or `lo < hi <= 0`.
    pub fn integrate_interval<G: Fn(f64) -> f64>(
        &self,
        g: &G,
        lo: f64,
        hi: f64,
        quad: &Quadrature,
    ) -> Result<f64> {
        match self {
            LevyMeasureR::Atomic { .. } => Ok(0.0),
            LevyMeasureR::Density {
                density,
                support,
                weight,
                dilation,
            } => {
                if *weight == 0.0 {
                    return Ok(0.0);
                }
                let c = *dilation;
                let mut total = 0.0;
                for (side, sign) in density.sides().iter().zip([1.0, -1.0]) {
                    if side.c == 0.0 {
                        continue;
                    }
                    let (x0, x1) = {
                        let (u, v) = (lo / (sign * c), hi / (sign * c));
                        (u.min(v), u.max(v))
                    };
                    let a = x0.max(support.0).max(0.0);
                    let b = support.1.map_or(x1, |h| x1.min(h));
                    if b <= a {
                        continue;
                    }
                    let f = |x: f64| Complex64::new(g(sign * c * x) * side.eval(x), 0.0);
                    total += integrate_half_line(&f, (a, Some(b)), &[], quad)?.value.re;
                }
                Ok(total * weight)
            }
            LevyMeasureR::Sum { parts } => parts
                .iter()
                .map(|p| p.integrate_interval(g, lo, hi, quad))
                .sum(),
        }
    }
}

fn check_growth<G: Fn(f64) -> Complex64>(g: &G, c: f64) -> Result<()> {
    for k in PROBE_EXPONENTS {
        let s = 2f64.powi(-k);
        for s in [s, -s] {
            let value = g(s).norm();
            let bound = c * s * s;
            if value > bound * (1.0 + 1e-9) + 1e-300 {
                return Err(Error::GrowthBoundViolated {
                    at: s,
                    value,
                    bound,
                });
            }
        }
    }
    Ok(())
}

/// `∫_{lo}^{hi} f(x) dx` for `x > 0`, where `f` may be singular at `x = 0`.
pub(crate) fn integrate_half_line<F: Fn(f64) -> Complex64>(
    f: &F,
    (lo, hi): (f64, Option<f64>),
    breaks: &[f64],
    quad: &Quadrature,
) -> Result<Estimate> {
    let upper = hi.unwrap_or(f64::INFINITY);
    let mut points: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| b > lo && b < upper && b.is_finite())
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    if lo == 0.0 {
        // first panel [0, b] with x = b y², which tames x^{-1-alpha} singularities
        let b = points.first().copied().unwrap_or(upper).min(1.0);
        let head = quad.integrate(|y| f(b * y * y) * (2.0 * b * y), 0.0, 1.0)?;
        let mut rest = vec![b];
        rest.extend(points.iter().copied().filter(|&p| p > b));
        if upper > b {
            rest.push(upper);
        }
        let tail = if rest.len() >= 2 {
            quad.integrate_breaks(f, &geometric_refinement(&rest))?
        } else {
            Estimate::ZERO
        };
        return Ok(head + tail);
    }
    let mut all = vec![lo];
    all.extend(points);
    all.push(upper);
    quad.integrate_breaks(f, &geometric_refinement(&all))
}

/// Splits each finite panel `[p, q]` with `0 < 2p < q` at `2p, 4p, ...`.
fn geometric_refinement(points: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len());
    for w in points.windows(2) {
        out.push(w[0]);
        if w[0] > 0.0 && w[1].is_finite() {
            let mut x = 2.0 * w[0];
            while x < w[1] {
                out.push(x);
                x *= 2.0;
            }
        }
    }
    out.extend(points.last());
    out
}

/// `∫ g dη` with the default quadrature and no extra panel breaks.
pub fn levy_integral<G: Fn(f64) -> Complex64>(
    eta: &LevyMeasureR,
    g: G,
    growth: Growth,
) -> Result<Estimate> {
    eta.integrate(&g, growth, &[1.0], &Quadrature::default())
}
