use serde::{Deserialize, Serialize};

use crate::cylindrical::levy::CylindricalLevyMeasure;
use crate::cylindrical::space::{pairing, FunctionalSpace};
use crate::error::{Error, Result};
use crate::extension::{d_nu, MeasureOnU};
use crate::kernels::Truncation;
use crate::onedim::{truncation_breaks, Growth};
use crate::quadrature::Quadrature;

/// The drift `p: U* → R` of a characteristics triplet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriftFunctional {
    Zero,
    /// `Σ coeffs_i a_i`.
    Linear {
        coeffs: Vec<f64>,
    },
    /// `λ h(ℓ(a))` with `ℓ(a) = Σ coeffs_i a_i`.
    PoissonDrift {
        coeffs: Vec<f64>,
        lambda: f64,
        truncation: Truncation,
    },
    /// Ridge function `g(<direction, a>)` with `g` piecewise linear through
    /// `knots` and constant beyond the outermost knots.
    Table {
        direction: Vec<f64>,
        knots: Vec<(f64, f64)>,
    },
    /// `∫ (h(<u,a>) - <u,a>) ν(du)` for `ν` with weak second moments.
    SecondMoment {
        measure: MeasureOnU,
        truncation: Truncation,
    },
    /// `∫ (h(<u,a>) - <u,a> 1_{B_U}(u)) ν(du)`.
    LevyDrift {
        measure: MeasureOnU,
        truncation: Truncation,
    },
    /// `base(a) + ∫ (to(s) - from(s)) (ν∘a^{-1})(ds)`.
    TruncationShift {
        base: Box<DriftFunctional>,
        nu: CylindricalLevyMeasure,
        from: Truncation,
        to: Truncation,
    },
    Sum {
        parts: Vec<DriftFunctional>,
    },
}

fn interpolate(knots: &[(f64, f64)], x: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let i = knots.partition_point(|k| k.0 <= x);
    let (x0, y0) = knots[i - 1];
    let (x1, y1) = knots[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

impl DriftFunctional {
    pub fn validate(&self, space: &FunctionalSpace) -> Result<()> {
        match self {
            DriftFunctional::Zero => Ok(()),
            DriftFunctional::Linear { coeffs } => space.check(coeffs),
            DriftFunctional::PoissonDrift { coeffs, lambda, .. } => {
                space.check(coeffs)?;
                if !lambda.is_finite() {
                    return Err(Error::InvalidParameter(format!("lambda {lambda}")));
                }
                Ok(())
            }
            DriftFunctional::Table { direction, knots } => {
                space.check(direction)?;
                if knots.is_empty() {
                    return Err(Error::InvalidParameter(
                        "table drift needs at least one knot".into(),
                    ));
                }
                if knots
                    .windows(2)
                    .any(|w| w[0].0.partial_cmp(&w[1].0) != Some(std::cmp::Ordering::Less))
                {
                    return Err(Error::InvalidParameter(
                        "table knots must be strictly increasing".into(),
                    ));
                }
                if knots.iter().any(|k| !k.0.is_finite() || !k.1.is_finite()) {
                    return Err(Error::InvalidParameter("table knots must be finite".into()));
                }
                Ok(())
            }
            DriftFunctional::SecondMoment { measure, .. }
            | DriftFunctional::LevyDrift { measure, .. } => measure.validate(space),
            DriftFunctional::TruncationShift { base, nu, .. } => {
                base.validate(space)?;
                nu.validate(space)
            }
            DriftFunctional::Sum { parts } => parts.iter().try_for_each(|p| p.validate(space)),
        }
    }

    pub fn eval(&self, space: &FunctionalSpace, a: &[f64]) -> Result<f64> {
        match self {
            DriftFunctional::Zero => Ok(0.0),
            DriftFunctional::Linear { coeffs } => Ok(pairing(coeffs, a)),
            DriftFunctional::PoissonDrift {
                coeffs,
                lambda,
                truncation,
            } => Ok(lambda * truncation.eval(pairing(coeffs, a))),
            DriftFunctional::Table { direction, knots } => {
                Ok(interpolate(knots, pairing(direction, a)))
            }
            DriftFunctional::SecondMoment {
                measure,
                truncation,
            } => {
                let h = *truncation;
                let (v, _) = measure.project(a).integrate_real(
                    &|s| h.eval(s) - s,
                    Growth::Quadratic(1.0 + h.bound()),
                    &truncation_breaks(h),
                    &Quadrature::default(),
                )?;
                Ok(v)
            }
            DriftFunctional::LevyDrift {
                measure,
                truncation,
            } => d_nu(measure, a, *truncation, space),
            DriftFunctional::TruncationShift { base, nu, from, to } => {
                let (from, to) = (*from, *to);
                let mut breaks = truncation_breaks(from);
                breaks.extend(truncation_breaks(to));
                let (shift, _) = nu.project(a).integrate_real(
                    &|s| to.eval(s) - from.eval(s),
                    Growth::Quadratic(from.bound() + to.bound()),
                    &breaks,
                    &Quadrature::default(),
                )?;
                Ok(base.eval(space, a)? + shift)
            }
            DriftFunctional::Sum { parts } => parts.iter().map(|p| p.eval(space, a)).sum(),
        }
    }

    /// `t · p`.
    pub fn scaled(&self, t: f64) -> DriftFunctional {
        if t == 0.0 {
            return DriftFunctional::Zero;
        }
        match self {
            DriftFunctional::Zero => DriftFunctional::Zero,
            DriftFunctional::Linear { coeffs } => DriftFunctional::Linear {
                coeffs: coeffs.iter().map(|c| c * t).collect(),
            },
            DriftFunctional::PoissonDrift {
                coeffs,
                lambda,
                truncation,
            } => DriftFunctional::PoissonDrift {
                coeffs: coeffs.clone(),
                lambda: lambda * t,
                truncation: *truncation,
            },
            DriftFunctional::Table { direction, knots } => DriftFunctional::Table {
                direction: direction.clone(),
                knots: knots.iter().map(|&(x, y)| (x, y * t)).collect(),
            },
            DriftFunctional::SecondMoment {
                measure,
                truncation,
            } => DriftFunctional::SecondMoment {
                measure: measure.scaled(t),
                truncation: *truncation,
            },
            DriftFunctional::LevyDrift {
                measure,
                truncation,
            } => DriftFunctional::LevyDrift {
                measure: measure.scaled(t),
                truncation: *truncation,
            },
            DriftFunctional::TruncationShift { base, nu, from, to } => {
                DriftFunctional::TruncationShift {
                    base: Box::new(base.scaled(t)),
                    nu: nu.scaled(t),
                    from: *from,
                    to: *to,
                }
            }
            DriftFunctional::Sum { parts } => DriftFunctional::Sum {
                parts: parts.iter().map(|p| p.scaled(t)).collect(),
            },
        }
    }

    pub fn plus(&self, other: &DriftFunctional) -> DriftFunctional {
        let mut parts = Vec::new();
        for p in [self, other] {
            match p {
                DriftFunctional::Zero => {}
                DriftFunctional::Sum { parts: q } => parts.extend(q.iter().cloned()),
                other => parts.push(other.clone()),
            }
        }
        match parts.len() {
            0 => DriftFunctional::Zero,
            1 => parts.pop().unwrap(),
            _ => DriftFunctional::Sum { parts },
        }
    }
}
