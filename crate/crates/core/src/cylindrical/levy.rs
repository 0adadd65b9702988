use serde::{Deserialize, Serialize};

use crate::cylindrical::space::{pairing, FunctionalSpace};
use crate::error::{Error, Result};
use crate::extension::measure::{project_atoms, validate_atoms};
use crate::extension::MeasureOnU;
use crate::onedim::LevyMeasureR;

/// A Lévy measure on `R^n`, as produced by projecting a cylindrical Lévy
/// measure under `n` functionals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum LevyMeasureRn {
    Atomic {
        atoms: Vec<(Vec<f64>, f64)>,
    },
    /// `weight · radial∘(s ↦ s · direction)^{-1}`.
    Ray {
        direction: Vec<f64>,
        weight: f64,
        radial: LevyMeasureR,
    },
    Sum {
        parts: Vec<LevyMeasureRn>,
    },
}

fn apply(t: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    t.iter().map(|row| pairing(row, x)).collect()
}

impl LevyMeasureRn {
    /// Image under the linear map with rows `t`, with mass sent to the origin removed.
    pub fn pushforward(&self, t: &[Vec<f64>]) -> LevyMeasureRn {
        match self {
            LevyMeasureRn::Atomic { atoms } => LevyMeasureRn::Atomic {
                atoms: atoms
                    .iter()
                    .map(|(x, w)| (apply(t, x), *w))
                    .filter(|(x, _)| x.iter().any(|&c| c != 0.0))
                    .collect(),
            },
            LevyMeasureRn::Ray {
                direction,
                weight,
                radial,
            } => {
                let direction = apply(t, direction);
                if direction.iter().all(|&c| c == 0.0) {
                    LevyMeasureRn::Atomic { atoms: Vec::new() }
                } else {
                    LevyMeasureRn::Ray {
                        direction,
                        weight: *weight,
                        radial: radial.clone(),
                    }
                }
            }
            LevyMeasureRn::Sum { parts } => LevyMeasureRn::Sum {
                parts: parts.iter().map(|p| p.pushforward(t)).collect(),
            },
        }
    }

    /// One-dimensional marginal along `t ∈ R^n`, i.e. the image under `x ↦ <t, x>`.
    pub fn marginal(&self, t: &[f64]) -> LevyMeasureR {
        match self {
            LevyMeasureRn::Atomic { atoms } => LevyMeasureR::Atomic {
                atoms: atoms
                    .iter()
                    .map(|(x, w)| (pairing(x, t), *w))
                    .filter(|&(s, _)| s != 0.0)
                    .collect(),
            },
            LevyMeasureRn::Ray {
                direction,
                weight,
                radial,
            } => radial.dilated(pairing(direction, t)).scaled(*weight),
            LevyMeasureRn::Sum { parts } => LevyMeasureR::Sum {
                parts: parts.iter().map(|p| p.marginal(t)).collect(),
            },
        }
    }

    /// Atoms with equal locations merged and sorted, or `None` when a density part is present.
    pub fn canonical_atoms(&self) -> Option<Vec<(Vec<f64>, f64)>> {
        let mut atoms = Vec::new();
        self.collect_atoms(&mut atoms)?;
        for (x, _) in atoms.iter_mut() {
            x.iter_mut().for_each(|c| *c += 0.0);
        }
        atoms.sort_by(|a, b| {
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut merged: Vec<(Vec<f64>, f64)> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => merged.push((x, w)),
            }
        }
        Some(merged)
    }

    fn collect_atoms(&self, out: &mut Vec<(Vec<f64>, f64)>) -> Option<()> {
        match self {
            LevyMeasureRn::Atomic { atoms } => {
                out.extend(atoms.iter().cloned());
                Some(())
            }
            LevyMeasureRn::Ray { radial, .. } if radial.is_zero() => Some(()),
            LevyMeasureRn::Ray { .. } => None,
            LevyMeasureRn::Sum { parts } => parts.iter().try_for_each(|p| p.collect_atoms(out)),
        }
    }
}

/// A cylindrical Lévy measure, represented by its images under finite tuples
/// of functionals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CylindricalLevyMeasure {
    Zero,
    /// `rate · δ_{(ℓ(a_1), ..., ℓ(a_n))}` with `ℓ(a) = Σ coeffs_i a_i`.
    AtomicFunctional {
        coeffs: Vec<f64>,
        rate: f64,
    },
    AtomsOnU {
        atoms: Vec<(Vec<f64>, f64)>,
    },
    MeasureOnU {
        measure: MeasureOnU,
    },
    Sum {
        parts: Vec<CylindricalLevyMeasure>,
    },
}

impl CylindricalLevyMeasure {
    pub fn validate(&self, space: &FunctionalSpace) -> Result<()> {
        match self {
            CylindricalLevyMeasure::Zero => Ok(()),
            CylindricalLevyMeasure::AtomicFunctional { coeffs, rate } => {
                space.check(coeffs)?;
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidMeasure(
                        "non-finite functional coefficients".into(),
                    ));
                }
                if !(*rate >= 0.0 && rate.is_finite()) {
                    return Err(Error::InvalidMeasure(format!("rate {rate}")));
                }
                Ok(())
            }
            CylindricalLevyMeasure::AtomsOnU { atoms } => validate_atoms(space, atoms),
            CylindricalLevyMeasure::MeasureOnU { measure } => measure.validate(space),
            CylindricalLevyMeasure::Sum { parts } => {
                parts.iter().try_for_each(|p| p.validate(space))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CylindricalLevyMeasure::Zero => true,
            CylindricalLevyMeasure::AtomicFunctional { coeffs, rate } => {
                *rate == 0.0 || coeffs.iter().all(|&c| c == 0.0)
            }
            CylindricalLevyMeasure::AtomsOnU { atoms } => atoms.is_empty(),
            CylindricalLevyMeasure::MeasureOnU { measure } => measure.is_zero(),
            CylindricalLevyMeasure::Sum { parts } => parts.iter().all(|p| p.is_zero()),
        }
    }

    /// `ν∘a^{-1}`.
    pub fn project(&self, a: &[f64]) -> LevyMeasureR {
        match self {
            CylindricalLevyMeasure::Zero => LevyMeasureR::zero(),
            CylindricalLevyMeasure::AtomicFunctional { coeffs, rate } => {
                let s = pairing(coeffs, a);
                if s == 0.0 || *rate == 0.0 {
                    LevyMeasureR::zero()
                } else {
                    LevyMeasureR::Atomic {
                        atoms: vec![(s, *rate)],
                    }
                }
            }
            CylindricalLevyMeasure::AtomsOnU { atoms } => project_atoms(atoms, a),
            CylindricalLevyMeasure::MeasureOnU { measure } => measure.project(a),
            CylindricalLevyMeasure::Sum { parts } => {
                let mut acc = LevyMeasureR::zero();
                for p in parts {
                    acc = acc.plus(&p.project(a));
                }
                acc
            }
        }
    }

    /// `ν∘(a_1, ..., a_n)^{-1}`.
    pub fn project_n(&self, functionals: &[Vec<f64>]) -> LevyMeasureRn {
        match self {
            CylindricalLevyMeasure::Zero => LevyMeasureRn::Atomic { atoms: Vec::new() },
            CylindricalLevyMeasure::AtomicFunctional { coeffs, rate } => {
                let x: Vec<f64> = functionals.iter().map(|a| pairing(coeffs, a)).collect();
                let atoms = if *rate == 0.0 || x.iter().all(|&c| c == 0.0) {
                    Vec::new()
                } else {
                    vec![(x, *rate)]
                };
                LevyMeasureRn::Atomic { atoms }
            }
            CylindricalLevyMeasure::AtomsOnU { atoms } => MeasureOnU::Atoms {
                atoms: atoms.clone(),
            }
            .project_n(functionals),
            CylindricalLevyMeasure::MeasureOnU { measure } => measure.project_n(functionals),
            CylindricalLevyMeasure::Sum { parts } => LevyMeasureRn::Sum {
                parts: parts.iter().map(|p| p.project_n(functionals)).collect(),
            },
        }
    }

    pub fn scaled(&self, t: f64) -> CylindricalLevyMeasure {
        if t == 0.0 {
            return CylindricalLevyMeasure::Zero;
        }
        match self {
            CylindricalLevyMeasure::Zero => CylindricalLevyMeasure::Zero,
            CylindricalLevyMeasure::AtomicFunctional { coeffs, rate } => {
                CylindricalLevyMeasure::AtomicFunctional {
                    coeffs: coeffs.clone(),
                    rate: rate * t,
                }
            }
            CylindricalLevyMeasure::AtomsOnU { atoms } => CylindricalLevyMeasure::AtomsOnU {
                atoms: atoms.iter().map(|(u, w)| (u.clone(), w * t)).collect(),
            },
            CylindricalLevyMeasure::MeasureOnU { measure } => CylindricalLevyMeasure::MeasureOnU {
                measure: measure.scaled(t),
            },
            CylindricalLevyMeasure::Sum { parts } => CylindricalLevyMeasure::Sum {
                parts: parts.iter().map(|p| p.scaled(t)).collect(),
            },
        }
    }

    /// Formal sum `ν_1 ⊕ ν_2`.
    pub fn plus(&self, other: &CylindricalLevyMeasure) -> CylindricalLevyMeasure {
        let mut parts = Vec::new();
        for m in [self, other] {
            match m {
                CylindricalLevyMeasure::Zero => {}
                CylindricalLevyMeasure::Sum { parts: p } => parts.extend(p.iter().cloned()),
                other => parts.push(other.clone()),
            }
        }
        match parts.len() {
            0 => CylindricalLevyMeasure::Zero,
            1 => parts.pop().unwrap(),
            _ => CylindricalLevyMeasure::Sum { parts },
        }
    }

    /// The measure as a σ-finite measure on `U`, when it is one.
    pub fn as_measure_on_u(&self) -> Option<MeasureOnU> {
        match self {
            CylindricalLevyMeasure::Zero => Some(MeasureOnU::zero()),
            CylindricalLevyMeasure::AtomsOnU { atoms } => Some(MeasureOnU::Atoms {
                atoms: atoms.clone(),
            }),
            CylindricalLevyMeasure::MeasureOnU { measure } => Some(measure.clone()),
            _ => None,
        }
    }
}
