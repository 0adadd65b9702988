use serde::{Deserialize, Serialize};

use crate::cylindrical::characteristics::CylindricalCharacteristics;
use crate::cylindrical::space::scale;
use crate::definiteness::{
    negative_definite_check, schoenberg_check, DefinitenessReport, Tolerances,
};
use crate::error::{Error, Result};

/// A sequence `a_n → a` inside a finite-dimensional subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSequence {
    pub terms: Vec<Vec<f64>>,
    pub limit: Vec<f64>,
}

impl FunctionalSequence {
    /// `a_n = a + step(n) v` for `n = 1..=len`.
    pub fn along<F: Fn(usize) -> f64>(limit: &[f64], v: &[f64], len: usize, step: F) -> Self {
        FunctionalSequence {
            terms: (1..=len)
                .map(|n| limit.iter().zip(v).map(|(a, d)| a + step(n) * d).collect())
                .collect(),
            limit: limit.to_vec(),
        }
    }
}

fn default_divisors() -> Vec<u32> {
    vec![1, 2, 3, 4]
}

fn default_continuity_tol() -> f64 {
    1e-6
}

/// Finite grids on which the infinite-divisibility conditions are assessed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionGrids {
    pub point_sets: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub sequences: Vec<FunctionalSequence>,
    #[serde(default = "default_divisors")]
    pub divisors: Vec<u32>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Largest admissible `|p(a_N) - p(a)|` at the last term of a sequence.
    #[serde(default = "default_continuity_tol")]
    pub continuity_tol: f64,
}

impl ConditionGrids {
    pub fn new(point_sets: Vec<Vec<Vec<f64>>>) -> Self {
        ConditionGrids {
            point_sets,
            sequences: Vec::new(),
            divisors: default_divisors(),
            tolerances: Tolerances::default(),
            continuity_tol: default_continuity_tol(),
        }
    }

    pub fn with_sequences(mut self, sequences: Vec<FunctionalSequence>) -> Self {
        self.sequences = sequences;
        self
    }

    fn functionals(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.point_sets.iter().flatten().chain(
            self.sequences
                .iter()
                .flat_map(|s| s.terms.iter().chain(std::iter::once(&s.limit))),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceCheck {
    pub final_gap: f64,
    pub max_gap: f64,
    pub passed: bool,
}

/// Condition (1): `p(0) = 0` and sequential continuity of `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftCondition {
    pub p_at_origin: f64,
    pub sequences: Vec<SequenceCheck>,
    pub passed: bool,
    pub margin: f64,
}

/// Condition (2): `q` is a quadratic form of a symmetric positive operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticCondition {
    pub symmetry_defect: f64,
    pub min_eigenvalue: f64,
    pub homogeneity_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub margin: f64,
}

/// Condition (3): every `ν∘a^{-1}` is a Lévy measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyCondition {
    pub functionals_checked: usize,
    pub max_integral: f64,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Condition (4): `κ` is negative-definite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaCondition {
    pub negative_definite: Vec<DefinitenessReport>,
    pub schoenberg: Vec<Vec<DefinitenessReport>>,
    pub failures: Vec<String>,
    pub passed: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdConditionsReport {
    pub drift: DriftCondition,
    pub quadratic: QuadraticCondition,
    pub levy: LevyCondition,
    pub kappa: KappaCondition,
}

/// Summary line of one condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRow {
    pub condition: u8,
    pub name: String,
    pub passed: bool,
    pub margin: Option<f64>,
}

impl IdConditionsReport {
    pub fn all_passed(&self) -> bool {
        self.drift.passed && self.quadratic.passed && self.levy.passed && self.kappa.passed
    }

    pub fn rows(&self) -> Vec<ConditionRow> {
        vec![
            ConditionRow {
                condition: 1,
                name: "drift".into(),
                passed: self.drift.passed,
                margin: Some(self.drift.margin),
            },
            ConditionRow {
                condition: 2,
                name: "quadratic_form".into(),
                passed: self.quadratic.passed,
                margin: Some(self.quadratic.margin),
            },
            ConditionRow {
                condition: 3,
                name: "levy_measure".into(),
                passed: self.levy.passed,
                margin: None,
            },
            ConditionRow {
                condition: 4,
                name: "kappa_negative_definite".into(),
                passed: self.kappa.passed,
                margin: Some(self.kappa.margin),
            },
        ]
    }
}

fn drift_condition(
    chr: &CylindricalCharacteristics,
    grids: &ConditionGrids,
) -> Result<DriftCondition> {
    let p = |a: &[f64]| chr.p.eval(&chr.space, a);
    let p_at_origin = p(&chr.space.zero())?;
    let origin_tol = 1e-12;
    let mut passed = p_at_origin.abs() <= origin_tol;
    let mut margin = origin_tol - p_at_origin.abs();
    let mut sequences = Vec::with_capacity(grids.sequences.len());
    for seq in &grids.sequences {
        let limit = p(&seq.limit)?;
        let gaps = seq
            .terms
            .iter()
            .map(|a| Ok((p(a)? - limit).abs()))
            .collect::<Result<Vec<f64>>>()?;
        let final_gap = gaps.last().copied().unwrap_or(0.0);
        let ok = final_gap <= grids.continuity_tol;
        passed &= ok;
        margin = margin.min(grids.continuity_tol - final_gap);
        sequences.push(SequenceCheck {
            final_gap,
            max_gap: gaps.iter().copied().fold(0.0, f64::max),
            passed: ok,
        });
    }
    Ok(DriftCondition {
        p_at_origin,
        sequences,
        passed,
        margin,
    })
}

fn quadratic_condition(
    chr: &CylindricalCharacteristics,
    grids: &ConditionGrids,
) -> QuadraticCondition {
    let q = &chr.q;
    let tolerance = 1e-12 * q.trace_scale();
    let symmetry_defect = q.symmetry_defect();
    let min_eigenvalue = q.min_eigenvalue();
    let mut homogeneity_defect: f64 = 0.0;
    for a in grids.functionals() {
        let base = q.eval(a);
        for t in [-2.0, 0.5, 3.0] {
            let scaled = q.eval(&scale(a, t));
            homogeneity_defect = homogeneity_defect
                .max((scaled - t * t * base).abs() / (1.0 + (t * t * base).abs()));
        }
    }
    let margin = (tolerance - symmetry_defect)
        .min(min_eigenvalue + tolerance)
        .min(tolerance - homogeneity_defect);
    QuadraticCondition {
        symmetry_defect,
        min_eigenvalue,
        homogeneity_defect,
        tolerance,
        passed: margin >= 0.0,
        margin,
    }
}

fn levy_condition(chr: &CylindricalCharacteristics, grids: &ConditionGrids) -> LevyCondition {
    let mut failures = Vec::new();
    let mut max_integral: f64 = 0.0;
    let mut count = 0;
    for a in grids.functionals() {
        count += 1;
        let image = chr.nu.project(a);
        match image.validate().and_then(|_| image.integrability()) {
            Ok(v) if v.is_finite() => max_integral = max_integral.max(v),
            Ok(v) => failures.push(format!("{a:?}: integral {v}")),
            Err(e) => failures.push(format!("{a:?}: {e}")),
        }
    }
    LevyCondition {
        functionals_checked: count,
        max_integral,
        passed: failures.is_empty(),
        failures,
    }
}

fn kappa_condition(chr: &CylindricalCharacteristics, grids: &ConditionGrids) -> KappaCondition {
    let kappa = |a: &[f64]| chr.kappa(a);
    let mut negative_definite = Vec::new();
    let mut schoenberg = Vec::new();
    let mut failures = Vec::new();
    let mut margin = f64::INFINITY;
    for (i, points) in grids.point_sets.iter().enumerate() {
        if points.len() >= 2 {
            match negative_definite_check(kappa, points, grids.tolerances) {
                Ok(r) => {
                    margin = margin.min(r.margin());
                    if !r.passed() {
                        failures.push(format!(
                            "point set {i}: negative-definiteness {:?}",
                            r.verdict
                        ));
                    }
                    negative_definite.push(r);
                }
                Err(e) => failures.push(format!("point set {i}: {e}")),
            }
        }
        match schoenberg_check(kappa, points, &grids.divisors, grids.tolerances) {
            Ok(reports) => {
                for r in &reports {
                    margin = margin.min(r.margin());
                    if !r.passed() {
                        failures.push(format!(
                            "point set {i}: exp(-κ/{}) {:?}",
                            r.divisor.unwrap_or(1),
                            r.verdict
                        ));
                    }
                }
                schoenberg.push(reports);
            }
            Err(e) => failures.push(format!("point set {i}: {e}")),
        }
    }
    if !margin.is_finite() {
        margin = 0.0;
    }
    KappaCondition {
        negative_definite,
        schoenberg,
        passed: failures.is_empty(),
        failures,
        margin,
    }
}

/// Numerical assessment of the four conditions characterising cylindrical
/// characteristics of an infinitely divisible cylindrical measure.
pub fn id_conditions_report(
    chr: &CylindricalCharacteristics,
    grids: &ConditionGrids,
) -> Result<IdConditionsReport> {
    if grids.point_sets.iter().all(Vec::is_empty) && grids.sequences.is_empty() {
        return Err(Error::InvalidParameter("condition grids are empty".into()));
    }
    for a in grids.functionals() {
        chr.space.check(a)?;
    }
    Ok(IdConditionsReport {
        drift: drift_condition(chr, grids)?,
        quadratic: quadratic_condition(chr, grids),
        levy: levy_condition(chr, grids),
        kappa: kappa_condition(chr, grids),
    })
}
