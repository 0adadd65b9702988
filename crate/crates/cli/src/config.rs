use std::path::Path;

use idcyl_core::extension::TrendSettings;
use idcyl_core::gallery::{self, random_point_sets, witness_grid};
use idcyl_core::{
    CylindricalCharacteristics, DriftFunctional, FunctionalSpace, MeasureOnU, Truncation,
};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GallerySource {
    pub name: String,
    #[serde(default = "default_dim")]
    pub dim: usize,
}

fn default_dim() -> usize {
    gallery::DEFAULT_DIM
}

/// Top-level run configuration. Exactly one of `characteristics` / `gallery`
/// supplies the triplet; each command reads its own section.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub characteristics: Option<CylindricalCharacteristics>,
    pub gallery: Option<GallerySource>,
    /// Report file name, relative to `--out`.
    pub output: Option<String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    #[serde(default)]
    pub cf: CfParams,
    #[serde(default)]
    pub check: CheckParams,
    #[serde(default)]
    pub definiteness: DefinitenessParams,
    #[serde(default)]
    pub project: ProjectParams,
    #[serde(default)]
    pub sample: SampleParams,
    #[serde(default)]
    pub dnu: DnuParams,
    #[serde(default)]
    pub continuity: ContinuityParams,
}

/// A single list of functionals: explicit, or `{"random": count}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Points {
    Explicit(Vec<Vec<f64>>),
    Random { random: usize },
}

impl Default for Points {
    fn default() -> Self {
        Points::Random { random: 8 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedGrid {
    /// `{0, 0.4, 0.8} · 2c/‖c‖²` for a drift `λ h(<c, a>)`.
    Witness,
}

/// Several point sets: explicit, `{"random": {"sets": _, "size": _}}` or `"witness"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PointSets {
    Explicit(Vec<Vec<Vec<f64>>>),
    Random { random: RandomSets },
    Named(NamedGrid),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSets {
    pub sets: usize,
    pub size: usize,
}

impl Default for PointSets {
    fn default() -> Self {
        PointSets::Random {
            random: RandomSets { sets: 3, size: 8 },
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    /// `a + v / n`
    #[default]
    Inverse,
    /// `a + 2^{-n} v`
    Dyadic,
}

impl Step {
    pub fn at(self, n: usize) -> f64 {
        match self {
            Step::Inverse => 1.0 / n as f64,
            Step::Dyadic => 0.5f64.powi(n as i32),
        }
    }
}

/// `a_n = limit + step(n) · direction`, `n = 1..=len`; omitted vectors are drawn from the seed.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub limit: Option<Vec<f64>>,
    pub direction: Option<Vec<f64>>,
    pub len: Option<usize>,
    #[serde(default)]
    pub step: Step,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionSpec {
    pub functionals: Vec<Vec<f64>>,
    pub coefficients: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfParams {
    pub points: Option<Points>,
    #[serde(default)]
    pub projections: Vec<ProjectionSpec>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckParams {
    #[serde(default)]
    pub point_sets: PointSets,
    pub sequences: Option<Vec<SequenceSpec>>,
    pub divisors: Option<Vec<u32>>,
    pub continuity_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// `φ(a)`
    Cf,
    /// `φ(a)^{1/k}`
    Root,
    /// `κ(a)`
    #[default]
    Kappa,
    /// `-i p(a)`, the exponent of the drift alone.
    DriftKappa,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Positive,
    Negative,
    #[default]
    Schoenberg,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefinitenessParams {
    #[serde(default)]
    pub kernel: Kernel,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub point_sets: PointSets,
    pub divisors: Option<Vec<u32>>,
    /// Root order for `kernel = "root"`.
    pub k: Option<u32>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectParams {
    #[serde(default)]
    pub points: Points,
    pub t_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleParams {
    pub functional: Option<Vec<f64>>,
    pub n: Option<usize>,
    pub jump_cutoff: Option<f64>,
    pub t_grid: Option<Vec<f64>>,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DnuParams {
    pub measure: Option<MeasureOnU>,
    pub space: Option<FunctionalSpace>,
    pub truncation: Option<Truncation>,
    #[serde(default)]
    pub points: Points,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    #[default]
    Continuity,
    RegularContinuity,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuityParams {
    #[serde(default)]
    pub sequence: SequenceSpec,
    pub trend: Option<TrendSettings>,
    #[serde(default)]
    pub require: Requirement,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.display().to_string(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn characteristics(&self) -> CliResult<CylindricalCharacteristics> {
        match (&self.characteristics, &self.gallery) {
            (Some(chr), None) => {
                chr.validate()?;
                Ok(chr.clone())
            }
            (None, Some(g)) => Ok(gallery::build(&g.name, g.dim)?.characteristics),
            (Some(_), Some(_)) => Err(CliError::Config(
                "give either `characteristics` or `gallery`, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "missing `characteristics` or `gallery`".into(),
            )),
        }
    }

    pub fn has_source(&self) -> bool {
        self.characteristics.is_some() || self.gallery.is_some()
    }
}

pub fn check_dims(points: &[Vec<f64>], dim: usize, what: &str) -> CliResult<()> {
    match points.iter().find(|p| p.len() != dim) {
        Some(p) => Err(CliError::Config(format!(
            "{what}: functional of length {} in a space of dimension {dim}",
            p.len()
        ))),
        None => Ok(()),
    }
}

impl Points {
    pub fn resolve(&self, dim: usize, seed: u64, what: &str) -> CliResult<Vec<Vec<f64>>> {
        let points = match self {
            Points::Explicit(p) => p.clone(),
            Points::Random { random } => random_point_sets(dim, 1, *random, seed).remove(0),
        };
        if points.is_empty() {
            return Err(CliError::Config(format!("{what}: no functionals")));
        }
        check_dims(&points, dim, what)?;
        Ok(points)
    }
}

impl PointSets {
    pub fn resolve(
        &self,
        chr: &CylindricalCharacteristics,
        seed: u64,
        what: &str,
    ) -> CliResult<Vec<Vec<Vec<f64>>>> {
        let dim = chr.space.dim;
        let sets = match self {
            PointSets::Explicit(s) => s.clone(),
            PointSets::Random { random } => {
                if random.sets == 0 || random.size == 0 {
                    return Err(CliError::Config(format!("{what}: empty random point sets")));
                }
                random_point_sets(dim, random.sets, random.size, seed)
            }
            PointSets::Named(NamedGrid::Witness) => match &chr.p {
                DriftFunctional::PoissonDrift { coeffs, .. } => vec![witness_grid(coeffs)],
                _ => {
                    return Err(CliError::Config(format!(
                        "{what}: the witness grid needs a poisson_drift drift"
                    )))
                }
            },
        };
        if sets.is_empty() || sets.iter().any(|s| s.is_empty()) {
            return Err(CliError::Config(format!("{what}: empty point set")));
        }
        for s in &sets {
            check_dims(s, dim, what)?;
        }
        Ok(sets)
    }
}

impl SequenceSpec {
    pub fn resolve(
        &self,
        dim: usize,
        seed: u64,
        default_len: usize,
    ) -> CliResult<idcyl_core::FunctionalSequence> {
        let drawn = random_point_sets(dim, 1, 3, seed).remove(0);
        let limit = self.limit.clone().unwrap_or_else(|| drawn[1].clone());
        let direction = match &self.direction {
            Some(v) => v.clone(),
            None => {
                let norm = drawn[2].iter().map(|x| x * x).sum::<f64>().sqrt();
                drawn[2].iter().map(|x| x / norm).collect()
            }
        };
        check_dims(&[limit.clone(), direction.clone()], dim, "sequence")?;
        let len = self.len.unwrap_or(default_len);
        if len == 0 {
            return Err(CliError::Config("sequence: len must be >= 1".into()));
        }
        let step = self.step;
        Ok(idcyl_core::FunctionalSequence::along(
            &limit,
            &direction,
            len,
            |n| step.at(n),
        ))
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
