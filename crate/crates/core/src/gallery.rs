//! Ready-made characteristics with the properties they are known to have.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cylindrical::report::{id_conditions_report, ConditionGrids, FunctionalSequence};
use crate::cylindrical::space::scale;
use crate::cylindrical::{
    CylindricalCharacteristics, CylindricalLevyMeasure, DriftFunctional, FunctionalSpace, NormKind,
    QuadraticForm,
};
use crate::definiteness::{schoenberg_check, Tolerances};
use crate::error::{Error, Result};
use crate::extension::{
    continuity_report, make_id_from_levy, ContinuityReport, MeasureOnU, TrendSettings,
};
use crate::kernels::Truncation;
use crate::onedim::{DensityFamily, Growth, LevyMeasureR};
use crate::quadrature::Quadrature;

pub const DEFAULT_DIM: usize = 4;
pub const DIMENSION_FAMILY: [usize; 4] = [1, 2, 4, 8];
const GRID_SEED: u64 = 0x5eed;

/// A property an entry is expected to have or to lack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// All four infinite-divisibility conditions pass on the default grids.
    IdConditions,
    /// `a ↦ exp(-κ_drift(a))` of the drift-only exponent is positive-definite
    /// on the three-point witness grid.
    DriftOnlyPositiveDefinite,
    /// `‖ℓ‖` grows strictly across the dimension family.
    NormGrowthIncreasing,
    /// The Lévy-only continuity distances trend to zero along the default sequence.
    RegularContinuity,
    /// `∫ <u,a>² ν(du) < ∞` on the default functionals.
    WeakSecondMoments,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedProperty {
    pub property: Property,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub property: Property,
    pub expected: bool,
    pub observed: bool,
}

impl PropertyOutcome {
    pub fn matches(&self) -> bool {
        self.expected == self.observed
    }
}

/// `‖ℓ‖` at each dimension of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormGrowthRow {
    pub dim: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryEntry {
    pub name: String,
    pub characteristics: CylindricalCharacteristics,
    pub expected: Vec<ExpectedProperty>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub norm_growth: Vec<NormGrowthRow>,
}

/// Point sets with entries uniform in `[-1.5, 1.5]`, each containing the origin.
pub fn random_point_sets(dim: usize, sets: usize, size: usize, seed: u64) -> Vec<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..sets)
        .map(|_| {
            let mut set = vec![vec![0.0; dim]];
            set.extend((1..size).map(|_| (0..dim).map(|_| rng.gen_range(-1.5..1.5)).collect()));
            set
        })
        .collect()
}

/// Unit vector with entries drawn from `seed`.
pub fn random_direction(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Grids used to verify expected properties.
pub fn default_grids(dim: usize) -> ConditionGrids {
    let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED);
    let limit: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let v = random_direction(dim, &mut rng);
    let seq = FunctionalSequence::along(&limit, &v, 30, |n| 2f64.powi(-(n as i32)));
    ConditionGrids::new(random_point_sets(dim, 3, 8, GRID_SEED)).with_sequences(vec![seq])
}

/// `{0, 0.4, 0.8} · 2c/‖c‖²`, on which `ℓ = <c, ·>` takes the values `0, 0.8, 1.6`.
pub fn witness_grid(coeffs: &[f64]) -> Vec<Vec<f64>> {
    let n2: f64 = coeffs.iter().map(|c| c * c).sum();
    let dir: Vec<f64> = coeffs.iter().map(|c| 2.0 * c / n2).collect();
    [0.0, 0.4, 0.8].iter().map(|&s| scale(&dir, s)).collect()
}

/// `c_j = j` for `j = 1..=dim`.
pub fn growing_coefficients(dim: usize) -> Vec<f64> {
    (1..=dim).map(|j| j as f64).collect()
}

fn coefficients_of(chr: &CylindricalCharacteristics) -> Option<Vec<f64>> {
    match &chr.nu {
        CylindricalLevyMeasure::AtomicFunctional { coeffs, .. } => Some(coeffs.clone()),
        _ => None,
    }
}

fn default_continuity(chr: &CylindricalCharacteristics) -> Result<ContinuityReport> {
    let grids = default_grids(chr.space.dim);
    let settings = TrendSettings {
        threshold_at: 24,
        threshold: 1e-5,
        cells: 4000,
        ..TrendSettings::default()
    };
    let seq = &grids.sequences[0];
    let seq = FunctionalSequence {
        terms: seq.terms[..24].to_vec(),
        limit: seq.limit.clone(),
    };
    continuity_report(chr, &seq, &settings)
}

impl GalleryEntry {
    fn observe(&self, property: Property) -> Result<bool> {
        let chr = &self.characteristics;
        match property {
            Property::IdConditions => {
                Ok(id_conditions_report(chr, &default_grids(chr.space.dim))?.all_passed())
            }
            Property::DriftOnlyPositiveDefinite => {
                let coeffs = coefficients_of(chr).ok_or_else(|| {
                    Error::InvalidParameter("entry has no defining functional".into())
                })?;
                let kappa = |a: &[f64]| -> Result<num_complex::Complex64> {
                    Ok(num_complex::Complex64::new(
                        0.0,
                        -chr.p.eval(&chr.space, a)?,
                    ))
                };
                let reports =
                    schoenberg_check(kappa, &witness_grid(&coeffs), &[1], Tolerances::default())?;
                Ok(reports.iter().all(|r| r.passed()))
            }
            Property::NormGrowthIncreasing => Ok(!self.norm_growth.is_empty()
                && self.norm_growth.windows(2).all(|w| w[1].norm > w[0].norm)),
            Property::RegularContinuity => Ok(default_continuity(chr)?.regular_continuity),
            Property::WeakSecondMoments => {
                let measure = chr
                    .nu
                    .as_measure_on_u()
                    .ok_or_else(|| Error::InvalidParameter("entry has no measure on U".into()))?;
                weak_second_moments(&measure, &default_grids(chr.space.dim))
            }
        }
    }

    /// Observed value of every expected property.
    pub fn verify(&self) -> Result<Vec<PropertyOutcome>> {
        self.expected
            .iter()
            .map(|e| {
                Ok(PropertyOutcome {
                    property: e.property,
                    expected: e.holds,
                    observed: self.observe(e.property)?,
                })
            })
            .collect()
    }

    fn checked(self) -> Result<Self> {
        if let Some(bad) = self.verify()?.into_iter().find(|o| !o.matches()) {
            return Err(Error::Hypothesis(format!(
                "gallery entry {}: property {:?} expected {} but observed {}",
                self.name, bad.property, bad.expected, bad.observed
            )));
        }
        Ok(self)
    }
}

fn weak_second_moments(measure: &MeasureOnU, grids: &ConditionGrids) -> Result<bool> {
    let quad = Quadrature::default();
    for a in grids.point_sets.iter().flatten() {
        let (v, _) =
            measure
                .project(a)
                .integrate_real(&|s| s * s, Growth::Quadratic(1.0), &[1.0], &quad)?;
        if !v.is_finite() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn expect(list: &[(Property, bool)]) -> Vec<ExpectedProperty> {
    list.iter()
        .map(|&(property, holds)| ExpectedProperty { property, holds })
        .collect()
}

/// `(0, Q, 0)`.
pub fn gaussian_cyl(q: QuadraticForm, space: FunctionalSpace) -> Result<GalleryEntry> {
    if !q.is_covariance() {
        return Err(Error::InvalidParameter(
            "Q must be symmetric positive-semidefinite".into(),
        ));
    }
    GalleryEntry {
        name: "gaussian".into(),
        characteristics: CylindricalCharacteristics::new(
            space,
            Truncation::Indicator,
            DriftFunctional::Zero,
            q,
            CylindricalLevyMeasure::Zero,
        )?,
        expected: expect(&[(Property::IdConditions, true)]),
        norm_growth: Vec::new(),
    }
    .checked()
}

/// `(λ h(ℓ(·)), 0, λ δ_ℓ)` with `ℓ(a) = Σ_j j a_j`.
pub fn poisson_noncontinuous(dim: usize, lambda: f64, h: Truncation) -> Result<GalleryEntry> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda} must be > 0"
        )));
    }
    let coeffs = growing_coefficients(dim);
    let space = FunctionalSpace::new(dim, NormKind::L2)?;
    let norm_growth = DIMENSION_FAMILY
        .iter()
        .map(|&d| NormGrowthRow {
            dim: d,
            norm: NormKind::L2.apply(&growing_coefficients(d)),
        })
        .collect();
    let mut expected = vec![
        (Property::DriftOnlyPositiveDefinite, false),
        (Property::NormGrowthIncreasing, true),
    ];
    if h.is_continuous() {
        expected.insert(0, (Property::IdConditions, true));
    }
    GalleryEntry {
        name: "poisson_noncontinuous".into(),
        characteristics: CylindricalCharacteristics::new(
            space,
            h,
            DriftFunctional::PoissonDrift {
                coeffs: coeffs.clone(),
                lambda,
                truncation: h,
            },
            QuadraticForm::zero(dim),
            CylindricalLevyMeasure::AtomicFunctional {
                coeffs,
                rate: lambda,
            },
        )?,
        expected: expect(&expected),
        norm_growth,
    }
    .checked()
}

/// `(∫ (h(<u,·>) - <u,·>) dν, 0, ν)` for `ν` with weak second moments.
pub fn second_moment_drift(
    nu: MeasureOnU,
    h: Truncation,
    space: FunctionalSpace,
) -> Result<GalleryEntry> {
    nu.validate(&space)?;
    if !weak_second_moments(&nu, &default_grids(space.dim))? {
        return Err(Error::Hypothesis("ν lacks weak second moments".into()));
    }
    GalleryEntry {
        name: "second_moment_drift".into(),
        characteristics: CylindricalCharacteristics::new(
            space,
            h,
            DriftFunctional::SecondMoment {
                measure: nu.clone(),
                truncation: h,
            },
            QuadraticForm::zero(space.dim),
            CylindricalLevyMeasure::MeasureOnU { measure: nu },
        )?,
        expected: expect(&[
            (Property::WeakSecondMoments, true),
            (Property::IdConditions, true),
        ]),
        norm_growth: Vec::new(),
    }
    .checked()
}

/// `(d_ν, 0, ν)_h`.
pub fn dnu_entry(nu: MeasureOnU, h: Truncation, space: FunctionalSpace) -> Result<GalleryEntry> {
    GalleryEntry {
        name: "dnu".into(),
        characteristics: make_id_from_levy(&nu, h, space)?,
        expected: expect(&[
            (Property::IdConditions, true),
            (Property::RegularContinuity, true),
        ]),
        norm_growth: Vec::new(),
    }
    .checked()
}

fn default_q(dim: usize) -> QuadraticForm {
    QuadraticForm::new(
        (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            1.0 + 0.25 * i as f64
                        } else {
                            0.5f64.powi((i as i32 - j as i32).abs()) * 0.4
                        }
                    })
                    .collect()
            })
            .collect(),
    )
    .expect("square")
}

fn default_atoms(dim: usize) -> MeasureOnU {
    let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED + 1);
    let atoms = [0.3, 0.8, 1.5, 2.5, 0.05]
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let u: Vec<f64> = random_direction(dim, &mut rng)
                .iter()
                .map(|x| x * r)
                .collect();
            (u, 0.5 + k as f64 * 0.3)
        })
        .collect();
    MeasureOnU::atoms(atoms)
}

fn default_rays(dim: usize) -> MeasureOnU {
    let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED + 2);
    let radial = LevyMeasureR::Density {
        density: DensityFamily::TemperedStable {
            c_pos: 1.0,
            c_neg: 0.6,
            alpha: 0.8,
            rate_pos: 2.0,
            rate_neg: 3.0,
        },
        support: (0.0, None),
        weight: 1.0,
        dilation: 1.0,
    };
    let rays = (0..3)
        .map(|k| (random_direction(dim, &mut rng), 0.4 + 0.3 * k as f64))
        .collect();
    MeasureOnU::rays(rays, radial)
}

/// Names accepted by [`build`].
pub const NAMES: [&str; 7] = [
    "gaussian",
    "gaussian_rank_one",
    "poisson_noncontinuous",
    "second_moment_drift",
    "second_moment_rays",
    "dnu_atoms",
    "dnu_rays",
];

/// Builds a named entry at dimension `dim`.
pub fn build(name: &str, dim: usize) -> Result<GalleryEntry> {
    let space = FunctionalSpace::new(dim, NormKind::L2)?;
    let mut entry = match name {
        "gaussian" => gaussian_cyl(default_q(dim), space)?,
        "gaussian_rank_one" => {
            let v: Vec<f64> = (0..dim).map(|i| 1.0 - 0.5 * i as f64).collect();
            gaussian_cyl(QuadraticForm::rank_one(&v), space)?
        }
        "poisson_noncontinuous" => poisson_noncontinuous(dim, 1.5, Truncation::Ramp)?,
        "second_moment_drift" => second_moment_drift(default_atoms(dim), Truncation::Ramp, space)?,
        "second_moment_rays" => {
            second_moment_drift(default_rays(dim), Truncation::Indicator, space)?
        }
        "dnu_atoms" => dnu_entry(default_atoms(dim), Truncation::Ramp, space)?,
        "dnu_rays" => dnu_entry(default_rays(dim), Truncation::Indicator, space)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown gallery entry {other:?}; expected one of {NAMES:?}"
            )))
        }
    };
    entry.name = name.to_string();
    Ok(entry)
}

/// All entries at the default dimension.
pub fn list() -> Result<Vec<GalleryEntry>> {
    NAMES.iter().map(|n| build(n, DEFAULT_DIM)).collect()
}
