use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cylindrical::report::FunctionalSequence;
use crate::cylindrical::CylindricalCharacteristics;
use crate::error::{Error, Result};
use crate::extension::bl::{bl_distance, FiniteMeasureR, Grid, DEFAULT_CELLS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrendSettings {
    /// Distances must be nonincreasing for `n >= monotone_from`.
    pub monotone_from: usize,
    /// Distances must be below `threshold` at `n = threshold_at` (or the last term).
    pub threshold: f64,
    pub threshold_at: usize,
    pub cells: usize,
}

impl Default for TrendSettings {
    fn default() -> Self {
        TrendSettings {
            monotone_from: 4,
            threshold: 1e-4,
            threshold_at: 64,
            cells: DEFAULT_CELLS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub n: usize,
    pub drift_gap: f64,
    pub quadratic_gap: f64,
    /// BL distance between `q(a_n) δ_0 + (s²∧1) ν∘a_n^{-1}` and its limit.
    pub combined_bl: f64,
    /// BL distance between `(s²∧1) ν∘a_n^{-1}` and its limit.
    pub levy_bl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnTrend {
    pub column: String,
    pub monotone: bool,
    pub value_at_threshold: f64,
    pub below_threshold: bool,
    pub passed: bool,
}

/// Whether `ν` extends to a Radon measure on the ambient space. Only the
/// cylindrical side is certified; the extension itself is never checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extendability {
    Untested,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub rows: Vec<ContinuityRow>,
    pub trends: Vec<ColumnTrend>,
    /// Drift, quadratic and combined-measure distances all trend to zero.
    pub continuity: bool,
    /// Drift, quadratic and Lévy-only distances all trend to zero.
    pub regular_continuity: bool,
    pub radon_extendability: Extendability,
}

impl ContinuityRow {
    pub const COLUMNS: [&'static str; 4] = ["drift_gap", "quadratic_gap", "combined_bl", "levy_bl"];

    fn column(&self, i: usize) -> f64 {
        [
            self.drift_gap,
            self.quadratic_gap,
            self.combined_bl,
            self.levy_bl,
        ][i]
    }
}

fn trend(rows: &[ContinuityRow], col: usize, settings: &TrendSettings) -> ColumnTrend {
    let values: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.column(col))).collect();
    let monotone = values
        .windows(2)
        .filter(|w| w[0].0 >= settings.monotone_from)
        .all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9) + 1e-13);
    let value_at_threshold = values
        .iter()
        .find(|v| v.0 == settings.threshold_at)
        .or(values.last())
        .map_or(0.0, |v| v.1);
    let below_threshold = value_at_threshold < settings.threshold;
    ColumnTrend {
        column: ContinuityRow::COLUMNS[col].to_string(),
        monotone,
        value_at_threshold,
        below_threshold,
        passed: monotone && below_threshold,
    }
}

/// Tabulates the distances of the continuity and regular-continuity criteria
/// along `a_n → a`; row `n` corresponds to `sequence.terms[n - 1]`.
pub fn continuity_report(
    chr: &CylindricalCharacteristics,
    sequence: &FunctionalSequence,
    settings: &TrendSettings,
) -> Result<ContinuityReport> {
    if sequence.terms.is_empty() {
        return Err(Error::InvalidParameter("sequence has no terms".into()));
    }
    chr.space.check(&sequence.limit)?;
    for a in &sequence.terms {
        chr.space.check(a)?;
    }
    let space = chr.space;
    let limit_image = chr.nu.project(&sequence.limit);
    let images: Vec<_> = sequence.terms.iter().map(|a| chr.nu.project(a)).collect();
    let mut all: Vec<_> = images.iter().collect();
    all.push(&limit_image);
    let grid = Grid::joint(&all, settings.cells);

    let p_limit = chr.p.eval(&space, &sequence.limit)?;
    let q_limit = chr.q.eval(&sequence.limit);
    let levy_limit = FiniteMeasureR::weighted_levy(0.0, &limit_image, &grid)?;
    let combined_limit = FiniteMeasureR::weighted_levy(q_limit, &limit_image, &grid)?;

    let rows = sequence
        .terms
        .par_iter()
        .zip(images.par_iter())
        .enumerate()
        .map(|(i, (a, image))| {
            let q = chr.q.eval(a);
            let levy = FiniteMeasureR::weighted_levy(0.0, image, &grid)?;
            let combined = FiniteMeasureR::weighted_levy(q, image, &grid)?;
            Ok(ContinuityRow {
                n: i + 1,
                drift_gap: (chr.p.eval(&space, a)? - p_limit).abs(),
                quadratic_gap: (q - q_limit).abs(),
                combined_bl: bl_distance(&combined, &combined_limit),
                levy_bl: bl_distance(&levy, &levy_limit),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let trends: Vec<ColumnTrend> = (0..4).map(|c| trend(&rows, c, settings)).collect();
    let continuity = trends[0].passed && trends[1].passed && trends[2].passed;
    let regular_continuity = trends[0].passed && trends[1].passed && trends[3].passed;
    Ok(ContinuityReport {
        rows,
        trends,
        continuity,
        regular_continuity,
        radon_extendability: Extendability::Untested,
    })
}
