//! σ-finite measures on the ambient space as candidate Lévy measures, the
//! canonical drift `d_ν`, and continuity diagnostics.

pub mod bl;
pub mod continuity;
pub mod dnu;
pub mod measure;

pub use bl::{bl_distance, FiniteMeasureR, Grid};
pub use continuity::{
    continuity_report, ColumnTrend, ContinuityReport, ContinuityRow, Extendability, TrendSettings,
};
pub use dnu::{
    d_nu, d_nu_decomposition, make_id_from_levy, strong_integrability, weak_pairing_integrability,
    DnuDecomposition, IntegralReport, Region, RegionIntegral,
};
pub use measure::{DensityOnU, MeasureOnU};
