//! Infinitely divisible cylindrical probability measures represented by their
//! characteristics `(p, q, ν)_h`.
pub mod cylindrical;
pub mod definiteness;
pub mod error;
pub mod extension;
pub mod gallery;
pub mod kernels;
pub mod onedim;
pub mod quadrature;

pub use cylindrical::{
    cf_cyl, cf_projection, cf_root, convert_truncation_cyl, convolve, id_conditions_report, kappa,
    project_1d, time_scale, ConditionGrids, CylindricalCharacteristics, CylindricalLevyMeasure,
    DriftFunctional, FunctionalSequence, FunctionalSpace, IdConditionsReport, LevyMeasureRn,
    NormKind, QuadraticForm,
};
pub use definiteness::{
    negative_definite_check, positive_definite_check, schoenberg_check, DefinitenessReport,
    Tolerances,
};
pub use error::{Error, Result};
pub use extension::{
    bl_distance, continuity_report, d_nu, make_id_from_levy, strong_integrability,
    weak_pairing_integrability, FiniteMeasureR, MeasureOnU,
};
pub use kernels::{psi, psi_tilde, Truncation};
pub use onedim::{cf_1d, convert_truncation_1d, sample_1d, IdCharacteristics1D, LevyMeasureR};
