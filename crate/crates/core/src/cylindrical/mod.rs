//! Cylindrical characteristics `(p, q, ν)_h` on a finite-dimensional proxy of
//! a Banach space and its dual.

pub mod characteristics;
pub mod drift;
pub mod levy;
pub mod quadratic;
pub mod report;
pub mod roots;
pub mod space;

pub use characteristics::{
    cf_cyl, cf_projection, convert_truncation_cyl, convolve, kappa, project_1d, time_scale,
    CylindricalCharacteristics,
};
pub use drift::DriftFunctional;
pub use levy::{CylindricalLevyMeasure, LevyMeasureRn};
pub use quadratic::QuadraticForm;
pub use report::{
    id_conditions_report, ConditionGrids, ConditionRow, FunctionalSequence, IdConditionsReport,
};
pub use roots::{cf_root, continuous_log, root_gram_check};
pub use space::{combination, pairing, FunctionalSpace, NormKind};
