//! One-dimensional infinitely divisible laws.

mod characteristics;
mod measure;
mod sampling;

pub(crate) use characteristics::truncation_breaks;
pub use characteristics::{cf_1d, convert_truncation_1d, IdCharacteristics1D};
pub use measure::{levy_integral, DensityFamily, Growth, LevyMeasureR};
pub use sampling::{
    empirical_cf, ks_critical_value, ks_statistic, ks_statistic_discrete, sample_1d, KsOracle,
    SHARD_SIZE,
};
