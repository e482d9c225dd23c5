//! Validation and application outputs built on ensembles.

pub mod metrics;
pub mod outcome;
pub mod profiles;
pub mod sensitivity;
pub mod series;
pub mod similarity;
pub mod validation;

pub use metrics::{corruption_level, mean_allocation, mean_contribution, performance_mean, r_squared};
pub use outcome::{country_outcome, Outcome};
pub use profiles::{candidates_above, footprints, retrospective, AllocationProfile, Candidate, FootprintEdge, FootprintReport, ProfileMode};
pub use sensitivity::{
    sensitivity_suite, strength_bins, strength_contribution, Preset, SensitivityReport, StrengthBin, StrengthContribution,
    MIN_BIN_COUNT, STRENGTH_BINS,
};
pub use series::{render_series, PlotSeries};
pub use similarity::{top10_jaccard, top_k, top_k_jaccard, weighted_jaccard};
pub use validation::{corruption_performance_table, empirical_corruption_performance, CorruptionPerformance};
