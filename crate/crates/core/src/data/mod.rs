//! Indicator panels: loading, normalization, orientation and clustering.

pub mod io;
pub mod normalize;
pub mod panel;
pub mod ward;

pub use io::{load_panel, save_panel};
pub use normalize::{normalize_indicator, normalize_panel, orient_indicator, Normalized};
pub use panel::IndicatorPanel;
pub use ward::{ward, ward_cluster, within_ss, ClusterAssignment};
