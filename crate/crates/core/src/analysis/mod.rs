//! Element visit/revisit analysis and the statistics used to compare
//! configurations.

mod stats;
mod visits;

pub use stats::{aggregate, mean, paired_t_test, sample_sd, summarize, GuiGroup, PairedTestResult, Summary};
pub use visits::{
    map_fixations_to_elements, visit_revisit, CategoryVisits, ElementSequence, VisitStats, REVISIT_GAP,
};
