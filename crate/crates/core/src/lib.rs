//! Scanpath prediction from saliency maps with inhibition of return, the
//! four standard scanpath metrics, and the sweep harness that studies how
//! image size, IOR decay, masking radius and fixation count affect them.

pub mod analysis;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod saliency;
pub mod scanpath_gen;
pub mod types;

pub use error::{Error, Result};
pub use metrics::{EvalConfig, Metric, MetricReport, RecurrenceConfig};
pub use saliency::{GuiImage, SaliencyBackend};
pub use scanpath_gen::{rollout, rollout_with_trace, RolloutTrace};
pub use types::{
    validate_scanpath, DecayKind, ElementBox, ElementCategory, Fixation, GridCell, GuiType, ImageDims,
    RawFixation, RolloutConfig, SaliencyMap, Scanpath,
};
