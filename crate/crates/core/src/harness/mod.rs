//! End-to-end pipelines: read an instance, run the stages, collect checks.

mod config;
mod pipeline;
mod report;

pub use config::{FieldKind, InstanceConfig, RunOptions};
pub use pipeline::{run, run_batch, Command, SpectralStage};
pub use report::{
    coeff_list, BaeRecord, BaeSolutionRecord, CharacterRecord, Check, CoeffList, RatFunRecord, RunReport,
    SpaceRecord, Status, WronskiRecord,
};
