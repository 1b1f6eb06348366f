//! Exhaustive enumeration of equitable 2-partitions and the classification
//! audits built on it.

mod engine;
mod theorems;

pub use engine::{
    enumerate, SearchOutcome, SearchSpec, SearchStats, SearchStatus, DEFAULT_NODE_LIMIT,
    DEFAULT_TIME_LIMIT,
};
pub use theorems::{
    audit_class, classify_n_eq_2w, prop2_check, prop3_check, ClassAudit, ClassificationReport,
    ClassifyConfig, ClassifyMode, MatrixReport,
};
