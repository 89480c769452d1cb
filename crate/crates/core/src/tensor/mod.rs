//! Metrics, vector fields, one-forms and connections on a chart, plus the
//! pointwise tensor operations built on their jets.

mod fields;
mod linalg;
mod ops;

pub use fields::{
    Chart, ChristoffelJets, Connection, ConnectionKind, Definiteness, MetricField, OneFormField,
    VectorField,
};
pub use linalg::{
    inverse_metric, inverse_metric_with_bound, symmetric_eigenvalues, Symmetry, Tensor02,
    DEFAULT_CONDITION_BOUND,
};
pub use ops::*;
