//! Triangle enumeration on power-law random graphs, with the machinery
//! to study its cost: degree-sequence construction and sampling, random
//! simple-graph generation, bucket-based triangle enumeration, analytic
//! runtime bounds, and a Monte Carlo experiment harness.

#![deny(missing_docs)]

mod error;
mod zeta;

pub mod bounds;
pub mod degrees;
pub mod enumerate;
pub mod graphgen;
pub mod harness;

pub use error::{Error, Result};

pub use bounds::{
    limit_constant, minbucket_bound, power_law_predictions, trivial_bound, BoundReport,
    GrowthClass, LimitConstant, PowerLawPrediction,
};
pub use degrees::{
    load_degrees, power_law_sequence, sample_iid_degrees, save_degrees, validate_truncation,
    DegreeSequence, Moment, PowerLawParams, ReferenceDistribution, TruncationReport,
};
pub use enumerate::{
    assign_buckets, assign_buckets_keyed, closed_wedge_check, minbucket_enumerate,
    minbucket_enumerate_keyed, minbucket_enumerate_listing, triangle_count_by_intersection,
    trivial_enumerate, trivial_enumerate_listing, Algorithm, BucketAssignment, TieMode,
    TriangleOutput, WorkReport,
};
pub use graphgen::{
    generate_chung_lu, generate_ecm, load_graph, save_graph, GenerationTrace, GraphModel,
    SimpleGraph,
};
pub use harness::{
    compare_bounds, emit_csv, emit_plot_data, generate_trial_graph, parse_config_overlay,
    run_experiment, trial_seed, write_csv, write_plot_data, CapRule, ComparisonRow, ConfigOverlay,
    DegreeModel, ExperimentConfig, ExperimentResult, NSummary, TrialRecord,
};

/// Compiles and runs every `rust` block in the README and the guide
/// chapters under `book/src`, keeping the prose in lockstep with the
/// published API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/degree-sequences.md")]
    mod degree_sequences {}
    #[doc = include_str!("../../../book/src/random-graphs.md")]
    mod random_graphs {}
    #[doc = include_str!("../../../book/src/triangle-enumeration.md")]
    mod triangle_enumeration {}
    #[doc = include_str!("../../../book/src/runtime-bounds.md")]
    mod runtime_bounds {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
