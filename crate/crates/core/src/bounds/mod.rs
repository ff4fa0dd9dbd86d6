//! Closed forms, transfer-matrix lower bounds, constructive upper bounds and
//! certified values of `gamma(G_{n,m})`.

mod closed;
mod construct;
mod resolve;
mod transfer;

pub use closed::{
    chang_formula, gamma_closed_form, gamma_closed_form_with_source, ClosedFormSource,
};
pub use construct::{construct_dominating_set, greedy_dominating_set};
pub use resolve::{
    resolve_gamma, GammaCertificate, Method, ResolveOptions, Strategy, DEFAULT_SANDWICH_K,
    MAX_WITNESS_CELLS,
};
pub use transfer::{
    base_matrices, run_pipeline, transfer_lower_bound, LowerBoundReport, PipelineOptions,
    PipelineSummary, Progress, DEFAULT_MAX_ITERS, DEFAULT_MAX_PERIOD,
};
