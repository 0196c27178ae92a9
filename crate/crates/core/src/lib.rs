//! Joint selection of seed users and campaign tags under a shared budget.
//!
//! Influence is evaluated under the maximum influence arborescence (MIA)
//! model over edge probabilities aggregated across the selected tags with
//! the noisy-OR rule `1 - prod(1 - p_t)`. The crate provides:
//!
//! * [`graph`]: the tag-annotated social graph, tag catalog, costs and targets;
//! * [`prob`]: the trivalency, count and weighted-cascade probability models;
//! * [`community`]: community detection, tag statistics and budget planning;
//! * [`diffusion`]: MIIA construction, activation probabilities, spread and benefit;
//! * [`selection`]: the EMIG-UT / EMIG-U / EMIG-U-Prunn greedy algorithms and baselines;
//! * [`harness`]: cost/benefit generation, synthetic data and experiment sweeps.
//!
//! Data-parallel loops (per-root MIIA construction, candidate gain
//! evaluation, per-edge probability assignment) run on rayon when the
//! `parallel` feature is enabled (the default) and sequentially otherwise.
//! Results are bitwise identical either way.

#[macro_use]
mod par;

pub mod community;
pub mod diffusion;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod prob;
pub mod selection;

pub use error::{Error, Result};
