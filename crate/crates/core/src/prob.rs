//! Per-tag edge probability constructions: trivalency, count-based and a
//! tag-aware weighted cascade.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::graph::{TagGraph, UserTagCounts};
use crate::{Error, Result};

pub const TRIVALENCY_LEVELS: [f64; 3] = [0.1, 0.01, 0.001];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbabilitySetting {
    Trivalency {
        seed: u64,
    },
    Count,
    #[serde(rename = "wc")]
    WeightedCascade,
}

impl ProbabilitySetting {
    pub fn name(&self) -> &'static str {
        match self {
            ProbabilitySetting::Trivalency { .. } => "trivalency",
            ProbabilitySetting::Count => "count",
            ProbabilitySetting::WeightedCascade => "wc",
        }
    }

    /// Parses `trivalency`, `count` or `wc`; `seed` is used by trivalency only.
    pub fn parse(name: &str, seed: u64) -> Result<Self> {
        match name {
            "trivalency" | "tri" => Ok(ProbabilitySetting::Trivalency { seed }),
            "count" => Ok(ProbabilitySetting::Count),
            "wc" | "weighted-cascade" => Ok(ProbabilitySetting::WeightedCascade),
            other => Err(Error::invalid(
                "prob-setting",
                format!("`{other}` is not one of trivalency, count, wc"),
            )),
        }
    }

    pub fn apply(&self, graph: &TagGraph, counts: &UserTagCounts) -> Result<TagGraph> {
        match *self {
            ProbabilitySetting::Trivalency { seed } => Ok(assign_trivalency(graph, seed)),
            ProbabilitySetting::Count => assign_count_probability(graph, counts),
            ProbabilitySetting::WeightedCascade => assign_weighted_cascade(graph, counts),
        }
    }
}

fn rebuild(graph: &TagGraph, rows: Vec<Vec<f64>>) -> Result<TagGraph> {
    graph.clone().with_probabilities(rows.concat())
}

/// Every `(edge, tag)` probability drawn uniformly from
/// [`TRIVALENCY_LEVELS`]. Each edge has its own ChaCha stream so the tensor
/// does not depend on evaluation order.
pub fn assign_trivalency(graph: &TagGraph, seed: u64) -> TagGraph {
    let tags = graph.tag_count();
    let rows: Vec<Vec<f64>> = maybe_par_iter!(0..graph.edge_count())
        .map(|e| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(e as u64);
            (0..tags)
                .map(|_| TRIVALENCY_LEVELS[rng.gen_range(0..3)])
                .collect()
        })
        .collect();
    rebuild(graph, rows).expect("trivalency levels are valid probabilities")
}

fn check_rows(graph: &TagGraph, counts: &UserTagCounts) -> Result<()> {
    if counts.user_count() != graph.node_count() {
        return Err(Error::invalid(
            "tag counts",
            format!(
                "{} count rows for {} nodes",
                counts.user_count(),
                graph.node_count()
            ),
        ));
    }
    if counts.tag_count() != graph.tag_count() {
        return Err(Error::invalid(
            "tag counts",
            format!(
                "{} count columns for a {}-tag graph",
                counts.tag_count(),
                graph.tag_count()
            ),
        ));
    }
    Ok(())
}

/// For an edge `u_j -> u_i`: `max(M[u_i] - M[u_j], 0) / (M[u_i] + 1)`,
/// element-wise over tags. Zero wherever the head's count does not exceed
/// the tail's.
pub fn assign_count_probability(graph: &TagGraph, counts: &UserTagCounts) -> Result<TagGraph> {
    check_rows(graph, counts)?;
    let tags = graph.tag_count();
    let rows: Vec<Vec<f64>> = maybe_par_iter!(0..graph.edge_count())
        .map(|e| {
            let (tail, head) = graph.edge(e);
            let mut row = vec![0.0; tags];
            for &(t, head_count) in counts.row(head) {
                let diff = head_count.saturating_sub(counts.get(tail, t));
                row[t] = diff as f64 / (head_count + 1) as f64;
            }
            row
        })
        .collect();
    rebuild(graph, rows)
}

/// For each node `u_i`: `M[u_i] / sum_{u_j in N_in(u_i)} M[u_j]`,
/// element-wise, assigned to every edge into `u_i`. `0/0` is 0 and ratios
/// above 1 (including `x/0`) are clamped to 1.
pub fn assign_weighted_cascade(graph: &TagGraph, counts: &UserTagCounts) -> Result<TagGraph> {
    check_rows(graph, counts)?;
    let tags = graph.tag_count();
    let per_head: Vec<Vec<f64>> = maybe_par_iter!(0..graph.node_count())
        .map(|head| {
            let own = counts.row(head);
            let mut row = vec![0.0; tags];
            if own.is_empty() || graph.in_degree(head) == 0 {
                return row;
            }
            let mut sums = vec![0u64; tags];
            for &(src, _) in graph.in_edges(head) {
                for &(t, c) in counts.row(src) {
                    sums[t] += c;
                }
            }
            for &(t, c) in own {
                row[t] = if sums[t] == 0 {
                    1.0
                } else {
                    (c as f64 / sums[t] as f64).min(1.0)
                };
            }
            row
        })
        .collect();
    let rows = graph
        .edges()
        .iter()
        .map(|&(_, head)| per_head[head].clone())
        .collect();
    rebuild(graph, rows)
}
