//! Planted-partition graphs with heavy-tailed out-degrees and
//! community-specific Zipf tag usage.

use std::collections::BTreeSet;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{TagGraph, UserTagCounts};
use crate::io::{Dataset, Manifest};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub nodes: usize,
    pub communities: usize,
    pub tags: usize,
    pub mean_out_degree: f64,
    /// Fraction of edges that leave their source's community.
    pub mixing: f64,
    /// Pareto shape of per-node activity; smaller means heavier hubs.
    pub activity_shape: f64,
    /// Tag-assignment events per user.
    pub tags_per_user: usize,
    pub zipf_exponent: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            nodes: 500,
            communities: 5,
            tags: 100,
            mean_out_degree: 1.5,
            mixing: 0.1,
            activity_shape: 2.0,
            tags_per_user: 8,
            zipf_exponent: 1.0,
            seed: 0,
        }
    }
}

impl SynthConfig {
    fn check(&self) -> Result<()> {
        if self.nodes < 2 || self.communities == 0 || self.communities > self.nodes {
            return Err(Error::invalid(
                "synth",
                format!(
                    "{} nodes cannot hold {} communities",
                    self.nodes, self.communities
                ),
            ));
        }
        if !(0.0..f64::INFINITY).contains(&self.mean_out_degree)
            || !(0.0..=1.0).contains(&self.mixing)
        {
            return Err(Error::invalid(
                "synth",
                "degree must be >= 0 and mixing in [0, 1]",
            ));
        }
        if self.activity_shape.is_nan()
            || self.activity_shape <= 1.0
            || !(0.0..f64::INFINITY).contains(&self.zipf_exponent)
        {
            return Err(Error::invalid(
                "synth",
                "activity shape must exceed 1, zipf exponent >= 0",
            ));
        }
        Ok(())
    }
}

/// A synthetic dataset (no probabilities) and its planted community labels.
pub fn generate(config: &SynthConfig) -> Result<(Dataset, Vec<usize>)> {
    config.check()?;
    let n = config.nodes;
    let k = config.communities;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let labels: Vec<usize> = (0..n).map(|u| u * k / n).collect();
    let mut members = vec![Vec::new(); k];
    for (u, &c) in labels.iter().enumerate() {
        members[c].push(u);
    }

    let shape = config.activity_shape;
    let activity: Vec<f64> = (0..n)
        .map(|_| (1.0 - rng.gen::<f64>()).powf(-1.0 / (shape - 1.0)))
        .collect();
    let mean_activity = activity.iter().sum::<f64>() / n as f64;
    let max_degree = (n - 1) / 2;

    let mut edges = Vec::new();
    for u in 0..n {
        let want = config.mean_out_degree * activity[u] / mean_activity;
        // stochastic rounding keeps the mean degree exact in expectation
        let mut degree = want.floor() as usize + usize::from(rng.gen::<f64>() < want.fract());
        degree = degree.min(max_degree);
        let own = labels[u];
        let mut targets = BTreeSet::new();
        let mut attempts = 0;
        while targets.len() < degree && attempts < 50 * degree {
            attempts += 1;
            let cross = k > 1 && rng.gen::<f64>() < config.mixing;
            let c = if cross {
                let other = rng.gen_range(0..k - 1);
                if other >= own {
                    other + 1
                } else {
                    other
                }
            } else {
                own
            };
            let v = members[c][rng.gen_range(0..members[c].len())];
            if v != u {
                targets.insert(v);
            }
        }
        edges.extend(targets.into_iter().map(|v| (u, v)));
    }

    let tag_count = config.tags;
    let mut triples = Vec::new();
    if tag_count > 0 {
        let zipf =
            WeightedIndex::new((1..=tag_count).map(|r| (r as f64).powf(-config.zipf_exponent)))
                .expect("zipf weights are positive");
        let orders: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let mut order: Vec<usize> = (0..tag_count).collect();
                order.shuffle(&mut rng);
                order
            })
            .collect();
        for u in 0..n {
            for _ in 0..config.tags_per_user {
                triples.push((u, orders[labels[u]][zipf.sample(&mut rng)], 1u64));
            }
        }
    }

    let graph = TagGraph::from_edges(n, tag_count, edges)?;
    let counts = UserTagCounts::from_triples(n, tag_count, triples)?;
    Ok((
        Dataset {
            graph,
            counts,
            manifest: Manifest::identity(n, tag_count),
        },
        labels,
    ))
}
