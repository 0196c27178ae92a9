use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CommunityDetector, CommunityPartition};
use crate::graph::TagGraph;

/// Multi-level modularity optimisation (local moves, then aggregation) on
/// the undirected, unweighted projection of the graph.
///
/// The visiting order of each level is a fixed shuffle derived from `seed`
/// and candidate communities are scanned in ascending index, so the output
/// is a pure function of the graph and the seed.
#[derive(Clone, Debug)]
pub struct Louvain {
    pub seed: u64,
    pub max_levels: usize,
    pub max_passes: usize,
}

impl Default for Louvain {
    fn default() -> Self {
        Louvain {
            seed: 0,
            max_levels: 32,
            max_passes: 64,
        }
    }
}

impl Louvain {
    pub fn with_seed(seed: u64) -> Self {
        Louvain {
            seed,
            ..Default::default()
        }
    }

    /// `adj` must be symmetric and free of self-loops.
    pub fn partition_adjacency(&self, adj: &[Vec<(usize, f64)>]) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut level = Level {
            adj: adj.to_vec(),
            loops: vec![0.0; adj.len()],
        };
        let mut assignment: Vec<usize> = (0..adj.len()).collect();
        for _ in 0..self.max_levels {
            let (communities, moved) = level.local_moves(self.max_passes, &mut rng);
            if !moved {
                break;
            }
            let (next, relabel) = level.aggregate(&communities);
            for c in assignment.iter_mut() {
                *c = relabel[communities[*c]];
            }
            if next.adj.len() == level.adj.len() {
                break;
            }
            level = next;
        }
        assignment
    }
}

impl CommunityDetector for Louvain {
    fn detect(&self, graph: &TagGraph) -> CommunityPartition {
        let adj: Vec<Vec<(usize, f64)>> = graph
            .undirected_neighbors()
            .into_iter()
            .map(|nbrs| nbrs.into_iter().map(|v| (v, 1.0)).collect())
            .collect();
        CommunityPartition::from_assignment(&self.partition_adjacency(&adj))
    }
}

struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    // A_ii: twice the internal weight of an aggregated node
    loops: Vec<f64>,
}

impl Level {
    fn degrees(&self) -> Vec<f64> {
        self.adj
            .iter()
            .zip(&self.loops)
            .map(|(nbrs, &l)| l + nbrs.iter().map(|&(_, w)| w).sum::<f64>())
            .collect()
    }

    fn local_moves(&self, max_passes: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.adj.len();
        let k = self.degrees();
        let m2: f64 = k.iter().sum();
        let mut community: Vec<usize> = (0..n).collect();
        if m2 <= 0.0 {
            return (community, false);
        }
        let mut total = k.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut any_move = false;
        for _ in 0..max_passes {
            let mut moved = false;
            for &i in &order {
                let current = community[i];
                let mut weight_to: BTreeMap<usize, f64> = BTreeMap::new();
                for &(j, w) in &self.adj[i] {
                    *weight_to.entry(community[j]).or_default() += w;
                }
                total[current] -= k[i];
                let gain = |c: usize, w: f64| w - total[c] * k[i] / m2;
                let mut best = current;
                let mut best_gain = gain(current, weight_to.get(&current).copied().unwrap_or(0.0));
                for (&c, &w) in &weight_to {
                    let g = gain(c, w);
                    if g > best_gain + 1e-12 {
                        best = c;
                        best_gain = g;
                    }
                }
                total[best] += k[i];
                if best != current {
                    community[i] = best;
                    moved = true;
                }
            }
            any_move |= moved;
            if !moved {
                break;
            }
        }
        (community, any_move)
    }

    /// Collapses each community into one node; returns the new level and
    /// the old-community -> new-node map.
    fn aggregate(&self, community: &[usize]) -> (Level, Vec<usize>) {
        let mut relabel = vec![usize::MAX; community.len()];
        let mut count = 0;
        for &c in community {
            if relabel[c] == usize::MAX {
                relabel[c] = count;
                count += 1;
            }
        }
        let mut merged: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); count];
        let mut loops = vec![0.0; count];
        for (i, nbrs) in self.adj.iter().enumerate() {
            let ci = relabel[community[i]];
            loops[ci] += self.loops[i];
            for &(j, w) in nbrs {
                let cj = relabel[community[j]];
                if ci == cj {
                    loops[ci] += w;
                } else {
                    *merged[ci].entry(cj).or_default() += w;
                }
            }
        }
        let adj = merged
            .into_iter()
            .map(|m| m.into_iter().collect())
            .collect();
        (Level { adj, loops }, relabel)
    }
}
