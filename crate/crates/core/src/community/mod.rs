//! Community structure, per-community tag statistics and budget planning.

mod louvain;

pub use louvain::Louvain;

use serde::Serialize;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::graph::{NodeCosts, TagGraph, TargetProfile, UserTagCounts};
use crate::{Error, Result};

/// Slack allowed when checking that a budget plan does not exceed the total.
pub const BUDGET_EPSILON: f64 = 1e-6;

/// Something that partitions the undirected projection of a graph.
pub trait CommunityDetector {
    fn detect(&self, graph: &TagGraph) -> CommunityPartition;
}

/// A disjoint partition of the nodes into `0..len()` communities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommunityPartition {
    assignment: Vec<usize>,
    members: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl CommunityPartition {
    /// Labels are renumbered densely in order of first appearance, so any
    /// hashable labelling is accepted.
    pub fn from_assignment(labels: &[usize]) -> Self {
        let mut relabel = std::collections::HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let assignment = labels
            .iter()
            .enumerate()
            .map(|(u, &label)| {
                let c = *relabel.entry(label).or_insert_with(|| {
                    members.push(Vec::new());
                    members.len() - 1
                });
                members[c].push(u);
                c
            })
            .collect();
        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by_key(|&c| (members[c].len(), c));
        CommunityPartition {
            assignment,
            members,
            order,
        }
    }

    pub fn single(node_count: usize) -> Self {
        Self::from_assignment(&vec![0; node_count])
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_of(&self, u: usize) -> usize {
        self.assignment[u]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Members of community `c`, ascending.
    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    pub fn size(&self, c: usize) -> usize {
        self.members[c].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    /// Communities ascending by size, ties by index.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn smallest(&self) -> Option<usize> {
        self.order.first().copied()
    }

    pub fn largest(&self) -> Option<usize> {
        self.order.last().copied()
    }

    pub fn max_size(&self) -> usize {
        self.members.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Tag counts summed per community, with each community's tags ranked by
/// descending count (ties by ascending tag id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagFrequencyMatrix {
    counts: Vec<Vec<u64>>,
    ranking: Vec<Vec<usize>>,
}

impl TagFrequencyMatrix {
    pub fn counts(&self, community: usize) -> &[u64] {
        &self.counts[community]
    }

    pub fn ranking(&self, community: usize) -> &[usize] {
        &self.ranking[community]
    }

    pub fn count(&self, community: usize, tag: usize) -> u64 {
        self.counts[community][tag]
    }
}

pub fn rank_tags(counts: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    order
}

pub fn tag_frequency_matrix(
    partition: &CommunityPartition,
    counts: &UserTagCounts,
) -> TagFrequencyMatrix {
    let rows: Vec<(Vec<u64>, Vec<usize>)> = maybe_par_iter!(0..partition.len())
        .map(|c| {
            let mut row = vec![0u64; counts.tag_count()];
            for &u in partition.members(c) {
                for &(t, k) in counts.row(u) {
                    row[t] += k;
                }
            }
            let ranking = rank_tags(&row);
            (row, ranking)
        })
        .collect();
    let (counts, ranking) = rows.into_iter().unzip();
    TagFrequencyMatrix { counts, ranking }
}

/// Per-community seed and tag budgets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetPlan {
    pub seed_budget: Vec<f64>,
    pub tag_budget: Vec<f64>,
}

impl BudgetPlan {
    /// Each community share is split evenly between seeds and tags.
    fn from_shares(shares: impl Iterator<Item = f64>) -> Self {
        let halves: Vec<f64> = shares.map(|b| b / 2.0).collect();
        BudgetPlan {
            seed_budget: halves.clone(),
            tag_budget: halves,
        }
    }

    pub fn total(&self) -> f64 {
        self.seed_budget.iter().sum::<f64>() + self.tag_budget.iter().sum::<f64>()
    }
}

fn check_budget(budget: f64) -> Result<()> {
    if !(budget.is_finite() && budget > 0.0) {
        return Err(Error::invalid(
            "budget",
            format!("{budget} is not positive"),
        ));
    }
    Ok(())
}

/// Community `i` gets `|K_i| / n * budget`, halved into seed and tag parts.
pub fn size_based_budget(partition: &CommunityPartition, budget: f64) -> Result<BudgetPlan> {
    check_budget(budget)?;
    let n = partition.node_count() as f64;
    Ok(BudgetPlan::from_shares(
        (0..partition.len()).map(|c| partition.size(c) as f64 / n * budget),
    ))
}

/// `alpha * cost share + (1 - alpha) * benefit share` per community.
pub fn community_priority(
    partition: &CommunityPartition,
    costs: &NodeCosts,
    targets: &TargetProfile,
    alpha: f64,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(
            "alpha",
            format!("{alpha} is outside [0, 1]"),
        ));
    }
    let total_benefit = targets.total_benefit();
    let need_benefit = alpha < 1.0;
    if need_benefit && (targets.is_empty() || total_benefit <= 0.0) {
        return Err(Error::NoTargets);
    }
    let total_cost = costs.total();
    Ok((0..partition.len())
        .map(|c| {
            let members = partition.members(c);
            let cost: f64 = members.iter().map(|&u| costs.cost(u)).sum();
            let mut pi = alpha * (cost / total_cost);
            if need_benefit {
                let benefit: f64 = members
                    .iter()
                    .filter(|&&u| targets.contains(u))
                    .map(|&u| targets.benefit(u))
                    .sum();
                pi += (1.0 - alpha) * (benefit / total_benefit);
            }
            pi
        })
        .collect())
}

/// Community `i` gets `pi_i / sum(pi) * budget`, halved into seed and tag parts.
pub fn priority_based_budget(priorities: &[f64], budget: f64) -> Result<BudgetPlan> {
    check_budget(budget)?;
    let total: f64 = priorities.iter().sum();
    if total.is_nan() || total <= 0.0 || priorities.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::invalid(
            "priorities",
            "must be non-negative with a positive sum",
        ));
    }
    Ok(BudgetPlan::from_shares(
        priorities.iter().map(|p| p / total * budget),
    ))
}
