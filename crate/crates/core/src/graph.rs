//! The tag-annotated social graph and the side tables every other module
//! reads: tag catalog, user-tag counts, node costs and target users.

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::{Error, Result};

/// Directed graph whose edges carry one influence probability per tag.
///
/// Edges are stored sorted by `(source, target)`; an edge id is its index in
/// that order. Probabilities are dense over the tag universe, `0.0` meaning
/// the tag is irrelevant on that edge.
#[derive(Clone, Debug, PartialEq)]
pub struct TagGraph {
    node_count: usize,
    tag_count: usize,
    edges: Vec<(usize, usize)>,
    out_offsets: Vec<usize>,
    // (source, edge id), sorted by source
    in_edges: Vec<Vec<(usize, usize)>>,
    probs: Vec<f64>,
}

/// One `(edge, tag) -> probability` entry of a probability file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbRecord {
    pub src: usize,
    pub dst: usize,
    pub tag: usize,
    pub p: f64,
}

impl TagGraph {
    /// Builds the topology with all probabilities zero.
    pub fn from_edges(
        node_count: usize,
        tag_count: usize,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        for &(u, v) in &edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange {
                        node,
                        n: node_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }

        let mut out_offsets = vec![0; node_count + 1];
        for &(u, _) in &edges {
            out_offsets[u + 1] += 1;
        }
        for i in 0..node_count {
            out_offsets[i + 1] += out_offsets[i];
        }
        let mut in_edges = vec![Vec::new(); node_count];
        for (e, &(u, v)) in edges.iter().enumerate() {
            in_edges[v].push((u, e));
        }

        let probs = vec![0.0; edges.len() * tag_count];
        Ok(TagGraph {
            node_count,
            tag_count,
            edges,
            out_offsets,
            in_edges,
            probs,
        })
    }

    /// Builds the topology and fills in probabilities from `records`.
    /// Unlisted `(edge, tag)` entries stay zero.
    pub fn load(
        node_count: usize,
        tag_count: usize,
        edges: Vec<(usize, usize)>,
        records: impl IntoIterator<Item = ProbRecord>,
    ) -> Result<Self> {
        let mut graph = Self::from_edges(node_count, tag_count, edges)?;
        for r in records {
            if !(0.0..=1.0).contains(&r.p) {
                return Err(Error::ProbabilityOutOfRange {
                    src: r.src,
                    dst: r.dst,
                    tag: r.tag,
                    p: r.p,
                });
            }
            graph.check_tag(r.tag)?;
            let e = graph
                .find_edge(r.src, r.dst)
                .ok_or(Error::UnknownEdge(r.src, r.dst))?;
            graph.probs[e * tag_count + r.tag] = r.p;
        }
        Ok(graph)
    }

    /// Keeps tag columns `kept` (old ids), renumbered `0..kept.len()` in
    /// the given order.
    pub fn restrict_tags(&self, kept: &[usize]) -> Result<Self> {
        for &t in kept {
            self.check_tag(t)?;
        }
        let mut probs = Vec::with_capacity(self.edges.len() * kept.len());
        for e in 0..self.edges.len() {
            let row = self.edge_probs(e);
            probs.extend(kept.iter().map(|&t| row[t]));
        }
        Self::from_edges(self.node_count(), kept.len(), self.edges.clone())?
            .with_probabilities(probs)
    }

    /// Replaces the probability tensor (row-major, `edge_count x tag_count`).
    pub fn with_probabilities(mut self, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != self.edges.len() * self.tag_count {
            return Err(Error::invalid(
                "probabilities",
                format!(
                    "expected {} entries, got {}",
                    self.edges.len() * self.tag_count,
                    probs.len()
                ),
            ));
        }
        if let Some(i) = probs.iter().position(|p| !(0.0..=1.0).contains(p)) {
            let (src, dst) = self.edges[i / self.tag_count.max(1)];
            return Err(Error::ProbabilityOutOfRange {
                src,
                dst,
                tag: i % self.tag_count.max(1),
                p: probs[i],
            });
        }
        self.probs = probs;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn tag_count(&self) -> usize {
        self.tag_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_probs(&self, e: usize) -> &[f64] {
        &self.probs[e * self.tag_count..(e + 1) * self.tag_count]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.node_count {
            return None;
        }
        let lo = self.out_offsets[u];
        let hi = self.out_offsets[u + 1];
        self.edges[lo..hi]
            .binary_search_by_key(&v, |&(_, t)| t)
            .ok()
            .map(|i| lo + i)
    }

    /// `(target, edge id)` pairs leaving `u`, ascending by target.
    pub fn out_edges(&self, u: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let lo = self.out_offsets[u];
        let hi = self.out_offsets[u + 1];
        (lo..hi).map(move |e| (self.edges[e].1, e))
    }

    /// `(source, edge id)` pairs entering `v`, ascending by source.
    pub fn in_edges(&self, v: usize) -> &[(usize, usize)] {
        &self.in_edges[v]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_offsets[u + 1] - self.out_offsets[u]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_edges[v].len()
    }

    /// Ignores direction and multiplicity; neighbor lists are sorted.
    pub fn undirected_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    fn check_tag(&self, tag: usize) -> Result<()> {
        if tag >= self.tag_count {
            return Err(Error::UnknownTag {
                tag,
                tag_count: self.tag_count,
            });
        }
        Ok(())
    }

    fn canonical_tags(&self, tags: &[usize]) -> Result<Vec<usize>> {
        for &t in tags {
            self.check_tag(t)?;
        }
        let mut sorted = tags.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(sorted)
    }

    /// Noisy-OR aggregation `1 - prod_{t in tags} (1 - p_t(edge))`,
    /// evaluated in ascending tag order.
    pub fn aggregate_probability(&self, edge: usize, tags: &[usize]) -> Result<f64> {
        let tags = self.canonical_tags(tags)?;
        Ok(aggregate_sorted(self.edge_probs(edge), &tags))
    }

    /// Collapses the tag dimension for `tags`, dropping edges whose
    /// aggregated probability is zero.
    pub fn materialize(&self, tags: &[usize]) -> Result<WeightedGraph> {
        let tags = self.canonical_tags(tags)?;
        let weights: Vec<f64> = maybe_par_iter!(0..self.edges.len())
            .map(|e| aggregate_sorted(self.edge_probs(e), &tags))
            .collect();
        let weighted = self
            .edges
            .iter()
            .zip(weights)
            .filter(|&(_, p)| p > 0.0)
            .map(|(&(u, v), p)| (u, v, p));
        WeightedGraph::from_sorted_unchecked(self.node_count, weighted)
    }

    /// All `(edge, tag)` entries with a nonzero probability, in edge order.
    pub fn prob_records(&self) -> impl Iterator<Item = ProbRecord> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(move |(e, &(src, dst))| {
                self.edge_probs(e)
                    .iter()
                    .enumerate()
                    .filter(|&(_, &p)| p != 0.0)
                    .map(move |(tag, &p)| ProbRecord { src, dst, tag, p })
            })
    }
}

fn aggregate_sorted(probs: &[f64], sorted_tags: &[usize]) -> f64 {
    // `a + p(1 - a)` equals `1 - (1 - a)(1 - p)` and keeps a single tag exact.
    sorted_tags
        .iter()
        .fold(0.0, |acc: f64, &t| (acc + probs[t] * (1.0 - acc)).min(1.0))
}

/// A directed graph with one scalar probability per edge, the input of the
/// diffusion model. Both adjacency directions are stored in CSR form.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    node_count: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    out_probs: Vec<f64>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
    in_probs: Vec<f64>,
}

impl WeightedGraph {
    /// Validates and builds; zero-probability edges are dropped.
    pub fn from_edges(node_count: usize, mut edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(u, v, p) in &edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange {
                        node,
                        n: node_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityOutOfRange {
                    src: u,
                    dst: v,
                    tag: 0,
                    p,
                });
            }
        }
        edges.sort_by_key(|e| (e.0, e.1));
        if let Some(w) = edges
            .windows(2)
            .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Self::from_sorted_unchecked(node_count, edges.into_iter().filter(|e| e.2 > 0.0))
    }

    fn from_sorted_unchecked(
        node_count: usize,
        edges: impl Iterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let edges: Vec<_> = edges.collect();
        let mut out_offsets = vec![0; node_count + 1];
        let mut in_offsets = vec![0; node_count + 1];
        for &(u, v, _) in &edges {
            out_offsets[u + 1] += 1;
            in_offsets[v + 1] += 1;
        }
        for i in 0..node_count {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let out_targets = edges.iter().map(|e| e.1).collect();
        let out_probs = edges.iter().map(|e| e.2).collect();
        // Stable counting sort by target keeps sources ascending per target.
        let mut cursor = in_offsets.clone();
        let mut in_sources = vec![0; edges.len()];
        let mut in_probs = vec![0.0; edges.len()];
        for &(u, v, p) in &edges {
            in_sources[cursor[v]] = u;
            in_probs[cursor[v]] = p;
            cursor[v] += 1;
        }
        Ok(WeightedGraph {
            node_count,
            out_offsets,
            out_targets,
            out_probs,
            in_offsets,
            in_sources,
            in_probs,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    /// `(target, probability)` pairs leaving `u`, ascending by target.
    pub fn out_edges(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.out_offsets[u]..self.out_offsets[u + 1];
        self.out_targets[r.clone()]
            .iter()
            .copied()
            .zip(self.out_probs[r].iter().copied())
    }

    /// `(source, probability)` pairs entering `v`, ascending by source.
    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.in_offsets[v]..self.in_offsets[v + 1];
        self.in_sources[r.clone()]
            .iter()
            .copied()
            .zip(self.in_probs[r].iter().copied())
    }

    pub fn edge_probability(&self, u: usize, v: usize) -> f64 {
        let r = self.out_offsets[u]..self.out_offsets[u + 1];
        match self.out_targets[r.clone()].binary_search(&v) {
            Ok(i) => self.out_probs[r.start + i],
            Err(_) => 0.0,
        }
    }
}

/// Sparse user x tag count matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UserTagCounts {
    tag_count: usize,
    // per user: (tag, count) sorted by tag, no zero counts
    rows: Vec<Vec<(usize, u64)>>,
}

impl UserTagCounts {
    /// Repeated `(user, tag)` entries are summed.
    pub fn from_triples(
        user_count: usize,
        tag_count: usize,
        triples: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, u64)>> = vec![Vec::new(); user_count];
        for (u, t, c) in triples {
            if u >= user_count {
                return Err(Error::NodeOutOfRange {
                    node: u,
                    n: user_count,
                });
            }
            if t >= tag_count {
                return Err(Error::UnknownTag { tag: t, tag_count });
            }
            if c > 0 {
                rows[u].push((t, c));
            }
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|&(t, _)| t);
            let mut merged: Vec<(usize, u64)> = Vec::with_capacity(row.len());
            for &(t, c) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == t => last.1 += c,
                    _ => merged.push((t, c)),
                }
            }
            *row = merged;
        }
        Ok(UserTagCounts { tag_count, rows })
    }

    pub fn user_count(&self) -> usize {
        self.rows.len()
    }

    pub fn tag_count(&self) -> usize {
        self.tag_count
    }

    pub fn row(&self, user: usize) -> &[(usize, u64)] {
        &self.rows[user]
    }

    pub fn get(&self, user: usize, tag: usize) -> u64 {
        let row = &self.rows[user];
        match row.binary_search_by_key(&tag, |&(t, _)| t) {
            Ok(i) => row[i].1,
            Err(_) => 0,
        }
    }

    pub fn dense_row(&self, user: usize) -> Vec<u64> {
        let mut dense = vec![0; self.tag_count];
        for &(t, c) in &self.rows[user] {
            dense[t] = c;
        }
        dense
    }

    /// Column sums over all users.
    pub fn tag_totals(&self) -> Vec<u64> {
        let mut totals = vec![0; self.tag_count];
        for row in &self.rows {
            for &(t, c) in row {
                totals[t] += c;
            }
        }
        totals
    }

    /// Keeps the columns listed in `kept` (old ids), renumbering them
    /// `0..kept.len()` in the given order.
    pub fn restrict(&self, kept: &[usize]) -> Result<Self> {
        let mut remap = vec![usize::MAX; self.tag_count];
        for (new, &old) in kept.iter().enumerate() {
            if old >= self.tag_count {
                return Err(Error::UnknownTag {
                    tag: old,
                    tag_count: self.tag_count,
                });
            }
            remap[old] = new;
        }
        let triples = self.rows.iter().enumerate().flat_map(|(u, row)| {
            let remap = &remap;
            row.iter()
                .filter(move |&&(t, _)| remap[t] != usize::MAX)
                .map(move |&(t, c)| (u, remap[t], c))
        });
        Self::from_triples(self.rows.len(), kept.len(), triples)
    }

    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |&(t, c)| (u, t, c)))
    }
}

/// The tag universe: per-tag selection cost plus the user-tag count matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TagCatalog {
    costs: Vec<f64>,
    counts: UserTagCounts,
}

impl TagCatalog {
    pub fn new(counts: UserTagCounts, costs: Vec<f64>) -> Result<Self> {
        if costs.len() != counts.tag_count() {
            return Err(Error::invalid(
                "tag_cost",
                format!("{} costs for {} tags", costs.len(), counts.tag_count()),
            ));
        }
        check_costs("tag", &costs)?;
        Ok(TagCatalog { costs, counts })
    }

    pub fn tag_count(&self) -> usize {
        self.costs.len()
    }

    pub fn cost(&self, tag: usize) -> f64 {
        self.costs[tag]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn counts(&self) -> &UserTagCounts {
        &self.counts
    }
}

fn check_costs(what: &'static str, costs: &[f64]) -> Result<()> {
    match costs
        .iter()
        .enumerate()
        .find(|(_, c)| !(c.is_finite() && **c > 0.0))
    {
        Some((id, &value)) => Err(Error::InvalidCost { what, id, value }),
        None => Ok(()),
    }
}

/// Per-node seed selection cost.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeCosts(Vec<f64>);

impl NodeCosts {
    pub fn new(costs: Vec<f64>) -> Result<Self> {
        check_costs("node", &costs)?;
        Ok(NodeCosts(costs))
    }

    pub fn cost(&self, node: usize) -> f64 {
        self.0[node]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Target users and the benefit earned by influencing each of them.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetProfile {
    members: Vec<usize>,
    // dense over all nodes, zero off-target
    benefit: Vec<f64>,
    is_member: Vec<bool>,
}

impl TargetProfile {
    pub fn new(node_count: usize, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut benefit = vec![0.0; node_count];
        let mut is_member = vec![false; node_count];
        let mut members = Vec::new();
        for (u, b) in entries {
            if u >= node_count {
                return Err(Error::NodeOutOfRange {
                    node: u,
                    n: node_count,
                });
            }
            if is_member[u] {
                return Err(Error::invalid("targets", format!("node {u} listed twice")));
            }
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::invalid(
                    "benefit",
                    format!("node {u} has benefit {b}"),
                ));
            }
            benefit[u] = b;
            is_member[u] = true;
            members.push(u);
        }
        members.sort_unstable();
        Ok(TargetProfile {
            members,
            benefit,
            is_member,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.is_member.get(u).copied().unwrap_or(false)
    }

    pub fn benefit(&self, u: usize) -> f64 {
        self.benefit[u]
    }

    /// Benefit per node, zero for non-targets.
    pub fn benefit_weights(&self) -> &[f64] {
        &self.benefit
    }

    pub fn total_benefit(&self) -> f64 {
        self.members.iter().map(|&u| self.benefit[u]).sum()
    }

    pub fn node_count(&self) -> usize {
        self.benefit.len()
    }
}

/// A seed set and tag set with the money spent on each.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostedSelection {
    pub seeds: Vec<usize>,
    pub tags: Vec<usize>,
    pub seed_spend: f64,
    pub tag_spend: f64,
}

impl CostedSelection {
    pub fn add_seed(&mut self, node: usize, cost: f64) {
        debug_assert!(!self.seeds.contains(&node));
        self.seeds.push(node);
        self.seed_spend += cost;
    }

    pub fn add_tag(&mut self, tag: usize, cost: f64) {
        debug_assert!(!self.tags.contains(&tag));
        self.tags.push(tag);
        self.tag_spend += cost;
    }

    pub fn spend(&self) -> f64 {
        self.seed_spend + self.tag_spend
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty() && self.tags.is_empty()
    }
}
