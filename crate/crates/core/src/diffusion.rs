//! Influence evaluation under the maximum influence arborescence model.
//!
//! For every root `v`, `MIIA(v, theta)` is the in-tree formed by the
//! maximum-probability paths into `v` whose probability is at least
//! `theta`. Activation probabilities are computed exactly on each tree and
//! the spread is the sum of root activation probabilities.
//!
//! [`MiaModel`] holds the trees of a fixed weighted graph and
//! [`SpreadState`] keeps per-tree activation probabilities for a growing
//! seed set, so the marginal gain of a node only walks that node's paths to
//! the roots that contain it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::graph::{TagGraph, TargetProfile, WeightedGraph};
use crate::{Error, Result};

/// `1/320`.
pub const DEFAULT_THETA: f64 = 0.003125;

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug)]
struct Frontier {
    prob: f64,
    node: usize,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Max-heap: highest probability first, then lowest node id.
impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prob
            .total_cmp(&other.prob)
            .then_with(|| other.node.cmp(&self.node))
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::invalid(
            "theta",
            format!("{theta} is outside (0, 1]"),
        ));
    }
    Ok(())
}

fn check_nodes(n: usize, nodes: &[usize]) -> Result<()> {
    match nodes.iter().find(|&&u| u >= n) {
        Some(&node) => Err(Error::NodeOutOfRange { node, n }),
        None => Ok(()),
    }
}

fn seed_mask(n: usize, seeds: &[usize]) -> Result<Vec<bool>> {
    check_nodes(n, seeds)?;
    let mut mask = vec![false; n];
    for &s in seeds {
        mask[s] = true;
    }
    Ok(mask)
}

/// The maximum-probability path from `source` to `sink` and its
/// probability (the product of its edge probabilities). Unreachable sinks
/// give an empty path and probability 0. Multiplying probabilities orders
/// paths exactly as summing `-ln p` would.
pub fn max_prob_path(g: &WeightedGraph, source: usize, sink: usize) -> Result<(Vec<usize>, f64)> {
    let n = g.node_count();
    check_nodes(n, &[source, sink])?;
    let mut best = vec![0.0f64; n];
    let mut pred = vec![NONE; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[source] = 1.0;
    heap.push(Frontier {
        prob: 1.0,
        node: source,
    });
    while let Some(Frontier { prob, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == sink {
            break;
        }
        for (next, p) in g.out_edges(node) {
            if done[next] {
                continue;
            }
            let cand = prob * p;
            if cand > best[next] {
                best[next] = cand;
                pred[next] = node;
                heap.push(Frontier {
                    prob: cand,
                    node: next,
                });
            } else if cand == best[next] && node < pred[next] {
                pred[next] = node;
            }
        }
    }
    if !done[sink] {
        return Ok((Vec::new(), 0.0));
    }
    let mut path = vec![sink];
    let mut cur = sink;
    while cur != source {
        cur = pred[cur];
        path.push(cur);
    }
    path.reverse();
    Ok((path, best[sink]))
}

/// Maximum influence in-arborescence of one root.
///
/// Nodes are stored in the order they were settled by the reverse
/// Dijkstra search: the root is at position 0 and every node comes after
/// its parent, so iterating positions backwards visits leaves first.
#[derive(Clone, Debug, PartialEq)]
pub struct Miia {
    root: usize,
    theta: f64,
    nodes: Vec<usize>,
    parent: Vec<usize>,
    edge_prob: Vec<f64>,
    path_prob: Vec<f64>,
    child_offsets: Vec<usize>,
    children: Vec<usize>,
}

impl Miia {
    fn build_unchecked(g: &WeightedGraph, root: usize, theta: f64) -> Self {
        let n = g.node_count();
        let mut best = vec![0.0f64; n];
        let mut next = vec![NONE; n];
        let mut via = vec![0.0f64; n];
        let mut pos_of = vec![NONE; n];
        let mut nodes = Vec::new();
        let mut heap = BinaryHeap::new();
        best[root] = 1.0;
        heap.push(Frontier {
            prob: 1.0,
            node: root,
        });
        while let Some(Frontier { prob, node }) = heap.pop() {
            if pos_of[node] != NONE {
                continue;
            }
            pos_of[node] = nodes.len();
            nodes.push(node);
            for (src, p) in g.in_edges(node) {
                if pos_of[src] != NONE {
                    continue;
                }
                let cand = prob * p;
                if cand < theta {
                    continue;
                }
                if cand > best[src] {
                    best[src] = cand;
                    next[src] = node;
                    via[src] = p;
                    heap.push(Frontier {
                        prob: cand,
                        node: src,
                    });
                } else if cand == best[src] && node < next[src] {
                    next[src] = node;
                    via[src] = p;
                }
            }
        }

        let len = nodes.len();
        let mut parent = vec![NONE; len];
        let mut edge_prob = vec![0.0; len];
        let mut path_prob = vec![1.0; len];
        let mut child_offsets = vec![0; len + 1];
        for i in 1..len {
            let u = nodes[i];
            parent[i] = pos_of[next[u]];
            edge_prob[i] = via[u];
            path_prob[i] = best[u];
            child_offsets[parent[i] + 1] += 1;
        }
        for i in 0..len {
            child_offsets[i + 1] += child_offsets[i];
        }
        let mut cursor = child_offsets.clone();
        let mut children = vec![0; len.saturating_sub(1)];
        for i in 1..len {
            children[cursor[parent[i]]] = i;
            cursor[parent[i]] += 1;
        }
        Miia {
            root,
            theta,
            nodes,
            parent,
            edge_prob,
            path_prob,
            child_offsets,
            children,
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Tree nodes, root first, each after its parent.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn position(&self, node: usize) -> Option<usize> {
        self.nodes.iter().position(|&u| u == node)
    }

    pub fn contains(&self, node: usize) -> bool {
        self.position(node).is_some()
    }

    /// Probability of `node`'s maximum path into the root.
    pub fn path_probability(&self, node: usize) -> Option<f64> {
        self.position(node).map(|i| self.path_prob[i])
    }

    /// Next hop from `node` towards the root.
    pub fn parent_of(&self, node: usize) -> Option<usize> {
        let i = self.position(node)?;
        (i != 0).then(|| self.nodes[self.parent[i]])
    }

    /// Probability on the edge from the node at `pos` to its parent.
    pub fn edge_probability(&self, pos: usize) -> f64 {
        self.edge_prob[pos]
    }

    pub fn parent_position(&self, pos: usize) -> Option<usize> {
        (pos != 0).then(|| self.parent[pos])
    }

    pub fn child_positions(&self, pos: usize) -> &[usize] {
        &self.children[self.child_offsets[pos]..self.child_offsets[pos + 1]]
    }

    /// Position-indexed activation probabilities for the seeds flagged in
    /// `is_seed` (indexed by node id).
    fn activation_with(&self, is_seed: &[bool]) -> Vec<f64> {
        let mut ap = vec![0.0; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            ap[i] = if is_seed[self.nodes[i]] {
                1.0
            } else {
                self.combine(i, &ap, NONE, 0.0)
            };
        }
        ap
    }

    /// `1 - prod_children (1 - ap(c) * p(c -> parent))`, with the child at
    /// `swap` taking `swap_ap` instead of its stored value.
    #[inline]
    fn combine(&self, pos: usize, ap: &[f64], swap: usize, swap_ap: f64) -> f64 {
        let keep = self.child_positions(pos).iter().fold(1.0, |acc, &c| {
            let a = if c == swap { swap_ap } else { ap[c] };
            acc * (1.0 - a * self.edge_prob[c])
        });
        1.0 - keep
    }
}

pub fn build_miia(g: &WeightedGraph, root: usize, theta: f64) -> Result<Miia> {
    check_theta(theta)?;
    check_nodes(g.node_count(), &[root])?;
    Ok(Miia::build_unchecked(g, root, theta))
}

/// Activation probability of every node of one arborescence.
#[derive(Clone, Debug, PartialEq)]
pub struct ActivationMap {
    nodes: Vec<usize>,
    ap: Vec<f64>,
}

impl ActivationMap {
    pub fn get(&self, node: usize) -> Option<f64> {
        self.nodes
            .iter()
            .position(|&u| u == node)
            .map(|i| self.ap[i])
    }

    /// Activation probability of the tree root.
    pub fn root(&self) -> f64 {
        self.ap[0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.nodes.iter().copied().zip(self.ap.iter().copied())
    }
}

pub fn activation_probability(miia: &Miia, seeds: &[usize]) -> ActivationMap {
    let n = miia.nodes.iter().chain(seeds).max().map_or(0, |m| m + 1);
    let mut mask = vec![false; n];
    for &s in seeds {
        mask[s] = true;
    }
    ActivationMap {
        nodes: miia.nodes.clone(),
        ap: miia.activation_with(&mask),
    }
}

/// The arborescences of a subset of roots (all nodes by default) together
/// with a reverse index from nodes to the trees containing them.
#[derive(Clone, Debug)]
pub struct MiaModel {
    node_count: usize,
    theta: f64,
    trees: Vec<Miia>,
    // node -> (tree index, position), ascending tree index
    membership: Vec<Vec<(u32, u32)>>,
}

impl MiaModel {
    pub fn build(g: &WeightedGraph, theta: f64) -> Result<Self> {
        let roots: Vec<usize> = (0..g.node_count()).collect();
        Self::build_for_roots(g, theta, &roots)
    }

    /// Only the listed roots get a tree; the objective is then a sum over
    /// those roots.
    pub fn build_for_roots(g: &WeightedGraph, theta: f64, roots: &[usize]) -> Result<Self> {
        check_theta(theta)?;
        check_nodes(g.node_count(), roots)?;
        let trees: Vec<Miia> = maybe_par_iter!(roots)
            .map(|&r| Miia::build_unchecked(g, r, theta))
            .collect();
        let mut membership = vec![Vec::new(); g.node_count()];
        for (ti, tree) in trees.iter().enumerate() {
            for (pos, &u) in tree.nodes.iter().enumerate() {
                membership[u].push((ti as u32, pos as u32));
            }
        }
        Ok(MiaModel {
            node_count: g.node_count(),
            theta,
            trees,
            membership,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn trees(&self) -> &[Miia] {
        &self.trees
    }

    /// Number of trees `node` belongs to.
    pub fn reach(&self, node: usize) -> usize {
        self.membership[node].len()
    }

    /// Total number of (tree, node) entries.
    pub fn size(&self) -> usize {
        self.membership.iter().map(Vec::len).sum()
    }
}

/// Activation state of every tree of a [`MiaModel`] for a seed set.
///
/// The objective is `sum_r w_r * ap(r)`, summed in tree order, with `w_r`
/// the weight of each tree's root (1 for influence spread, the benefit for
/// earned benefit).
#[derive(Clone, Debug)]
pub struct SpreadState<'m> {
    model: &'m MiaModel,
    weights: Vec<f64>,
    seeds: Vec<bool>,
    ap: Vec<Vec<f64>>,
}

impl<'m> SpreadState<'m> {
    /// `node_weights` is indexed by node id; `None` weights every root 1.
    pub fn new(model: &'m MiaModel, node_weights: Option<&[f64]>, seeds: &[usize]) -> Result<Self> {
        let mask = seed_mask(model.node_count, seeds)?;
        if let Some(w) = node_weights {
            if w.len() != model.node_count {
                return Err(Error::invalid(
                    "weights",
                    format!("{} weights for {} nodes", w.len(), model.node_count),
                ));
            }
        }
        let weights = model
            .trees
            .iter()
            .map(|t| node_weights.map_or(1.0, |w| w[t.root]))
            .collect();
        let ap = maybe_par_iter!(&model.trees)
            .map(|t| t.activation_with(&mask))
            .collect();
        Ok(SpreadState {
            model,
            weights,
            seeds: mask,
            ap,
        })
    }

    pub fn model(&self) -> &'m MiaModel {
        self.model
    }

    pub fn is_seed(&self, node: usize) -> bool {
        self.seeds[node]
    }

    pub fn seeds(&self) -> Vec<usize> {
        (0..self.seeds.len()).filter(|&u| self.seeds[u]).collect()
    }

    pub fn value(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.ap)
            .map(|(w, ap)| w * ap[0])
            .sum()
    }

    /// Walks from `pos` to the root, returning the root's new activation
    /// probability if `pos` became a seed, or `None` if the change does not
    /// reach the root.
    fn lift(&self, ti: usize, pos: usize) -> Option<f64> {
        let tree = &self.model.trees[ti];
        let ap = &self.ap[ti];
        let mut cur = pos;
        let mut new = 1.0;
        while cur != 0 {
            let par = tree.parent[cur];
            if self.seeds[tree.nodes[par]] {
                return None;
            }
            let updated = tree.combine(par, ap, cur, new);
            if updated == ap[par] {
                return None;
            }
            new = updated;
            cur = par;
        }
        Some(new)
    }

    /// `F(S + v) - F(S)`; zero if `v` is already a seed.
    pub fn gain(&self, v: usize) -> f64 {
        if self.seeds[v] {
            return 0.0;
        }
        let mut total = 0.0;
        for &(ti, pos) in &self.model.membership[v] {
            let (ti, pos) = (ti as usize, pos as usize);
            let w = self.weights[ti];
            if w == 0.0 {
                continue;
            }
            if let Some(new_root) = self.lift(ti, pos) {
                total += w * (new_root - self.ap[ti][0]);
            }
        }
        total
    }

    pub fn add_seed(&mut self, v: usize) {
        if self.seeds[v] {
            return;
        }
        let SpreadState {
            model, seeds, ap, ..
        } = self;
        for &(ti, pos) in &model.membership[v] {
            let tree = &model.trees[ti as usize];
            let ap = &mut ap[ti as usize];
            let mut cur = pos as usize;
            ap[cur] = 1.0;
            while cur != 0 {
                let par = tree.parent[cur];
                if seeds[tree.nodes[par]] {
                    break;
                }
                let updated = tree.combine(par, ap, NONE, 0.0);
                if updated == ap[par] {
                    break;
                }
                ap[par] = updated;
                cur = par;
            }
        }
        seeds[v] = true;
    }
}

fn weighted_spread(
    g: &WeightedGraph,
    seeds: &[usize],
    theta: f64,
    roots: &[usize],
    weights: impl Fn(usize) -> f64 + Sync,
) -> Result<f64> {
    check_theta(theta)?;
    let mask = seed_mask(g.node_count(), seeds)?;
    let per_root: Vec<f64> = maybe_par_iter!(roots)
        .map(|&r| {
            let tree = Miia::build_unchecked(g, r, theta);
            weights(r) * tree.activation_with(&mask)[0]
        })
        .collect();
    Ok(per_root.into_iter().sum())
}

/// `sigma(S) = sum_v ap(v, S, MIIA(v, theta))`.
pub fn influence_spread(g: &WeightedGraph, seeds: &[usize], theta: f64) -> Result<f64> {
    let roots: Vec<usize> = (0..g.node_count()).collect();
    weighted_spread(g, seeds, theta, &roots, |_| 1.0)
}

/// Influence spread over the graph aggregated for `tags`.
pub fn tag_influence(graph: &TagGraph, seeds: &[usize], tags: &[usize], theta: f64) -> Result<f64> {
    influence_spread(&graph.materialize(tags)?, seeds, theta)
}

/// Expected benefit `sum_{u in D} b(u) * ap(u, S, MIIA(u, theta))` over the
/// graph aggregated for `tags`.
pub fn earned_benefit(
    graph: &TagGraph,
    seeds: &[usize],
    tags: &[usize],
    targets: &TargetProfile,
    theta: f64,
) -> Result<f64> {
    let g = graph.materialize(tags)?;
    weighted_spread(&g, seeds, theta, targets.members(), |u| targets.benefit(u))
}
