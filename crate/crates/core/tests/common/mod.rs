//! Independent reference implementations and random instance builders
//! shared by the integration tests.
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tagim::graph::{TagGraph, WeightedGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple digraph: each ordered pair is an edge with probability
/// `density`, probabilities uniform on `(0, 1]`.
pub fn random_weighted(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen::<f64>() < density {
                edges.push((u, v, 1.0 - rng.gen::<f64>()));
            }
        }
    }
    edges
}

/// Random tag graph; every `(edge, tag)` entry is zero with probability
/// `zero_frac`, otherwise uniform on `(0, 1]`.
pub fn random_tag_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    tags: usize,
    density: f64,
    zero_frac: f64,
) -> TagGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen::<f64>() < density {
                edges.push((u, v));
            }
        }
    }
    let m = edges.len();
    let probs = (0..m * tags)
        .map(|_| {
            if rng.gen::<f64>() < zero_frac {
                0.0
            } else {
                1.0 - rng.gen::<f64>()
            }
        })
        .collect();
    TagGraph::from_edges(n, tags, edges)
        .unwrap()
        .with_probabilities(probs)
        .unwrap()
}

pub fn sample_subset(rng: &mut ChaCha8Rng, n: usize, max: usize) -> Vec<usize> {
    let k = rng.gen_range(0..=max.min(n));
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(k);
    all
}

/// Best path probability from every node to `root`, by the textbook
/// `O(n^2)` array Dijkstra over a dense matrix (no heap).
pub fn dense_dijkstra_to_root(n: usize, edges: &[(usize, usize, f64)], root: usize) -> Vec<f64> {
    let mut w = vec![vec![0.0f64; n]; n];
    for &(u, v, p) in edges {
        w[u][v] = w[u][v].max(p);
    }
    let mut best = vec![0.0f64; n];
    let mut done = vec![false; n];
    best[root] = 1.0;
    loop {
        let mut pick = None;
        for x in 0..n {
            if !done[x] && best[x] > 0.0 && pick.is_none_or(|y: usize| best[x] > best[y]) {
                pick = Some(x);
            }
        }
        let Some(x) = pick else { break };
        done[x] = true;
        for u in 0..n {
            if !done[u] && w[u][x] > 0.0 {
                let cand = w[u][x] * best[x];
                if cand > best[u] {
                    best[u] = cand;
                }
            }
        }
    }
    best
}

/// Best simple-path probability from every node to `root` by enumerating
/// all simple paths. Exponential; keep `n` small.
pub fn exhaustive_paths_to_root(n: usize, edges: &[(usize, usize, f64)], root: usize) -> Vec<f64> {
    let mut into = vec![Vec::new(); n];
    for &(u, v, p) in edges {
        into[v].push((u, p));
    }
    let mut best = vec![0.0f64; n];
    let mut on_path = vec![false; n];
    fn walk(
        x: usize,
        prob: f64,
        into: &[Vec<(usize, f64)>],
        on_path: &mut [bool],
        best: &mut [f64],
    ) {
        best[x] = best[x].max(prob);
        on_path[x] = true;
        for &(u, p) in &into[x] {
            if !on_path[u] {
                walk(u, p * prob, into, on_path, best);
            }
        }
        on_path[x] = false;
    }
    walk(root, 1.0, &into, &mut on_path, &mut best);
    best
}

/// Fraction of live-edge samples in which `target` is reachable from a
/// seed. Each sample keeps edge `e` independently with probability `p_e`.
pub fn live_edge_activation(
    n: usize,
    edges: &[(usize, usize, f64)],
    seeds: &[usize],
    target: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let mut hits = 0usize;
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    for _ in 0..trials {
        for list in &mut out {
            list.clear();
        }
        for &(u, v, p) in edges {
            if rng.gen::<f64>() < p {
                out[u].push(v);
            }
        }
        seen.iter_mut().for_each(|s| *s = false);
        stack.clear();
        for &s in seeds {
            seen[s] = true;
            stack.push(s);
        }
        while let Some(x) = stack.pop() {
            for &y in &out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        hits += usize::from(seen[target]);
    }
    hits as f64 / trials as f64
}

/// Random in-arborescence on `n` nodes rooted at 0: node `i > 0` points to
/// a random earlier node.
pub fn random_in_arborescence(
    rng: &mut ChaCha8Rng,
    n: usize,
    p_min: f64,
) -> Vec<(usize, usize, f64)> {
    (1..n)
        .map(|i| (i, rng.gen_range(0..i), rng.gen_range(p_min..=1.0)))
        .collect()
}

/// Exact activation of `root` in an arborescence by direct recursion.
pub fn tree_activation(edges: &[(usize, usize, f64)], seeds: &[usize], x: usize) -> f64 {
    if seeds.contains(&x) {
        return 1.0;
    }
    let miss: f64 = edges
        .iter()
        .filter(|&&(_, v, _)| v == x)
        .map(|&(u, _, p)| 1.0 - p * tree_activation(edges, seeds, u))
        .product();
    1.0 - miss
}

pub fn weighted(n: usize, edges: &[(usize, usize, f64)]) -> WeightedGraph {
    WeightedGraph::from_edges(n, edges.to_vec()).unwrap()
}

use tagim::community::CommunityPartition;
use tagim::graph::{NodeCosts, TagCatalog};
use tagim::harness::{generate_costs, synth, SynthConfig};
use tagim::prob::assign_trivalency;
use tagim::selection::Instance;

/// A synthetic instance on its planted partition, trivalency probabilities.
pub struct Planted {
    pub graph: TagGraph,
    pub catalog: TagCatalog,
    pub costs: NodeCosts,
    pub partition: CommunityPartition,
}

impl Planted {
    pub fn new(config: SynthConfig) -> Self {
        let seed = config.seed;
        let (data, labels) = synth::generate(&config).unwrap();
        let graph = assign_trivalency(&data.graph, seed);
        let (costs, tag_costs) = generate_costs(graph.node_count(), graph.tag_count(), seed);
        Planted {
            catalog: TagCatalog::new(data.counts, tag_costs).unwrap(),
            costs,
            partition: CommunityPartition::from_assignment(&labels),
            graph,
        }
    }

    pub fn instance(&self) -> Instance<'_> {
        Instance {
            graph: &self.graph,
            catalog: &self.catalog,
            costs: &self.costs,
            partition: &self.partition,
        }
    }
}
