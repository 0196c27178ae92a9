//! Seed and tag selection: the effective-marginal-gain greedy algorithms
//! (EMIG-UT, EMIG-U, EMIG-U-Prunn) and the RN+RT / HN+HT / HN+HT+COMM
//! baselines.
//!
//! Every greedy step scans its feasible candidates in parallel and reduces
//! with a fixed order (`delta` descending, then node id, then tag id), so a
//! run is reproducible regardless of thread count.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::community::{
    community_priority, priority_based_budget, size_based_budget, tag_frequency_matrix, BudgetPlan,
    CommunityPartition, TagFrequencyMatrix,
};
use crate::diffusion::{earned_benefit, tag_influence, MiaModel, SpreadState, DEFAULT_THETA};
use crate::graph::{CostedSelection, NodeCosts, TagCatalog, TagGraph, TargetProfile};
use crate::{Error, Result};

pub const DEFAULT_PRUNE_K: usize = 200;
pub const DEFAULT_ALPHA: f64 = 0.5;

/// What the greedy steps maximise.
#[derive(Clone, Debug, PartialEq)]
pub enum ObjectiveKind {
    /// Expected number of influenced nodes.
    Influence,
    /// Expected benefit earned from the target users.
    Benefit(TargetProfile),
}

impl ObjectiveKind {
    pub fn name(&self) -> &'static str {
        match self {
            ObjectiveKind::Influence => "influence",
            ObjectiveKind::Benefit(_) => "benefit",
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            ObjectiveKind::Benefit(t) if t.is_empty() => Err(Error::NoTargets),
            _ => Ok(()),
        }
    }

    fn roots(&self, node_count: usize) -> Vec<usize> {
        match self {
            ObjectiveKind::Influence => (0..node_count).collect(),
            ObjectiveKind::Benefit(t) => t.members().to_vec(),
        }
    }

    fn weights(&self) -> Option<&[f64]> {
        match self {
            ObjectiveKind::Influence => None,
            ObjectiveKind::Benefit(t) => Some(t.benefit_weights()),
        }
    }

    /// `sigma^T(S, T')` or `beta^T(S, T')`.
    pub fn evaluate(
        &self,
        graph: &TagGraph,
        seeds: &[usize],
        tags: &[usize],
        theta: f64,
    ) -> Result<f64> {
        match self {
            ObjectiveKind::Influence => tag_influence(graph, seeds, tags, theta),
            ObjectiveKind::Benefit(t) => earned_benefit(graph, seeds, tags, t, theta),
        }
    }

    /// MIA trees for the graph aggregated over `tags`, restricted to the
    /// roots the objective sums over.
    pub fn model(&self, graph: &TagGraph, tags: &[usize], theta: f64) -> Result<MiaModel> {
        let g = graph.materialize(tags)?;
        MiaModel::build_for_roots(&g, theta, &self.roots(graph.node_count()))
    }

    pub fn state<'m>(&self, model: &'m MiaModel, seeds: &[usize]) -> Result<SpreadState<'m>> {
        SpreadState::new(model, self.weights(), seeds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelectionConfig {
    pub theta: f64,
    /// Cost/benefit balance of community priorities (benefit objective only).
    pub alpha: f64,
    pub prune_k: usize,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            theta: DEFAULT_THETA,
            alpha: DEFAULT_ALPHA,
            prune_k: DEFAULT_PRUNE_K,
        }
    }
}

/// Everything a selection algorithm reads.
#[derive(Clone, Copy, Debug)]
pub struct Instance<'a> {
    pub graph: &'a TagGraph,
    pub catalog: &'a TagCatalog,
    pub costs: &'a NodeCosts,
    pub partition: &'a CommunityPartition,
}

impl Instance<'_> {
    fn check(&self) -> Result<()> {
        let n = self.graph.node_count();
        if self.costs.len() != n || self.partition.node_count() != n {
            return Err(Error::invalid(
                "instance",
                format!(
                    "{n} nodes but {} node costs and a {}-node partition",
                    self.costs.len(),
                    self.partition.node_count()
                ),
            ));
        }
        if self.catalog.tag_count() != self.graph.tag_count()
            || self.catalog.counts().user_count() != n
        {
            return Err(Error::invalid(
                "instance",
                format!(
                    "graph has {} tags, catalog has {} tags over {} users",
                    self.graph.tag_count(),
                    self.catalog.tag_count(),
                    self.catalog.counts().user_count()
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    InitialTag,
    Pair,
    Tag,
    Seed,
    Transfer,
    Warning,
}

/// One line of a selection trace. Budgets are the community's remaining
/// seed and tag budgets after the step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    pub kind: StepKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub community: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tag: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub seed_budget: f64,
    pub tag_budget: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub records: Vec<TraceRecord>,
    /// Number of `delta` values computed.
    pub gain_evaluations: u64,
}

impl SelectionTrace {
    fn push(
        &mut self,
        kind: StepKind,
        community: Option<usize>,
        node: Option<usize>,
        tag: Option<usize>,
        delta: Option<f64>,
        plan: &BudgetPlan,
    ) {
        let (seed_budget, tag_budget) = community
            .map(|c| (plan.seed_budget[c], plan.tag_budget[c]))
            .unwrap_or((0.0, 0.0));
        self.records.push(TraceRecord {
            step: self.records.len(),
            kind,
            community,
            node,
            tag,
            delta,
            seed_budget,
            tag_budget,
            note: None,
        });
    }

    fn warn(&mut self, community: Option<usize>, plan: &BudgetPlan, note: &str) {
        self.push(StepKind::Warning, community, None, None, None, plan);
        self.records.last_mut().unwrap().note = Some(note.to_owned());
    }

    /// The JSON-lines rendering used for trace files.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("trace records serialize"));
            out.push('\n');
        }
        out
    }
}

fn precondition(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

fn with_item(list: &[usize], item: usize) -> Vec<usize> {
    let mut v = list.to_vec();
    v.push(item);
    v
}

/// `(F(S + v, T') - F(S, T')) / cost(v)`, by two full evaluations.
pub fn delta_node(
    graph: &TagGraph,
    costs: &NodeCosts,
    v: usize,
    seeds: &[usize],
    tags: &[usize],
    objective: &ObjectiveKind,
    theta: f64,
) -> Result<f64> {
    precondition(!seeds.contains(&v), || {
        format!("node {v} is already a seed")
    })?;
    let before = objective.evaluate(graph, seeds, tags, theta)?;
    let after = objective.evaluate(graph, &with_item(seeds, v), tags, theta)?;
    Ok((after - before) / costs.cost(v))
}

/// `(F(S, T' + t) - F(S, T')) / cost(t)`, by two full evaluations.
pub fn delta_tag(
    graph: &TagGraph,
    catalog: &TagCatalog,
    t: usize,
    seeds: &[usize],
    tags: &[usize],
    objective: &ObjectiveKind,
    theta: f64,
) -> Result<f64> {
    precondition(!tags.contains(&t), || {
        format!("tag {t} is already selected")
    })?;
    let before = objective.evaluate(graph, seeds, tags, theta)?;
    let after = objective.evaluate(graph, seeds, &with_item(tags, t), theta)?;
    Ok((after - before) / catalog.cost(t))
}

/// `(F(S + v, T' + t) - F(S, T')) / (cost(v) + cost(t))`.
#[allow(clippy::too_many_arguments)]
pub fn delta_pair(
    graph: &TagGraph,
    costs: &NodeCosts,
    catalog: &TagCatalog,
    v: usize,
    t: usize,
    seeds: &[usize],
    tags: &[usize],
    objective: &ObjectiveKind,
    theta: f64,
) -> Result<f64> {
    precondition(!seeds.contains(&v), || {
        format!("node {v} is already a seed")
    })?;
    precondition(!tags.contains(&t), || {
        format!("tag {t} is already selected")
    })?;
    let before = objective.evaluate(graph, seeds, tags, theta)?;
    let after = objective.evaluate(graph, &with_item(seeds, v), &with_item(tags, t), theta)?;
    Ok((after - before) / (costs.cost(v) + catalog.cost(t)))
}

/// Size-proportional for influence, priority-proportional for benefit.
pub fn plan_budget(
    instance: &Instance<'_>,
    budget: f64,
    objective: &ObjectiveKind,
    alpha: f64,
) -> Result<BudgetPlan> {
    match objective {
        ObjectiveKind::Influence => size_based_budget(instance.partition, budget),
        ObjectiveKind::Benefit(targets) => {
            let pi = community_priority(instance.partition, instance.costs, targets, alpha)?;
            priority_based_budget(&pi, budget)
        }
    }
}

/// `(delta, node, tag)` ordering: larger delta wins, then smaller ids.
fn better(a: (f64, usize, usize), b: (f64, usize, usize)) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => (a.1, a.2) < (b.1, b.2),
    }
}

fn argmax(items: impl IntoIterator<Item = (f64, usize, usize)>) -> Option<(f64, usize, usize)> {
    items.into_iter().fold(None, |best, x| match best {
        Some(b) if !better(x, b) => Some(b),
        _ => Some(x),
    })
}

/// State shared by the three greedy algorithms: budget plan, community
/// order, tag statistics and the selection built so far.
struct Greedy<'a> {
    instance: Instance<'a>,
    plan: BudgetPlan,
    order: Vec<usize>,
    largest: usize,
    frequencies: TagFrequencyMatrix,
    selection: CostedSelection,
    is_seed: Vec<bool>,
    is_tag: Vec<bool>,
    trace: SelectionTrace,
}

impl<'a> Greedy<'a> {
    fn new(
        instance: Instance<'a>,
        budget: f64,
        objective: &ObjectiveKind,
        config: &SelectionConfig,
    ) -> Result<Self> {
        instance.check()?;
        objective.check()?;
        let plan = plan_budget(&instance, budget, objective, config.alpha)?;
        let order = instance.partition.order().to_vec();
        let largest = instance
            .partition
            .largest()
            .ok_or_else(|| Error::invalid("partition", "no communities"))?;
        Ok(Greedy {
            frequencies: tag_frequency_matrix(instance.partition, instance.catalog.counts()),
            plan,
            order,
            largest,
            selection: CostedSelection::default(),
            is_seed: vec![false; instance.graph.node_count()],
            is_tag: vec![false; instance.graph.tag_count()],
            trace: SelectionTrace::default(),
            instance,
        })
    }

    fn add_tag(&mut self, community: usize, t: usize) {
        let cost = self.instance.catalog.cost(t);
        self.plan.tag_budget[community] -= cost;
        self.selection.add_tag(t, cost);
        self.is_tag[t] = true;
    }

    fn add_seed(&mut self, community: usize, v: usize) {
        let cost = self.instance.costs.cost(v);
        self.plan.seed_budget[community] -= cost;
        self.selection.add_seed(v, cost);
        self.is_seed[v] = true;
    }

    /// The most frequent tag of the smallest community that fits its tag
    /// budget.
    fn initial_tag(&mut self) {
        let first = self.order[0];
        let budget = self.plan.tag_budget[first];
        let catalog = self.instance.catalog;
        let pick = self
            .frequencies
            .ranking(first)
            .iter()
            .copied()
            .find(|&t| catalog.cost(t) <= budget);
        match pick {
            Some(t) => {
                self.add_tag(first, t);
                self.trace.push(
                    StepKind::InitialTag,
                    Some(first),
                    None,
                    Some(t),
                    None,
                    &self.plan,
                );
            }
            None => self
                .trace
                .warn(Some(first), &self.plan, "no affordable initial tag"),
        }
    }

    fn transfer_seed_budget(&mut self, c: usize) {
        if c != self.largest {
            self.plan.seed_budget[self.largest] += self.plan.seed_budget[c];
            self.plan.seed_budget[c] = 0.0;
            self.trace
                .push(StepKind::Transfer, Some(c), None, None, None, &self.plan);
        }
    }

    fn transfer_tag_budget(&mut self, c: usize) {
        if c != self.largest {
            self.plan.tag_budget[self.largest] += self.plan.tag_budget[c];
            self.plan.tag_budget[c] = 0.0;
            self.trace
                .push(StepKind::Transfer, Some(c), None, None, None, &self.plan);
        }
    }

    fn affordable_nodes(&self, c: usize) -> Vec<usize> {
        let budget = self.plan.seed_budget[c];
        self.instance
            .partition
            .members(c)
            .iter()
            .copied()
            .filter(|&v| !self.is_seed[v] && self.instance.costs.cost(v) <= budget)
            .collect()
    }

    fn affordable_tags(&self, c: usize) -> Vec<usize> {
        let budget = self.plan.tag_budget[c];
        (0..self.instance.catalog.tag_count())
            .filter(|&t| !self.is_tag[t] && self.instance.catalog.cost(t) <= budget)
            .collect()
    }

    /// Walks community `c`'s tags by descending frequency, taking every
    /// unused one that still fits.
    fn frequency_walk(&mut self, c: usize) {
        for i in 0..self.instance.catalog.tag_count() {
            let t = self.frequencies.ranking(c)[i];
            if !self.is_tag[t] && self.instance.catalog.cost(t) <= self.plan.tag_budget[c] {
                self.add_tag(c, t);
                self.trace
                    .push(StepKind::Tag, Some(c), None, Some(t), None, &self.plan);
            }
        }
    }

    fn finish(mut self) -> (CostedSelection, SelectionTrace) {
        if self.selection.is_empty() {
            self.trace
                .warn(None, &self.plan, "budget too small for any selection");
        }
        (self.selection, self.trace)
    }
}

/// Greedy over user-tag pairs: each step adds the pair maximising
/// `delta_(v,t)` among the current community's affordable unused nodes and
/// all affordable unused tags.
pub fn emig_ut(
    instance: Instance<'_>,
    budget: f64,
    objective: &ObjectiveKind,
    config: &SelectionConfig,
) -> Result<(CostedSelection, SelectionTrace)> {
    let mut greedy = Greedy::new(instance, budget, objective, config)?;
    let graph = instance.graph;
    greedy.initial_tag();

    for k in 0..greedy.order.len() {
        let c = greedy.order[k];
        while greedy.plan.seed_budget[c] > 0.0 && greedy.plan.tag_budget[c] > 0.0 {
            let nodes = greedy.affordable_nodes(c);
            let tags = greedy.affordable_tags(c);
            if nodes.is_empty() || tags.is_empty() {
                break;
            }
            let seeds = &greedy.selection.seeds;
            let chosen = &greedy.selection.tags;
            let base_model = objective.model(graph, chosen, config.theta)?;
            let base = objective.state(&base_model, seeds)?.value();

            let per_tag: Vec<Option<(f64, usize, usize)>> = maybe_par_iter!(&tags)
                .map(|&t| -> Result<_> {
                    let model = objective.model(graph, &with_item(chosen, t), config.theta)?;
                    let state = objective.state(&model, seeds)?;
                    let with_tag = state.value();
                    let tag_cost = instance.catalog.cost(t);
                    Ok(argmax(nodes.iter().map(|&v| {
                        let gain = with_tag + state.gain(v) - base;
                        (gain / (instance.costs.cost(v) + tag_cost), v, t)
                    })))
                })
                .collect::<Result<_>>()?;
            greedy.trace.gain_evaluations += (nodes.len() * tags.len()) as u64;

            let (delta, v, t) = argmax(per_tag.into_iter().flatten()).expect("candidates exist");
            greedy.add_seed(c, v);
            greedy.add_tag(c, t);
            greedy.trace.push(
                StepKind::Pair,
                Some(c),
                Some(v),
                Some(t),
                Some(delta),
                &greedy.plan,
            );
        }
        // Leftovers move bucket to bucket so the total never exceeds the budget.
        greedy.transfer_seed_budget(c);
        greedy.transfer_tag_budget(c);
    }
    Ok(greedy.finish())
}

/// Frequency-driven tag phase, one aggregation, then node-only greedy
/// per community.
pub fn emig_u(
    instance: Instance<'_>,
    budget: f64,
    objective: &ObjectiveKind,
    config: &SelectionConfig,
) -> Result<(CostedSelection, SelectionTrace)> {
    node_greedy(instance, budget, objective, config, None)
}

/// [`emig_u`] with each step's candidates cut to the top `k` by
/// [`prune_candidates`].
pub fn emig_u_prunn(
    instance: Instance<'_>,
    budget: f64,
    objective: &ObjectiveKind,
    config: &SelectionConfig,
    k: usize,
) -> Result<(CostedSelection, SelectionTrace)> {
    if k == 0 {
        return Err(Error::invalid("prune-k", "must be at least 1"));
    }
    node_greedy(instance, budget, objective, config, Some(k))
}

fn node_greedy(
    instance: Instance<'_>,
    budget: f64,
    objective: &ObjectiveKind,
    config: &SelectionConfig,
    prune_k: Option<usize>,
) -> Result<(CostedSelection, SelectionTrace)> {
    let mut greedy = Greedy::new(instance, budget, objective, config)?;
    greedy.initial_tag();
    for k in 0..greedy.order.len() {
        let c = greedy.order[k];
        greedy.frequency_walk(c);
        greedy.transfer_tag_budget(c);
    }

    let model = objective.model(instance.graph, &greedy.selection.tags, config.theta)?;
    let mut state = objective.state(&model, &[])?;
    for k in 0..greedy.order.len() {
        let c = greedy.order[k];
        while greedy.plan.seed_budget[c] > 0.0 {
            let mut candidates = greedy.affordable_nodes(c);
            if let Some(k) = prune_k {
                candidates = prune_candidates(
                    instance.graph,
                    &candidates,
                    &greedy.selection.seeds,
                    instance.costs,
                    k,
                );
            }
            if candidates.is_empty() {
                break;
            }
            let deltas: Vec<f64> = maybe_par_iter!(&candidates)
                .map(|&v| state.gain(v) / instance.costs.cost(v))
                .collect();
            greedy.trace.gain_evaluations += candidates.len() as u64;
            let (delta, v, _) =
                argmax(deltas.into_iter().zip(&candidates).map(|(d, &v)| (d, v, 0))).unwrap();
            state.add_seed(v);
            greedy.add_seed(c, v);
            greedy.trace.push(
                StepKind::Seed,
                Some(c),
                Some(v),
                None,
                Some(delta),
                &greedy.plan,
            );
        }
        greedy.transfer_seed_budget(c);
    }
    Ok(greedy.finish())
}

/// Ranks candidates by `(outdeg(u) - |N_in(u) ∩ S|) / cost(u)` descending
/// (ties by node id) and keeps the first `k`.
pub fn prune_candidates(
    graph: &TagGraph,
    candidates: &[usize],
    seeds: &[usize],
    costs: &NodeCosts,
    k: usize,
) -> Vec<usize> {
    let mut is_seed = vec![false; graph.node_count()];
    for &s in seeds {
        is_seed[s] = true;
    }
    let mut scored: Vec<(f64, usize)> = candidates
        .iter()
        .map(|&u| {
            let seeded_in = graph
                .in_edges(u)
                .iter()
                .filter(|&&(w, _)| is_seed[w])
                .count();
            let score = (graph.out_degree(u) as f64 - seeded_in as f64) / costs.cost(u);
            (score, u)
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    scored.into_iter().take(k).map(|(_, u)| u).collect()
}

fn take_in_order(
    items: impl IntoIterator<Item = usize>,
    cost: impl Fn(usize) -> f64,
    mut budget: f64,
    mut take: impl FnMut(usize, f64),
) {
    for item in items {
        let c = cost(item);
        if c <= budget {
            budget -= c;
            take(item, c);
        }
    }
}

fn random_picks(
    pool: usize,
    cost: impl Fn(usize) -> f64,
    mut budget: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..pool).collect();
    let mut picks = Vec::new();
    loop {
        let affordable: Vec<usize> = (0..remaining.len())
            .filter(|&i| cost(remaining[i]) <= budget)
            .collect();
        if affordable.is_empty() {
            return picks;
        }
        let i = affordable[rng.gen_range(0..affordable.len())];
        let item = remaining.remove(i);
        budget -= cost(item);
        picks.push(item);
    }
}

/// Half the budget on random affordable nodes, half on random affordable
/// tags, drawn without replacement until nothing more fits.
pub fn baseline_rn_rt(
    graph: &TagGraph,
    catalog: &TagCatalog,
    costs: &NodeCosts,
    budget: f64,
    seed: u64,
) -> CostedSelection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = budget / 2.0;
    let mut out = CostedSelection::default();
    for v in random_picks(graph.node_count(), |v| costs.cost(v), half, &mut rng) {
        out.add_seed(v, costs.cost(v));
    }
    for t in random_picks(catalog.tag_count(), |t| catalog.cost(t), half, &mut rng) {
        out.add_tag(t, catalog.cost(t));
    }
    out
}

fn by_descending<K: Ord + Copy>(
    ids: impl IntoIterator<Item = usize>,
    key: impl Fn(usize) -> K,
) -> Vec<usize> {
    let mut v: Vec<usize> = ids.into_iter().collect();
    v.sort_by(|&a, &b| key(b).cmp(&key(a)).then(a.cmp(&b)));
    v
}

/// Half the budget on nodes by descending out-degree, half on tags by
/// descending total frequency, each taken when it still fits.
pub fn baseline_hn_ht(
    graph: &TagGraph,
    catalog: &TagCatalog,
    costs: &NodeCosts,
    budget: f64,
) -> CostedSelection {
    let half = budget / 2.0;
    let mut out = CostedSelection::default();
    let nodes = by_descending(0..graph.node_count(), |u| graph.out_degree(u));
    take_in_order(nodes, |v| costs.cost(v), half, |v, c| out.add_seed(v, c));
    let totals = catalog.counts().tag_totals();
    let tags = by_descending(0..catalog.tag_count(), |t| totals[t]);
    take_in_order(tags, |t| catalog.cost(t), half, |t, c| out.add_tag(t, c));
    out
}

/// HN+HT inside each community on a size-proportional share of each
/// half, using community-local out-degree and tag frequency.
pub fn baseline_hn_ht_comm(
    graph: &TagGraph,
    catalog: &TagCatalog,
    costs: &NodeCosts,
    partition: &CommunityPartition,
    budget: f64,
) -> CostedSelection {
    let half = budget / 2.0;
    let n = graph.node_count() as f64;
    let frequencies = tag_frequency_matrix(partition, catalog.counts());
    let mut out = CostedSelection::default();
    let mut is_tag = vec![false; catalog.tag_count()];
    for &c in partition.order() {
        let share = partition.size(c) as f64 / n * half;
        let local_degree = |u: usize| {
            graph
                .out_edges(u)
                .filter(|&(v, _)| partition.community_of(v) == c)
                .count()
        };
        let nodes = by_descending(partition.members(c).iter().copied(), local_degree);
        take_in_order(
            nodes,
            |v| costs.cost(v),
            share,
            |v, cost| out.add_seed(v, cost),
        );
        let tags: Vec<usize> = frequencies
            .ranking(c)
            .iter()
            .copied()
            .filter(|&t| !is_tag[t])
            .collect();
        take_in_order(
            tags,
            |t| catalog.cost(t),
            share,
            |t, cost| {
                is_tag[t] = true;
                out.add_tag(t, cost)
            },
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "emig-ut")]
    EmigUt,
    #[serde(rename = "emig-u")]
    EmigU,
    #[serde(rename = "emig-u-prunn")]
    EmigUPrunn,
    #[serde(rename = "rn-rt")]
    RnRt,
    #[serde(rename = "hn-ht")]
    HnHt,
    #[serde(rename = "hn-ht-comm")]
    HnHtComm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::EmigUt,
        Algorithm::EmigU,
        Algorithm::EmigUPrunn,
        Algorithm::RnRt,
        Algorithm::HnHt,
        Algorithm::HnHtComm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::EmigUt => "emig-ut",
            Algorithm::EmigU => "emig-u",
            Algorithm::EmigUPrunn => "emig-u-prunn",
            Algorithm::RnRt => "rn-rt",
            Algorithm::HnHt => "hn-ht",
            Algorithm::HnHtComm => "hn-ht-comm",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::invalid("algo", format!("unknown algorithm `{name}`")))
    }

    /// Runs the algorithm; baselines return an empty trace.
    pub fn run(
        self,
        instance: Instance<'_>,
        budget: f64,
        objective: &ObjectiveKind,
        config: &SelectionConfig,
        baseline_seed: u64,
    ) -> Result<(CostedSelection, SelectionTrace)> {
        let Instance {
            graph,
            catalog,
            costs,
            partition,
        } = instance;
        let baseline = |s: CostedSelection| Ok((s, SelectionTrace::default()));
        if !(budget.is_finite() && budget > 0.0) {
            return Err(Error::invalid(
                "budget",
                format!("{budget} is not positive"),
            ));
        }
        match self {
            Algorithm::EmigUt => emig_ut(instance, budget, objective, config),
            Algorithm::EmigU => emig_u(instance, budget, objective, config),
            Algorithm::EmigUPrunn => {
                emig_u_prunn(instance, budget, objective, config, config.prune_k)
            }
            Algorithm::RnRt => {
                baseline(baseline_rn_rt(graph, catalog, costs, budget, baseline_seed))
            }
            Algorithm::HnHt => baseline(baseline_hn_ht(graph, catalog, costs, budget)),
            Algorithm::HnHtComm => baseline(baseline_hn_ht_comm(
                graph, catalog, costs, partition, budget,
            )),
        }
    }
}
