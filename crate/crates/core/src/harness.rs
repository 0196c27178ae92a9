//! Experiment orchestration: input preparation, cost and benefit
//! generation, budget and alpha sweeps, and CSV / plot-data output.

pub mod synth;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::community::{tag_frequency_matrix, CommunityDetector, CommunityPartition, Louvain};
use crate::diffusion::DEFAULT_THETA;

use crate::graph::{NodeCosts, TagCatalog, TagGraph, TargetProfile, UserTagCounts};
use crate::io::Dataset;
use crate::prob::ProbabilitySetting;
use crate::selection::{
    Algorithm, Instance, ObjectiveKind, SelectionConfig, DEFAULT_ALPHA, DEFAULT_PRUNE_K,
};
use crate::{Error, Result};

pub use synth::SynthConfig;

pub const SCHEMA_LINE: &str = "# tagim-results v1";
pub const CSV_HEADER: &str =
    "algo,budget,objective,value,n_seeds,n_tags,spend_seed,spend_tag,seconds";
pub const BUDGET_GRID: [f64; 8] = [
    1000.0, 2000.0, 3000.0, 4000.0, 5000.0, 6000.0, 7000.0, 8000.0,
];
pub const ALPHA_GRID: [f64; 4] = [0.0, 0.25, 0.5, 0.75];
pub const NODE_COST_RANGE: (f64, f64) = (50.0, 100.0);
pub const TAG_COST_RANGE: (f64, f64) = (25.0, 50.0);
pub const BENEFIT_RANGE: (f64, f64) = (50.0, 100.0);
pub const DEFAULT_TAG_CAP: usize = 1000;
/// Float slack allowed when checking spend against a budget.
pub const SPEND_SLACK: f64 = 1e-6;

/// Node costs on [50, 100] and tag costs on [25, 50], nodes drawn first.
pub fn generate_costs(node_count: usize, tag_count: usize, seed: u64) -> (NodeCosts, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nl, nh) = NODE_COST_RANGE;
    let (tl, th) = TAG_COST_RANGE;
    let nodes = (0..node_count).map(|_| rng.gen_range(nl..=nh)).collect();
    let tags = (0..tag_count).map(|_| rng.gen_range(tl..=th)).collect();
    (NodeCosts::new(nodes).expect("costs are positive"), tags)
}

/// Users holding at least one of `target_tags`, with zero benefit.
pub fn derive_targets(counts: &UserTagCounts, target_tags: &[usize]) -> Result<TargetProfile> {
    for &t in target_tags {
        if t >= counts.tag_count() {
            return Err(Error::UnknownTag {
                tag: t,
                tag_count: counts.tag_count(),
            });
        }
    }
    let members = (0..counts.user_count())
        .filter(|&u| target_tags.iter().any(|&t| counts.get(u, t) > 0))
        .map(|u| (u, 0.0));
    TargetProfile::new(counts.user_count(), members)
}

/// Benefit of each target `v`: `b'(v) = sum over target tags t and
/// out-neighbours u of M[u][t]`, min-max scaled onto [50, 100].
///
/// A target that neither holds a target tag itself nor has an
/// out-neighbour holding one earns 0 and is left out of the scaling. If
/// all eligible raw values coincide they all get 75.
pub fn assign_benefits(
    graph: &TagGraph,
    counts: &UserTagCounts,
    targets: &TargetProfile,
    target_tags: &[usize],
) -> Result<TargetProfile> {
    let holds = |u: usize| target_tags.iter().any(|&t| counts.get(u, t) > 0);
    let raw: Vec<(usize, Option<f64>)> = targets
        .members()
        .iter()
        .map(|&v| {
            let eligible = holds(v) || graph.out_edges(v).any(|(u, _)| holds(u));
            let b = eligible.then(|| {
                graph
                    .out_edges(v)
                    .map(|(u, _)| target_tags.iter().map(|&t| counts.get(u, t)).sum::<u64>())
                    .sum::<u64>() as f64
            });
            (v, b)
        })
        .collect();
    let eligible = raw.iter().filter_map(|&(_, b)| b);
    let lo = eligible.clone().fold(f64::INFINITY, f64::min);
    let hi = eligible.fold(f64::NEG_INFINITY, f64::max);
    let (bl, bh) = BENEFIT_RANGE;
    let scale = |b: f64| {
        if hi > lo {
            bl + (b - lo) / (hi - lo) * (bh - bl)
        } else {
            (bl + bh) / 2.0
        }
    };
    TargetProfile::new(
        graph.node_count(),
        raw.into_iter().map(|(v, b)| (v, b.map_or(0.0, scale))),
    )
}

/// The tags to keep: community rankings are interleaved round-robin (rank
/// 0 of every community, then rank 1, ...), skipping tags a community never
/// uses and tags already taken, until `cap` tags are kept. Returned in
/// ascending old-id order; `cap >= tag_count` keeps everything.
pub fn reduce_tag_universe(
    counts: &UserTagCounts,
    partition: &CommunityPartition,
    cap: usize,
) -> Vec<usize> {
    let tag_count = counts.tag_count();
    if cap >= tag_count {
        return (0..tag_count).collect();
    }
    let freq = tag_frequency_matrix(partition, counts);
    let mut kept = vec![false; tag_count];
    let mut out = Vec::with_capacity(cap);
    'rounds: for rank in 0..tag_count {
        let mut any = false;
        for c in 0..partition.len() {
            let t = freq.ranking(c)[rank];
            if freq.count(c, t) == 0 {
                continue;
            }
            any = true;
            if !kept[t] {
                kept[t] = true;
                out.push(t);
                if out.len() == cap {
                    break 'rounds;
                }
            }
        }
        if !any {
            break;
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    /// A directory written by `ingest` or `gen-synth`.
    Directory(PathBuf),
    Synthetic(SynthConfig),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Influence,
    Benefit,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Influence => "influence",
            Objective::Benefit => "benefit",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "influence" => Ok(Objective::Influence),
            "benefit" => Ok(Objective::Benefit),
            other => Err(Error::invalid(
                "objective",
                format!("`{other}` is not influence or benefit"),
            )),
        }
    }
}

/// A complete experiment configuration. Every random draw is driven by one
/// of the named seeds, so two equal specs produce identical output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub source: DataSource,
    pub prob_setting: ProbabilitySetting,
    pub theta: f64,
    pub budgets: Vec<f64>,
    pub alpha: f64,
    pub objective: Objective,
    /// External tag ids defining the target users.
    pub target_tags: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub cost_seed: u64,
    pub baseline_seed: u64,
    pub community_seed: u64,
    pub prune_k: usize,
    pub tag_cap: usize,
    /// Record wall-clock seconds; off writes 0 so reruns are byte-identical.
    pub timing: bool,
}

impl CampaignSpec {
    pub fn new(source: DataSource) -> Self {
        CampaignSpec {
            source,
            prob_setting: ProbabilitySetting::Trivalency { seed: 0 },
            theta: DEFAULT_THETA,
            budgets: BUDGET_GRID.to_vec(),
            alpha: DEFAULT_ALPHA,
            objective: Objective::Influence,
            target_tags: Vec::new(),
            algorithms: Algorithm::ALL.to_vec(),
            cost_seed: 0,
            baseline_seed: 0,
            community_seed: 0,
            prune_k: DEFAULT_PRUNE_K,
            tag_cap: DEFAULT_TAG_CAP,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budgets.iter().any(|b| !(b.is_finite() && *b > 0.0))
            || self.budgets.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::invalid(
                "budgets",
                "must be positive and strictly ascending",
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::invalid(
                "alpha",
                format!("{} is outside [0, 1]", self.alpha),
            ));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::invalid(
                "theta",
                format!("{} is outside (0, 1]", self.theta),
            ));
        }
        if self.tag_cap == 0 {
            return Err(Error::invalid("tag-cap", "must be at least 1"));
        }
        if self.prune_k == 0 {
            return Err(Error::invalid("prune-k", "must be at least 1"));
        }
        if self.objective == Objective::Benefit && self.target_tags.is_empty() {
            return Err(Error::invalid(
                "target-tags",
                "benefit objective needs target tags",
            ));
        }
        Ok(())
    }

    pub fn selection_config(&self) -> SelectionConfig {
        SelectionConfig {
            theta: self.theta,
            alpha: self.alpha,
            prune_k: self.prune_k,
        }
    }
}

/// Selection inputs built from a spec.
#[derive(Clone, Debug)]
pub struct Prepared {
    /// Probabilities assigned, tag ids in the reduced universe.
    pub graph: TagGraph,
    pub catalog: TagCatalog,
    pub costs: NodeCosts,
    pub partition: CommunityPartition,
    /// Old tag id of every reduced tag.
    pub kept_tags: Vec<usize>,
    pub objective: ObjectiveKind,
}

impl Prepared {
    pub fn instance(&self) -> Instance<'_> {
        Instance {
            graph: &self.graph,
            catalog: &self.catalog,
            costs: &self.costs,
            partition: &self.partition,
        }
    }
}

pub fn load_source(source: &DataSource) -> Result<Dataset> {
    match source {
        DataSource::Directory(dir) => Dataset::load_dir(dir),
        DataSource::Synthetic(cfg) => Ok(synth::generate(cfg)?.0),
    }
}

/// Load, detect communities, reduce the tag universe, assign
/// probabilities, draw costs and (for benefit) derive targets.
///
/// Targets and benefits come from the full tag counts, so a target tag
/// need not survive the reduction.
pub fn prepare(spec: &CampaignSpec) -> Result<Prepared> {
    spec.validate()?;
    let data = load_source(&spec.source)?;
    prepare_dataset(spec, &data)
}

pub fn prepare_dataset(spec: &CampaignSpec, data: &Dataset) -> Result<Prepared> {
    spec.validate()?;
    let partition = Louvain::with_seed(spec.community_seed).detect(&data.graph);
    let kept_tags = reduce_tag_universe(&data.counts, &partition, spec.tag_cap);
    let counts = data.counts.restrict(&kept_tags)?;
    let topology = data.graph.restrict_tags(&kept_tags)?;
    let graph = spec.prob_setting.apply(&topology, &counts)?;
    let (costs, tag_costs) = generate_costs(graph.node_count(), kept_tags.len(), spec.cost_seed);
    let catalog = TagCatalog::new(counts, tag_costs)?;
    let objective = match spec.objective {
        Objective::Influence => ObjectiveKind::Influence,
        Objective::Benefit => {
            let tags = spec
                .target_tags
                .iter()
                .map(|&ext| {
                    data.manifest.tag_index(ext).ok_or_else(|| {
                        Error::invalid("target-tags", format!("unknown tag id {ext}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let targets = derive_targets(&data.counts, &tags)?;
            ObjectiveKind::Benefit(assign_benefits(&data.graph, &data.counts, &targets, &tags)?)
        }
    };
    Ok(Prepared {
        graph,
        catalog,
        costs,
        partition,
        kept_tags,
        objective,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub algo: Algorithm,
    pub budget: f64,
    pub objective: String,
    pub value: f64,
    pub n_seeds: usize,
    pub n_tags: usize,
    pub spend_seed: f64,
    pub spend_tag: f64,
    pub seconds: f64,
}

impl ResultRow {
    pub fn spend(&self) -> f64 {
        self.spend_seed + self.spend_tag
    }

    pub fn within_budget(&self) -> bool {
        self.spend() <= self.budget + SPEND_SLACK
    }
}

/// One row per (algorithm, budget), ordered by the spec's algorithm list
/// then by budget.
pub fn run_experiment(spec: &CampaignSpec) -> Result<Vec<ResultRow>> {
    if spec.algorithms.is_empty() {
        spec.validate()?;
        return Ok(Vec::new());
    }
    let prepared = prepare(spec)?;
    run_prepared(spec, &prepared)
}

/// [`run_experiment`] on inputs already built by [`prepare`]; only the
/// spec's algorithms, budgets, alpha, and selection settings are read.
pub fn run_prepared(spec: &CampaignSpec, prepared: &Prepared) -> Result<Vec<ResultRow>> {
    let config = spec.selection_config();
    let cells: Vec<(Algorithm, f64)> = spec
        .algorithms
        .iter()
        .flat_map(|&a| spec.budgets.iter().map(move |&b| (a, b)))
        .collect();
    maybe_par_iter!(cells)
        .map(|(algo, budget)| {
            let start = Instant::now();
            let (selection, _) = algo.run(
                prepared.instance(),
                budget,
                &prepared.objective,
                &config,
                spec.baseline_seed,
            )?;
            let seconds = if spec.timing {
                start.elapsed().as_secs_f64()
            } else {
                0.0
            };
            let value = prepared.objective.evaluate(
                &prepared.graph,
                &selection.seeds,
                &selection.tags,
                spec.theta,
            )?;
            Ok(ResultRow {
                algo,
                budget,
                objective: prepared.objective.name().to_owned(),
                value,
                n_seeds: selection.seeds.len(),
                n_tags: selection.tags.len(),
                spend_seed: selection.seed_spend,
                spend_tag: selection.tag_spend,
                seconds,
            })
        })
        .collect()
}

/// Benefit runs for each alpha with every seed held fixed.
pub fn alpha_sweep(spec: &CampaignSpec, alphas: &[f64]) -> Result<Vec<(f64, Vec<ResultRow>)>> {
    if spec.objective != Objective::Benefit {
        return Err(Error::invalid(
            "objective",
            "alpha sweep needs the benefit objective",
        ));
    }
    let prepared = prepare(spec)?;
    alphas
        .iter()
        .map(|&alpha| {
            let spec = CampaignSpec {
                alpha,
                ..spec.clone()
            };
            spec.validate()?;
            Ok((alpha, run_prepared(&spec, &prepared)?))
        })
        .collect()
}

/// Shortest round-trip formatting, as `f64::to_string` gives.
fn fmt(x: f64) -> String {
    x.to_string()
}

pub fn write_results_csv(mut out: impl Write, rows: &[ResultRow]) -> std::io::Result<()> {
    writeln!(out, "{SCHEMA_LINE}")?;
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.algo.name(),
            fmt(r.budget),
            r.objective,
            fmt(r.value),
            r.n_seeds,
            r.n_tags,
            fmt(r.spend_seed),
            fmt(r.spend_tag),
            fmt(r.seconds)
        )?;
    }
    Ok(())
}

pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_results_csv(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Parses what [`write_results_csv`] wrote.
pub fn read_results_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines();
    let bad = |line: usize, msg: String| Error::Parse {
        path: PathBuf::from("<results>"),
        line,
        msg,
    };
    if lines.next() != Some(SCHEMA_LINE) {
        return Err(bad(1, format!("expected `{SCHEMA_LINE}`")));
    }
    if lines.next() != Some(CSV_HEADER) {
        return Err(bad(2, "unexpected header".into()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 9 {
                return Err(bad(i + 3, format!("{} fields", f.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| bad(i + 3, e.to_string()));
            let int = |s: &str| s.parse::<usize>().map_err(|e| bad(i + 3, e.to_string()));
            Ok(ResultRow {
                algo: Algorithm::parse(f[0])?,
                budget: num(f[1])?,
                objective: f[2].to_owned(),
                value: num(f[3])?,
                n_seeds: int(f[4])?,
                n_tags: int(f[5])?,
                spend_seed: num(f[6])?,
                spend_tag: num(f[7])?,
                seconds: num(f[8])?,
            })
        })
        .collect()
}

/// Plot data: one line per budget, one column per algorithm.
pub fn plot_table(rows: &[ResultRow]) -> String {
    let mut algos: Vec<Algorithm> = Vec::new();
    let mut budgets: Vec<f64> = Vec::new();
    for r in rows {
        if !algos.contains(&r.algo) {
            algos.push(r.algo);
        }
        if !budgets.contains(&r.budget) {
            budgets.push(r.budget);
        }
    }
    budgets.sort_by(f64::total_cmp);
    let mut out = String::from("budget");
    for a in &algos {
        out.push(',');
        out.push_str(a.name());
    }
    out.push('\n');
    for &b in &budgets {
        out.push_str(&fmt(b));
        for &a in &algos {
            out.push(',');
            if let Some(r) = rows.iter().find(|r| r.algo == a && r.budget == b) {
                out.push_str(&fmt(r.value));
            }
        }
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes `<stem>.csv` and `plot_<objective><suffix>.csv` into `dir`;
/// returns both paths.
pub fn write_outputs(
    dir: &Path,
    stem: &str,
    suffix: &str,
    rows: &[ResultRow],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_owned(),
        source,
    })?;
    let results = dir.join(format!("{stem}.csv"));
    write_file(&results, &results_csv(rows))?;
    let objective = rows.first().map_or("influence", |r| r.objective.as_str());
    let plot = dir.join(format!("plot_{objective}{suffix}.csv"));
    write_file(&plot, &plot_table(rows))?;
    Ok(vec![results, plot])
}

/// File-name tag of an alpha value: 0.25 becomes `alpha025`.
pub fn alpha_label(alpha: f64) -> String {
    format!("alpha{:03}", (alpha * 100.0).round() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::community_priority;

    #[test]
    fn cost_bounds_and_determinism() {
        let (a, ta) = generate_costs(5000, 5000, 9);
        let (b, tb) = generate_costs(5000, 5000, 9);
        assert_eq!(a, b);
        assert_eq!(ta, tb);
        assert!(a.as_slice().iter().all(|c| (50.0..=100.0).contains(c)));
        assert!(ta.iter().all(|c| (25.0..=50.0).contains(c)));
        let lo = a.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
        assert!(lo < 50.1);
    }

    fn star() -> (TagGraph, UserTagCounts) {
        // 0 -> 1..=4; tag 0 targeted, tag 1 not
        let g = TagGraph::from_edges(5, 2, (1..5).map(|v| (0, v)).collect()).unwrap();
        let counts = UserTagCounts::from_triples(
            5,
            2,
            vec![(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 1, 7), (4, 0, 1)],
        )
        .unwrap();
        (g, counts)
    }

    #[test]
    fn targets_from_tags() {
        let (_, counts) = star();
        let t = derive_targets(&counts, &[0]).unwrap();
        assert_eq!(t.members(), &[0, 1, 2, 4]);
        assert!(derive_targets(&counts, &[]).unwrap().is_empty());
        assert!(derive_targets(&counts, &[2]).is_err());
    }

    #[test]
    fn star_benefits_by_hand() {
        let (g, counts) = star();
        let t = derive_targets(&counts, &[0]).unwrap();
        let b = assign_benefits(&g, &counts, &t, &[0]).unwrap();
        // raw: node 0 -> 2 + 3 + 0 + 1 = 6, leaves -> 0
        assert_eq!(b.benefit(0), 100.0);
        assert_eq!(b.benefit(1), 50.0);
        assert_eq!(b.benefit(4), 50.0);
        assert_eq!(b.benefit(3), 0.0);
    }

    #[test]
    fn degenerate_and_ineligible_benefits() {
        let (g, counts) = star();
        let leaves = TargetProfile::new(5, vec![(1, 0.0), (2, 0.0), (3, 0.0)]).unwrap();
        let b = assign_benefits(&g, &counts, &leaves, &[0]).unwrap();
        assert_eq!(b.benefit(1), 75.0);
        assert_eq!(b.benefit(2), 75.0);
        // node 3 only holds the untargeted tag and has no out-neighbours
        assert_eq!(b.benefit(3), 0.0);
        assert!(b.contains(3));
    }

    #[test]
    fn tag_reduction() {
        let counts = UserTagCounts::from_triples(
            4,
            5,
            vec![
                (0, 4, 9),
                (0, 3, 5),
                (1, 1, 2),
                (2, 2, 8),
                (2, 0, 6),
                (3, 0, 1),
            ],
        )
        .unwrap();
        let two = CommunityPartition::from_assignment(&[0, 0, 1, 1]);
        assert_eq!(reduce_tag_universe(&counts, &two, 5), vec![0, 1, 2, 3, 4]);
        // rank 0: tag 4 for community 0, tag 2 for community 1
        assert_eq!(reduce_tag_universe(&counts, &two, 2), vec![2, 4]);
        assert_eq!(reduce_tag_universe(&counts, &two, 3), vec![2, 3, 4]);
        let one = CommunityPartition::single(4);
        assert_eq!(reduce_tag_universe(&counts, &one, 2), vec![2, 4]);
    }

    fn small_spec() -> CampaignSpec {
        let mut spec = CampaignSpec::new(DataSource::Synthetic(SynthConfig {
            nodes: 60,
            communities: 2,
            tags: 12,
            ..Default::default()
        }));
        spec.budgets = vec![300.0, 600.0];
        spec
    }

    #[test]
    fn experiment_rows_and_bytes() {
        let spec = small_spec();
        let rows = run_experiment(&spec).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows.iter().all(ResultRow::within_budget));
        let csv = results_csv(&rows);
        assert_eq!(csv, results_csv(&run_experiment(&spec).unwrap()));
        assert_eq!(read_results_csv(&csv).unwrap(), rows);
        let none = CampaignSpec {
            algorithms: vec![],
            ..spec
        };
        assert!(run_experiment(&none).unwrap().is_empty());
    }

    #[test]
    fn spec_validation_names_fields() {
        let mut spec = small_spec();
        spec.budgets = vec![500.0, 100.0];
        assert!(
            matches!(spec.validate(), Err(Error::InvalidParameter { field, .. }) if field == "budgets")
        );
        let mut spec = small_spec();
        spec.alpha = 2.0;
        assert!(
            matches!(spec.validate(), Err(Error::InvalidParameter { field, .. }) if field == "alpha")
        );
        let spec = CampaignSpec::new(DataSource::Directory("/nonexistent/tagim".into()));
        match prepare(&spec) {
            Err(Error::Io { path, .. }) => assert!(path.starts_with("/nonexistent/tagim")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn alpha_one_plan_is_cost_share() {
        let mut spec = small_spec();
        spec.objective = Objective::Benefit;
        spec.target_tags = vec![0, 1, 2];
        let p = prepare(&spec).unwrap();
        let ObjectiveKind::Benefit(targets) = &p.objective else {
            unreachable!()
        };
        let pi = community_priority(&p.partition, &p.costs, targets, 1.0).unwrap();
        let total = p.costs.total();
        for (c, share) in pi.iter().enumerate() {
            let cost: f64 = p
                .partition
                .members(c)
                .iter()
                .map(|&u| p.costs.cost(u))
                .sum();
            assert!((share - cost / total).abs() < 1e-12);
        }
        let sweep = alpha_sweep(&spec, &[0.5]).unwrap();
        spec.alpha = 0.5;
        assert_eq!(sweep[0].1, run_experiment(&spec).unwrap());
    }

    #[test]
    fn plot_table_layout() {
        let row = |algo, budget, value| ResultRow {
            algo,
            budget,
            objective: "influence".into(),
            value,
            n_seeds: 0,
            n_tags: 0,
            spend_seed: 0.0,
            spend_tag: 0.0,
            seconds: 0.0,
        };
        let rows = vec![
            row(Algorithm::EmigU, 1000.0, 3.5),
            row(Algorithm::EmigU, 2000.0, 4.0),
            row(Algorithm::RnRt, 1000.0, 1.0),
            row(Algorithm::RnRt, 2000.0, 2.25),
        ];
        assert_eq!(
            plot_table(&rows),
            "budget,emig-u,rn-rt\n1000,3.5,1\n2000,4,2.25\n"
        );
        assert_eq!(alpha_label(0.25), "alpha025");
        assert_eq!(alpha_label(0.0), "alpha000");
    }
}
