//! `tagim` command line: dataset ingestion, synthetic generation, single
//! selections, evaluation and budget / alpha sweeps.
//!
//! Every flag can also come from `--config FILE`, a flat `key = value` file
//! whose keys are flag names without the leading dashes. Flags given on the
//! command line win over the file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use tagim::diffusion::DEFAULT_THETA;
use tagim::graph::TagGraph;
use tagim::harness::{
    alpha_label, prepare_dataset, run_prepared, synth, write_outputs, CampaignSpec, DataSource,
    Objective, Prepared, SynthConfig, ALPHA_GRID, BUDGET_GRID, DEFAULT_TAG_CAP,
};
use tagim::io::{
    read_edges, read_probs, read_tag_assignments, read_tag_counts, write_probs, Dataset,
};
use tagim::prob::ProbabilitySetting;
use tagim::selection::{Algorithm, DEFAULT_ALPHA, DEFAULT_PRUNE_K};

#[derive(Parser)]
#[command(
    name = "tagim",
    version,
    about = "Tag-aware budgeted influence and benefit maximization"
)]
struct Cli {
    /// Flat `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert raw edge and tag files into a dataset directory.
    Ingest(IngestArgs),
    /// Write a planted-partition synthetic dataset directory.
    GenSynth(GenSynthArgs),
    /// Run one algorithm at one budget and print the selection as JSON.
    Select(SelectArgs),
    /// Evaluate a given seed and tag set.
    Eval(EvalArgs),
    /// Run algorithms over a budget grid and write result and plot CSVs.
    Sweep(SweepArgs),
    /// Run the benefit objective over several alpha values.
    AlphaSweep(AlphaSweepArgs),
}

#[derive(Args)]
#[command(args_override_self = true)]
struct IngestArgs {
    /// Edge list, two id columns (HetRec `user_friends.dat`).
    #[arg(long)]
    edges: PathBuf,
    /// Tag file: an assignment log with `userID` and `tagID` columns, or
    /// `user tag count` rows with `--tag-format counts`.
    #[arg(long)]
    tags: PathBuf,
    #[arg(long, default_value = "assignments", value_parser = ["assignments", "counts"])]
    tag_format: String,
    /// Treat every edge as a friendship and add both directions.
    #[arg(long)]
    undirected: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct GenSynthArgs {
    #[arg(long, default_value_t = 500)]
    nodes: usize,
    #[arg(long, default_value_t = 5)]
    communities: usize,
    #[arg(long, default_value_t = 100)]
    tag_count: usize,
    #[arg(long, default_value_t = 1.5)]
    mean_out_degree: f64,
    #[arg(long, default_value_t = 0.1)]
    mixing: f64,
    #[arg(long, default_value_t = 2.0)]
    activity_shape: f64,
    #[arg(long, default_value_t = 8)]
    tags_per_user: usize,
    #[arg(long, default_value_t = 1.0)]
    zipf_exponent: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ModelArgs {
    /// Dataset directory written by `ingest` or `gen-synth`.
    #[arg(long)]
    data: PathBuf,
    /// trivalency, count or wc.
    #[arg(long, default_value = "trivalency")]
    prob_setting: String,
    #[arg(long, default_value_t = 0)]
    prob_seed: u64,
    /// Replace assigned probabilities with a `src dst tag p` file over the
    /// reduced tag ids (as written by `select --write-probs`).
    #[arg(long)]
    prob_file: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: f64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// influence or benefit.
    #[arg(long, default_value = "influence")]
    objective: String,
    /// External tag ids defining the target users (benefit objective).
    #[arg(long, value_delimiter = ',')]
    target_tags: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    cost_seed: u64,
    #[arg(long, default_value_t = 0)]
    community_seed: u64,
    #[arg(long, default_value_t = 0)]
    baseline_seed: u64,
    #[arg(long, default_value_t = DEFAULT_PRUNE_K)]
    prune_k: usize,
    #[arg(long, default_value_t = DEFAULT_TAG_CAP)]
    tag_cap: usize,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct SelectArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value = "emig-u")]
    algo: String,
    #[arg(long)]
    budget: f64,
    /// Write the step trace as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the probabilities used (reduced tag ids) for later replay.
    #[arg(long)]
    write_probs: Option<PathBuf>,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// External user ids.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    /// External tag ids.
    #[arg(long = "tag-ids", value_delimiter = ',')]
    tag_ids: Vec<u64>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, value_delimiter = ',', default_values_t = BUDGET_GRID)]
    budgets: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = Algorithm::ALL.map(|a| a.name().to_owned()))]
    algos: Vec<String>,
    #[arg(long)]
    out: PathBuf,
    /// Record selection wall-clock seconds (otherwise 0, for byte-stable output).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct AlphaSweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_delimiter = ',', default_values_t = ALPHA_GRID)]
    alphas: Vec<f64>,
}

/// Turns `key = value` lines into `--key value` arguments.
fn config_args(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut args = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected `key = value`", path.display(), i + 1);
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        match value {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            _ => {
                args.push(format!("--{key}"));
                args.push(value.to_owned());
            }
        }
    }
    Ok(args)
}

/// Splices config-file flags in right after the subcommand name so that
/// later command-line flags override them.
fn expand_argv(argv: Vec<String>) -> Result<Vec<String>> {
    let config = argv
        .iter()
        .position(|a| a == "--config")
        .and_then(|i| argv.get(i + 1).cloned())
        .or_else(|| {
            argv.iter()
                .find_map(|a| a.strip_prefix("--config=").map(str::to_owned))
        });
    let Some(path) = config else {
        return Ok(argv);
    };
    let sub = argv
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-') && a != &path)
        .map(|i| i + 1);
    let Some(sub) = sub else {
        return Ok(argv);
    };
    let mut out = argv[..=sub].to_vec();
    out.extend(config_args(Path::new(&path))?);
    out.extend(argv[sub + 1..].iter().cloned());
    Ok(out)
}

impl ModelArgs {
    fn spec(&self) -> Result<CampaignSpec> {
        let mut spec = CampaignSpec::new(DataSource::Directory(self.data.clone()));
        spec.prob_setting = ProbabilitySetting::parse(&self.prob_setting, self.prob_seed)?;
        spec.theta = self.theta;
        spec.alpha = self.alpha;
        spec.objective = Objective::parse(&self.objective)?;
        spec.target_tags = self.target_tags.clone();
        spec.cost_seed = self.cost_seed;
        spec.community_seed = self.community_seed;
        spec.baseline_seed = self.baseline_seed;
        spec.prune_k = self.prune_k;
        spec.tag_cap = self.tag_cap;
        Ok(spec)
    }

    fn load(&self, spec: &CampaignSpec) -> Result<(Dataset, Prepared)> {
        let data = Dataset::load_dir(&self.data)
            .with_context(|| format!("loading dataset {}", self.data.display()))?;
        let mut prepared = prepare_dataset(spec, &data)?;
        if let Some(path) = &self.prob_file {
            let g = &prepared.graph;
            prepared.graph = TagGraph::load(
                g.node_count(),
                g.tag_count(),
                g.edges().to_vec(),
                read_probs(path)?,
            )?;
        }
        Ok((data, prepared))
    }
}

fn external_tags(data: &Dataset, prepared: &Prepared, tags: &[usize]) -> Vec<u64> {
    tags.iter()
        .map(|&t| data.manifest.tags[prepared.kept_tags[t]])
        .collect()
}

fn external_users(data: &Dataset, users: &[usize]) -> Vec<u64> {
    users.iter().map(|&u| data.manifest.users[u]).collect()
}

fn ingest(args: &IngestArgs) -> Result<()> {
    let edges = read_edges(&args.edges)?;
    let tags = if args.tag_format == "counts" {
        read_tag_counts(&args.tags)?
    } else {
        read_tag_assignments(&args.tags)?
    };
    let data = Dataset::from_raw(&edges, &tags, args.undirected)?;
    data.save_dir(&args.out)?;
    println!(
        "{}",
        json!({
            "users": data.graph.node_count(),
            "edges": data.graph.edge_count(),
            "tags": data.graph.tag_count(),
            "out": args.out,
        })
    );
    Ok(())
}

fn gen_synth(args: &GenSynthArgs) -> Result<()> {
    let config = SynthConfig {
        nodes: args.nodes,
        communities: args.communities,
        tags: args.tag_count,
        mean_out_degree: args.mean_out_degree,
        mixing: args.mixing,
        activity_shape: args.activity_shape,
        tags_per_user: args.tags_per_user,
        zipf_exponent: args.zipf_exponent,
        seed: args.seed,
    };
    let (data, _) = synth::generate(&config)?;
    data.save_dir(&args.out)?;
    println!(
        "{}",
        json!({
            "users": data.graph.node_count(),
            "edges": data.graph.edge_count(),
            "tags": data.graph.tag_count(),
            "out": args.out,
        })
    );
    Ok(())
}

fn select(args: &SelectArgs) -> Result<()> {
    let spec = args.model.spec()?;
    let (data, prepared) = args.model.load(&spec)?;
    let algo = Algorithm::parse(&args.algo)?;
    let (sel, trace) = algo.run(
        prepared.instance(),
        args.budget,
        &prepared.objective,
        &spec.selection_config(),
        spec.baseline_seed,
    )?;
    let value = prepared
        .objective
        .evaluate(&prepared.graph, &sel.seeds, &sel.tags, spec.theta)?;
    if let Some(path) = &args.trace {
        fs::write(path, trace.to_json_lines())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.write_probs {
        write_probs(path, &prepared.graph)?;
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "algo": algo.name(),
            "budget": args.budget,
            "objective": prepared.objective.name(),
            "value": value,
            "seeds": external_users(&data, &sel.seeds),
            "tags": external_tags(&data, &prepared, &sel.tags),
            "seed_spend": sel.seed_spend,
            "tag_spend": sel.tag_spend,
            "gain_evaluations": trace.gain_evaluations,
        }))?
    );
    Ok(())
}

fn eval(args: &EvalArgs) -> Result<()> {
    let spec = args.model.spec()?;
    let (data, prepared) = args.model.load(&spec)?;
    let seeds = args
        .seeds
        .iter()
        .map(|&ext| {
            data.manifest
                .users
                .binary_search(&ext)
                .map_err(|_| anyhow::anyhow!("unknown user id {ext}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let tags = args
        .tag_ids
        .iter()
        .map(|&ext| {
            let old = data
                .manifest
                .tag_index(ext)
                .ok_or_else(|| anyhow::anyhow!("unknown tag id {ext}"))?;
            prepared
                .kept_tags
                .binary_search(&old)
                .map_err(|_| anyhow::anyhow!("tag {ext} is outside the reduced tag universe"))
        })
        .collect::<Result<Vec<_>>>()?;
    let value = prepared
        .objective
        .evaluate(&prepared.graph, &seeds, &tags, spec.theta)?;
    println!(
        "{}",
        json!({ "objective": prepared.objective.name(), "value": value })
    );
    Ok(())
}

fn grid_spec(model: &ModelArgs, grid: &GridArgs) -> Result<CampaignSpec> {
    let mut spec = model.spec()?;
    spec.budgets = grid.budgets.clone();
    spec.algorithms = grid
        .algos
        .iter()
        .map(|a| Algorithm::parse(a))
        .collect::<tagim::Result<_>>()?;
    spec.timing = grid.timing;
    spec.validate()?;
    Ok(spec)
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let spec = grid_spec(&args.model, &args.grid)?;
    let (_, prepared) = args.model.load(&spec)?;
    let rows = run_prepared(&spec, &prepared)?;
    print_paths(&write_outputs(&args.grid.out, "results", "", &rows)?);
    Ok(())
}

fn alpha_sweep(args: &AlphaSweepArgs) -> Result<()> {
    let mut spec = grid_spec(&args.model, &args.grid)?;
    if spec.objective != Objective::Benefit {
        spec.objective = Objective::Benefit;
        spec.validate()?;
    }
    let (_, prepared) = args.model.load(&spec)?;
    for &alpha in &args.alphas {
        let spec = CampaignSpec {
            alpha,
            ..spec.clone()
        };
        spec.validate()?;
        let rows = run_prepared(&spec, &prepared)?;
        let label = alpha_label(alpha);
        print_paths(&write_outputs(
            &args.grid.out,
            &format!("results_{label}"),
            &format!("_{label}"),
            &rows,
        )?);
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse_from(expand_argv(std::env::args().collect())?);
    match &cli.command {
        Command::Ingest(a) => ingest(a),
        Command::GenSynth(a) => gen_synth(a),
        Command::Select(a) => select(a),
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => sweep(a),
        Command::AlphaSweep(a) => alpha_sweep(a),
    }
}
