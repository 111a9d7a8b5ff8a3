//! Command-line surface: `pd`, `features`, `evaluate` and `split`.
//!
//! Data goes to `--output` (or stdout); progress goes to stderr.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::features::FeatureExtractor;
use crate::graph::{induce, khop_neighborhood, load_edge_list, Graph};
use crate::persistence::{get_pd, PdConfig};
use crate::ranking::{evaluate, holdout_split, Method, PoolPolicy, RankingParams};

#[derive(Debug, Parser)]
#[command(name = "phlink", version, about = "Persistent-homology link prediction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the 0-dimensional persistence diagram of a graph.
    Pd(PdArgs),
    /// Print the eight-distance feature vector of one node pair.
    Features(FeatureArgs),
    /// Hold out edges, rank targets with each method and report Hits@N.
    Evaluate(RunConfig),
    /// Write a reproducible train/test edge split.
    Split(SplitArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Edge-list file: `src dst [weight]` per line, `#`/`%` comments.
    #[arg(long)]
    pub input: PathBuf,
    /// Treat edges as directed.
    #[arg(long)]
    pub directed: bool,
    /// Read a third column as the edge weight.
    #[arg(long)]
    pub weighted: bool,
}

impl GraphArgs {
    pub fn load(&self) -> Result<Graph> {
        let file = File::open(&self.input).map_err(|source| Error::Io {
            path: self.input.clone(),
            source,
        })?;
        let load = load_edge_list(BufReader::new(file), self.directed, self.weighted)?;
        eprintln!(
            "loaded {}: {} nodes, {} edges ({} duplicate edges, {} self-loops dropped)",
            self.input.display(),
            load.graph.node_count(),
            load.graph.edge_count(),
            load.duplicate_edges,
            load.self_loops
        );
        Ok(load.graph)
    }
}

fn pd_config(tau: Option<f64>) -> Result<PdConfig> {
    match tau {
        None => Ok(PdConfig::default()),
        Some(t) if t.is_finite() && t > 0.0 => Ok(PdConfig::fixed(t)),
        Some(t) => Err(Error::invalid(format!("--tau must be positive, got {t}"))),
    }
}

#[derive(Debug, Clone, Args)]
pub struct PdArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Persistence threshold; defaults to 1.5 times the unreachability sentinel.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Restrict to the k-hop neighborhood of this node.
    #[arg(long)]
    pub center: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Emit `[[birth, death], ...]` instead of one pair per line.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FeatureArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Source node label.
    pub u: String,
    /// Target node label.
    pub v: String,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parameters of an evaluation run.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Neighborhood radius.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Fixed persistence threshold for every diagram.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub test_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated subset of aa, mw, topology.
    #[arg(long, value_delimiter = ',', default_value = "aa,mw,topology")]
    pub methods: Vec<Method>,
    /// Comma-separated Hits@N cut-offs.
    #[arg(long, value_delimiter = ',', default_value = "1,10,50")]
    pub hits: Vec<usize>,
    /// Candidate pool: all nodes, or nodes within 2k hops of the source.
    #[arg(long, default_value = "all")]
    pub pool: PoolPolicy,
    /// Exclude targets already adjacent to the source in the training graph.
    #[arg(long)]
    pub filtered: bool,
    /// Worker threads; defaults to the number of available cores.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// Checks ranges and normalizes the cut-off list to ascending order.
    pub fn validate(&mut self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("--k must be at least 1"));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::invalid(format!(
                "--test-fraction must lie in (0, 1), got {}",
                self.test_fraction
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::invalid("--methods must name at least one method"));
        }
        if self.hits.is_empty() || self.hits.contains(&0) {
            return Err(Error::invalid("--hits must be positive integers"));
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("--workers must be at least 1"));
        }
        self.hits.sort_unstable();
        self.hits.dedup();
        let mut seen = Vec::new();
        self.methods.retain(|m| {
            let fresh = !seen.contains(m);
            seen.push(*m);
            fresh
        });
        Ok(())
    }

    pub fn params(&self) -> Result<RankingParams> {
        Ok(RankingParams {
            k: self.k,
            pd: pd_config(self.tau)?,
            pool: self.pool,
            filtered: self.filtered,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SplitArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 0.05)]
    pub test_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where to write the held-out edges (stdout if omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Where to write the training edges.
    #[arg(long)]
    pub train: Option<PathBuf>,
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_all(path: Option<&Path>, text: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    };
    let mut out = open_output(path)?;
    out.write_all(text.as_bytes()).map_err(io_err)?;
    out.flush().map_err(io_err)
}

pub fn cmd_pd(args: &PdArgs) -> Result<()> {
    let cfg = pd_config(args.tau)?;
    let g = args.graph.load()?;
    let g = match &args.center {
        Some(label) => {
            let ball = khop_neighborhood(&g, g.node(label)?, args.k)?;
            induce(&g, &ball)?
        }
        None => g,
    };
    let pd = get_pd(&g, &cfg)?;
    let text = if args.json {
        let mut s = serde_json::to_string(&pd).expect("diagram serializes");
        s.push('\n');
        s
    } else {
        pd.to_text()
    };
    write_all(args.output.as_deref(), &text)
}

pub fn cmd_features(args: &FeatureArgs) -> Result<()> {
    let cfg = pd_config(args.tau)?;
    let g = args.graph.load()?;
    let (u, v) = (g.node(&args.u)?, g.node(&args.v)?);
    let f = FeatureExtractor::new(&g, args.k, cfg)?.compute(u, v)?;
    let mut line = serde_json::to_string(&f.record(&g)).expect("record serializes");
    line.push('\n');
    write_all(args.output.as_deref(), &line)
}

pub fn cmd_evaluate(config: &RunConfig) -> Result<()> {
    let mut config = config.clone();
    config.validate()?;
    let params = config.params()?;
    let g = config.graph.load()?;
    let split = holdout_split(&g, config.test_fraction, config.seed)?;
    eprintln!(
        "split: {} test edges, {} training edges (seed {})",
        split.test_edges.len(),
        split.train.edge_count(),
        config.seed
    );
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = config.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let reports = pool.install(|| evaluate(&split, &config.methods, params, &config.hits))?;
    let mut text = String::new();
    for r in &reports {
        eprintln!("{}: hits {:?}", r.method, r.hits);
        text.push_str(&serde_json::to_string(r).expect("report serializes"));
        text.push('\n');
    }
    write_all(config.output.as_deref(), &text)
}

fn edge_lines<'a>(g: &Graph, edges: impl IntoIterator<Item = &'a crate::graph::Edge>, weighted: bool) -> String {
    let mut s = String::new();
    for e in edges {
        s.push_str(g.label(e.src));
        s.push(' ');
        s.push_str(g.label(e.dst));
        if weighted {
            s.push(' ');
            s.push_str(&e.weight.to_string());
        }
        s.push('\n');
    }
    s
}

pub fn cmd_split(args: &SplitArgs) -> Result<()> {
    let g = args.graph.load()?;
    let split = holdout_split(&g, args.test_fraction, args.seed)?;
    let weighted = args.graph.weighted;
    if let Some(path) = &args.train {
        write_all(Some(path), &edge_lines(&g, split.train.edges(), weighted))?;
    }
    write_all(args.output.as_deref(), &edge_lines(&g, &split.test_edges, weighted))
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Pd(args) => cmd_pd(args),
        Command::Features(args) => cmd_features(args),
        Command::Evaluate(config) => cmd_evaluate(config),
        Command::Split(args) => cmd_split(args),
    }
}
