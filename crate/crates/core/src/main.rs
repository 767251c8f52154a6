use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use pcs::bench::{format_table, run_bench, BenchConfig, Sweep};
use pcs::query::{
    oracle, query_advanced, query_basic, query_incre, Algorithm, ResultSet, Strategy,
    ORACLE_BOUND_ENV,
};
use pcs::synth::{generate, GenConfig};
use pcs::{codec, fixture, metrics, CpIndex, GpTree, PTree, PcsError, ProfiledGraph, VertexId};

/// Writes to stdout; a closed pipe (`pcs ... | head`) ends the process quietly.
fn emit(args: std::fmt::Arguments) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

macro_rules! out {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

macro_rules! outln {
    ($($arg:tt)*) => { emit(format_args!("{}\n", format_args!($($arg)*))) };
}

#[derive(Debug, Parser)]
#[command(name = "pcs", version, about = "Profiled community search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a CP-tree index and write it to `--out`.
    BuildIndex {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: PathBuf,
        /// Share CL-trees between labels with identical vertex sets.
        #[arg(long)]
        compress: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find the profiled communities of a query vertex.
    Query {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value = "adv-p", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        /// Also write the structured result here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate a seeded synthetic profiled graph.
    Gen {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 5000)]
        m: usize,
        #[arg(long, default_value_t = pcs::synth::CCS_LABELS)]
        labels: usize,
        #[arg(long, default_value_t = pcs::synth::CCS_DEPTH)]
        depth: u32,
        /// Distinct tokens per vertex.
        #[arg(long, default_value_t = 8)]
        tokens: usize,
        #[arg(long, default_value_t = 5000)]
        vocab: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "graph")]
        stem: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Quality metrics of a stored query result.
    Metrics {
        #[command(flatten)]
        input: Input,
        /// Structured output of `query`.
        #[arg(long)]
        result: PathBuf,
        /// A second result to compare against for LDR.
        #[arg(long)]
        other: Option<PathBuf>,
        /// Ground-truth circles, one per line.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Index-build and query sweeps over fractions of the input and over k.
    Bench {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 6)]
        k: u32,
        #[arg(long = "ks", value_delimiter = ',', default_value = "4,5,6,7,8")]
        ks: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.4,0.6,0.8,1")]
        fractions: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            value_enum,
            default_value = "vertices,profiles,taxonomy,k"
        )]
        sweeps: Vec<SweepArg>,
        #[arg(long = "algorithm", value_delimiter = ',', value_parser = parse_algorithm, default_value = "basic,incre,adv-p")]
        algorithms: Vec<Algorithm>,
        #[arg(long, default_value_t = 20)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct Input {
    /// Use the bundled six-vertex example.
    #[arg(long)]
    fixture: bool,
    #[arg(long, requires_all = ["ptrees", "gptree"])]
    edges: Option<PathBuf>,
    #[arg(long)]
    ptrees: Option<PathBuf>,
    #[arg(long)]
    gptree: Option<PathBuf>,
    /// Vertex names, one `id name` pair per line.
    #[arg(long)]
    names: Option<PathBuf>,
    /// A `.cpt` index file (queries then need no graph files).
    #[arg(long)]
    index: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// Query vertex: an id, or a name from `--names` or the fixture.
    #[arg(long)]
    q: String,
    #[arg(long, default_value_t = 6)]
    k: u32,
    /// Recorded in structured output; queries themselves are deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepArg {
    Vertices,
    Profiles,
    Taxonomy,
    K,
}

impl From<SweepArg> for Sweep {
    fn from(s: SweepArg) -> Sweep {
        match s {
            SweepArg::Vertices => Sweep::Vertices,
            SweepArg::Profiles => Sweep::Profiles,
            SweepArg::Taxonomy => Sweep::Taxonomy,
            SweepArg::K => Sweep::K,
        }
    }
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: PcsError| e.to_string())
}

/// Everything a stored query result needs to be re-read by `metrics`.
#[derive(Debug, Serialize, Deserialize)]
struct QueryReport {
    q: VertexId,
    k: u32,
    algorithm: Algorithm,
    seed: u64,
    result: ResultSet,
}

enum Failure {
    Usage(String),
    Data(PcsError),
}

impl From<PcsError> for Failure {
    fn from(e: PcsError) -> Self {
        Failure::Data(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.into())
    }
}

type CliResult<T> = Result<T, Failure>;

struct Loaded {
    graph: Option<ProfiledGraph>,
    index: Option<CpIndex>,
    names: Vec<String>,
}

impl Loaded {
    fn gptree(&self) -> &GpTree {
        match (&self.graph, &self.index) {
            (Some(g), _) => g.gptree(),
            (None, Some(i)) => i.gptree(),
            (None, None) => unreachable!("load requires a source"),
        }
    }

    fn num_vertices(&self) -> usize {
        match (&self.graph, &self.index) {
            (Some(g), _) => g.num_vertices(),
            (None, Some(i)) => i.num_vertices(),
            (None, None) => 0,
        }
    }

    fn graph(&mut self) -> CliResult<&ProfiledGraph> {
        if self.graph.is_none() {
            let idx = self.index.as_ref().expect("load requires a source");
            self.graph = Some(idx.to_graph()?);
        }
        Ok(self.graph.as_ref().unwrap())
    }

    fn index(&mut self) -> &CpIndex {
        if self.index.is_none() {
            self.index = Some(CpIndex::build(
                self.graph.as_ref().expect("load requires a source"),
            ));
        }
        self.index.as_ref().unwrap()
    }

    fn vertex_name(&self, v: VertexId) -> String {
        self.names
            .get(v as usize)
            .cloned()
            .unwrap_or_else(|| v.to_string())
    }

    fn resolve(&self, q: &str) -> CliResult<VertexId> {
        let v = match q.parse::<VertexId>() {
            Ok(v) => v,
            Err(_) => self
                .names
                .iter()
                .position(|n| n == q)
                .map(|i| i as VertexId)
                .ok_or_else(|| Failure::Usage(format!("unknown query vertex {q:?}")))?,
        };
        if v as usize >= self.num_vertices() {
            return Err(PcsError::VertexOutOfRange {
                vertex: v,
                n: self.num_vertices(),
            }
            .into());
        }
        Ok(v)
    }
}

fn parse_names(text: &str) -> CliResult<HashMap<usize, String>> {
    let mut out = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, name) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| PcsError::Parse {
                source_name: "names",
                line: i + 1,
                message: "expected `id name`".into(),
            })?;
        let id = id.parse::<usize>().map_err(|_| PcsError::Parse {
            source_name: "names",
            line: i + 1,
            message: format!("bad vertex id {id:?}"),
        })?;
        out.insert(id, name.trim().to_string());
    }
    Ok(out)
}

fn load(input: &Input, want_graph: bool) -> CliResult<Loaded> {
    let sources = [input.fixture, input.edges.is_some(), input.index.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if sources != 1 {
        return Err(Failure::Usage(
            "give exactly one of --fixture, --edges/--ptrees/--gptree, or --index".into(),
        ));
    }
    let mut loaded = Loaded {
        graph: None,
        index: None,
        names: Vec::new(),
    };
    if input.fixture {
        loaded.graph = Some(fixture::graph());
        loaded.names = fixture::NAMES.iter().map(|s| s.to_string()).collect();
    } else if let Some(edges) = &input.edges {
        let (p, g) = (
            input.ptrees.as_ref().unwrap(),
            input.gptree.as_ref().unwrap(),
        );
        loaded.graph = Some(ProfiledGraph::load(&read(edges)?, &read(p)?, &read(g)?)?);
    } else if let Some(path) = &input.index {
        loaded.index = Some(codec::deserialize(
            &fs::read(path).map_err(|e| with_path(e, path))?,
        )?);
        if want_graph {
            loaded.graph()?;
        }
    }
    if let Some(path) = &input.names {
        let map = parse_names(&read(path)?)?;
        loaded.names = (0..loaded.num_vertices())
            .map(|v| map.get(&v).cloned().unwrap_or_else(|| v.to_string()))
            .collect();
    }
    Ok(loaded)
}

fn with_path(e: std::io::Error, path: &Path) -> Failure {
    Failure::Data(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| with_path(e, path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| PcsError::Format(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| PcsError::Format(e.to_string()))?;
    outln!("{text}");
    Ok(())
}

fn read_report(path: &Path) -> CliResult<QueryReport> {
    let text = read(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Data(PcsError::Format(format!("{}: {e}", path.display()))))
}

/// Leaves of `t` as root paths, e.g. `r/CM/ML; r/CM/AI`.
fn mct_paths(t: &PTree, gp: &GpTree) -> Vec<String> {
    t.leaves(gp)
        .into_iter()
        .map(|l| gp.path_string(l))
        .collect()
}

fn cmd_build_index(input: &Input, out: &Path, compress: bool, format: Format) -> CliResult<()> {
    let loaded = load(input, true)?;
    let g = loaded.graph.as_ref().unwrap();
    let start = Instant::now();
    let mut idx = CpIndex::build(g);
    if compress {
        idx.compress();
    }
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    codec::save(&idx, out)?;
    let stats = serde_json::json!({
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "labels": g.gptree().len(),
        "cp_nodes": idx.num_nodes(),
        "entries": idx.stored_entries(),
        "build_ms": build_ms,
        "out": out.display().to_string(),
    });
    match format {
        Format::Structured => print_json(&stats)?,
        Format::Text => {
            outln!(
                "vertices={} edges={} labels={}",
                g.num_vertices(),
                g.num_edges(),
                g.gptree().len()
            );
            outln!(
                "cp_nodes={} entries={}",
                idx.num_nodes(),
                idx.stored_entries()
            );
            outln!("build_ms={build_ms:.3}");
            outln!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn cmd_query(
    input: &Input,
    args: &QueryArgs,
    algorithm: Algorithm,
    out: Option<&Path>,
    format: Format,
) -> CliResult<()> {
    let mut loaded = load(input, !algorithm.needs_index())?;
    let q = loaded.resolve(&args.q)?;
    let result = match algorithm {
        Algorithm::Basic => query_basic(loaded.graph()?, q, args.k)?,
        Algorithm::Oracle => oracle(loaded.graph()?, q, args.k)?,
        Algorithm::Incre => query_incre(loaded.index(), q, args.k)?,
        Algorithm::AdvI => query_advanced(loaded.index(), q, args.k, Strategy::I)?,
        Algorithm::AdvD => query_advanced(loaded.index(), q, args.k, Strategy::D)?,
        Algorithm::AdvP => query_advanced(loaded.index(), q, args.k, Strategy::P)?,
    };
    let report = QueryReport {
        q,
        k: args.k,
        algorithm,
        seed: args.seed,
        result,
    };
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    match format {
        Format::Structured => print_json(&report)?,
        Format::Text => {
            let gp = loaded.gptree();
            let r = &report.result;
            outln!(
                "query q={} k={} algorithm={}",
                loaded.vertex_name(q),
                args.k,
                algorithm
            );
            outln!("{} communities", r.len());
            for (i, c) in r.communities.iter().enumerate() {
                let members: Vec<String> =
                    c.vertices.iter().map(|&v| loaded.vertex_name(v)).collect();
                outln!("community {}: {{{}}}", i + 1, members.join(", "));
                outln!("  mct: {}", mct_paths(&c.mct, gp).join("; "));
            }
            let ct = &r.counters;
            outln!(
                "counters: generated={} verified={} gkt={} candidates={}",
                ct.subtrees_generated,
                ct.subtrees_verified,
                ct.gkt_computations,
                ct.candidate_volume
            );
        }
    }
    Ok(())
}

fn cmd_gen(cfg: &GenConfig, out: &Path, stem: &str, format: Format) -> CliResult<()> {
    let g = generate(cfg)?;
    g.write_files(out, stem)?;
    let avg_degree = 2.0 * g.num_edges() as f64 / g.num_vertices().max(1) as f64;
    let avg_profile = g.total_profile_size() as f64 / g.num_vertices().max(1) as f64;
    let stats = serde_json::json!({
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "labels": g.gptree().len(),
        "avg_degree": avg_degree,
        "avg_profile": avg_profile,
        "seed": cfg.seed,
        "stem": out.join(stem).display().to_string(),
    });
    match format {
        Format::Structured => print_json(&stats)?,
        Format::Text => {
            outln!(
                "vertices={} edges={} labels={}",
                g.num_vertices(),
                g.num_edges(),
                g.gptree().len()
            );
            outln!("avg_degree={avg_degree:.4} avg_profile={avg_profile:.4}");
            outln!("wrote {}.{{edges,ptrees,gptree}}", out.join(stem).display());
        }
    }
    Ok(())
}

fn cmd_metrics(
    input: &Input,
    result: &Path,
    other: Option<&Path>,
    truth: Option<&Path>,
    out: Option<&Path>,
    format: Format,
) -> CliResult<()> {
    let mut loaded = load(input, true)?;
    let g = loaded.graph()?;
    let report = read_report(result)?;
    let other = other.map(read_report).transpose()?;
    let truth = match truth {
        Some(p) => Some(metrics::parse_truth(&read(p)?)?),
        None => None,
    };
    let m = metrics::report(
        g,
        report.q,
        &report.result.communities,
        other.as_ref().map(|o| o.result.communities.as_slice()),
        truth.as_deref(),
    )?;
    if let Some(path) = out {
        write_json(path, &m)?;
    }
    match format {
        Format::Structured => print_json(&m)?,
        Format::Text => out!("{}", m.to_text()),
    }
    Ok(())
}

fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::BuildIndex {
            input,
            out,
            compress,
            format,
        } => cmd_build_index(&input, &out, compress, format),
        Command::Query {
            input,
            query,
            algorithm,
            out,
            format,
        } => cmd_query(&input, &query, algorithm, out.as_deref(), format),
        Command::Gen {
            n,
            m,
            labels,
            depth,
            tokens,
            vocab,
            seed,
            out,
            stem,
            format,
        } => {
            let cfg = GenConfig {
                n,
                m,
                labels,
                max_depth: depth,
                tokens_per_vertex: tokens,
                vocab,
                seed,
            };
            cmd_gen(&cfg, &out, &stem, format)
        }
        Command::Metrics {
            input,
            result,
            other,
            truth,
            out,
            format,
        } => cmd_metrics(
            &input,
            &result,
            other.as_deref(),
            truth.as_deref(),
            out.as_deref(),
            format,
        ),
        Command::Bench {
            input,
            k,
            ks,
            fractions,
            sweeps,
            algorithms,
            queries,
            seed,
            out,
            format,
        } => {
            let mut loaded = load(&input, true)?;
            let g = loaded.graph()?;
            let cfg = BenchConfig {
                sweeps: sweeps.into_iter().map(Sweep::from).collect(),
                fractions,
                ks,
                k,
                queries,
                algorithms,
                seed,
            };
            let rows = run_bench(g, &cfg)?;
            if let Some(path) = &out {
                write_json(path, &rows)?;
            }
            match format {
                Format::Structured => print_json(&rows)?,
                Format::Text => out!("{}", format_table(&rows)),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            if let PcsError::OracleBound { .. } = e {
                eprintln!("error: {e} (raise it with {ORACLE_BOUND_ENV})");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
