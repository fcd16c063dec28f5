use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gsr_core::bottleneck::{scan_all, Designations, SearchOptions};
use gsr_core::enumerate::{all_labeled_graphs, labeled_graph};
use gsr_core::format::{parse_edge_list, parse_graph6, to_dot, to_edge_list, to_graph6, GraphDoc};
use gsr_core::orbit::{find_repeater_line_bounded, lc_orbit_bounded, vertex_minor_bounded, DEFAULT_ORBIT_BOUND};
use gsr_core::protocols::{
    ghz3_extract, ghz4_extract, is_ghz4, repeater_protocol, repeater_protocol_on_path, x_protocol,
    x_protocol_on_path, ProtocolTranscript,
};
use gsr_core::quantum::{check_graph, SweepStats};
use gsr_core::{Error, LabeledGraph, Vertex, VertexPath};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Graph-state routing: EPR and GHZ extraction, LC orbits, bottleneck scans.
#[derive(Parser)]
#[command(name = "gsr", version)]
struct Cli {
    /// Print a short summary to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract an EPR pair between two vertices.
    Epr(EprArgs),
    /// Extract a GHZ state on three or four targets.
    Ghz(GhzArgs),
    /// Search all labeled graphs on n vertices for solvable bottlenecks.
    Scan(ScanArgs),
    /// List the LC orbit of a graph as graph6 lines.
    Orbit(OrbitArgs),
    /// Decide whether one graph is a vertex-minor of another.
    Vminor(VminorArgs),
    /// Check rewrite rules against the state-vector oracle.
    Verify(VerifyArgs),
    /// Convert between graph formats.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Edgelist,
    Graph6,
    Dot,
    Json,
}

#[derive(Args)]
struct Input {
    /// Graph file, or `-` for stdin.
    graph: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long = "format")]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    X,
    Repeater,
}

#[derive(Args)]
struct EprArgs {
    #[command(flatten)]
    input: Input,
    a: Vertex,
    b: Vertex,
    #[arg(long, value_enum, default_value = "x")]
    method: Method,
    /// Use this shortest path, e.g. `1,2,5,6,9`.
    #[arg(long, value_delimiter = ',')]
    path: Option<Vec<Vertex>>,
    /// Include every intermediate graph in the transcript.
    #[arg(long)]
    snapshots: bool,
    /// Write one DOT file per step into this directory.
    #[arg(long)]
    frames: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GhzArgs {
    #[command(flatten)]
    input: Input,
    /// Three or four target vertices.
    #[arg(num_args = 3..=4, required = true)]
    targets: Vec<Vertex>,
    #[arg(long, default_value_t = DEFAULT_ORBIT_BOUND)]
    orbit_bound: usize,
    #[arg(long)]
    snapshots: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    n: usize,
    /// Terminal pairs, e.g. `1:6,2:5`. Defaults to `1:n,2:n-1`.
    #[arg(long, conflicts_with = "all_pairings")]
    pairs: Option<String>,
    /// Scan every designation of two disjoint pairs.
    #[arg(long)]
    all_pairings: bool,
    /// Search with Z-deletions only.
    #[arg(long)]
    no_lc: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = DEFAULT_ORBIT_BOUND)]
    orbit_bound: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VminorArgs {
    /// The larger graph.
    #[command(flatten)]
    input: Input,
    /// The candidate vertex-minor (same format as the first graph).
    minor: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ORBIT_BOUND)]
    orbit_bound: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check a single graph instead of sweeping.
    graph: Option<PathBuf>,
    #[arg(long = "format")]
    format: Option<Format>,
    /// Sweep every labeled graph up to this size.
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    /// Extra random graphs on `max_n + 1` vertices.
    #[arg(long, default_value_t = 0)]
    sample: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    to: Format,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn guess_format(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("g6") | Some("graph6") => Format::Graph6,
        Some("json") => Format::Json,
        Some("dot") | Some("gv") => Format::Dot,
        _ => Format::Edgelist,
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path, format: Option<Format>) -> anyhow::Result<LabeledGraph> {
    let text = read_text(path)?;
    let g = match format.unwrap_or_else(|| guess_format(path)) {
        Format::Edgelist => parse_edge_list(&text)?,
        Format::Graph6 => parse_graph6(text.lines().next().unwrap_or(""), 1)?,
        Format::Json => serde_json::from_str::<GraphDoc>(&text).context("graph JSON")?.to_graph()?,
        Format::Dot => bail!("DOT is an output-only format"),
    };
    Ok(g)
}

fn write_out(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(Into::into),
    }
}

fn write_frames(dir: &Path, t: &ProtocolTranscript) -> anyhow::Result<()> {
    fs::create_dir_all(dir)?;
    let frames = std::iter::once(t.initial()).chain(t.snapshots());
    for (i, g) in frames.enumerate() {
        fs::write(dir.join(format!("frame_{i:03}.dot")), to_dot(g, &format!("step{i}")))?;
    }
    Ok(())
}

fn emit_transcript(t: &ProtocolTranscript, snapshots: bool, out: Option<&Path>) -> anyhow::Result<()> {
    // Every emitted transcript has to replay.
    t.validate()?;
    write_out(out, &t.to_json(snapshots))
}

fn cmd_epr(args: &EprArgs, verbose: bool) -> anyhow::Result<()> {
    let g = read_graph(&args.input.graph, args.input.format)?;
    let r = match (&args.path, args.method) {
        (Some(p), m) => {
            let path = VertexPath::new(&g, p.clone())?;
            if path.source() != args.a || path.sink() != args.b {
                return Err(Error::InvalidPath(format!("{p:?} does not run from {} to {}", args.a, args.b)).into());
            }
            match m {
                Method::X => x_protocol_on_path(&g, &path)?,
                Method::Repeater => repeater_protocol_on_path(&g, &path)?,
            }
        }
        (None, Method::X) => x_protocol(&g, args.a, args.b)?,
        (None, Method::Repeater) => repeater_protocol(&g, args.a, args.b)?,
    };
    if verbose {
        eprintln!(
            "path {:?}: {} measurements, residual {:?}",
            r.path.vertices(),
            r.transcript.measurement_count(),
            r.residual.vertices()
        );
    }
    if let Some(dir) = &args.frames {
        write_frames(dir, &r.transcript)?;
    }
    emit_transcript(&r.transcript, args.snapshots, args.out.as_deref())
}

fn cmd_ghz(args: &GhzArgs, verbose: bool) -> anyhow::Result<()> {
    let g = read_graph(&args.input.graph, args.input.format)?;
    let t = match *args.targets.as_slice() {
        [a, b, c] => ghz3_extract(&g, a, b, c)?,
        [a, b, c, d] => {
            let targets = [a, b, c, d];
            if is_ghz4(&g, targets)? {
                ProtocolTranscript::new(g.clone(), targets.to_vec())
            } else {
                let line = find_repeater_line_bounded(&g, targets, args.orbit_bound)?.ok_or_else(|| {
                    Error::HypothesisUnmet(format!("no repeater line through {targets:?} with a vertex between the middle targets"))
                })?;
                if verbose {
                    eprintln!("repeater line {:?}", line.vertices());
                }
                ghz4_extract(&g, targets, &line)?
            }
        }
        _ => bail!("expected three or four targets"),
    };
    if verbose {
        eprintln!("{} measurements", t.measurement_count());
    }
    emit_transcript(&t, args.snapshots, args.out.as_deref())
}

fn parse_pairs(s: &str) -> anyhow::Result<[(Vertex, Vertex); 2]> {
    let pairs: Vec<(Vertex, Vertex)> = s
        .split(',')
        .map(|p| {
            let (a, b) = p.split_once(':').with_context(|| format!("pair {p:?} is not `u:v`"))?;
            Ok((a.trim().parse()?, b.trim().parse()?))
        })
        .collect::<anyhow::Result<_>>()?;
    match pairs.as_slice() {
        [p, q] => Ok([*p, *q]),
        _ => bail!("expected exactly two pairs"),
    }
}

fn cmd_scan(args: &ScanArgs, verbose: bool) -> anyhow::Result<()> {
    let designations = if args.all_pairings {
        Designations::All
    } else if let Some(p) = &args.pairs {
        Designations::Custom(vec![parse_pairs(p)?])
    } else {
        Designations::Canonical
    };
    let options = SearchOptions { lc_moves: !args.no_lc, ..Default::default() };
    let report = scan_all(args.n, &designations, options)?;
    if verbose {
        eprintln!(
            "{} graphs, {} designations, {} hits",
            report.graphs_scanned,
            report.designations.len(),
            report.hits.len()
        );
    }
    write_out(args.out.as_deref(), &report.to_json())
}

fn cmd_orbit(args: &OrbitArgs, verbose: bool) -> anyhow::Result<()> {
    let g = read_graph(&args.input.graph, args.input.format)?;
    let orbit = lc_orbit_bounded(&g, args.orbit_bound)?;
    if verbose {
        eprintln!("{} members, canonical key {}", orbit.len(), orbit.canonical_key());
    }
    write_out(args.out.as_deref(), &orbit.graph6_dump().join("\n"))
}

fn cmd_vminor(args: &VminorArgs, verbose: bool) -> anyhow::Result<()> {
    let g = read_graph(&args.input.graph, args.input.format)?;
    let h = read_graph(&args.minor, args.input.format)?;
    let witness = vertex_minor_bounded(&g, &h, args.orbit_bound)?;
    if verbose {
        eprintln!("vertex-minor: {}", witness.is_some());
    }
    let doc = json!({ "vertex_minor": witness.is_some(), "steps": witness });
    write_out(args.out.as_deref(), &serde_json::to_string_pretty(&doc)?)
}

fn cmd_verify(args: &VerifyArgs, verbose: bool) -> anyhow::Result<()> {
    let mut stats = SweepStats::default();
    if let Some(path) = &args.graph {
        stats.merge(check_graph(&read_graph(path, args.format)?)?);
    } else {
        if args.max_n > 7 {
            return Err(Error::SizeBound { size: args.max_n, bound: 7 }.into());
        }
        for n in 1..=args.max_n {
            for g in all_labeled_graphs(n) {
                stats.merge(check_graph(&g)?);
            }
        }
        let n = args.max_n + 1;
        let pairs = n * (n - 1) / 2;
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        for _ in 0..args.sample {
            stats.merge(check_graph(&labeled_graph(n, rng.gen_range(0..1u64 << pairs)))?);
        }
    }
    if verbose {
        eprintln!("{} graphs, {} branches, {} failures", stats.graphs, stats.branches, stats.failures.len());
    }
    let failed = !stats.failures.is_empty();
    write_out(args.out.as_deref(), &serde_json::to_string_pretty(&stats)?)?;
    if failed {
        bail!("{} oracle checks failed", stats.failures.len());
    }
    Ok(())
}

fn cmd_convert(args: &ConvertArgs) -> anyhow::Result<()> {
    let g = read_graph(&args.input.graph, args.input.format)?;
    let text = match args.to {
        Format::Edgelist => to_edge_list(&g),
        Format::Graph6 => to_graph6(&g),
        Format::Dot => to_dot(&g, "G"),
        Format::Json => serde_json::to_string_pretty(&GraphDoc::from(&g))?,
    };
    write_out(args.out.as_deref(), &text)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::HypothesisUnmet(_)
            | Error::Disconnected(..)
            | Error::InvalidPath(_)
            | Error::UnknownVertex(_)
            | Error::DuplicateVertex(_)
            | Error::SelfLoop(_)
            | Error::NotANeighbor { .. }
            | Error::MissingNeighbor(_)
            | Error::Parse(_)
            | Error::VertexSetMismatch,
        ) => 2,
        Some(Error::SizeBound { .. }) => 3,
        _ => 1,
    }
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("GSR_THREADS") {
        let n: usize = v.parse().with_context(|| format!("GSR_THREADS={v:?}"))?;
        if n == 0 {
            bail!("GSR_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let v = cli.verbose;
    let result = init_threads().and_then(|()| match &cli.command {
        Command::Epr(a) => cmd_epr(a, v),
        Command::Ghz(a) => cmd_ghz(a, v),
        Command::Scan(a) => cmd_scan(a, v),
        Command::Orbit(a) => cmd_orbit(a, v),
        Command::Vminor(a) => cmd_vminor(a, v),
        Command::Verify(a) => cmd_verify(a, v),
        Command::Convert(a) => cmd_convert(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
