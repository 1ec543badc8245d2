//! The `toggled` command line.
//!
//! Exit status: 0 on success, 1 on domain failures (unsolvable with
//! `--require-solvable`, exceeded caps, solver disagreement, verification
//! failures), 2 on usage and input errors. Results go to stdout,
//! diagnostics to stderr.

use std::io::{Read, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::json;
use toggled_core::gf2::{min_weight_solution, LightsOutSystem, DEFAULT_NULLITY_CAP};
use toggled_core::inductive::{complementing_set_with, InductiveConfig};
use toggled_core::oracle::{verify_theorem_with, GraphCorpus};
use toggled_core::{generate, parse_graph, Configuration, Graph, GraphKind, PressSet};

#[derive(Debug, Parser)]
#[command(name = "toggled", version, about = "Lights Out on arbitrary graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a generated graph.
    Gen(GenArgs),
    /// Find a press-set taking one configuration to another.
    Solve(SolveArgs),
    /// Check both solvers over a graph corpus.
    Verify(VerifyArgs),
    /// Rank, nullity and quiet-pattern basis of a graph.
    Nullspace(GraphArgs),
    /// Step-by-step log of the inductive construction.
    Trace(GraphArgs),
    /// Run the HTTP hint service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Path,
    Cycle,
    Complete,
    Grid,
    Petersen,
    ErdosRenyi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormat {
    EdgeList,
    Json,
}

#[derive(Debug, clap::Args)]
struct GenArgs {
    kind: Kind,
    /// Vertex count (path, cycle, complete, erdos-renyi).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Edge probability for erdos-renyi.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "edge-list")]
    format: GraphFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    Gf2,
    Inductive,
    Both,
}

impl SolveMethod {
    fn name(self) -> &'static str {
        match self {
            SolveMethod::Gf2 => "gf2",
            SolveMethod::Inductive => "inductive",
            SolveMethod::Both => "both",
        }
    }
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    /// Graph file in edge-list or JSON form, `-` for stdin.
    #[arg(long)]
    graph: String,
    /// `complement`, `all-on`, `all-off`, or an explicit 0/1 goal.
    #[arg(long, conflicts_with = "to")]
    target: Option<String>,
    /// Starting configuration; all off when omitted.
    #[arg(long)]
    from: Option<String>,
    /// Explicit goal configuration.
    #[arg(long)]
    to: Option<String>,
    #[arg(long, value_enum, default_value = "gf2")]
    method: SolveMethod,
    /// Report the lightest press-set instead of the first one found.
    #[arg(long)]
    min_weight: bool,
    #[arg(long, default_value_t = DEFAULT_NULLITY_CAP)]
    nullity_cap: usize,
    /// Include the inductive construction log.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    json: bool,
    /// Exit 1 when the goal is unreachable.
    #[arg(long)]
    require_solvable: bool,
}

#[derive(Debug, clap::Args)]
#[command(group(ArgGroup::new("corpus").required(true).args(["exhaustive", "sampled"])))]
struct VerifyArgs {
    /// Every labeled graph on this many vertices (at most 6).
    #[arg(long)]
    exhaustive: Option<usize>,
    /// Random graphs on this many vertices.
    #[arg(long, requires = "count")]
    sampled: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, clap::Args)]
struct GraphArgs {
    /// Graph file in edge-list or JSON form, `-` for stdin.
    #[arg(long)]
    graph: String,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, clap::Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    addr: IpAddr,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Origin allowed by CORS, e.g. the playground's URL.
    #[arg(long)]
    allow_origin: Option<String>,
    /// Session snapshot file, loaded at startup and saved on shutdown.
    #[arg(long)]
    snapshot: Option<PathBuf>,
}

enum Failure {
    /// Exit 1.
    Domain(String),
    /// Exit 2.
    Usage(String),
}

type CmdResult = Result<i32, Failure>;

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn line(&mut self, text: impl std::fmt::Display) -> Result<(), Failure> {
        writeln!(self.out, "{text}").map_err(|e| Failure::Domain(format!("write failed: {e}")))
    }

    fn read_graph(&mut self, source: &str) -> Result<Graph, Failure> {
        let text = if source == "-" {
            let mut buf = String::new();
            self.stdin
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(source).map_err(|e| Failure::Usage(format!("{source}: {e}")))?
        };
        parse_graph(&text).map_err(|e| Failure::Usage(format!("{source}: {e}")))
    }
}

/// Runs one invocation and returns the process exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                2
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    let mut io = Io { stdin, out: stdout };
    let result = match cli.command {
        Command::Gen(args) => gen(&mut io, args),
        Command::Solve(args) => solve(&mut io, args),
        Command::Verify(args) => verify(&mut io, args),
        Command::Nullspace(args) => nullspace(&mut io, args),
        Command::Trace(args) => trace(&mut io, args),
        Command::Serve(args) => serve(args),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn gen(io: &mut Io, args: GenArgs) -> CmdResult {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")));
    let kind = match args.kind {
        Kind::Path => GraphKind::Path { n: need(args.n, "n")? },
        Kind::Cycle => GraphKind::Cycle { n: need(args.n, "n")? },
        Kind::Complete => GraphKind::Complete { n: need(args.n, "n")? },
        Kind::Grid => GraphKind::Grid {
            rows: need(args.rows, "rows")?,
            cols: need(args.cols, "cols")?,
        },
        Kind::Petersen => GraphKind::Petersen,
        Kind::ErdosRenyi => GraphKind::ErdosRenyi {
            n: need(args.n, "n")?,
            p: args.p.ok_or_else(|| Failure::Usage("--p is required".into()))?,
        },
    };
    let g = generate(&kind, args.seed).map_err(|e| Failure::Usage(e.to_string()))?;
    match args.format {
        GraphFormat::EdgeList => {
            write!(io.out, "{}", g.to_edge_list()).map_err(|e| Failure::Domain(format!("write failed: {e}")))?
        }
        GraphFormat::Json => io.line(serde_json::to_string(&g).expect("graphs serialize"))?,
    }
    Ok(0)
}

fn parse_config(text: &str, n: usize, flag: &str) -> Result<Configuration, Failure> {
    let c: Configuration = text.parse().map_err(|e| Failure::Usage(format!("--{flag}: {e}")))?;
    if c.len() != n {
        return Err(Failure::Usage(format!(
            "--{flag} has {} bits but the graph has {n} vertices",
            c.len()
        )));
    }
    Ok(c)
}

/// The toggle vector a solve request asks for.
fn requested_delta(args: &SolveArgs, n: usize) -> Result<Configuration, Failure> {
    let from = match &args.from {
        Some(bits) => parse_config(bits, n, "from")?,
        None => Configuration::zeros(n),
    };
    let goal = match (args.target.as_deref(), args.to.as_deref()) {
        (_, Some(bits)) => parse_config(bits, n, "to")?,
        (None | Some("complement"), None) => from.complement(),
        (Some("all-on"), None) => Configuration::ones(n),
        (Some("all-off"), None) => Configuration::zeros(n),
        (Some(bits), None) => parse_config(bits, n, "target")?,
    };
    Ok(&from ^ &goal)
}

fn solve(io: &mut Io, args: SolveArgs) -> CmdResult {
    let g = io.read_graph(&args.graph)?;
    let delta = requested_delta(&args, g.n())?;
    if args.min_weight && args.method == SolveMethod::Inductive {
        return Err(Failure::Usage("--min-weight needs --method gf2 or both".into()));
    }
    let wants_inductive = args.method != SolveMethod::Gf2;
    if wants_inductive && !delta.is_all_ones() {
        return Err(Failure::Domain(
            "the inductive method only reaches the complement of the start configuration".into(),
        ));
    }

    let system = LightsOutSystem::new(&g);
    let nullity = system.nullity();

    let linear = if args.method == SolveMethod::Inductive {
        None
    } else {
        match system.solve(&delta).map_err(|e| Failure::Usage(e.to_string()))? {
            Some(outcome) => Some(if args.min_weight {
                min_weight_solution(&outcome, args.nullity_cap).map_err(|e| Failure::Domain(e.to_string()))?
            } else {
                outcome.particular
            }),
            None => {
                if args.json {
                    io.line(
                        json!({"press_set": null, "weight": null, "nullity": nullity, "method": args.method.name()}),
                    )?;
                } else {
                    io.line("unsolvable")?;
                }
                return Ok(if args.require_solvable { 1 } else { 0 });
            }
        }
    };

    let constructed = if wants_inductive {
        let config = InductiveConfig::from_env();
        Some(complementing_set_with(&g, config).map_err(|e| Failure::Domain(e.to_string()))?)
    } else {
        None
    };

    let press_set: PressSet = match (&linear, &constructed) {
        (Some(lin), Some((ind, _))) => {
            let agree = g.effect(lin).ok() == g.effect(ind).ok()
                && toggled_core::gf2::span_contains(system.nullspace_basis(), &(lin ^ ind));
            if !agree {
                return Err(Failure::Domain(format!(
                    "solvers disagree: gf2 gave {lin}, inductive gave {ind}"
                )));
            }
            lin.clone()
        }
        (Some(lin), None) => lin.clone(),
        (None, Some((ind, _))) => ind.clone(),
        (None, None) => unreachable!("at least one method runs"),
    };

    let trace = constructed.as_ref().filter(|_| args.trace).map(|(_, t)| t);
    if args.json {
        let mut doc = json!({
            "press_set": press_set.to_bitstring(),
            "weight": press_set.weight(),
            "nullity": nullity,
            "method": args.method.name(),
        });
        if let Some(t) = trace {
            doc["trace"] = t.to_json();
        }
        io.line(doc)?;
    } else {
        io.line(&press_set)?;
        if let Some(t) = trace {
            write!(io.out, "{}", t.to_text()).map_err(|e| Failure::Domain(format!("write failed: {e}")))?;
        }
    }
    Ok(0)
}

fn verify(io: &mut Io, args: VerifyArgs) -> CmdResult {
    let corpus = match (args.exhaustive, args.sampled) {
        (Some(n), _) => GraphCorpus::Exhaustive { n },
        (None, Some(n)) => GraphCorpus::Sampled {
            n,
            count: args.count.unwrap_or_default(),
            p: args.p,
            seed: args.seed,
        },
        (None, None) => unreachable!("clap requires one corpus"),
    };
    let report = verify_theorem_with(corpus, InductiveConfig::from_env()).map_err(|e| Failure::Usage(e.to_string()))?;
    if args.json {
        io.line(serde_json::to_string(&report).expect("reports serialize"))?;
    } else {
        io.line(format!("checked={} failures={}", report.checked, report.failures.len()))?;
        for failure in &report.failures {
            io.line(format!("failed graph:\n{}", failure.trim_end()))?;
        }
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn nullspace(io: &mut Io, args: GraphArgs) -> CmdResult {
    let g = io.read_graph(&args.graph)?;
    let system = LightsOutSystem::new(&g);
    if args.json {
        let basis: Vec<String> = system.nullspace_basis().iter().map(|b| b.to_bitstring()).collect();
        io.line(json!({"rank": system.rank(), "nullity": system.nullity(), "basis": basis}))?;
    } else {
        io.line(format!("rank={} nullity={}", system.rank(), system.nullity()))?;
        for b in system.nullspace_basis() {
            io.line(b)?;
        }
    }
    Ok(0)
}

fn trace(io: &mut Io, args: GraphArgs) -> CmdResult {
    let g = io.read_graph(&args.graph)?;
    let (_, trace) =
        complementing_set_with(&g, InductiveConfig::from_env()).map_err(|e| Failure::Domain(e.to_string()))?;
    if args.json {
        io.line(trace.to_json())?;
    } else {
        write!(io.out, "{}", trace.to_text()).map_err(|e| Failure::Domain(format!("write failed: {e}")))?;
    }
    Ok(0)
}

fn serve(args: ServeArgs) -> CmdResult {
    let config = toggled_service::ServeConfig {
        addr: SocketAddr::new(args.addr, args.port),
        allow_origin: args.allow_origin,
        snapshot: args.snapshot,
        limits: toggled_service::Limits::default(),
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Domain(format!("runtime: {e}")))?;
    runtime
        .block_on(toggled_service::serve(config))
        .map_err(|e| Failure::Domain(format!("service: {e}")))?;
    Ok(0)
}
