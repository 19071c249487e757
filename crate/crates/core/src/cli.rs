//! The `ferrers` command-line tool.
//!
//! Exit codes: `0` success, `1` a theorem check failed, `2` bad input.

use std::ffi::OsString;
use std::io::{self, Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::format::{parse_biadjacency, parse_graph, write_biadjacency, write_graph};
use crate::graph::{
    enumerate_connected, BipartiteGraph, EnumerateOptions, PartitionSpec, VertexSet,
    DEFAULT_ENUMERATION_CAP,
};
use crate::linalg::{format_rational, parse_rational, Rational};
use crate::spectral::{majorization_report, overlap_defect, overlap_trace_verified, spectral_report};
use crate::trees::{ferrers_invariant, tau_matrix_tree, DEFAULT_BRUTE_FORCE_CAP};
use crate::verify::{
    corollary_check, random_weights, rectangle, verify_dims, verify_graph_with, CampaignOptions,
    VerifyOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ferrers", version, about = "Spanning trees, Ferrers graphs and the Ferrers bound")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Tolerance for floating-point spectral checks.
    #[arg(long, global = true, default_value_t = crate::spectral::DEFAULT_TOL)]
    tol: f64,

    /// Largest m*n to enumerate, or largest edge count for brute-force tree listing.
    #[arg(long, global = true, env = "FERRERS_CAP")]
    cap: Option<usize>,

    /// Keep one graph per isomorphism class in `enumerate`.
    #[arg(long, global = true)]
    dedupe: bool,

    /// Seed for randomized inputs.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Read and write graphs as 0/1 biadjacency matrices.
    #[arg(long, global = true)]
    biadj: bool,

    /// Corrupt the tree count before checking (testing only).
    #[arg(long, global = true, hide = true)]
    fault_inject: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of spanning trees.
    Tau { file: Option<String> },
    /// F(G) = (product of degrees) / (m n), as p/q.
    Invariant { file: Option<String> },
    /// Full verification record for one graph.
    Check { file: Option<String> },
    /// Eigenvalues of M against the degrees, without asserting.
    Spectrum { file: Option<String> },
    /// Same report, failing unless the majorization certificate holds.
    Majorize { file: Option<String> },
    /// tr(Q_I Q_T) and the overlap defect for index lists such as `0,1`.
    Overlap { i: String, t: String, m: usize },
    /// Ferrers graph with the given column heights, e.g. `3,2,1`.
    FerrersGen { heights: String },
    /// Whether the graph is Ferrers.
    FerrersDetect { file: Option<String> },
    /// Every connected labeled graph with parts m and n.
    Enumerate { m: usize, n: usize },
    /// Exhaustive check over 1..=m_max by 1..=n_max.
    Verify { m_max: usize, n_max: usize },
    /// Weighted spanning-tree inequality; weights follow the graph on one line.
    Corollary { file: Option<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Plain,
}

/// Anything that ends a command early.
enum Failure {
    Input(Error),
    Check(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IdentityViolation { .. } | Error::MajorizationFailure(_) | Error::Violation { .. } => {
                Failure::Check(e.to_string())
            }
            other => Failure::Input(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Format(_) => "parse",
        Error::CapExceeded { .. } => "cap",
        Error::InvalidPartition(_) => "partition",
        Error::Disconnected | Error::IsolatedVertex(_) => "connectivity",
        Error::NegativeWeight(_) => "weights",
        Error::NoConvergence { .. } | Error::Singular(_) | Error::NotSymmetric(_) | Error::NotProjection(_) => {
            "numeric"
        }
        _ => "input",
    }
}

/// Parses `args` (including the program name) and runs one command.
/// Returns the process exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut (dyn Write + Send),
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = dispatch(&cli, stdin, stdout);
    let _ = stdout.flush();
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Input(e)) => {
            let _ = writeln!(stderr, "ferrers: error[{}]: {e}", error_kind(&e));
            EXIT_INPUT
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(stderr, "ferrers: error[check]: {msg}");
            EXIT_CHECK_FAILED
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "ferrers: error[io]: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, out: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let fmt = cli.format;
    match &cli.command {
        Command::Tau { file } => {
            let g = read_graph(cli, file, stdin)?;
            emit_scalar(out, fmt, json!(tau_matrix_tree(&g)))
        }
        Command::Invariant { file } => {
            let g = read_graph(cli, file, stdin)?;
            emit_scalar(out, fmt, json!(format_rational(&ferrers_invariant(&g)?)))
        }
        Command::Check { file } => {
            let g = read_graph(cli, file, stdin)?;
            let record = verify_graph_with(&g, &verify_options(cli))?;
            emit(out, fmt, &record)?;
            if record.passes() {
                Ok(())
            } else {
                Err(Failure::Check(format!("record does not pass for\n{}", write_graph(&g))))
            }
        }
        Command::Spectrum { file } => {
            let g = read_graph(cli, file, stdin)?;
            emit(out, fmt, &spectral_report(&g, cli.tol)?)
        }
        Command::Majorize { file } => {
            let g = read_graph(cli, file, stdin)?;
            emit(out, fmt, &majorization_report(&g, cli.tol)?)
        }
        Command::Overlap { i, t, m } => {
            let (i, t) = (parse_index_list(i)?, parse_index_list(t)?);
            let trace = overlap_trace_verified(i, t, *m)?;
            let defect = overlap_defect(i, t)?;
            let value = json!({
                "trace": format_rational(&trace),
                "defect": format_rational(&defect),
                "comparable": i.is_comparable(t),
            });
            emit(out, fmt, &value)
        }
        Command::FerrersGen { heights } => {
            let p: PartitionSpec = heights.parse()?;
            let g = BipartiteGraph::ferrers_from_partition(&p);
            out.write_all(graph_text(cli, &g).as_bytes())?;
            Ok(())
        }
        Command::FerrersDetect { file } => {
            let g = read_graph(cli, file, stdin)?;
            emit_scalar(out, fmt, json!(g.is_ferrers()))
        }
        Command::Enumerate { m, n } => {
            let opts = EnumerateOptions {
                cap: cli.cap.unwrap_or(DEFAULT_ENUMERATION_CAP),
                dedupe: cli.dedupe,
            };
            let graphs = enumerate_connected(*m, *n, &opts)?;
            if fmt == OutputFormat::Csv {
                writeln!(out, "m,n,graph")?;
            }
            for (k, g) in graphs.enumerate() {
                let text = graph_text(cli, &g);
                match fmt {
                    OutputFormat::Json => {
                        writeln!(out, "{}", json!({"m": m, "n": n, "graph": text}))?;
                    }
                    OutputFormat::Csv => write_csv_row(out, &[m.to_string(), n.to_string(), flatten_lines(&text)])?,
                    OutputFormat::Plain => {
                        if k > 0 {
                            writeln!(out)?;
                        }
                        out.write_all(text.as_bytes())?;
                    }
                }
            }
            Ok(())
        }
        Command::Verify { m_max, n_max } => run_verify(cli, *m_max, *n_max, out),
        Command::Corollary { file } => {
            let text = read_input(file, stdin)?;
            let (g, weights) = split_weights(cli, &text)?;
            let z = match weights {
                Some(line) => parse_weights(&line)?,
                None => random_weights(g.order(), &mut ChaCha8Rng::seed_from_u64(cli.seed.unwrap_or(0))),
            };
            let outcome = corollary_check(&g, &z, cli.cap.unwrap_or(DEFAULT_BRUTE_FORCE_CAP))?;
            let mut value = serde_json::to_value(&outcome).expect("outcome serializes");
            value["weights"] = json!(z.iter().map(format_rational).collect::<Vec<_>>());
            emit(out, fmt, &value)?;
            if outcome.holds {
                Ok(())
            } else {
                Err(Failure::Check("weighted inequality fails".into()))
            }
        }
    }
}

fn verify_options(cli: &Cli) -> VerifyOptions {
    VerifyOptions {
        tol: cli.tol,
        fault_inject: cli.fault_inject,
    }
}

fn run_verify(cli: &Cli, m_max: usize, n_max: usize, out: &mut (dyn Write + Send)) -> Result<(), Failure> {
    let opts = CampaignOptions {
        cap: cli.cap.unwrap_or(DEFAULT_ENUMERATION_CAP),
        threads: None,
        verify: verify_options(cli),
    };
    let fmt = cli.format;
    let mut header: Option<Vec<String>> = None;
    let mut write_error: Option<io::Error> = None;
    let result = verify_dims(&rectangle(m_max, n_max), &opts, |rec| {
        if write_error.is_some() {
            return;
        }
        let value = serde_json::to_value(rec).expect("record serializes");
        let written = match fmt {
            OutputFormat::Json => writeln!(out, "{value}"),
            OutputFormat::Csv => {
                let (keys, cells) = csv_cells(&value);
                let mut r = Ok(());
                if header.is_none() {
                    r = write_csv_row(out, &keys);
                    header = Some(keys);
                }
                r.and_then(|_| write_csv_row(out, &cells))
            }
            OutputFormat::Plain => Ok(()),
        };
        if let Err(e) = written {
            write_error = Some(e);
        }
    });
    if let Some(e) = write_error {
        return Err(e.into());
    }
    let summary = result?;
    if fmt == OutputFormat::Csv && header.is_some() {
        writeln!(out)?;
    }
    emit(out, fmt, &summary)
}

fn read_input(file: &Option<String>, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    match file.as_deref() {
        None | Some("-") => {
            stdin.read_to_string(&mut text)?;
        }
        Some(path) => {
            text = std::fs::read_to_string(path)
                .map_err(|e| io::Error::new(e.kind(), format!("{path}: {e}")))?;
        }
    }
    Ok(text)
}

fn parse_with(cli: &Cli, text: &str) -> crate::Result<BipartiteGraph> {
    if cli.biadj {
        parse_biadjacency(text)
    } else {
        parse_graph(text)
    }
}

fn read_graph(cli: &Cli, file: &Option<String>, stdin: &mut dyn Read) -> Result<BipartiteGraph, Failure> {
    Ok(parse_with(cli, &read_input(file, stdin)?)?)
}

fn graph_text(cli: &Cli, g: &BipartiteGraph) -> String {
    if cli.biadj {
        write_biadjacency(g)
    } else {
        write_graph(g)
    }
}

/// Splits corollary input into the graph and an optional trailing weight line.
fn split_weights(cli: &Cli, text: &str) -> Result<(BipartiteGraph, Option<String>), Failure> {
    let whole = match parse_with(cli, text) {
        Ok(g) => return Ok((g, None)),
        Err(e) => e,
    };
    let trimmed = text.trim_end();
    let Some(cut) = trimmed.rfind('\n') else {
        return Err(whole.into());
    };
    match parse_with(cli, &trimmed[..cut]) {
        Ok(g) => Ok((g, Some(trimmed[cut + 1..].to_string()))),
        Err(_) => Err(whole.into()),
    }
}

fn parse_weights(line: &str) -> Result<Vec<Rational>, Failure> {
    Ok(line
        .split_whitespace()
        .map(parse_rational)
        .collect::<crate::Result<Vec<_>>>()?)
}

fn parse_index_list(s: &str) -> Result<VertexSet, Failure> {
    s.split(',')
        .filter(|tok| !tok.trim().is_empty())
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|e| Error::Format(format!("bad index {tok:?}: {e}")))
                .and_then(|i| {
                    if i < crate::graph::MAX_PART {
                        Ok(i)
                    } else {
                        Err(Error::IndexOutOfRange {
                            index: i,
                            dim: crate::graph::MAX_PART,
                        })
                    }
                })
        })
        .collect::<crate::Result<VertexSet>>()
        .map_err(Failure::from)
}

fn emit_scalar(out: &mut dyn Write, fmt: OutputFormat, value: Value) -> Result<(), Failure> {
    match (fmt, &value) {
        (OutputFormat::Json, _) => writeln!(out, "{value}")?,
        (_, Value::String(s)) => writeln!(out, "{s}")?,
        _ => writeln!(out, "{value}")?,
    }
    Ok(())
}

fn emit<S: Serialize>(out: &mut dyn Write, fmt: OutputFormat, item: &S) -> Result<(), Failure> {
    let value = serde_json::to_value(item).expect("output serializes");
    match fmt {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("valid json"))?,
        OutputFormat::Csv => {
            let (keys, cells) = csv_cells(&value);
            write_csv_row(out, &keys)?;
            write_csv_row(out, &cells)?;
        }
        OutputFormat::Plain => match &value {
            Value::Object(map) => {
                for (k, v) in map {
                    writeln!(out, "{k}: {}", cell(v, " "))?;
                }
            }
            other => writeln!(out, "{}", cell(other, " "))?,
        },
    }
    Ok(())
}

fn csv_cells(value: &Value) -> (Vec<String>, Vec<String>) {
    match value {
        Value::Object(map) => map.iter().map(|(k, v)| (k.clone(), cell(v, ";"))).unzip(),
        other => (vec!["value".into()], vec![cell(other, ";")]),
    }
}

fn cell(v: &Value, sep: &str) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => flatten_lines(s),
        Value::Array(items) => items.iter().map(|x| cell(x, ",")).collect::<Vec<_>>().join(sep),
        other => other.to_string(),
    }
}

fn flatten_lines(s: &str) -> String {
    s.trim_end().replace('\n', ";")
}

fn write_csv_row(out: &mut dyn Write, cells: &[String]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(cells).map_err(io::Error::other)?;
    w.flush()
}
