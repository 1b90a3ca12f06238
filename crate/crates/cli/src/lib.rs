//! The `mumford` command line: argument parsing, dispatch and report emission.
//!
//! Every subcommand produces one JSON document (keys sorted, so identical inputs give
//! byte-identical output) and optionally a CSV table. Exit status is 0 on success, 2 on
//! invalid input, 3 when a numerical or exact check fails, and 64 on usage errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use graph_core::{Alphabet, DirectedGraph, EdgeMatrix, GraphDocument, TailConvention};
use serde_json::Value;
use spectral_zeta::{parse_complex, C};

pub mod acceptance;
pub mod checks;
mod commands;
pub mod fixtures;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] graph_core::GraphError),
    #[error(transparent)]
    Tree(#[from] bruhat_tits::TreeError),
    #[error(transparent)]
    Schottky(#[from] schottky::SchottkyError),
    #[error(transparent)]
    Extension(#[from] field_extension::ExtensionError),
    #[error(transparent)]
    Shift(#[from] shift_dynamics::ShiftError),
    #[error(transparent)]
    Operator(#[from] operator_algebra::OperatorError),
    #[error(transparent)]
    Zeta(#[from] spectral_zeta::ZetaError),
    #[error(transparent)]
    Foam(#[from] foam_graph::FoamError),
}

#[derive(Debug, Parser)]
#[command(name = "mumford", version, about = "Trees, quotient graphs, subshift filtrations and local-factor determinants")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write the subcommand's table as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlphabetArg {
    Walks,
    Paths,
}

impl From<AlphabetArg> for Alphabet {
    fn from(a: AlphabetArg) -> Self {
        match a {
            AlphabetArg::Walks => Alphabet::Walks,
            AlphabetArg::Paths => Alphabet::Paths,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TailArg {
    Frontier,
    TerminalLoop,
}

impl From<TailArg> for TailConvention {
    fn from(t: TailArg) -> Self {
        match t {
            TailArg::Frontier => TailConvention::Frontier,
            TailArg::TerminalLoop => TailConvention::TerminalLoop,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    Scaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EulerModeArg {
    Split,
    Foam,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn complex_arg(s: &str) -> Result<C, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ball in the Bruhat-Tits tree with metric and valence checks.
    Tree {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Matrix `a,b,c,d` whose translation length is compared with its displacement.
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
    },
    /// Quotient dual graph of a Schottky group.
    Schottky {
        #[arg(long)]
        p: u64,
        /// Generator `a,b,c,d` (rationals allowed); repeat for each generator.
        #[arg(long = "gen", required = true, allow_hyphen_values = true)]
        generators: Vec<String>,
        #[arg(long, default_value_t = 4)]
        word_bound: usize,
        /// Word length for the convex hull of axes.
        #[arg(long, default_value_t = 3)]
        word_len: usize,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Reduction level `n`; the bare core when absent.
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value_t = 16)]
        tail_depth: usize,
        #[arg(long, value_enum, default_value_t = TailArg::Frontier)]
        tail_convention: TailArg,
        #[arg(long)]
        quotient_word_len: Option<usize>,
        /// Subdivide edges until all generator loops have equal length.
        #[arg(long)]
        equalize: bool,
        #[arg(long, default_value_t = 16)]
        budget: usize,
        /// Suppress valence-two vertices (heuristic).
        #[arg(long)]
        smooth: bool,
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Edge matrix or graph of a ramified extension.
    #[command(group(ArgGroup::new("input").required(true).args(["matrix", "graph"])))]
    Extend {
        #[arg(long, value_parser = positive)]
        e: usize,
        #[arg(long, default_value_t = 1)]
        f: u32,
        /// CSV of 0/1 rows.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Graph document path or `builtin:NAME`.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// θ-counts and filtration ranks, with θ checked by enumeration.
    Sft {
        #[arg(long)]
        graph: String,
        #[arg(long, value_parser = positive, default_value_t = 5)]
        nmax: usize,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, value_enum, default_value_t = AlphabetArg::Walks)]
        alphabet: AlphabetArg,
    },
    /// Shadow measure on a tree patch: additivity and shift invariance.
    Measure {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 5)]
        radius: usize,
        #[arg(long, value_parser = positive, default_value_t = 4)]
        len: usize,
        /// Comma-separated edge ids of a cylinder to evaluate.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 0)]
        marking: usize,
    },
    /// Truncated Cuntz-Krieger family and its relation report.
    Ck {
        #[arg(long)]
        graph: String,
        #[arg(long, visible_alias = "N", default_value_t = 4)]
        truncation: usize,
        #[arg(long, value_enum, default_value_t = AlphabetArg::Paths)]
        alphabet: AlphabetArg,
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
    /// Eigenvalues of the Dirac operator by level.
    Dirac {
        #[arg(long, value_enum, default_value_t = VariantArg::Scaled)]
        variant: VariantArg,
        #[arg(long = "l", value_parser = positive, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
    },
    /// Regularized determinant against the local Euler factor.
    Euler {
        #[arg(long, value_enum)]
        mode: EulerModeArg,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long = "l", value_parser = positive, default_value_t = 1)]
        ell: usize,
        /// Eigenvalue document (JSON array) for foam mode.
        #[arg(long)]
        lambdas: Option<PathBuf>,
        /// A grid point `re+imj`; repeatable.
        #[arg(long = "s", value_parser = complex_arg, allow_hyphen_values = true)]
        s: Vec<C>,
        /// Comma-separated grid points.
        #[arg(long, allow_hyphen_values = true)]
        s_grid: Option<String>,
    },
    /// Foam graph, per-eigenvalue embeddings and the product factor.
    Foam {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        lambdas: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, value_parser = positive, default_value_t = 2)]
        nmax: usize,
        #[arg(long, value_parser = positive, default_value_t = 4)]
        depth: usize,
        /// Saturation valence for tail vertices; `q+1` when absent.
        #[arg(long)]
        valence: Option<usize>,
        #[arg(long = "s", value_parser = complex_arg, allow_hyphen_values = true)]
        s: Vec<C>,
        #[arg(long, allow_hyphen_values = true)]
        s_grid: Option<String>,
    },
    /// Runs the acceptance suite.
    Selftest {
        /// Restrict to these criteria.
        #[arg(long)]
        only: Vec<u8>,
    },
}

/// Result of one invocation, with output already rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub(crate) struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub ok: bool,
}

/// Parses `argv` (program name first), runs the subcommand and writes any requested files.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::InvalidValue | ErrorKind::ValueValidation => EXIT_INVALID,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            return if code == EXIT_OK { Outcome { code, stdout: text, stderr: String::new() } } else { Outcome { code, stdout: String::new(), stderr: text } };
        }
    };
    match run(&cli) {
        Ok(o) => o,
        Err(e) => Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let report = commands::run(&cli.command)?;
    let mut text = serde_json::to_string_pretty(&report.json)?;
    text.push('\n');
    let mut stdout = String::new();
    match &cli.out {
        Some(path) => write_file(path, &text)?,
        None => stdout = text,
    }
    if let Some(path) = &cli.csv {
        let table = report.csv.as_ref().ok_or_else(|| CliError::Invalid("this subcommand has no CSV table".into()))?;
        write_file(path, table)?;
    }
    let (code, stderr) = if report.ok { (EXIT_OK, String::new()) } else { (EXIT_TOLERANCE, "a check failed at its tolerance; see the report\n".to_string()) };
    Ok(Outcome { code, stdout, stderr })
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// `builtin:NAME` or the path of a graph document.
pub fn load_graph(spec: &str) -> Result<DirectedGraph, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return fixtures::builtin(name).ok_or_else(|| CliError::Invalid(format!("unknown builtin graph {name:?}; known: {}", fixtures::BUILTINS.join(", "))));
    }
    Ok(GraphDocument::from_json(&read_file(Path::new(spec))?)?.to_graph()?)
}

/// Square 0/1 matrix indexed by positive edges `0, 2, 4, …`.
pub fn matrix_from_rows(rows: Vec<Vec<u8>>) -> Result<EdgeMatrix, CliError> {
    let n = rows.len();
    if n == 0 {
        return Err(CliError::Invalid("empty matrix".into()));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(CliError::Invalid(format!("row {i} has {} entries, expected {n}", r.len())));
        }
        if let Some(j) = r.iter().position(|&x| x > 1) {
            return Err(CliError::Invalid(format!("entry ({i},{j}) is not 0 or 1")));
        }
    }
    Ok(EdgeMatrix { index: (0..n).map(|k| 2 * k).collect(), entries: rows })
}

pub fn parse_matrix_csv(text: &str) -> Result<EdgeMatrix, CliError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|x| x.parse::<u8>().map_err(|_| CliError::Invalid(format!("matrix entry {x:?} is not 0 or 1"))))
            .collect::<Result<Vec<u8>, _>>()?;
        rows.push(row);
    }
    matrix_from_rows(rows)
}

pub fn matrix_csv(m: &EdgeMatrix) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &m.entries {
        w.write_record(r.iter().map(u8::to_string))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Invalid(e.to_string()))
}

fn parse_grid(points: &[C], grid: Option<&str>) -> Result<Vec<C>, CliError> {
    let mut out = points.to_vec();
    if let Some(g) = grid {
        for part in g.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            out.push(parse_complex(part)?);
        }
    }
    if out.is_empty() {
        out = acceptance::s_grid();
    }
    Ok(out)
}
