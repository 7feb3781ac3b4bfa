//! `swgraph`: sample, analyse and compress small-world random graphs.
//!
//! Results go to standard output as JSON (CSV for experiment tables); files
//! are written only where `--out` is given. Exit codes: 0 success, 2 invalid
//! parameters, 3 resource limit, 4 corrupt input, 1 anything else.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use swgraph::codec::{decode, encode_labelled, encode_structural, CompressedGraph, Mode};
use swgraph::entropy::{
    entropy_report, sw_entropy_asymptotic, sw_entropy_constant, sw_entropy_exact,
};
use swgraph::experiment::{
    entropy_sweep, mean_degree_experiment, s2_regimes, symmetry_survey, tails_experiment,
    z_concentration_experiment, BSpec,
};
use swgraph::model::sample_sw;
use swgraph::symmetry::DEFAULT_NODE_BUDGET;
use swgraph::{Error, LabelledGraph, ModelParams};

#[derive(Parser)]
#[command(
    name = "swgraph",
    version,
    about = "Small-world random graphs: sampling, entropy, symmetry, compression"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one graph and write it as an edge list.
    Sample {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact and asymptotic entropies.
    Entropy {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = EntropyMode::Report)]
        mode: EntropyMode,
        /// Report entropies in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Encode an edge-list file into an SWG1 container.
    Compress {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = CodecMode::Labelled)]
        mode: CodecMode,
    },
    /// Decode an SWG1 container into an edge-list file.
    Decompress {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Fail unless the container was written in this mode.
        #[arg(long, value_enum)]
        mode: Option<CodecMode>,
    },
    /// Automorphism group sizes over sampled graphs.
    Symmetry {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Monte Carlo and sweep tables, one row per grid point.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct BArgs {
    #[arg(
        long,
        required_unless_present = "b_preset",
        conflicts_with = "b_preset"
    )]
    b: Option<f64>,
    /// Derive b from n instead of giving it.
    #[arg(long, value_enum)]
    b_preset: Option<BPreset>,
}

impl BArgs {
    fn spec(&self) -> BSpec {
        match (self.b, self.b_preset) {
            (Some(b), _) => BSpec::Value(b),
            (None, Some(BPreset::Log2)) => BSpec::LogSquared,
            (None, None) => unreachable!("clap requires --b or --b-preset"),
        }
    }
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    a: f64,
    #[command(flatten)]
    b: BArgs,
}

impl ParamArgs {
    fn resolve(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(
            self.n,
            self.a,
            self.b.spec().resolve(self.n),
        )?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BPreset {
    /// `b = (ln n)²`
    Log2,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntropyMode {
    Exact,
    Asymptotic,
    Report,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CodecMode {
    Labelled,
    Structural,
}

impl From<CodecMode> for Mode {
    fn from(m: CodecMode) -> Self {
        match m {
            CodecMode::Labelled => Mode::Labelled,
            CodecMode::Structural => Mode::Structural,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    MeanDegree,
    EntropySweep,
    Tails,
    ZConcentration,
    S2Regimes,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    name: ExperimentName,
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Exponents, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<f64>,
    #[command(flatten)]
    b: BArgs,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    File(PathBuf, io::Error),
    Output(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::InvalidParams(_) | Error::Domain(_)) => 2,
            CliError::Lib(Error::ResourceLimit { .. }) => 3,
            CliError::Lib(
                Error::CorruptPayload(_)
                | Error::HeaderMismatch(_)
                | Error::Parse(_)
                | Error::NotAdmissible(_),
            ) => 4,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::File(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Output(msg) => f.write_str(msg),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::File(path.to_owned(), e))
}

fn write(path: &Path, data: &[u8]) -> CliResult<()> {
    fs::write(path, data).map_err(|e| CliError::File(path.to_owned(), e))
}

fn print_json(value: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

/// Resolved model parameters, including the preset expansion of b and c.
fn config(params: &ModelParams, b: &BArgs) -> Value {
    json!({
        "n": params.n(),
        "a": params.a(),
        "b": params.b(),
        "b_preset": b.b_preset.map(|_| "log2"),
        "c": params.c(),
    })
}

fn cmd_sample(params: &ParamArgs, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let p = params.resolve()?;
    let g = sample_sw(&p, seed);
    if let Some(path) = out {
        write(path, g.to_edge_list().as_bytes())?;
    }
    let mut cfg = config(&p, &params.b);
    cfg["seed"] = json!(seed);
    print_json(&json!({
        "config": cfg,
        "out": out.map(|p| p.display().to_string()),
        "edges": g.edge_count(),
        "max_degree": g.max_degree(),
        "mean_degree": g.mean_degree(),
    }))
}

/// Divides every entropy-valued field (`h_*`, `compressibility`) by `ln 2`.
fn to_bits(v: &mut Value) {
    if let Value::Object(map) = v {
        for (key, x) in map.iter_mut() {
            if let (true, Some(f)) = (
                key.starts_with("h_") || key == "compressibility",
                x.as_f64(),
            ) {
                *x = json!(f / std::f64::consts::LN_2);
            }
        }
    }
}

fn cmd_entropy(params: &ParamArgs, mode: EntropyMode, bits: bool) -> CliResult<()> {
    let p = params.resolve()?;
    let mut body = match mode {
        EntropyMode::Report => to_value(&entropy_report(&p)),
        EntropyMode::Exact => json!({
            "h_graph_exact": sw_entropy_exact(&p),
            "c_a": sw_entropy_constant(p.a()),
        }),
        EntropyMode::Asymptotic => json!({
            "h_graph_asymptotic": sw_entropy_asymptotic(&p),
            "c_a": sw_entropy_constant(p.a()),
        }),
    };
    if bits {
        to_bits(&mut body);
    }
    body["units"] = json!(if bits { "bits" } else { "nats" });
    body["config"] = config(&p, &params.b);
    print_json(&body)
}

fn cmd_compress(params: &ParamArgs, input: &Path, out: &Path, mode: CodecMode) -> CliResult<()> {
    let p = params.resolve()?;
    let text = String::from_utf8(read(input)?)
        .map_err(|_| Error::Parse(format!("{} is not UTF-8", input.display())))?;
    let g = LabelledGraph::parse_edge_list(&text)?;
    let c = match mode {
        CodecMode::Labelled => encode_labelled(&p, &g)?,
        CodecMode::Structural => encode_structural(&p, &g)?,
    };
    let bytes = c.to_bytes();
    write(out, &bytes)?;
    let h = sw_entropy_exact(&p);
    print_json(&json!({
        "config": config(&p, &params.b),
        "mode": Mode::from(mode),
        "edges": g.edge_count(),
        "payload_bits": c.payload_bits(),
        "container_bytes": bytes.len(),
        "h_graph_exact": h,
        "ratio": c.payload_bits() as f64 * std::f64::consts::LN_2 / h,
    }))
}

fn cmd_decompress(input: &Path, out: &Path, mode: Option<CodecMode>) -> CliResult<()> {
    let c = CompressedGraph::from_bytes(&read(input)?)?;
    if let Some(m) = mode.map(Mode::from).filter(|&m| m != c.header.mode) {
        return Err(
            Error::HeaderMismatch(format!("container is {}, expected {m}", c.header.mode)).into(),
        );
    }
    let g = decode(&c)?;
    write(out, g.to_edge_list().as_bytes())?;
    print_json(&json!({
        "header": to_value(&c.header),
        "edges": g.edge_count(),
    }))
}

fn cmd_symmetry(params: &ParamArgs, trials: u64, seed: u64, node_budget: u64) -> CliResult<()> {
    let p = params.resolve()?;
    let mut body = to_value(&symmetry_survey(&p, trials, seed, node_budget)?);
    body["config"] = config(&p, &params.b);
    print_json(&body)
}

fn emit_rows<T: Serialize>(rows: &[T], format: Format, b: &BArgs) -> CliResult<()> {
    match format {
        Format::Json => print_json(&json!({
            "b_preset": b.b_preset.map(|_| "log2"),
            "rows": to_value(&rows),
        })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            for row in rows {
                w.serialize(row)
                    .map_err(|e| CliError::Output(e.to_string()))?;
            }
            w.flush().map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

fn cmd_experiment(args: &ExperimentArgs) -> CliResult<()> {
    let b = args.b.spec();
    let grid = || -> CliResult<Vec<ModelParams>> {
        let mut out = Vec::new();
        for &a in &args.a {
            for &n in &args.n {
                out.push(ModelParams::new(n, a, b.resolve(n))?);
            }
        }
        Ok(out)
    };
    let (trials, seed) = (args.trials, args.seed);
    match args.name {
        ExperimentName::MeanDegree => {
            let rows: Vec<_> = grid()?
                .iter()
                .map(|p| mean_degree_experiment(p, trials, seed))
                .collect();
            emit_rows(&rows, args.format, &args.b)
        }
        ExperimentName::Tails => {
            let rows: Vec<_> = grid()?
                .iter()
                .map(|p| tails_experiment(p, trials, seed))
                .collect();
            emit_rows(&rows, args.format, &args.b)
        }
        ExperimentName::ZConcentration => {
            let rows: Vec<_> = grid()?
                .iter()
                .map(|p| z_concentration_experiment(p, trials, seed))
                .collect();
            emit_rows(&rows, args.format, &args.b)
        }
        ExperimentName::EntropySweep => {
            let mut rows = Vec::new();
            for &a in &args.a {
                rows.extend(entropy_sweep(a, &args.n, b)?);
            }
            emit_rows(&rows, args.format, &args.b)
        }
        ExperimentName::S2Regimes => {
            emit_rows(&s2_regimes(&args.a, &args.n, b)?, args.format, &args.b)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sample { params, seed, out } => cmd_sample(&params, seed, out.as_deref()),
        Command::Entropy { params, mode, bits } => cmd_entropy(&params, mode, bits),
        Command::Compress {
            params,
            input,
            out,
            mode,
        } => cmd_compress(&params, &input, &out, mode),
        Command::Decompress { input, out, mode } => cmd_decompress(&input, &out, mode),
        Command::Symmetry {
            params,
            trials,
            seed,
            node_budget,
        } => cmd_symmetry(&params, trials, seed, node_budget),
        Command::Experiment(args) => cmd_experiment(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => {
            let _ = io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
