//! Command-line front end for the `decode-sim` binary.
//!
//! Sweep settings may come from a TOML file (`--config`) whose keys mirror
//! the long flags; flags given on the command line win.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::codes::{CodeId, LinearCode};
use crate::error::{Error, Result};
use crate::graph::{detect_cycles, parse_graph};
use crate::stochastic::{DecisionWindow, StochasticConfig};

use super::{
    emit_asymptote, emit_csv, parse_ebno_list, parse_ebno_range, run_sweep, DecoderSpec, Simulator,
    SweepConfig,
};

#[derive(Debug, Parser)]
#[command(
    name = "decode-sim",
    version,
    about = "BER simulation for stochastic and sum-product decoders"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate BER over a list of Eb/N0 points and print CSV.
    Sweep(Box<SweepArgs>),
    /// Print the minimum-distance asymptote as CSV.
    Asymptote {
        #[arg(long)]
        code: String,
        /// Inclusive grid `lo:hi:step`, in dB.
        #[arg(long = "ebno-range")]
        ebno_range: String,
    },
    /// Parse and check a graph file.
    ValidateGraph {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepArgs {
    /// TOML file with default values for any of the flags below.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// hamming16_11 or product256_121.
    #[arg(long)]
    pub code: Option<String>,
    /// sum_product, relaxation, stochastic or map.
    #[arg(long)]
    pub decoder: Option<String>,
    /// Packet length in time-steps (stochastic).
    #[arg(long)]
    pub l: Option<usize>,
    /// Packets (stochastic) or flooding iterations (reference decoders).
    #[arg(long)]
    pub iters: Option<usize>,
    /// replacement or accumulation (stochastic).
    #[arg(long)]
    pub mode: Option<String>,
    /// Decision histogram window: full or last (stochastic).
    #[arg(long)]
    pub window: Option<String>,
    /// Relaxation parameter in (0, 1).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Comma-separated Eb/N0 points in dB.
    #[arg(long)]
    pub ebno: Option<EbnoList>,
    #[arg(long = "stop-errors")]
    pub stop_errors: Option<u64>,
    #[arg(long = "max-frames")]
    pub max_frames: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write an `edge,t,symbol` trace of the first frame here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

/// Eb/N0 points, written as `"3,4,5"` on the command line or as a list
/// (or the same string) in a config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum EbnoList {
    List(Vec<f64>),
    Text(String),
}

impl std::str::FromStr for EbnoList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ebno_list(s).map(EbnoList::List)
    }
}

impl EbnoList {
    fn points(&self) -> Result<Vec<f64>> {
        match self {
            EbnoList::List(v) => Ok(v.clone()),
            EbnoList::Text(s) => parse_ebno_list(s),
        }
    }
}

impl SweepArgs {
    /// Fills unset fields from `file`.
    pub fn or(self, file: SweepArgs) -> SweepArgs {
        SweepArgs {
            config: self.config,
            code: self.code.or(file.code),
            decoder: self.decoder.or(file.decoder),
            l: self.l.or(file.l),
            iters: self.iters.or(file.iters),
            mode: self.mode.or(file.mode),
            window: self.window.or(file.window),
            beta: self.beta.or(file.beta),
            ebno: self.ebno.or(file.ebno),
            stop_errors: self.stop_errors.or(file.stop_errors),
            max_frames: self.max_frames.or(file.max_frames),
            seed: self.seed.or(file.seed),
            threads: self.threads.or(file.threads),
            out: self.out.or(file.out),
            trace: self.trace.or(file.trace),
        }
    }

    /// Fills unset fields from the config file, if one was given.
    pub fn merged(self) -> Result<SweepArgs> {
        match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                let file: SweepArgs = toml::from_str(&text).map_err(|e| {
                    Error::ConfigInvalid(format!("{}: {}", path.display(), e.message()))
                })?;
                Ok(self.or(file))
            }
            None => Ok(self),
        }
    }

    /// Merges the config file, if any, and builds a validated sweep.
    pub fn resolve(self) -> Result<SweepConfig> {
        self.merged()?.build()
    }

    fn build(&self) -> Result<SweepConfig> {
        let args = self;
        let missing = |flag: &str| Error::ConfigInvalid(format!("missing --{flag}"));
        let code: CodeId = args
            .code
            .as_deref()
            .ok_or_else(|| missing("code"))?
            .parse()?;
        let iterations = args.iters;
        let decoder = match args.decoder.as_deref().ok_or_else(|| missing("decoder"))? {
            "sum_product" => DecoderSpec::SumProduct { iterations },
            "relaxation" => DecoderSpec::Relaxation {
                beta: args.beta.ok_or_else(|| missing("beta"))?,
                iterations,
            },
            "map" => DecoderSpec::Map,
            "stochastic" => {
                let DecoderSpec::Stochastic(defaults) = DecoderSpec::stochastic_default(code)
                else {
                    unreachable!("stochastic defaults are stochastic")
                };
                let mode = match &args.mode {
                    Some(m) => m.parse()?,
                    None => defaults.mode,
                };
                let window = match &args.window {
                    Some(w) => w.parse()?,
                    None => DecisionWindow::FullRun,
                };
                DecoderSpec::Stochastic(
                    StochasticConfig::new(
                        args.l.unwrap_or(defaults.l),
                        iterations.unwrap_or(defaults.iterations),
                        mode,
                    )?
                    .with_window(window),
                )
            }
            other => {
                return Err(Error::ConfigInvalid(format!(
                    "unknown decoder {other}; expected sum_product, relaxation, stochastic or map"
                )))
            }
        };
        let points = args
            .ebno
            .as_ref()
            .ok_or_else(|| missing("ebno"))?
            .points()?;
        let seed = args.seed.ok_or_else(|| missing("seed"))?;
        let mut cfg = SweepConfig::new(code, decoder, points, seed);
        if let Some(n) = args.stop_errors {
            cfg.stop_errors = n;
        }
        if let Some(n) = args.max_frames {
            cfg.max_frames = n;
        }
        cfg.threads = args.threads.unwrap_or(0);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `{"error":"<kind>","message":"<text>"}`
pub fn error_line(e: &Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn sweep(args: SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    let args = args.merged()?;
    let cfg = args.build()?;
    if let Some(path) = &args.trace {
        let sim = Simulator::new(&cfg)?;
        let frame = sim.frame(0, 0, cfg.ebn0_points[0])?;
        let mut file = io::BufWriter::new(fs::File::create(path)?);
        sim.decode_traced(&frame, &mut file)?;
        file.flush()?;
    }
    let records = run_sweep(&cfg)?;
    write_output(args.out.as_deref(), &emit_csv(&records), stdout)
}

/// Runs one parsed command, writing results to `stdout`.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => sweep(*args, stdout),
        Command::Asymptote { code, ebno_range } => {
            let code: CodeId = code.parse()?;
            let points = parse_ebno_range(&ebno_range)?;
            let text = match code {
                CodeId::Hamming16_11 => {
                    emit_asymptote(&LinearCode::extended_hamming_16_11(), &points)?
                }
                CodeId::Product256_121 => return Err(Error::CodebookTooLarge(code.k())),
            };
            write_output(None, &text, stdout)
        }
        Command::ValidateGraph { graph } => {
            let g = parse_graph(&fs::read_to_string(&graph)?)?;
            if let Some(cycle) = detect_cycles(&g).into_iter().next() {
                return Err(Error::UncoveredCycle(cycle));
            }
            let line = serde_json::json!({
                "ok": true,
                "variables": g.variables().len(),
                "constraints": g.constraints().len(),
                "edges": g.edges().len(),
                "supernode_edges": g.supernode_edges().len(),
                "observables": g.observables().len(),
                "acyclic": g.is_acyclic(),
            });
            writeln!(stdout, "{line}")?;
            Ok(())
        }
    }
}

/// Entry point for the binary: returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, &mut io::stdout().lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            1
        }
    }
}
