use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use xplego::decoder::{monte_carlo, Channel, SampleMode, XpDecoder};
use xplego::dense;
use xplego::enumerator::{biased_distance, distance, enumerators, Axis};
use xplego::io::{load_code, run_network, CheckMatrix, Network, TraceReport};
use xplego::registry::registry;
use xplego::verify::verify_group;
use xplego::LegRole;

#[derive(Parser)]
#[command(name = "xplego", version, about = "XP stabilizer codes, Quantum Lego contraction, enumerators and decoding")]
struct Cli {
    /// Numerical tolerance for dense checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonicalize a check-matrix JSON file.
    Canonical {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the contractions in a network file and report the result.
    Trace {
        network: PathBuf,
        /// Include the dense shadow as (bitstring, re, im) triples.
        #[arg(long)]
        dense: bool,
        /// Also write the post-trace check matrix here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Weight enumerators A and B and the distance.
    Enumerate {
        /// Registry name or check-matrix file.
        code: String,
        /// Also report the X- and Z-biased distances.
        #[arg(long)]
        biased: bool,
    },
    /// Monte-Carlo logical error rate under the maximum-likelihood decoder.
    Decode {
        #[arg(long)]
        code: String,
        /// depolarizing:P, damping:G or kraus:FILE
        #[arg(long)]
        channel: String,
        #[arg(long, default_value_t = 10_000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Run the invariant suites on a code, or on every registry entry.
    Verify { code: String },
    /// Print a code's check matrix in x|z|p block layout.
    Show { code: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Twirl,
}

fn write_or_print(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn roles(legs: &[LegRole]) -> String {
    legs.iter().map(|r| if *r == LegRole::Logical { 'L' } else { 'P' }).collect()
}

/// Returns whether every check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Canonical { input, output } => {
            let text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let m = CheckMatrix::from_json(&text)?;
            let g = m.group()?.canonical_form()?;
            write_or_print(&CheckMatrix::from_group(&g, &m.designation).to_json(), output.as_ref())?;
        }
        Command::Trace { network, dense, output } => {
            let text = std::fs::read_to_string(&network).with_context(|| format!("reading {}", network.display()))?;
            let l = run_network(&Network::from_json(&text)?)?;
            let report = TraceReport::new(&l, dense)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if let Some(p) = output {
                write_or_print(&report.lego.to_json(), Some(&p))?;
            }
        }
        Command::Enumerate { code, biased } => {
            let c = load_code(&code)?;
            let p = dense::projector(&c.code_group()?)?;
            let (a, b) = enumerators(&p)?;
            println!("A = {a}");
            println!("B = {b}");
            println!("d = {}", distance(&a, &b));
            if biased {
                println!("d_X = {}", biased_distance(&p, Axis::X)?);
                println!("d_Z = {}", biased_distance(&p, Axis::Z)?);
            }
        }
        Command::Decode { code, channel, shots, seed, mode } => {
            let c = load_code(&code)?;
            let dec = XpDecoder::new(&c.code_group()?)?;
            let ch = Channel::parse(&channel)?;
            let mode = match mode {
                Mode::Exact => SampleMode::Exact,
                Mode::Twirl => SampleMode::Twirl,
            };
            let report = monte_carlo(&dec, &ch, shots, seed, mode)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Verify { code } => {
            let targets: Vec<(String, xplego::XpGroup, Vec<LegRole>)> = if code == "all" {
                registry().into_iter().map(|e| (e.name.to_string(), e.group, e.legs)).collect()
            } else {
                let c = load_code(&code)?;
                vec![(c.name, c.group, c.legs)]
            };
            let mut all_pass = true;
            for (name, g, legs) in targets {
                for c in verify_group(&g, &legs, cli.tolerance) {
                    all_pass &= c.pass;
                    let tag = if c.pass { "PASS" } else { "FAIL" };
                    let detail = if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) };
                    println!("{tag} {name}: {}{detail}", c.name);
                }
            }
            return Ok(all_pass);
        }
        Command::Show { code } => {
            let c = load_code(&code)?;
            let g = c.group.canonical_form()?;
            println!("{}  n={}  N={}  legs={}", c.name, g.n(), g.precision(), roles(&c.legs));
            println!("{}", g.render());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
