//! Command-line front end: parse a polynomial, run the pipeline (or just the
//! spectrum stage), and print text or JSON; `verify` replays a corpus of
//! expected results.

use crate::error::Error;
use crate::exactmath::{rat_parse, rat_str, Rat};
use crate::pipeline::{self, CheckLevel, MonodromyData, RunConfig};
use crate::polyring::parse::parse_poly;
use crate::spectrum::SpectrumData;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gmtame",
    version,
    about = "Exact spectra, good bases and monodromy of tame polynomials"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Checks {
    Off,
    Fast,
    Full,
}

impl Checks {
    fn level(self) -> CheckLevel {
        match self {
            Checks::Off => CheckLevel::Off,
            Checks::Fast => CheckLevel::Fast,
            Checks::Full => CheckLevel::Full,
        }
    }
}

#[derive(clap::Args)]
struct RunArgs {
    /// Polynomial over Q, e.g. "x^2 + y^2 + x^2*y^2"
    input: String,
    /// Comma-separated variable order; default: order of first appearance
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Checks::Fast)]
    checks: Checks,
    /// Cap on the lattice approximation degree
    #[arg(long)]
    k_max: Option<u32>,
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the singularity spectrum
    Spectrum(RunArgs),
    /// Compute a good basis, its t-action matrices, and the monodromy
    Goodbasis(RunArgs),
    /// Re-run a corpus of polynomials against expected results
    Verify {
        /// Path to a JSON corpus file
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Checks::Fast)]
        checks: Checks,
        #[arg(long)]
        k_max: Option<u32>,
        /// Number of worker threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        verbose: bool,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::NotIsolated => 3,
        Error::IterationCapExceeded { .. } | Error::SaturationDiverged => 4,
        _ => 5,
    }
}

fn config_of(checks: Checks, k_max: Option<u32>, verbose: bool) -> RunConfig {
    RunConfig {
        k_max,
        checks: checks.level(),
        verbose,
    }
}

fn spectrum_json(s: &SpectrumData) -> serde_json::Value {
    json!({
        "mu": s.mu,
        "spectrum": s.values.iter().map(|(a, m)| json!({
            "alpha": rat_str(a),
            "mult": m,
        })).collect::<Vec<_>>(),
        "mean": rat_str(&s.mean),
    })
}

fn monodromy_json(m: &MonodromyData) -> serde_json::Value {
    serde_json::Value::Array(
        m.classes
            .iter()
            .map(|c| {
                json!({
                    "class": rat_str(&c.class_rep),
                    "mult": c.mult,
                    "partition": c.partition,
                })
            })
            .collect(),
    )
}

fn print_spectrum_text(s: &SpectrumData) {
    println!("mu = {}", s.mu);
    for (a, m) in &s.values {
        println!("  {}: {}", rat_str(a), m);
    }
    println!("mean = {}", rat_str(&s.mean));
}

fn print_monodromy_text(m: &MonodromyData) {
    println!("monodromy at infinity (eigenvalue exp(-2*pi*i*class)):");
    for c in &m.classes {
        let parts: Vec<String> = c.partition.iter().map(|p| p.to_string()).collect();
        println!(
            "  class {}: multiplicity {}, Jordan partition [{}]",
            rat_str(&c.class_rep),
            c.mult,
            parts.join(", ")
        );
    }
}

fn qmatrix_json(m: &crate::exactmath::QMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.rows)
            .map(|i| {
                serde_json::Value::Array(
                    (0..m.cols)
                        .map(|j| serde_json::Value::String(rat_str(&m[(i, j)])))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn qmatrix_text(m: &crate::exactmath::QMatrix) -> String {
    (0..m.rows)
        .map(|i| {
            let row: Vec<String> = (0..m.cols).map(|j| rat_str(&m[(i, j)])).collect();
            format!("  [{}]", row.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_spectrum(args: &RunArgs) -> Result<(), Error> {
    let (f, vars) = parse_poly(&args.input, args.vars.as_deref())?;
    let config = config_of(args.checks, args.k_max, args.verbose);
    let (s, stats) = pipeline::run_spectrum(&f, &config)?;
    if args.verbose {
        eprintln!(
            "variables: {}; k = {}, k0 = {}, l = {}, retries = {}",
            vars.join(", "),
            stats.k_final,
            stats.k0,
            stats.l,
            stats.mean_retries
        );
    }
    match args.format {
        Format::Text => print_spectrum_text(&s),
        Format::Json => println!("{}", spectrum_json(&s)),
    }
    Ok(())
}

fn cmd_goodbasis(args: &RunArgs) -> Result<(), Error> {
    let (f, vars) = parse_poly(&args.input, args.vars.as_deref())?;
    let config = config_of(args.checks, args.k_max, args.verbose);
    let out = pipeline::run(&f, &config)?;
    if args.verbose {
        eprintln!(
            "variables: {}; k = {}, k0 = {}, l = {}, retries = {}",
            vars.join(", "),
            out.stats.k_final,
            out.stats.k0,
            out.stats.l,
            out.stats.mean_retries
        );
    }
    match args.format {
        Format::Text => {
            println!("mu = {}", out.mu);
            println!("good basis:");
            for (j, phi) in out.phis.iter().enumerate() {
                println!("  phi_{} = {}", j + 1, phi.render(&vars));
            }
            println!("A0 =");
            println!("{}", qmatrix_text(&out.a0));
            println!("A1 =");
            println!("{}", qmatrix_text(&out.a1));
            println!("spectrum:");
            for (a, m) in &out.spectrum.values {
                println!("  {}: {}", rat_str(a), m);
            }
            println!("mean = {}", rat_str(&out.spectrum.mean));
            print_monodromy_text(&out.monodromy);
        }
        Format::Json => {
            let v = json!({
                "mu": out.mu,
                "phis": out.phis.iter().map(|p| p.render(&vars)).collect::<Vec<_>>(),
                "a0": qmatrix_json(&out.a0),
                "a1": qmatrix_json(&out.a1),
                "spectrum": spectrum_json(&out.spectrum)["spectrum"].clone(),
                "mean": rat_str(&out.spectrum.mean),
                "monodromy": monodromy_json(&out.monodromy),
            });
            println!("{}", v);
        }
    }
    Ok(())
}

#[derive(Deserialize, Clone)]
struct CorpusSpectrumEntry {
    alpha: String,
    mult: usize,
}

#[derive(Deserialize, Clone)]
struct CorpusMonodromyEntry {
    class: String,
    mult: usize,
    partition: Vec<usize>,
}

#[derive(Deserialize, Clone)]
struct CorpusRecord {
    name: String,
    polynomial: String,
    #[serde(default)]
    vars: Option<Vec<String>>,
    mu: usize,
    spectrum: Vec<CorpusSpectrumEntry>,
    #[serde(default)]
    mean: Option<String>,
    #[serde(default)]
    monodromy: Option<Vec<CorpusMonodromyEntry>>,
}

fn parse_corpus_rat(s: &str) -> Result<Rat, Error> {
    rat_parse(s).ok_or_else(|| Error::Parse {
        pos: 0,
        msg: format!("bad rational in corpus: {:?}", s),
    })
}

fn check_record(rec: &CorpusRecord, config: &RunConfig) -> Result<Vec<String>, Error> {
    let (f, _) = parse_poly(&rec.polynomial, rec.vars.as_deref())?;
    let out = pipeline::run(&f, config)?;
    let mut diffs = Vec::new();
    if out.mu != rec.mu {
        diffs.push(format!("mu: got {}, expected {}", out.mu, rec.mu));
    }
    let expected: Result<Vec<(Rat, usize)>, Error> = rec
        .spectrum
        .iter()
        .map(|e| Ok((parse_corpus_rat(&e.alpha)?, e.mult)))
        .collect();
    let expected = expected?;
    if out.spectrum.values != expected {
        let got: Vec<String> = out
            .spectrum
            .values
            .iter()
            .map(|(a, m)| format!("{}:{}", rat_str(a), m))
            .collect();
        diffs.push(format!("spectrum: got {{{}}}", got.join(", ")));
    }
    if let Some(mean) = &rec.mean {
        let mean = parse_corpus_rat(mean)?;
        if out.spectrum.mean != mean {
            diffs.push(format!("mean: got {}", rat_str(&out.spectrum.mean)));
        }
    }
    if let Some(expected_mono) = &rec.monodromy {
        let expected: Result<Vec<(Rat, usize, Vec<usize>)>, Error> = expected_mono
            .iter()
            .map(|e| Ok((parse_corpus_rat(&e.class)?, e.mult, e.partition.clone())))
            .collect();
        let expected = expected?;
        let got: Vec<(Rat, usize, Vec<usize>)> = out
            .monodromy
            .classes
            .iter()
            .map(|c| (c.class_rep.clone(), c.mult, c.partition.clone()))
            .collect();
        if got != expected {
            let s: Vec<String> = got
                .iter()
                .map(|(c, m, p)| format!("{}:{}:{:?}", rat_str(c), m, p))
                .collect();
            diffs.push(format!("monodromy: got [{}]", s.join("; ")));
        }
    }
    Ok(diffs)
}

fn cmd_verify(
    input: &PathBuf,
    checks: Checks,
    k_max: Option<u32>,
    jobs: usize,
    verbose: bool,
) -> Result<bool, Error> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Error::Internal(format!("cannot read corpus: {}", e)))?;
    let records: Vec<CorpusRecord> = serde_json::from_str(&text)
        .map_err(|e| Error::Internal(format!("corpus is not valid JSON: {}", e)))?;
    if records.is_empty() {
        eprintln!("warning: empty corpus");
        return Ok(true);
    }
    let config = config_of(checks, k_max, verbose);
    let jobs = jobs.max(1).min(records.len());
    let results: Vec<(String, Result<Vec<String>, Error>)> = std::thread::scope(|scope| {
        let chunks: Vec<Vec<CorpusRecord>> = records
            .chunks(records.len().div_ceil(jobs))
            .map(|c| c.to_vec())
            .collect();
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                let config = config.clone();
                scope.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|rec| {
                            let r = check_record(&rec, &config);
                            (rec.name, r)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    let mut all_ok = true;
    for (name, r) in results {
        match r {
            Ok(diffs) if diffs.is_empty() => println!("PASS {}", name),
            Ok(diffs) => {
                all_ok = false;
                println!("FAIL {}", name);
                for d in diffs {
                    println!("     {}", d);
                }
            }
            Err(e) => {
                all_ok = false;
                println!("FAIL {}: {}", name, e);
            }
        }
    }
    Ok(all_ok)
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Spectrum(args) => cmd_spectrum(args).map(|_| true),
        Cmd::Goodbasis(args) => cmd_goodbasis(args).map(|_| true),
        Cmd::Verify {
            input,
            checks,
            k_max,
            jobs,
            verbose,
        } => cmd_verify(input, *checks, *k_max, *jobs, *verbose),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}
