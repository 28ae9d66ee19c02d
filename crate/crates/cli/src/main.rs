//! `brzeta`: exact zeta functions of modules over orders from the command line.
//!
//! Exit codes: 0 success, 1 other failure, 2 invalid input, 3 formula
//! violation (or a failed verification), 4 budget exceeded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use brzeta::hereditary::{HereditaryModule, HereditarySpec};
use brzeta::hey::{hey_product, SemisimpleData};
use brzeta::oracle::{ChainData, ModelSpec};
use brzeta::prolif::{hom_slice_dirichlet, lifted_hey, lustig_coeffs, rossmann_coeffs, SliceBase};
use brzeta::verify::{run_suite, VerifyOptions, SUITES};
use brzeta::{Error, TruncatedSeries};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "brzeta", version, about = "Exact truncated zeta functions of modules over orders")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Emit Dirichlet coefficients a_n for n <= N instead of the series.
    #[arg(long, value_name = "N", global = true)]
    dirichlet: Option<u64>,
    /// Write the result to a file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sum,
    SingleSliver,
    BrsFactored,
}

#[derive(Subcommand)]
enum Command {
    /// Hey's product for a semisimple top.
    Hey {
        /// Semisimple data as JSON, or @path.
        #[arg(long)]
        data: String,
        #[arg(long, short)]
        truncate: u32,
    },
    /// Zeta functions of a lattice over the basic hereditary order.
    Hereditary {
        /// `{"q":2,"n":2,"columns":[1,2]}`, or @path.
        #[arg(long)]
        spec: String,
        #[arg(long, short)]
        truncate: u32,
        /// Only submodules with this top class, e.g. `1,1`.
        #[arg(long, value_delimiter = ',')]
        partial: Option<Vec<u32>>,
        /// Keep the top class as the second set of variables.
        #[arg(long, conflicts_with = "partial")]
        two_variable: bool,
    },
    /// The lifted Hey product.
    LiftedHey {
        #[arg(long)]
        data: String,
        /// 1-based permutation of the entries, e.g. `2,1`.
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<usize>>,
        #[arg(long, short)]
        truncate: u32,
    },
    /// Proliferation from a slice base.
    Prolif {
        /// `{"base":{..},"sigma":[..],"truncate":B}`, or @path.
        #[arg(long)]
        input: String,
        /// Overrides the bound in the input.
        #[arg(long, short)]
        truncate: Option<u32>,
        #[arg(long, value_enum, default_value_t = Mode::Sum)]
        mode: Mode,
        /// Assert that all finite colength submodules of M/IM are isomorphic.
        #[arg(long)]
        assume_isomorphic: bool,
    },
    /// Ideal counts of F_q[[u,t]] by colength.
    Lustig {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        max: u32,
    },
    /// Dirichlet coefficients of the ideal zeta function of Z[[t]].
    Rossmann {
        #[arg(long)]
        max: u64,
    },
    /// Dirichlet coefficients when all simple modules are isomorphic.
    HomSlice {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s_count: u32,
        #[arg(long)]
        max: u64,
    },
    /// Brute-force enumeration over a finite model.
    Oracle {
        /// Model description as JSON, or @path.
        #[arg(long)]
        model: String,
        #[arg(long)]
        colength: u32,
        #[arg(long, value_delimiter = ',')]
        partial: Option<Vec<u32>>,
        /// Restrict to the fiber of a chain `{"tops":[..],"quotients":[..]}`.
        #[arg(long)]
        fiber: Option<String>,
    },
    /// Run verification suites.
    Verify {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest Dirichlet index for the Rossmann suite.
        #[arg(long)]
        max: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Wall-clock budget; exceeding it exits with code 4.
        #[arg(long)]
        budget_secs: Option<u64>,
    },
}

enum Failure {
    Engine(Error),
    Verify(String),
    Timeout(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Engine(e) => match e {
                Error::FormulaViolation { .. } | Error::PseudoConvergence(_) => 3,
                Error::Budget { .. } => 4,
                Error::NonUnit => 1,
                _ => 2,
            },
            Failure::Verify(_) => 3,
            Failure::Timeout(_) => 4,
            Failure::Io(_) => 1,
        }
    }
}

fn read_arg(s: &str) -> Result<String, Failure> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn parse<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T, Failure> {
    serde_json::from_str(&read_arg(s)?).map_err(|e| Error::InvalidInput(format!("{what}: {e}")).into())
}

fn big_table_json(t: &BTreeMap<u64, BigInt>) -> Value {
    Value::Array(t.iter().map(|(n, a)| json!({"n": n, "a": a.to_string()})).collect())
}

fn big_table_csv(header: &str, t: &BTreeMap<u64, BigInt>) -> String {
    let mut s = format!("{header}\n");
    for (n, a) in t {
        let _ = writeln!(s, "{n},{a}");
    }
    s
}

struct Printer {
    format: Format,
    dirichlet: Option<u64>,
}

impl Printer {
    fn series(&self, z: &TruncatedSeries) -> Result<String, Failure> {
        if let Some(n_max) = self.dirichlet {
            let table = z.dirichlet_coeffs(n_max);
            return Ok(match self.format {
                Format::Json => {
                    let coeffs: Vec<Value> =
                        table.coeffs.iter().map(|(n, a)| json!({"n": n, "a": a.to_string()})).collect();
                    pretty(&json!({"n_max": n_max, "complete": table.complete, "coeffs": coeffs}))
                }
                Format::Csv => {
                    let mut s = String::from("n,a_n\n");
                    for (n, a) in &table.coeffs {
                        let _ = writeln!(s, "{n},{a}");
                    }
                    s
                }
            });
        }
        Ok(match self.format {
            Format::Json => z.to_json() + "\n",
            Format::Csv => {
                let mut s = String::from("monomial,coefficient\n");
                for (m, c) in z.terms() {
                    let _ = writeln!(s, "{},{c}", m.display(z.alphabet()));
                }
                s
            }
        })
    }

    fn table(&self, header: &str, t: &BTreeMap<u64, BigInt>) -> String {
        match self.format {
            Format::Json => pretty(&big_table_json(t)),
            Format::Csv => big_table_csv(header, t),
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: Cli) -> Result<String, Failure> {
    let p = Printer { format: cli.format, dirichlet: cli.dirichlet };
    match cli.command {
        Command::Hey { data, truncate } => {
            let data: SemisimpleData = parse("semisimple data", &data)?;
            p.series(&hey_product(&data, truncate)?)
        }
        Command::Hereditary { spec, truncate, partial, two_variable } => {
            let spec: HereditarySpec = parse("hereditary spec", &spec)?;
            let module = HereditaryModule::from_spec(&spec)?;
            let z = match (partial, two_variable) {
                (Some(top), _) => module.partial_zeta(&top, truncate)?,
                (None, true) => module.brz_two_variable(truncate)?,
                (None, false) => module.total_zeta(truncate)?,
            };
            p.series(&z)
        }
        Command::LiftedHey { data, sigma, truncate } => {
            let data: SemisimpleData = parse("semisimple data", &data)?;
            let sigma: Vec<usize> = match sigma {
                Some(s) if s.contains(&0) => return Err(Error::InvalidInput("sigma is 1-based".into()).into()),
                Some(s) => s.into_iter().map(|i| i - 1).collect(),
                None => (0..data.entries.len()).collect(),
            };
            p.series(&lifted_hey(&data, &sigma, truncate)?)
        }
        Command::Prolif { input, truncate, mode, assume_isomorphic } => {
            let (base, bound) = SliceBase::from_json(&read_arg(&input)?)?;
            let bound = truncate
                .or(bound)
                .ok_or_else(|| Error::InvalidInput("no truncation bound given".into()))?;
            match mode {
                Mode::Sum => p.series(&base.proliferation_sum(bound)?),
                Mode::SingleSliver => p.series(&base.single_sliver(bound, assume_isomorphic)?),
                Mode::BrsFactored => {
                    let (prefactor, remainder) = base.brs_factored_prolif(bound)?;
                    match p.format {
                        Format::Json if p.dirichlet.is_none() => Ok(pretty(&json!({
                            "prefactor": serde_json::to_value(prefactor.to_document()).expect("serializable"),
                            "remainder": serde_json::to_value(remainder.to_document()).expect("serializable"),
                        }))),
                        _ => p.series(&prefactor.mul(&remainder)?),
                    }
                }
            }
        }
        Command::Lustig { q, max } => {
            let c = lustig_coeffs(q, max)?;
            let t: BTreeMap<u64, BigInt> = c.into_iter().enumerate().map(|(i, a)| (i as u64, a)).collect();
            Ok(match p.format {
                Format::Json => pretty(&json!({"q": q, "coeffs": t.values().map(ToString::to_string).collect::<Vec<_>>()})),
                Format::Csv => big_table_csv("i,a_i", &t),
            })
        }
        Command::Rossmann { max } => Ok(p.table("n,a_n", &rossmann_coeffs(max)?)),
        Command::HomSlice { q, r, m, s_count, max } => Ok(p.table("n,a_n", &hom_slice_dirichlet(q, r, m, s_count, max)?)),
        Command::Oracle { model, colength, partial, fiber } => {
            let spec: ModelSpec = parse("model", &model)?;
            let rep = spec.build()?;
            let lattice = rep.submodule_bfs(colength)?;
            let z = match fiber {
                Some(chain) => {
                    let chain: ChainData = parse("chain", &chain)?;
                    let mut z = TruncatedSeries::zero(rep.alphabet(), colength);
                    for x in rep.fiber_enumerate(&lattice, &chain)? {
                        if partial.as_ref().map_or(true, |t| &x.top == t) {
                            let m = brzeta::Monomial::from_exponents(x.class.clone());
                            z = z.add(&TruncatedSeries::monomial(rep.alphabet(), colength, m, brzeta::series::rat(1)))?;
                        }
                    }
                    z
                }
                None => rep.empirical_zeta(&lattice, partial.as_deref()),
            };
            p.series(&z)
        }
        Command::Verify { suite, max, seed, budget_secs } => {
            let mut opts = VerifyOptions::default();
            if let Some(m) = max {
                opts.rossmann_max = m;
            }
            if let Some(s) = seed {
                opts.seed = s;
            }
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let start = Instant::now();
            let budget = budget_secs.map(Duration::from_secs);
            let mut out = String::new();
            let mut failed = Vec::new();
            for name in names {
                let report = run_suite(name, &opts)?;
                let _ = writeln!(out, "{report}");
                for c in report.failures() {
                    let m = c.mismatch.as_ref().expect("failed check");
                    let _ = writeln!(out, "    {}: at {} expected {} got {}", c.label, m.monomial, m.expected, m.actual);
                }
                if !report.passed() {
                    failed.push(report.name);
                }
                if budget.is_some_and(|b| start.elapsed() > b) {
                    return Err(Failure::Timeout(format!("{out}verification budget of {}s exceeded", budget_secs.unwrap_or(0))));
                }
            }
            if failed.is_empty() {
                Ok(out)
            } else {
                Err(Failure::Verify(format!("{out}failing suites: {}", failed.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok(text) => {
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let code = f.code();
            match f {
                Failure::Engine(e) => eprintln!("error: {e}"),
                Failure::Verify(s) | Failure::Timeout(s) => {
                    print!("{s}");
                    if !s.ends_with('\n') {
                        println!();
                    }
                }
                Failure::Io(s) => eprintln!("error: {s}"),
            }
            ExitCode::from(code)
        }
    }
}
