//! Command-line front end. `execute` never prints; it returns the exit code
//! and both output streams so that runs can be compared byte for byte.
//!
//! Exit codes: 0 success, 1 a verification FAIL, 2 bad input or usage.

use crate::error::{Error, Result};
use crate::linext::ExtensionTable;
use crate::oracle::{
    explore_factorization, verify_spectrum, ExplorationReport, VerificationReport,
};
use crate::poset::{parse_poset_file, Poset, DEFAULT_CAP};
use crate::rational::{fmt_q, parse_q_list};
use crate::sim::simulate;
use crate::spectra::{
    ak_a2_minus_edge_poset, ak_a2_minus_edge_spectrum, chain_union_spectrum,
    forest_ladder_spectrum, forest_spectrum, ladder_eigensystem, EigenvalueMultiset,
};
use crate::stationary::{
    poset_convergence_bound, poset_mixing_time_bound, stationary_distribution_capped,
    ProbabilityVector,
};
use crate::symmat::{evaluate, transition_from_table};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "promotion",
    version,
    about = "Promotion Markov chains on linear extensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the linear extensions in lexicographic order.
    Extensions(Common),
    /// Edges of the promotion graph: source, target, label.
    Graph(Common),
    /// The symbolic transition matrix, or its value at `--x`.
    Matrix {
        #[command(flatten)]
        common: Common,
        /// Evaluate at this parameter vector instead of printing forms.
        #[arg(long, value_name = "X")]
        eval: Option<String>,
        #[arg(long)]
        normalize: bool,
    },
    /// Eigenvalues with multiplicities.
    Spectrum(EngineArgs),
    /// Stationary distribution and partition function.
    Stationary {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        x: XArgs,
    },
    /// Mixing-time and distance-to-stationarity bounds.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        x: XArgs,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Step count for the distance bound; defaults to the mixing-time bound rounded up.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Monte-Carlo walk from the least extension; reports empirical vs stationary.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        x: XArgs,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check an engine's prediction against the exact characteristic polynomial.
    Verify {
        #[command(flatten)]
        engine: EngineArgs,
        /// Check this `form<TAB>multiplicity` list instead of an engine's output.
        #[arg(long, value_name = "FILE")]
        spectrum: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Look for a spectrum of linear forms for a poset outside the known engines.
    Explore {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct Common {
    /// Poset file (text or JSON).
    pub poset: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct XArgs {
    /// Comma-separated parameters `a1/b1,a2/b2,...`; uniform when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Rescale `--x` to sum to 1.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Args, Debug)]
pub struct EngineArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Engine::Pipeline)]
    pub engine: Engine,
    /// Size of the antichain for `a_k_a2`.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Forest,
    Chains,
    Ladder,
    Pipeline,
    #[value(name = "a_k_a2")]
    AkA2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

// JSON documents written by the CLI.

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionsJson {
    pub n: usize,
    pub count: usize,
    pub extensions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub source: String,
    pub target: String,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub basis: Vec<String>,
    /// Linear forms, or `p/q` strings when evaluated.
    pub entries: Vec<Vec<String>>,
    pub x: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueJson {
    pub value: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub n: usize,
    pub total: usize,
    pub eigenvalues: Vec<EigenvalueJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightJson {
    pub extension: String,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryJson {
    pub x: Vec<String>,
    pub weights: Vec<WeightJson>,
    pub partition: String,
    pub closed_form: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsJson {
    pub n: usize,
    pub p_x: String,
    pub c: f64,
    pub mixing_time: f64,
    pub k: u64,
    pub distance_bound: f64,
    pub in_range: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimEntryJson {
    pub extension: String,
    pub count: u64,
    pub empirical: f64,
    pub stationary: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationJson {
    pub steps: u64,
    pub trials: u64,
    pub seed: u64,
    pub generator: String,
    pub start: String,
    pub x: Vec<String>,
    pub distribution: Vec<SimEntryJson>,
    pub tv_to_stationary: f64,
    pub chernoff_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyJson {
    pub sample: usize,
    pub coefficient: usize,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub verdict: String,
    pub extensions: usize,
    pub samples: Vec<Vec<String>>,
    pub first_discrepancy: Option<DiscrepancyJson>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreJson {
    pub extensions: usize,
    pub candidate: Option<SpectrumJson>,
    pub unexplained_degree: usize,
    pub verification: Option<VerifyJson>,
    pub note: String,
}

/// A real rounded to 12 significant digits.
pub fn round_real(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

pub fn fmt_real(v: f64) -> String {
    round_real(v).to_string()
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output documents serialize");
    s.push('\n');
    s
}

fn spectrum_json(s: &EigenvalueMultiset) -> SpectrumJson {
    SpectrumJson {
        n: s.n_vars(),
        total: s.total(),
        eigenvalues: s
            .iter()
            .map(|(f, m)| EigenvalueJson {
                value: f.to_string(),
                multiplicity: m,
            })
            .collect(),
    }
}

fn verify_json(r: &VerificationReport) -> VerifyJson {
    VerifyJson {
        verdict: if r.passed() { "PASS" } else { "FAIL" }.into(),
        extensions: r.extensions,
        samples: r.samples.clone(),
        first_discrepancy: r.first_discrepancy.as_ref().map(|d| DiscrepancyJson {
            sample: d.sample,
            coefficient: d.coefficient,
            expected: d.expected.clone(),
            got: d.got.clone(),
        }),
        note: r.note.into(),
    }
}

fn load(common: &Common) -> Result<Poset> {
    match &common.poset {
        Some(path) => parse_poset_file(path),
        None => Err(Error::Parse("a poset file is required".into())),
    }
}

fn parse_x(x: &XArgs, n: usize) -> Result<ProbabilityVector> {
    let Some(src) = &x.x else {
        return Ok(ProbabilityVector::uniform(n));
    };
    let v = parse_q_list(src)?;
    if v.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: v.len(),
        });
    }
    if x.normalize {
        ProbabilityVector::normalized(v)
    } else {
        ProbabilityVector::new(v)
    }
}

fn engine_spectrum(args: &EngineArgs) -> Result<(Poset, EigenvalueMultiset)> {
    if args.engine == Engine::AkA2 {
        let k = args
            .k
            .ok_or_else(|| Error::Parse("--engine a_k_a2 needs --k".into()))?;
        let p = ak_a2_minus_edge_poset(k)?;
        if args.common.poset.is_some() && load(&args.common)? != p {
            return Err(Error::Class(format!(
                "poset file differs from the k = {k} family member"
            )));
        }
        return Ok((p, ak_a2_minus_edge_spectrum(k)?));
    }
    let p = load(&args.common)?;
    let s = match args.engine {
        Engine::Forest => forest_spectrum(&p)?,
        Engine::Chains => chain_union_spectrum(&p)?,
        Engine::Ladder => {
            let mut s = EigenvalueMultiset::new(p.n());
            for pair in ladder_eigensystem(&p)? {
                s.insert(pair.value, 1);
            }
            s
        }
        Engine::Pipeline => forest_ladder_spectrum(&p)?,
        Engine::AkA2 => unreachable!(),
    };
    Ok((p, s))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Extensions(common) => {
            let p = load(&common)?;
            let table = ExtensionTable::build_capped(&p, DEFAULT_CAP)?;
            let words: Vec<String> = table.extensions.iter().map(|e| e.to_string()).collect();
            Ok(Outcome::ok(match common.format {
                Format::Tsv => words.iter().map(|w| format!("{w}\n")).collect(),
                Format::Json => to_json(&ExtensionsJson {
                    n: p.n(),
                    count: words.len(),
                    extensions: words,
                }),
            }))
        }
        Command::Graph(common) => {
            let p = load(&common)?;
            let table = ExtensionTable::build_capped(&p, DEFAULT_CAP)?;
            let edges: Vec<EdgeJson> = table
                .hat
                .iter()
                .enumerate()
                .flat_map(|(s, row)| {
                    let table = &table;
                    row.iter().enumerate().map(move |(k0, &t)| EdgeJson {
                        source: table.extensions[s].to_string(),
                        target: table.extensions[t].to_string(),
                        k: k0 + 1,
                    })
                })
                .collect();
            Ok(Outcome::ok(match common.format {
                Format::Tsv => edges
                    .iter()
                    .map(|e| format!("{}\t{}\t{}\n", e.source, e.target, e.k))
                    .collect(),
                Format::Json => to_json(&GraphJson { n: p.n(), edges }),
            }))
        }
        Command::Matrix {
            common,
            eval,
            normalize,
        } => {
            let p = load(&common)?;
            let table = ExtensionTable::build_capped(&p, DEFAULT_CAP)?;
            let m = transition_from_table(p.n(), &table);
            let basis: Vec<String> = table.extensions.iter().map(|e| e.to_string()).collect();
            let dim = m.dim();
            let (entries, x): (Vec<Vec<String>>, _) = match eval {
                None => (
                    (0..dim)
                        .map(|r| m.row(r).iter().map(|f| f.to_string()).collect())
                        .collect(),
                    None,
                ),
                Some(src) => {
                    let x = parse_x(
                        &XArgs {
                            x: Some(src),
                            normalize,
                        },
                        p.n(),
                    )?;
                    let v = evaluate(&m, x.x())?;
                    (
                        (0..dim)
                            .map(|r| (0..dim).map(|c| fmt_q(v.get(r, c))).collect())
                            .collect(),
                        Some(x.x().iter().map(fmt_q).collect()),
                    )
                }
            };
            Ok(Outcome::ok(match common.format {
                Format::Tsv => entries.iter().map(|row| row.join("\t") + "\n").collect(),
                Format::Json => to_json(&MatrixJson {
                    n: p.n(),
                    basis,
                    entries,
                    x,
                }),
            }))
        }
        Command::Spectrum(args) => {
            let (_, s) = engine_spectrum(&args)?;
            Ok(Outcome::ok(match args.common.format {
                Format::Tsv => s.to_string(),
                Format::Json => to_json(&spectrum_json(&s)),
            }))
        }
        Command::Stationary { common, x } => {
            let p = load(&common)?;
            let x = parse_x(&x, p.n())?;
            let r = stationary_distribution_capped(&p, &x, DEFAULT_CAP)?;
            Ok(Outcome::ok(match common.format {
                Format::Tsv => {
                    let mut out = String::new();
                    for (e, w) in r.extensions.iter().zip(&r.weights) {
                        let _ = writeln!(out, "{e}\t{}", fmt_q(w));
                    }
                    let _ = writeln!(out, "Z_P = {}", fmt_q(&r.partition));
                    out
                }
                Format::Json => to_json(&StationaryJson {
                    x: x.x().iter().map(fmt_q).collect(),
                    weights: r
                        .extensions
                        .iter()
                        .zip(&r.weights)
                        .map(|(e, w)| WeightJson {
                            extension: e.to_string(),
                            weight: fmt_q(w),
                        })
                        .collect(),
                    partition: fmt_q(&r.partition),
                    closed_form: r.closed_form,
                }),
            }))
        }
        Command::Bounds { common, x, c, k } => {
            let p = load(&common)?;
            let x = parse_x(&x, p.n())?;
            let mixing = poset_mixing_time_bound(&p, &x, c)?;
            let k = k.unwrap_or(mixing.ceil() as u64);
            let bound = poset_convergence_bound(&p, &x, k)?;
            let doc = BoundsJson {
                n: p.n(),
                p_x: fmt_q(&x.min()),
                c: round_real(c),
                mixing_time: round_real(mixing),
                k,
                distance_bound: round_real(bound.value),
                in_range: bound.in_range,
            };
            Ok(Outcome::ok(match common.format {
                Format::Tsv => format!(
                    "mixing_time\t{}\ndistance_bound\t{}\tk = {}\n",
                    fmt_real(mixing),
                    fmt_real(bound.value),
                    k
                ),
                Format::Json => to_json(&doc),
            }))
        }
        Command::Simulate {
            common,
            x,
            steps,
            trials,
            seed,
        } => {
            let p = load(&common)?;
            let x = parse_x(&x, p.n())?;
            let r = simulate(&p, &x, steps, trials, seed)?;
            let doc = SimulationJson {
                steps: r.steps,
                trials: r.trials,
                seed: r.seed,
                generator: r.generator.into(),
                start: r.start.to_string(),
                x: x.x().iter().map(fmt_q).collect(),
                distribution: r
                    .distribution
                    .iter()
                    .map(|e| SimEntryJson {
                        extension: e.extension.to_string(),
                        count: e.count,
                        empirical: round_real(e.empirical),
                        stationary: round_real(e.stationary),
                    })
                    .collect(),
                tv_to_stationary: round_real(r.tv_to_stationary),
                chernoff_bound: r.chernoff_bound.map(round_real),
            };
            Ok(Outcome::ok(to_json(&doc)))
        }
        Command::Verify {
            engine,
            spectrum,
            samples,
            seed,
        } => {
            let (p, s) = match spectrum {
                None => engine_spectrum(&engine)?,
                Some(path) => {
                    let p = load(&engine.common)?;
                    let src = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    let s = EigenvalueMultiset::parse(&src, p.n())?;
                    (p, s)
                }
            };
            let r = verify_spectrum(&p, &s, samples, seed)?;
            let stdout = match engine.common.format {
                Format::Tsv => format!("{r}\n"),
                Format::Json => to_json(&verify_json(&r)),
            };
            Ok(Outcome {
                code: if r.passed() { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            })
        }
        Command::Explore {
            common,
            samples,
            seed,
        } => {
            let p = load(&common)?;
            let r = explore_factorization(&p, samples, seed)?;
            let failed = r.verification.as_ref().is_some_and(|v| !v.passed());
            let stdout = match common.format {
                Format::Tsv => explore_tsv(&r),
                Format::Json => to_json(&ExploreJson {
                    extensions: r.extensions,
                    candidate: r.candidate.as_ref().map(spectrum_json),
                    unexplained_degree: r.unexplained_degree,
                    verification: r.verification.as_ref().map(verify_json),
                    note: r.note.into(),
                }),
            };
            Ok(Outcome {
                code: if failed { 1 } else { 0 },
                stdout,
                stderr: String::new(),
            })
        }
    }
}

fn explore_tsv(r: &ExplorationReport) -> String {
    let mut out = String::new();
    match &r.candidate {
        Some(s) => out.push_str(&s.to_string()),
        None => {
            let _ = writeln!(
                out,
                "no candidate: {} of {} eigenvalues are not {{-1,0,1}} forms",
                r.unexplained_degree, r.extensions
            );
        }
    }
    if let Some(v) = &r.verification {
        let _ = writeln!(out, "{v}");
    }
    let _ = writeln!(out, "# {}", r.note);
    out
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match run(cli) {
        Ok(out) => out,
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
