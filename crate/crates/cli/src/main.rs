//! `grouplab`: command-line access to the free-group toolkit.
//!
//! Exit codes: 0 success, 1 well-formed negative verdict, 2 usage or input
//! error, 3 failed internal assertion.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use grouplab::distortion::{distortion_profile, hnn_presentation, minimal_c16_k};
use grouplab::freegroup::{parse_word_lines, parse_word_list};
use grouplab::genericity::{fit_decay, run_experiment, ExperimentConfig, Mode, Property, ZeroPolicy, DEFAULT_BUDGET};
use grouplab::hypgeom::{analyze, fuzz_suite, PathSpec};
use grouplab::smallcancel::{check_c16, DehnReducer};
use grouplab::stallings::{conjugates_avoid, intersect, is_malnormal};
use grouplab::{Alphabet, CoreGraph, Error, Presentation, Word};

#[derive(Parser)]
#[command(name = "grouplab", version, about = "Free-group algorithms from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Presentation,
}

#[derive(Args)]
struct SubgroupArgs {
    /// Rank of the free group.
    #[arg(long)]
    rank: usize,
    /// Generators, separated by commas or spaces.
    #[arg(long, allow_hyphen_values = true)]
    gens: Option<String>,
    /// File with one generator per line (`-` for stdin).
    #[arg(long)]
    gens_file: Option<String>,
}

#[derive(Args)]
struct RelatorArgs {
    /// Presentation file: `rank n`, then one relator per line (`-` for stdin).
    #[arg(long)]
    relators_file: Option<String>,
    /// Rank, when relators are given inline with `--relators`.
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    relators: Option<String>,
    /// Use the HNN presentation for this K instead.
    #[arg(long = "K")]
    k: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Stallings core graph of a subgroup.
    Fold {
        #[command(flatten)]
        sub: SubgroupArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Membership of words in a subgroup.
    Member {
        #[command(flatten)]
        sub: SubgroupArgs,
        #[arg(long)]
        words: String,
    },
    /// Intersection of two subgroups.
    Intersect {
        #[command(flatten)]
        sub: SubgroupArgs,
        /// Generators of the second subgroup.
        #[arg(long)]
        other: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Malnormality with a witness when it fails.
    Malnormal {
        #[command(flatten)]
        sub: SubgroupArgs,
    },
    /// Whether the subgroup meets every conjugate of the given subgroups
    /// trivially.
    Avoid {
        #[command(flatten)]
        sub: SubgroupArgs,
        /// Generators of one fixed subgroup; repeat for several.
        #[arg(long = "subgroup", required = true)]
        subgroups: Vec<String>,
    },
    /// The C'(1/6) condition with the longest pieces.
    C16 {
        #[command(flatten)]
        rel: RelatorArgs,
    },
    /// Dehn's algorithm on words.
    Dehn {
        #[command(flatten)]
        rel: RelatorArgs,
        #[arg(long)]
        words: String,
    },
    /// Brute-force (λ, ε)-quasigeodesic check of a path.
    Quasigeo {
        #[arg(long)]
        path_file: String,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
    /// Hypotheses and conclusions of the geodesic inequality for a path, or a
    /// fuzz suite of random tree paths.
    Audit {
        #[arg(long, required_unless_present = "fuzz")]
        path_file: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Number of random tree paths to generate instead.
        #[arg(long, conflicts_with = "path_file")]
        fuzz: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Proportions of random tuples with the selected properties.
    Generic(GenericArgs),
    /// Iterated lengths of the substitution and the HNN presentation.
    Distortion {
        #[arg(long = "K", required_unless_present = "min_k")]
        k: Option<u64>,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Report the least K up to this bound whose presentation is C'(1/6).
        #[arg(long)]
        min_k: Option<u64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    MonteCarlo,
}

#[derive(Args)]
struct GenericArgs {
    /// JSON experiment config; other experiment flags are ignored.
    #[arg(long)]
    config: Option<String>,
    #[arg(long, default_value_t = 2)]
    rank: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Word lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    t: Vec<usize>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Count all lengths up to t instead of exactly t.
    #[arg(long)]
    cumulative: bool,
    #[arg(long, value_delimiter = ',', default_value = "MALNORMAL_IN_F")]
    props: Vec<String>,
    #[arg(long = "subgroup")]
    subgroups: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long)]
    workers: Option<usize>,
    /// Append a fit of `ln(1 - p)` against `t`.
    #[arg(long)]
    fit: bool,
    /// Replace zero failure counts by half a failure in the fit.
    #[arg(long)]
    half_count: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

/// What a command prints and how it exits.
struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }

    fn verdict(stdout: String, holds: bool) -> Self {
        Outcome {
            stdout,
            code: if holds { 0 } else { 1 },
        }
    }
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundViolated { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

impl SubgroupArgs {
    fn alphabet(&self) -> Result<Alphabet, Failure> {
        Ok(Alphabet::new(self.rank)?)
    }

    fn generators(&self) -> Result<Vec<Word>, Failure> {
        let alphabet = self.alphabet()?;
        match (&self.gens, &self.gens_file) {
            (Some(g), None) => Ok(parse_word_list(alphabet, g)?),
            (None, Some(f)) => Ok(parse_word_lines(alphabet, &read_input(f)?)?),
            _ => Err(Failure::Usage("give exactly one of --gens and --gens-file".into())),
        }
    }

    fn graph(&self) -> Result<CoreGraph, Failure> {
        Ok(CoreGraph::fold(self.alphabet()?, &self.generators()?)?)
    }
}

impl RelatorArgs {
    fn presentation(&self) -> Result<Presentation, Failure> {
        match (&self.relators_file, &self.relators, self.k) {
            (Some(f), None, None) => Ok(Presentation::parse(&read_input(f)?)?),
            (None, Some(r), None) => {
                let rank = self
                    .rank
                    .ok_or_else(|| Failure::Usage("--relators needs --rank".into()))?;
                let alphabet = Alphabet::new(rank)?;
                Ok(Presentation::new(alphabet, parse_word_list(alphabet, r)?)?)
            }
            (None, None, Some(k)) => Ok(hnn_presentation(k)?),
            _ => Err(Failure::Usage(
                "give exactly one of --relators-file, --relators or --K".into(),
            )),
        }
    }
}

fn graph_output(g: &CoreGraph, format: Format) -> CmdResult {
    match format {
        Format::Json => Ok(Outcome::ok(to_json(&g.summary()))),
        Format::Dot => Ok(Outcome::ok(g.to_dot())),
        _ => Err(Failure::Usage("graphs are printed as json or dot".into())),
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Fold { sub, format } => graph_output(&sub.graph()?, format),
        Command::Member { sub, words } => {
            let g = sub.graph()?;
            let words = parse_word_list(sub.alphabet()?, &words)?;
            let mut all = true;
            let rows: Vec<_> = words
                .iter()
                .map(|w| {
                    let member = g.contains(w)?;
                    all &= member;
                    Ok(json!({"word": w, "member": member}))
                })
                .collect::<Result<_, Error>>()?;
            Ok(Outcome::verdict(to_json(&rows), all))
        }
        Command::Intersect { sub, other, format } => {
            let h = sub.graph()?;
            let k = CoreGraph::fold(sub.alphabet()?, &parse_word_list(sub.alphabet()?, &other)?)?;
            graph_output(&intersect(&h, &k)?, format)
        }
        Command::Malnormal { sub } => {
            let g = sub.graph()?;
            let cert = is_malnormal(&g);
            if !cert.verify(&g) {
                return Err(Failure::Internal("malnormality witness failed its re-check".into()));
            }
            Ok(Outcome::verdict(to_json(&cert), cert.malnormal))
        }
        Command::Avoid { sub, subgroups } => {
            let alphabet = sub.alphabet()?;
            let m = sub.graph()?;
            let hs = subgroups
                .iter()
                .enumerate()
                .map(|(index, gens)| {
                    let h = CoreGraph::fold(alphabet, &parse_word_list(alphabet, gens)?)?;
                    match h.finite_index() {
                        Some(finite_index) => Err(Error::FiniteIndexSubgroup { index, finite_index }),
                        None => Ok(h),
                    }
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let witness = conjugates_avoid(&m, &hs)?;
            if let Some(w) = &witness {
                if !w.verify(&m, &hs) {
                    return Err(Failure::Internal("conjugate witness failed its re-check".into()));
                }
            }
            let holds = witness.is_none();
            Ok(Outcome::verdict(to_json(&json!({"avoids": holds, "witness": witness})), holds))
        }
        Command::C16 { rel } => {
            let report = check_c16(&rel.presentation()?);
            Ok(Outcome::verdict(to_json(&report), report.c16))
        }
        Command::Dehn { rel, words } => {
            let p = rel.presentation()?;
            let reducer = DehnReducer::new(&p);
            let words = parse_word_list(p.alphabet(), &words)?;
            let rows: Vec<_> = words
                .iter()
                .map(|w| {
                    let out = reducer.reduce(w)?;
                    Ok(json!({
                        "word": w,
                        "reduced": out.word,
                        "steps": out.steps,
                        "trivial": out.is_trivial(),
                        "guaranteed": out.guaranteed,
                    }))
                })
                .collect::<Result<_, Error>>()?;
            Ok(Outcome::ok(to_json(&rows)))
        }
        Command::Quasigeo { path_file, lambda, eps } => {
            let spec = PathSpec::from_json(&read_input(&path_file)?)?;
            let analysis = analyze(&spec, lambda, eps)?;
            let q = analysis.quasigeodesic;
            let holds = q.holds;
            Ok(Outcome::verdict(to_json(&q), holds))
        }
        Command::Audit {
            path_file,
            lambda,
            eps,
            fuzz,
            seed,
            rank,
        } => match (path_file, fuzz) {
            (_, Some(cases)) => audit_fuzz(cases, seed, rank, lambda, eps),
            (Some(path), None) => {
                let spec = PathSpec::from_json(&read_input(&path)?)?;
                let analysis = analyze(&spec, lambda, eps)?;
                let Some(audit) = &analysis.audit else {
                    // hypotheses fail: print the report, refuse the conclusions
                    io::stdout().write_all(to_json(&analysis).as_bytes()).ok();
                    return Err(Failure::Usage("hypotheses of the geodesic inequality fail".into()));
                };
                let code = if audit.holds() { 0 } else { 3 };
                Ok(Outcome {
                    stdout: to_json(&analysis),
                    code,
                })
            }
            (None, None) => Err(Failure::Usage("give --path-file or --fuzz".into())),
        },
        Command::Generic(args) => generic(args),
        Command::Distortion { k, n, format, min_k } => {
            if let Some(bound) = min_k {
                let found = minimal_c16_k(bound)?;
                return Ok(Outcome::ok(to_json(&json!({"searched_up_to": bound, "minimal_k": found}))));
            }
            let k = k.expect("required without --min-k");
            match format {
                Format::Presentation => Ok(Outcome::ok(hnn_presentation(k)?.to_string())),
                Format::Csv => {
                    let rows = distortion_profile(k, n)?;
                    let mut out = String::from("n,length,bound,ratio,fstar_length\n");
                    for r in rows {
                        out.push_str(&format!("{},{},{},{},{}\n", r.n, r.length, r.bound, r.ratio, r.fstar_length));
                    }
                    Ok(Outcome::ok(out))
                }
                Format::Json => Ok(Outcome::ok(to_json(&distortion_profile(k, n)?))),
                Format::Dot => Err(Failure::Usage("distortion prints csv, json or presentation".into())),
            }
        }
    }
}

fn audit_fuzz(cases: usize, seed: u64, rank: usize, lambda: f64, eps: f64) -> CmdResult {
    let alphabet = Alphabet::new(rank)?;
    if rank < 2 {
        return Err(Failure::Usage("fuzzing needs rank at least 2".into()));
    }
    let summary = fuzz_suite(alphabet, cases, seed, lambda, eps)?;
    Ok(Outcome {
        stdout: to_json(&summary),
        code: if summary.audit_holds() { 0 } else { 3 },
    })
}

#[derive(Serialize)]
struct GenericOutput<'a> {
    #[serde(flatten)]
    report: &'a grouplab::genericity::ExperimentReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<grouplab::genericity::DecayFit>,
}

fn generic(args: GenericArgs) -> CmdResult {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_json(&read_input(path)?)?,
        None => {
            if args.t.is_empty() {
                return Err(Failure::Usage("--t is required without --config".into()));
            }
            let props = args
                .props
                .iter()
                .map(|p| p.parse::<Property>())
                .collect::<Result<Vec<_>, _>>()?;
            let mode = match args.mode {
                ModeArg::Exhaustive => Mode::Exhaustive {
                    cumulative: args.cumulative,
                },
                ModeArg::MonteCarlo => Mode::MonteCarlo {
                    samples: args.samples,
                    seed: args.seed,
                    cumulative: args.cumulative,
                },
            };
            ExperimentConfig {
                rank: args.rank,
                m: args.m,
                ts: args.t.clone(),
                mode,
                props,
                subgroups: args
                    .subgroups
                    .iter()
                    .map(|g| g.split([',', ' ', ';']).filter(|s| !s.is_empty()).map(String::from).collect())
                    .collect(),
                budget: args.budget,
            }
        }
    };
    if let Mode::Exhaustive { cumulative } = config.mode {
        if let Some((t, census)) = config.over_budget() {
            eprintln!(
                "warning: census of {census} tuples at t = {t} exceeds the budget of {}; switching to monte-carlo with {} samples (seed {})",
                config.budget, args.samples, args.seed
            );
            config.mode = Mode::MonteCarlo {
                samples: args.samples,
                seed: args.seed,
                cumulative,
            };
        }
    }
    let report = run_experiment(&config, args.workers)?;
    let fit = if args.fit {
        let policy = if args.half_count {
            ZeroPolicy::HalfCount
        } else {
            ZeroPolicy::Exclude
        };
        match fit_decay(&report, policy) {
            Ok(f) => Some(f),
            Err(e) => {
                eprintln!("warning: no decay fit: {e}");
                None
            }
        }
    } else {
        None
    };
    match args.format {
        Format::Json => Ok(Outcome::ok(to_json(&GenericOutput { report: &report, fit }))),
        Format::Csv => {
            if let Some(f) = &fit {
                eprintln!("fit: {}", serde_json::to_string(f).expect("serializable"));
            }
            Ok(Outcome::ok(report.to_csv()))
        }
        _ => Err(Failure::Usage("generic prints csv or json".into())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(3)
        }
    }
}
