use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::{
    count_cyclically_reduced, enumerate_cyclically_reduced, sample_cyclically_reduced,
    sample_cyclically_reduced_upto, Alphabet, Word,
};

use super::property::{Evaluator, Property};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Environment variable read for the worker count when none is given.
pub const WORKERS_ENV: &str = "GROUPLAB_WORKERS";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mode {
    /// Every ordered m-tuple of cyclically reduced words of length exactly
    /// `t`, or of length `1..=t` when `cumulative`.
    Exhaustive {
        #[serde(default)]
        cumulative: bool,
    },
    /// `samples` independent uniform tuples per `t`.
    MonteCarlo {
        samples: u64,
        seed: u64,
        #[serde(default)]
        cumulative: bool,
    },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exhaustive { .. } => "exhaustive",
            Mode::MonteCarlo { .. } => "monte-carlo",
        }
    }

    fn cumulative(&self) -> bool {
        match *self {
            Mode::Exhaustive { cumulative } | Mode::MonteCarlo { cumulative, .. } => cumulative,
        }
    }
}

fn default_budget() -> u128 {
    DEFAULT_BUDGET
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub rank: usize,
    pub m: usize,
    pub ts: Vec<usize>,
    pub mode: Mode,
    pub props: Vec<Property>,
    /// Generators of each fixed subgroup `H_i`, in word text.
    #[serde(default)]
    pub subgroups: Vec<Vec<String>>,
    /// Largest tuple census allowed in exhaustive mode.
    #[serde(default = "default_budget")]
    pub budget: u128,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            text: text.chars().take(80).collect(),
            reason: e.to_string(),
        })
    }

    /// Number of tuples an exhaustive run at `t` would visit, if it fits in
    /// a `u128`.
    pub fn census(&self, t: usize) -> Option<u128> {
        let alphabet = Alphabet::new(self.rank).ok()?;
        let words = if self.mode.cumulative() {
            (1..=t).try_fold(0u128, |acc, k| acc.checked_add(count_cyclically_reduced(alphabet, k)?))?
        } else {
            count_cyclically_reduced(alphabet, t)?
        };
        words.checked_pow(self.m as u32)
    }

    /// First `t` whose census is over budget, with the census (saturated).
    pub fn over_budget(&self) -> Option<(usize, u128)> {
        self.ts.iter().find_map(|&t| {
            let census = self.census(t).unwrap_or(u128::MAX);
            (census > self.budget).then_some((t, census))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub t: usize,
    /// `N`: tuples counted or sampled.
    #[serde(rename = "N")]
    pub total: u64,
    /// `N_P`: tuples satisfying every selected property.
    #[serde(rename = "N_P")]
    pub satisfying: u64,
    pub proportion: f64,
    /// Failure count per property, in the order of `props`.
    pub failures: Vec<u64>,
    /// Failure witnesses that did not pass their re-check; always 0 unless
    /// something is broken.
    pub uncertified: u64,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub rank: usize,
    pub m: usize,
    pub mode: Mode,
    pub props: Vec<Property>,
    pub rows: Vec<ReportRow>,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    total: u64,
    satisfying: u64,
    failures: Vec<u64>,
    uncertified: u64,
}

impl Tally {
    fn new(k: usize) -> Self {
        Tally {
            failures: vec![0; k],
            ..Tally::default()
        }
    }

    fn add(&mut self, ev: &Evaluator, words: &[Word]) -> Result<()> {
        let verdicts = ev.evaluate(words)?;
        self.total += 1;
        let mut all = true;
        for (i, v) in verdicts.iter().enumerate() {
            if !v.holds {
                all = false;
                self.failures[i] += 1;
            }
            if !v.certified {
                self.uncertified += 1;
            }
        }
        if all {
            self.satisfying += 1;
        }
        Ok(())
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.satisfying += other.satisfying;
        self.uncertified += other.uncertified;
        for (a, b) in self.failures.iter_mut().zip(other.failures) {
            *a += b;
        }
        self
    }
}

const CHUNK: usize = 1 << 12;

fn census_words(alphabet: Alphabet, t: usize, cumulative: bool) -> impl Iterator<Item = Word> {
    let lengths = if cumulative { 1..=t } else { t..=t };
    lengths.flat_map(move |k| enumerate_cyclically_reduced(alphabet, k))
}

fn run_exhaustive(ev: &Evaluator, t: usize, cumulative: bool) -> Result<Tally> {
    let k = ev.props().len();
    let alphabet = ev.alphabet();
    if ev.m() == 1 {
        // stream the words in chunks so the census is never held in memory
        let mut words = census_words(alphabet, t, cumulative);
        let mut tally = Tally::new(k);
        loop {
            let chunk: Vec<Word> = words.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                return Ok(tally);
            }
            let part = chunk
                .par_iter()
                .try_fold(
                    || Tally::new(k),
                    |mut acc, w| {
                        acc.add(ev, std::slice::from_ref(w))?;
                        Ok::<_, Error>(acc)
                    },
                )
                .try_reduce(|| Tally::new(k), |a, b| Ok(a.merge(b)))?;
            tally = tally.merge(part);
        }
    }
    let base: Vec<Word> = census_words(alphabet, t, cumulative).collect();
    let m = ev.m() as u32;
    let total = (base.len() as u64).pow(m);
    (0..total)
        .into_par_iter()
        .try_fold(
            || (Tally::new(k), Vec::with_capacity(m as usize)),
            |(mut acc, mut tuple): (Tally, Vec<Word>), mut index| {
                tuple.clear();
                for _ in 0..m {
                    tuple.push(base[(index % base.len() as u64) as usize].clone());
                    index /= base.len() as u64;
                }
                acc.add(ev, &tuple)?;
                Ok::<_, Error>((acc, tuple))
            },
        )
        .map(|r| r.map(|(acc, _)| acc))
        .try_reduce(|| Tally::new(k), |a, b| Ok(a.merge(b)))
}

/// Word `k` of sample `i` is drawn from stream `i * m + k`, so every tuple is
/// a pure function of `(seed, t, i)`.
fn run_monte_carlo(ev: &Evaluator, t: usize, samples: u64, seed: u64, cumulative: bool) -> Result<Tally> {
    let k = ev.props().len();
    let m = ev.m() as u64;
    let alphabet = ev.alphabet();
    (0..samples)
        .into_par_iter()
        .try_fold(
            || Tally::new(k),
            |mut acc, i| {
                let tuple: Vec<Word> = (0..m)
                    .map(|j| {
                        if cumulative {
                            sample_cyclically_reduced_upto(alphabet, t, seed, i * m + j)
                        } else {
                            sample_cyclically_reduced(alphabet, t, seed, i * m + j)
                        }
                    })
                    .collect();
                acc.add(ev, &tuple)?;
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(|| Tally::new(k), |a, b| Ok(a.merge(b)))
}

fn worker_count(workers: Option<usize>) -> Option<usize> {
    workers.or_else(|| std::env::var(WORKERS_ENV).ok()?.trim().parse().ok()).filter(|&w| w > 0)
}

/// Runs every `t` of the config. The report depends only on the config; the
/// worker count (argument, else `GROUPLAB_WORKERS`, else all cores) changes
/// speed only.
pub fn run_experiment(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentReport> {
    let alphabet = Alphabet::new(config.rank)?;
    if config.ts.is_empty() || config.ts.contains(&0) {
        return Err(Error::InvalidParameter("t values must be a nonempty list of positive lengths".into()));
    }
    if let Mode::MonteCarlo { samples: 0, .. } = config.mode {
        return Err(Error::InvalidParameter("monte-carlo mode needs at least one sample".into()));
    }
    let ev = Evaluator::from_text(alphabet, config.m, config.props.clone(), &config.subgroups)?;
    if let Mode::Exhaustive { .. } = config.mode {
        if let Some((_, census)) = config.over_budget() {
            return Err(Error::BudgetExceeded {
                census,
                budget: config.budget,
            });
        }
    }
    let run = || -> Result<Vec<ReportRow>> {
        config
            .ts
            .iter()
            .map(|&t| {
                let tally = match config.mode {
                    Mode::Exhaustive { cumulative } => run_exhaustive(&ev, t, cumulative)?,
                    Mode::MonteCarlo {
                        samples,
                        seed,
                        cumulative,
                    } => run_monte_carlo(&ev, t, samples, seed, cumulative)?,
                };
                Ok(row(t, tally))
            })
            .collect()
    };
    let rows = match worker_count(workers) {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    Ok(ExperimentReport {
        rank: config.rank,
        m: config.m,
        mode: config.mode.clone(),
        props: config.props.clone(),
        rows,
    })
}

fn row(t: usize, tally: Tally) -> ReportRow {
    let proportion = if tally.total == 0 {
        0.0
    } else {
        tally.satisfying as f64 / tally.total as f64
    };
    let note = (tally.total > 0 && tally.satisfying == tally.total)
        .then(|| format!("no failures observed at sample size {}", tally.total));
    ReportRow {
        t,
        total: tally.total,
        satisfying: tally.satisfying,
        proportion,
        failures: tally.failures,
        uncertified: tally.uncertified,
        note,
    }
}

impl ExperimentReport {
    /// Failure count of `p` at each row, if `p` was evaluated.
    pub fn failures_of(&self, p: Property) -> Option<Vec<u64>> {
        let i = self.props.iter().position(|&q| q == p)?;
        Some(self.rows.iter().map(|r| r.failures[i]).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Columns `t, mode, N, N_P, proportion`, one failure column per
    /// property, `uncertified` and `note`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,mode,N,N_P,proportion");
        for p in &self.props {
            write!(out, ",fail_{p}").unwrap();
        }
        out.push_str(",uncertified,note\n");
        for r in &self.rows {
            write!(out, "{},{},{},{},{}", r.t, self.mode.name(), r.total, r.satisfying, r.proportion).unwrap();
            for f in &r.failures {
                write!(out, ",{f}").unwrap();
            }
            writeln!(out, ",{},{}", r.uncertified, r.note.as_deref().unwrap_or("")).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(m: usize, ts: &[usize], mode: Mode, props: &[Property]) -> ExperimentConfig {
        ExperimentConfig {
            rank: 2,
            m,
            ts: ts.to_vec(),
            mode,
            props: props.to_vec(),
            subgroups: Vec::new(),
            budget: DEFAULT_BUDGET,
        }
    }

    const EXACT: Mode = Mode::Exhaustive { cumulative: false };

    /// `w = u^k` for some `k >= 2`, by scanning the divisors of `|w|`.
    fn is_proper_power(w: &Word) -> bool {
        let ls = w.letters();
        let n = ls.len();
        (1..n).filter(|d| n % d == 0).any(|d| (d..n).all(|i| ls[i] == ls[i - d]))
    }

    #[test]
    fn small_censuses() {
        let r = run_experiment(&config(1, &[1], EXACT, &[Property::MalnormalInF]), None).unwrap();
        assert_eq!((r.rows[0].total, r.rows[0].satisfying), (4, 4));
        assert_eq!(r.rows[0].note.as_deref(), Some("no failures observed at sample size 4"));
        let r = run_experiment(&config(1, &[2], EXACT, &[Property::RankM]), None).unwrap();
        assert_eq!((r.rows[0].total, r.rows[0].satisfying), (12, 12));
        let r = run_experiment(&config(2, &[2], EXACT, &[Property::RankM]), None).unwrap();
        assert_eq!(r.rows[0].total, 144);
        // rank < 2 exactly when r2 = r1^±1
        assert_eq!(r.rows[0].failures, vec![24]);
    }

    #[test]
    fn malnormal_failures_are_proper_powers() {
        let ts = [2, 4, 6, 8];
        let r = run_experiment(&config(1, &ts, EXACT, &[Property::MalnormalInF]), None).unwrap();
        let f2 = Alphabet::new(2).unwrap();
        for (row, &t) in r.rows.iter().zip(&ts) {
            let powers = enumerate_cyclically_reduced(f2, t).filter(is_proper_power).count() as u64;
            assert_eq!(row.failures[0], powers, "t={t}");
            assert_eq!(row.uncertified, 0);
        }
        let props: Vec<f64> = r.rows.iter().map(|r| r.proportion).collect();
        assert!(props.windows(2).all(|w| w[0] <= w[1]), "{props:?}");
    }

    #[test]
    fn cumulative_mode_sums_lengths() {
        let cfg = config(1, &[3], Mode::Exhaustive { cumulative: true }, &[Property::RankM]);
        assert_eq!(cfg.census(3), Some(4 + 12 + 28));
        let r = run_experiment(&cfg, None).unwrap();
        assert_eq!(r.rows[0].total, 44);
    }

    #[test]
    fn budget_is_enforced() {
        let mut cfg = config(2, &[6], EXACT, &[Property::RankM]);
        cfg.budget = 1000;
        assert!(matches!(run_experiment(&cfg, None), Err(Error::BudgetExceeded { budget: 1000, .. })));
        cfg.mode = Mode::MonteCarlo {
            samples: 50,
            seed: 1,
            cumulative: false,
        };
        assert_eq!(run_experiment(&cfg, None).unwrap().rows[0].total, 50);
    }

    #[test]
    fn reports_are_deterministic_across_workers() {
        let mut cfg = config(
            2,
            &[5, 9],
            Mode::MonteCarlo {
                samples: 400,
                seed: 42,
                cumulative: false,
            },
            &[Property::C16, Property::MalnormalInF, Property::AvoidConjugates],
        );
        cfg.subgroups = vec![vec!["ab".into()]];
        let a = run_experiment(&cfg, Some(1)).unwrap();
        let b = run_experiment(&cfg, Some(4)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_csv(), b.to_csv());
        let ex = run_experiment(&config(1, &[6], EXACT, &[Property::C16]), Some(3)).unwrap();
        assert_eq!(ex, run_experiment(&config(1, &[6], EXACT, &[Property::C16]), Some(1)).unwrap());
    }

    #[test]
    fn monte_carlo_agrees_with_exhaustive() {
        for t in [4, 6, 8] {
            let ex = run_experiment(&config(1, &[t], EXACT, &[Property::MalnormalInF]), None).unwrap();
            let samples = 4000;
            let mc = run_experiment(
                &config(
                    1,
                    &[t],
                    Mode::MonteCarlo {
                        samples,
                        seed: 7,
                        cumulative: false,
                    },
                    &[Property::MalnormalInF],
                ),
                None,
            )
            .unwrap();
            let p = ex.rows[0].proportion;
            let sigma = (p * (1.0 - p) / samples as f64).sqrt();
            assert!((mc.rows[0].proportion - p).abs() <= 3.0 * sigma + 1e-12, "t={t}");
        }
    }

    #[test]
    fn csv_layout() {
        let r = run_experiment(&config(1, &[2], EXACT, &[Property::RankM, Property::MalnormalInF]), None).unwrap();
        assert_eq!(
            r.to_csv(),
            "t,mode,N,N_P,proportion,fail_RANK_M,fail_MALNORMAL_IN_F,uncertified,note\n\
             2,exhaustive,12,8,0.6666666666666666,0,4,0,\n"
        );
        assert_eq!(r.failures_of(Property::MalnormalInF), Some(vec![4]));
        assert_eq!(r.failures_of(Property::C16), None);
    }

    #[test]
    fn config_json() {
        let cfg = ExperimentConfig::from_json(
            r#"{"rank": 2, "m": 1, "ts": [2, 4], "mode": {"kind": "monte-carlo", "samples": 10, "seed": 3},
                "props": ["MALNORMAL", "HALF_READABLE_FREE"], "subgroups": [["a"]]}"#,
        )
        .unwrap();
        assert_eq!(cfg.budget, DEFAULT_BUDGET);
        assert_eq!(cfg.props, vec![Property::MalnormalInF, Property::HalfReadableFree]);
        assert_eq!(run_experiment(&cfg, None).unwrap().rows.len(), 2);
        let bad = r#"{"rank": 2, "m": 1, "ts": [2], "mode": {"kind": "exhaustive"}, "props": ["RANK_M"],
                      "subgroups": [["a", "b"]]}"#;
        let cfg = ExperimentConfig::from_json(bad).unwrap();
        assert!(matches!(run_experiment(&cfg, None), Err(Error::FiniteIndexSubgroup { .. })));
    }
}
