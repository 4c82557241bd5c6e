//! Batch experiments: suite files, per-run CSV records and summary statistics.
//!
//! A suite file is line oriented. Settings lines apply to the whole suite:
//!
//! ```text
//! pop 200
//! params 5,33,4,128,30,0
//! sigma 2000
//! init-len 1
//! substitution random
//! group instance            # or: group s
//! ```
//!
//! Instance lines name a file or a generator recipe, the number of GA runs
//! and the first GA seed (runs use `seed, seed + 1, ...`):
//!
//! ```text
//! instance inst/a.txt repeat 3 seed 5
//! instance gen:n=10,la=128,lx=16,ly=16,seed=1 repeat 10 seed 100
//! instance gen:n=20,la-max=750,lx-max=150,ly-max=150,s-min=15,s-max=30,seed=7 repeat 1 seed 1 count 5
//! ```
//!
//! `count m` builds `m` instances from one recipe with instance seeds
//! `seed, seed + 1, ...`.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dcsp::{is_solution, DcspInstance, InstanceFile};
use crate::error::{Error, Result};
use crate::ga::{run, GaConfig, Outcome, ParameterSet, SubstitutionMode};
use crate::instance_gen::{draw_lengths, generate, InstanceSpec, Layout};
use crate::word::reduced_length;

pub const S_INTERVAL: f64 = 15.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub n: usize,
    pub l_a: usize,
    pub l_x: usize,
    pub l_y: usize,
    pub s: f64,
    pub seed: u64,
    pub success: bool,
    pub generations: usize,
    pub time_ms: u64,
    pub final_cost: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grouping {
    ByInstance,
    /// Half-open intervals `[15k, 15k + 15)` of the witness mean length `s`.
    ByS,
}

/// Statistics over the successful runs of a group. The optional fields are
/// `None` when no run in the group succeeded.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryStats {
    pub key: String,
    pub runs: usize,
    pub successes: usize,
    pub mean_g: Option<f64>,
    /// Seconds.
    pub mean_t: Option<f64>,
    /// Sample standard deviation; 0 for a single run.
    pub stddev_g: Option<f64>,
    pub sec_per_gen: Option<f64>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_stddev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn stats_for(key: String, group: &[&RunRecord]) -> SummaryStats {
    let ok: Vec<&&RunRecord> = group.iter().filter(|r| r.success).collect();
    let (mut mean_g, mut mean_t, mut stddev_g, mut sec_per_gen) = (None, None, None, None);
    if !ok.is_empty() {
        let gs: Vec<f64> = ok.iter().map(|r| r.generations as f64).collect();
        let ts: Vec<f64> = ok.iter().map(|r| r.time_ms as f64 / 1000.0).collect();
        let (g, t) = (mean(&gs), mean(&ts));
        mean_g = Some(g);
        mean_t = Some(t);
        stddev_g = Some(sample_stddev(&gs));
        sec_per_gen = Some(if g > 0.0 { t / g } else { 0.0 });
    }
    SummaryStats {
        key,
        runs: group.len(),
        successes: ok.len(),
        mean_g,
        mean_t,
        stddev_g,
        sec_per_gen,
    }
}

pub fn summarize(records: &[RunRecord], grouping: Grouping) -> Vec<SummaryStats> {
    match grouping {
        Grouping::ByInstance => {
            let mut groups: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
            for r in records {
                groups.entry(&r.instance_id).or_default().push(r);
            }
            groups
                .into_iter()
                .map(|(k, g)| stats_for(k.to_string(), &g))
                .collect()
        }
        Grouping::ByS => {
            let mut groups: BTreeMap<i64, Vec<&RunRecord>> = BTreeMap::new();
            for r in records {
                let bucket = (r.s / S_INTERVAL).floor() as i64;
                groups.entry(bucket).or_default().push(r);
            }
            groups
                .into_iter()
                .map(|(b, g)| {
                    let lo = b as f64 * S_INTERVAL;
                    stats_for(format!("{}-{}", lo, lo + S_INTERVAL), &g)
                })
                .collect()
        }
    }
}

pub fn format_summary(stats: &[SummaryStats]) -> String {
    let opt = |x: Option<f64>, prec: usize| x.map_or("-".to_string(), |v| format!("{v:.prec$}"));
    let mut out = format!(
        "{:<12} {:>5} {:>5} {:>10} {:>10} {:>10} {:>8}\n",
        "group", "runs", "ok", "mean_g", "mean_t", "stddev_g", "sec/gen"
    );
    for s in stats {
        out.push_str(&format!(
            "{:<12} {:>5} {:>5} {:>10} {:>10} {:>10} {:>8}\n",
            s.key,
            s.runs,
            s.successes,
            opt(s.mean_g, 1),
            opt(s.mean_t, 2),
            opt(s.stddev_g, 1),
            opt(s.sec_per_gen, 4),
        ));
    }
    out
}

const CSV_PREAMBLE: &str = "# vershik-ga run records; summary stddev_g uses the sample (n-1) convention\n";

pub fn write_csv<W: io::Write>(mut out: W, records: &[RunRecord]) -> Result<()> {
    let io_err = |e: io::Error| Error::InvalidSpec(format!("writing CSV: {e}"));
    out.write_all(CSV_PREAMBLE.as_bytes()).map_err(io_err)?;
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
    for r in records {
        w.serialize(r)
            .map_err(|e| Error::InvalidSpec(format!("writing CSV: {e}")))?;
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    rdr.deserialize()
        .enumerate()
        .map(|(k, r)| r.map_err(|e| Error::parse(k + 2, e.to_string())))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSource {
    File(PathBuf),
    Generated(GenRecipe),
}

/// Generator recipe: either exact lengths or maxima with an optional `s` window.
#[derive(Clone, Debug, PartialEq)]
pub struct GenRecipe {
    pub rank: usize,
    pub lengths: RecipeLengths,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RecipeLengths {
    Exact { l_a: usize, l_x: usize, l_y: usize },
    Bounded {
        max_a: usize,
        max_x: usize,
        max_y: usize,
        s_range: Option<(f64, f64)>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteEntry {
    pub line: usize,
    pub source: InstanceSource,
    pub repeat: usize,
    pub seed: u64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Suite {
    pub params: ParameterSet,
    pub config: GaConfig,
    pub grouping: Grouping,
    pub entries: Vec<SuiteEntry>,
}

fn parse_recipe(line: usize, text: &str) -> Result<GenRecipe> {
    let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
    for part in text.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("bad generator field '{part}'")))?;
        if kv.insert(k.trim(), v.trim()).is_some() {
            return Err(Error::parse(line, format!("duplicate generator field '{k}'")));
        }
    }
    const KNOWN: [&str; 11] = [
        "n", "la", "lx", "ly", "la-max", "lx-max", "ly-max", "s-min", "s-max", "seed", "",
    ];
    if let Some(k) = kv.keys().find(|k| !KNOWN.contains(k)) {
        return Err(Error::parse(line, format!("unknown generator field '{k}'")));
    }
    let int = |k: &str| -> Result<Option<u64>> {
        kv.get(k)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| Error::parse(line, format!("field '{k}' needs an integer, got '{v}'")))
            })
            .transpose()
    };
    let real = |k: &str| -> Result<Option<f64>> {
        kv.get(k)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::parse(line, format!("field '{k}' needs a number, got '{v}'")))
            })
            .transpose()
    };
    let rank = int("n")?.ok_or_else(|| Error::parse(line, "generator needs 'n'"))? as usize;
    let seed = int("seed")?.unwrap_or(0);
    let exact = (int("la")?, int("lx")?, int("ly")?);
    let bounded = (int("la-max")?, int("lx-max")?, int("ly-max")?);
    let lengths = match (exact, bounded) {
        ((Some(a), Some(x), Some(y)), (None, None, None)) => RecipeLengths::Exact {
            l_a: a as usize,
            l_x: x as usize,
            l_y: y as usize,
        },
        ((None, None, None), (Some(a), Some(x), Some(y))) => {
            let s_range = match (real("s-min")?, real("s-max")?) {
                (None, None) => None,
                (lo, hi) => Some((lo.unwrap_or(0.0), hi.unwrap_or(f64::INFINITY))),
            };
            RecipeLengths::Bounded {
                max_a: a as usize,
                max_x: x as usize,
                max_y: y as usize,
                s_range,
            }
        }
        _ => {
            return Err(Error::parse(
                line,
                "generator needs either la, lx, ly or la-max, lx-max, ly-max",
            ))
        }
    };
    Ok(GenRecipe {
        rank,
        lengths,
        seed,
    })
}

fn parse_entry(line: usize, rest: &str, base: &Path) -> Result<SuiteEntry> {
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    let Some((&source, mut tail)) = tokens.split_first() else {
        return Err(Error::parse(line, "instance line needs a source"));
    };
    let source = match source.strip_prefix("gen:") {
        Some(recipe) => InstanceSource::Generated(parse_recipe(line, recipe)?),
        None => InstanceSource::File(base.join(source)),
    };
    let (mut repeat, mut seed, mut count) = (1usize, 0u64, 1usize);
    while let [key, value, more @ ..] = tail {
        let v: u64 = value
            .parse()
            .map_err(|_| Error::parse(line, format!("'{key}' needs an integer, got '{value}'")))?;
        match *key {
            "repeat" => repeat = v as usize,
            "seed" => seed = v,
            "count" => count = v as usize,
            other => return Err(Error::parse(line, format!("unknown instance option '{other}'"))),
        }
        tail = more;
    }
    if !tail.is_empty() {
        return Err(Error::parse(line, format!("dangling token '{}'", tail[0])));
    }
    if repeat == 0 || count == 0 {
        return Err(Error::parse(line, "repeat and count must be positive"));
    }
    Ok(SuiteEntry {
        line,
        source,
        repeat,
        seed,
        count,
    })
}

impl Suite {
    /// Parses a suite; relative instance paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Suite> {
        let mut pop: Option<(usize, usize)> = None;
        let mut params: Option<(usize, ParameterSet)> = None;
        let mut config = GaConfig::default();
        let mut grouping = Grouping::ByInstance;
        let mut entries = Vec::new();

        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            let rest = rest.trim();
            let int = |what: &str| -> Result<u64> {
                rest.parse()
                    .map_err(|_| Error::parse(line, format!("'{what}' needs an integer, got '{rest}'")))
            };
            match key {
                "pop" => pop = Some((line, int("pop")? as usize)),
                "params" => {
                    let p: ParameterSet = rest.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
                    params = Some((line, p));
                }
                "sigma" => config.sigma = int("sigma")? as usize,
                "init-len" => config.initial_length = int("init-len")? as usize,
                "substitution" => {
                    config.substitution = match rest {
                        "random" => SubstitutionMode::Random,
                        "recommended" => SubstitutionMode::Recommended,
                        _ => return Err(Error::parse(line, format!("unknown substitution mode '{rest}'"))),
                    }
                }
                "group" => {
                    grouping = match rest {
                        "instance" => Grouping::ByInstance,
                        "s" => Grouping::ByS,
                        _ => return Err(Error::parse(line, format!("unknown grouping '{rest}'"))),
                    }
                }
                "instance" => entries.push(parse_entry(line, rest, base)?),
                other => return Err(Error::parse(line, format!("unknown directive '{other}'"))),
            }
        }

        let params = match (pop, params) {
            (None, None) => ParameterSet::default(),
            (None, Some((_, p))) => p,
            (Some((line, n)), None) if n != ParameterSet::default().pop() => {
                return Err(Error::parse(line, "a population size other than 200 needs a 'params' line"))
            }
            (Some(_), None) => ParameterSet::default(),
            (Some((line, n)), Some((_, p))) => {
                if n != p.pop() {
                    return Err(Error::parse(
                        line,
                        format!("pop {n} does not match params total {}", p.pop()),
                    ));
                }
                p
            }
        };
        config
            .validate()
            .map_err(|e| Error::parse(0, e.to_string()))?;
        Ok(Suite {
            params,
            config,
            grouping,
            entries,
        })
    }

    pub fn load(path: &Path) -> Result<Suite> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidSpec(format!("reading {}: {e}", path.display())))?;
        Suite::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

/// One instance ready to be solved, with the lengths reported in records.
#[derive(Clone, Debug)]
pub struct PreparedInstance {
    pub id: String,
    pub instance: DcspInstance,
    pub l_x: usize,
    pub l_y: usize,
    pub s: f64,
}

fn prepare(entry: &SuiteEntry) -> Result<Vec<PreparedInstance>> {
    let mut out = Vec::with_capacity(entry.count);
    for j in 0..entry.count {
        let id = format!("L{:03}-{:03}", entry.line, j);
        let prepared = match &entry.source {
            InstanceSource::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    Error::parse(entry.line, format!("reading {}: {e}", path.display()))
                })?;
                let file: InstanceFile = text.parse()?;
                let spec = *file.instance.spec();
                let (l_x, l_y) = file.witness.as_ref().map_or((0, 0), |w| {
                    (reduced_length(&w.chi, &spec), reduced_length(&w.zeta, &spec))
                });
                PreparedInstance {
                    id,
                    instance: file.instance,
                    l_x,
                    l_y,
                    s: (l_x + l_y) as f64 / 2.0,
                }
            }
            InstanceSource::Generated(recipe) => {
                let seed = recipe.seed + j as u64;
                let (l_a, l_x, l_y, gen_seed) = match recipe.lengths {
                    RecipeLengths::Exact { l_a, l_x, l_y } => (l_a, l_x, l_y, seed),
                    RecipeLengths::Bounded {
                        max_a,
                        max_x,
                        max_y,
                        s_range,
                    } => {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        let (a, x, y) = draw_lengths(max_a, max_x, max_y, s_range, &mut rng)
                            .map_err(|e| Error::parse(entry.line, e.to_string()))?;
                        (a, x, y, rng.gen())
                    }
                };
                let g = generate(&InstanceSpec {
                    rank: recipe.rank,
                    l_a,
                    l_x,
                    l_y,
                    layout: Layout::ProblemP,
                    seed: gen_seed,
                })
                .map_err(|e| Error::parse(entry.line, e.to_string()))?;
                PreparedInstance {
                    id,
                    instance: g.instance,
                    l_x,
                    l_y,
                    s: g.s,
                }
            }
        };
        out.push(prepared);
    }
    Ok(out)
}

pub fn prepare_suite(suite: &Suite) -> Result<Vec<(PreparedInstance, Vec<u64>)>> {
    let mut out = Vec::new();
    for entry in &suite.entries {
        for p in prepare(entry)? {
            let seeds = (0..entry.repeat as u64).map(|r| entry.seed + r).collect();
            out.push((p, seeds));
        }
    }
    Ok(out)
}

/// Solves `prepared` once with GA seed `seed`. A run only counts as a success
/// if the returned pair verifies.
pub fn run_one(prepared: &PreparedInstance, seed: u64, params: &ParameterSet, config: &GaConfig) -> Result<RunRecord> {
    let config = GaConfig { seed, ..*config };
    let result = run(&prepared.instance, params, &config)?;
    let success = match &result.outcome {
        Outcome::Solution(c) => is_solution(&prepared.instance, c),
        Outcome::Timeout => false,
    };
    let spec = prepared.instance.spec();
    Ok(RunRecord {
        instance_id: prepared.id.clone(),
        n: spec.rank(),
        l_a: reduced_length(prepared.instance.a(), spec),
        l_x: prepared.l_x,
        l_y: prepared.l_y,
        s: prepared.s,
        seed,
        success,
        generations: result.generations,
        time_ms: result.elapsed.as_millis() as u64,
        final_cost: result.final_cost(),
    })
}

/// Runs every (instance, seed) pair on a pool of `jobs` threads. Records come
/// back sorted by `(instance_id, seed)`.
pub fn run_suite(suite: &Suite, jobs: usize) -> Result<Vec<RunRecord>> {
    let prepared = prepare_suite(suite)?;
    let tasks: Vec<(&PreparedInstance, u64)> = prepared
        .iter()
        .flat_map(|(p, seeds)| seeds.iter().map(move |&s| (p, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?;
    let mut records = pool.install(|| {
        tasks
            .par_iter()
            .map(|(p, seed)| run_one(p, *seed, &suite.params, &suite.config))
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by(|a, b| (&a.instance_id, a.seed).cmp(&(&b.instance_id, b.seed)));
    Ok(records)
}
