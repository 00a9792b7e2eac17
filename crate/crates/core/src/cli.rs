//! Parameter files and the file-producing commands behind the `kexpr`
//! binary.
//!
//! Parameter files are UTF-8 `key = value` lines. `#` starts a comment
//! line, whitespace around `=` is optional and a later key overrides an
//! earlier one. Keys follow the dotted vocabulary of the common Java
//! evolutionary toolkits; engine-specific keys start with `x.`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::engine::{self, Algorithm, RunConfig, RunResult, StatsRow};
use crate::error::{Error, Result};
use crate::evalkit::{parse_infix, size_with_genes, split, synth_dataset, Dataset, Problem};
use crate::genome::{fmt_constant, render_karva_compact, Func, FunctionSetId, FunctionSymbol};
use crate::moea::{self, ObjectiveBounds};
use crate::operators::{Individual, OperatorRates};

/// Header of every `stats.csv`.
pub const STATS_HEADER: [&str; 7] = [
    "gen",
    "best_err",
    "mean_err",
    "worst_err",
    "best_size",
    "front_size",
    "archive_size",
];

/// Header of `front.csv` and `merged_front.csv`.
pub const FRONT_HEADER: [&str; 6] = ["error", "size", "infix", "karva", "run", "seed"];

/// One `key = value` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamEntry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Ordered parameter lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParamFile {
    pub entries: Vec<ParamEntry>,
}

impl ParamFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::ConfigKey {
                    line: i + 1,
                    key: line.to_string(),
                    message: "expected `key = value`".into(),
                });
            };
            let key = key.trim();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(Error::ConfigKey {
                    line: i + 1,
                    key: key.to_string(),
                    message: "malformed key".into(),
                });
            }
            entries.push(ParamEntry {
                line: i + 1,
                key: key.to_string(),
                value: value.trim().to_string(),
            });
        }
        Ok(Self { entries })
    }

    /// One `key = value` line per entry.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{} = {}", e.key, e.value);
        }
        out
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push(ParamEntry {
            line: self.entries.len() + 1,
            key: key.into(),
            value: value.to_string(),
        });
    }

    /// Value of the last occurrence of `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|e| e.key == key).map(|e| e.value.as_str())
    }
}

const FUNCTION_PREFIX: &str = "gep.species.symbolset.function.";

const KNOWN_KEYS: &[&str] = &[
    "generations",
    "seed.0",
    "gep.species.numgenes",
    "gep.species.gene-headsize",
    "pop.subpop.0.size",
    "gep.species.symbolset.functionsize",
    "gep.species.symbolset.function.0",
    "gep.species.symbolset.function.0.weight",
    "gep.species.inversion-prob",
    "gep.species.mutation-prob",
    "gep.species.istransposition-prob",
    "gep.species.ristransposition-prob",
    "gep.species.onepointrecomb-prob",
    "gep.species.twopointrecomb-prob",
    "gep.species.generecomb-prob",
    "gep.species.genetransposition-prob",
    "gep.species.rnc-mutation-prob",
    "gep.species.dc-mutation-prob",
    "gep.species.dc-inversion-prob",
    "gep.species.dc-istransposition-prob",
    "pop.subpop.0.species.fitness.maximize",
    "multi.fitness.num-objectives",
    "multi.fitness.min.0",
    "multi.fitness.max.0",
    "multi.fitness.min.1",
    "multi.fitness.max.1",
    "parent.0",
    "pop.subpop.0.species.fitness",
    "pop.subpop.0.species.pipe.source.0.source.0",
    "select.tournament.size",
    "pop.subpop.0.archive-size",
    "breed.elite.0",
    "target",
    "x.algorithm",
    "x.function-set",
    "x.linking",
    "x.constants.min",
    "x.constants.max",
    "x.constants.count",
    "x.rnc",
    "x.mutation-scaling",
];

fn suggest(key: &str) -> Option<&'static str> {
    KNOWN_KEYS
        .iter()
        .map(|k| (strsim::levenshtein(key, k), *k))
        .filter(|&(d, k)| d <= (k.len() / 3).max(2))
        .min()
        .map(|(_, k)| k)
}

fn num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("`{v}` is not a valid number"))
}

fn positive(v: &str) -> std::result::Result<usize, String> {
    match num::<usize>(v)? {
        0 => Err("must be positive".into()),
        n => Ok(n),
    }
}

fn flag(v: &str) -> std::result::Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("`{v}` is not true or false")),
    }
}

fn rate(v: &str) -> std::result::Result<f64, String> {
    let r: f64 = num(v)?;
    if (0.0..=1.0).contains(&r) {
        Ok(r)
    } else {
        Err(format!("probability {r} is outside [0, 1]"))
    }
}

/// Algorithm named by a parent file path or a fitness/selection class.
fn algorithm_hint(v: &str) -> std::result::Result<Algorithm, String> {
    let l = v.to_ascii_lowercase();
    if l.contains("nsga2") {
        Ok(Algorithm::Nsga2)
    } else if l.contains("spea2") {
        Ok(Algorithm::Spea2)
    } else {
        Err(format!("`{v}` names neither NSGA-II nor SPEA2"))
    }
}

/// A parsed configuration and whether the file fixed the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub seed_in_file: bool,
}

/// Maps parameter lines onto a [`RunConfig`]. Unset keys keep their
/// defaults.
pub fn config_from_params(params: &ParamFile) -> Result<LoadedConfig> {
    let mut c = RunConfig::default();
    let mut seed_in_file = false;
    let mut preset: Option<FunctionSetId> = None;
    let mut functions: BTreeMap<usize, (Option<Func>, Option<u32>, usize)> = BTreeMap::new();
    let mut function_count: Option<(usize, usize)> = None;
    let mut bounds = c.bounds.ranges().to_vec();

    for e in &params.entries {
        let v = e.value.as_str();
        let r = &mut c.rates;
        let res: std::result::Result<(), String> = (|| {
            match e.key.as_str() {
                "generations" => c.generations = num(v)?,
                "seed.0" => {
                    c.seed = num(v)?;
                    seed_in_file = true;
                }
                "gep.species.numgenes" => c.genes = positive(v)?,
                "gep.species.gene-headsize" => c.head_len = positive(v)?,
                "pop.subpop.0.size" => {
                    c.population = num(v)?;
                    if c.population < 2 {
                        return Err("population needs at least 2 individuals".into());
                    }
                }
                "gep.species.symbolset.functionsize" => function_count = Some((positive(v)?, e.line)),
                "gep.species.inversion-prob" => r.inversion = rate(v)?,
                "gep.species.mutation-prob" => r.mutation = rate(v)?,
                "gep.species.istransposition-prob" => r.is_transposition = rate(v)?,
                "gep.species.ristransposition-prob" => r.ris_transposition = rate(v)?,
                "gep.species.onepointrecomb-prob" => r.one_point_recomb = rate(v)?,
                "gep.species.twopointrecomb-prob" => r.two_point_recomb = rate(v)?,
                "gep.species.generecomb-prob" => r.gene_recomb = rate(v)?,
                "gep.species.genetransposition-prob" => r.gene_transposition = rate(v)?,
                "gep.species.rnc-mutation-prob" => r.rnc_mutation = rate(v)?,
                "gep.species.dc-mutation-prob" => r.dc_mutation = rate(v)?,
                "gep.species.dc-inversion-prob" => r.dc_inversion = rate(v)?,
                "gep.species.dc-istransposition-prob" => r.dc_is_transposition = rate(v)?,
                "pop.subpop.0.species.fitness.maximize" => {
                    if flag(v)? {
                        return Err("only minimized objectives are supported".into());
                    }
                }
                "multi.fitness.num-objectives" => {
                    if num::<usize>(v)? != 2 {
                        return Err("exactly 2 objectives (error, size) are supported".into());
                    }
                }
                "multi.fitness.min.0" => bounds[0].0 = num(v)?,
                "multi.fitness.max.0" => bounds[0].1 = num(v)?,
                "multi.fitness.min.1" => bounds[1].0 = num(v)?,
                "multi.fitness.max.1" => bounds[1].1 = num(v)?,
                "parent.0" | "pop.subpop.0.species.fitness" | "pop.subpop.0.species.pipe.source.0.source.0" => {
                    c.algorithm = algorithm_hint(v)?
                }
                "select.tournament.size" => c.tournament_size = positive(v)?,
                "pop.subpop.0.archive-size" => c.archive_size = positive(v)?,
                "breed.elite.0" => c.elite = num(v)?,
                "target" => c.target = (!v.is_empty()).then(|| v.to_string()),
                "x.algorithm" => c.algorithm = v.parse().map_err(|e: Error| e.to_string())?,
                "x.function-set" => {
                    preset = Some(FunctionSetId::from_name(v).ok_or_else(|| {
                        format!("unknown function set `{v}` (expected arith-trig or arith-log)")
                    })?)
                }
                "x.linking" => {
                    let f = Func::from_name(v).ok_or_else(|| format!("unknown function `{v}`"))?;
                    if f.arity() != 2 {
                        return Err(format!("linking function {f} is not binary"));
                    }
                    c.linking = f;
                }
                "x.constants.min" => c.constant_range.0 = num(v)?,
                "x.constants.max" => c.constant_range.1 = num(v)?,
                "x.constants.count" => c.constant_slots = num(v)?,
                "x.rnc" => c.rnc = flag(v)?,
                "x.mutation-scaling" => c.mutation_scaling = v.parse().map_err(|e: Error| e.to_string())?,
                key => {
                    let Some(rest) = key.strip_prefix(FUNCTION_PREFIX) else {
                        return Err(match suggest(key) {
                            Some(s) => format!("unknown key (did you mean `{s}`?)"),
                            None => "unknown key".into(),
                        });
                    };
                    let (idx, weight) = match rest.split_once('.') {
                        Some((i, "weight")) => (i, true),
                        Some(_) => return Err("unknown key".into()),
                        None => (rest, false),
                    };
                    let idx: usize = idx.parse().map_err(|_| format!("bad function index `{idx}`"))?;
                    let slot = functions.entry(idx).or_insert((None, None, e.line));
                    if weight {
                        let w: u32 = num(v)?;
                        if w == 0 {
                            return Err("weight must be positive".into());
                        }
                        slot.1 = Some(w);
                    } else {
                        slot.0 = Some(Func::from_name(v).ok_or_else(|| format!("unknown function `{v}`"))?);
                    }
                }
            }
            Ok(())
        })();
        res.map_err(|message| Error::ConfigKey {
            line: e.line,
            key: e.key.clone(),
            message,
        })?;
    }

    if let Some(p) = preset {
        c.functions = p.functions();
    }
    if !functions.is_empty() {
        let mut list = Vec::new();
        for (idx, (f, w, line)) in functions {
            let f = f.ok_or_else(|| Error::ConfigKey {
                line,
                key: format!("{FUNCTION_PREFIX}{idx}"),
                message: "weight given for a function that is never named".into(),
            })?;
            list.push(FunctionSymbol::new(f, w.unwrap_or(1)));
        }
        c.functions = list;
    }
    if let Some((n, line)) = function_count {
        if n != c.functions.len() {
            return Err(Error::ConfigKey {
                line,
                key: "gep.species.symbolset.functionsize".into(),
                message: format!("declares {n} functions but {} are listed", c.functions.len()),
            });
        }
    }
    c.bounds = ObjectiveBounds::new(bounds)?;
    c.validate()?;
    Ok(LoadedConfig { config: c, seed_in_file })
}

pub fn parse_config(path: &Path) -> Result<LoadedConfig> {
    let text = fs::read_to_string(path)?;
    config_from_params(&ParamFile::parse(&text)?)
}

/// Canonical parameter lines reproducing `c`.
pub fn config_to_params(c: &RunConfig) -> ParamFile {
    let mut p = ParamFile::default();
    p.push("x.algorithm", c.algorithm);
    p.push("generations", c.generations);
    p.push("seed.0", c.seed);
    p.push("pop.subpop.0.size", c.population);
    p.push("gep.species.numgenes", c.genes);
    p.push("gep.species.gene-headsize", c.head_len);
    for (i, f) in c.functions.iter().enumerate() {
        p.push(format!("{FUNCTION_PREFIX}{i}"), f.name());
        p.push(format!("{FUNCTION_PREFIX}{i}.weight"), f.weight);
    }
    let r: &OperatorRates = &c.rates;
    for (key, v) in [
        ("inversion-prob", r.inversion),
        ("mutation-prob", r.mutation),
        ("istransposition-prob", r.is_transposition),
        ("ristransposition-prob", r.ris_transposition),
        ("onepointrecomb-prob", r.one_point_recomb),
        ("twopointrecomb-prob", r.two_point_recomb),
        ("generecomb-prob", r.gene_recomb),
        ("genetransposition-prob", r.gene_transposition),
        ("rnc-mutation-prob", r.rnc_mutation),
        ("dc-mutation-prob", r.dc_mutation),
        ("dc-inversion-prob", r.dc_inversion),
        ("dc-istransposition-prob", r.dc_is_transposition),
    ] {
        p.push(format!("gep.species.{key}"), fmt_constant(v));
    }
    p.push("x.mutation-scaling", c.mutation_scaling.name());
    for (m, (lo, hi)) in c.bounds.ranges().iter().enumerate() {
        p.push(format!("multi.fitness.min.{m}"), fmt_constant(*lo));
        p.push(format!("multi.fitness.max.{m}"), fmt_constant(*hi));
    }
    p.push("select.tournament.size", c.tournament_size);
    p.push("pop.subpop.0.archive-size", c.archive_size);
    p.push("breed.elite.0", c.elite);
    p.push("x.linking", c.linking.name());
    p.push("x.constants.min", fmt_constant(c.constant_range.0));
    p.push("x.constants.max", fmt_constant(c.constant_range.1));
    p.push("x.constants.count", c.constant_slots);
    p.push("x.rnc", c.rnc);
    if let Some(t) = &c.target {
        p.push("target", t);
    }
    p
}

/// Seed precedence: command line, then parameter file, then the
/// `KEXPR_SEED` environment value, then 0.
pub fn resolve_seed(cli: Option<u64>, file: Option<u64>, env: Option<&str>) -> Result<u64> {
    if let Some(s) = cli.or(file) {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::config(format!("KEXPR_SEED=`{v}` is not an unsigned integer"))),
        None => Ok(0),
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(path)?))
}

/// Writes a synthetic dataset as CSV.
pub fn cmd_gen(problem: Problem, rows: usize, seed: u64, out: &Path) -> Result<()> {
    let data = synth_dataset(problem, rows, seed)?;
    let mut w = create(out)?;
    data.to_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_dataset(path: &Path, target: Option<&str>) -> Result<Dataset> {
    let file = fs::File::open(path)
        .map_err(|e| Error::data(format!("cannot open data file {}: {e}", path.display())))?;
    Dataset::from_csv(std::io::BufReader::new(file), target)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

pub fn write_stats_csv<W: Write>(w: W, rows: &[StatsRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(STATS_HEADER)?;
    for r in rows {
        w.write_record([
            r.generation.to_string(),
            fmt_constant(r.best_err),
            fmt_constant(r.mean_err),
            fmt_constant(r.worst_err),
            r.best_size.to_string(),
            opt(r.front_size),
            opt(r.archive_size),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One line of a front file.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontRecord {
    pub error: f64,
    pub size: usize,
    pub infix: String,
    pub karva: String,
    pub run: usize,
    pub seed: u64,
}

impl FrontRecord {
    fn of(result: &RunResult, ind: &Individual, run: usize) -> Self {
        Self {
            error: ind.objectives.error,
            size: ind.objectives.size,
            infix: result.infix(ind),
            karva: render_karva_compact(&ind.chromosome, &result.symbols),
            run,
            seed: result.seed,
        }
    }
}

pub fn write_front_csv<W: Write>(w: W, records: &[FrontRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(FRONT_HEADER)?;
    for r in records {
        w.write_record([
            fmt_constant(r.error),
            r.size.to_string(),
            r.infix.clone(),
            r.karva.clone(),
            r.run.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_front_csv<R: std::io::Read>(r: R) -> Result<Vec<FrontRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).ok_or_else(|| Error::data("short front record"));
        let bad = |what: &str| Error::data(format!("bad {what} in front record"));
        out.push(FrontRecord {
            error: field(0)?.parse().map_err(|_| bad("error"))?,
            size: field(1)?.parse().map_err(|_| bad("size"))?,
            infix: field(2)?.to_string(),
            karva: field(3)?.to_string(),
            run: field(4)?.parse().map_err(|_| bad("run"))?,
            seed: field(5)?.parse().map_err(|_| bad("seed"))?,
        });
    }
    Ok(out)
}

/// Options of [`cmd_evolve`].
#[derive(Debug, Clone)]
pub struct EvolveOptions {
    pub config: Option<PathBuf>,
    pub data: PathBuf,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub env_seed: Option<String>,
    pub runs: usize,
    pub algorithm: Option<Algorithm>,
    pub generations: Option<usize>,
    pub force: bool,
}

/// What [`cmd_evolve`] produced.
#[derive(Debug, Clone)]
pub struct EvolveSummary {
    pub config: RunConfig,
    pub merged_front: Vec<FrontRecord>,
    pub run_dirs: Vec<PathBuf>,
}

/// Runs `runs` independent evolutions and writes their artifacts under
/// `out`:
///
/// ```text
/// run-001/stats.csv
/// run-001/front.csv     (multi-objective) or best.txt (plain GEP)
/// run-001/run_meta.txt
/// merged_front.csv      non-dominated set over all runs
/// scatter.csv           every valid final individual of every run
/// ```
pub fn cmd_evolve(opts: &EvolveOptions) -> Result<EvolveSummary> {
    let (mut config, file_seed) = match &opts.config {
        Some(p) => {
            let l = parse_config(p)?;
            let s = l.seed_in_file.then_some(l.config.seed);
            (l.config, s)
        }
        None => (RunConfig::default(), None),
    };
    config.seed = resolve_seed(opts.seed, file_seed, opts.env_seed.as_deref())?;
    if let Some(a) = opts.algorithm {
        config.algorithm = a;
    }
    if let Some(g) = opts.generations {
        config.generations = g;
    }
    if opts.runs == 0 {
        return Err(Error::config("--runs must be at least 1"));
    }
    config.validate()?;
    let data = load_dataset(&opts.data, config.target.as_deref())?;
    config.symbol_set(data.names())?;

    if opts.out.exists() {
        if !opts.force {
            return Err(Error::config(format!(
                "output directory {} exists; pass --force to replace it",
                opts.out.display()
            )));
        }
        fs::remove_dir_all(&opts.out)?;
    }
    fs::create_dir_all(&opts.out)?;

    let results = engine::run_batch(&config, &data, opts.runs)?;
    let mut run_dirs = Vec::new();
    let mut fronts = Vec::new();
    let mut scatter = csv::Writer::from_writer(create(&opts.out.join("scatter.csv"))?);
    scatter.write_record(["run", "error", "size"])?;

    for (i, r) in results.iter().enumerate() {
        let run = i + 1;
        let dir = opts.out.join(format!("run-{run:03}"));
        fs::create_dir_all(&dir)?;
        write_stats_csv(create(&dir.join("stats.csv"))?, &r.stats)?;
        let records: Vec<FrontRecord> = r.front.iter().map(|ind| FrontRecord::of(r, ind, run)).collect();
        if config.algorithm.is_multi_objective() {
            write_front_csv(create(&dir.join("front.csv"))?, &records)?;
        } else {
            let mut w = create(&dir.join("best.txt"))?;
            write!(
                w,
                "infix: {}\nerror: {}\nsize: {}\n\n{}",
                r.infix(&r.best),
                fmt_constant(r.best.objectives.error),
                r.best.objectives.size,
                r.karva(&r.best)
            )?;
            w.flush()?;
        }
        let mut meta = create(&dir.join("run_meta.txt"))?;
        let mut c = config.clone();
        c.seed = r.seed;
        write!(
            meta,
            "# run {run}\n# seed {}\n# duration_ms {}\n{}",
            r.seed,
            r.duration.as_millis(),
            config_to_params(&c).serialize()
        )?;
        meta.flush()?;
        for ind in r.last_population.iter().filter(|i| i.objectives.valid) {
            scatter.write_record([
                run.to_string(),
                fmt_constant(ind.objectives.error),
                ind.objectives.size.to_string(),
            ])?;
        }
        fronts.push(records);
        run_dirs.push(dir);
    }
    scatter.flush()?;

    let merged = merge_records(&fronts);
    write_front_csv(create(&opts.out.join("merged_front.csv"))?, &merged)?;
    Ok(EvolveSummary {
        config,
        merged_front: merged,
        run_dirs,
    })
}

/// Non-dominated union of per-run front records.
pub fn merge_records(fronts: &[Vec<FrontRecord>]) -> Vec<FrontRecord> {
    moea::merge_fronts(
        fronts,
        |r: &FrontRecord| {
            if r.error.is_finite() {
                crate::evalkit::ObjectiveVector::new(r.error, r.size)
            } else {
                crate::evalkit::ObjectiveVector::invalid(r.size)
            }
        },
        |r: &FrontRecord| r.infix.clone(),
    )
}

/// Reads a model: the text after `infix:` if such a line exists, otherwise
/// the first line that is neither blank nor a `#` comment.
pub fn read_model(text: &str) -> Result<String> {
    let lines = || text.lines().map(str::trim);
    lines()
        .find_map(|l| l.strip_prefix("infix:").map(str::trim))
        .or_else(|| lines().find(|l| !l.is_empty() && !l.starts_with('#')))
        .map(str::to_string)
        .ok_or_else(|| Error::data("model file holds no expression"))
}

/// Outcome of [`cmd_predict`].
#[derive(Debug, Clone, PartialEq)]
pub struct PredictSummary {
    pub rows: usize,
    pub invalid_rows: usize,
    pub test_rrse: Option<f64>,
}

/// Evaluates a model on the test part of an ordered train/test split and
/// writes `row,target,prediction,residual,valid` lines plus a footer
/// comment with the test RRSE. Row indices refer to the full dataset.
pub fn cmd_predict(
    model_path: &Path,
    data_path: &Path,
    train_fraction: f64,
    target: Option<&str>,
    out: &Path,
) -> Result<PredictSummary> {
    let model = parse_infix(&read_model(&fs::read_to_string(model_path)?)?)?;
    let data = load_dataset(data_path, target)?;
    if let Some(v) = model.variables().into_iter().find(|v| !data.names().iter().any(|n| n == v)) {
        return Err(Error::data(format!("model variable `{v}` is not a dataset column")));
    }
    let (train, test) = split(&data, train_fraction)?;
    let p = engine::predict(&model, &test)?;

    let mut w = create(out)?;
    {
        let mut cw = csv::Writer::from_writer(&mut w);
        cw.write_record(["row", "target", "prediction", "residual", "valid"])?;
        for (i, y) in test.target().iter().enumerate() {
            cw.write_record([
                (train.len() + i).to_string(),
                fmt_constant(*y),
                p.predictions[i].map_or_else(String::new, fmt_constant),
                p.residuals[i].map_or_else(String::new, fmt_constant),
                p.predictions[i].is_some().to_string(),
            ])?;
        }
        cw.flush()?;
    }
    writeln!(
        w,
        "# test_rrse={} invalid_rows={}",
        p.rrse.map_or_else(|| "nan".to_string(), fmt_constant),
        p.invalid_rows
    )?;
    w.flush()?;
    Ok(PredictSummary {
        rows: test.len(),
        invalid_rows: p.invalid_rows,
        test_rrse: p.rrse,
    })
}

/// Node count of an infix expression; with `genes`, the top-level `+`
/// nodes joining that many genes are not counted.
pub fn cmd_size(text: &str, genes: Option<usize>) -> Result<usize> {
    let tree = parse_infix(text)?;
    match genes {
        Some(n) => size_with_genes(&tree, n),
        None => Ok(tree.size()),
    }
}
