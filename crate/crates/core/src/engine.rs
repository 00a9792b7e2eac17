//! Generational loops: plain GEP, NSGA-II and SPEA2, plus prediction.
//!
//! Randomness is drawn from ChaCha8 streams keyed by `(seed, generation,
//! slot)`, so evaluation and variation can run in parallel while results
//! stay identical to a serial run.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evalkit::{objectives, rrse, Dataset, ObjectiveVector, Program};
use crate::genome::{layout_of, render, Chromosome, Expr, FunctionSetId, FunctionSymbol, Func, RenderStyle, SymbolSet};
use crate::moea::{self, crowded_cmp, ObjectiveBounds};
use crate::operators::{init_population, tournament_select, Genesis, Individual, OperatorRates};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Gep,
    Nsga2,
    Spea2,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gep => "gep",
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Spea2 => "spea2",
        }
    }

    pub fn is_multi_objective(self) -> bool {
        self != Algorithm::Gep
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gep" => Ok(Algorithm::Gep),
            "nsga2" | "nsga-ii" | "nsga-2" => Ok(Algorithm::Nsga2),
            "spea2" | "spea-2" => Ok(Algorithm::Spea2),
            other => Err(Error::config(format!(
                "unknown algorithm `{other}` (expected gep, nsga2 or spea2)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the `mutation` rate turns into a per-position probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationScaling {
    /// The rate is the per-position probability.
    PerPosition,
    /// Per-position probability `rate * 2 / chromosome_length`.
    LengthScaled,
}

impl MutationScaling {
    pub fn name(self) -> &'static str {
        match self {
            MutationScaling::PerPosition => "per-position",
            MutationScaling::LengthScaled => "length-scaled",
        }
    }
}

impl FromStr for MutationScaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "per-position" => Ok(MutationScaling::PerPosition),
            "length-scaled" => Ok(MutationScaling::LengthScaled),
            other => Err(Error::config(format!(
                "unknown mutation scaling `{other}` (expected per-position or length-scaled)"
            ))),
        }
    }
}

/// Every knob of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub generations: usize,
    pub population: usize,
    pub genes: usize,
    pub head_len: usize,
    pub functions: Vec<FunctionSymbol>,
    pub linking: Func,
    pub rates: OperatorRates,
    pub mutation_scaling: MutationScaling,
    pub algorithm: Algorithm,
    pub tournament_size: usize,
    pub archive_size: usize,
    pub elite: usize,
    pub bounds: ObjectiveBounds,
    pub constant_range: (f64, f64),
    pub constant_slots: usize,
    pub rnc: bool,
    pub seed: u64,
    /// Target column name; the last CSV column when `None`.
    pub target: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            generations: 1000,
            population: 100,
            genes: 3,
            head_len: 8,
            functions: FunctionSetId::ArithTrig.functions(),
            linking: Func::Add,
            rates: OperatorRates::default(),
            mutation_scaling: MutationScaling::PerPosition,
            algorithm: Algorithm::Gep,
            tournament_size: 2,
            archive_size: 50,
            elite: 10,
            bounds: ObjectiveBounds::default(),
            constant_range: (-10.0, 10.0),
            constant_slots: 2,
            rnc: true,
            seed: 0,
            target: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("population", self.population),
            ("genes", self.genes),
            ("head size", self.head_len),
            ("tournament size", self.tournament_size),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::config(format!("{name} must be positive")));
            }
        }
        if self.population < 2 {
            return Err(Error::config("population needs at least 2 individuals"));
        }
        if self.algorithm == Algorithm::Spea2 {
            if self.archive_size < 2 {
                return Err(Error::config("archive size must be at least 2"));
            }
            if self.elite > self.population {
                return Err(Error::config("elite count exceeds the population size"));
            }
        }
        if self.linking.arity() != 2 {
            return Err(Error::config("the linking function must be binary"));
        }
        self.rates.validate()
    }

    /// Symbol set over the given variables.
    pub fn symbol_set(&self, variables: &[String]) -> Result<SymbolSet> {
        SymbolSet::new(
            self.functions.clone(),
            variables.to_vec(),
            self.constant_slots,
            self.constant_range,
        )
    }
}

/// One line of per-generation statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub generation: usize,
    pub best_err: f64,
    pub mean_err: f64,
    pub worst_err: f64,
    /// Size of the lowest-error individual.
    pub best_size: usize,
    pub mean_size: f64,
    pub front_size: Option<usize>,
    pub archive_size: Option<usize>,
}

/// Statistics over a scored population. Error statistics cover valid
/// individuals only (`+inf` if none is valid).
pub fn stats_row(generation: usize, pop: &[Individual], front_size: Option<usize>, archive_size: Option<usize>) -> StatsRow {
    let valid: Vec<&ObjectiveVector> = pop.iter().map(|i| &i.objectives).filter(|o| o.valid).collect();
    let best = best_by_error(pop).map(|i| &pop[i].objectives);
    let (mean_err, worst_err) = if valid.is_empty() {
        (f64::INFINITY, f64::INFINITY)
    } else {
        (
            valid.iter().map(|o| o.error).sum::<f64>() / valid.len() as f64,
            valid.iter().map(|o| o.error).fold(f64::NEG_INFINITY, f64::max),
        )
    };
    StatsRow {
        generation,
        best_err: best.map_or(f64::INFINITY, |o| o.error),
        mean_err,
        worst_err,
        best_size: best.map_or(0, |o| o.size),
        mean_size: pop.iter().map(|i| i.objectives.size as f64).sum::<f64>() / pop.len().max(1) as f64,
        front_size,
        archive_size,
    }
}

/// Result of one run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Best-ever individual (plain GEP) or the knee point of the front.
    pub best: Individual,
    /// Final non-dominated set sorted by error (plain GEP: just `best`).
    pub front: Vec<Individual>,
    /// Last population, plus the archive for SPEA2.
    pub last_population: Vec<Individual>,
    pub stats: Vec<StatsRow>,
    pub symbols: SymbolSet,
    pub duration: Duration,
}

impl RunResult {
    pub fn infix(&self, ind: &Individual) -> String {
        render(&ind.chromosome, &self.symbols, RenderStyle::Infix)
    }

    pub fn karva(&self, ind: &Individual) -> String {
        render(&ind.chromosome, &self.symbols, RenderStyle::Karva)
    }
}

/// Runs the configured algorithm on `train`.
pub fn run(config: &RunConfig, train: &Dataset) -> Result<RunResult> {
    match config.algorithm {
        Algorithm::Gep => run_gep(config, train),
        Algorithm::Nsga2 | Algorithm::Spea2 => run_mogep(config, train),
    }
}

/// `runs` independent runs with seeds `seed, seed + 1, ...`, in parallel.
pub fn run_batch(config: &RunConfig, train: &Dataset, runs: usize) -> Result<Vec<RunResult>> {
    (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let mut c = config.clone();
            c.seed = config.seed.wrapping_add(r);
            run(&c, train)
        })
        .collect()
}

struct Setup {
    symbols: SymbolSet,
    genesis: Genesis,
    rates: OperatorRates,
}

fn setup(config: &RunConfig, train: &Dataset) -> Result<Setup> {
    config.validate()?;
    let symbols = config.symbol_set(train.names())?;
    let layout = layout_of(config.head_len, &symbols, config.rnc)?;
    let genesis = Genesis::new(&symbols, layout, config.linking);
    let mut rates = config.rates;
    if config.mutation_scaling == MutationScaling::LengthScaled {
        let len = (layout.gene_len() * config.genes) as f64;
        rates.mutation = (rates.mutation * 2.0 / len).min(1.0);
        if layout.dc_len > 0 {
            rates.dc_mutation = (rates.dc_mutation * 2.0 / (layout.dc_len * config.genes) as f64).min(1.0);
        }
    }
    Ok(Setup { symbols, genesis, rates })
}

fn stream(seed: u64, generation: usize, slot: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((generation as u64) << 32) | slot as u64);
    rng
}

fn evaluate(chroms: Vec<Chromosome>, symbols: &SymbolSet, data: &Dataset) -> Result<Vec<Individual>> {
    chroms
        .into_par_iter()
        .map(|c| {
            let objectives = objectives(&c, symbols, data)?;
            Ok(Individual {
                chromosome: c,
                objectives,
            })
        })
        .collect()
}

fn initial(config: &RunConfig, s: &Setup, train: &Dataset) -> Result<Vec<Individual>> {
    let mut rng = stream(config.seed, 0, 0);
    evaluate(init_population(config.population, config.genes, &s.genesis, &mut rng), &s.symbols, train)
}

fn error_cmp(a: &ObjectiveVector, b: &ObjectiveVector) -> Ordering {
    a.error.total_cmp(&b.error)
}

/// Index of the lowest-error individual; ties go to the smaller model, then
/// the earlier index.
fn best_by_error(pop: &[Individual]) -> Option<usize> {
    (0..pop.len()).min_by(|&a, &b| {
        let (x, y) = (&pop[a].objectives, &pop[b].objectives);
        error_cmp(x, y).then(x.size.cmp(&y.size)).then(a.cmp(&b))
    })
}

/// Produces `count` offspring from `pool` with tournament selection under
/// `better` and the variation pipeline. Pair `p` uses its own RNG stream.
fn breed<F>(
    config: &RunConfig,
    s: &Setup,
    generation: usize,
    pool: &[Individual],
    count: usize,
    better: F,
) -> Vec<Chromosome>
where
    F: Fn(usize, usize) -> Ordering + Sync,
{
    let pairs = count.div_ceil(2);
    let mut out: Vec<Chromosome> = (0..pairs)
        .into_par_iter()
        .flat_map_iter(|p| {
            let mut rng = stream(config.seed, generation, p + 1);
            let a = tournament_select(pool.len(), config.tournament_size, &better, &mut rng);
            let b = tournament_select(pool.len(), config.tournament_size, &better, &mut rng);
            let (x, y) = s
                .genesis
                .vary_pair(&pool[a].chromosome, &pool[b].chromosome, &s.rates, &mut rng);
            [x, y]
        })
        .collect();
    out.truncate(count);
    out
}

/// Single-objective GEP on RRSE with one elite.
pub fn run_gep(config: &RunConfig, train: &Dataset) -> Result<RunResult> {
    let start = Instant::now();
    let s = setup(config, train)?;
    let mut pop = initial(config, &s, train)?;
    let mut best = pop[best_by_error(&pop).expect("non-empty population")].clone();
    let mut stats = Vec::with_capacity(config.generations);

    for generation in 1..=config.generations {
        let elite = best_by_error(&pop).expect("non-empty population");
        let children = breed(config, &s, generation, &pop, config.population - 1, |a, b| {
            error_cmp(&pop[a].objectives, &pop[b].objectives)
        });
        let mut next = vec![pop[elite].clone()];
        next.extend(evaluate(children, &s.symbols, train)?);
        pop = next;
        let i = best_by_error(&pop).expect("non-empty population");
        if pop[i].objectives.error < best.objectives.error {
            best = pop[i].clone();
        }
        stats.push(stats_row(generation, &pop, None, None));
    }

    Ok(RunResult {
        algorithm: config.algorithm,
        seed: config.seed,
        front: vec![best.clone()],
        best,
        last_population: pop,
        stats,
        symbols: s.symbols,
        duration: start.elapsed(),
    })
}

/// Multi-objective GEP (error, size) with NSGA-II or SPEA2.
pub fn run_mogep(config: &RunConfig, train: &Dataset) -> Result<RunResult> {
    let start = Instant::now();
    let s = setup(config, train)?;
    let bounds = &config.bounds;
    let mut pop = initial(config, &s, train)?;
    let mut archive: Vec<Individual> = Vec::new();
    let mut stats = Vec::with_capacity(config.generations);

    match config.algorithm {
        Algorithm::Nsga2 => {
            let mut info = moea::nsga2_assign(&objs(&pop), bounds);
            for generation in 1..=config.generations {
                let children = breed(config, &s, generation, &pop, config.population, |a, b| {
                    crowded_cmp(&info[a], &info[b])
                });
                let mut union = std::mem::take(&mut pop);
                union.extend(evaluate(children, &s.symbols, train)?);
                let (survivors, _) = moea::nsga2_environmental(&objs(&union), config.population, bounds);
                let mut slots: Vec<Option<Individual>> = union.into_iter().map(Some).collect();
                pop = survivors
                    .into_iter()
                    .map(|i| slots[i].take().expect("survivor indices are distinct"))
                    .collect();
                info = moea::nsga2_assign(&objs(&pop), bounds);
                let front = info.iter().filter(|i| i.rank == 0).count();
                stats.push(stats_row(generation, &pop, Some(front), None));
            }
        }
        Algorithm::Spea2 => {
            for generation in 1..=config.generations {
                let mut union = std::mem::take(&mut pop);
                union.extend(std::mem::take(&mut archive));
                let union_objs = objs(&union);
                let info = moea::spea2_assign(&union_objs, bounds);
                let sel = moea::spea2_environmental(&union_objs, &info, config.archive_size, bounds);
                let fitness: Vec<f64> = sel.members.iter().map(|&i| info[i].fitness).collect();
                archive = sel.members.iter().map(|&i| union[i].clone()).collect();

                let mut by_fitness: Vec<usize> = (0..archive.len()).collect();
                by_fitness.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));
                let elites = config.elite.min(archive.len()).min(config.population);
                let children = breed(config, &s, generation, &archive, config.population - elites, |a, b| {
                    fitness[a].total_cmp(&fitness[b])
                });
                pop = by_fitness[..elites].iter().map(|&i| archive[i].clone()).collect();
                pop.extend(evaluate(children, &s.symbols, train)?);

                let front = sel.members.iter().filter(|&&i| info[i].raw == 0).count();
                stats.push(stats_row(generation, &pop, Some(front), Some(archive.len())));
            }
        }
        Algorithm::Gep => unreachable!("run_mogep called for plain GEP"),
    }

    let mut last_population = pop;
    last_population.extend(archive);
    let symbols = s.symbols;
    let front = moea::merge_fronts(
        std::slice::from_ref(&last_population),
        |i: &Individual| i.objectives,
        |i: &Individual| render(&i.chromosome, &symbols, RenderStyle::Infix),
    );
    let best = front[knee_point(&front, bounds).expect("front is non-empty")].clone();
    Ok(RunResult {
        algorithm: config.algorithm,
        seed: config.seed,
        best,
        front,
        last_population,
        stats,
        symbols,
        duration: start.elapsed(),
    })
}

fn objs(pop: &[Individual]) -> Vec<ObjectiveVector> {
    pop.iter().map(|i| i.objectives).collect()
}

/// Convenience pick on a front: the member closest, in bounds-normalized
/// space, to the ideal point (zero error, smallest size on the front).
pub fn knee_point(front: &[Individual], bounds: &ObjectiveBounds) -> Option<usize> {
    let min_size = front.iter().map(|i| i.objectives.size).min()?;
    let (elo, ehi) = bounds.ranges()[0];
    let (slo, shi) = bounds.ranges()[1];
    let dist = |o: &ObjectiveVector| {
        let e = (o.error - elo) / (ehi - elo);
        let s = (o.size as f64 - min_size as f64) / (shi - slo);
        if e.is_finite() {
            (e * e + s * s).sqrt()
        } else {
            f64::INFINITY
        }
    };
    (0..front.len()).min_by(|&a, &b| dist(&front[a].objectives).total_cmp(&dist(&front[b].objectives)).then(a.cmp(&b)))
}

/// Row-wise predictions of a model on a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// `None` where the model is not finite.
    pub predictions: Vec<Option<f64>>,
    /// `prediction - target`.
    pub residuals: Vec<Option<f64>>,
    /// RRSE over the valid rows, against their own mean; `None` with fewer
    /// than two valid rows or zero variance among them.
    pub rrse: Option<f64>,
    pub invalid_rows: usize,
}

pub fn predict(model: &Expr, data: &Dataset) -> Result<Prediction> {
    let program = Program::compile(model, data.names())?;
    let mut stack = Vec::new();
    let predictions: Vec<Option<f64>> = data.rows().map(|r| program.eval(r, &mut stack)).collect();
    let residuals: Vec<Option<f64>> = predictions
        .iter()
        .zip(data.target())
        .map(|(p, y)| p.map(|p| p - y))
        .collect();
    let (p, y): (Vec<f64>, Vec<f64>) = predictions
        .iter()
        .zip(data.target())
        .filter_map(|(p, &y)| p.map(|p| (p, y)))
        .unzip();
    Ok(Prediction {
        invalid_rows: data.len() - p.len(),
        rrse: rrse(&p, &y).ok(),
        predictions,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalkit::{parse_infix, synth_dataset, Problem};

    fn small(algorithm: Algorithm, generations: usize) -> RunConfig {
        RunConfig {
            algorithm,
            generations,
            population: 30,
            head_len: 4,
            seed: 9,
            ..RunConfig::default()
        }
    }

    #[test]
    fn zero_generations_returns_best_initial() {
        let data = synth_dataset(Problem::Tp1, 40, 1).unwrap();
        let r = run_gep(&small(Algorithm::Gep, 0), &data).unwrap();
        assert!(r.stats.is_empty());
        let best = r.last_population.iter().map(|i| i.objectives.error).fold(f64::INFINITY, f64::min);
        assert_eq!(r.best.objectives.error, best);
    }

    #[test]
    fn gep_best_never_worsens() {
        let data = synth_dataset(Problem::Tp1, 40, 1).unwrap();
        let r = run_gep(&small(Algorithm::Gep, 25), &data).unwrap();
        assert_eq!(r.stats.len(), 25);
        for w in r.stats.windows(2) {
            assert!(w[1].best_err <= w[0].best_err);
        }
        assert!(r.stats.iter().all(|s| s.front_size.is_none() && s.archive_size.is_none()));
    }

    #[test]
    fn zero_rates_keep_elite() {
        let data = synth_dataset(Problem::Tp1, 40, 1).unwrap();
        let mut c = small(Algorithm::Gep, 10);
        c.rates = OperatorRates::zero();
        let r = run_gep(&c, &data).unwrap();
        let first = r.stats[0].best_err;
        assert!(r.stats.iter().all(|s| s.best_err == first));
    }

    #[test]
    fn runs_are_deterministic() {
        let data = synth_dataset(Problem::Tp1, 40, 1).unwrap();
        for alg in [Algorithm::Gep, Algorithm::Nsga2, Algorithm::Spea2] {
            let a = run(&small(alg, 8), &data).unwrap();
            let b = run(&small(alg, 8), &data).unwrap();
            assert_eq!(a.stats, b.stats);
            assert_eq!(a.front, b.front);
        }
    }

    #[test]
    fn fronts_are_nondominated() {
        let data = synth_dataset(Problem::Tp1, 40, 2).unwrap();
        for alg in [Algorithm::Nsga2, Algorithm::Spea2] {
            let r = run(&small(alg, 15), &data).unwrap();
            for a in &r.front {
                assert!(a.objectives.valid && a.objectives.error.is_finite() && a.objectives.size >= 1);
                for b in &r.front {
                    assert!(!moea::dominates(&a.objectives, &b.objectives));
                }
            }
            assert!(r.stats.iter().all(|s| s.archive_size.map_or(true, |n| n <= 50)));
        }
    }

    #[test]
    fn uniform_population_stats() {
        let data = synth_dataset(Problem::Tp1, 40, 1).unwrap();
        let c = small(Algorithm::Gep, 0);
        let s = setup(&c, &data).unwrap();
        let chrom = s.genesis.random_chromosome(3, &mut ChaCha8Rng::seed_from_u64(3));
        let pop = evaluate(vec![chrom; 5], &s.symbols, &data).unwrap();
        let row = stats_row(1, &pop, None, None);
        if pop[0].objectives.valid {
            assert_eq!(row.best_err, row.mean_err);
            assert_eq!(row.mean_err, row.worst_err);
        }
    }

    #[test]
    fn predict_toy_model() {
        let data = Dataset::new(
            vec!["x".into()],
            (1..=5).map(|i| vec![i as f64]).collect(),
            vec![2.0, 4.0, 7.0, 8.0, 11.0],
            "y",
        )
        .unwrap();
        let p = predict(&parse_infix("2*x").unwrap(), &data).unwrap();
        let res: Vec<f64> = p.residuals.iter().map(|r| r.unwrap()).collect();
        assert_eq!(res, vec![0.0, 0.0, -1.0, 0.0, -1.0]);
        // mean 6.4, sum of squared deviations 49.2
        assert!((p.rrse.unwrap() - (2.0f64 / 49.2).sqrt()).abs() < 1e-12);
        assert_eq!(p.invalid_rows, 0);

        let q = predict(&parse_infix("1/(x-3)").unwrap(), &data).unwrap();
        assert_eq!(q.invalid_rows, 1);
        assert_eq!(q.predictions[2], None);
    }

    #[test]
    fn predict_generator_is_exact() {
        let data = synth_dataset(Problem::Dew, 50, 4).unwrap();
        let p = predict(&parse_infix("d0-(100-d1)/5").unwrap(), &data).unwrap();
        assert!(p.residuals.iter().all(|r| r.unwrap().abs() < 1e-12));
        assert!(p.rrse.unwrap() < 1e-12);
    }
}
