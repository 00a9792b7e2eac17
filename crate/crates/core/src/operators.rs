//! Population initialization, the GEP genetic operators and tournament
//! selection.
//!
//! Every operator maps structurally valid chromosomes to structurally valid
//! chromosomes: head positions only ever receive symbols drawn from (or
//! copied into) the head, tail positions only terminals, and Dc entries only
//! valid constant-slot indices.

use std::cmp::Ordering;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::evalkit::ObjectiveVector;
use crate::genome::{Chromosome, Func, Gene, GeneLayout, Symbol, SymbolSet};

/// Largest segment moved by inversion and transposition.
const MAX_SEGMENT: usize = 3;

/// Operator probabilities. Defaults are the published GEP settings used for
/// every run in this crate.
///
/// `mutation` and `dc_mutation` are per-position probabilities; every other
/// rate gates its operator once per individual (or once per pair for the
/// recombinations) per generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorRates {
    pub inversion: f64,
    pub mutation: f64,
    pub is_transposition: f64,
    pub ris_transposition: f64,
    pub one_point_recomb: f64,
    pub two_point_recomb: f64,
    pub gene_recomb: f64,
    pub gene_transposition: f64,
    pub rnc_mutation: f64,
    pub dc_mutation: f64,
    pub dc_inversion: f64,
    pub dc_is_transposition: f64,
}

impl Default for OperatorRates {
    fn default() -> Self {
        Self {
            inversion: 0.1,
            mutation: 0.044,
            is_transposition: 0.1,
            ris_transposition: 0.1,
            one_point_recomb: 0.3,
            two_point_recomb: 0.3,
            gene_recomb: 0.1,
            gene_transposition: 0.1,
            rnc_mutation: 0.01,
            dc_mutation: 0.044,
            dc_inversion: 0.1,
            dc_is_transposition: 0.1,
        }
    }
}

impl OperatorRates {
    pub fn zero() -> Self {
        Self {
            inversion: 0.0,
            mutation: 0.0,
            is_transposition: 0.0,
            ris_transposition: 0.0,
            one_point_recomb: 0.0,
            two_point_recomb: 0.0,
            gene_recomb: 0.0,
            gene_transposition: 0.0,
            rnc_mutation: 0.0,
            dc_mutation: 0.0,
            dc_inversion: 0.0,
            dc_is_transposition: 0.0,
        }
    }

    pub fn fields(&self) -> [(&'static str, f64); 12] {
        [
            ("inversion", self.inversion),
            ("mutation", self.mutation),
            ("is_transposition", self.is_transposition),
            ("ris_transposition", self.ris_transposition),
            ("one_point_recomb", self.one_point_recomb),
            ("two_point_recomb", self.two_point_recomb),
            ("gene_recomb", self.gene_recomb),
            ("gene_transposition", self.gene_transposition),
            ("rnc_mutation", self.rnc_mutation),
            ("dc_mutation", self.dc_mutation),
            ("dc_inversion", self.dc_inversion),
            ("dc_is_transposition", self.dc_is_transposition),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in self.fields() {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::config(format!("rate {name} = {r} is outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// A scored chromosome.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub objectives: ObjectiveVector,
}

pub type Population = Vec<Individual>;

/// Single-chromosome operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointOp {
    Mutation,
    Inversion,
    IsTransposition,
    RisTransposition,
    GeneTransposition,
    DcMutation,
    DcInversion,
    DcIsTransposition,
    RncMutation,
}

impl PointOp {
    pub const ALL: [PointOp; 9] = [
        PointOp::Mutation,
        PointOp::Inversion,
        PointOp::IsTransposition,
        PointOp::RisTransposition,
        PointOp::GeneTransposition,
        PointOp::DcMutation,
        PointOp::DcInversion,
        PointOp::DcIsTransposition,
        PointOp::RncMutation,
    ];

    fn rate(self, r: &OperatorRates) -> f64 {
        match self {
            PointOp::Mutation => r.mutation,
            PointOp::Inversion => r.inversion,
            PointOp::IsTransposition => r.is_transposition,
            PointOp::RisTransposition => r.ris_transposition,
            PointOp::GeneTransposition => r.gene_transposition,
            PointOp::DcMutation => r.dc_mutation,
            PointOp::DcInversion => r.dc_inversion,
            PointOp::DcIsTransposition => r.dc_is_transposition,
            PointOp::RncMutation => r.rnc_mutation,
        }
    }
}

/// Two-parent operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recombination {
    OnePoint,
    TwoPoint,
    Gene,
}

impl Recombination {
    pub const ALL: [Recombination; 3] = [Recombination::OnePoint, Recombination::TwoPoint, Recombination::Gene];

    fn rate(self, r: &OperatorRates) -> f64 {
        match self {
            Recombination::OnePoint => r.one_point_recomb,
            Recombination::TwoPoint => r.two_point_recomb,
            Recombination::Gene => r.gene_recomb,
        }
    }
}

/// Weighted symbol sampling for a symbol set and layout.
///
/// Head positions draw from functions (with their weights) and terminals
/// (weight 1 each); tail positions draw terminals uniformly.
#[derive(Debug, Clone)]
pub struct Genesis {
    symbols: SymbolSet,
    layout: GeneLayout,
    linking: Func,
    head: Vec<Symbol>,
    head_weights: WeightedIndex<u32>,
    terminals: Vec<Symbol>,
    slots: usize,
}

impl Genesis {
    pub fn new(symbols: &SymbolSet, layout: GeneLayout, linking: Func) -> Self {
        let slots = if layout.rnc_enabled { symbols.constant_slots() } else { 0 };
        let mut terminals: Vec<Symbol> = (0..symbols.variables().len())
            .map(|v| Symbol::Variable(v as u16))
            .collect();
        terminals.extend((0..slots).map(|k| Symbol::Constant(k as u8)));
        let mut head = Vec::new();
        let mut weights = Vec::new();
        for f in symbols.functions() {
            head.push(Symbol::Function(f.func));
            weights.push(f.weight);
        }
        for &t in &terminals {
            head.push(t);
            weights.push(1);
        }
        Self {
            symbols: symbols.clone(),
            layout,
            linking,
            head,
            head_weights: WeightedIndex::new(weights).expect("weights are positive"),
            terminals,
            slots,
        }
    }

    pub fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    pub fn layout(&self) -> &GeneLayout {
        &self.layout
    }

    pub fn linking(&self) -> Func {
        self.linking
    }

    /// Number of constants carried per gene (0 with RNCs disabled).
    pub fn constant_slots(&self) -> usize {
        self.slots
    }

    fn head_symbol<R: Rng + ?Sized>(&self, rng: &mut R) -> Symbol {
        self.head[self.head_weights.sample(rng)]
    }

    fn terminal<R: Rng + ?Sized>(&self, rng: &mut R) -> Symbol {
        self.terminals[rng.gen_range(0..self.terminals.len())]
    }

    fn constant<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (lo, hi) = self.symbols.constant_range();
        rng.gen_range(lo..=hi)
    }

    fn symbol_at<R: Rng + ?Sized>(&self, pos: usize, rng: &mut R) -> Symbol {
        if pos < self.layout.head_len {
            self.head_symbol(rng)
        } else {
            self.terminal(rng)
        }
    }

    pub fn random_gene<R: Rng + ?Sized>(&self, rng: &mut R) -> Gene {
        let symbols = (0..self.layout.gene_len()).map(|p| self.symbol_at(p, rng)).collect();
        let dc = (0..self.layout.dc_len)
            .map(|_| if self.slots == 0 { 0 } else { rng.gen_range(0..self.slots) as u8 })
            .collect();
        let constants = (0..self.slots).map(|_| self.constant(rng)).collect();
        Gene { symbols, dc, constants }
    }

    pub fn random_chromosome<R: Rng + ?Sized>(&self, genes: usize, rng: &mut R) -> Chromosome {
        Chromosome {
            genes: (0..genes.max(1)).map(|_| self.random_gene(rng)).collect(),
            linking: self.linking,
        }
    }

    /// Applies one single-chromosome operator, gated by its rate.
    pub fn point_op<R: Rng + ?Sized>(
        &self,
        kind: PointOp,
        chrom: &Chromosome,
        rates: &OperatorRates,
        rng: &mut R,
    ) -> Chromosome {
        let mut c = chrom.clone();
        self.apply_point_op(kind, &mut c, kind.rate(rates), rng);
        c
    }

    fn apply_point_op<R: Rng + ?Sized>(&self, kind: PointOp, c: &mut Chromosome, rate: f64, rng: &mut R) {
        if rate <= 0.0 {
            return;
        }
        match kind {
            PointOp::Mutation => self.mutate(c, rate, rng),
            PointOp::DcMutation => self.dc_mutate(c, rate, rng),
            _ if !gate(rate, rng) => {}
            PointOp::Inversion => self.invert(c, rng),
            PointOp::IsTransposition => self.is_transpose(c, rng),
            PointOp::RisTransposition => self.ris_transpose(c, rng),
            PointOp::GeneTransposition => gene_transpose(c, rng),
            PointOp::DcInversion => self.dc_invert(c, rng),
            PointOp::DcIsTransposition => self.dc_is_transpose(c, rng),
            PointOp::RncMutation => self.rnc_mutate(c, rng),
        }
    }

    fn mutate<R: Rng + ?Sized>(&self, c: &mut Chromosome, p: f64, rng: &mut R) {
        for g in &mut c.genes {
            for pos in 0..g.symbols.len() {
                if rng.gen::<f64>() < p {
                    g.symbols[pos] = self.symbol_at(pos, rng);
                }
            }
        }
    }

    fn invert<R: Rng + ?Sized>(&self, c: &mut Chromosome, rng: &mut R) {
        let h = self.layout.head_len;
        let g = rng.gen_range(0..c.genes.len());
        let len = rng.gen_range(1..=MAX_SEGMENT).min(h);
        let start = rng.gen_range(0..=h - len);
        c.genes[g].symbols[start..start + len].reverse();
    }

    fn is_transpose<R: Rng + ?Sized>(&self, c: &mut Chromosome, rng: &mut R) {
        let h = self.layout.head_len;
        if h < 2 {
            return;
        }
        let gene_len = self.layout.gene_len();
        let src = rng.gen_range(0..c.genes.len());
        let start = rng.gen_range(0..gene_len);
        let len = rng.gen_range(1..=MAX_SEGMENT).min(h - 1).min(gene_len - start);
        let segment = c.genes[src].symbols[start..start + len].to_vec();
        let dst = rng.gen_range(0..c.genes.len());
        let at = rng.gen_range(1..h);
        insert_into_head(&mut c.genes[dst].symbols[..h], at, &segment);
    }

    fn ris_transpose<R: Rng + ?Sized>(&self, c: &mut Chromosome, rng: &mut R) {
        let h = self.layout.head_len;
        let gene_len = self.layout.gene_len();
        let g = rng.gen_range(0..c.genes.len());
        let from = rng.gen_range(0..h);
        let Some(start) = (from..h).find(|&i| c.genes[g].symbols[i].is_function()) else {
            return;
        };
        let len = rng.gen_range(1..=MAX_SEGMENT).min(h).min(gene_len - start);
        let segment = c.genes[g].symbols[start..start + len].to_vec();
        insert_into_head(&mut c.genes[g].symbols[..h], 0, &segment);
    }

    fn dc_mutate<R: Rng + ?Sized>(&self, c: &mut Chromosome, p: f64, rng: &mut R) {
        if self.slots == 0 {
            return;
        }
        for g in &mut c.genes {
            for d in &mut g.dc {
                if rng.gen::<f64>() < p {
                    *d = rng.gen_range(0..self.slots) as u8;
                }
            }
        }
    }

    fn dc_invert<R: Rng + ?Sized>(&self, c: &mut Chromosome, rng: &mut R) {
        let n = self.layout.dc_len;
        if n == 0 {
            return;
        }
        let g = rng.gen_range(0..c.genes.len());
        let len = rng.gen_range(1..=MAX_SEGMENT).min(n);
        let start = rng.gen_range(0..=n - len);
        c.genes[g].dc[start..start + len].reverse();
    }

    fn dc_is_transpose<R: Rng + ?Sized>(&self, c: &mut Chromosome, rng: &mut R) {
        let n = self.layout.dc_len;
        if n == 0 {
            return;
        }
        let g = rng.gen_range(0..c.genes.len());
        let start = rng.gen_range(0..n);
        let len = rng.gen_range(1..=MAX_SEGMENT).min(n - start);
        let segment = c.genes[g].dc[start..start + len].to_vec();
        let at = rng.gen_range(0..n);
        insert_into_head(&mut c.genes[g].dc, at, &segment);
    }

    fn rnc_mutate<R: Rng + ?Sized>(&self, c: &mut Chromosome, rng: &mut R) {
        if self.slots == 0 {
            return;
        }
        let g = rng.gen_range(0..c.genes.len());
        let k = rng.gen_range(0..self.slots);
        c.genes[g].constants[k] = self.constant(rng);
    }

    /// Runs the full variation pipeline on a pair of parents, in the fixed
    /// operator order: inversion, mutation, IS, RIS, one-point, two-point
    /// and gene recombination, gene transposition, RNC mutation, Dc
    /// mutation, Dc inversion, Dc IS transposition.
    pub fn vary_pair<R: Rng + ?Sized>(
        &self,
        a: &Chromosome,
        b: &Chromosome,
        rates: &OperatorRates,
        rng: &mut R,
    ) -> (Chromosome, Chromosome) {
        let mut pair = [a.clone(), b.clone()];
        for op in [
            PointOp::Inversion,
            PointOp::Mutation,
            PointOp::IsTransposition,
            PointOp::RisTransposition,
        ] {
            for c in &mut pair {
                self.apply_point_op(op, c, op.rate(rates), rng);
            }
        }
        for kind in Recombination::ALL {
            let r = kind.rate(rates);
            if r > 0.0 && gate(r, rng) {
                let [x, y] = &mut pair;
                recombine_in_place(kind, x, y, rng);
            }
        }
        for op in [
            PointOp::GeneTransposition,
            PointOp::RncMutation,
            PointOp::DcMutation,
            PointOp::DcInversion,
            PointOp::DcIsTransposition,
        ] {
            for c in &mut pair {
                self.apply_point_op(op, c, op.rate(rates), rng);
            }
        }
        let [x, y] = pair;
        (x, y)
    }
}

fn gate<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> bool {
    rate >= 1.0 || rng.gen::<f64>() < rate
}

/// Inserts `segment` at `at`, shifting the rest right and dropping whatever
/// falls off the end of `region`.
fn insert_into_head<T: Copy>(region: &mut [T], at: usize, segment: &[T]) {
    let n = region.len();
    let len = segment.len().min(n - at);
    region.copy_within(at..n - len, at + len);
    region[at..at + len].copy_from_slice(&segment[..len]);
}

fn gene_transpose<R: Rng + ?Sized>(c: &mut Chromosome, rng: &mut R) {
    if c.genes.len() < 2 {
        return;
    }
    let i = rng.gen_range(1..c.genes.len());
    let g = c.genes.remove(i);
    c.genes.insert(0, g);
}

/// Random initial population.
pub fn init_population<R: Rng + ?Sized>(size: usize, genes: usize, genesis: &Genesis, rng: &mut R) -> Vec<Chromosome> {
    (0..size).map(|_| genesis.random_chromosome(genes, rng)).collect()
}

fn same_shape(a: &Chromosome, b: &Chromosome) -> bool {
    a.genes.len() == b.genes.len()
        && a.genes.iter().zip(&b.genes).all(|(x, y)| {
            x.symbols.len() == y.symbols.len() && x.dc.len() == y.dc.len() && x.constants.len() == y.constants.len()
        })
}

/// Loci per gene in the linear serialization used by one- and two-point
/// recombination: symbols, then Dc, then constants.
fn loci_per_gene(c: &Chromosome) -> usize {
    let g = &c.genes[0];
    g.symbols.len() + g.dc.len() + g.constants.len()
}

/// Swaps linear-genome loci `range` between two same-shaped chromosomes.
pub fn swap_loci(a: &mut Chromosome, b: &mut Chromosome, range: std::ops::Range<usize>) {
    let per = loci_per_gene(a);
    for p in range {
        let (g, mut r) = (p / per, p % per);
        let (x, y) = (&mut a.genes[g], &mut b.genes[g]);
        if r < x.symbols.len() {
            std::mem::swap(&mut x.symbols[r], &mut y.symbols[r]);
            continue;
        }
        r -= x.symbols.len();
        if r < x.dc.len() {
            std::mem::swap(&mut x.dc[r], &mut y.dc[r]);
            continue;
        }
        r -= x.dc.len();
        std::mem::swap(&mut x.constants[r], &mut y.constants[r]);
    }
}

fn recombine_in_place<R: Rng + ?Sized>(kind: Recombination, a: &mut Chromosome, b: &mut Chromosome, rng: &mut R) {
    let total = loci_per_gene(a) * a.genes.len();
    match kind {
        Recombination::OnePoint => {
            let cut = rng.gen_range(0..total);
            swap_loci(a, b, cut..total);
        }
        Recombination::TwoPoint => {
            let x = rng.gen_range(0..total);
            let y = rng.gen_range(0..total);
            swap_loci(a, b, x.min(y)..x.max(y));
        }
        Recombination::Gene => {
            let g = rng.gen_range(0..a.genes.len());
            std::mem::swap(&mut a.genes[g], &mut b.genes[g]);
        }
    }
}

/// Recombines two parents, always (no rate gate).
pub fn recombine<R: Rng + ?Sized>(
    kind: Recombination,
    parents: (&Chromosome, &Chromosome),
    rng: &mut R,
) -> Result<(Chromosome, Chromosome)> {
    let (mut a, mut b) = (parents.0.clone(), parents.1.clone());
    if !same_shape(&a, &b) {
        return Err(Error::config("parents do not share a gene layout"));
    }
    recombine_in_place(kind, &mut a, &mut b, rng);
    Ok((a, b))
}

/// Best of `candidates` under `cmp` (`Less` means better); ties keep the
/// earliest.
pub fn best_of<I, F>(candidates: I, cmp: F) -> Option<usize>
where
    I: IntoIterator<Item = usize>,
    F: Fn(usize, usize) -> Ordering,
{
    candidates
        .into_iter()
        .reduce(|best, c| if cmp(c, best) == Ordering::Less { c } else { best })
}

/// Draws `k` indices uniformly with replacement from `0..n` and returns the
/// best under `cmp`.
pub fn tournament_select<R, F>(n: usize, k: usize, cmp: F, rng: &mut R) -> usize
where
    R: Rng + ?Sized,
    F: Fn(usize, usize) -> Ordering,
{
    assert!(n > 0, "tournament over an empty population");
    let draws: Vec<usize> = (0..k.max(1)).map(|_| rng.gen_range(0..n)).collect();
    best_of(draws, cmp).expect("k >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::{layout_of, FunctionSetId};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn genesis(h: usize, rnc: bool) -> Genesis {
        let symbols = SymbolSet::new(
            FunctionSetId::ArithTrig.functions(),
            vec!["a".into(), "b".into(), "c".into()],
            2,
            (-10.0, 10.0),
        )
        .unwrap();
        let layout = layout_of(h, &symbols, rnc).unwrap();
        Genesis::new(&symbols, layout, Func::Add)
    }

    fn check(g: &Genesis, c: &Chromosome) {
        c.check(g.layout(), g.symbols()).unwrap();
    }

    #[test]
    fn sampled_genes_respect_layout_and_range() {
        let g = genesis(8, true);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let gene = g.random_gene(&mut rng);
            gene.check(g.layout(), g.symbols()).unwrap();
            assert!(gene.constants.iter().all(|c| (-10.0..=10.0).contains(c)));
        }
    }

    #[test]
    fn init_is_deterministic() {
        let g = genesis(8, true);
        let a = init_population(20, 3, &g, &mut ChaCha8Rng::seed_from_u64(5));
        let b = init_population(20, 3, &g, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }

    #[test]
    fn zero_rates_are_identity() {
        let g = genesis(6, true);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = g.random_chromosome(3, &mut rng);
        let d = g.random_chromosome(3, &mut rng);
        let zero = OperatorRates::zero();
        for op in PointOp::ALL {
            assert_eq!(g.point_op(op, &c, &zero, &mut rng), c);
        }
        let (x, y) = g.vary_pair(&c, &d, &zero, &mut rng);
        assert_eq!((x, y), (c, d));
    }

    #[test]
    fn ris_without_head_function_is_noop() {
        let g = genesis(4, false);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut c = g.random_chromosome(1, &mut rng);
        for s in &mut c.genes[0].symbols {
            *s = Symbol::Variable(1);
        }
        c.genes[0].symbols[0] = Symbol::Variable(0);
        let ones = OperatorRates {
            ris_transposition: 1.0,
            ..OperatorRates::zero()
        };
        for _ in 0..100 {
            assert_eq!(g.point_op(PointOp::RisTransposition, &c, &ones, &mut rng), c);
        }
    }

    #[test]
    fn ris_puts_function_at_root() {
        let g = genesis(5, false);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ones = OperatorRates {
            ris_transposition: 1.0,
            ..OperatorRates::zero()
        };
        for _ in 0..200 {
            let c = g.random_chromosome(1, &mut rng);
            let out = g.point_op(PointOp::RisTransposition, &c, &ones, &mut rng);
            if out != c {
                assert!(out.genes[0].symbols[0].is_function());
            }
            check(&g, &out);
        }
    }

    #[test]
    fn insert_truncates_at_boundary() {
        let mut head = [1, 2, 3, 4, 5];
        insert_into_head(&mut head, 1, &[8, 9]);
        assert_eq!(head, [1, 8, 9, 2, 3]);
        let mut head = [1, 2, 3];
        insert_into_head(&mut head, 2, &[7, 8, 9]);
        assert_eq!(head, [1, 2, 7]);
    }

    #[test]
    fn gene_transposition_moves_gene_to_front() {
        let g = genesis(3, true);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = g.random_chromosome(2, &mut rng);
        let ones = OperatorRates {
            gene_transposition: 1.0,
            ..OperatorRates::zero()
        };
        let out = g.point_op(PointOp::GeneTransposition, &c, &ones, &mut rng);
        assert_eq!(out.genes[0], c.genes[1]);
        assert_eq!(out.genes[1], c.genes[0]);
    }

    #[test]
    fn one_point_at_zero_swaps_parents() {
        let g = genesis(4, true);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (a, b) = (g.random_chromosome(3, &mut rng), g.random_chromosome(3, &mut rng));
        let (mut x, mut y) = (a.clone(), b.clone());
        let total = loci_per_gene(&a) * 3;
        swap_loci(&mut x, &mut y, 0..total);
        assert_eq!((x, y), (b, a));
    }

    #[test]
    fn recombining_identical_parents() {
        let g = genesis(4, true);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = g.random_chromosome(3, &mut rng);
        for kind in Recombination::ALL {
            let (x, y) = recombine(kind, (&a, &a), &mut rng).unwrap();
            assert_eq!((&x, &y), (&a, &a));
        }
    }

    #[test]
    fn recombination_conserves_content_positionwise() {
        let g = genesis(5, true);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let (a, b) = (g.random_chromosome(3, &mut rng), g.random_chromosome(3, &mut rng));
            for kind in Recombination::ALL {
                let (x, y) = recombine(kind, (&a, &b), &mut rng).unwrap();
                check(&g, &x);
                check(&g, &y);
                for gi in 0..3 {
                    for p in 0..a.genes[gi].symbols.len() {
                        let mut before = [a.genes[gi].symbols[p], b.genes[gi].symbols[p]];
                        let mut after = [x.genes[gi].symbols[p], y.genes[gi].symbols[p]];
                        before.sort_by_key(|s| format!("{s:?}"));
                        after.sort_by_key(|s| format!("{s:?}"));
                        assert_eq!(before, after);
                    }
                }
            }
        }
    }

    #[test]
    fn layout_mismatch_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = genesis(4, true).random_chromosome(3, &mut rng);
        let b = genesis(5, true).random_chromosome(3, &mut rng);
        assert!(recombine(Recombination::OnePoint, (&a, &b), &mut rng).is_err());
    }

    #[test]
    fn tournament_of_everyone_returns_best() {
        let fitness = [0.5, 0.3, 0.9, 0.1, 0.7];
        let cmp = |i: usize, j: usize| fitness[i].partial_cmp(&fitness[j]).unwrap();
        assert_eq!(best_of(0..5, cmp), Some(3));
    }

    #[test]
    fn tournament_k1_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts = [0usize; 4];
        for _ in 0..40_000 {
            counts[tournament_select(4, 1, |_, _| Ordering::Equal, &mut rng)] += 1;
        }
        for c in counts {
            assert!((c as f64 / 40_000.0 - 0.25).abs() < 0.02, "{counts:?}");
        }
    }

    #[test]
    fn binary_tournament_picks_better_three_quarters() {
        // 4 equally likely draws, 3 contain the better individual
        let fitness = [0.1, 0.9];
        let cmp = |i: usize, j: usize| fitness[i].partial_cmp(&fitness[j]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let trials = 100_000;
        let wins = (0..trials).filter(|_| tournament_select(2, 2, cmp, &mut rng) == 0).count();
        let p = wins as f64 / trials as f64;
        assert!((p - 0.75).abs() < 0.02, "{p}");
    }
}
