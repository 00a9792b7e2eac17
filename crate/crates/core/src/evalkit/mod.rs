//! Evaluation: protected expression evaluation, RRSE, objective vectors,
//! datasets, synthetic problem generators and the infix parser.

mod dataset;
mod parse;
mod synth;

pub use dataset::{split, Dataset};
pub use parse::{parse_infix, size_with_genes};
pub use synth::{synth_dataset, Problem};

use crate::error::{Error, Result};
use crate::genome::{chromosome_size, Chromosome, Expr, Func, SymbolSet};

/// The two minimized objectives of a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveVector {
    /// RRSE on the evaluation data, `+inf` when invalid.
    pub error: f64,
    /// Expressed node count, linking nodes excluded.
    pub size: usize,
    pub valid: bool,
}

impl ObjectiveVector {
    pub fn new(error: f64, size: usize) -> Self {
        Self {
            error,
            size,
            valid: true,
        }
    }

    pub fn invalid(size: usize) -> Self {
        Self {
            error: f64::INFINITY,
            size,
            valid: false,
        }
    }
}

/// Postfix program compiled from an expression tree with variables bound to
/// dataset column indices.
#[derive(Debug, Clone)]
pub struct Program {
    code: Vec<Instr>,
    max_stack: usize,
}

#[derive(Debug, Clone, Copy)]
enum Instr {
    Var(usize),
    Const(f64),
    Unary(Func),
    Binary(Func),
}

impl Program {
    /// Compiles `expr`, resolving variables against `names`.
    pub fn compile(expr: &Expr, names: &[String]) -> Result<Self> {
        fn emit(e: &Expr, names: &[String], code: &mut Vec<Instr>, depth: usize, max: &mut usize) -> Result<()> {
            *max = (*max).max(depth + 1);
            match e {
                Expr::Var(v) => {
                    let idx = names
                        .iter()
                        .position(|n| n == v)
                        .ok_or_else(|| Error::config(format!("unknown variable `{v}`")))?;
                    code.push(Instr::Var(idx));
                }
                Expr::Const(c) => code.push(Instr::Const(*c)),
                Expr::Func(f, args) => {
                    for (i, a) in args.iter().enumerate() {
                        emit(a, names, code, depth + i, max)?;
                    }
                    code.push(if args.len() == 2 {
                        Instr::Binary(*f)
                    } else {
                        Instr::Unary(*f)
                    });
                }
            }
            Ok(())
        }
        let mut code = Vec::with_capacity(expr.size());
        let mut max_stack = 0;
        emit(expr, names, &mut code, 0, &mut max_stack)?;
        Ok(Self { code, max_stack })
    }

    /// Evaluates one row; `None` when any intermediate value is non-finite.
    pub fn eval(&self, row: &[f64], stack: &mut Vec<f64>) -> Option<f64> {
        stack.clear();
        stack.reserve(self.max_stack);
        for ins in &self.code {
            let v = match *ins {
                Instr::Var(i) => row[i],
                Instr::Const(c) => c,
                Instr::Unary(f) => {
                    let x = stack.pop()?;
                    f.apply(x, 0.0)
                }
                Instr::Binary(f) => {
                    let y = stack.pop()?;
                    let x = stack.pop()?;
                    f.apply(x, y)
                }
            };
            if !v.is_finite() {
                return None;
            }
            stack.push(v);
        }
        stack.pop()
    }

    /// Evaluates every row of `data`; `None` on the first invalid row.
    pub fn eval_all(&self, data: &Dataset) -> Option<Vec<f64>> {
        let mut stack = Vec::with_capacity(self.max_stack);
        (0..data.len()).map(|r| self.eval(data.row(r), &mut stack)).collect()
    }
}

/// Evaluates a tree on one row. `Ok(None)` is a numeric invalid (division by
/// zero, `ln` of a non-positive value, overflow, ...); an unknown variable is
/// a configuration error.
pub fn eval_tree(tree: &Expr, row: &[f64], names: &[String]) -> Result<Option<f64>> {
    if row.len() != names.len() {
        return Err(Error::data(format!(
            "row has {} values for {} variables",
            row.len(),
            names.len()
        )));
    }
    let program = Program::compile(tree, names)?;
    Ok(program.eval(row, &mut Vec::new()))
}

/// Root relative squared error,
/// `sqrt(sum (p_i - y_i)^2 / sum (mean(y) - y_i)^2)`.
/// Sums run left to right.
pub fn rrse(predictions: &[f64], targets: &[f64]) -> Result<f64> {
    if predictions.len() != targets.len() {
        return Err(Error::data(format!(
            "{} predictions for {} targets",
            predictions.len(),
            targets.len()
        )));
    }
    if targets.len() < 2 {
        return Err(Error::data("RRSE needs at least two targets"));
    }
    let mean = targets.iter().sum::<f64>() / targets.len() as f64;
    let denom: f64 = targets.iter().map(|y| (mean - y) * (mean - y)).sum();
    if denom <= 0.0 || !denom.is_finite() {
        return Err(Error::data("targets have zero variance"));
    }
    let num: f64 = predictions
        .iter()
        .zip(targets)
        .map(|(p, y)| (p - y) * (p - y))
        .sum();
    Ok((num / denom).sqrt())
}

/// Scores a chromosome on a dataset. Any invalid row invalidates the whole
/// individual.
pub fn objectives(chrom: &Chromosome, symbols: &SymbolSet, data: &Dataset) -> Result<ObjectiveVector> {
    let size = chromosome_size(chrom);
    let program = Program::compile(&chrom.to_expr(symbols), data.names())?;
    Ok(objectives_of(&program, size, data))
}

pub(crate) fn objectives_of(program: &Program, size: usize, data: &Dataset) -> ObjectiveVector {
    let Some(pred) = program.eval_all(data) else {
        return ObjectiveVector::invalid(size);
    };
    match rrse(&pred, data.target()) {
        Ok(e) if e.is_finite() => ObjectiveVector::new(e, size),
        _ => ObjectiveVector::invalid(size),
    }
}
