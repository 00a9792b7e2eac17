use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Dataset;
use crate::error::{Error, Result};

/// Synthetic benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// `y = cos(sqrt(sin(c))) * cos(b) * sin(a) + tan(d - e)`, inputs U[0,1].
    Tp1,
    /// `y = sin(a) * (cos(b) / sqrt(10^c) + tan(d - a))`, inputs U[0,1].
    Tp2,
    /// Dew point from the linear rule `Td = T - (100 - RH) / 5`, with
    /// T ~ U[0,35] degC as `d0` and RH ~ U[50,100] % as `d1`.
    Dew,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Tp1 => "tp1",
            Problem::Tp2 => "tp2",
            Problem::Dew => "dew",
        }
    }

    pub fn variables(self) -> &'static [&'static str] {
        match self {
            Problem::Tp1 | Problem::Tp2 => &["a", "b", "c", "d", "e"],
            Problem::Dew => &["d0", "d1"],
        }
    }

    pub fn target_name(self) -> &'static str {
        match self {
            Problem::Tp1 | Problem::Tp2 => "y",
            Problem::Dew => "dv",
        }
    }

    /// The generating formula in infix form.
    pub fn formula(self) -> &'static str {
        match self {
            Problem::Tp1 => "cos(sqrt(sin(c)))*cos(b)*sin(a)+tan(d-e)",
            Problem::Tp2 => "sin(a)*(cos(b)/sqrt(10^c)+tan(d-a))",
            Problem::Dew => "d0-(100-d1)/5",
        }
    }

    /// Target value for one input row.
    pub fn target(self, x: &[f64]) -> f64 {
        match self {
            Problem::Tp1 => {
                let (a, b, c, d, e) = (x[0], x[1], x[2], x[3], x[4]);
                c.sin().sqrt().cos() * b.cos() * a.sin() + (d - e).tan()
            }
            Problem::Tp2 => {
                let (a, b, c, d) = (x[0], x[1], x[2], x[3]);
                a.sin() * (b.cos() / 10f64.powf(c).sqrt() + (d - a).tan())
            }
            Problem::Dew => x[0] - (100.0 - x[1]) / 5.0,
        }
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tp1" => Ok(Problem::Tp1),
            "tp2" => Ok(Problem::Tp2),
            "dew" => Ok(Problem::Dew),
            other => Err(Error::config(format!(
                "unknown problem `{other}` (expected tp1, tp2 or dew)"
            ))),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Draws `n_rows` rows for `problem`, deterministically from `seed`.
pub fn synth_dataset(problem: Problem, n_rows: usize, seed: u64) -> Result<Dataset> {
    if n_rows < 2 {
        return Err(Error::data("a synthetic dataset needs at least 2 rows"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n_rows);
    let mut target = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let row: Vec<f64> = match problem {
            Problem::Tp1 | Problem::Tp2 => (0..5).map(|_| rng.gen_range(0.0..=1.0)).collect(),
            Problem::Dew => vec![rng.gen_range(0.0..=35.0), rng.gen_range(50.0..=100.0)],
        };
        target.push(problem.target(&row));
        rows.push(row);
    }
    Dataset::new(
        problem.variables().iter().map(|s| s.to_string()).collect(),
        rows,
        target,
        problem.target_name(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tp1_rows_follow_formula() {
        let d = synth_dataset(Problem::Tp1, 200, 7).unwrap();
        for (x, y) in d.rows().zip(d.target()) {
            assert!(x.iter().all(|v| (0.0..=1.0).contains(v)));
            let expect = (x[2].sin().sqrt()).cos() * x[1].cos() * x[0].sin() + (x[3] - x[4]).tan();
            assert!((y - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn tp2_rows_follow_formula() {
        let d = synth_dataset(Problem::Tp2, 50, 1).unwrap();
        for (x, y) in d.rows().zip(d.target()) {
            let expect = x[0].sin() * (x[1].cos() / (10f64.powf(x[2])).sqrt() + (x[3] - x[0]).tan());
            assert!((y - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn dew_rule() {
        assert_eq!(Problem::Dew.target(&[25.0, 60.0]), 17.0);
        let d = synth_dataset(Problem::Dew, 100, 3).unwrap();
        assert_eq!(d.names(), ["d0", "d1"]);
        assert_eq!(d.target_name(), "dv");
        for x in d.rows() {
            assert!((0.0..=35.0).contains(&x[0]) && (50.0..=100.0).contains(&x[1]));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = synth_dataset(Problem::Tp1, 30, 11).unwrap();
        let b = synth_dataset(Problem::Tp1, 30, 11).unwrap();
        let c = synth_dataset(Problem::Tp1, 30, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
