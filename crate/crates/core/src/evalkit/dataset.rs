use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Rows of named input variables plus a target column, kept in their
/// original (time-series) order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    target_name: String,
    width: usize,
    values: Vec<f64>,
    target: Vec<f64>,
}

impl Dataset {
    pub fn new(
        names: Vec<String>,
        rows: Vec<Vec<f64>>,
        target: Vec<f64>,
        target_name: impl Into<String>,
    ) -> Result<Self> {
        let width = names.len();
        let mut values = Vec::with_capacity(rows.len() * width);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != width {
                return Err(Error::data(format!(
                    "row {i} has {} values, expected {width}",
                    r.len()
                )));
            }
            values.extend_from_slice(r);
        }
        Self::from_flat(names, values, target, target_name.into())
    }

    fn from_flat(names: Vec<String>, values: Vec<f64>, target: Vec<f64>, target_name: String) -> Result<Self> {
        let width = names.len();
        if width == 0 {
            return Err(Error::data("dataset has no input variables"));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) || *n == target_name {
                return Err(Error::data(format!("bad or duplicate column name `{n}`")));
            }
        }
        if values.len() != target.len() * width {
            return Err(Error::data("row count does not match target length"));
        }
        if target.len() < 2 {
            return Err(Error::data(format!(
                "dataset needs at least 2 rows, got {}",
                target.len()
            )));
        }
        if let Some(p) = values.iter().chain(&target).position(|v| !v.is_finite()) {
            return Err(Error::data(format!("non-finite value at flat position {p}")));
        }
        let first = target[0];
        if target.iter().all(|&y| y == first) {
            return Err(Error::data("target column has zero variance"));
        }
        Ok(Self {
            names,
            target_name,
            width,
            values,
            target,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.width..(i + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.width)
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        Self::from_flat(
            self.names.clone(),
            self.values[range.start * self.width..range.end * self.width].to_vec(),
            self.target[range].to_vec(),
            self.target_name.clone(),
        )
    }

    /// Reads a CSV with a header line. The target is the column named
    /// `target`, or the last column when `None`.
    pub fn from_csv<R: Read>(reader: R, target: Option<&str>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header.len() < 2 {
            return Err(Error::data("CSV needs at least one input column and a target"));
        }
        let t = match target {
            Some(name) => header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::data(format!("target column `{name}` not in header")))?,
            None => header.len() - 1,
        };
        let names: Vec<String> = header
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != t)
            .map(|(_, h)| h.clone())
            .collect();
        let mut values = Vec::new();
        let mut targets = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            for (i, field) in rec.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| {
                    Error::data(format!(
                        "data row {}: column `{}`: `{field}` is not a number",
                        line + 1,
                        header[i]
                    ))
                })?;
                if i == t {
                    targets.push(v);
                } else {
                    values.push(v);
                }
            }
        }
        Self::from_flat(names, values, targets, header[t].clone())
    }

    /// Writes the dataset as CSV, inputs first and the target last, at full
    /// precision.
    pub fn to_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<&str> = self.names.iter().map(String::as_str).collect();
        header.push(&self.target_name);
        w.write_record(&header)?;
        for (row, y) in self.rows().zip(&self.target) {
            w.write_record(row.iter().chain(std::iter::once(y)).map(|v| format!("{v:?}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Order-preserving split: the first `floor(fraction * n)` rows train, the
/// rest test.
pub fn split(data: &Dataset, train_fraction: f64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::data(format!(
            "train fraction {train_fraction} must lie strictly between 0 and 1"
        )));
    }
    let n = data.len();
    let n_train = (train_fraction * n as f64).floor() as usize;
    if n_train < 2 || n - n_train < 2 {
        return Err(Error::data(format!(
            "split of {n} rows at {train_fraction} leaves {n_train}/{} rows",
            n - n_train
        )));
    }
    Ok((data.slice(0..n_train)?, data.slice(n_train..n)?))
}
