//! Transition-rate data `lambda_z(x)` and the `.rates.csv` format.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{CoreError, Error, InferError, ParseError, Result};
use crate::network::{Rate, ReactionSystem, StateVector, TransitionVector};

/// Non-negative rates keyed by transition vector, then state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RateTable {
    dim: usize,
    entries: BTreeMap<TransitionVector, BTreeMap<StateVector, Rate>>,
}

impl RateTable {
    pub fn new(dim: usize) -> Self {
        RateTable { dim, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, z: TransitionVector, x: StateVector, rate: Rate) -> Result<()> {
        for found in [z.dim(), x.dim()] {
            if found != self.dim {
                return Err(CoreError::DimensionMismatch { expected: self.dim, found }.into());
            }
        }
        if rate.is_negative() || !rate.is_finite() {
            return Err(InferError::NegativeRate { z, state: x, rate: rate.to_string() }.into());
        }
        let per_z = self.entries.entry(z.clone()).or_default();
        if per_z.contains_key(&x) {
            return Err(InferError::DuplicateRate { z, state: x }.into());
        }
        per_z.insert(x, rate);
        Ok(())
    }

    pub fn get(&self, z: &TransitionVector, x: &StateVector) -> Option<&Rate> {
        self.entries.get(z).and_then(|m| m.get(x))
    }

    pub fn transition_vectors(&self) -> impl Iterator<Item = &TransitionVector> {
        self.entries.keys()
    }

    pub fn rates_for(&self, z: &TransitionVector) -> Option<&BTreeMap<StateVector, Rate>> {
        self.entries.get(z)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TransitionVector, &StateVector, &Rate)> {
        self.entries.iter().flat_map(|(z, m)| m.iter().map(move |(x, r)| (z, x, r)))
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        self.iter().all(|(_, _, r)| r.is_exact())
    }

    /// Sum of the tabulated rates out of `x`.
    pub fn total_rate(&self, x: &StateVector) -> Rate {
        self.entries.values().filter_map(|m| m.get(x)).cloned().sum()
    }

    /// Exact rates of `sys` along each of its transition vectors at each state.
    pub fn from_system(sys: &ReactionSystem, states: &[StateVector]) -> Result<Self> {
        let mut table = RateTable::new(sys.dim());
        for (z, reactions) in sys.by_transition() {
            for x in states {
                if x.dim() != sys.dim() {
                    return Err(CoreError::DimensionMismatch { expected: sys.dim(), found: x.dim() }.into());
                }
                let rate: Rate = reactions.iter().map(|r| r.intensity_unchecked(x)).sum();
                table.insert(z.clone(), x.clone(), rate)?;
            }
        }
        Ok(table)
    }
}

/// Header `z1..zd,x1..xd,rate`; extra trailing columns are ignored.
pub fn read_rate_table<R: Read>(input: R) -> Result<RateTable> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();
    let dim = headers.iter().take_while(|h| h.starts_with('z')).count();
    let expected: Vec<String> = (1..=dim)
        .map(|i| format!("z{i}"))
        .chain((1..=dim).map(|i| format!("x{i}")))
        .chain(std::iter::once("rate".to_string()))
        .collect();
    if dim == 0 || headers.len() < expected.len() || headers.iter().zip(&expected).any(|(h, e)| h != e) {
        return Err(ParseError::new(1, format!("expected header starting `{}`", expected.join(","))).into());
    }
    let mut table = RateTable::new(dim);
    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(csv_error)?;
        if record.len() < 2 * dim + 1 {
            return Err(ParseError::new(line, "too few fields").into());
        }
        let z = (0..dim)
            .map(|i| record[i].parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ParseError::new(line, "invalid transition vector entry"))?;
        let z = TransitionVector::new(z).map_err(|_| ParseError::new(line, "transition vector is zero"))?;
        let x = (dim..2 * dim)
            .map(|i| record[i].parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ParseError::new(line, "invalid state entry"))?;
        let rate: Rate = record[2 * dim].parse().map_err(|e| ParseError::new(line, format!("{e}")))?;
        table
            .insert(z, StateVector::new(x), rate)
            .map_err(|e| ParseError::new(line, e.to_string()))?;
    }
    Ok(table)
}

pub fn read_rate_table_file(path: impl AsRef<Path>) -> Result<RateTable> {
    read_rate_table(std::fs::File::open(path)?)
}

pub(crate) fn rate_table_header(dim: usize) -> String {
    let z: Vec<String> = (1..=dim).map(|i| format!("z{i}")).collect();
    let x: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    format!("{},{},rate", z.join(","), x.join(","))
}

pub(crate) fn rate_table_key(z: &TransitionVector, x: &StateVector) -> String {
    let z: Vec<String> = z.deltas().iter().map(i64::to_string).collect();
    let x: Vec<String> = x.counts().iter().map(u64::to_string).collect();
    format!("{},{}", z.join(","), x.join(","))
}

pub fn write_rate_table<W: Write>(mut out: W, table: &RateTable) -> Result<()> {
    writeln!(out, "{}", rate_table_header(table.dim()))?;
    for (z, x, rate) in table.iter() {
        writeln!(out, "{},{rate}", rate_table_key(z, x))?;
    }
    Ok(())
}

pub fn write_rate_table_file(path: impl AsRef<Path>, table: &RateTable) -> Result<()> {
    let mut buf = Vec::new();
    write_rate_table(&mut buf, table)?;
    std::fs::write(path, buf)?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    ParseError::new(line, e.to_string()).into()
}
