//! `.traj.csv` files: header `traj,t,x1,...,xd`, one row per record, rows
//! grouped by trajectory and time-sorted within a group.

use std::io::{Read, Write};
use std::path::Path;

use super::trajectory::Trajectory;
use crate::error::{Error, ParseError, Result};
use crate::network::StateVector;

/// Plain decimal with 17 significant digits, enough to round-trip any `f64`.
pub fn format_time(t: f64) -> String {
    if t == 0.0 {
        return "0".to_string();
    }
    let exponent = t.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{t:.decimals$}")
}

pub fn write_trajectories<W: Write>(mut out: W, trajs: &[Trajectory]) -> Result<()> {
    let dim = trajs.first().map_or(0, Trajectory::dim);
    let mut header = String::from("traj,t");
    for i in 1..=dim {
        header.push_str(&format!(",x{i}"));
    }
    writeln!(out, "{header}")?;
    let mut line = String::new();
    for traj in trajs {
        for (t, x) in traj.records() {
            line.clear();
            line.push_str(&traj.id().to_string());
            line.push(',');
            line.push_str(&format_time(t));
            for xi in x {
                line.push(',');
                line.push_str(&xi.to_string());
            }
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

pub fn write_trajectory_file(path: impl AsRef<Path>, trajs: &[Trajectory]) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut buf = std::io::BufWriter::new(file);
    write_trajectories(&mut buf, trajs)?;
    buf.flush()?;
    Ok(())
}

pub fn read_trajectories<R: Read>(input: R) -> Result<Vec<Trajectory>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();
    let dim = headers.len().saturating_sub(2);
    let expected: Vec<String> =
        ["traj".to_string(), "t".to_string()].into_iter().chain((1..=dim).map(|i| format!("x{i}"))).collect();
    if dim == 0 || headers.iter().ne(expected.iter().map(String::as_str)) {
        return Err(ParseError::new(1, format!("expected header `{}`", expected.join(","))).into());
    }

    let mut trajs = Vec::new();
    let mut current: Option<(u64, Vec<(f64, StateVector)>)> = None;
    let mut seen = std::collections::HashSet::new();
    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(csv_error)?;
        if record.len() != dim + 2 {
            return Err(ParseError::new(line, format!("expected {} fields", dim + 2)).into());
        }
        let id: u64 = record[0].parse().map_err(|_| ParseError::new(line, "invalid trajectory id"))?;
        let t: f64 = record[1].parse().map_err(|_| ParseError::new(line, "invalid time"))?;
        let x = (2..dim + 2)
            .map(|i| record[i].parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ParseError::new(line, "invalid molecule count"))?;
        match &mut current {
            Some((cur, records)) if *cur == id => records.push((t, StateVector::new(x))),
            _ => {
                if let Some((prev, records)) = current.take() {
                    trajs.push(Trajectory::from_records(prev, records).map_err(|m| ParseError::new(line, m))?);
                }
                if !seen.insert(id) {
                    return Err(ParseError::new(line, format!("rows of trajectory {id} are not contiguous")).into());
                }
                current = Some((id, vec![(t, StateVector::new(x))]));
            }
        }
    }
    if let Some((id, records)) = current {
        trajs.push(Trajectory::from_records(id, records).map_err(|m| ParseError::new(0, m))?);
    }
    Ok(trajs)
}

pub fn read_trajectory_file(path: impl AsRef<Path>) -> Result<Vec<Trajectory>> {
    read_trajectories(std::fs::File::open(path)?)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    ParseError::new(line, e.to_string()).into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::parse_network;
    use crate::sim::{simulate_ensemble, SimOptions};

    #[test]
    fn time_format_keeps_precision() {
        for t in [0.1, 1.0 / 3.0, 12345.678901234567, 2.5e-7, 9.999999999999999e3] {
            let s = format_time(t);
            assert!(!s.contains('e'), "{s}");
            assert_eq!(s.parse::<f64>().unwrap(), t);
        }
        assert_eq!(format_time(0.0), "0");
    }

    #[test]
    fn round_trip() {
        let sys = parse_network("species: A B\nA -> B @ 1\nB -> A @ 2\n0 -> A @ 1").unwrap();
        let trajs = simulate_ensemble(&sys, &StateVector::new(vec![1, 0]), &SimOptions::until(3.0), 4, 5).unwrap();
        let mut buf = Vec::new();
        write_trajectories(&mut buf, &trajs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("traj,t,x1,x2\n0,0,1,0\n"));
        let back = read_trajectories(&buf[..]).unwrap();
        assert_eq!(back.len(), 4);
        for (a, b) in trajs.iter().zip(&back) {
            assert_eq!(a.times(), b.times());
            assert!(a.records().zip(b.records()).all(|(r, s)| r.1 == s.1));
        }
    }

    #[test]
    fn rejects_malformed_files() {
        let cases = [
            "traj,time,x1\n0,0,1\n",
            "traj,t,x1\n0,0.5,1\n",
            "traj,t,x1\n0,0,1\n0,0,2\n",
            "traj,t,x1\n0,0,1\n1,0,1\n0,1,2\n",
            "traj,t,x1\n0,0,-1\n",
        ];
        for text in cases {
            assert!(read_trajectories(text.as_bytes()).is_err(), "{text}");
        }
    }
}
