//! Invariant time series as CSV: header
//! `t,M,M1,M2,M3,K,E,P_1..P_dim,verdict`, one row per sample time, floats
//! printed with 17 significant digits so every f64 round-trips exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::state::InvariantSet;

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_series(path: impl AsRef<Path>, trajectory: &Trajectory) -> Result<()> {
    let dim = trajectory.final_state.grid().dim();
    let mut out = BufWriter::new(File::create(path)?);
    let p_cols: Vec<String> = (1..=dim).map(|a| format!("P_{a}")).collect();
    writeln!(out, "t,M,M1,M2,M3,K,E,{},verdict", p_cols.join(","))?;
    let verdict = trajectory.verdict.label();
    for (t, inv) in trajectory.times.iter().zip(&trajectory.invariant_series) {
        let ps: Vec<String> = inv.p.iter().map(|&x| fmt(x)).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{verdict}",
            fmt(*t),
            fmt(inv.m),
            fmt(inv.m1),
            fmt(inv.m2),
            fmt(inv.m3),
            fmt(inv.k),
            fmt(inv.e),
            ps.join(",")
        )?;
    }
    out.flush()?;
    Ok(())
}

pub struct ParsedSeries {
    pub times: Vec<f64>,
    pub invariants: Vec<InvariantSet>,
    pub verdict: String,
}

pub fn read_series(path: impl AsRef<Path>) -> Result<ParsedSeries> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Series("empty file".into()))??;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 8 || cols[0] != "t" || cols[1] != "M" || *cols.last().unwrap() != "verdict" {
        return Err(Error::Series(format!("unexpected header `{header}`")));
    }
    let dim = cols.len() - 8;
    let mut times = Vec::new();
    let mut invariants = Vec::new();
    let mut verdict = String::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != cols.len() {
            return Err(Error::Series(format!(
                "row {}: expected {} columns, got {}",
                i + 2,
                cols.len(),
                parts.len()
            )));
        }
        let num = |j: usize| -> Result<f64> {
            parts[j]
                .parse()
                .map_err(|_| Error::Series(format!("row {}: bad number `{}`", i + 2, parts[j])))
        };
        times.push(num(0)?);
        let p: Result<Vec<f64>> = (0..dim).map(|a| num(7 + a)).collect();
        invariants.push(InvariantSet {
            m: num(1)?,
            m1: num(2)?,
            m2: num(3)?,
            m3: num(4)?,
            k: num(5)?,
            e: num(6)?,
            p: p?,
        });
        verdict = parts[cols.len() - 1].to_string();
    }
    if invariants.is_empty() {
        return Err(Error::Series("no data rows".into()));
    }
    Ok(ParsedSeries { times, invariants, verdict })
}
