//! Chain traces and their CSV form.
//!
//! A trace file starts with `#` metadata lines (code version, seed, chain
//! index, config echo) followed by a CSV table
//! `step,branch,accept_prob,accepted,sq_jump,q0,…,q{m−1}`. Floats are written
//! with 17 significant digits so a read-back reproduces every bit.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use geomc::kernels::KernelOutcome;
use nalgebra::DVector;

use crate::error::{HarnessError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
const FIXED_COLUMNS: [&str; 5] = ["step", "branch", "accept_prob", "accepted", "sq_jump"];

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// 1-based: the state after `step` transitions.
    pub step: usize,
    pub branch: usize,
    pub accept_prob: f64,
    pub accepted: bool,
    pub sq_jump: f64,
    pub q: Vec<f64>,
}

impl TraceRecord {
    pub fn from_outcome(step: usize, out: &KernelOutcome, state: &DVector<f64>) -> Self {
        Self {
            step,
            branch: out.branch,
            accept_prob: out.accept_prob,
            accepted: out.accepted,
            sq_jump: out.sq_jump,
            q: state.iter().copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceHeader {
    pub version: Option<String>,
    pub base_seed: Option<u64>,
    pub chain: Option<u64>,
    pub config: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainTrace {
    pub header: TraceHeader,
    pub dim: usize,
    pub records: Vec<TraceRecord>,
}

/// `{:.16e}`: 17 significant digits, exact for any finite double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl ChainTrace {
    pub fn column_names(dim: usize) -> Vec<String> {
        FIXED_COLUMNS
            .iter()
            .map(|s| s.to_string())
            .chain((0..dim).map(|j| format!("q{j}")))
            .collect()
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# geomc-harness {}", self.header.version.as_deref().unwrap_or(VERSION))?;
        if let Some(s) = self.header.base_seed {
            writeln!(out, "# base_seed {s}")?;
        }
        if let Some(c) = self.header.chain {
            writeln!(out, "# chain {c}")?;
        }
        if let Some(cfg) = &self.header.config {
            writeln!(out, "# config {cfg}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::column_names(self.dim))?;
        for r in &self.records {
            let mut row = vec![
                r.step.to_string(),
                r.branch.to_string(),
                fmt_f64(r.accept_prob),
                (r.accepted as u8).to_string(),
                fmt_f64(r.sq_jump),
            ];
            row.extend(r.q.iter().map(|&x| fmt_f64(x)));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut buf = std::io::BufWriter::new(file);
        self.write(&mut buf)?;
        buf.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read(file, &path.display().to_string())
    }

    /// Parses a trace; `name` labels schema errors.
    pub fn read<R: Read>(input: R, name: &str) -> Result<Self> {
        let mut text = String::new();
        BufReader::new(input).read_to_string(&mut text)?;
        let mut header = TraceHeader::default();
        for line in text.as_bytes().lines() {
            let line = line?;
            let Some(meta) = line.strip_prefix('#') else { break };
            let meta = meta.trim_start();
            let (key, value) = meta.split_once(' ').unwrap_or((meta, ""));
            match key {
                "geomc-harness" => header.version = Some(value.to_string()),
                "base_seed" => header.base_seed = value.parse().ok(),
                "chain" => header.chain = value.parse().ok(),
                "config" => header.config = Some(value.to_string()),
                _ => {}
            }
        }

        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let cols: Vec<String> = match rdr.headers() {
            Ok(h) => h.iter().map(str::to_string).collect(),
            Err(e) => return Err(HarnessError::schema(name, e.to_string())),
        };
        if cols.is_empty() || cols.iter().all(|c| c.is_empty()) {
            return Err(HarnessError::schema(name, "missing header row"));
        }
        let dim = cols.len().saturating_sub(FIXED_COLUMNS.len());
        if dim == 0 || cols != Self::column_names(dim) {
            return Err(HarnessError::schema(
                name,
                format!("expected columns {}", Self::column_names(dim.max(1)).join(",")),
            ));
        }
        let mut records = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let row = row.map_err(|e| HarnessError::schema(name, e.to_string()))?;
            let line = i + 1;
            let bad = |col: &str| HarnessError::schema(name, format!("record {line}: bad value in column {col}"));
            let int = |k: usize| row[k].parse::<usize>().map_err(|_| bad(FIXED_COLUMNS[k]));
            let float = |k: usize, col: &str| row[k].parse::<f64>().map_err(|_| bad(col));
            let accepted = match &row[3] {
                "1" => true,
                "0" => false,
                _ => return Err(bad("accepted")),
            };
            let q = (0..dim)
                .map(|j| float(FIXED_COLUMNS.len() + j, &cols[FIXED_COLUMNS.len() + j]))
                .collect::<Result<Vec<_>>>()?;
            records.push(TraceRecord {
                step: int(0)?,
                branch: int(1)?,
                accept_prob: float(2, "accept_prob")?,
                accepted,
                sq_jump: float(4, "sq_jump")?,
                q,
            });
        }
        if records.is_empty() {
            return Err(HarnessError::schema(name, "trace has no records"));
        }
        Ok(Self { header, dim, records })
    }

    pub fn states(&self) -> Vec<DVector<f64>> {
        self.records.iter().map(|r| DVector::from_column_slice(&r.q)).collect()
    }
}
