//! Parameter sweeps: one generated stream and one engine per (cell, seed).

use rayon::prelude::*;
use serde::Serialize;

use super::generate::{generate, StreamModel};
use super::run::{run, sig6, AuditPolicy, RunOptions, RunReport};
use super::stream::StreamHeader;
use super::WorkloadError;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub n: usize,
    pub delta: u32,
    pub t: usize,
    pub model: StreamModel,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    pub n: usize,
    pub delta: u32,
    pub t: usize,
    pub model: String,
    pub runs: usize,
    pub amortized_mean: f64,
    pub amortized_min: f64,
    pub amortized_max: f64,
    pub preprocess_mean: f64,
    pub violations: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BenchTable {
    pub rows: Vec<RunReport>,
    pub cells: Vec<CellSummary>,
}

impl BenchTable {
    pub fn is_clean(&self) -> bool {
        self.rows.iter().all(RunReport::is_clean)
    }
}

/// Runs every (cell, seed) pair in parallel; rows come back in sweep order.
pub fn bench(cells: &[SweepCell], audit: AuditPolicy) -> Result<BenchTable, WorkloadError> {
    let jobs: Vec<(usize, u64)> =
        cells.iter().enumerate().flat_map(|(i, c)| c.seeds.iter().map(move |&s| (i, s))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let c = &cells[i];
            let events = generate(c.model, c.n, c.delta, c.t, seed)?;
            let opts = RunOptions { audit, model: Some(c.model.to_string()), ..RunOptions::new(seed) };
            run(&StreamHeader { n: c.n, delta: c.delta }, &events, &opts)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut summaries = Vec::with_capacity(cells.len());
    let mut at = 0;
    for c in cells {
        let group = &rows[at..at + c.seeds.len()];
        at += c.seeds.len();
        let k = group.len().max(1) as f64;
        let am = group.iter().map(|r| r.amortized);
        summaries.push(CellSummary {
            n: c.n,
            delta: c.delta,
            t: c.t,
            model: c.model.to_string(),
            runs: group.len(),
            amortized_mean: sig6(am.clone().sum::<f64>() / k),
            amortized_min: if group.is_empty() { 0.0 } else { am.clone().fold(f64::INFINITY, f64::min) },
            amortized_max: am.fold(0.0, f64::max),
            preprocess_mean: sig6(group.iter().map(|r| r.work.preprocess as f64).sum::<f64>() / k),
            violations: group.iter().map(|r| r.violations.count()).sum(),
        });
    }
    Ok(BenchTable { rows, cells: summaries })
}
