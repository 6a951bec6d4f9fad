//! JSON and CSV report serialization.
//!
//! CSV rows start with the fixed [`CSV_COLUMNS`], followed by one group of
//! [`CSV_LEVEL_FIELDS`] per level, named `lvl<ℓ>_<field>` for ℓ from −1 up to
//! the highest top level in the table (`lvl-1_epochs`, `lvl0_epochs`, …).
//! Cells for levels a run does not have are left empty.

use std::fmt;
use std::str::FromStr;

use super::bench::BenchTable;
use super::run::RunReport;
use super::WorkloadError;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = WorkloadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(WorkloadError::InvalidConfig(format!("unknown report format `{s}`"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

pub const CSV_COLUMNS: [&str; 32] = [
    "n",
    "delta",
    "seed",
    "model",
    "audit",
    "updates",
    "skipped",
    "top_level",
    "max_level",
    "insertions",
    "deletions",
    "conflicts",
    "recolors",
    "det_colors",
    "rand_colors",
    "longest_chain",
    "preprocess_units",
    "deletion_units",
    "conflictless_insert_units",
    "conflicting_insert_units",
    "det_color_units",
    "rand_color_units",
    "set_level_units",
    "palette_scan_units",
    "total_units",
    "amortized",
    "audits",
    "invariant2_violations",
    "palette_bound_violations",
    "call_bound_violations",
    "improper_edges",
    "audit_discrepancies",
];

pub const CSV_LEVEL_FIELDS: [&str; 8] =
    ["epochs", "original", "induced", "final", "completed", "short_fraction", "incident_insertions", "cost"];

fn header(levels: usize) -> Vec<String> {
    let mut h: Vec<String> = CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
    for slot in 0..levels {
        let l = slot as i64 - 1;
        h.extend(CSV_LEVEL_FIELDS.iter().map(|f| format!("lvl{l}_{f}")));
    }
    h
}

fn row(r: &RunReport, levels: usize) -> Vec<String> {
    let c = &r.config;
    let t = &r.totals;
    let w = &r.work;
    let v = &r.violations;
    let mut out = vec![
        c.n.to_string(),
        c.delta.to_string(),
        c.seed.to_string(),
        c.model.clone().unwrap_or_default(),
        c.audit.clone(),
        c.updates.to_string(),
        r.skipped.to_string(),
        c.top_level.to_string(),
        r.max_level.to_string(),
        t.insertions.to_string(),
        t.deletions.to_string(),
        t.conflicts.to_string(),
        t.recolors.to_string(),
        t.det_colors.to_string(),
        t.rand_colors.to_string(),
        t.longest_chain.to_string(),
        w.preprocess.to_string(),
        w.deletion.to_string(),
        w.conflictless_insert.to_string(),
        w.conflicting_insert.to_string(),
        w.det_color.to_string(),
        w.rand_color.to_string(),
        w.set_level.to_string(),
        w.palette_scan.to_string(),
        w.total.to_string(),
        r.amortized.to_string(),
        r.audits.to_string(),
        v.invariant2.to_string(),
        v.palette_bound.to_string(),
        v.call_bound.to_string(),
        v.improper.to_string(),
        v.audit.to_string(),
    ];
    debug_assert_eq!(out.len(), CSV_COLUMNS.len());
    for slot in 0..levels {
        match r.levels.get(slot) {
            Some(l) => out.extend([
                l.row.epochs.to_string(),
                l.row.original.to_string(),
                l.row.induced.to_string(),
                l.row.final_.to_string(),
                l.completed.to_string(),
                l.short_fraction.to_string(),
                l.row.incident_insertions.to_string(),
                l.row.cost.to_string(),
            ]),
            None => out.extend(std::iter::repeat_n(String::new(), CSV_LEVEL_FIELDS.len())),
        }
    }
    out
}

fn csv_text(reports: &[RunReport]) -> String {
    let levels = reports.iter().map(|r| r.levels.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(levels)).expect("write to memory");
    for r in reports {
        w.write_record(row(r, levels)).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

fn json_text<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn emit_report(report: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => json_text(report),
        ReportFormat::Csv => csv_text(std::slice::from_ref(report)),
    }
}

/// A bench table: JSON carries rows and per-cell summaries; CSV carries rows only.
pub fn emit_table(table: &BenchTable, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => json_text(table),
        ReportFormat::Csv => csv_text(&table.rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::generate::{generate, StreamModel};
    use crate::workload::run::{run, RunOptions};
    use crate::workload::stream::StreamHeader;

    fn sample() -> RunReport {
        let h = StreamHeader { n: 120, delta: 6 };
        let ev = generate(StreamModel::Churn { p: 0.6 }, 120, 6, 3000, 2).unwrap();
        run(&h, &ev, &RunOptions::new(2)).unwrap()
    }

    #[test]
    fn json_parses_back() {
        let r = sample();
        let text = emit_report(&r, ReportFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["config"]["n"], 120);
        assert_eq!(v["totals"]["updates"], 3000);
        assert_eq!(v["levels"].as_array().unwrap().len(), r.levels.len());
        assert!(v["levels"][0].get("final").is_some());
    }

    #[test]
    fn csv_header_matches_schema() {
        let r = sample();
        let text = emit_report(&r, ReportFormat::Csv);
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let hdr: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(&hdr[..CSV_COLUMNS.len()], &CSV_COLUMNS.map(String::from)[..]);
        assert_eq!(hdr[CSV_COLUMNS.len()], "lvl-1_epochs");
        assert_eq!(hdr.len(), CSV_COLUMNS.len() + r.levels.len() * CSV_LEVEL_FIELDS.len());
        let rows: Vec<_> = rd.records().collect::<Result<_, _>>().unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].len(), hdr.len());
    }

    #[test]
    fn emission_is_deterministic() {
        let (a, b) = (sample(), sample());
        assert_eq!(emit_report(&a, ReportFormat::Json), emit_report(&b, ReportFormat::Json));
        assert_eq!(emit_report(&a, ReportFormat::Csv), emit_report(&b, ReportFormat::Csv));
    }
}
