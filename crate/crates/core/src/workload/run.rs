//! Drives an engine (and optionally the baseline) over a stream.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::stream::StreamHeader;
use super::WorkloadError;
use crate::baseline::{check_proper, NaiveState};
use crate::engine::{Engine, EngineConfig, EngineTotals};
use crate::instrument::{Category, LevelRow, WorkMeter};
use crate::types::UpdateEvent;

/// At most this many violation messages are kept verbatim in a report.
const MAX_DETAILS: usize = 32;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AuditPolicy {
    Off,
    End,
    /// After every `k`-th event and at the end.
    Every(u64),
}

impl fmt::Display for AuditPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditPolicy::Off => f.write_str("off"),
            AuditPolicy::End => f.write_str("end"),
            AuditPolicy::Every(k) => write!(f, "every:{k}"),
        }
    }
}

impl FromStr for AuditPolicy {
    type Err = WorkloadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(AuditPolicy::Off),
            "end" => Ok(AuditPolicy::End),
            _ => s
                .strip_prefix("every:")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k > 0)
                .map(AuditPolicy::Every)
                .ok_or_else(|| WorkloadError::InvalidConfig(format!("unknown audit policy `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    pub audit: AuditPolicy,
    /// Replay the stream on the naive baseline as well.
    pub baseline: bool,
    /// Skip events that fail validation instead of aborting.
    pub skip_invalid: bool,
    /// Echoed into the report; not interpreted.
    pub model: Option<String>,
}

impl RunOptions {
    pub fn new(seed: u64) -> Self {
        RunOptions { seed, audit: AuditPolicy::End, baseline: false, skip_invalid: false, model: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub delta: u32,
    pub seed: u64,
    pub top_level: i32,
    pub model: Option<String>,
    pub audit: String,
    pub baseline: bool,
    pub updates: u64,
}

/// Work units by category, in a fixed order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WorkUnits {
    pub preprocess: u64,
    pub deletion: u64,
    pub conflictless_insert: u64,
    pub conflicting_insert: u64,
    pub det_color: u64,
    pub rand_color: u64,
    pub set_level: u64,
    pub palette_scan: u64,
    pub total: u64,
}

impl WorkUnits {
    fn from_meter(m: &WorkMeter) -> Self {
        WorkUnits {
            preprocess: m.get(Category::Preprocess),
            deletion: m.get(Category::Deletion),
            conflictless_insert: m.get(Category::ConflictlessInsert),
            conflicting_insert: m.get(Category::ConflictingInsert),
            det_color: m.get(Category::DetColor),
            rand_color: m.get(Category::RandColor),
            set_level: m.get(Category::SetLevel),
            palette_scan: m.get(Category::PaletteScan),
            total: m.total(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    #[serde(flatten)]
    pub row: LevelRow,
    pub completed: u64,
    pub short_fraction: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Violations {
    pub invariant2: u64,
    pub palette_bound: u64,
    pub call_bound: u64,
    /// Monochromatic engine edges summed over all audit points.
    pub improper: u64,
    /// Structural discrepancies summed over all audit points.
    pub audit: u64,
    pub baseline_improper: u64,
    pub details: Vec<String>,
}

impl Violations {
    pub fn count(&self) -> u64 {
        self.invariant2 + self.palette_bound + self.call_bound + self.improper + self.audit + self.baseline_improper
    }

    fn note(&mut self, msg: impl FnOnce() -> String) {
        if self.details.len() < MAX_DETAILS {
            self.details.push(msg());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaselineSummary {
    pub recolors: u64,
    pub work_units: u64,
    pub work_per_update: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub totals: EngineTotals,
    pub skipped: u64,
    pub work: WorkUnits,
    /// `(total − preprocess) / updates`.
    pub amortized: f64,
    pub max_level: i32,
    pub levels: Vec<LevelReport>,
    pub audits: u64,
    pub violations: Violations,
    pub warnings: Vec<String>,
    pub baseline: Option<BaselineSummary>,
}

impl RunReport {
    pub fn is_clean(&self) -> bool {
        self.violations.count() == 0
    }
}

/// Rounds to 6 significant digits.
pub(crate) fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

struct Auditor {
    violations: Violations,
    audits: u64,
}

impl Auditor {
    fn check(&mut self, engine: &Engine, base: Option<&NaiveState>, at: usize) {
        self.audits += 1;
        let bad = check_proper(&engine.coloring(), engine.graph().edges());
        self.violations.improper += bad.len() as u64;
        for (u, v) in bad.iter().take(4) {
            self.violations.note(|| format!("after {at} events: edge ({u}, {v}) is monochromatic"));
        }
        let disc = engine.audit_structures();
        self.violations.audit += disc.len() as u64;
        for d in disc.iter().take(4) {
            self.violations.note(|| format!("after {at} events: {d}"));
        }
        if let Some(b) = base {
            let bad = check_proper(b.colors(), b.edges());
            self.violations.baseline_improper += bad.len() as u64;
            for (u, v) in bad.iter().take(4) {
                self.violations.note(|| format!("after {at} events: baseline edge ({u}, {v}) is monochromatic"));
            }
        }
    }
}

pub fn run(header: &StreamHeader, events: &[UpdateEvent], opts: &RunOptions) -> Result<RunReport, WorkloadError> {
    let config = EngineConfig::new(header.n, header.delta, opts.seed);
    let mut engine = Engine::preprocess(config).map_err(|e| WorkloadError::InvalidConfig(e.to_string()))?;
    let mut base = opts.baseline.then(|| NaiveState::new(header.n, header.delta));
    let mut auditor = Auditor { violations: Violations::default(), audits: 0 };
    let mut warnings = Vec::new();
    let mut skipped = 0u64;

    for (index, &e) in events.iter().enumerate() {
        if let Err(source) = engine.validate(&e) {
            if !opts.skip_invalid {
                return Err(WorkloadError::InvalidEvent { index, source });
            }
            skipped += 1;
            if warnings.len() < MAX_DETAILS {
                warnings.push(format!("event {index} skipped: {source}"));
            }
            continue;
        }
        engine.apply_update(e).expect("validated event applies");
        if let Some(b) = base.as_mut() {
            b.naive_apply_update(e).expect("engine and baseline share edge sets");
        }
        if let AuditPolicy::Every(k) = opts.audit {
            if (index as u64 + 1).is_multiple_of(k) {
                auditor.check(&engine, base.as_ref(), index + 1);
            }
        }
    }
    let at_end = match opts.audit {
        AuditPolicy::Off => false,
        AuditPolicy::End => true,
        AuditPolicy::Every(k) => !(events.len() as u64).is_multiple_of(k) || events.is_empty(),
    };
    if at_end {
        auditor.check(&engine, base.as_ref(), events.len());
    }

    let inst = engine.instrumentation();
    let mut violations = auditor.violations;
    violations.invariant2 = inst.invariant_violations().len() as u64;
    for p in inst.invariant_violations().iter().take(4) {
        violations.note(|| {
            format!("{} at level {}: palette {} with {} down-neighbors", p.vertex, p.level, p.palette_size, p.down_count)
        });
    }
    violations.palette_bound = inst.palette_bound_violations().len() as u64;
    for p in inst.palette_bound_violations().iter().take(4) {
        violations.note(|| format!("{}: palette {} below bound for {} down-neighbors", p.vertex, p.palette_size, p.down_count));
    }
    let (calls, call_count) = inst.meter.assert_call_bounds();
    violations.call_bound = call_count;
    for c in calls.iter().take(4) {
        violations.note(|| format!("{:?} used {} units, bound {}", c.kind, c.units, c.bound));
    }

    let stats = inst.finalize_epochs();
    let levels = stats
        .rows
        .iter()
        .map(|row| LevelReport { completed: row.completed(), short_fraction: sig6(row.short_fraction()), row: row.clone() })
        .collect();
    let work = WorkUnits::from_meter(&inst.meter);
    let updates = engine.totals().updates;
    let amortized = match updates {
        0 => 0.0,
        t => sig6((work.total - work.preprocess) as f64 / t as f64),
    };
    let baseline = base.map(|b| BaselineSummary {
        recolors: b.recolors(),
        work_units: b.naive_work_units(),
        work_per_update: if updates == 0 { 0.0 } else { sig6(b.naive_work_units() as f64 / updates as f64) },
    });

    Ok(RunReport {
        config: RunConfig {
            n: header.n,
            delta: header.delta,
            seed: opts.seed,
            top_level: config.top_level().0,
            model: opts.model.clone(),
            audit: opts.audit.to_string(),
            baseline: opts.baseline,
            updates: events.len() as u64,
        },
        totals: engine.totals().clone(),
        skipped,
        work,
        amortized,
        max_level: stats.max_level().0,
        levels,
        audits: auditor.audits,
        violations,
        warnings,
        baseline,
    })
}
