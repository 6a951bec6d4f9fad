//! Work accounting, per-call cost bounds, epoch tracking and the
//! recolor-time palette checks.
//!
//! An epoch of `v` is the interval between two consecutive recolor calls on
//! `v`. Every vertex starts with one open epoch at level −1; each recolor
//! closes the open epoch as *original* (ended by a conflicting insertion on
//! `v`) or *induced* (ended because an up-neighbor took `v`'s color) and opens
//! the next one. Whatever is still open at the end of a run is *final*.

use serde::Serialize;

use crate::types::{pow3, Color, Level, VertexId};

/// Default slope of the per-call bound `a·3^(ℓ+2) + b`.
pub const BOUND_SLOPE: u64 = 20;
/// Default intercept of the per-call bound `a·3^(ℓ+2) + b`.
pub const BOUND_INTERCEPT: u64 = 50;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Preprocess,
    Deletion,
    ConflictlessInsert,
    ConflictingInsert,
    DetColor,
    RandColor,
    SetLevel,
    PaletteScan,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::Preprocess,
        Category::Deletion,
        Category::ConflictlessInsert,
        Category::ConflictingInsert,
        Category::DetColor,
        Category::RandColor,
        Category::SetLevel,
        Category::PaletteScan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Preprocess => "preprocess",
            Category::Deletion => "deletion",
            Category::ConflictlessInsert => "conflictless_insert",
            Category::ConflictingInsert => "conflicting_insert",
            Category::DetColor => "det_color",
            Category::RandColor => "rand_color",
            Category::SetLevel => "set_level",
            Category::PaletteScan => "palette_scan",
        }
    }
}

/// What a bounded call was, with the level its bound is evaluated at.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "call", rename_all = "snake_case")]
pub enum CallKind {
    /// Deletions and the structural part of every insertion.
    Constant,
    /// Bound evaluated at the level the vertex had when the call started.
    DetColor { level: i32 },
    /// Bound evaluated at the level the vertex was raised to.
    RandColor { level: i32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CallViolation {
    #[serde(flatten)]
    pub kind: CallKind,
    pub units: u64,
    pub bound: u64,
}

/// Categorized work counters plus a running tally for the call in progress.
#[derive(Clone, Debug)]
pub struct WorkMeter {
    counters: [u64; 8],
    tally: u64,
    slope: u64,
    intercept: u64,
    calls: u64,
    violations: Vec<CallViolation>,
    violation_count: u64,
}

const KEPT_VIOLATIONS: usize = 64;

impl Default for WorkMeter {
    fn default() -> Self {
        Self::with_bounds(BOUND_SLOPE, BOUND_INTERCEPT)
    }
}

impl WorkMeter {
    pub fn with_bounds(slope: u64, intercept: u64) -> Self {
        WorkMeter {
            counters: [0; 8],
            tally: 0,
            slope,
            intercept,
            calls: 0,
            violations: Vec::new(),
            violation_count: 0,
        }
    }

    /// Adds `units` to `category` and to the open call's tally.
    #[inline]
    pub fn charge(&mut self, category: Category, units: u64) {
        self.counters[category as usize] += units;
        self.tally += units;
    }

    pub fn begin_call(&mut self) {
        self.tally = 0;
    }

    /// Closes the open call and checks its tally against the bound for `kind`.
    pub fn end_call(&mut self, kind: CallKind) -> u64 {
        let units = std::mem::take(&mut self.tally);
        let bound = self.bound(kind);
        self.calls += 1;
        if units > bound {
            self.violation_count += 1;
            if self.violations.len() < KEPT_VIOLATIONS {
                self.violations.push(CallViolation { kind, units, bound });
            }
        }
        units
    }

    pub fn bound(&self, kind: CallKind) -> u64 {
        match kind {
            CallKind::Constant => self.intercept,
            CallKind::DetColor { level } | CallKind::RandColor { level } => {
                self.slope.saturating_mul(pow3(level + 2)).saturating_add(self.intercept)
            }
        }
    }

    pub fn get(&self, category: Category) -> u64 {
        self.counters[category as usize]
    }

    pub fn total(&self) -> u64 {
        self.counters.iter().sum()
    }

    /// Total minus preprocessing.
    pub fn update_work(&self) -> u64 {
        self.total() - self.get(Category::Preprocess)
    }

    pub fn calls_checked(&self) -> u64 {
        self.calls
    }

    /// Calls that exceeded their bound: the first few in full, plus the total count.
    pub fn assert_call_bounds(&self) -> (&[CallViolation], u64) {
        (&self.violations, self.violation_count)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Original,
    Induced,
    Final,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RecolorCause {
    ConflictingInsertion,
    InducedByUpNeighbor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpochRecord {
    pub vertex: VertexId,
    pub level: Level,
    pub color: Color,
    pub palette_size: u32,
    pub start_stamp: u64,
    pub end_stamp: Option<u64>,
    pub dur: u64,
    pub cost: u64,
    pub termination: Option<Termination>,
}

/// A recolor that landed a vertex at level `ℓ ≥ 0` with too small a palette
/// or too few down-neighbors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaletteViolation {
    pub vertex: VertexId,
    pub level: Level,
    pub palette_size: u32,
    pub down_count: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LevelRow {
    pub level: i32,
    pub epochs: u64,
    pub original: u64,
    pub induced: u64,
    #[serde(rename = "final")]
    pub final_: u64,
    /// Epochs (any class) with `dur < 3^ℓ/(32e)`.
    pub short: u64,
    /// Completed (original or induced) epochs with `dur < 3^ℓ/(32e)`.
    pub short_completed: u64,
    pub incident_insertions: u64,
    pub cost: u64,
}

impl LevelRow {
    pub fn completed(&self) -> u64 {
        self.original + self.induced
    }

    /// Fraction of completed epochs that are short; zero when none completed.
    pub fn short_fraction(&self) -> f64 {
        match self.completed() {
            0 => 0.0,
            c => self.short_completed as f64 / c as f64,
        }
    }
}

/// Per-level epoch aggregates, indexed from level −1.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct LevelStats {
    pub rows: Vec<LevelRow>,
}

impl LevelStats {
    pub fn level(&self, level: Level) -> Option<&LevelRow> {
        self.rows.get(level.slot())
    }

    pub fn total_epochs(&self) -> u64 {
        self.rows.iter().map(|r| r.epochs).sum()
    }

    /// Highest level that ever held an epoch.
    pub fn max_level(&self) -> Level {
        self.rows
            .iter()
            .rposition(|r| r.epochs > 0)
            .map_or(Level::BOTTOM, Level::from_slot)
    }
}

/// `dur < 3^ℓ / (32e)`.
pub fn is_short(level: Level, dur: u64) -> bool {
    let scale = 3f64.powi(level.0);
    (dur as f64) < scale / (32.0 * std::f64::consts::E)
}

/// Owns the meter and all epoch bookkeeping of one engine.
#[derive(Clone, Debug)]
pub struct Instrumentation {
    pub meter: WorkMeter,
    open: Vec<EpochRecord>,
    closed: Vec<LevelRow>,
    capture: Option<Vec<EpochRecord>>,
    invariant_violations: Vec<PaletteViolation>,
    palette_bound_violations: Vec<PaletteViolation>,
}

impl Instrumentation {
    pub fn new(n: usize, top: Level) -> Self {
        let open = (0..n)
            .map(|i| EpochRecord {
                vertex: VertexId(i as u32),
                level: Level::BOTTOM,
                color: Color(1),
                palette_size: 1,
                start_stamp: 0,
                end_stamp: None,
                dur: 0,
                cost: 0,
                termination: None,
            })
            .collect();
        let closed = (Level::BOTTOM.0..=top.0)
            .map(|level| LevelRow { level, ..LevelRow::default() })
            .collect();
        Instrumentation {
            meter: WorkMeter::default(),
            open,
            closed,
            capture: None,
            invariant_violations: Vec::new(),
            palette_bound_violations: Vec::new(),
        }
    }

    /// Keep every completed epoch record. Memory grows with the recolor count.
    pub fn capture_epochs(&mut self) {
        self.capture.get_or_insert_with(Vec::new);
    }

    pub fn captured(&self) -> Option<&[EpochRecord]> {
        self.capture.as_deref()
    }

    pub fn open_epoch(&self, v: VertexId) -> &EpochRecord {
        &self.open[v.index()]
    }

    pub fn on_incident_insertion(&mut self, u: VertexId, v: VertexId) {
        for x in [u, v] {
            let epoch = &mut self.open[x.index()];
            epoch.dur += 1;
            self.closed[epoch.level.slot()].incident_insertions += 1;
        }
    }

    /// Closes `v`'s epoch and opens the one started by the recolor that just
    /// finished. For levels `ℓ ≥ 0` checks `|palette| ≥ 3^(ℓ+1)/2 + 1` and
    /// `down_count ≥ 3^(ℓ+1)`.
    #[allow(clippy::too_many_arguments)]
    pub fn on_recolor(
        &mut self,
        v: VertexId,
        new_level: Level,
        new_color: Color,
        palette_size: u32,
        down_count: u32,
        cause: RecolorCause,
        cost: u64,
        stamp: u64,
    ) {
        let termination = match cause {
            RecolorCause::ConflictingInsertion => Termination::Original,
            RecolorCause::InducedByUpNeighbor => Termination::Induced,
        };
        let next = EpochRecord {
            vertex: v,
            level: new_level,
            color: new_color,
            palette_size,
            start_stamp: stamp,
            end_stamp: None,
            dur: 0,
            cost,
            termination: None,
        };
        let mut done = std::mem::replace(&mut self.open[v.index()], next);
        done.end_stamp = Some(stamp);
        done.termination = Some(termination);
        self.tally(&done);
        if let Some(records) = self.capture.as_mut() {
            records.push(done);
        }

        if new_level.0 >= 0 {
            let need = pow3(new_level.0 + 1);
            // |palette| ≥ need/2 + 1, kept in integers
            if 2 * (palette_size as u64) < need + 2 || (down_count as u64) < need {
                self.invariant_violations.push(PaletteViolation {
                    vertex: v,
                    level: new_level,
                    palette_size,
                    down_count,
                });
            }
        }
    }

    /// Records a palette smaller than `down_count/2 + 1`.
    pub fn on_palette(&mut self, v: VertexId, level: Level, palette_size: u32, down_count: u32) {
        if 2 * palette_size < down_count + 2 {
            self.palette_bound_violations.push(PaletteViolation { vertex: v, level, palette_size, down_count });
        }
    }

    fn tally(&mut self, epoch: &EpochRecord) {
        Self::add(&mut self.closed[epoch.level.slot()], epoch);
    }

    fn add(row: &mut LevelRow, epoch: &EpochRecord) {
        row.epochs += 1;
        row.cost += epoch.cost;
        let short = is_short(epoch.level, epoch.dur);
        row.short += short as u64;
        match epoch.termination.unwrap_or(Termination::Final) {
            Termination::Original => row.original += 1,
            Termination::Induced => row.induced += 1,
            Termination::Final => row.final_ += 1,
        }
        if short && epoch.termination.is_some() {
            row.short_completed += 1;
        }
    }

    /// Per-level aggregates with every still-open epoch counted as final.
    pub fn finalize_epochs(&self) -> LevelStats {
        let mut rows = self.closed.clone();
        for epoch in &self.open {
            Self::add(&mut rows[epoch.level.slot()], epoch);
        }
        LevelStats { rows }
    }

    /// Open epochs, each marked final.
    pub fn final_epochs(&self) -> impl Iterator<Item = EpochRecord> + '_ {
        self.open.iter().map(|e| EpochRecord { termination: Some(Termination::Final), ..e.clone() })
    }

    pub fn invariant_violations(&self) -> &[PaletteViolation] {
        &self.invariant_violations
    }

    pub fn palette_bound_violations(&self) -> &[PaletteViolation] {
        &self.palette_bound_violations
    }
}
