//! The dynamic (Δ+1)-coloring engine.
//!
//! Deletions and conflict-less insertions only touch adjacency views. A
//! conflicting insertion recolors the endpoint that was recolored last. A
//! vertex `x` at level `ℓ` with fewer than `3^(ℓ+2)` neighbors at levels `≤ ℓ`
//! takes the first blank color from its availability list and drops to level
//! −1. Otherwise it rises to the lowest level `ℓ' > ℓ` where that count falls
//! below `3^(ℓ'+2)` and samples uniformly among its blank and unique colors;
//! a unique color hands the conflict to the single down-neighbor holding it.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Discrepancy, LevelGraph};
use crate::instrument::{CallKind, Category, Instrumentation, RecolorCause};
use crate::rng::RandomSource;
use crate::types::{pow3, top_level, Color, Level, UpdateEvent, UpdateKind, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(u32, u32),
    #[error("edge ({0}, {1}) not present")]
    MissingEdge(u32, u32),
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(u32, u32),
    #[error("inserting ({0}, {1}) would exceed the degree cap")]
    DegreeCapExceeded(u32, u32),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EngineConfig {
    pub n: usize,
    pub delta: u32,
    pub seed: u64,
}

impl EngineConfig {
    pub fn new(n: usize, delta: u32, seed: u64) -> Self {
        EngineConfig { n, delta, seed }
    }

    pub fn top_level(&self) -> Level {
        top_level(self.n)
    }
}

/// Blank-or-unique colors of a vertex, in availability order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PaletteSample {
    pub colors: Vec<Color>,
    /// The down-neighbor holding each color, for unique colors only.
    pub occupant: Vec<Option<VertexId>>,
}

impl PaletteSample {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RecolorOutcome {
    Done,
    Continue(VertexId),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EngineTotals {
    pub updates: u64,
    pub insertions: u64,
    pub deletions: u64,
    pub conflicts: u64,
    pub recolors: u64,
    pub det_colors: u64,
    pub rand_colors: u64,
    pub longest_chain: u64,
}

#[derive(Clone, Debug)]
pub struct Engine {
    config: EngineConfig,
    graph: LevelGraph,
    rng: RandomSource,
    clock: u64,
    inst: Instrumentation,
    totals: EngineTotals,
    holders: Vec<VertexId>,
}

impl Engine {
    /// Empty graph, every vertex at level −1 with color 1.
    pub fn preprocess(config: EngineConfig) -> Result<Engine, EngineError> {
        if config.n == 0 {
            return Err(EngineError::InvalidConfig("n must be at least 1".into()));
        }
        if config.n > u32::MAX as usize {
            return Err(EngineError::InvalidConfig("n must fit in 32 bits".into()));
        }
        if config.delta == 0 {
            return Err(EngineError::InvalidConfig("delta must be at least 1".into()));
        }
        let graph = LevelGraph::new(config.n, config.delta);
        let mut inst = Instrumentation::new(config.n, graph.top_level());
        let levels = graph.top_level().slot() as u64 + 1;
        inst.meter.charge(Category::Preprocess, config.n as u64 * (config.delta as u64 + 1 + levels));
        Ok(Engine {
            config,
            graph,
            rng: RandomSource::new(config.seed),
            clock: 0,
            inst,
            totals: EngineTotals::default(),
            holders: Vec::new(),
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn graph(&self) -> &LevelGraph {
        &self.graph
    }

    pub fn instrumentation(&self) -> &Instrumentation {
        &self.inst
    }

    pub fn instrumentation_mut(&mut self) -> &mut Instrumentation {
        &mut self.inst
    }

    pub fn totals(&self) -> &EngineTotals {
        &self.totals
    }

    pub fn color(&self, v: VertexId) -> Color {
        self.graph.color(v)
    }

    pub fn level(&self, v: VertexId) -> Level {
        self.graph.level(v)
    }

    pub fn coloring(&self) -> Vec<Color> {
        (0..self.config.n as u32).map(|v| self.graph.color(VertexId(v))).collect()
    }

    pub fn levels(&self) -> Vec<Level> {
        (0..self.config.n as u32).map(|v| self.graph.level(VertexId(v))).collect()
    }

    pub fn audit_structures(&self) -> Vec<Discrepancy> {
        self.graph.audit_structures()
    }

    /// Checks `e` against the current graph without changing anything.
    pub fn validate(&self, e: &UpdateEvent) -> Result<(), EngineError> {
        let (u, v) = (e.u, e.v);
        let n = self.config.n;
        if u == v || u.index() >= n || v.index() >= n {
            return Err(EngineError::InvalidEdge(u.0, v.0));
        }
        let present = self.graph.has_edge(u, v);
        match e.kind {
            UpdateKind::Insert if present => Err(EngineError::DuplicateEdge(u.0, v.0)),
            UpdateKind::Insert => {
                let cap = self.config.delta as usize;
                if self.graph.vertex(u).degree() >= cap || self.graph.vertex(v).degree() >= cap {
                    Err(EngineError::DegreeCapExceeded(u.0, v.0))
                } else {
                    Ok(())
                }
            }
            UpdateKind::Delete if !present => Err(EngineError::MissingEdge(u.0, v.0)),
            UpdateKind::Delete => Ok(()),
        }
    }

    /// Applies one update. Rejected updates leave the engine untouched.
    pub fn apply_update(&mut self, e: UpdateEvent) -> Result<(), EngineError> {
        self.validate(&e)?;
        self.totals.updates += 1;
        match e.kind {
            UpdateKind::Insert => self.handle_insertion(e.u, e.v),
            UpdateKind::Delete => self.handle_deletion(e.u, e.v),
        }
        Ok(())
    }

    fn handle_deletion(&mut self, u: VertexId, v: VertexId) {
        self.totals.deletions += 1;
        self.inst.meter.begin_call();
        let units = self.graph.detach_edge_views(u, v) + 1;
        self.inst.meter.charge(Category::Deletion, units);
        self.inst.meter.end_call(CallKind::Constant);
    }

    fn handle_insertion(&mut self, u: VertexId, v: VertexId) {
        self.totals.insertions += 1;
        self.inst.meter.begin_call();
        let units = self.graph.attach_edge_views(u, v) + 1;
        self.inst.on_incident_insertion(u, v);
        let conflict = self.graph.color(u) == self.graph.color(v);
        let category = if conflict { Category::ConflictingInsert } else { Category::ConflictlessInsert };
        self.inst.meter.charge(category, units);
        self.inst.meter.end_call(CallKind::Constant);
        if !conflict {
            return;
        }
        self.totals.conflicts += 1;
        let mut x = self.select_conflict_endpoint(u, v);
        let mut cause = RecolorCause::ConflictingInsertion;
        let mut chain = 0;
        loop {
            chain += 1;
            match self.recolor(x, cause) {
                RecolorOutcome::Done => break,
                RecolorOutcome::Continue(y) => {
                    x = y;
                    cause = RecolorCause::InducedByUpNeighbor;
                }
            }
        }
        self.totals.longest_chain = self.totals.longest_chain.max(chain);
    }

    /// The endpoint with the later recolor stamp; the first-listed one on a tie.
    pub fn select_conflict_endpoint(&self, u: VertexId, v: VertexId) -> VertexId {
        let su = self.graph.vertex(u).last_recolor_stamp();
        let sv = self.graph.vertex(v).last_recolor_stamp();
        if sv > su {
            v
        } else {
            u
        }
    }

    fn recolor(&mut self, x: VertexId, cause: RecolorCause) -> RecolorOutcome {
        self.inst.meter.begin_call();
        let level = self.graph.level(x);
        let phi = self.graph.phi(x, Level(level.0 + 1)) as u64;
        self.clock += 1;
        let stamp = self.clock;
        self.graph.set_stamp(x, stamp);
        self.totals.recolors += 1;

        let (outcome, kind, palette_size) = if phi < pow3(level.0 + 2) {
            self.inst.meter.charge(Category::DetColor, 2);
            self.totals.det_colors += 1;
            self.det_color(x);
            (RecolorOutcome::Done, CallKind::DetColor { level: level.0 }, 1)
        } else {
            self.inst.meter.charge(Category::RandColor, 2);
            self.totals.rand_colors += 1;
            let (outcome, size) = self.rand_color(x);
            (outcome, CallKind::RandColor { level: self.graph.level(x).0 }, size)
        };
        let cost = self.inst.meter.end_call(kind);
        let rec = self.graph.vertex(x);
        let (new_level, new_color, down) = (rec.level(), rec.color(), rec.down_count() as u32);
        self.inst.on_recolor(x, new_level, new_color, palette_size, down, cause, cost, stamp);
        outcome
    }

    fn det_color(&mut self, x: VertexId) {
        let down = self.graph.vertex(x).down_count() as u64;
        self.graph.down_occupancy_scan(x);
        let occupancy = self.graph.occupancy();
        let mut scanned = 0u64;
        let mut blank = None;
        for c in self.graph.books().availability(x) {
            scanned += 1;
            if occupancy.count(c) == 0 {
                blank = Some(c);
                break;
            }
        }
        let c = blank.unwrap_or_else(|| panic!("structural corruption: no blank color for {x}"));
        self.inst.meter.charge(Category::DetColor, down + scanned);
        self.set_color(x, c, Category::DetColor);
        let units = self.graph.move_vertex_level(x, Level::BOTTOM);
        self.inst.meter.charge(Category::SetLevel, units);
    }

    /// The lowest level above `x`'s current one where fewer than `3^(ℓ'+2)`
    /// neighbors sit at or below `ℓ'`, and the number of levels tested.
    pub fn find_target_level(&self, x: VertexId) -> (Level, u64) {
        let rec = self.graph.vertex(x);
        let mut below = rec.down_count() as u64 + rec.up_bucket(rec.level()).len() as u64;
        let mut tested = 0;
        for level in rec.level().0 + 1..=self.graph.top_level().0 {
            tested += 1;
            below += rec.up_bucket(Level(level)).len() as u64;
            if below < pow3(level + 2) {
                return (Level(level), tested);
            }
        }
        panic!("structural corruption: no admissible level for {x} below the top level");
    }

    /// Blank and unique colors among the first `down_count + 1` entries of
    /// `x`'s availability list.
    pub fn compute_palette(&mut self, x: VertexId) -> PaletteSample {
        let down = self.graph.vertex(x).down_count();
        self.graph.down_occupancy_scan(x);
        let occupancy = self.graph.occupancy();
        let mut palette = PaletteSample::default();
        let mut scanned = 0u64;
        for c in self.graph.books().availability(x).take(down + 1) {
            scanned += 1;
            if occupancy.count(c) <= 1 {
                palette.colors.push(c);
                palette.occupant.push(occupancy.occupant(c));
            }
        }
        self.inst.meter.charge(Category::PaletteScan, down as u64 + scanned);
        assert!(!palette.is_empty(), "structural corruption: empty palette at {x}");
        self.inst.on_palette(x, self.graph.level(x), palette.len() as u32, down as u32);
        palette
    }

    /// Index of a uniformly drawn palette entry, from the engine's own generator.
    pub fn sample_palette(&mut self, palette: &PaletteSample) -> usize {
        self.rng.uniform_below(palette.len())
    }

    fn rand_color(&mut self, x: VertexId) -> (RecolorOutcome, u32) {
        let (target, tested) = self.find_target_level(x);
        self.inst.meter.charge(Category::RandColor, tested);
        let units = self.graph.move_vertex_level(x, target);
        self.inst.meter.charge(Category::SetLevel, units);
        let palette = self.compute_palette(x);
        let pick = self.sample_palette(&palette);
        let c = palette.colors[pick];
        if c != self.graph.color(x) {
            self.set_color(x, c, Category::RandColor);
        }
        let outcome = match palette.occupant[pick] {
            Some(y) => RecolorOutcome::Continue(y),
            None => RecolorOutcome::Done,
        };
        (outcome, palette.len() as u32)
    }

    fn set_color(&mut self, v: VertexId, c: Color, category: Category) {
        let old = self.graph.color(v);
        if old == c {
            return;
        }
        self.graph.set_color(v, c);
        let units = self.propagate_color_change(v, old, c);
        self.inst.meter.charge(category, units);
    }

    /// Moves `v`'s color between the books of every vertex that counts `v` as
    /// an up-neighbor: its down-neighbors and its same-level neighbors.
    fn propagate_color_change(&mut self, v: VertexId, old: Color, new: Color) -> u64 {
        let mut holders = std::mem::take(&mut self.holders);
        holders.clear();
        let rec = self.graph.vertex(v);
        holders.extend_from_slice(rec.down());
        holders.extend_from_slice(rec.up_bucket(rec.level()));
        for &w in &holders {
            self.graph.adjust_up_color(w, old, -1);
            self.graph.adjust_up_color(w, new, 1);
        }
        let units = holders.len() as u64;
        self.holders = holders;
        units
    }
}
