//! Level-partitioned adjacency with per-vertex color bookkeeping.
//!
//! For a vertex `v` every neighbor `w` lives in exactly one of `v`'s views:
//! `down(v)` when `level(w) < level(v)`, otherwise the up-bucket
//! `up(v)[level(w)]`. Each view entry has a handle (its slot) so removal is
//! constant time. The colors of up-neighbors are counted in [`ColorBooks`];
//! the colors of down-neighbors are never cached and are read on demand with
//! [`LevelGraph::down_occupancy_scan`].
//!
//! Methods that do structural work return the number of work units spent.

mod audit;
mod color_book;
mod scratch;

pub use audit::{Discrepancy, DiscrepancyKind};
pub use color_book::{Availability, ColorBooks};
pub use scratch::ScratchOccupancy;

use rustc_hash::FxHashMap;

use crate::types::{top_level, Color, Level, VertexId};

const DOWN: i32 = i32::MIN;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) struct Slot {
    /// `DOWN`, or the level of the up-bucket holding the entry.
    bucket: i32,
    pos: u32,
}

#[derive(Clone, Debug)]
pub struct VertexRecord {
    pub(crate) level: Level,
    pub(crate) color: Color,
    pub(crate) stamp: u64,
    pub(crate) down: Vec<VertexId>,
    pub(crate) up: Vec<Vec<VertexId>>,
    pub(crate) slots: FxHashMap<VertexId, Slot>,
}

impl VertexRecord {
    fn new(levels: usize) -> Self {
        VertexRecord {
            level: Level::BOTTOM,
            color: Color(1),
            stamp: 0,
            down: Vec::new(),
            up: vec![Vec::new(); levels],
            slots: FxHashMap::default(),
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn color(&self) -> Color {
        self.color
    }

    pub fn last_recolor_stamp(&self) -> u64 {
        self.stamp
    }

    pub fn down(&self) -> &[VertexId] {
        &self.down
    }

    pub fn down_count(&self) -> usize {
        self.down.len()
    }

    pub fn up_bucket(&self, level: Level) -> &[VertexId] {
        self.up.get(level.slot()).map_or(&[], Vec::as_slice)
    }

    pub fn degree(&self) -> usize {
        self.slots.len()
    }

    pub fn is_adjacent(&self, w: VertexId) -> bool {
        self.slots.contains_key(&w)
    }

    /// Every neighbor, down view first, then up-buckets by ascending level.
    pub fn neighbors(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.down.iter().chain(self.up.iter().flatten()).copied()
    }
}

#[derive(Clone, Debug)]
pub struct LevelGraph {
    delta: u32,
    top: Level,
    verts: Vec<VertexRecord>,
    books: ColorBooks,
    scratch: ScratchOccupancy,
    edges: usize,
}

impl LevelGraph {
    /// `n` isolated vertices at level −1, all colored 1.
    pub fn new(n: usize, delta: u32) -> Self {
        let top = top_level(n);
        let levels = top.slot() + 1;
        LevelGraph {
            delta,
            top,
            verts: (0..n).map(|_| VertexRecord::new(levels)).collect(),
            books: ColorBooks::new(n, delta),
            scratch: ScratchOccupancy::new(delta),
            edges: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.verts.len()
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn top_level(&self) -> Level {
        self.top
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn vertex(&self, v: VertexId) -> &VertexRecord {
        &self.verts[v.index()]
    }

    #[inline]
    pub fn level(&self, v: VertexId) -> Level {
        self.verts[v.index()].level
    }

    #[inline]
    pub fn color(&self, v: VertexId) -> Color {
        self.verts[v.index()].color
    }

    pub fn books(&self) -> &ColorBooks {
        &self.books
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.verts[u.index()].is_adjacent(v)
    }

    /// Present edges as `(min, max)` pairs in a deterministic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.verts.iter().enumerate().flat_map(|(i, rec)| {
            let v = VertexId(i as u32);
            rec.neighbors().filter(move |&w| w > v).map(move |w| (v, w))
        })
    }

    pub(crate) fn set_color(&mut self, v: VertexId, c: Color) {
        self.verts[v.index()].color = c;
    }

    pub(crate) fn set_stamp(&mut self, v: VertexId, stamp: u64) {
        self.verts[v.index()].stamp = stamp;
    }

    fn link_down(&mut self, x: VertexId, w: VertexId) {
        let rec = &mut self.verts[x.index()];
        let pos = rec.down.len() as u32;
        rec.down.push(w);
        rec.slots.insert(w, Slot { bucket: DOWN, pos });
    }

    fn link_up(&mut self, x: VertexId, w: VertexId, level: Level) {
        let rec = &mut self.verts[x.index()];
        let bucket = &mut rec.up[level.slot()];
        let pos = bucket.len() as u32;
        bucket.push(w);
        rec.slots.insert(w, Slot { bucket: level.0, pos });
    }

    /// Removes `w` from whichever view of `x` holds it and returns the old slot.
    fn unlink(&mut self, x: VertexId, w: VertexId) -> Slot {
        let rec = &mut self.verts[x.index()];
        let slot = rec
            .slots
            .remove(&w)
            .unwrap_or_else(|| panic!("structural corruption: {w} has no handle in views of {x}"));
        let list = if slot.bucket == DOWN { &mut rec.down } else { &mut rec.up[Level(slot.bucket).slot()] };
        let pos = slot.pos as usize;
        assert!(list.get(pos) == Some(&w), "structural corruption: stale handle for {w} at {x}");
        list.swap_remove(pos);
        if let Some(&moved) = list.get(pos) {
            rec.slots.get_mut(&moved).expect("moved entry has a handle").pos = pos as u32;
        }
        slot
    }

    fn rebucket_up(&mut self, x: VertexId, w: VertexId, level: Level) {
        self.unlink(x, w);
        self.link_up(x, w, level);
    }

    /// Adjusts `μ⁺_v(c)` by ±1, maintaining the availability list of `v`.
    #[inline]
    pub fn adjust_up_color(&mut self, v: VertexId, c: Color, delta: i32) {
        self.books.adjust(v, c, delta);
    }

    /// Registers a new edge `uv` in both endpoints' views. Caller validates.
    pub fn attach_edge_views(&mut self, u: VertexId, v: VertexId) -> u64 {
        let (lu, lv) = (self.level(u), self.level(v));
        let (cu, cv) = (self.color(u), self.color(v));
        if lu > lv {
            self.link_down(u, v);
            self.link_up(v, u, lu);
            self.adjust_up_color(v, cu, 1);
        } else if lu < lv {
            self.link_down(v, u);
            self.link_up(u, v, lv);
            self.adjust_up_color(u, cv, 1);
        } else {
            self.link_up(u, v, lv);
            self.adjust_up_color(u, cv, 1);
            self.link_up(v, u, lu);
            self.adjust_up_color(v, cu, 1);
        }
        self.edges += 1;
        2
    }

    /// Removes edge `uv` from both endpoints' views. Caller validates.
    pub fn detach_edge_views(&mut self, u: VertexId, v: VertexId) -> u64 {
        for (x, w) in [(u, v), (v, u)] {
            let slot = self.unlink(x, w);
            if slot.bucket != DOWN {
                let cw = self.color(w);
                self.adjust_up_color(x, cw, -1);
            }
        }
        self.edges -= 1;
        2
    }

    /// `φ_v(ℓ)`: neighbors of `v` strictly below `level`.
    ///
    /// Above `level(v)` this sums bucket sizes; at or below it the down view is
    /// scanned.
    pub fn phi(&self, v: VertexId, level: Level) -> usize {
        let rec = self.vertex(v);
        if level > rec.level {
            let hi = level.slot().min(rec.up.len());
            rec.down.len() + rec.up[rec.level.slot()..hi].iter().map(Vec::len).sum::<usize>()
        } else {
            rec.down.iter().filter(|&&w| self.level(w) < level).count()
        }
    }

    /// Counts the colors of `v`'s down-neighbors. Costs `down_count(v)` units.
    pub fn down_occupancy_scan(&mut self, v: VertexId) -> &ScratchOccupancy {
        self.scratch.reset();
        let rec = &self.verts[v.index()];
        for &w in &rec.down {
            self.scratch.mark(self.verts[w.index()].color, w);
        }
        &self.scratch
    }

    /// The result of the most recent [`down_occupancy_scan`](Self::down_occupancy_scan).
    pub fn occupancy(&self) -> &ScratchOccupancy {
        &self.scratch
    }

    /// Moves `v` to `new` and reclassifies every affected neighbor entry on both sides.
    pub fn move_vertex_level(&mut self, v: VertexId, new: Level) -> u64 {
        let old = self.level(v);
        if new == old {
            return 0;
        }
        assert!(
            new >= Level::BOTTOM && new <= self.top,
            "level {new} outside [-1, {}]",
            self.top
        );
        let vc = self.color(v);
        let mut units = 1u64;
        if new < old {
            let down = std::mem::take(&mut self.verts[v.index()].down);
            for &w in &down {
                units += 1;
                let lw = self.level(w);
                if lw < new {
                    self.link_down(v, w);
                    self.rebucket_up(w, v, new);
                } else if lw == new {
                    self.link_up(v, w, lw);
                    self.adjust_up_color(v, self.color(w), 1);
                    self.rebucket_up(w, v, new);
                } else {
                    self.link_up(v, w, lw);
                    self.adjust_up_color(v, self.color(w), 1);
                    self.unlink(w, v);
                    self.link_down(w, v);
                    self.adjust_up_color(w, vc, -1);
                }
            }
            // former same-level neighbors stay in up(v)[old]; v drops into their down views
            let same = std::mem::take(&mut self.verts[v.index()].up[old.slot()]);
            for &w in &same {
                units += 1;
                self.unlink(w, v);
                self.link_down(w, v);
                self.adjust_up_color(w, vc, -1);
            }
            self.verts[v.index()].up[old.slot()] = same;
        } else {
            let down = std::mem::take(&mut self.verts[v.index()].down);
            for &w in &down {
                units += 1;
                self.rebucket_up(w, v, new);
            }
            self.verts[v.index()].down = down;
            for level in (old.0..=new.0).map(Level) {
                units += 1;
                let bucket = std::mem::take(&mut self.verts[v.index()].up[level.slot()]);
                if level < new {
                    for &w in &bucket {
                        units += 1;
                        self.link_down(v, w);
                        self.adjust_up_color(v, self.color(w), -1);
                        if level == old {
                            self.rebucket_up(w, v, new);
                        } else {
                            self.unlink(w, v);
                            self.link_up(w, v, new);
                            self.adjust_up_color(w, vc, 1);
                        }
                    }
                } else {
                    for &w in &bucket {
                        units += 1;
                        self.unlink(w, v);
                        self.link_up(w, v, new);
                        self.adjust_up_color(w, vc, 1);
                    }
                    self.verts[v.index()].up[level.slot()] = bucket;
                }
            }
        }
        self.verts[v.index()].level = new;
        units
    }

    #[cfg(test)]
    pub(crate) fn books_mut(&mut self) -> &mut ColorBooks {
        &mut self.books
    }
}

#[cfg(test)]
mod tests;
