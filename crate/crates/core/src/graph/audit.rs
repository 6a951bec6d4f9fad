//! From-scratch consistency check of every view, handle and counter.

use std::fmt;

use super::{LevelGraph, Slot, DOWN};
use crate::types::{Color, Level, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiscrepancyKind {
    LevelOutOfRange { level: Level },
    ColorOutOfRange { color: Color },
    DegreeAboveCap { degree: usize },
    /// `neighbor` is in a view of the vertex but not vice versa.
    Asymmetric { neighbor: VertexId },
    /// `neighbor` is filed in the wrong view for the current levels.
    Misfiled { neighbor: VertexId },
    /// A view entry whose handle does not point back at it, or a handle with no entry.
    BadHandle { neighbor: VertexId },
    MuPlus { color: Color, stored: u32, expected: u32 },
    Availability { color: Color, listed: bool },
    AvailabilityLength { walked: usize, stored: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub vertex: VertexId,
    pub kind: DiscrepancyKind,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.vertex;
        match &self.kind {
            DiscrepancyKind::LevelOutOfRange { level } => write!(f, "{v}: level {level} out of range"),
            DiscrepancyKind::ColorOutOfRange { color } => write!(f, "{v}: color {color} out of range"),
            DiscrepancyKind::DegreeAboveCap { degree } => write!(f, "{v}: degree {degree} above cap"),
            DiscrepancyKind::Asymmetric { neighbor } => write!(f, "{v}: edge to {neighbor} is one-sided"),
            DiscrepancyKind::Misfiled { neighbor } => write!(f, "{v}: {neighbor} filed in wrong view"),
            DiscrepancyKind::BadHandle { neighbor } => write!(f, "{v}: bad handle for {neighbor}"),
            DiscrepancyKind::MuPlus { color, stored, expected } => {
                write!(f, "{v}: mu_plus({color}) = {stored}, expected {expected}")
            }
            DiscrepancyKind::Availability { color, listed } => {
                write!(f, "{v}: color {color} listed={listed} disagrees with mu_plus")
            }
            DiscrepancyKind::AvailabilityLength { walked, stored } => {
                write!(f, "{v}: availability walk found {walked} colors, length says {stored}")
            }
        }
    }
}

impl LevelGraph {
    /// Recomputes every view, bucket, counter and list from the adjacency
    /// handles and reports each disagreement. An empty report means consistent.
    pub fn audit_structures(&self) -> Vec<Discrepancy> {
        let mut out = Vec::new();
        let palette = self.books.palette_size();
        let mut expected_mu = vec![0u32; palette + 1];
        for (i, rec) in self.verts.iter().enumerate() {
            let v = VertexId(i as u32);
            let mut report = |kind| out.push(Discrepancy { vertex: v, kind });
            if rec.level < Level::BOTTOM || rec.level > self.top {
                report(DiscrepancyKind::LevelOutOfRange { level: rec.level });
            }
            if rec.color.0 < 1 || rec.color.index() > palette {
                report(DiscrepancyKind::ColorOutOfRange { color: rec.color });
                continue;
            }
            if rec.degree() > self.delta as usize {
                report(DiscrepancyKind::DegreeAboveCap { degree: rec.degree() });
            }

            let mut listed = 0usize;
            let views = std::iter::once((DOWN, &rec.down)).chain(
                rec.up.iter().enumerate().map(|(s, b)| (Level::from_slot(s).0, b)),
            );
            for (bucket, list) in views {
                for (pos, &w) in list.iter().enumerate() {
                    listed += 1;
                    if rec.slots.get(&w) != Some(&Slot { bucket, pos: pos as u32 }) {
                        report(DiscrepancyKind::BadHandle { neighbor: w });
                    }
                    if w.index() >= self.verts.len() || !self.verts[w.index()].slots.contains_key(&v) {
                        report(DiscrepancyKind::Asymmetric { neighbor: w });
                        continue;
                    }
                    let lw = self.verts[w.index()].level;
                    let filed_ok = if lw < rec.level { bucket == DOWN } else { bucket == lw.0 };
                    if !filed_ok {
                        report(DiscrepancyKind::Misfiled { neighbor: w });
                    }
                }
            }
            if listed != rec.slots.len() {
                for &w in rec.slots.keys() {
                    let held = rec.neighbors().any(|x| x == w);
                    if !held {
                        report(DiscrepancyKind::BadHandle { neighbor: w });
                    }
                }
            }

            expected_mu.fill(0);
            for &w in rec.up.iter().flatten() {
                if let Some(c) = self.verts.get(w.index()).map(|r| r.color.index()) {
                    if c <= palette {
                        expected_mu[c] += 1;
                    }
                }
            }
            for (c, &expected) in expected_mu.iter().enumerate().take(palette + 1).skip(1) {
                let color = Color(c as u32);
                let stored = self.books.mu_plus(v, color);
                if stored != expected {
                    report(DiscrepancyKind::MuPlus { color, stored, expected });
                }
                let linked = self.books.is_available(v, color);
                if linked != (stored == 0) {
                    report(DiscrepancyKind::Availability { color, listed: linked });
                }
            }
            let walked = self.books.availability(v).count();
            if walked != self.books.availability_len(v) {
                report(DiscrepancyKind::AvailabilityLength { walked, stored: self.books.availability_len(v) });
            }
        }
        out
    }
}
