//! The naive O(Δ)-per-update recoloring baseline and an independent
//! properness checker.

use rustc_hash::FxHashSet;

use crate::engine::EngineError;
use crate::types::{Color, UpdateEvent, UpdateKind, VertexId};

/// Adjacency sets plus a coloring. A conflicting insertion recolors the
/// first-listed endpoint with the smallest color absent from its neighborhood.
#[derive(Clone, Debug)]
pub struct NaiveState {
    delta: u32,
    adj: Vec<FxHashSet<u32>>,
    colors: Vec<Color>,
    seen: Vec<u64>,
    stamp: u64,
    work: u64,
    recolors: u64,
}

impl NaiveState {
    pub fn new(n: usize, delta: u32) -> Self {
        NaiveState {
            delta,
            adj: vec![FxHashSet::default(); n],
            colors: vec![Color(1); n],
            seen: vec![0; delta as usize + 2],
            stamp: 0,
            work: 0,
            recolors: 0,
        }
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn recolors(&self) -> u64 {
        self.recolors
    }

    /// Cumulative neighbor-scan units.
    pub fn naive_work_units(&self) -> u64 {
        self.work
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, set)| {
            let u = u as u32;
            set.iter().filter(move |&&v| v > u).map(move |&v| (VertexId(u), VertexId(v)))
        })
    }

    pub fn naive_apply_update(&mut self, e: UpdateEvent) -> Result<(), EngineError> {
        let (u, v) = (e.u.0, e.v.0);
        let n = self.adj.len();
        if u == v || u as usize >= n || v as usize >= n {
            return Err(EngineError::InvalidEdge(u, v));
        }
        let present = self.adj[u as usize].contains(&v);
        match e.kind {
            UpdateKind::Delete => {
                if !present {
                    return Err(EngineError::MissingEdge(u, v));
                }
                self.adj[u as usize].remove(&v);
                self.adj[v as usize].remove(&u);
            }
            UpdateKind::Insert => {
                if present {
                    return Err(EngineError::DuplicateEdge(u, v));
                }
                let cap = self.delta as usize;
                if self.adj[u as usize].len() >= cap || self.adj[v as usize].len() >= cap {
                    return Err(EngineError::DegreeCapExceeded(u, v));
                }
                self.adj[u as usize].insert(v);
                self.adj[v as usize].insert(u);
                if self.colors[u as usize] == self.colors[v as usize] {
                    self.recolor_first_fit(u);
                }
            }
        }
        Ok(())
    }

    fn recolor_first_fit(&mut self, x: u32) {
        self.stamp += 1;
        for &w in &self.adj[x as usize] {
            self.seen[self.colors[w as usize].index()] = self.stamp;
        }
        self.work += self.adj[x as usize].len() as u64;
        let c = (1..=self.delta + 1)
            .find(|&c| self.seen[c as usize] != self.stamp)
            .expect("degree cap leaves a free color");
        self.colors[x as usize] = Color(c);
        self.recolors += 1;
    }
}

/// Every edge whose endpoints share a color. Empty iff `colors` is proper.
pub fn check_proper<I>(colors: &[Color], edges: I) -> Vec<(VertexId, VertexId)>
where
    I: IntoIterator<Item = (VertexId, VertexId)>,
{
    edges
        .into_iter()
        .filter(|&(u, v)| colors[u.index()] == colors[v.index()])
        .collect()
}
