//! Oblivious update-stream generators.
//!
//! Streams are produced from their own seeded generator before any engine
//! exists, so their content cannot depend on the engine's random choices.
//! Every emitted event is valid for a graph that starts empty: no duplicate
//! insertions, no deletions of absent edges, no degree above Δ.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use super::WorkloadError;
use crate::types::UpdateEvent;

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum StreamModel {
    /// Insert a uniform feasible absent pair with probability `p`, otherwise
    /// delete a uniform present edge.
    Churn { p: f64 },
    /// Keep a FIFO window of `w` live edges.
    SlidingWindow { w: usize },
    /// Hubs that repeatedly fill to Δ and shed edges, plus light leaf churn.
    StarStress,
}

impl fmt::Display for StreamModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StreamModel::Churn { p } => write!(f, "churn:{p}"),
            StreamModel::SlidingWindow { w } => write!(f, "window:{w}"),
            StreamModel::StarStress => write!(f, "star"),
        }
    }
}

impl FromStr for StreamModel {
    type Err = WorkloadError;

    /// `churn:<p>`, `window:<w>` or `star`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WorkloadError::InvalidConfig(format!("unknown model `{s}`"));
        match s.split_once(':') {
            Some(("churn", p)) => Ok(StreamModel::Churn { p: p.parse().map_err(|_| bad())? }),
            Some(("window", w)) => Ok(StreamModel::SlidingWindow { w: w.parse().map_err(|_| bad())? }),
            None if s == "star" => Ok(StreamModel::StarStress),
            _ => Err(bad()),
        }
    }
}

/// Edges with O(1) membership, uniform sampling and removal.
#[derive(Default)]
struct EdgeList {
    edges: Vec<(u32, u32)>,
    index: FxHashMap<(u32, u32), usize>,
}

fn key(u: u32, v: u32) -> (u32, u32) {
    (u.min(v), u.max(v))
}

impl EdgeList {
    fn len(&self) -> usize {
        self.edges.len()
    }

    fn contains(&self, u: u32, v: u32) -> bool {
        self.index.contains_key(&key(u, v))
    }

    fn push(&mut self, u: u32, v: u32) {
        self.index.insert(key(u, v), self.edges.len());
        self.edges.push((u, v));
    }

    fn remove(&mut self, u: u32, v: u32) {
        let i = self.index.remove(&key(u, v)).expect("edge present");
        self.edges.swap_remove(i);
        if let Some(&(a, b)) = self.edges.get(i) {
            self.index.insert(key(a, b), i);
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Option<(u32, u32)> {
        (!self.edges.is_empty()).then(|| self.edges[rng.random_range(0..self.edges.len())])
    }
}

/// The live graph the generator is building, with degree tracking.
struct Pool {
    delta: u32,
    degree: Vec<u32>,
    edges: EdgeList,
    /// Vertices with spare degree, and each one's position in that list.
    free: Vec<u32>,
    free_pos: Vec<usize>,
    out: Vec<UpdateEvent>,
}

const NOT_FREE: usize = usize::MAX;

impl Pool {
    fn new(n: usize, delta: u32, capacity: usize) -> Self {
        Pool {
            delta,
            degree: vec![0; n],
            edges: EdgeList::default(),
            free: (0..n as u32).collect(),
            free_pos: (0..n).collect(),
            out: Vec::with_capacity(capacity),
        }
    }

    fn has_room(&self, v: u32) -> bool {
        self.degree[v as usize] < self.delta
    }

    fn feasible(&self, u: u32, v: u32) -> bool {
        u != v && self.has_room(u) && self.has_room(v) && !self.edges.contains(u, v)
    }

    fn bump(&mut self, v: u32, up: bool) {
        let i = v as usize;
        if up {
            self.degree[i] += 1;
            if self.degree[i] == self.delta {
                let pos = self.free_pos[i];
                self.free.swap_remove(pos);
                if let Some(&moved) = self.free.get(pos) {
                    self.free_pos[moved as usize] = pos;
                }
                self.free_pos[i] = NOT_FREE;
            }
        } else {
            if self.degree[i] == self.delta {
                self.free_pos[i] = self.free.len();
                self.free.push(v);
            }
            self.degree[i] -= 1;
        }
    }

    fn insert(&mut self, u: u32, v: u32) {
        debug_assert!(self.feasible(u, v));
        self.edges.push(u, v);
        self.bump(u, true);
        self.bump(v, true);
        self.out.push(UpdateEvent::insert(u, v));
    }

    fn delete(&mut self, u: u32, v: u32) {
        self.edges.remove(u, v);
        self.bump(u, false);
        self.bump(v, false);
        self.out.push(UpdateEvent::delete(u, v));
    }

    /// A uniform feasible absent pair, in random orientation.
    fn random_pair(&self, rng: &mut ChaCha8Rng) -> Option<(u32, u32)> {
        let f = self.free.len();
        if f < 2 {
            return None;
        }
        for _ in 0..64 {
            let a = self.free[rng.random_range(0..f)];
            let b = self.free[rng.random_range(0..f)];
            if a != b && !self.edges.contains(a, b) {
                return Some((a, b));
            }
        }
        // nearly saturated: enumerate what is left
        let mut left = Vec::new();
        for (i, &a) in self.free.iter().enumerate() {
            for &b in &self.free[i + 1..] {
                if !self.edges.contains(a, b) {
                    left.push((a, b));
                }
            }
        }
        if left.is_empty() {
            return None;
        }
        let (a, b) = left[rng.random_range(0..left.len())];
        Some(if rng.random::<bool>() { (a, b) } else { (b, a) })
    }
}

/// Generator seeded on its own stream, independent of any engine seeded with the same value.
pub fn stream_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

pub fn generate(
    model: StreamModel,
    n: usize,
    delta: u32,
    t: usize,
    seed: u64,
) -> Result<Vec<UpdateEvent>, WorkloadError> {
    if n < 2 || delta == 0 {
        return Err(WorkloadError::InvalidConfig(format!("need n ≥ 2 and delta ≥ 1, got n={n} delta={delta}")));
    }
    let mut rng = stream_rng(seed);
    let mut pool = Pool::new(n, delta, t);
    match model {
        StreamModel::Churn { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(WorkloadError::InvalidConfig(format!("churn probability {p} outside [0, 1]")));
            }
            churn(&mut pool, &mut rng, p, t);
        }
        StreamModel::SlidingWindow { w } => {
            let max_edges = (n * (n - 1) / 2).min(n * delta as usize / 2);
            if w == 0 || w > max_edges {
                return Err(WorkloadError::InvalidConfig(format!(
                    "window {w} outside [1, {max_edges}] for n={n} delta={delta}"
                )));
            }
            sliding_window(&mut pool, &mut rng, w, t);
        }
        StreamModel::StarStress => star_stress(&mut pool, &mut rng, n, delta, t),
    }
    Ok(pool.out)
}

fn churn(pool: &mut Pool, rng: &mut ChaCha8Rng, p: f64, t: usize) {
    while pool.out.len() < t {
        let want_insert = rng.random::<f64>() < p;
        if want_insert || pool.edges.len() == 0 {
            if let Some((u, v)) = pool.random_pair(rng) {
                pool.insert(u, v);
                continue;
            }
        }
        let (u, v) = pool.edges.sample(rng).expect("an empty graph always admits an insertion");
        pool.delete(u, v);
    }
}

fn sliding_window(pool: &mut Pool, rng: &mut ChaCha8Rng, w: usize, t: usize) {
    let mut window = VecDeque::with_capacity(w);
    while pool.out.len() < t {
        if window.len() < w {
            if let Some((u, v)) = pool.random_pair(rng) {
                pool.insert(u, v);
                window.push_back((u, v));
                continue;
            }
        }
        let (u, v) = window.pop_front().expect("window is non-empty when no insertion is possible");
        pool.delete(u, v);
    }
}

fn star_stress(pool: &mut Pool, rng: &mut ChaCha8Rng, n: usize, delta: u32, t: usize) {
    let hubs = (n / (delta as usize + 1)).clamp(1, 8).min(n - 1) as u32;
    let leaves = n as u32 - hubs;
    let mut hub_edges: Vec<EdgeList> = (0..hubs).map(|_| EdgeList::default()).collect();
    let mut leaf_edges = EdgeList::default();
    while pool.out.len() < t {
        if leaves >= 2 && rng.random::<f64>() < 0.25 {
            // leaf-leaf churn keeps leaf colors moving
            if leaf_edges.len() < n && rng.random::<f64>() < 0.6 {
                let a = hubs + rng.random_range(0..leaves);
                let b = hubs + rng.random_range(0..leaves);
                if pool.feasible(a, b) {
                    pool.insert(a, b);
                    leaf_edges.push(a, b);
                }
            } else if let Some((a, b)) = leaf_edges.sample(rng) {
                leaf_edges.remove(a, b);
                pool.delete(a, b);
            }
            continue;
        }
        let h = rng.random_range(0..hubs);
        let grow = pool.has_room(h) && rng.random::<f64>() < 0.8;
        if grow {
            let leaf = (0..16)
                .map(|_| hubs + rng.random_range(0..leaves))
                .find(|&l| pool.feasible(h, l));
            if let Some(l) = leaf {
                hub_edges[h as usize].push(h, l);
                if rng.random::<bool>() {
                    pool.insert(h, l);
                } else {
                    pool.insert(l, h);
                }
                continue;
            }
        }
        if let Some((a, b)) = hub_edges[h as usize].sample(rng) {
            hub_edges[h as usize].remove(a, b);
            pool.delete(a, b);
        }
    }
}
