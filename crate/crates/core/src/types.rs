//! Domain newtypes shared by every layer of the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of a vertex in `[0, n)`. Stable for the lifetime of an engine.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A color in the universe `{1, …, Δ+1}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub u32);

impl Color {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of a vertex in the hierarchy, in `[-1, L]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Level(pub i32);

impl Level {
    pub const BOTTOM: Level = Level(-1);

    /// Offset into per-level arrays, which start at level -1.
    #[inline]
    pub fn slot(self) -> usize {
        (self.0 + 1) as usize
    }

    #[inline]
    pub fn from_slot(slot: usize) -> Level {
        Level(slot as i32 - 1)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Kind of a single stream update.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateKind {
    Insert,
    Delete,
}

/// One edge insertion or deletion.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UpdateEvent {
    pub kind: UpdateKind,
    pub u: VertexId,
    pub v: VertexId,
}

impl UpdateEvent {
    pub fn insert(u: u32, v: u32) -> Self {
        UpdateEvent { kind: UpdateKind::Insert, u: VertexId(u), v: VertexId(v) }
    }

    pub fn delete(u: u32, v: u32) -> Self {
        UpdateEvent { kind: UpdateKind::Delete, u: VertexId(u), v: VertexId(v) }
    }
}

/// `3^k`, saturating. Negative exponents are not used by callers.
#[inline]
pub fn pow3(k: i32) -> u64 {
    debug_assert!(k >= 0);
    3u64.saturating_pow(k as u32)
}

/// The top level `L = ⌈log₃(n−1)⌉ − 1`, with `L = −1` when `n ≤ 2`.
pub fn top_level(n: usize) -> Level {
    if n <= 2 {
        return Level::BOTTOM;
    }
    let target = (n - 1) as u64;
    let mut k = 0i32;
    while pow3(k) < target {
        k += 1;
    }
    Level(k - 1)
}
