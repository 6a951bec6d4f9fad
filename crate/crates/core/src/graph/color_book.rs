//! Up-neighbor color counts and the per-vertex availability list.
//!
//! Every vertex owns a block of `Δ+2` cells in three flat arrays. Cell 0 of a
//! block is the list sentinel; cell `c` holds the count `μ⁺(c)` and the links
//! of color `c`. A color is linked into the availability list exactly when its
//! count is zero, and a color that returns to zero is appended at the tail.

use crate::types::{Color, VertexId};

const NIL: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct ColorBooks {
    stride: usize,
    mu_plus: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    len: Vec<u32>,
}

impl ColorBooks {
    /// Books for `n` vertices over colors `1..=delta+1`, every list in ascending order.
    pub fn new(n: usize, delta: u32) -> Self {
        let palette = delta as usize + 1;
        let stride = palette + 1;
        let mut next = vec![0u32; n * stride];
        let mut prev = vec![0u32; n * stride];
        for v in 0..n {
            let base = v * stride;
            for c in 0..stride {
                next[base + c] = ((c + 1) % stride) as u32;
                prev[base + c] = ((c + stride - 1) % stride) as u32;
            }
        }
        ColorBooks {
            stride,
            mu_plus: vec![0; n * stride],
            next,
            prev,
            len: vec![palette as u32; n],
        }
    }

    /// Number of colors in the universe.
    pub fn palette_size(&self) -> usize {
        self.stride - 1
    }

    #[inline]
    fn cell(&self, v: VertexId, c: Color) -> usize {
        debug_assert!(c.0 >= 1 && c.index() < self.stride, "color {c} out of range");
        v.index() * self.stride + c.index()
    }

    #[inline]
    pub fn mu_plus(&self, v: VertexId, c: Color) -> u32 {
        self.mu_plus[self.cell(v, c)]
    }

    pub fn availability_len(&self, v: VertexId) -> usize {
        self.len[v.index()] as usize
    }

    #[inline]
    pub fn is_available(&self, v: VertexId, c: Color) -> bool {
        self.next[self.cell(v, c)] != NIL
    }

    /// Adjust `μ⁺_v(c)` by `delta` (±1), maintaining the availability list.
    ///
    /// Panics on underflow or on a missing list handle: both mean the engine's
    /// bookkeeping is corrupt and the run cannot continue.
    pub fn adjust(&mut self, v: VertexId, c: Color, delta: i32) {
        let cell = self.cell(v, c);
        match delta {
            1 => {
                self.mu_plus[cell] += 1;
                if self.mu_plus[cell] == 1 {
                    self.unlink(v, c);
                }
            }
            -1 => {
                let count = self.mu_plus[cell];
                assert!(count > 0, "structural corruption: mu_plus underflow at {v}, color {c}");
                self.mu_plus[cell] = count - 1;
                if count == 1 {
                    self.append(v, c);
                }
            }
            _ => panic!("adjust_up_color expects delta of +1 or -1, got {delta}"),
        }
    }

    fn unlink(&mut self, v: VertexId, c: Color) {
        let base = v.index() * self.stride;
        let cell = base + c.index();
        let (n, p) = (self.next[cell], self.prev[cell]);
        assert!(n != NIL, "structural corruption: color {c} missing from availability of {v}");
        self.next[base + p as usize] = n;
        self.prev[base + n as usize] = p;
        self.next[cell] = NIL;
        self.prev[cell] = NIL;
        self.len[v.index()] -= 1;
    }

    fn append(&mut self, v: VertexId, c: Color) {
        let base = v.index() * self.stride;
        let cell = base + c.index();
        assert!(self.next[cell] == NIL, "structural corruption: color {c} already available at {v}");
        let tail = self.prev[base];
        self.next[base + tail as usize] = c.0;
        self.prev[cell] = tail;
        self.next[cell] = 0;
        self.prev[base] = c.0;
        self.len[v.index()] += 1;
    }

    /// Walks the availability list of `v` from the head.
    pub fn availability(&self, v: VertexId) -> Availability<'_> {
        let base = v.index() * self.stride;
        Availability { books: self, base, cursor: self.next[base], remaining: self.stride }
    }

    #[cfg(test)]
    pub(crate) fn corrupt_mu_plus(&mut self, v: VertexId, c: Color, value: u32) {
        let cell = self.cell(v, c);
        self.mu_plus[cell] = value;
    }
}

/// Iterator over one vertex's availability list, head to tail.
///
/// Bounded by the universe size so a corrupted (cyclic) list cannot hang a scan.
pub struct Availability<'a> {
    books: &'a ColorBooks,
    base: usize,
    cursor: u32,
    remaining: usize,
}

impl Iterator for Availability<'_> {
    type Item = Color;

    fn next(&mut self) -> Option<Color> {
        if self.cursor == 0 || self.cursor == NIL || self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let c = self.cursor;
        self.cursor = self.books.next[self.base + c as usize];
        Some(Color(c))
    }
}
