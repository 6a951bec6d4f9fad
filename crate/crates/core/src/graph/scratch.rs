use crate::types::{Color, VertexId};

/// Per-color occupancy of one vertex's down-neighbors.
///
/// Entries are tagged with a generation; bumping the generation clears the
/// table in O(1).
#[derive(Clone, Debug)]
pub struct ScratchOccupancy {
    generation: u32,
    tag: Vec<u32>,
    count: Vec<u32>,
    rep: Vec<VertexId>,
}

impl ScratchOccupancy {
    pub fn new(delta: u32) -> Self {
        let cells = delta as usize + 2;
        ScratchOccupancy {
            generation: 1,
            tag: vec![0; cells],
            count: vec![0; cells],
            rep: vec![VertexId(0); cells],
        }
    }

    pub(crate) fn reset(&mut self) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.tag.fill(0);
            self.generation = 1;
        }
    }

    #[inline]
    pub(crate) fn mark(&mut self, c: Color, w: VertexId) {
        let i = c.index();
        if self.tag[i] != self.generation {
            self.tag[i] = self.generation;
            self.count[i] = 0;
        }
        self.count[i] += 1;
        self.rep[i] = w;
    }

    /// Number of scanned down-neighbors holding `c`.
    #[inline]
    pub fn count(&self, c: Color) -> u32 {
        let i = c.index();
        if self.tag[i] == self.generation {
            self.count[i]
        } else {
            0
        }
    }

    /// The single down-neighbor holding `c`, if exactly one does.
    pub fn occupant(&self, c: Color) -> Option<VertexId> {
        (self.count(c) == 1).then(|| self.rep[c.index()])
    }
}
