//! Fully dynamic (Δ+1)-vertex coloring with constant amortized update time.
//!
//! The [`Engine`] keeps a proper coloring of a graph on a fixed vertex set
//! with maximum degree Δ while edges are inserted and deleted. Vertices sit on
//! levels −1..=L of a hierarchy; a conflicting insertion either picks a free
//! color deterministically (cheap, at level −1) or raises the vertex and
//! samples a color uniformly from a palette whose size grows with the level.
//!
//! Alongside the engine the crate provides the naive baseline
//! ([`baseline`]), work/epoch instrumentation ([`instrument`]), and stream
//! generation, replay and reporting ([`workload`]).
//!
//! ```
//! use dyncolor::{Engine, EngineConfig, UpdateEvent};
//!
//! let mut engine = Engine::preprocess(EngineConfig::new(100, 8, 42))?;
//! engine.apply_update(UpdateEvent::insert(0, 1))?;
//! assert_ne!(engine.color(0.into()), engine.color(1.into()));
//! # Ok::<(), dyncolor::EngineError>(())
//! ```

pub mod baseline;
pub mod engine;
pub mod graph;
pub mod instrument;
pub mod rng;
pub mod types;
pub mod workload;

pub use baseline::{check_proper, NaiveState};
pub use engine::{Engine, EngineConfig, EngineError, PaletteSample, RecolorOutcome};
pub use types::{Color, Level, UpdateEvent, UpdateKind, VertexId};
