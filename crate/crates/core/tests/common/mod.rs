//! Brute-force cross-checks shared by the integration suites.

use dyncolor::{check_proper, Engine, Level, NaiveState, VertexId};

/// Compares the engine against an independently maintained edge set after
/// an update: properness, structural audit, level range, edge sets and
/// `phi` for every vertex at every level.
pub fn cross_check(engine: &Engine, oracle: &NaiveState) -> Result<(), String> {
    let colors = engine.coloring();
    let bad = check_proper(&colors, oracle.edges());
    if !bad.is_empty() {
        return Err(format!("monochromatic edges {bad:?}"));
    }
    let delta = engine.config().delta;
    if let Some(c) = colors.iter().find(|c| c.0 < 1 || c.0 > delta + 1) {
        return Err(format!("color {c} outside 1..=Δ+1"));
    }
    let disc = engine.audit_structures();
    if !disc.is_empty() {
        return Err(format!("audit: {}", disc[0]));
    }

    let mut ours: Vec<_> = engine.graph().edges().collect();
    let mut theirs: Vec<_> = oracle.edges().collect();
    ours.sort();
    theirs.sort();
    if ours != theirs {
        return Err("edge sets differ".into());
    }

    let n = engine.config().n;
    let top = engine.config().top_level();
    let levels = engine.levels();
    if let Some(l) = levels.iter().find(|l| l.0 < -1 || l.0 > top.0) {
        return Err(format!("level {l} outside -1..={top}"));
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &theirs {
        adj[u.index()].push(v);
        adj[v.index()].push(u);
    }
    for (v, nbrs) in adj.iter().enumerate() {
        for l in -1..=top.0 + 1 {
            let brute = nbrs.iter().filter(|w| levels[w.index()].0 < l).count();
            let got = engine.graph().phi(VertexId(v as u32), Level(l));
            if brute != got {
                return Err(format!("phi(v{v}, {l}) = {got}, brute force {brute}"));
            }
        }
    }
    Ok(())
}
