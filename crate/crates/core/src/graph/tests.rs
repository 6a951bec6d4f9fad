use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;

fn vid(i: u32) -> VertexId {
    VertexId(i)
}

fn avail(g: &LevelGraph, v: u32) -> Vec<u32> {
    g.books().availability(vid(v)).map(|c| c.0).collect()
}

fn brute_phi(g: &LevelGraph, edges: &BTreeSet<(u32, u32)>, v: u32, level: Level) -> usize {
    edges
        .iter()
        .filter_map(|&(a, b)| match (a == v, b == v) {
            (true, _) => Some(b),
            (_, true) => Some(a),
            _ => None,
        })
        .filter(|&w| g.level(vid(w)) < level)
        .count()
}

#[test]
fn fresh_graph_is_consistent() {
    let g = LevelGraph::new(4, 3);
    assert!(g.audit_structures().is_empty());
    assert_eq!(avail(&g, 2), vec![1, 2, 3, 4]);
}

#[test]
fn attach_higher_endpoint_gains_down_entry() {
    let mut g = LevelGraph::new(30, 10);
    g.move_vertex_level(vid(0), Level(2));
    g.set_color(vid(0), Color(4));
    g.attach_edge_views(vid(0), vid(1));
    assert_eq!(g.vertex(vid(0)).down(), &[vid(1)]);
    assert_eq!(g.vertex(vid(1)).up_bucket(Level(2)), &[vid(0)]);
    assert_eq!(g.books().mu_plus(vid(1), Color(4)), 1);
    assert!(!g.books().is_available(vid(1), Color(4)));
    // v's color is not cached at the higher endpoint
    assert_eq!(g.books().mu_plus(vid(0), Color(1)), 0);
    assert!(g.audit_structures().is_empty());
}

#[test]
fn attach_equal_levels_is_mutual_up() {
    let mut g = LevelGraph::new(4, 3);
    g.attach_edge_views(vid(0), vid(1));
    assert_eq!(g.vertex(vid(0)).up_bucket(Level(-1)), &[vid(1)]);
    assert_eq!(g.vertex(vid(1)).up_bucket(Level(-1)), &[vid(0)]);
    assert_eq!(g.books().mu_plus(vid(0), Color(1)), 1);
    assert_eq!(g.books().mu_plus(vid(1), Color(1)), 1);
    assert!(g.audit_structures().is_empty());
}

#[test]
fn detach_reappends_freed_color_at_tail() {
    let mut g = LevelGraph::new(4, 6);
    g.set_color(vid(1), Color(5));
    g.attach_edge_views(vid(0), vid(1));
    assert_eq!(avail(&g, 0), vec![1, 2, 3, 4, 6, 7]);
    g.detach_edge_views(vid(0), vid(1));
    assert_eq!(g.books().mu_plus(vid(0), Color(5)), 0);
    assert_eq!(avail(&g, 0), vec![1, 2, 3, 4, 6, 7, 5]);
    assert!(g.audit_structures().is_empty());
}

#[test]
fn detach_equal_levels_shrinks_both_buckets() {
    let mut g = LevelGraph::new(4, 3);
    g.set_color(vid(1), Color(2));
    g.attach_edge_views(vid(0), vid(1));
    g.attach_edge_views(vid(0), vid(2));
    g.detach_edge_views(vid(1), vid(0));
    assert_eq!(g.vertex(vid(0)).up_bucket(Level(-1)), &[vid(2)]);
    assert!(g.vertex(vid(1)).up_bucket(Level(-1)).is_empty());
    assert!(g.audit_structures().is_empty());
}

#[test]
fn attach_then_detach_restores_views() {
    let mut g = LevelGraph::new(10, 4);
    g.attach_edge_views(vid(0), vid(1));
    g.move_vertex_level(vid(0), Level(1));
    let counts_before: Vec<u32> = (1..=5).map(|c| g.books().mu_plus(vid(2), Color(c))).collect();
    let lists_before = (avail(&g, 0), avail(&g, 2));
    g.attach_edge_views(vid(0), vid(2));
    g.detach_edge_views(vid(0), vid(2));
    let counts_after: Vec<u32> = (1..=5).map(|c| g.books().mu_plus(vid(2), Color(c))).collect();
    assert_eq!(counts_before, counts_after);
    // the freed color moves to the tail, so compare as sets
    let mut a = lists_before.1.clone();
    let mut b = avail(&g, 2);
    a.sort_unstable();
    b.sort_unstable();
    assert_eq!(a, b);
    assert_eq!(lists_before.0, avail(&g, 0));
    assert_eq!(g.vertex(vid(0)).degree(), 1);
    assert!(g.audit_structures().is_empty());
}

#[test]
fn phi_counts_same_level_neighbors() {
    let mut g = LevelGraph::new(5, 4);
    for w in 1..=3 {
        g.attach_edge_views(vid(0), vid(w));
    }
    assert_eq!(g.phi(vid(0), Level(0)), 3);
    assert_eq!(g.phi(vid(0), Level(-1)), 0);
    assert_eq!(g.phi(vid(4), Level(0)), 0);
    assert_eq!(g.phi(vid(4), g.top_level()), 0);
}

#[test]
fn raising_splits_same_level_neighbors_into_down() {
    let mut g = LevelGraph::new(10, 5);
    for (w, c) in [(1, 2), (2, 3), (3, 2)] {
        g.set_color(vid(w), Color(c));
        g.attach_edge_views(vid(0), vid(w));
    }
    assert_eq!(g.books().mu_plus(vid(0), Color(2)), 2);
    let units = g.move_vertex_level(vid(0), Level(0));
    assert!(units > 0);
    assert_eq!(g.vertex(vid(0)).down_count(), 3);
    assert_eq!(g.books().mu_plus(vid(0), Color(2)), 0);
    assert_eq!(g.books().mu_plus(vid(0), Color(3)), 0);
    for w in 1..=3 {
        assert_eq!(g.vertex(vid(w)).up_bucket(Level(0)), &[vid(0)]);
        assert_eq!(g.books().mu_plus(vid(w), Color(1)), 1);
    }
    assert!(g.audit_structures().is_empty());
}

#[test]
fn lowering_past_down_neighbor_flips_both_sides() {
    let mut g = LevelGraph::new(30, 5);
    g.move_vertex_level(vid(0), Level(2));
    g.move_vertex_level(vid(1), Level(1));
    g.set_color(vid(0), Color(3));
    g.attach_edge_views(vid(0), vid(1));
    assert_eq!(g.books().mu_plus(vid(1), Color(3)), 1);
    g.move_vertex_level(vid(0), Level(-1));
    assert_eq!(g.vertex(vid(0)).up_bucket(Level(1)), &[vid(1)]);
    assert_eq!(g.vertex(vid(1)).down(), &[vid(0)]);
    assert_eq!(g.books().mu_plus(vid(1), Color(3)), 0);
    assert_eq!(g.books().mu_plus(vid(0), Color(1)), 1);
    assert!(g.audit_structures().is_empty());
}

#[test]
fn same_level_move_is_free() {
    let mut g = LevelGraph::new(10, 3);
    g.attach_edge_views(vid(0), vid(1));
    assert_eq!(g.move_vertex_level(vid(0), Level(-1)), 0);
}

/// Exercises every row of the reclassification table with a hub and one
/// neighbor per level.
#[test]
fn every_reclassification_case_keeps_audit_clean() {
    let n = 200; // L = 4
    let top = top_level(n);
    assert_eq!(top, Level(4));
    for from in -1..=top.0 {
        for to in -1..=top.0 {
            let mut g = LevelGraph::new(n, 12);
            let hub = vid(0);
            g.move_vertex_level(hub, Level(from));
            for (k, lw) in (-1..=top.0).enumerate() {
                for copy in 0..2u32 {
                    let w = vid(1 + 2 * k as u32 + copy);
                    g.move_vertex_level(w, Level(lw));
                    g.set_color(w, Color(1 + (k as u32 + copy) % 4));
                    g.attach_edge_views(hub, w);
                }
            }
            assert!(g.audit_structures().is_empty());
            g.move_vertex_level(hub, Level(to));
            let report = g.audit_structures();
            assert!(report.is_empty(), "{from} -> {to}: {report:?}");
        }
    }
}

#[test]
fn corrupted_counter_is_reported_once() {
    let mut g = LevelGraph::new(4, 3);
    g.set_color(vid(1), Color(3));
    g.attach_edge_views(vid(0), vid(1));
    g.books_mut().corrupt_mu_plus(vid(0), Color(3), 2);
    let report = g.audit_structures();
    assert_eq!(
        report,
        vec![Discrepancy {
            vertex: vid(0),
            kind: DiscrepancyKind::MuPlus { color: Color(3), stored: 2, expected: 1 }
        }]
    );
}

#[test]
fn down_scan_counts_colors() {
    let mut g = LevelGraph::new(30, 5);
    g.move_vertex_level(vid(0), Level(1));
    for (w, c) in [(1, 2), (2, 2), (3, 3)] {
        g.set_color(vid(w), Color(c));
        g.attach_edge_views(vid(0), vid(w));
    }
    let occ = g.down_occupancy_scan(vid(0));
    assert_eq!(occ.count(Color(2)), 2);
    assert_eq!(occ.count(Color(3)), 1);
    assert_eq!(occ.occupant(Color(3)), Some(vid(3)));
    assert_eq!(occ.count(Color(1)), 0);
    let occ = g.down_occupancy_scan(vid(4));
    for c in 1..=6 {
        assert_eq!(occ.count(Color(c)), 0);
    }
}

#[derive(Clone, Debug)]
enum Op {
    Toggle(u32, u32),
    Move(u32, i32),
    Paint(u32, u32),
}

fn op_strategy(n: u32, top: i32, delta: u32) -> impl Strategy<Value = Op> {
    prop_oneof![
        3 => (0..n, 0..n).prop_map(|(a, b)| Op::Toggle(a, b)),
        2 => (0..n, -1..=top).prop_map(|(a, l)| Op::Move(a, l)),
        1 => (0..n, 1..=delta + 1).prop_map(|(a, c)| Op::Paint(a, c)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Random structural edits keep every view consistent and `phi` equal to
    /// a brute-force count over the raw edge set.
    #[test]
    fn views_match_raw_edges(ops in prop::collection::vec(op_strategy(20, 2, 8), 1..200)) {
        let n = 20;
        let delta = 8;
        let mut g = LevelGraph::new(n, delta);
        let mut edges = BTreeSet::new();
        for op in ops {
            match op {
                Op::Toggle(a, b) if a != b => {
                    let key = (a.min(b), a.max(b));
                    if edges.remove(&key) {
                        g.detach_edge_views(vid(a), vid(b));
                    } else if g.vertex(vid(a)).degree() < delta as usize
                        && g.vertex(vid(b)).degree() < delta as usize
                    {
                        g.attach_edge_views(vid(a), vid(b));
                        edges.insert(key);
                    }
                }
                Op::Toggle(..) => {}
                Op::Move(a, l) => {
                    g.move_vertex_level(vid(a), Level(l));
                }
                Op::Paint(a, c) => {
                    // recoloring requires the up-neighbors' books to follow
                    let old = g.color(vid(a));
                    g.set_color(vid(a), Color(c));
                    let down: Vec<_> = g.vertex(vid(a)).down().to_vec();
                    for w in down {
                        g.adjust_up_color(w, old, -1);
                        g.adjust_up_color(w, Color(c), 1);
                    }
                    // same-level neighbors count a as an up-neighbor too
                    let same: Vec<_> = g.vertex(vid(a)).up_bucket(g.level(vid(a))).to_vec();
                    for w in same {
                        g.adjust_up_color(w, old, -1);
                        g.adjust_up_color(w, Color(c), 1);
                    }
                }
            }
            let report = g.audit_structures();
            prop_assert!(report.is_empty(), "{:?}", report);
        }
        prop_assert_eq!(g.edge_count(), edges.len());
        let listed: BTreeSet<_> = g.edges().map(|(a, b)| (a.0, b.0)).collect();
        prop_assert_eq!(&listed, &edges);
        for v in 0..n as u32 {
            for l in -1..=g.top_level().0 + 1 {
                prop_assert_eq!(g.phi(vid(v), Level(l)), brute_phi(&g, &edges, v, Level(l)));
            }
        }
    }
}
