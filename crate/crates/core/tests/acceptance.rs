//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p dyncolor --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use dyncolor::instrument::{BOUND_INTERCEPT, BOUND_SLOPE};
use dyncolor::workload::{
    bench, emit_report, generate, run, AuditPolicy, ReportFormat, RunOptions, RunReport, StreamHeader, StreamModel,
    SweepCell,
};
use dyncolor::{Color, Engine, EngineConfig, NaiveState, PaletteSample};

const CHURN: StreamModel = StreamModel::Churn { p: 0.6 };

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn audited_run(model: StreamModel, n: usize, delta: u32, t: usize, seed: u64) -> RunReport {
    let events = generate(model, n, delta, t, seed).expect("feasible parameters");
    let opts = RunOptions { audit: AuditPolicy::Every(1000), model: Some(model.to_string()), ..RunOptions::new(seed) };
    run(&StreamHeader { n, delta }, &events, &opts).expect("generated streams are valid")
}

fn properness(suite: &[RunReport]) -> Verdict {
    let improper: u64 = suite.iter().map(|r| r.violations.improper).sum();
    let audit: u64 = suite.iter().map(|r| r.violations.audit).sum();
    let audits: u64 = suite.iter().map(|r| r.audits).sum();
    let all_audited = suite.iter().all(|r| r.audits == 200);
    verdict(
        improper == 0 && audit == 0 && all_audited,
        format!("{} runs, {audits} audits, {improper} monochromatic edges, {audit} discrepancies", suite.len()),
    )
}

fn invariant2(suite: &[RunReport], star: &[RunReport]) -> Verdict {
    let v: u64 = suite.iter().chain(star).map(|r| r.violations.invariant2).sum();
    let rand: u64 = suite.iter().chain(star).map(|r| r.totals.rand_colors).sum();
    let star_top = star.iter().map(|r| r.max_level).max().unwrap_or(-1);
    verdict(
        v == 0,
        format!("{v} violations over {rand} randomized recolors; star-stress reached level {star_top}"),
    )
}

fn palette_bound(suite: &[RunReport], star: &[RunReport]) -> Verdict {
    let v: u64 = suite.iter().chain(star).map(|r| r.violations.palette_bound).sum();
    verdict(v == 0, format!("{v} palettes below down_count/2 + 1"))
}

fn amortized_constancy() -> Verdict {
    let cells: Vec<_> = [300, 3000, 30_000]
        .into_iter()
        .map(|n| SweepCell { n, delta: 10, t: 200 * n, model: CHURN, seeds: (0..5).collect() })
        .collect();
    let table = bench(&cells, AuditPolicy::Off).expect("sweep runs");
    let means: Vec<f64> = table.cells.iter().map(|c| c.amortized_mean).collect();
    let max = means.iter().cloned().fold(0.0, f64::max);
    let min = means.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = max / min;
    let levels_ok = table.rows.iter().all(|r| r.max_level <= r.config.top_level);
    verdict(
        ratio <= 3.0 && levels_ok,
        format!("mean amortized units per n {means:?}, max/min = {ratio:.3}"),
    )
}

fn call_bounds(suite: &[RunReport], star: &[RunReport]) -> Verdict {
    let v: u64 = suite.iter().chain(star).map(|r| r.violations.call_bound).sum();
    let calls: u64 = suite.iter().map(|r| r.totals.updates + r.totals.recolors).sum();
    verdict(
        v == 0,
        format!("a={BOUND_SLOPE}, b={BOUND_INTERCEPT}: {v} of {calls} calls over budget in the criterion-1 suite"),
    )
}

fn level_cap(suite: &[RunReport], star: &[RunReport]) -> Verdict {
    let bad = suite.iter().chain(star).filter(|r| r.max_level > r.config.top_level).count();
    let highest = suite.iter().chain(star).map(|r| (r.max_level, r.config.top_level)).max().unwrap_or((-1, -1));
    verdict(bad == 0, format!("{bad} runs above L; highest (level, L) = {highest:?}"))
}

fn short_epochs(suite: &[RunReport]) -> Verdict {
    let mut failing = Vec::new();
    let mut checked = 0;
    let mut worst = 0.0f64;
    for r in suite {
        let mut ok = true;
        for l in r.levels.iter().filter(|l| l.completed >= 256) {
            checked += 1;
            worst = worst.max(l.short_fraction);
            ok &= l.short_fraction <= 0.25;
        }
        if !ok {
            failing.push(r.config.seed);
        }
    }
    verdict(
        failing.len() <= 1,
        format!("{checked} (seed, level) cells with ≥256 completed epochs, worst fraction {worst}, failing seeds {failing:?}"),
    )
}

fn oracle_equivalence() -> Verdict {
    let failures: Vec<String> = (0..10_000u64)
        .into_par_iter()
        .filter_map(|seed| {
            let n = 2 + (seed % 11) as usize;
            let delta = 1 + ((seed / 11) % 6) as u32;
            let t = 1 + ((seed * 7919) % 200) as usize;
            let model = match seed % 5 {
                0 => StreamModel::StarStress,
                1 => {
                    let max_edges = (n * (n - 1) / 2).min(n * delta as usize / 2);
                    StreamModel::SlidingWindow { w: 1 + (seed as usize / 5) % max_edges }
                }
                _ => StreamModel::Churn { p: 0.3 + 0.15 * (seed % 5) as f64 },
            };
            let events = match generate(model, n, delta, t, seed) {
                Ok(ev) => ev,
                Err(e) => return Some(format!("seed {seed}: {e}")),
            };
            let mut engine = Engine::preprocess(EngineConfig::new(n, delta, seed)).unwrap();
            let mut oracle = NaiveState::new(n, delta);
            for (i, &e) in events.iter().enumerate() {
                engine.apply_update(e).unwrap();
                oracle.naive_apply_update(e).unwrap();
                if let Err(m) = common::cross_check(&engine, &oracle) {
                    return Some(format!("seed {seed} event {i}: {m}"));
                }
            }
            None
        })
        .collect();
    verdict(
        failures.is_empty(),
        format!("10000 streams, n ≤ 12, Δ ≤ 6, t ≤ 200; {} failures {:?}", failures.len(), failures.first()),
    )
}

fn sampling_uniformity() -> Verdict {
    const DRAWS: u64 = 100_000;
    let mut worst = 0.0f64;
    let mut engine = Engine::preprocess(EngineConfig::new(2, 1, 12345)).unwrap();
    for k in [2usize, 5, 17] {
        let palette = PaletteSample { colors: (1..=k as u32).map(Color).collect(), occupant: vec![None; k] };
        let mut counts = vec![0u64; k];
        for _ in 0..DRAWS {
            counts[engine.sample_palette(&palette)] += 1;
        }
        let p = 1.0 / k as f64;
        let sd = (DRAWS as f64 * p * (1.0 - p)).sqrt();
        for &c in &counts {
            worst = worst.max((c as f64 - DRAWS as f64 * p).abs() / sd);
        }
    }
    verdict(worst <= 5.0, format!("k ∈ {{2, 5, 17}}, {DRAWS} draws each, worst deviation {worst:.2}σ"))
}

fn determinism() -> Verdict {
    let configs = [
        (CHURN, 1000, 20, 50_000, 1),
        (StreamModel::SlidingWindow { w: 1500 }, 600, 8, 40_000, 2),
        (StreamModel::StarStress, 2000, 500, 40_000, 3),
    ];
    let mut identical = 0;
    for (model, n, delta, t, seed) in configs {
        let outputs: Vec<(String, String)> = (0..3)
            .map(|_| {
                let r = audited_run(model, n, delta, t, seed);
                (emit_report(&r, ReportFormat::Json), emit_report(&r, ReportFormat::Csv))
            })
            .collect();
        if outputs.iter().all(|o| o == &outputs[0]) {
            identical += 1;
        }
    }
    verdict(identical == configs.len(), format!("{identical}/{} configurations byte-identical over 3 repeats", configs.len()))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let suite: Vec<RunReport> = (0..50u64).into_par_iter().map(|s| audited_run(CHURN, 1000, 20, 200_000, s)).collect();
    let star: Vec<RunReport> =
        (0..5u64).into_par_iter().map(|s| audited_run(StreamModel::StarStress, 2000, 500, 200_000, s)).collect();

    let results = [
        ("properness", properness(&suite)),
        ("palette and down-count invariant at recolor", invariant2(&suite, &star)),
        ("palette bound", palette_bound(&suite, &star)),
        ("amortized constancy", amortized_constancy()),
        ("per-call cost bounds", call_bounds(&suite, &star)),
        ("level cap", level_cap(&suite, &star)),
        ("short-epoch fraction", short_epochs(&suite)),
        ("oracle equivalence", oracle_equivalence()),
        ("sampling uniformity", sampling_uniformity()),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, v)) in results.iter().enumerate() {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}  {name}: {}", i + 1, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed in {:.1}s", results.len() - failed, results.len(), started.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
