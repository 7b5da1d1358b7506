//! One line per acceptance criterion; exits nonzero if any fails.

use std::time::Instant;

use tamesign::checks::{self, Budget, CheckRecord};
use tamesign::presets::{all_presets, preset_doc};
use tamesign::scenario::{Invariant, ScenarioError};
use tamesign::synth::{synth_batch, SynthConfig};
use tamesign::Scenario;

struct Outcome {
    ok: bool,
    note: String,
}

fn from_records(recs: &[CheckRecord]) -> Outcome {
    let ok = recs.iter().all(|r| r.passed() && r.trials > 0);
    let note = recs
        .iter()
        .map(|r| {
            let mut s = format!("{} {}/{}", r.check, r.trials - r.failures, r.trials);
            if r.skipped > 0 {
                s += &format!(" (skipped {})", r.skipped);
            }
            if let Some(f) = &r.first_failure {
                s += &format!(" first failure: {}", f.detail);
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { ok, note }
}

fn pick(recs: &[CheckRecord], names: &[&str]) -> Vec<CheckRecord> {
    recs.iter()
        .filter(|r| names.contains(&r.check))
        .cloned()
        .collect::<Vec<_>>()
}

fn validation() -> Outcome {
    let mut cases = Vec::new();
    let mut d = preset_doc("pgl2-ramified").unwrap();
    d.depth_r = "1".into();
    cases.push((
        d,
        Invariant::RootDepthParity,
        "invariant root-depth-parity violated (e_α·r is an odd integer when α is ramified symmetric): root [-1]",
    ));
    let mut d = preset_doc("pgsp4-siegel").unwrap();
    d.depth_r = "1".into();
    cases.push((
        d,
        Invariant::WeightDepthParity,
        "invariant weight-depth-parity violated (e_{α0}·r is an odd integer when α0 is ramified symmetric): root [-2, -1]",
    ));
    let mut d = preset_doc("pgl2-ramified").unwrap();
    d.offsets.insert(1, "1/4".into());
    cases.push((
        d,
        Invariant::RamifiedJumpAtZero,
        "invariant ramified-jump-at-zero violated (0 lies in ord(α) for ramified symmetric α): root [-1]",
    ));
    let total = cases.len();
    let mut bad = Vec::new();
    for (doc, inv, msg) in cases {
        match Scenario::load(&doc) {
            Err(e @ ScenarioError::Validation { invariant, .. })
                if invariant == inv && e.to_string() == msg => {}
            other => bad.push(format!("{inv}: got {:?}", other.err())),
        }
    }
    Outcome {
        ok: bad.is_empty(),
        note: format!(
            "{}/{total} rejected with the named invariant {}",
            total - bad.len(),
            bad.join("; ")
        ),
    }
}

fn main() {
    let presets = all_presets();
    let synth = synth_batch(11, 1000, &SynthConfig::default());
    let small = synth_batch(23, 200, &SynthConfig::enumerable());
    let mut failed = 0;
    let mut line = |n: u32, title: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let status = if o.ok { "PASS" } else { "FAIL" };
        if !o.ok {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {status} [{:.1}s] {title}: {}",
            t.elapsed().as_secs_f64(),
            o.note
        );
    };

    let full = Budget {
        seed: 1,
        trials: 0,
        points: 500,
        pairs: 6561,
    };
    let main_recs = checks::main_theorem_suite("presets", &presets, &full);
    line(1, "ε_x = ε♯·ε♭·ε_f on presets", &mut || {
        from_records(&pick(&main_recs, &["eps-x-closed-form"]))
    });
    line(2, "Φ-set repacking on synthetic scenarios", &mut || {
        let mut o = from_records(&checks::repack_suite("synth-1000", &synth));
        o.ok &= synth.len() == 1000;
        o.note = format!("{} scenarios; {}", synth.len(), o.note);
        o
    });
    line(3, "hypercocycle formula", &mut || {
        let b = Budget {
            seed: 3,
            trials: 2000,
            points: 0,
            pairs: 0,
        };
        from_records(&checks::hypercoh_suite(
            "presets",
            &presets,
            &Budget { points: 500, ..b },
        ))
    });
    line(4, "graded spinor norms", &mut || {
        let b = Budget {
            seed: 4,
            trials: 2000,
            points: 0,
            pairs: 0,
        };
        let recs = checks::spinor_suite("presets", &[], &b);
        from_records(&recs[..3])
    });
    line(5, "piece formulas against oracles on presets", &mut || {
        let b = Budget {
            seed: 5,
            trials: 0,
            points: 500,
            pairs: 0,
        };
        let sp = checks::spinor_suite("presets", &presets, &b);
        let mut recs = pick(&main_recs, &["esr-formula-vs-oracle"]);
        recs.extend(pick(&sp, &["piece-formula-vs-oracle"]));
        from_records(&recs)
    });
    line(6, "χ″/χ′ ratio and Δ_II comparison", &mut || {
        let ram: Vec<Scenario> = presets
            .iter()
            .chain(small.iter())
            .filter(|sc| {
                sc.gamma_orbit_reps()
                    .iter()
                    .any(|&a| sc.kind(a) == tamesign::OrbitKind::SymmetricRamified)
            })
            .cloned()
            .collect();
        let b = Budget {
            seed: 6,
            trials: 0,
            points: 500,
            pairs: 0,
        };
        let recs = checks::chidata_suite("ramified-presets+synth", &ram, &b);
        from_records(&pick(
            &recs,
            &["ratio-sweep", "ratio-scenarios", "delta-comparison"],
        ))
    });
    line(7, "Gauss sums for q ≤ 121", &mut || {
        let b = Budget {
            seed: 7,
            trials: 0,
            points: 0,
            pairs: 0,
        };
        from_records(&pick(
            &checks::chidata_suite("none", &[], &b),
            &["gauss-sums"],
        ))
    });
    line(8, "characters are homomorphisms", &mut || {
        from_records(&pick(&main_recs, &["multiplicative"]))
    });
    line(9, "δ reciprocity", &mut || {
        let mut pool = presets.clone();
        pool.extend(small.iter().cloned());
        let b = Budget {
            seed: 9,
            trials: 200,
            points: 60,
            pairs: 0,
        };
        from_records(&[checks::reciprocity_check("presets+synth", &pool, &b)])
    });
    line(
        10,
        "validation names the violated invariant",
        &mut validation,
    );

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
