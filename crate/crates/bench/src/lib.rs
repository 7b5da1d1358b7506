//! Fixtures for the kernel benchmarks.

use tamesign::presets::preset;
use tamesign::torus::sample_points;
use tamesign::{Scenario, TorusPoint};

/// A preset with up to `n` of its torus points.
pub fn preset_points(name: &str, n: usize) -> (Scenario, Vec<TorusPoint>) {
    let sc = preset(name).expect("known preset");
    let mut pts = sample_points(&sc, n, 1);
    pts.truncate(n);
    (sc, pts)
}
