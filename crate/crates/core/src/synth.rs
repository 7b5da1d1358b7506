//! Seeded random scenarios, built by generate-then-validate.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rootsys::{CartanType, RootSystem};
use crate::scenario::{format_rational, Scenario, ScenarioDoc};
use crate::sigma_set::OrbitKind;

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub max_rank: usize,
    pub primes: Vec<u32>,
    pub max_base_degree: u32,
    /// Largest allowed ambient field `GF(q^N)`.
    pub max_ambient: u64,
    pub max_attempts: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            max_rank: 3,
            primes: vec![3, 5, 7],
            max_base_degree: 2,
            max_ambient: 1 << 14,
            max_attempts: 10_000,
        }
    }
}

impl SynthConfig {
    /// Scenarios small enough to enumerate every torus point.
    pub fn enumerable() -> SynthConfig {
        SynthConfig {
            max_ambient: 81,
            ..SynthConfig::default()
        }
    }
}

const TYPES: &[&[CartanType]] = &[
    &[CartanType::A(1)],
    &[CartanType::A(2)],
    &[CartanType::C(2)],
    &[CartanType::G2],
    &[CartanType::A(1), CartanType::A(1)],
    &[CartanType::A(3)],
    &[CartanType::B(3)],
    &[CartanType::C(3)],
];

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn perm_pow(a: &[usize], k: u64) -> Vec<usize> {
    let mut out: Vec<usize> = (0..a.len()).collect();
    for _ in 0..k {
        out = compose(a, &out);
    }
    out
}

fn perm_order(a: &[usize]) -> u64 {
    let id: Vec<usize> = (0..a.len()).collect();
    let mut cur = a.to_vec();
    let mut k = 1;
    while cur != id {
        cur = compose(a, &cur);
        k += 1;
    }
    k
}

/// One random valid scenario; deterministic in `seed`.
pub fn synth_scenario(seed: u64, cfg: &SynthConfig) -> Option<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cfg.max_attempts {
        if let Some(sc) = attempt(&mut rng, cfg) {
            return Some(sc.with_name(&format!("synth-{seed}")));
        }
    }
    None
}

pub fn synth_batch(seed: u64, count: usize, cfg: &SynthConfig) -> Vec<Scenario> {
    (0..count as u64)
        .filter_map(|i| synth_scenario(seed.wrapping_mul(1_000_003).wrapping_add(i), cfg))
        .collect()
}

fn attempt(rng: &mut ChaCha8Rng, cfg: &SynthConfig) -> Option<Scenario> {
    let types: Vec<&[CartanType]> = TYPES
        .iter()
        .copied()
        .filter(|t| t.iter().map(|c| c.rank()).sum::<usize>() <= cfg.max_rank)
        .collect();
    let rs = RootSystem::of_types(types.choose(rng)?);
    let n = rs.rank();
    let keep: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.35)).collect();
    if keep.iter().all(|&k| k) {
        return None;
    }
    let levi: Vec<bool> = rs
        .roots()
        .iter()
        .map(|r| r.iter().enumerate().all(|(i, &x)| x == 0 || keep[i]))
        .collect();
    let auts: Vec<Vec<usize>> = rs
        .automorphisms()
        .ok()?
        .into_iter()
        .filter(|a| (0..rs.len()).all(|i| levi[a[i]] == levi[i]))
        .collect();
    let p = *cfg.primes.choose(rng)?;
    let m = rng.gen_range(1..=cfg.max_base_degree);
    let q = (p as u64).pow(m);
    let tame: Vec<&Vec<usize>> = auts
        .iter()
        .filter(|a| !perm_order(a).is_multiple_of(p as u64))
        .collect();
    let tau = if rng.gen_bool(0.25) {
        (0..rs.len()).collect()
    } else {
        (*tame.choose(rng)?).clone()
    };
    let tq = perm_pow(&tau, q % perm_order(&tau));
    let frobs: Vec<&Vec<usize>> = auts
        .iter()
        .filter(|f| compose(&compose(f, &tau), &inverse(f)) == tq)
        .collect();
    let frob = if rng.gen_bool(0.2) {
        (0..rs.len()).collect()
    } else {
        (*frobs.choose(rng)?).clone()
    };
    let id: Vec<usize> = (0..rs.len()).collect();
    let mut doc = ScenarioDoc {
        name: None,
        p,
        base_degree: m,
        roots: rs.roots().to_vec(),
        levi: (0..rs.len()).filter(|&i| levi[i]).collect(),
        gamma_generators: vec![frob.clone()],
        inertia_generators: if tau == id { vec![] } else { vec![tau] },
        frobenius: Some(0),
        restriction: None,
        lengths: None,
        depth_r: "1".into(),
        offsets: BTreeMap::new(),
        toral_invariants: BTreeMap::new(),
        a_residues: BTreeMap::new(),
    };
    let skel = Scenario::structure(&doc).ok()?;
    if skel.ambient().order() as u64 > cfg.max_ambient {
        return None;
    }
    let big_e = skel
        .gm_roots()
        .iter()
        .fold(1usize, |acc, &a| acc.lcm(&skel.e(a))) as i64;
    let r = Rational64::new(rng.gen_range(1..=2 * big_e), big_e);
    let s = r / 2;
    doc.depth_r = format_rational(r);
    let mut done = vec![false; skel.num_roots()];
    for rep in skel.gamma_orbit_reps() {
        if done[rep] {
            continue;
        }
        for b in skel.root_set().gamma_orbit(rep) {
            done[b] = true;
            done[skel.neg(b)] = true;
        }
        let e = skel.e(rep) as i64;
        let t = match skel.kind(rep) {
            OrbitKind::SymmetricRamified => {
                if rng.gen_bool(0.5) {
                    doc.toral_invariants.insert(rep, -1);
                }
                continue;
            }
            OrbitKind::SymmetricUnramified => {
                *[Rational64::from_integer(0), Rational64::new(1, 2 * e), s].choose(rng)?
            }
            OrbitKind::Asymmetric => *[
                Rational64::from_integer(0),
                s,
                Rational64::new(1, 2 * e),
                Rational64::new(rng.gen_range(0..8 * big_e), 8 * big_e * e),
            ]
            .choose(rng)?,
        };
        doc.offsets.insert(rep, format_rational(t));
    }
    Scenario::load(&doc).ok()
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let cfg = SynthConfig::default();
        let a = synth_scenario(11, &cfg).unwrap().to_doc();
        let b = synth_scenario(11, &cfg).unwrap().to_doc();
        assert_eq!(a, b);
    }

    #[test]
    fn enumerable_fields_are_small() {
        for sc in synth_batch(3, 20, &SynthConfig::enumerable()) {
            assert!(sc.ambient().order() <= 81);
        }
    }
}
