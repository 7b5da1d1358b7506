//! Property suites shared by the command line and the acceptance run.
//!
//! Each check returns a [`CheckRecord`]; the first failure carries enough to replay it.

use std::collections::BTreeMap;

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chidata::{
    self, approx_eq, default_ratio_sweep, delta_ii, gauss_sum, hasse_davenport, ChiVariant, TOL,
};
use crate::epschar::{self, build_phi, eps_named, Mode, Named, PhiKind};
use crate::gf::FieldDesc;
use crate::hypercoh::{
    default_positive, eval_direct, eval_formula, from_sigma_set, HyperCocycle, RandomContext,
};
use crate::linalg::Matrix;
use crate::quadspace::{random_graded, QuadError, QuadSpace};
use crate::scenario::{Scenario, ScenarioDoc};
use crate::sigma_set::OrbitKind;
use crate::torus::{sample_points, TorusPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hypercoh,
    Spinor,
    Repack,
    MainTheorem,
    Chidata,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Hypercoh,
        Suite::Spinor,
        Suite::Repack,
        Suite::MainTheorem,
        Suite::Chidata,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hypercoh => "hypercoh",
            Suite::Spinor => "spinor",
            Suite::Repack => "repack",
            Suite::MainTheorem => "main-theorem",
            Suite::Chidata => "chidata",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// Enough to rerun one failing trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub detail: String,
}

impl Failure {
    pub fn at(sc: &Scenario, g: Option<&TorusPoint>, detail: impl Into<String>) -> Failure {
        Failure {
            scenario: Some(sc.to_doc()),
            gamma: g.map(|g| g.spec()),
            seed: None,
            detail: detail.into(),
        }
    }

    pub fn seeded(seed: u64, detail: impl Into<String>) -> Failure {
        Failure {
            scenario: None,
            gamma: None,
            seed: Some(seed),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub check: &'static str,
    pub law: &'static str,
    pub scenario: String,
    pub trials: u64,
    pub skipped: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Failure>,
}

impl CheckRecord {
    pub fn new(
        suite: Suite,
        check: &'static str,
        law: &'static str,
        scenario: &str,
    ) -> CheckRecord {
        CheckRecord {
            suite,
            check,
            law,
            scenario: scenario.to_string(),
            trials: 0,
            skipped: 0,
            failures: 0,
            first_failure: None,
        }
    }

    pub fn record(&mut self, ok: bool, fail: impl FnOnce() -> Failure) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(fail());
            }
        }
    }

    /// Records an `Err` as a failure carrying its message.
    pub fn record_result<E: std::fmt::Display>(
        &mut self,
        r: Result<bool, E>,
        fail: impl FnOnce(String) -> Failure,
    ) {
        match r {
            Ok(ok) => self.record(ok, || fail("values differ".into())),
            Err(e) => self.record(false, || fail(e.to_string())),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// How hard to push the randomized checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub seed: u64,
    /// Random contexts, graded spaces, or (scenario, λ) pairs.
    pub trials: usize,
    /// Cap on torus points per scenario.
    pub points: usize,
    /// Cap on point pairs per scenario for multiplicativity.
    pub pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            seed: 1,
            trials: 200,
            points: 200,
            pairs: 500,
        }
    }
}

/// Points for one scenario: everything when enumerable, a seeded sample otherwise, capped.
pub fn points_for(sc: &Scenario, b: &Budget) -> Vec<TorusPoint> {
    let mut pts = sample_points(sc, b.points, b.seed);
    if pts.len() > b.points {
        let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
        pts.shuffle(&mut rng);
        pts.truncate(b.points);
        pts.insert(0, TorusPoint::identity(sc));
    }
    pts
}

fn same<E>(a: Result<i8, E>, b: Result<i8, E>) -> Result<bool, E> {
    Ok(a? == b?)
}

pub fn hypercoh_suite(label: &str, scenarios: &[Scenario], b: &Budget) -> Vec<CheckRecord> {
    let s = Suite::Hypercoh;
    let mut formula = CheckRecord::new(
        s,
        "formula-vs-direct",
        "closed hypercocycle evaluation equals the square-root construction",
        "random-contexts",
    );
    let mut positive = CheckRecord::new(
        s,
        "positive-half-independence",
        "the class does not depend on the chosen positive half",
        "random-contexts",
    );
    let mut cobound = CheckRecord::new(
        s,
        "coboundary-trivial",
        "coboundaries evaluate trivially and shift nothing",
        "random-contexts",
    );
    for t in 0..b.trials as u64 {
        let seed = b.seed.wrapping_mul(7919).wrapping_add(t);
        let rc = RandomContext::generate(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pos = default_positive(&rc.sigma);
        let hc = match from_sigma_set(&rc.sigma, &pos, &rc.chars, &rc.ctx) {
            Ok(hc) => hc,
            Err(e) => {
                formula.record(false, || Failure::seeded(seed, e.to_string()));
                continue;
            }
        };
        let mut flipped = pos.clone();
        for i in flipped.iter_mut() {
            if rng.gen_bool(0.5) {
                *i = rc.sigma.neg(*i);
            }
        }
        let hc2 = from_sigma_set(&rc.sigma, &flipped, &rc.chars, &rc.ctx);
        let chi: Vec<i64> = (0..rc.ctx.lattice.rank())
            .map(|_| rng.gen_range(-3..=3))
            .collect();
        let cb = HyperCocycle::coboundary(&rc.ctx, &chi);
        let shifted = hc.add(&cb);
        for _ in 0..5 {
            let g = rc.ctx.random_point(&mut rng);
            let d = eval_direct(&hc, &rc.ctx, &g);
            let r = (|| {
                Ok::<bool, String>(
                    d.clone().map_err(|e| e.to_string())?
                        == eval_formula(&rc.sigma, &rc.chars, &rc.ctx, &g)
                            .map_err(|e| e.to_string())?,
                )
            })();
            formula.record_result(r, |m| Failure::seeded(seed, m));
            let r = (|| {
                Ok::<bool, String>(
                    d.clone().map_err(|e| e.to_string())?
                        == eval_direct(hc2.as_ref().map_err(|e| e.to_string())?, &rc.ctx, &g)
                            .map_err(|e| e.to_string())?,
                )
            })();
            positive.record_result(r, |m| Failure::seeded(seed, m));
            let r = (|| {
                Ok::<bool, String>(
                    eval_direct(&cb, &rc.ctx, &g)
                        .map_err(|e| e.to_string())?
                        .is_trivial()
                        && eval_direct(&shifted, &rc.ctx, &g).map_err(|e| e.to_string())?
                            == d.clone().map_err(|e| e.to_string())?,
                )
            })();
            cobound.record_result(r, |m| Failure::seeded(seed, m));
        }
    }
    let mut piece = CheckRecord::new(
        s,
        "piece-formula-vs-oracle",
        "the hypercohomological piece agrees in both modes",
        label,
    );
    for sc in scenarios {
        for g in points_for(sc, b) {
            let r = same(
                epschar::piece_hyper(sc, &g, Mode::Formula),
                epschar::piece_hyper(sc, &g, Mode::Oracle),
            );
            piece.record_result(r, |m| Failure::at(sc, Some(&g), m));
        }
    }
    vec![formula, positive, cobound, piece]
}

/// Every isometry of `diag(d)` over `GF(3)^2`.
pub fn o2_f3(diag: [i64; 2]) -> (QuadSpace, Vec<Matrix>) {
    let f = FieldDesc::new(3, 1).expect("GF(3)");
    let v = QuadSpace::diagonal(f, f, &[f.from_int(diag[0]), f.from_int(diag[1])])
        .expect("nondegenerate");
    let mut out = Vec::new();
    for code in 0..81u32 {
        let m = Matrix::from_fn(f, 2, 2, |i, j| {
            f.from_int((code / 3u32.pow((2 * i + j) as u32) % 3) as i64)
        });
        if v.is_isometry(&m) {
            out.push(m);
        }
    }
    (v, out)
}

pub fn spinor_suite(label: &str, scenarios: &[Scenario], b: &Budget) -> Vec<CheckRecord> {
    let s = Suite::Spinor;
    let mut formula = CheckRecord::new(
        s,
        "formula-vs-reflections",
        "graded spinor formula equals the reflection factorization",
        "random-graded",
    );
    let mut refl = CheckRecord::new(
        s,
        "reflection-norm",
        "a reflection has spinor norm φ(v)",
        "random-graded",
    );
    for t in 0..b.trials as u64 {
        let seed = b.seed.wrapping_mul(104_729).wrapping_add(t);
        let (gq, lambdas) = random_graded(seed, 8);
        let r =
            (|| Ok::<bool, QuadError>(gq.spinor_formula(&lambdas)? == gq.spinor_norm(&lambdas)?))();
        formula.record_result(r, |m| Failure::seeded(seed, m));
        let space = gq.space();
        let amb = space.ambient();
        let elems = amb
            .subfield_elements(space.base().degree())
            .expect("base divides ambient");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<_> = (0..space.dim())
            .map(|_| *elems.choose(&mut rng).expect("nonempty"))
            .collect();
        if space.phi(&v).is_zero() {
            refl.skipped += 1;
            continue;
        }
        let r = (|| -> Result<bool, QuadError> {
            let m = space.reflection(&v)?;
            // φ(v) may sit outside the base field; only its class there matters
            Ok(space.spinor_norm(&m)? == space.phi(&v).sgn_in(&space.base())?)
        })();
        refl.record_result(r, |m| Failure::seeded(seed, m));
    }
    let mut hom = CheckRecord::new(
        s,
        "homomorphism-o2-f3",
        "the spinor norm is multiplicative on O(2, GF(3))",
        "o2-f3",
    );
    for diag in [[1, 1], [1, 2]] {
        let (v, group) = o2_f3(diag);
        for x in &group {
            for y in &group {
                let r = (|| -> Result<bool, QuadError> {
                    Ok(v.spinor_norm(&x.mul(y))? == v.spinor_norm(x)?.mul(&v.spinor_norm(y)?)?)
                })();
                hom.record_result(r, |m| {
                    Failure::seeded(diag[1] as u64, format!("{x:?} {y:?}: {m}"))
                });
            }
        }
    }
    let mut piece = CheckRecord::new(
        s,
        "piece-formula-vs-oracle",
        "the spinor piece agrees in both modes",
        label,
    );
    for sc in scenarios {
        for g in points_for(sc, b) {
            match epschar::piece_spinor(sc, &g, Mode::Oracle) {
                Err(epschar::EpsError::Quad(QuadError::SearchSpaceTooLarge(_))) => {
                    piece.skipped += 1
                }
                o => {
                    let r = same(epschar::piece_spinor(sc, &g, Mode::Formula), o);
                    piece.record_result(r, |m| Failure::at(sc, Some(&g), m));
                }
            }
        }
    }
    vec![formula, refl, hom, piece]
}

pub fn repack_suite(label: &str, scenarios: &[Scenario]) -> Vec<CheckRecord> {
    let s = Suite::Repack;
    let mut eq = CheckRecord::new(
        s,
        "symmetric-difference",
        "Φ♯ △ Φ♭0 is the union of the three ramified Φ-sets",
        label,
    );
    let mut disj = CheckRecord::new(
        s,
        "pairwise-disjoint",
        "the three ramified Φ-sets are pairwise disjoint",
        label,
    );
    let mut stable = CheckRecord::new(s, "sigma-stable", "every Φ-set is Σ-stable", label);
    for sc in scenarios {
        let phi = |k| build_phi(sc, k);
        let (a, b2, c) = (
            phi(PhiKind::ZeroSymRam),
            phi(PhiKind::SSymRam),
            phi(PhiKind::ZeroSSymRam),
        );
        let lhs = phi(PhiKind::Sharp).sym_diff(&phi(PhiKind::Flat0));
        let rhs = a.union(&b2).union(&c);
        eq.record(lhs == rhs, || {
            Failure::at(sc, None, format!("{lhs:?} vs {rhs:?}"))
        });
        disj.record(
            a.is_disjoint(&b2) && a.is_disjoint(&c) && b2.is_disjoint(&c),
            || Failure::at(sc, None, format!("{a:?} {b2:?} {c:?}")),
        );
        stable.record(
            PhiKind::ALL.iter().all(|&k| phi(k).is_sigma_stable(sc)),
            || Failure::at(sc, None, "unstable"),
        );
    }
    vec![eq, disj, stable]
}

/// Characters checked for multiplicativity.
fn all_values(sc: &Scenario, g: &TorusPoint) -> Result<Vec<i8>, epschar::EpsError> {
    let mut v = Vec::new();
    for n in Named::ALL {
        v.push(eps_named(sc, n, g)?);
    }
    v.push(epschar::piece_esr(sc, g, Mode::Formula)?);
    v.push(epschar::piece_hyper(sc, g, Mode::Formula)?);
    v.push(epschar::piece_spinor(sc, g, Mode::Formula)?);
    v.push(epschar::eps_x(sc, g)?);
    Ok(v)
}

pub fn main_theorem_suite(label: &str, scenarios: &[Scenario], b: &Budget) -> Vec<CheckRecord> {
    let s = Suite::MainTheorem;
    let mut main = CheckRecord::new(s, "eps-x-closed-form", "ε_x = ε♯·ε♭·ε_f", label);
    let mut esr = CheckRecord::new(
        s,
        "esr-formula-vs-oracle",
        "the ramified determinant piece agrees in both modes",
        label,
    );
    let mut mult = CheckRecord::new(
        s,
        "multiplicative",
        "named characters, pieces and ε_x are ±1-valued homomorphisms",
        label,
    );
    for sc in scenarios {
        let pts = points_for(sc, b);
        for g in &pts {
            main.record_result(
                same(epschar::eps_x(sc, g), epschar::eps_closed(sc, g)),
                |m| Failure::at(sc, Some(g), m),
            );
            esr.record_result(
                same(
                    epschar::piece_esr(sc, g, Mode::Formula),
                    epschar::piece_esr(sc, g, Mode::Oracle),
                ),
                |m| Failure::at(sc, Some(g), m),
            );
        }
        let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
        let pairs: Vec<(usize, usize)> = if pts.len() * pts.len() <= b.pairs {
            (0..pts.len())
                .flat_map(|i| (0..pts.len()).map(move |j| (i, j)))
                .collect()
        } else {
            (0..b.pairs)
                .map(|_| (rng.gen_range(0..pts.len()), rng.gen_range(0..pts.len())))
                .collect()
        };
        let cache: Vec<_> = pts.iter().map(|g| all_values(sc, g)).collect();
        for (i, j) in pairs {
            let gh = pts[i].mul(&pts[j]);
            let r = (|| -> Result<bool, epschar::EpsError> {
                let (x, y) = (cache[i].clone()?, cache[j].clone()?);
                let z = all_values(sc, &gh)?;
                Ok(z.iter().all(|v| v.abs() == 1) && (0..z.len()).all(|k| z[k] == x[k] * y[k]))
            })();
            mult.record_result(r, |m| {
                Failure::at(
                    sc,
                    Some(&gh),
                    format!("{} · {}: {m}", pts[i].spec(), pts[j].spec()),
                )
            });
        }
    }
    vec![main, esr, mult]
}

/// Odd prime powers up to `qmax` as `(p, n)`.
pub fn odd_prime_powers(qmax: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for p in (3..=qmax).step_by(2) {
        if !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            continue;
        }
        let mut n = 1;
        let mut q = p;
        while q <= qmax {
            out.push((p, n));
            n += 1;
            q = match q.checked_mul(p) {
                Some(q) => q,
                None => break,
            };
        }
    }
    out.sort_by_key(|&(p, n)| p.pow(n));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussRow {
    pub q: u32,
    pub p: u32,
    pub n: u32,
    pub re: f64,
    pub im: f64,
    pub unit_modulus: bool,
    pub square_is_sign: bool,
    pub hasse_davenport: bool,
}

pub fn gauss_table(qmax: u32) -> Vec<GaussRow> {
    odd_prime_powers(qmax)
        .into_iter()
        .map(|(p, n)| {
            let k = FieldDesc::new(p, n).expect("odd prime power");
            let g = gauss_sum(&k);
            let m1 = k.from_int(-1).sgn().expect("unit").sign() as f64;
            let hd = (1..=n)
                .filter(|d| n % d == 0)
                .all(|d| hasse_davenport(&FieldDesc::new(p, d).expect("subfield"), &k));
            GaussRow {
                q: k.order(),
                p,
                n,
                re: clean(g.re),
                im: clean(g.im),
                unit_modulus: (g.norm() - 1.0).abs() < TOL,
                square_is_sign: approx_eq(g * g, num_complex::Complex64::new(m1, 0.0)),
                hasse_davenport: hd,
            }
        })
        .collect()
}

/// Rounds away float noise so reports are stable.
fn clean(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn chidata_suite(label: &str, scenarios: &[Scenario], b: &Budget) -> Vec<CheckRecord> {
    let s = Suite::Chidata;
    let mut gauss = CheckRecord::new(
        s,
        "gauss-sums",
        "|𝔊| = 1, 𝔊² = sgn(-1) and Hasse–Davenport for q ≤ 121",
        "fields",
    );
    for row in gauss_table(121) {
        gauss.record(
            row.unit_modulus && row.square_is_sign && row.hasse_davenport,
            || Failure::seeded(row.q as u64, format!("{row:?}")),
        );
    }
    let mut sweep = CheckRecord::new(
        s,
        "ratio-sweep",
        "χ″(ℓa)/χ′(ℓa) is the closed sign",
        "synthetic-sweep",
    );
    match default_ratio_sweep() {
        Ok(rows) => {
            for row in rows {
                sweep.record(row.ok, || {
                    Failure::seeded(row.q0 as u64, format!("{row:?}"))
                });
            }
        }
        Err(e) => sweep.record(false, || Failure::seeded(0, e.to_string())),
    }
    let mut ratio = CheckRecord::new(
        s,
        "ratio-scenarios",
        "χ″(ℓa)/χ′(ℓa) is the closed sign",
        label,
    );
    let mut delta = CheckRecord::new(
        s,
        "delta-comparison",
        "Δ_II[χ″] = Δ_II[χ′]·ε_f·ε♯·ε_x",
        label,
    );
    let mut zeta = CheckRecord::new(
        s,
        "zeta-two-ways",
        "ζ-data character equals its uniformizer evaluation",
        label,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    for sc in scenarios {
        for a in sc.gamma_orbit_reps() {
            if sc.kind(a) == OrbitKind::SymmetricRamified
                && sc.class0(a).kind == OrbitKind::SymmetricRamified
            {
                ratio.record_result(chidata::ratio_check(sc, a), |m| {
                    Failure::at(sc, None, format!("root {a}: {m}"))
                });
            }
        }
        let eps: BTreeMap<usize, i8> = sc
            .gamma_orbit_reps()
            .into_iter()
            .filter(|&a| sc.kind(a) == OrbitKind::SymmetricRamified)
            .map(|a| (a, if rng.gen_bool(0.5) { -1 } else { 1 }))
            .collect();
        for g in points_for(sc, b) {
            let d1 = match delta_ii(sc, ChiVariant::Prime, &g) {
                Err(chidata::ChiError::ResiduallySingular(_)) => {
                    delta.skipped += 1;
                    None
                }
                d => Some(d),
            };
            if let Some(d1) = d1 {
                let r = (|| -> Result<bool, String> {
                    let d1 = d1.map_err(|e| e.to_string())?;
                    let d2 =
                        delta_ii(sc, ChiVariant::DoublePrime, &g).map_err(|e| e.to_string())?;
                    let mut sign = 1;
                    for n in [Named::F, Named::SharpX] {
                        sign *= eps_named(sc, n, &g).map_err(|e| e.to_string())?;
                    }
                    sign *= epschar::eps_x(sc, &g).map_err(|e| e.to_string())?;
                    Ok(approx_eq(d2, d1 * sign as f64))
                })();
                delta.record_result(r, |m| Failure::at(sc, Some(&g), m));
            }
            let r = (|| -> Result<bool, chidata::ChiError> {
                Ok(chidata::zeta_character(sc, &eps, &g)?
                    == chidata::zeta_by_uniformizers(sc, &eps, &g)?)
            })();
            zeta.record_result(r, |m| Failure::at(sc, Some(&g), m));
        }
    }
    vec![gauss, sweep, ratio, delta, zeta]
}

/// A random Galois-invariant coweight with small denominators.
pub fn random_invariant_coweight<R: Rng>(sc: &Scenario, rng: &mut R) -> Vec<Rational64> {
    let mu: Vec<Rational64> = (0..sc.rank())
        .map(|_| Rational64::new(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
        .collect();
    sc.average_coweight(&mu)
}

/// `ε♯,x·δ^x_y = ε♯,y·δ^y_x` with `y = x + λ`.
pub fn reciprocity_check(label: &str, scenarios: &[Scenario], b: &Budget) -> CheckRecord {
    let mut rec = CheckRecord::new(
        Suite::MainTheorem,
        "reciprocity",
        "ε♯,x·δ^x_y = ε♯,y·δ^y_x",
        label,
    );
    if scenarios.is_empty() {
        return rec;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed ^ 0x5eed);
    for t in 0..b.trials {
        let sc = &scenarios[t % scenarios.len()];
        let lambda = random_invariant_coweight(sc, &mut rng);
        let y = match sc.shifted(&lambda) {
            Ok(y) => y,
            Err(e) => {
                rec.record(false, || {
                    Failure::at(sc, None, format!("shift by {lambda:?}: {e}"))
                });
                continue;
            }
        };
        let minus: Vec<Rational64> = lambda.iter().map(|l| -l).collect();
        let mut local = Budget {
            points: b.points.min(60),
            ..*b
        };
        local.seed = b.seed.wrapping_add(t as u64);
        for g in points_for(sc, &local) {
            let r = (|| -> Result<bool, epschar::EpsError> {
                let lhs = eps_named(sc, Named::SharpX, &g)? * epschar::delta_xy(sc, &lambda, &g)?;
                let rhs = eps_named(&y, Named::SharpX, &g)? * epschar::delta_xy(&y, &minus, &g)?;
                Ok(lhs == rhs)
            })();
            rec.record_result(r, |m| {
                Failure::at(sc, Some(&g), format!("λ = {lambda:?}: {m}"))
            });
        }
    }
    rec
}

pub fn run_suite(
    suite: Suite,
    label: &str,
    scenarios: &[Scenario],
    b: &Budget,
) -> Vec<CheckRecord> {
    match suite {
        Suite::Hypercoh => hypercoh_suite(label, scenarios, b),
        Suite::Spinor => spinor_suite(label, scenarios, b),
        Suite::Repack => repack_suite(label, scenarios),
        Suite::MainTheorem => {
            let mut v = main_theorem_suite(label, scenarios, b);
            v.push(reciprocity_check(label, scenarios, b));
            v
        }
        Suite::Chidata => chidata_suite(label, scenarios, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::all_presets;

    #[test]
    fn prime_powers() {
        let qs: Vec<u32> = odd_prime_powers(30)
            .iter()
            .map(|&(p, n)| p.pow(n))
            .collect();
        assert_eq!(qs, vec![3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29]);
    }

    #[test]
    fn o2_f3_orders() {
        // split and anisotropic planes: dihedral groups of order 2(q∓1)
        assert_eq!(o2_f3([1, 2]).1.len(), 4);
        assert_eq!(o2_f3([1, 1]).1.len(), 8);
    }

    #[test]
    fn small_budget_passes() {
        let b = Budget {
            seed: 3,
            trials: 5,
            points: 10,
            pairs: 20,
        };
        let sc = all_presets();
        for suite in Suite::ALL {
            for rec in run_suite(suite, "presets", &sc, &b) {
                assert!(rec.passed(), "{rec:?}");
                assert!(rec.trials > 0, "{rec:?}");
            }
        }
    }
}
