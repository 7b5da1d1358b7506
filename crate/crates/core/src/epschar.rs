//! The sign characters of a twisted Levi, their three construction pieces, and oracles for each.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{FqElem, GfError};
use crate::hypercoh::{self, CharLattice, EvalContext, GroupPoint, HyperError, LVec};
use crate::quadspace::{Block, GradedQuadSpace, QuadError};
use crate::scenario::{Scenario, ScenarioError};
use crate::sigma_set::{GaloisFrame, OrbitKind, SigmaSet, Under};
use crate::torus::TorusPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpsError {
    #[error("root set is not stable under Galois and negation")]
    NotSigmaStable,
    #[error("coweight is not Galois invariant")]
    NotInvariant,
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A sign `±1`.
pub type CharValue = i8;

/// The named root sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiKind {
    Sharp,
    Flat0,
    ZeroSymRam,
    SSymRam,
    ZeroSSymRam,
}

impl PhiKind {
    pub const ALL: [PhiKind; 5] = [
        PhiKind::Sharp,
        PhiKind::Flat0,
        PhiKind::ZeroSymRam,
        PhiKind::SSymRam,
        PhiKind::ZeroSSymRam,
    ];
}

/// Named characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Named {
    SharpX,
    Flat0,
    Flat1,
    Flat2,
    F,
    Flat,
}

impl Named {
    pub const ALL: [Named; 6] = [
        Named::SharpX,
        Named::Flat0,
        Named::Flat1,
        Named::Flat2,
        Named::F,
        Named::Flat,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Formula,
    /// Oracle path: proof display, hypercocycle evaluation, or reflection products.
    Oracle,
}

/// A subset of `R(T,G/M)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhiSet(pub BTreeSet<usize>);

impl PhiSet {
    pub fn sym_diff(&self, other: &PhiSet) -> PhiSet {
        PhiSet(self.0.symmetric_difference(&other.0).copied().collect())
    }

    pub fn union(&self, other: &PhiSet) -> PhiSet {
        PhiSet(self.0.union(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &PhiSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.contains(&a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_sigma_stable(&self, sc: &Scenario) -> bool {
        self.0.iter().all(|&a| {
            !sc.is_levi(a)
                && self.contains(sc.neg(a))
                && sc
                    .root_set()
                    .gamma_orbit(a)
                    .iter()
                    .all(|b| self.contains(*b))
        })
    }
}

fn sgn(x: FqElem, sc: &Scenario, a: usize) -> Result<i8, EpsError> {
    Ok(x.sgn_in(&sc.k_field(a))?.sign())
}

fn ord(sc: &Scenario, a: usize, t: Rational64) -> bool {
    sc.ord_contains(a, t).expect("non-Levi root")
}

fn rel_e(sc: &Scenario, a: usize) -> usize {
    sc.rel_ramification(a).expect("non-Levi root")
}

fn weight_ram(sc: &Scenario, a: usize) -> bool {
    sc.class0(a).kind == OrbitKind::SymmetricRamified
}

fn is_minus_one(x: FqElem) -> bool {
    (-x).is_one() && !x.is_one()
}

pub fn build_phi(sc: &Scenario, which: PhiKind) -> PhiSet {
    let s = sc.s();
    let zero = Rational64::from_integer(0);
    PhiSet(
        sc.gm_roots()
            .iter()
            .copied()
            .filter(|&a| match which {
                PhiKind::Sharp => ord(sc, a, s),
                PhiKind::Flat0 => weight_ram(sc, a) && rel_e(sc, a) % 2 == 1,
                PhiKind::ZeroSymRam => weight_ram(sc, a) && ord(sc, a, zero),
                PhiKind::SSymRam => !weight_ram(sc, a) && ord(sc, a, s),
                PhiKind::ZeroSSymRam => {
                    weight_ram(sc, a)
                        && rel_e(sc, a) % 2 == 1
                        && !ord(sc, a, zero)
                        && !ord(sc, a, s)
                }
            })
            .collect(),
    )
}

/// Σ-orbit signs on asymmetric roots, norm-one signs on unramified symmetric roots.
pub fn eps_phi(sc: &Scenario, phi: &PhiSet, g: &TorusPoint) -> Result<CharValue, EpsError> {
    if !phi.is_sigma_stable(sc) {
        return Err(EpsError::NotSigmaStable);
    }
    let mut acc = 1;
    for a in sc.sigma_orbit_reps() {
        if !phi.contains(a) {
            continue;
        }
        acc *= match sc.kind(a) {
            OrbitKind::Asymmetric => sgn(g.value(a), sc, a)?,
            OrbitKind::SymmetricUnramified => g.value(a).sgn1(&sc.k_pm_field(a))?,
            OrbitKind::SymmetricRamified => 1,
        };
    }
    Ok(acc)
}

/// Ramified symmetric Γ-orbit representatives with `α(γ) = -1`.
fn ram_minus_one(sc: &Scenario, g: &TorusPoint) -> Vec<usize> {
    sc.gamma_orbit_reps()
        .into_iter()
        .filter(|&a| sc.kind(a) == OrbitKind::SymmetricRamified && is_minus_one(g.value(a)))
        .collect()
}

fn flat1_factor(sc: &Scenario, a: usize) -> Result<i8, EpsError> {
    let el = sc.e(a) as i64 * sc.ell_pprime(sc.dual_length(a)) as i64;
    let s = sgn(sc.ambient().from_int(el), sc, a)?;
    Ok(if sc.f(a).is_multiple_of(2) { -s } else { s })
}

fn flat2_factor(sc: &Scenario, a: usize) -> Result<i8, EpsError> {
    let m1 = sgn(-sc.ambient().one(), sc, a)?;
    Ok(if (rel_e(sc, a) - 1) / 2 % 2 == 1 {
        m1
    } else {
        1
    })
}

pub fn eps_named(sc: &Scenario, name: Named, g: &TorusPoint) -> Result<CharValue, EpsError> {
    let ram = ram_minus_one(sc, g);
    Ok(match name {
        Named::SharpX => eps_phi(sc, &build_phi(sc, PhiKind::Sharp), g)?,
        Named::Flat0 => eps_phi(sc, &build_phi(sc, PhiKind::Flat0), g)?,
        Named::F => ram.iter().map(|&a| sc.toral(a)).product(),
        Named::Flat1 => ram
            .iter()
            .map(|&a| flat1_factor(sc, a))
            .product::<Result<i8, _>>()?,
        Named::Flat2 => ram
            .iter()
            .map(|&a| flat2_factor(sc, a))
            .product::<Result<i8, _>>()?,
        Named::Flat => {
            eps_named(sc, Named::Flat0, g)?
                * eps_named(sc, Named::Flat1, g)?
                * eps_named(sc, Named::Flat2, g)?
        }
    })
}

/// Number of points of `ord_x(α)` in the open interval `(0, d/2)`.
fn count_below(sc: &Scenario, a: usize, d: Rational64) -> i64 {
    let e = sc.e(a) as i64;
    let t = sc.offset(a).expect("non-Levi root") * e;
    let hi = d * e / 2;
    // n with 0 < t + n < hi
    let lo_n = (-t).floor().to_integer() + 1;
    let hi_n = (hi - t).ceil().to_integer() - 1;
    (hi_n - lo_n + 1).max(0)
}

/// Determinant sign of the filtration quotients below `d/2` over ramified symmetric weights.
pub fn piece_esr(sc: &Scenario, g: &TorusPoint, mode: Mode) -> Result<CharValue, EpsError> {
    let zero = Rational64::from_integer(0);
    let mut acc = 1;
    match mode {
        Mode::Oracle => {
            for a in sc.gamma_orbit_reps() {
                if !weight_ram(sc, a) {
                    continue;
                }
                let d = Rational64::new(1, sc.class0(a).e as i64);
                if count_below(sc, a, d) % 2 == 1 {
                    acc *= sgn(g.value(a), sc, a)?;
                }
            }
        }
        Mode::Formula => {
            for a in sc.sigma_orbit_reps() {
                if !weight_ram(sc, a) {
                    continue;
                }
                let d = Rational64::new(1, sc.class0(a).e as i64);
                match sc.kind(a) {
                    OrbitKind::Asymmetric => {
                        if !ord(sc, a, zero) && !ord(sc, a, d / 2) && rel_e(sc, a) % 2 == 1 {
                            acc *= sgn(g.value(a), sc, a)?;
                        }
                    }
                    OrbitKind::SymmetricRamified if is_minus_one(g.value(a)) => {
                        let m1 = sgn(-sc.ambient().one(), sc, a)?;
                        if (rel_e(sc, a) - 1) / 2 % 2 == 1 {
                            acc *= m1;
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(acc)
}

/// Hypercohomology data for the weights that are not ramified symmetric.
#[derive(Debug, Clone)]
pub struct HyperData {
    pub ctx: EvalContext,
    pub sigma: SigmaSet,
    pub chars: Vec<LVec>,
    /// Representative root for each lattice basis vector.
    pub basis_roots: Vec<usize>,
}

/// `None` when every weight is ramified symmetric.
pub fn hyper_data(sc: &Scenario) -> Result<Option<HyperData>, EpsError> {
    let fr = sc.frame();
    let rs = sc.root_set();
    let ws = sc.weights();
    let f_total = fr.f_total();
    let frob = fr.frob();
    let s = sc.s();

    // weight inertia orbits that are not ramified symmetric
    let mut w_orbits: Vec<BTreeSet<usize>> = Vec::new();
    for w in ws.reps(Under::Inertia) {
        if ws.classify(w).map_err(HyperError::from)?.kind != OrbitKind::SymmetricRamified {
            w_orbits.push(ws.inertia_orbit(w));
        }
    }
    if w_orbits.is_empty() {
        return Ok(None);
    }
    let w_index = |w: usize| w_orbits.iter().position(|o| o.contains(&w));

    // root inertia orbits over those weights, paired with their negatives
    let mut r_orbits: Vec<BTreeSet<usize>> = Vec::new();
    for a in rs.reps(Under::Inertia) {
        if !sc.is_levi(a) && w_index(sc.weight(a)).is_some() {
            r_orbits.push(rs.inertia_orbit(a));
        }
    }
    let r_index = |a: usize| {
        r_orbits
            .iter()
            .position(|o| o.contains(&a))
            .expect("root orbit")
    };
    let mut basis: Vec<usize> = Vec::new();
    let mut coord: BTreeMap<usize, (usize, i64)> = BTreeMap::new();
    for (i, o) in r_orbits.iter().enumerate() {
        let a = *o.iter().next().unwrap();
        let j = r_index(sc.neg(a));
        if let Some(&(b, sign)) = coord.get(&j) {
            coord.insert(i, (b, -sign));
        } else {
            coord.insert(i, (basis.len(), 1));
            basis.push(a);
        }
    }
    let n = basis.len();
    let mut pm = vec![vec![0i64; n]; n];
    for (j, &a) in basis.iter().enumerate() {
        let (b, sign) = coord[&r_index(rs.act(frob, a))];
        pm[b][j] = sign;
    }
    let lattice = CharLattice::new(pm)?;

    let no = w_orbits.len();
    let act: Vec<Vec<usize>> = (0..f_total)
        .map(|k| {
            let g = fr.pow(frob, k);
            (0..no)
                .map(|i| w_index(ws.act(g, *w_orbits[i].iter().next().unwrap())).unwrap())
                .collect()
        })
        .collect();
    let neg = (0..no)
        .map(|i| w_index(ws.neg(*w_orbits[i].iter().next().unwrap())).unwrap())
        .collect();
    let frame = GaloisFrame::cyclic(f_total);
    let sigma = SigmaSet::new(frame.clone(), act, neg).map_err(HyperError::from)?;

    let mut chars = vec![vec![0i64; n]; no];
    for (i, o) in r_orbits.iter().enumerate() {
        let a = *o.iter().next().unwrap();
        if ord(sc, a, s) {
            let (b, sign) = coord[&i];
            chars[w_index(sc.weight(a)).unwrap()][b] += sign;
        }
    }
    let ctx = EvalContext::new(lattice, frame, sc.base_field(), sc.ambient())?;
    Ok(Some(HyperData {
        ctx,
        sigma,
        chars,
        basis_roots: basis,
    }))
}

/// The hypercohomology sign on the `s`-graded pieces; `Oracle` evaluates the cocycle directly.
pub fn piece_hyper(sc: &Scenario, g: &TorusPoint, mode: Mode) -> Result<CharValue, EpsError> {
    let Some(hd) = hyper_data(sc)? else {
        return Ok(1);
    };
    let pt = GroupPoint {
        basis: hd.basis_roots.iter().map(|&a| g.value(a)).collect(),
    };
    let cls = match mode {
        Mode::Formula => hypercoh::eval_formula(&hd.sigma, &hd.chars, &hd.ctx, &pt)?,
        Mode::Oracle => {
            let pos = hypercoh::default_positive(&hd.sigma);
            let hc = hypercoh::from_sigma_set(&hd.sigma, &pos, &hd.chars, &hd.ctx)?;
            hypercoh::eval_direct(&hc, &hd.ctx, &pt)?
        }
    };
    Ok(cls.sign())
}

/// The graded space of depth-zero pieces over ramified symmetric weights, with `γ`'s eigenvalues.
pub fn spinor_space(
    sc: &Scenario,
    g: &TorusPoint,
) -> Result<Option<(GradedQuadSpace, Vec<FqElem>)>, EpsError> {
    let zero = Rational64::from_integer(0);
    let amb = sc.ambient();
    let mut blocks = Vec::new();
    let mut lambdas = Vec::new();
    for a in sc.sigma_orbit_reps() {
        if !weight_ram(sc, a) || !ord(sc, a, zero) {
            continue;
        }
        let f = sc.f(a) as u32;
        let v = g.value(a);
        match sc.kind(a) {
            OrbitKind::Asymmetric => blocks.push(Block::Hyperbolic { f, dim: 1 }),
            OrbitKind::SymmetricUnramified => blocks.push(Block::Hermitian {
                f,
                scales: vec![amb.one()],
            }),
            OrbitKind::SymmetricRamified => {
                let el = sc.e(a) as i64 * sc.ell_pprime(sc.dual_length(a)) as i64;
                let c0 = if sc.toral(a) == 1 {
                    amb.one()
                } else {
                    amb.subfield_generator(sc.k_field(a).degree())?
                };
                blocks.push(Block::Anisotropic {
                    f,
                    scales: vec![amb.from_int(el) * c0],
                });
            }
        }
        lambdas.push(v);
    }
    if blocks.is_empty() {
        return Ok(None);
    }
    Ok(Some((
        GradedQuadSpace::new(amb, sc.base_field(), blocks)?,
        lambdas,
    )))
}

/// Spinor norm of `γ` on the depth-zero pieces; `Oracle` factors the isometry into reflections.
pub fn piece_spinor(sc: &Scenario, g: &TorusPoint, mode: Mode) -> Result<CharValue, EpsError> {
    let zero = Rational64::from_integer(0);
    match mode {
        Mode::Oracle => match spinor_space(sc, g)? {
            None => Ok(1),
            Some((gs, l)) => Ok(gs.spinor_norm(&l)?.sign()),
        },
        Mode::Formula => {
            let mut acc = 1;
            for a in sc.sigma_orbit_reps() {
                if !weight_ram(sc, a) {
                    continue;
                }
                acc *= match sc.kind(a) {
                    OrbitKind::Asymmetric if ord(sc, a, zero) => sgn(g.value(a), sc, a)?,
                    OrbitKind::SymmetricUnramified if ord(sc, a, zero) => {
                        g.value(a).sgn1(&sc.k_pm_field(a))?
                    }
                    OrbitKind::SymmetricRamified if is_minus_one(g.value(a)) => {
                        flat1_factor(sc, a)? * sc.toral(a)
                    }
                    _ => 1,
                };
            }
            Ok(acc)
        }
    }
}

/// Product of the three pieces.
pub fn eps_x_with(sc: &Scenario, g: &TorusPoint, mode: Mode) -> Result<CharValue, EpsError> {
    Ok(piece_esr(sc, g, mode)? * piece_hyper(sc, g, mode)? * piece_spinor(sc, g, mode)?)
}

pub fn eps_x(sc: &Scenario, g: &TorusPoint) -> Result<CharValue, EpsError> {
    eps_x_with(sc, g, Mode::Formula)
}

/// The closed form `ε_♯·ε_♭·ε_f`.
pub fn eps_closed(sc: &Scenario, g: &TorusPoint) -> Result<CharValue, EpsError> {
    Ok(eps_named(sc, Named::SharpX, g)?
        * eps_named(sc, Named::Flat, g)?
        * eps_named(sc, Named::F, g)?)
}

/// Signs of asymmetric roots with `⟨α,λ⟩ > 0` and `s ∈ ord_x(α)`.
pub fn delta_xy(
    sc: &Scenario,
    lambda: &[Rational64],
    g: &TorusPoint,
) -> Result<CharValue, EpsError> {
    if !sc.is_invariant_coweight(lambda) {
        return Err(EpsError::NotInvariant);
    }
    let s = sc.s();
    let mut acc = 1;
    for a in sc.sigma_orbit_reps() {
        if sc.kind(a) != OrbitKind::Asymmetric {
            continue;
        }
        let pr = sc.pairing(a, lambda);
        if pr == Rational64::from_integer(0) {
            continue;
        }
        let b = if pr > Rational64::from_integer(0) {
            a
        } else {
            sc.neg(a)
        };
        if ord(sc, b, s) {
            acc *= sgn(g.value(b), sc, b)?;
        }
    }
    Ok(acc)
}

/// Every named character, piece, and both totals at one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharRow {
    pub gamma: String,
    pub named: BTreeMap<Named, CharValue>,
    pub esr: [CharValue; 2],
    pub hyper: [CharValue; 2],
    pub spinor: Option<[CharValue; 2]>,
    pub eps_x: CharValue,
    pub closed: CharValue,
}

pub fn char_row(sc: &Scenario, g: &TorusPoint) -> Result<CharRow, EpsError> {
    let mut named = BTreeMap::new();
    for n in Named::ALL {
        named.insert(n, eps_named(sc, n, g)?);
    }
    let spinor_f = piece_spinor(sc, g, Mode::Formula)?;
    let spinor = match piece_spinor(sc, g, Mode::Oracle) {
        Ok(o) => Some([spinor_f, o]),
        Err(EpsError::Quad(QuadError::SearchSpaceTooLarge(_))) => None,
        Err(e) => return Err(e),
    };
    Ok(CharRow {
        gamma: g.spec(),
        named,
        esr: [
            piece_esr(sc, g, Mode::Formula)?,
            piece_esr(sc, g, Mode::Oracle)?,
        ],
        hyper: [
            piece_hyper(sc, g, Mode::Formula)?,
            piece_hyper(sc, g, Mode::Oracle)?,
        ],
        spinor,
        eps_x: eps_x(sc, g)?,
        closed: eps_closed(sc, g)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{all_presets, preset};
    use crate::torus::{enumerate_all, sample_points};

    #[test]
    fn identity_is_trivial() {
        for sc in all_presets() {
            let id = TorusPoint::identity(&sc);
            for n in Named::ALL {
                assert_eq!(eps_named(&sc, n, &id).unwrap(), 1);
            }
            assert_eq!(eps_x(&sc, &id).unwrap(), 1);
        }
    }

    #[test]
    fn ramified_pgl2() {
        let sc = preset("pgl2-ramified").unwrap();
        let pts = enumerate_all(&sc).unwrap();
        let minus = pts.iter().find(|g| is_minus_one(g.value(0))).unwrap();
        assert_eq!(eps_named(&sc, Named::F, minus).unwrap(), -1);
    }

    #[test]
    fn presets_all_paths_agree() {
        for sc in all_presets() {
            for g in sample_points(&sc, 60, 1) {
                let row = char_row(&sc, &g).unwrap();
                assert_eq!(row.esr[0], row.esr[1], "{} {}", sc.name(), row.gamma);
                assert_eq!(row.hyper[0], row.hyper[1], "{} {}", sc.name(), row.gamma);
                if let Some(sp) = row.spinor {
                    assert_eq!(sp[0], sp[1], "{} {}", sc.name(), row.gamma);
                }
                assert_eq!(row.eps_x, row.closed, "{} {}", sc.name(), row.gamma);
            }
        }
    }
}
