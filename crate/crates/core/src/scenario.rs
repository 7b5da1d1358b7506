//! Twisted Levi data: roots with Galois action, restriction to weights,
//! lengths, depth, jump offsets, toral invariants and a-data residues.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldDesc, FqElem, GfError};
use crate::rootsys::{RootError, RootSystem, Vector};
use crate::sigma_set::{GaloisFrame, OrbitClass, OrbitKind, SigmaError, SigmaSet, Under};

/// Named scenario invariants; each validation failure reports one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    RootData,
    GaloisAction,
    TameStructure,
    LeviClosed,
    LeviStable,
    FiberComponent,
    RestrictionLabels,
    Lengths,
    FieldSize,
    DepthPositive,
    MissingOffset,
    OffsetGaloisInvariant,
    OffsetAntisymmetric,
    DepthInJumpLattice,
    SymmetricOffset,
    RamifiedJumpAtZero,
    WeightDepthParity,
    RootDepthParity,
    RelativeRamificationParity,
    ToralNotRamified,
    ToralValue,
    ToralGaloisInvariant,
    ResidueNonzero,
    ResidueField,
    ResidueFiber,
}

impl Invariant {
    /// Short statement of the law.
    pub fn law(self) -> &'static str {
        use Invariant::*;
        match self {
            RootData => "roots form a reduced root system in simple-root coordinates",
            GaloisAction => "Galois generators act by lattice automorphisms of the roots",
            TameStructure => {
                "inertia is cyclic of order prime to p and Frobenius raises it to the q-th power"
            }
            LeviClosed => "Levi roots are the roots in their rational span",
            LeviStable => "Levi roots are Galois stable and closed under negation",
            FiberComponent => "each restriction fiber lies in one irreducible component",
            RestrictionLabels => {
                "supplied fiber labels match restriction to the center of the Levi"
            }
            Lengths => "supplied lengths match the root system",
            FieldSize => "the common residue extension is small enough to tabulate",
            DepthPositive => "depth r is positive",
            MissingOffset => "every Galois orbit of non-Levi roots has a jump offset",
            OffsetGaloisInvariant => "ord(σα) = ord(α)",
            OffsetAntisymmetric => "ord(-α) = -ord(α)",
            DepthInJumpLattice => "r lies in e_α^{-1}Z for every non-Levi root",
            SymmetricOffset => "ord(α) = -ord(α) for symmetric α",
            RamifiedJumpAtZero => "0 lies in ord(α) for ramified symmetric α",
            WeightDepthParity => "e_{α0}·r is an odd integer when α0 is ramified symmetric",
            RootDepthParity => "e_α·r is an odd integer when α is ramified symmetric",
            RelativeRamificationParity => "e(α/α0) is odd when α is ramified symmetric",
            ToralNotRamified => "toral invariants are attached only to ramified symmetric roots",
            ToralValue => "toral invariants are ±1",
            ToralGaloisInvariant => "toral invariants are constant on Galois orbits",
            ResidueNonzero => "a-data residues are nonzero",
            ResidueField => "the residue of a_α lies in k_α",
            ResidueFiber => "ℓ_{p'}(α)·c_α depends only on the weight, and c_{-α} = -c_α",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("serializable");
        write!(f, "{}", s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant {invariant} violated ({}): {detail}", invariant.law())]
    Validation {
        invariant: Invariant,
        detail: String,
    },
    #[error("unknown root {0}")]
    UnknownRoot(usize),
    #[error("root {0} is a Levi root")]
    LeviRoot(usize),
    #[error("unknown preset {0}")]
    UnknownPreset(String),
}

fn fail<T>(invariant: Invariant, detail: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError::Validation {
        invariant,
        detail: detail.into(),
    })
}

impl From<RootError> for ScenarioError {
    fn from(e: RootError) -> Self {
        ScenarioError::Validation {
            invariant: Invariant::RootData,
            detail: e.to_string(),
        }
    }
}

impl From<SigmaError> for ScenarioError {
    fn from(e: SigmaError) -> Self {
        let invariant = match e {
            SigmaError::WildInertia(_)
            | SigmaError::TameRelation
            | SigmaError::InertiaNotCyclic => Invariant::TameStructure,
            _ => Invariant::GaloisAction,
        };
        ScenarioError::Validation {
            invariant,
            detail: e.to_string(),
        }
    }
}

/// Parse `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Result<Rational64, ScenarioError> {
    s.trim()
        .parse::<Rational64>()
        .map_err(|_| ScenarioError::Parse(format!("bad rational {s:?}")))
}

/// Format as `"a/b"`, or `"a"` for integers.
pub fn format_rational(x: Rational64) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn in_lattice(x: Rational64, e: usize) -> bool {
    (x * Rational64::from_integer(e as i64)).is_integer()
}

fn odd_integer(x: Rational64) -> bool {
    x.is_integer() && x.numer().is_odd()
}

/// The on-disk scenario format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: u32,
    #[serde(default = "one")]
    pub base_degree: u32,
    pub roots: Vec<Vector>,
    #[serde(default)]
    pub levi: Vec<usize>,
    #[serde(default)]
    pub gamma_generators: Vec<Vec<usize>>,
    #[serde(default)]
    pub inertia_generators: Vec<Vec<usize>>,
    #[serde(default)]
    pub frobenius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<u32>>,
    pub depth_r: String,
    #[serde(default)]
    pub offsets: BTreeMap<usize, String>,
    #[serde(default)]
    pub toral_invariants: BTreeMap<usize, i64>,
    #[serde(default)]
    pub a_residues: BTreeMap<usize, String>,
}

fn one() -> u32 {
    1
}

impl ScenarioDoc {
    pub fn from_json(s: &str) -> Result<ScenarioDoc, ScenarioError> {
        serde_json::from_str(s).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Rank of a set of integer vectors over Q.
pub(crate) fn q_rank(vectors: &[Vector]) -> usize {
    let mut rows: Vec<Vec<Rational64>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != Rational64::from_integer(0))
        else {
            continue;
        };
        rows.swap(rank, piv);
        let pv = rows[rank][col];
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != Rational64::from_integer(0) {
                let c = rows[i][col] / pv;
                for j in 0..ncols {
                    let d = rows[rank][j] * c;
                    rows[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn in_q_span(v: &[i64], basis: &[Vector], basis_rank: usize) -> bool {
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    q_rank(&all) == basis_rank
}

#[derive(Debug, Clone)]
pub struct Scenario {
    name: String,
    p: u32,
    base_degree: u32,
    base: FieldDesc,
    ambient: FieldDesc,
    n_ext: u32,
    rs: RootSystem,
    levi: Vec<bool>,
    frame: Arc<GaloisFrame>,
    gamma_mats: Vec<Vec<Vec<i64>>>,
    root_set: SigmaSet,
    root_class: Vec<OrbitClass>,
    gm_roots: Vec<usize>,
    weight_of: Vec<usize>,
    weights: SigmaSet,
    weight_class: Vec<OrbitClass>,
    r: Rational64,
    offset: Vec<Option<Rational64>>,
    toral: Vec<i8>,
    residue: Vec<Option<FqElem>>,
    doc_generators: (Vec<Vec<usize>>, Vec<Vec<usize>>, Option<usize>),
}

const MAX_AMBIENT: u64 = 1 << 20;

impl Scenario {
    pub fn from_json(s: &str) -> Result<Scenario, ScenarioError> {
        Scenario::load(&ScenarioDoc::from_json(s)?)
    }

    /// Everything except offsets, toral invariants and residues.
    pub(crate) fn structure(doc: &ScenarioDoc) -> Result<Scenario, ScenarioError> {
        let base = FieldDesc::new(doc.p, doc.base_degree)
            .map_err(|e| ScenarioError::Parse(format!("base field: {e}")))?;
        let rs = RootSystem::from_roots(&doc.roots)?;
        if rs.len() != doc.roots.len() {
            return fail(Invariant::RootData, "duplicate roots");
        }
        let nroots = rs.len();
        // doc index -> sorted index
        let to_sorted: Vec<usize> = doc.roots.iter().map(|r| rs.index_of(r).unwrap()).collect();
        let remap = |doc_perm: &[usize]| -> Result<Vec<usize>, ScenarioError> {
            if doc_perm.len() != nroots || doc_perm.iter().any(|&x| x >= nroots) {
                return fail(
                    Invariant::GaloisAction,
                    "generator is not a permutation of the roots",
                );
            }
            let mut out = vec![0; nroots];
            for (i, &j) in doc_perm.iter().enumerate() {
                out[to_sorted[i]] = to_sorted[j];
            }
            Ok(out)
        };
        let gens = doc
            .gamma_generators
            .iter()
            .map(|g| remap(g))
            .collect::<Result<Vec<_>, _>>()?;
        let inertia_gens = doc
            .inertia_generators
            .iter()
            .map(|g| remap(g))
            .collect::<Result<Vec<_>, _>>()?;
        let identity: Vec<usize> = (0..nroots).collect();
        let frob = match doc.frobenius {
            None => identity.clone(),
            Some(i) => gens
                .get(i)
                .cloned()
                .ok_or_else(|| ScenarioError::Parse(format!("frobenius index {i} out of range")))?,
        };
        for g in gens.iter().chain(&inertia_gens) {
            if rs.matrix_of_perm(g).is_none() {
                return fail(
                    Invariant::GaloisAction,
                    "generator is not linear on the root lattice",
                );
            }
        }
        let frame = GaloisFrame::generate(nroots, &gens, &inertia_gens, &frob)?;
        let q = (doc.p as u64).pow(doc.base_degree);
        frame.check_tame(doc.p as u64, q)?;
        let gamma_mats: Vec<Vec<Vec<i64>>> = (0..frame.order())
            .map(|g| {
                rs.matrix_of_perm(frame.perm(g))
                    .expect("closure of linear maps")
            })
            .collect();
        let neg: Vec<usize> = (0..nroots).map(|i| rs.neg(i)).collect();
        let root_set = SigmaSet::on_frame_points(frame.clone(), neg)?;
        let root_class: Vec<OrbitClass> = (0..nroots)
            .map(|i| root_set.classify(i))
            .collect::<Result<_, _>>()?;

        // Levi
        let mut levi = vec![false; nroots];
        for &i in &doc.levi {
            let Some(&s) = to_sorted.get(i) else {
                return Err(ScenarioError::UnknownRoot(i));
            };
            levi[s] = true;
        }
        for i in 0..nroots {
            if levi[i] && (!levi[rs.neg(i)] || (0..frame.order()).any(|g| !levi[frame.perm(g)[i]]))
            {
                return fail(
                    Invariant::LeviStable,
                    format!("Levi root {:?}", rs.roots()[i]),
                );
            }
        }
        let levi_vecs: Vec<Vector> = (0..nroots)
            .filter(|&i| levi[i])
            .map(|i| rs.roots()[i].clone())
            .collect();
        let levi_rank = q_rank(&levi_vecs);
        for i in 0..nroots {
            if !levi[i] && in_q_span(&rs.roots()[i], &levi_vecs, levi_rank) {
                return fail(
                    Invariant::LeviClosed,
                    format!("root {:?} lies in the Levi span", rs.roots()[i]),
                );
            }
        }

        // restriction to weights
        let gm_roots: Vec<usize> = (0..nroots).filter(|&i| !levi[i]).collect();
        let mut weight_of = vec![usize::MAX; nroots];
        let mut reps: Vec<usize> = Vec::new();
        for &a in &gm_roots {
            let found = reps.iter().position(|&b| {
                let diff: Vector = rs.roots()[a]
                    .iter()
                    .zip(&rs.roots()[b])
                    .map(|(x, y)| x - y)
                    .collect();
                in_q_span(&diff, &levi_vecs, levi_rank)
            });
            weight_of[a] = match found {
                Some(w) => w,
                None => {
                    reps.push(a);
                    reps.len() - 1
                }
            };
        }
        let gm_set = root_set.restrict(&gm_roots)?;
        let labels: Vec<usize> = gm_roots.iter().map(|&a| weight_of[a]).collect();
        let weights = gm_set.quotient(&labels)?;
        let weight_class: Vec<OrbitClass> = (0..weights.len())
            .map(|w| weights.classify(w))
            .collect::<Result<_, _>>()?;
        for &a in &gm_roots {
            let b = reps[weight_of[a]];
            if rs.component(a) != rs.component(b) {
                return fail(
                    Invariant::FiberComponent,
                    format!("weight of {:?}", rs.roots()[b]),
                );
            }
        }
        if let Some(lbl) = &doc.restriction {
            if lbl.len() != nroots {
                return fail(
                    Invariant::RestrictionLabels,
                    "one label per root is required",
                );
            }
            for i in 0..nroots {
                for j in 0..nroots {
                    let (si, sj) = (to_sorted[i], to_sorted[j]);
                    let computed = !levi[si] && !levi[sj] && weight_of[si] == weight_of[sj];
                    let given = lbl[i].is_some() && lbl[i] == lbl[j];
                    if computed != given || (levi[si] != lbl[i].is_none()) {
                        return fail(
                            Invariant::RestrictionLabels,
                            format!("roots {i} and {j} of the document"),
                        );
                    }
                }
            }
        }
        if let Some(lens) = &doc.lengths {
            if lens.len() != nroots || (0..nroots).any(|i| lens[i] != rs.length(to_sorted[i])) {
                return fail(Invariant::Lengths, "lengths differ from the root system");
            }
        }

        // residue fields
        let n_ext = root_class.iter().fold(1usize, |acc, c| acc.lcm(&c.f)) as u32;
        let amb_q = (doc.p as u64)
            .checked_pow(doc.base_degree * n_ext)
            .unwrap_or(u64::MAX);
        if amb_q > MAX_AMBIENT {
            return fail(
                Invariant::FieldSize,
                format!("GF({}^{})", doc.p, doc.base_degree * n_ext),
            );
        }
        let ambient = FieldDesc::new(doc.p, doc.base_degree * n_ext).map_err(|e| {
            ScenarioError::Validation {
                invariant: Invariant::FieldSize,
                detail: e.to_string(),
            }
        })?;

        let r = parse_rational(&doc.depth_r)?;
        if r <= Rational64::from_integer(0) {
            return fail(Invariant::DepthPositive, format_rational(r));
        }

        let sc = Scenario {
            name: doc.name.clone().unwrap_or_else(|| "unnamed".to_string()),
            p: doc.p,
            base_degree: doc.base_degree,
            base,
            ambient,
            n_ext,
            rs,
            levi,
            frame,
            gamma_mats,
            root_set,
            root_class,
            gm_roots,
            weight_of,
            weights,
            weight_class,
            r,
            offset: vec![None; nroots],
            toral: vec![1; nroots],
            residue: vec![None; nroots],
            doc_generators: (gens, inertia_gens, doc.frobenius),
        };
        Ok(sc)
    }

    /// Validate a document and build the scenario.
    pub fn load(doc: &ScenarioDoc) -> Result<Scenario, ScenarioError> {
        let mut sc = Scenario::structure(doc)?;
        let to_sorted: Vec<usize> = doc
            .roots
            .iter()
            .map(|r| sc.rs.index_of(r).unwrap())
            .collect();
        let lookup = |sc: &Scenario, i: usize| -> Result<usize, ScenarioError> {
            let s = *to_sorted.get(i).ok_or(ScenarioError::UnknownRoot(i))?;
            if sc.levi[s] {
                return Err(ScenarioError::LeviRoot(i));
            }
            Ok(s)
        };
        let mut given_offsets = BTreeMap::new();
        for (&k, v) in &doc.offsets {
            given_offsets.insert(lookup(&sc, k)?, parse_rational(v)?);
        }
        sc.set_offsets(&given_offsets)?;
        let mut given_toral = BTreeMap::new();
        for (&k, &v) in &doc.toral_invariants {
            given_toral.insert(lookup(&sc, k)?, v);
        }
        sc.set_toral(&given_toral)?;
        let mut given_res = BTreeMap::new();
        for (&k, v) in &doc.a_residues {
            let s = lookup(&sc, k)?;
            let kf = sc.k_field(s);
            let parsed = kf
                .parse_elem(v)
                .and_then(|x| sc.ambient.embed(x))
                .map_err(|e: GfError| ScenarioError::Parse(format!("residue {v:?}: {e}")))?;
            given_res.insert(s, parsed);
        }
        sc.set_residues(&given_res)?;
        sc.check_depth()?;
        Ok(sc)
    }

    fn set_offsets(&mut self, given: &BTreeMap<usize, Rational64>) -> Result<(), ScenarioError> {
        let n = self.rs.len();
        let mut off: Vec<Option<Rational64>> = vec![None; n];
        for (&a, &t) in given {
            for g in 0..self.frame.order() {
                let b = self.root_set.act(g, a);
                let e = self.e(b);
                match off[b] {
                    Some(u) if !in_lattice(u - t, e) => {
                        return fail(
                            Invariant::OffsetGaloisInvariant,
                            format!("root {:?}", self.rs.roots()[b]),
                        )
                    }
                    Some(_) => {}
                    None => off[b] = Some(t),
                }
            }
        }
        // negatives
        let snapshot = off.clone();
        for &a in &self.gm_roots {
            let na = self.rs.neg(a);
            match (snapshot[a], snapshot[na]) {
                (Some(t), Some(u)) if !in_lattice(t + u, self.e(a)) => {
                    return fail(
                        Invariant::OffsetAntisymmetric,
                        format!("root {:?}", self.rs.roots()[a]),
                    )
                }
                (None, Some(u)) => off[a] = Some(-u),
                _ => {}
            }
        }
        for &a in &self.gm_roots {
            if off[a].is_none() {
                if self.root_class[a].kind == OrbitKind::SymmetricRamified {
                    off[a] = Some(Rational64::from_integer(0));
                } else {
                    return fail(
                        Invariant::MissingOffset,
                        format!("root {:?}", self.rs.roots()[a]),
                    );
                }
            }
        }
        // canonical representative in [0, 1/e)
        for &a in &self.gm_roots {
            let e = Rational64::new(1, self.e(a) as i64);
            let t = off[a].unwrap();
            off[a] = Some(t - (t / e).floor() * e);
        }
        self.offset = off;
        Ok(())
    }

    fn set_toral(&mut self, given: &BTreeMap<usize, i64>) -> Result<(), ScenarioError> {
        let mut tor = vec![0i8; self.rs.len()];
        for (&a, &v) in given {
            if self.root_class[a].kind != OrbitKind::SymmetricRamified {
                return fail(
                    Invariant::ToralNotRamified,
                    format!("root {:?}", self.rs.roots()[a]),
                );
            }
            if v != 1 && v != -1 {
                return fail(Invariant::ToralValue, v.to_string());
            }
            for b in self.root_set.gamma_orbit(a) {
                if tor[b] != 0 && tor[b] as i64 != v {
                    return fail(
                        Invariant::ToralGaloisInvariant,
                        format!("root {:?}", self.rs.roots()[b]),
                    );
                }
                tor[b] = v as i8;
            }
        }
        self.toral = tor
            .into_iter()
            .map(|t| if t == 0 { 1 } else { t })
            .collect();
        Ok(())
    }

    fn set_residues(&mut self, given: &BTreeMap<usize, FqElem>) -> Result<(), ScenarioError> {
        let n = self.rs.len();
        let amb = self.ambient;
        // per weight: the common value ℓ_{p'}(α) c_α
        let mut per_weight: Vec<Option<FqElem>> = vec![None; self.weights.len()];
        for (&a, &c) in given {
            if c.is_zero() {
                return fail(
                    Invariant::ResidueNonzero,
                    format!("root {:?}", self.rs.roots()[a]),
                );
            }
            let w = self.weight_of[a];
            let val = c * amb.from_int(self.ell_pprime(self.rs.length(a)) as i64);
            for (ww, v) in [(w, val), (self.weights.neg(w), -val)] {
                match per_weight[ww] {
                    Some(u) if u != v => {
                        return fail(
                            Invariant::ResidueFiber,
                            format!("root {:?}", self.rs.roots()[a]),
                        )
                    }
                    _ => per_weight[ww] = Some(v),
                }
            }
        }
        for w in 0..self.weights.len() {
            if per_weight[w].is_none() {
                let nw = self.weights.neg(w);
                let v = amb.from_int(if w < nw { 1 } else { -1 });
                per_weight[w] = Some(v);
                per_weight[nw] = Some(-v);
            }
        }
        let mut res = vec![None; n];
        for &a in &self.gm_roots {
            let l = amb.from_int(self.ell_pprime(self.rs.length(a)) as i64);
            let c = per_weight[self.weight_of[a]].unwrap() / l;
            if !c.in_subfield(self.k_field(a).degree()) {
                return fail(
                    Invariant::ResidueField,
                    format!("root {:?}", self.rs.roots()[a]),
                );
            }
            res[a] = Some(c);
        }
        self.residue = res;
        Ok(())
    }

    fn check_depth(&self) -> Result<(), ScenarioError> {
        let r = self.r;
        for &a in &self.gm_roots {
            let root = || format!("root {:?}", self.rs.roots()[a]);
            let e = self.e(a);
            if !in_lattice(r, e) {
                return fail(Invariant::DepthInJumpLattice, root());
            }
            let cls = self.root_class[a];
            let t = self.offset[a].unwrap();
            if cls.kind.is_symmetric() && !in_lattice(t + t, e) {
                return fail(Invariant::SymmetricOffset, root());
            }
            if cls.kind == OrbitKind::SymmetricRamified {
                if !in_lattice(t, e) {
                    return fail(Invariant::RamifiedJumpAtZero, root());
                }
                if !odd_integer(r * Rational64::from_integer(e as i64)) {
                    return fail(Invariant::RootDepthParity, root());
                }
                if self.rel_ramification(a).unwrap().is_multiple_of(2) {
                    return fail(Invariant::RelativeRamificationParity, root());
                }
            }
            let wc = self.weight_class[self.weight_of[a]];
            if wc.kind == OrbitKind::SymmetricRamified
                && !odd_integer(r * Rational64::from_integer(wc.e as i64))
            {
                return fail(Invariant::WeightDepthParity, root());
            }
        }
        Ok(())
    }

    /// Canonical document; roots in sorted order.
    pub fn to_doc(&self) -> ScenarioDoc {
        let (gens, inertia, frob) = &self.doc_generators;
        let mut offsets = BTreeMap::new();
        let mut toral = BTreeMap::new();
        let mut residues = BTreeMap::new();
        for rep in self.gamma_orbit_reps() {
            offsets.insert(rep, format_rational(self.offset[rep].unwrap()));
            if self.root_class[rep].kind == OrbitKind::SymmetricRamified && self.toral[rep] != 1 {
                toral.insert(rep, self.toral[rep] as i64);
            }
        }
        for w in 0..self.weights.len() {
            let a = self
                .gm_roots
                .iter()
                .copied()
                .find(|&a| self.weight_of[a] == w)
                .unwrap();
            let c = self.residue[a].unwrap();
            let kf = self.k_field(a);
            let small = self.ambient.restrict(c, &kf).expect("residue lies in k_α");
            residues.insert(a, format_small(small));
        }
        ScenarioDoc {
            name: Some(self.name.clone()),
            p: self.p,
            base_degree: self.base_degree,
            roots: self.rs.roots().to_vec(),
            levi: (0..self.rs.len()).filter(|&i| self.levi[i]).collect(),
            gamma_generators: gens.clone(),
            inertia_generators: inertia.clone(),
            frobenius: *frob,
            restriction: Some(
                (0..self.rs.len())
                    .map(|i| (!self.levi[i]).then(|| self.weight_of[i]))
                    .collect(),
            ),
            lengths: Some((0..self.rs.len()).map(|i| self.rs.length(i)).collect()),
            depth_r: format_rational(self.r),
            offsets,
            toral_invariants: toral,
            a_residues: residues,
        }
    }

    pub fn with_name(mut self, name: &str) -> Scenario {
        self.name = name.to_string();
        self
    }

    /// The scenario with offsets shifted by `⟨α, λ⟩` for a Galois-invariant coweight `λ`.
    pub fn shifted(&self, lambda: &[Rational64]) -> Result<Scenario, ScenarioError> {
        let mut doc = self.to_doc();
        doc.offsets = doc
            .offsets
            .iter()
            .map(|(&a, t)| {
                let t = parse_rational(t).unwrap() + self.pairing(a, lambda);
                (a, format_rational(t))
            })
            .collect();
        Ok(Scenario::load(&doc)?.with_name(&format!("{}+shift", self.name)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn base_degree(&self) -> u32 {
        self.base_degree
    }

    /// Size of the base residue field `k`.
    pub fn q(&self) -> u64 {
        self.base.order() as u64
    }

    pub fn base_field(&self) -> FieldDesc {
        self.base
    }

    /// `GF(q^N)` with `N` the lcm of all residue degrees.
    pub fn ambient(&self) -> FieldDesc {
        self.ambient
    }

    pub fn n_ext(&self) -> u32 {
        self.n_ext
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn num_roots(&self) -> usize {
        self.rs.len()
    }

    pub fn root(&self, a: usize) -> &[i64] {
        &self.rs.roots()[a]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.rs.neg(a)
    }

    pub fn is_levi(&self, a: usize) -> bool {
        self.levi[a]
    }

    /// Indices of the roots outside the Levi.
    pub fn gm_roots(&self) -> &[usize] {
        &self.gm_roots
    }

    pub fn frame(&self) -> &Arc<GaloisFrame> {
        &self.frame
    }

    pub fn root_set(&self) -> &SigmaSet {
        &self.root_set
    }

    /// Lattice matrix of a frame element on simple-root coordinates.
    pub fn gamma_matrix(&self, g: usize) -> &[Vec<i64>] {
        &self.gamma_mats[g]
    }

    pub fn weights(&self) -> &SigmaSet {
        &self.weights
    }

    /// Weight index of a non-Levi root.
    pub fn weight(&self, a: usize) -> usize {
        self.weight_of[a]
    }

    pub fn fiber(&self, w: usize) -> Vec<usize> {
        self.gm_roots
            .iter()
            .copied()
            .filter(|&a| self.weight_of[a] == w)
            .collect()
    }

    pub fn class(&self, a: usize) -> OrbitClass {
        self.root_class[a]
    }

    pub fn kind(&self, a: usize) -> OrbitKind {
        self.root_class[a].kind
    }

    pub fn weight_class(&self, w: usize) -> OrbitClass {
        self.weight_class[w]
    }

    /// Class of the weight `α_0` under `α`.
    pub fn class0(&self, a: usize) -> OrbitClass {
        self.weight_class[self.weight_of[a]]
    }

    pub fn e(&self, a: usize) -> usize {
        self.root_class[a].e
    }

    pub fn f(&self, a: usize) -> usize {
        self.root_class[a].f
    }

    /// `e(α/α_0) = e_α / e_{α_0}`.
    pub fn rel_ramification(&self, a: usize) -> Result<usize, ScenarioError> {
        if a >= self.rs.len() {
            return Err(ScenarioError::UnknownRoot(a));
        }
        if self.levi[a] {
            return Err(ScenarioError::LeviRoot(a));
        }
        Ok(self.e(a) / self.class0(a).e)
    }

    /// Residue field `k_α` as a subfield of the ambient field.
    pub fn k_field(&self, a: usize) -> FieldDesc {
        FieldDesc::new(self.p, self.base_degree * self.root_class[a].f as u32)
            .expect("divides ambient")
    }

    /// `k_{±α}`.
    pub fn k_pm_field(&self, a: usize) -> FieldDesc {
        FieldDesc::new(self.p, self.base_degree * self.root_class[a].f_pm as u32)
            .expect("divides ambient")
    }

    pub fn k0_field(&self, a: usize) -> FieldDesc {
        FieldDesc::new(self.p, self.base_degree * self.class0(a).f as u32).expect("divides ambient")
    }

    pub fn length(&self, a: usize) -> u32 {
        self.rs.length(a)
    }

    pub fn dual_length(&self, a: usize) -> u32 {
        self.rs.dual_length(a)
    }

    /// `x / gcd(x, p)`.
    pub fn ell_pprime(&self, x: u32) -> u32 {
        x / x.gcd(&self.p)
    }

    pub fn depth(&self) -> Rational64 {
        self.r
    }

    /// `s = r/2`.
    pub fn s(&self) -> Rational64 {
        self.r / 2
    }

    pub fn offset(&self, a: usize) -> Option<Rational64> {
        self.offset[a]
    }

    /// `t ∈ ord_x(α)`.
    pub fn ord_contains(&self, a: usize, t: Rational64) -> Result<bool, ScenarioError> {
        if a >= self.rs.len() {
            return Err(ScenarioError::UnknownRoot(a));
        }
        let off = self.offset[a].ok_or(ScenarioError::LeviRoot(a))?;
        Ok(in_lattice(t - off, self.e(a)))
    }

    pub fn toral(&self, a: usize) -> i8 {
        self.toral[a]
    }

    /// Leading residue `c_α` of `a_α`, in the ambient field.
    pub fn residue(&self, a: usize) -> Option<FqElem> {
        self.residue[a]
    }

    /// `⟨α, λ⟩` for a coweight given by its values on the simple roots.
    pub fn pairing(&self, a: usize, lambda: &[Rational64]) -> Rational64 {
        self.rs.roots()[a]
            .iter()
            .zip(lambda)
            .map(|(&x, &l)| l * Rational64::from_integer(x))
            .sum()
    }

    /// Galois average of a coweight; the result is invariant.
    pub fn average_coweight(&self, mu: &[Rational64]) -> Vec<Rational64> {
        let n = self.rank();
        let order = self.frame.order() as i64;
        (0..n)
            .map(|j| {
                let mut s = Rational64::from_integer(0);
                for g in 0..self.frame.order() {
                    let m = &self.gamma_mats[g];
                    for i in 0..n {
                        s += mu[i] * Rational64::from_integer(m[i][j]);
                    }
                }
                s / order
            })
            .collect()
    }

    pub fn is_invariant_coweight(&self, lambda: &[Rational64]) -> bool {
        (0..self.frame.order()).all(|g| {
            (0..self.rs.len())
                .all(|a| self.pairing(self.root_set.act(g, a), lambda) == self.pairing(a, lambda))
        })
    }

    /// Least roots of the Galois orbits in `R(T,G/M)`.
    pub fn gamma_orbit_reps(&self) -> Vec<usize> {
        self.root_set
            .reps(Under::Gamma)
            .into_iter()
            .filter(|&a| !self.levi[a])
            .collect()
    }

    /// Least roots of the Σ-orbits in `R(T,G/M)`.
    pub fn sigma_orbit_reps(&self) -> Vec<usize> {
        self.root_set
            .reps(Under::Sigma)
            .into_iter()
            .filter(|&a| !self.levi[a])
            .collect()
    }

    /// Short human summary of the orbit structure.
    pub fn describe(&self) -> String {
        let mut counts = BTreeMap::new();
        for rep in self.gamma_orbit_reps() {
            *counts.entry(self.kind(rep)).or_insert(0) += 1;
        }
        let kinds: Vec<String> = counts.iter().map(|(k, v)| format!("{k:?}:{v}")).collect();
        format!(
            "p={} q={} rank={} roots={} |Γ|={} |I|={} r={} [{}]",
            self.p,
            self.q(),
            self.rank(),
            self.rs.len(),
            self.frame.order(),
            self.frame.inertia_order(),
            format_rational(self.r),
            kinds.join(" ")
        )
    }
}

fn format_small(x: FqElem) -> String {
    if x.field().degree() == 1 {
        x.to_string()
    } else {
        let c: Vec<String> = x.coeffs().iter().map(|c| c.to_string()).collect();
        format!("[{}]", c.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1_doc(frob: Option<usize>, inertia: bool) -> ScenarioDoc {
        ScenarioDoc {
            name: None,
            p: 3,
            base_degree: 1,
            roots: vec![vec![1], vec![-1]],
            levi: vec![],
            gamma_generators: if frob.is_some() {
                vec![vec![1, 0]]
            } else {
                vec![]
            },
            inertia_generators: if inertia { vec![vec![1, 0]] } else { vec![] },
            frobenius: frob,
            restriction: None,
            lengths: None,
            depth_r: "1/2".into(),
            offsets: BTreeMap::new(),
            toral_invariants: BTreeMap::new(),
            a_residues: BTreeMap::new(),
        }
    }

    #[test]
    fn ramified_a1_loads() {
        let sc = Scenario::load(&a1_doc(None, true)).unwrap();
        assert_eq!(sc.kind(0), OrbitKind::SymmetricRamified);
        assert!(sc.ord_contains(0, Rational64::from_integer(0)).unwrap());
        assert_eq!(sc.rel_ramification(0).unwrap(), 1);
    }

    #[test]
    fn even_depth_rejected() {
        let mut doc = a1_doc(None, true);
        doc.depth_r = "1".into();
        match Scenario::load(&doc) {
            Err(ScenarioError::Validation { invariant, .. }) => {
                assert_eq!(invariant, Invariant::RootDepthParity)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn split_torus_needs_offsets() {
        let mut doc = a1_doc(None, false);
        doc.depth_r = "1".into();
        assert!(matches!(
            Scenario::load(&doc),
            Err(ScenarioError::Validation {
                invariant: Invariant::MissingOffset,
                ..
            })
        ));
        doc.offsets.insert(0, "1/2".into());
        let sc = Scenario::load(&doc).unwrap();
        let (neg, pos) = (0, 1);
        assert_eq!(sc.root(neg), &[-1]);
        assert!(sc.ord_contains(pos, Rational64::new(1, 2)).unwrap());
        assert!(!sc.ord_contains(pos, Rational64::from_integer(0)).unwrap());
        assert!(sc.ord_contains(neg, Rational64::new(-1, 2)).unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Scenario::from_json("{"),
            Err(ScenarioError::Parse(_))
        ));
        assert!(matches!(
            parse_rational("x/2"),
            Err(ScenarioError::Parse(_))
        ));
        assert_eq!(format_rational(Rational64::new(3, 6)), "1/2");
    }

    #[test]
    fn q_rank_basic() {
        assert_eq!(q_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(q_rank(&[vec![1, 2], vec![0, 1]]), 2);
    }
}
