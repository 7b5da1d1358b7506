//! Finite sets with an action of `Γ × {±1}`, an inertia subgroup, and the
//! asymmetric / unramified / ramified split.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub type Perm = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("unknown index {0}")]
    UnknownIndex(usize),
    #[error("not a permutation of {0} points")]
    NotAPermutation(usize),
    #[error("inertia generators do not lie in the group")]
    InertiaNotSubgroup,
    #[error("inertia is not normal")]
    InertiaNotNormal,
    #[error("the Frobenius lift does not generate the quotient by inertia")]
    FrobeniusNotGenerating,
    #[error("inertia is not cyclic")]
    InertiaNotCyclic,
    #[error("inertia order {0} is divisible by the residue characteristic")]
    WildInertia(usize),
    #[error("Frobenius does not conjugate inertia to its q-th power")]
    TameRelation,
    #[error("action is not a homomorphism")]
    NotAnAction,
    #[error("negation is not an involution commuting with the action")]
    BadNegation,
    #[error("classes are not compatible with the action")]
    IncompatibleClasses,
    #[error("subset is not stable")]
    UnstableSubset,
}

fn compose(a: &[usize], b: &[usize]) -> Perm {
    // (a ∘ b)(x) = a(b(x))
    b.iter().map(|&x| a[x]).collect()
}

fn invert(a: &[usize]) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

fn check_perm(p: &[usize], n: usize) -> Result<(), SigmaError> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(SigmaError::NotAPermutation(n));
    }
    for &x in p {
        if x >= n || seen[x] {
            return Err(SigmaError::NotAPermutation(n));
        }
        seen[x] = true;
    }
    Ok(())
}

/// A finite group acting faithfully on `degree` points, with inertia and
/// the residue-degree map `d`.
#[derive(Debug, Clone)]
pub struct GaloisFrame {
    degree: usize,
    elems: Vec<Perm>,
    index: HashMap<Perm, usize>,
    inertia: Vec<bool>,
    d: Vec<usize>,
    f_total: usize,
    frob: usize,
}

fn closure(degree: usize, gens: &[Perm]) -> Vec<Perm> {
    let id: Perm = (0..degree).collect();
    let mut seen: HashMap<Perm, ()> = HashMap::new();
    let mut out = vec![id.clone()];
    seen.insert(id.clone(), ());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(g, &x);
            if seen.insert(y.clone(), ()).is_none() {
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    out
}

impl GaloisFrame {
    /// Group generated by `gens` and `frob`, inertia generated by `inertia_gens`.
    pub fn generate(
        degree: usize,
        gens: &[Perm],
        inertia_gens: &[Perm],
        frob: &[usize],
    ) -> Result<Arc<GaloisFrame>, SigmaError> {
        for g in gens
            .iter()
            .chain(inertia_gens)
            .map(|g| g.as_slice())
            .chain([frob])
        {
            check_perm(g, degree)?;
        }
        let mut all: Vec<Perm> = gens.to_vec();
        all.push(frob.to_vec());
        all.extend(inertia_gens.iter().cloned());
        let elems = closure(degree, &all);
        let index: HashMap<Perm, usize> = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let inertia_elems = closure(degree, inertia_gens);
        for g in gens {
            if !index.contains_key(g) {
                return Err(SigmaError::NotAPermutation(degree));
            }
        }
        let mut inertia = vec![false; elems.len()];
        for t in &inertia_elems {
            inertia[index[t]] = true;
        }
        for s in &elems {
            let si = invert(s);
            for t in &inertia_elems {
                if !inertia[index[&compose(&compose(s, t), &si)]] {
                    return Err(SigmaError::InertiaNotNormal);
                }
            }
        }
        if !elems.len().is_multiple_of(inertia_elems.len()) {
            return Err(SigmaError::InertiaNotSubgroup);
        }
        let f_total = elems.len() / inertia_elems.len();
        // d(σ) = k for σ ∈ F^k I.
        let mut d = vec![usize::MAX; elems.len()];
        let mut fk: Perm = (0..degree).collect();
        for k in 0..f_total {
            for t in &inertia_elems {
                let x = index[&compose(&fk, t)];
                if d[x] != usize::MAX {
                    return Err(SigmaError::FrobeniusNotGenerating);
                }
                d[x] = k;
            }
            fk = compose(frob, &fk);
        }
        if d.contains(&usize::MAX) {
            return Err(SigmaError::FrobeniusNotGenerating);
        }
        let frob = index[frob];
        Ok(Arc::new(GaloisFrame {
            degree,
            elems,
            index,
            inertia,
            d,
            f_total,
            frob,
        }))
    }

    /// Cyclic group of order `n` generated by the Frobenius, trivial inertia.
    pub fn cyclic(n: usize) -> Arc<GaloisFrame> {
        let shift: Perm = (0..n).map(|i| (i + 1) % n).collect();
        let mut elems = Vec::with_capacity(n);
        let mut cur: Perm = (0..n).collect();
        for _ in 0..n {
            elems.push(cur.clone());
            cur = compose(&shift, &cur);
        }
        let index = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let mut inertia = vec![false; n];
        inertia[0] = true;
        Arc::new(GaloisFrame {
            degree: n,
            elems,
            index,
            inertia,
            d: (0..n).collect(),
            f_total: n,
            frob: if n > 1 { 1 } else { 0 },
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn perm(&self, g: usize) -> &[usize] {
        &self.elems[g]
    }

    pub fn index_of(&self, p: &[usize]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&compose(&self.elems[a], &self.elems[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&invert(&self.elems[a])]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn is_inertia(&self, g: usize) -> bool {
        self.inertia[g]
    }

    pub fn inertia_order(&self) -> usize {
        self.inertia.iter().filter(|&&b| b).count()
    }

    pub fn inertia_elements(&self) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.inertia[g]).collect()
    }

    /// The residue Frobenius power `d(σ)` in `Z/f_total`.
    pub fn frob_image(&self, g: usize) -> usize {
        self.d[g]
    }

    pub fn f_total(&self) -> usize {
        self.f_total
    }

    pub fn frob(&self) -> usize {
        self.frob
    }

    /// Tame structure for residue field size `q`: `I` cyclic of order prime
    /// to the characteristic `p`, and `F τ F⁻¹ = τ^q`.
    pub fn check_tame(&self, p: u64, q: u64) -> Result<(), SigmaError> {
        let inertia = self.inertia_elements();
        let n = inertia.len();
        if (n as u64).is_multiple_of(p) {
            return Err(SigmaError::WildInertia(n));
        }
        let gen = inertia
            .iter()
            .copied()
            .find(|&t| {
                let mut seen = BTreeSet::new();
                let mut cur = self.identity();
                loop {
                    cur = self.mul(cur, t);
                    if !seen.insert(cur) {
                        break;
                    }
                }
                seen.len() == n
            })
            .ok_or(SigmaError::InertiaNotCyclic)?;
        let f = self.frob;
        let conj = self.mul(self.mul(f, gen), self.inv(f));
        let tq = self.pow(gen, (q % n as u64) as usize);
        if conj != tq {
            return Err(SigmaError::TameRelation);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Asymmetric,
    SymmetricUnramified,
    SymmetricRamified,
}

impl OrbitKind {
    pub fn is_symmetric(self) -> bool {
        self != OrbitKind::Asymmetric
    }
}

/// Kind, ramification `e`, residue degree `f`, and the degree of `k_{±i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitClass {
    pub kind: OrbitKind,
    pub e: usize,
    pub f: usize,
    pub f_pm: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Under {
    Gamma,
    Sigma,
    Inertia,
}

#[derive(Debug, Clone)]
pub struct SigmaSet {
    frame: Arc<GaloisFrame>,
    act: Vec<Perm>,
    neg: Perm,
}

impl SigmaSet {
    pub fn new(frame: Arc<GaloisFrame>, act: Vec<Perm>, neg: Perm) -> Result<SigmaSet, SigmaError> {
        let n = neg.len();
        check_perm(&neg, n)?;
        if act.len() != frame.order() {
            return Err(SigmaError::NotAnAction);
        }
        for a in &act {
            check_perm(a, n)?;
        }
        for a in 0..frame.order() {
            for b in 0..frame.order() {
                if act[frame.mul(a, b)] != compose(&act[a], &act[b]) {
                    return Err(SigmaError::NotAnAction);
                }
            }
        }
        if compose(&neg, &neg) != (0..n).collect::<Perm>()
            || act.iter().any(|a| compose(a, &neg) != compose(&neg, a))
        {
            return Err(SigmaError::BadNegation);
        }
        Ok(SigmaSet { frame, act, neg })
    }

    /// The frame acting on its own points, i.e. the index set is the frame's permutation domain.
    pub fn on_frame_points(frame: Arc<GaloisFrame>, neg: Perm) -> Result<SigmaSet, SigmaError> {
        let act = frame.elems.clone();
        SigmaSet::new(frame, act, neg)
    }

    pub fn frame(&self) -> &Arc<GaloisFrame> {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.neg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neg.is_empty()
    }

    pub fn act(&self, g: usize, i: usize) -> usize {
        self.act[g][i]
    }

    pub fn neg(&self, i: usize) -> usize {
        self.neg[i]
    }

    /// Induced action on classes; `classes[i]` labels the class of `i`.
    pub fn quotient(&self, classes: &[usize]) -> Result<SigmaSet, SigmaError> {
        if classes.len() != self.len() {
            return Err(SigmaError::IncompatibleClasses);
        }
        let m = classes.iter().max().map_or(0, |x| x + 1);
        let induce = |p: &[usize]| -> Result<Perm, SigmaError> {
            let mut out = vec![usize::MAX; m];
            for i in 0..self.len() {
                let (c, d) = (classes[i], classes[p[i]]);
                if out[c] != usize::MAX && out[c] != d {
                    return Err(SigmaError::IncompatibleClasses);
                }
                out[c] = d;
            }
            if out.contains(&usize::MAX) {
                return Err(SigmaError::IncompatibleClasses);
            }
            Ok(out)
        };
        let act = self
            .act
            .iter()
            .map(|p| induce(p))
            .collect::<Result<Vec<_>, _>>()?;
        let neg = induce(&self.neg)?;
        SigmaSet::new(self.frame.clone(), act, neg)
    }

    /// Restriction to a Σ-stable subset, reindexed in increasing order.
    pub fn restrict(&self, subset: &[usize]) -> Result<SigmaSet, SigmaError> {
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &i) in subset.iter().enumerate() {
            if i >= self.len() {
                return Err(SigmaError::UnknownIndex(i));
            }
            pos[i] = k;
        }
        let induce = |p: &[usize]| -> Result<Perm, SigmaError> {
            subset
                .iter()
                .map(|&i| match pos[p[i]] {
                    usize::MAX => Err(SigmaError::UnstableSubset),
                    k => Ok(k),
                })
                .collect()
        };
        let act = self
            .act
            .iter()
            .map(|p| induce(p))
            .collect::<Result<Vec<_>, _>>()?;
        let neg = induce(&self.neg)?;
        SigmaSet::new(self.frame.clone(), act, neg)
    }

    fn check(&self, i: usize) -> Result<(), SigmaError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(SigmaError::UnknownIndex(i))
        }
    }

    pub fn gamma_orbit(&self, i: usize) -> BTreeSet<usize> {
        self.act.iter().map(|a| a[i]).collect()
    }

    pub fn inertia_orbit(&self, i: usize) -> BTreeSet<usize> {
        self.act
            .iter()
            .enumerate()
            .filter(|(g, _)| self.frame.is_inertia(*g))
            .map(|(_, a)| a[i])
            .collect()
    }

    pub fn stabilizer(&self, i: usize) -> Vec<usize> {
        (0..self.frame.order())
            .filter(|&g| self.act[g][i] == i)
            .collect()
    }

    pub fn classify(&self, i: usize) -> Result<OrbitClass, SigmaError> {
        self.check(i)?;
        let gamma = self.gamma_orbit(i);
        let inert = self.inertia_orbit(i);
        let e = inert.len();
        let f = gamma.len() / e;
        let ni = self.neg[i];
        let kind = if !gamma.contains(&ni) {
            OrbitKind::Asymmetric
        } else if inert.contains(&ni) {
            OrbitKind::SymmetricRamified
        } else {
            OrbitKind::SymmetricUnramified
        };
        let f_pm = if kind == OrbitKind::SymmetricUnramified {
            f / 2
        } else {
            f
        };
        Ok(OrbitClass { kind, e, f, f_pm })
    }

    fn orbit_of(&self, i: usize, under: Under) -> BTreeSet<usize> {
        match under {
            Under::Gamma => self.gamma_orbit(i),
            Under::Inertia => self.inertia_orbit(i),
            Under::Sigma => {
                let mut o = self.gamma_orbit(i);
                o.extend(self.gamma_orbit(self.neg[i]));
                o
            }
        }
    }

    /// Orbit partition, each orbit sorted, orbits ordered by least element.
    pub fn orbits(&self, under: Under) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.len()];
        let mut out = Vec::new();
        for i in 0..self.len() {
            if done[i] {
                continue;
            }
            let o: Vec<usize> = self.orbit_of(i, under).into_iter().collect();
            for &j in &o {
                done[j] = true;
            }
            out.push(o);
        }
        out
    }

    /// Least element of the orbit of `i`.
    pub fn orbit_rep(&self, i: usize, under: Under) -> usize {
        *self
            .orbit_of(i, under)
            .iter()
            .next()
            .expect("orbits are nonempty")
    }

    /// Orbit representatives (least elements).
    pub fn reps(&self, under: Under) -> Vec<usize> {
        self.orbits(under).into_iter().map(|o| o[0]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_gives_asymmetric() {
        let frame = GaloisFrame::generate(2, &[], &[], &[0, 1]).unwrap();
        let s = SigmaSet::on_frame_points(frame, vec![1, 0]).unwrap();
        let c = s.classify(0).unwrap();
        assert_eq!(c.kind, OrbitKind::Asymmetric);
        assert_eq!((c.e, c.f), (1, 1));
        assert_eq!(s.classify(2), Err(SigmaError::UnknownIndex(2)));
    }

    #[test]
    fn swap_in_inertia_is_ramified() {
        let frame = GaloisFrame::generate(2, &[], &[vec![1, 0]], &[0, 1]).unwrap();
        let s = SigmaSet::on_frame_points(frame, vec![1, 0]).unwrap();
        let c = s.classify(0).unwrap();
        assert_eq!(c.kind, OrbitKind::SymmetricRamified);
        assert_eq!((c.e, c.f, c.f_pm), (2, 1, 1));
    }

    #[test]
    fn unramified_swap() {
        let frame = GaloisFrame::generate(2, &[], &[], &[1, 0]).unwrap();
        let s = SigmaSet::on_frame_points(frame.clone(), vec![1, 0]).unwrap();
        let c = s.classify(1).unwrap();
        assert_eq!(c.kind, OrbitKind::SymmetricUnramified);
        assert_eq!((c.e, c.f, c.f_pm), (1, 2, 1));
        assert_eq!(frame.f_total(), 2);
        assert_eq!(frame.frob_image(frame.frob()), 1);
    }

    #[test]
    fn free_z3_on_six_points() {
        let rot = vec![1, 2, 0, 4, 5, 3];
        let frame = GaloisFrame::generate(6, &[], &[], &rot).unwrap();
        let s = SigmaSet::on_frame_points(frame, vec![3, 4, 5, 0, 1, 2]).unwrap();
        assert_eq!(s.orbits(Under::Gamma), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(s.orbits(Under::Sigma).len(), 1);
        assert_eq!(s.classify(4).unwrap().f, 3);
    }

    #[test]
    fn tame_relation() {
        // S3 on three points: inertia the rotations, Frobenius a transposition.
        let rot = vec![1, 2, 0];
        let swap = vec![1, 0, 2];
        let frame = GaloisFrame::generate(3, &[], &[rot], &swap).unwrap();
        assert_eq!(frame.order(), 6);
        assert_eq!(frame.f_total(), 2);
        assert!(frame.check_tame(5, 5).is_ok());
        assert_eq!(frame.check_tame(7, 7), Err(SigmaError::TameRelation));
        assert_eq!(frame.check_tame(3, 3), Err(SigmaError::WildInertia(3)));
    }

    #[test]
    fn non_normal_inertia_rejected() {
        let rot = vec![1, 2, 0];
        let swap = vec![1, 0, 2];
        assert_eq!(
            GaloisFrame::generate(3, &[rot], std::slice::from_ref(&swap), &swap).unwrap_err(),
            SigmaError::InertiaNotNormal
        );
    }

    #[test]
    fn quotient_and_restrict() {
        let rot = vec![1, 2, 0, 4, 5, 3];
        let frame = GaloisFrame::generate(6, &[], &[], &rot).unwrap();
        let s = SigmaSet::on_frame_points(frame, vec![3, 4, 5, 0, 1, 2]).unwrap();
        let q = s.quotient(&[0, 0, 0, 1, 1, 1]).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.classify(0).unwrap().kind, OrbitKind::Asymmetric);
        assert!(s.quotient(&[0, 1, 0, 1, 1, 1]).is_err());
        assert_eq!(s.restrict(&[0, 1]).unwrap_err(), SigmaError::UnstableSubset);
    }
}
