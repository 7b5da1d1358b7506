//! Built-in scenarios.

use std::collections::BTreeMap;

use crate::rootsys::{CartanType, RootSystem};
use crate::scenario::{Scenario, ScenarioDoc, ScenarioError};

pub const PRESETS: &[&str] = &[
    "pgl2-split",
    "pgl2-unram",
    "pgl2-ramified",
    "a2-z3",
    "a2-z3-p5",
    "a2-s3",
    "pgsp4-siegel",
    "pgsp4-siegel-mixed",
    "pgsp4-siegel-unram",
    "g2-mix",
];

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

struct Builder {
    rs: RootSystem,
    doc: ScenarioDoc,
}

impl Builder {
    fn new(name: &str, types: &[CartanType], p: u32, r: &str) -> Builder {
        let rs = RootSystem::of_types(types);
        let doc = ScenarioDoc {
            name: Some(name.to_string()),
            p,
            base_degree: 1,
            roots: rs.roots().to_vec(),
            levi: vec![],
            gamma_generators: vec![],
            inertia_generators: vec![],
            frobenius: None,
            restriction: None,
            lengths: None,
            depth_r: r.to_string(),
            offsets: BTreeMap::new(),
            toral_invariants: BTreeMap::new(),
            a_residues: BTreeMap::new(),
        };
        Builder { rs, doc }
    }

    fn idx(&self, v: &[i64]) -> usize {
        self.rs.index_of(v).expect("preset root")
    }

    fn neg(&self) -> Vec<usize> {
        (0..self.rs.len()).map(|i| self.rs.neg(i)).collect()
    }

    fn refl(&self, i: usize) -> Vec<usize> {
        let n = self.rs.rank();
        let mut e = vec![0; n];
        e[i] = 1;
        let ee = self.rs.form(&e, &e);
        (0..self.rs.len())
            .map(|k| {
                let v = &self.rs.roots()[k];
                let c = 2 * self.rs.form(v, &e) / ee;
                let mut w = v.clone();
                w[i] -= c;
                self.idx(&w)
            })
            .collect()
    }

    fn levi(mut self, roots: &[&[i64]]) -> Self {
        self.doc.levi = roots.iter().map(|r| self.idx(r)).collect();
        self
    }

    fn gamma(mut self, gens: Vec<Vec<usize>>, frob: Option<usize>) -> Self {
        self.doc.gamma_generators = gens;
        self.doc.frobenius = frob;
        self
    }

    fn inertia(mut self, gens: Vec<Vec<usize>>) -> Self {
        self.doc.inertia_generators = gens;
        self
    }

    fn offset(mut self, root: &[i64], t: &str) -> Self {
        let i = self.idx(root);
        self.doc.offsets.insert(i, t.to_string());
        self
    }

    fn toral(mut self, root: &[i64], v: i64) -> Self {
        let i = self.idx(root);
        self.doc.toral_invariants.insert(i, v);
        self
    }
}

/// Document for a named preset.
pub fn preset_doc(name: &str) -> Result<ScenarioDoc, ScenarioError> {
    use CartanType::*;
    let b = match name {
        "pgl2-split" => Builder::new(name, &[A(1)], 3, "1").offset(&[1], "1/2"),
        "pgl2-unram" => {
            let b = Builder::new(name, &[A(1)], 3, "1");
            let n = b.neg();
            b.gamma(vec![n], Some(0)).offset(&[1], "1/2")
        }
        "pgl2-ramified" => {
            let b = Builder::new(name, &[A(1)], 3, "1/2");
            let n = b.neg();
            b.inertia(vec![n]).toral(&[1], -1)
        }
        "a2-z3" | "a2-z3-p5" => {
            let p = if name == "a2-z3" { 3 } else { 5 };
            let b = Builder::new(name, &[A(2)], p, "1");
            let c = compose(&b.refl(0), &b.refl(1));
            b.gamma(vec![c], Some(0)).offset(&[1, 0], "1/2")
        }
        "a2-s3" => {
            let b = Builder::new(name, &[A(2)], 5, "1/3");
            let c = compose(&b.refl(0), &b.refl(1));
            let s = b.refl(0);
            b.gamma(vec![s], Some(0))
                .inertia(vec![c])
                .offset(&[1, 0], "1/6")
        }
        "pgsp4-siegel" | "pgsp4-siegel-mixed" => {
            let b = Builder::new(name, &[C(2)], 3, "1/2").levi(&[&[1, 0], &[-1, 0]]);
            let s = b.refl(0);
            let tau = compose(&b.neg(), &s);
            let b = b.inertia(vec![tau]).toral(&[1, 1], -1);
            if name == "pgsp4-siegel" {
                b.offset(&[0, 1], "1/8")
            } else {
                b.gamma(vec![s], Some(0)).offset(&[0, 1], "1/4")
            }
        }
        "pgsp4-siegel-unram" => {
            let b = Builder::new(name, &[C(2)], 3, "1").levi(&[&[1, 0], &[-1, 0]]);
            let s = b.refl(0);
            let n = b.neg();
            b.gamma(vec![n], Some(0))
                .inertia(vec![s])
                .offset(&[0, 1], "1/2")
                .offset(&[1, 1], "0")
        }
        "g2-mix" => {
            let b = Builder::new(name, &[G2], 5, "1/2");
            let n = b.neg();
            b.inertia(vec![n])
                .toral(&[1, 0], -1)
                .toral(&[0, 1], -1)
                .toral(&[1, 1], -1)
        }
        _ => return Err(ScenarioError::UnknownPreset(name.to_string())),
    };
    Ok(b.doc)
}

pub fn preset(name: &str) -> Result<Scenario, ScenarioError> {
    Scenario::load(&preset_doc(name)?)
}

pub fn all_presets() -> Vec<Scenario> {
    PRESETS
        .iter()
        .map(|n| preset(n).expect("presets are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma_set::OrbitKind::*;

    #[test]
    fn presets_load() {
        for name in PRESETS {
            let sc = preset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(sc.name(), *name);
        }
    }

    #[test]
    fn a1_kinds() {
        assert_eq!(preset("pgl2-split").unwrap().kind(0), Asymmetric);
        let u = preset("pgl2-unram").unwrap();
        assert_eq!(u.kind(0), SymmetricUnramified);
        assert_eq!(u.ambient().order(), 9);
        assert_eq!(preset("pgl2-ramified").unwrap().kind(0), SymmetricRamified);
    }

    #[test]
    fn a2_classes() {
        let z3 = preset("a2-z3").unwrap();
        assert!((0..6).all(|a| z3.kind(a) == Asymmetric && z3.f(a) == 3));
        assert_eq!(z3.ambient().order(), 27);
        let s3 = preset("a2-s3").unwrap();
        assert!((0..6).all(|a| s3.kind(a) == SymmetricUnramified && s3.e(a) == 3 && s3.f(a) == 2));
    }

    #[test]
    fn siegel_classes() {
        let sc = preset("pgsp4-siegel").unwrap();
        let rs = sc.root_system();
        let al = rs.index_of(&[0, 1]).unwrap();
        let mid = rs.index_of(&[1, 1]).unwrap();
        assert_eq!(sc.kind(al), Asymmetric);
        assert_eq!(sc.class0(al).kind, SymmetricRamified);
        assert_eq!(sc.rel_ramification(al).unwrap(), 1);
        assert_eq!(sc.kind(mid), SymmetricRamified);
        assert_eq!(sc.weights().len(), 2);
        let mixed = preset("pgsp4-siegel-mixed").unwrap();
        assert_eq!(mixed.kind(al), SymmetricUnramified);
        assert_eq!(mixed.class0(al).kind, SymmetricRamified);
        let unram = preset("pgsp4-siegel-unram").unwrap();
        assert_eq!(unram.class0(al).kind, SymmetricUnramified);
    }

    #[test]
    fn doc_round_trip() {
        for name in PRESETS {
            let sc = preset(name).unwrap();
            let doc = sc.to_doc();
            let again = Scenario::from_json(&doc.to_json()).unwrap();
            assert_eq!(again.to_doc(), doc, "{name}");
        }
    }
}
