//! Points of the residual torus, as Galois-equivariant root values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{FqElem, GfError};
use crate::rootsys::apply;
use crate::scenario::Scenario;
use crate::sigma_set::OrbitKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("unknown root {0}")]
    UnknownRoot(usize),
    #[error("enumeration too large: rank {rank}, |K| = {order}")]
    TooLarge { rank: usize, order: u32 },
    #[error("point is not equivariant at root {0}")]
    NotEquivariant(usize),
    #[error("value at root {0} leaves its residue field")]
    OutsideResidueField(usize),
    #[error("value at root {0} is not norm one")]
    NotNormOne(usize),
    #[error("value at root {0} is not ±1")]
    NotSign(usize),
    #[error("wrong number of basis values: expected {0}")]
    Arity(usize),
    #[error("bad point spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A point: values on the simple roots, and the induced values on all roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    basis: Vec<FqElem>,
    roots: Vec<FqElem>,
}

fn lattice_value(basis: &[FqElem], v: &[i64]) -> FqElem {
    let one = basis[0].field().one();
    v.iter()
        .zip(basis)
        .fold(one, |acc, (&c, &b)| acc * b.pow(c).expect("units"))
}

impl TorusPoint {
    fn from_basis_unchecked(sc: &Scenario, basis: Vec<FqElem>) -> TorusPoint {
        let roots = (0..sc.num_roots())
            .map(|a| lattice_value(&basis, sc.root(a)))
            .collect();
        TorusPoint { basis, roots }
    }

    pub fn identity(sc: &Scenario) -> TorusPoint {
        TorusPoint::from_basis_unchecked(sc, vec![sc.ambient().one(); sc.rank()])
    }

    /// Point with the given values on the simple roots; validated.
    pub fn from_basis(sc: &Scenario, basis: Vec<FqElem>) -> Result<TorusPoint, TorusError> {
        if basis.len() != sc.rank() {
            return Err(TorusError::Arity(sc.rank()));
        }
        let amb = sc.ambient();
        let basis = basis
            .into_iter()
            .map(|x| amb.embed(x))
            .collect::<Result<Vec<_>, _>>()?;
        if basis.iter().any(|x| x.is_zero()) {
            return Err(TorusError::Field(GfError::ZeroInput));
        }
        let pt = TorusPoint::from_basis_unchecked(sc, basis);
        pt.validate(sc)?;
        Ok(pt)
    }

    /// Parse `v1;v2;...`, each value as accepted by the ambient field parser.
    pub fn parse(sc: &Scenario, spec: &str) -> Result<TorusPoint, TorusError> {
        let amb = sc.ambient();
        let basis = spec
            .split(';')
            .map(|s| {
                amb.parse_elem(s)
                    .map_err(|e| TorusError::Spec(format!("{s:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        TorusPoint::from_basis(sc, basis)
    }

    /// Inverse of [`TorusPoint::parse`], using generator powers.
    pub fn spec(&self) -> String {
        self.basis
            .iter()
            .map(|b| format!("g^{}", b.log().expect("units")))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn basis(&self) -> &[FqElem] {
        &self.basis
    }

    pub fn evaluate(&self, a: usize) -> Result<FqElem, TorusError> {
        self.roots.get(a).copied().ok_or(TorusError::UnknownRoot(a))
    }

    /// `α(γ)`; panics on an unknown root.
    pub fn value(&self, a: usize) -> FqElem {
        self.roots[a]
    }

    /// Value on an arbitrary lattice vector.
    pub fn value_on(&self, v: &[i64]) -> FqElem {
        lattice_value(&self.basis, v)
    }

    pub fn mul(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint {
            basis: self
                .basis
                .iter()
                .zip(&other.basis)
                .map(|(a, b)| *a * *b)
                .collect(),
            roots: self
                .roots
                .iter()
                .zip(&other.roots)
                .map(|(a, b)| *a * *b)
                .collect(),
        }
    }

    pub fn inv(&self) -> TorusPoint {
        TorusPoint {
            basis: self.basis.iter().map(|a| a.inv().unwrap()).collect(),
            roots: self.roots.iter().map(|a| a.inv().unwrap()).collect(),
        }
    }

    pub fn validate(&self, sc: &Scenario) -> Result<(), TorusError> {
        let frame = sc.frame();
        let base = sc.base_field();
        for a in 0..sc.num_roots() {
            let v = self.roots[a];
            for g in 0..frame.order() {
                let b = sc.root_set().act(g, a);
                if self.roots[b] != v.frobenius(&base, frame.frob_image(g) as i64)? {
                    return Err(TorusError::NotEquivariant(a));
                }
            }
            if self.roots[sc.neg(a)] != v.inv()? {
                return Err(TorusError::NotEquivariant(a));
            }
            if !v.in_subfield(sc.k_field(a).degree()) {
                return Err(TorusError::OutsideResidueField(a));
            }
            match sc.kind(a) {
                OrbitKind::SymmetricUnramified => {
                    if !v.norm(&sc.k_pm_field(a))?.is_one() {
                        return Err(TorusError::NotNormOne(a));
                    }
                }
                OrbitKind::SymmetricRamified => {
                    if !(v.is_one() || (-v).is_one()) {
                        return Err(TorusError::NotSign(a));
                    }
                }
                OrbitKind::Asymmetric => {}
            }
        }
        Ok(())
    }
}

/// Norm element `α ↦ Π_σ Frob^{d(σ)}(t)^{⟨σ⁻¹α, λ⟩}`; `λ` given by its values on the simple roots.
pub fn norm_point(sc: &Scenario, t: FqElem, lambda: &[i64]) -> TorusPoint {
    let frame = sc.frame();
    let base = sc.base_field();
    let n = sc.rank();
    let basis = (0..n)
        .map(|j| {
            let e: Vec<i64> = (0..n).map(|i| i64::from(i == j)).collect();
            (0..frame.order()).fold(sc.ambient().one(), |acc, g| {
                let v = apply(sc.gamma_matrix(frame.inv(g)), &e);
                let k: i64 = v.iter().zip(lambda).map(|(a, b)| a * b).sum();
                let ft = t.frobenius(&base, frame.frob_image(g) as i64).unwrap();
                acc * ft.pow(k).unwrap()
            })
        })
        .collect();
    TorusPoint::from_basis_unchecked(sc, basis)
}

/// Log-linear equivariance constraints: for each generator, a matrix, and the power of q.
fn constraints(sc: &Scenario) -> Vec<(Vec<Vec<i64>>, u64)> {
    let frame = sc.frame();
    let q = sc.q();
    let m = sc.ambient().order() as u64 - 1;
    let mut gens: Vec<usize> = (0..frame.order()).collect();
    if frame.order() > 8 {
        gens = generator_indices(sc);
    }
    gens.into_iter()
        .map(|g| {
            let mut qd = 1u64;
            for _ in 0..frame.frob_image(g) {
                qd = qd * q % m;
            }
            (sc.gamma_matrix(g).to_vec(), qd)
        })
        .collect()
}

fn generator_indices(sc: &Scenario) -> Vec<usize> {
    let frame = sc.frame();
    // a small generating set: greedily add elements until the closure is everything
    let mut gens: Vec<usize> = Vec::new();
    let mut span: Vec<bool> = vec![false; frame.order()];
    span[frame.identity()] = true;
    for g in 0..frame.order() {
        if span[g] {
            continue;
        }
        gens.push(g);
        let mut elems: Vec<usize> = vec![frame.identity()];
        let mut seen = vec![false; frame.order()];
        seen[frame.identity()] = true;
        let mut i = 0;
        while i < elems.len() {
            for &h in &gens {
                let x = frame.mul(h, elems[i]);
                if !seen[x] {
                    seen[x] = true;
                    elems.push(x);
                }
            }
            i += 1;
        }
        span = seen;
    }
    gens
}

fn satisfies(logs: &[u64], cons: &[(Vec<Vec<i64>>, u64)], m: u64) -> bool {
    let n = logs.len();
    cons.iter().all(|(mat, qd)| {
        (0..n).all(|j| {
            // value(σ e_j) = Π_i v_i^{M[i][j]} must equal v_j^{q^d}
            let lhs = (0..n).fold(0i128, |acc, i| acc + mat[i][j] as i128 * logs[i] as i128);
            let rhs = logs[j] as i128 * *qd as i128;
            (lhs - rhs).rem_euclid(m as i128) == 0
        })
    })
}

fn points_from_logs(sc: &Scenario, logs: &[u64]) -> TorusPoint {
    let g = sc.ambient().generator();
    TorusPoint::from_basis_unchecked(sc, logs.iter().map(|&l| g.pow(l as i64).unwrap()).collect())
}

/// All equivariant points whose basis values are ±1.
pub fn sign_points(sc: &Scenario) -> Vec<TorusPoint> {
    let n = sc.rank();
    let m = sc.ambient().order() as u64 - 1;
    let cons = constraints(sc);
    (0..1u64 << n)
        .map(|mask| {
            (0..n)
                .map(|j| ((mask >> j) & 1) * (m / 2))
                .collect::<Vec<u64>>()
        })
        .filter(|logs| satisfies(logs, &cons, m))
        .map(|logs| points_from_logs(sc, &logs))
        .collect()
}

/// A random point: a product of norm elements and a sign point.
pub fn generate<R: Rng>(sc: &Scenario, rng: &mut R) -> TorusPoint {
    let amb = sc.ambient();
    let units = amb.order() as i64 - 1;
    let mut pt = TorusPoint::identity(sc);
    for _ in 0..2 {
        let t = amb.generator().pow(rng.gen_range(0..units)).unwrap();
        let lambda: Vec<i64> = (0..sc.rank()).map(|_| rng.gen_range(-2..=2)).collect();
        pt = pt.mul(&norm_point(sc, t, &lambda));
    }
    let signs = sign_points(sc);
    pt.mul(&signs[rng.gen_range(0..signs.len())])
}

pub fn generate_seeded(sc: &Scenario, seed: u64) -> TorusPoint {
    generate(sc, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub const ENUM_MAX_RANK: usize = 3;
pub const ENUM_MAX_FIELD: u32 = 81;

/// Every equivariant point, by exhausting logarithms of the basis values.
pub fn enumerate_all(sc: &Scenario) -> Result<Vec<TorusPoint>, TorusError> {
    let n = sc.rank();
    let order = sc.ambient().order();
    if n > ENUM_MAX_RANK || order > ENUM_MAX_FIELD {
        return Err(TorusError::TooLarge { rank: n, order });
    }
    let m = order as u64 - 1;
    let cons = constraints(sc);
    let mut out = Vec::new();
    let mut logs = vec![0u64; n];
    loop {
        if satisfies(&logs, &cons, m) {
            out.push(points_from_logs(sc, &logs));
        }
        let mut j = 0;
        while j < n {
            logs[j] += 1;
            if logs[j] < m {
                break;
            }
            logs[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
    }
    Ok(out)
}

/// Enumerated points when small enough, otherwise `fallback` generated ones.
pub fn sample_points(sc: &Scenario, fallback: usize, seed: u64) -> Vec<TorusPoint> {
    enumerate_all(sc).unwrap_or_else(|_| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..fallback).map(|_| generate(sc, &mut rng)).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    #[test]
    fn a1_counts() {
        assert_eq!(
            enumerate_all(&preset("pgl2-split").unwrap()).unwrap().len(),
            2
        );
        assert_eq!(
            enumerate_all(&preset("pgl2-unram").unwrap()).unwrap().len(),
            4
        );
        let ram = preset("pgl2-ramified").unwrap();
        let pts = enumerate_all(&ram).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| p.validate(&ram).is_ok()));
    }

    #[test]
    fn identity_is_one() {
        let sc = preset("a2-s3").unwrap();
        let id = TorusPoint::identity(&sc);
        assert!((0..sc.num_roots()).all(|a| id.value(a).is_one()));
        assert_eq!(id.evaluate(99), Err(TorusError::UnknownRoot(99)));
    }

    #[test]
    fn too_large_guard() {
        let sc = preset("a2-z3-p5").unwrap();
        assert!(matches!(
            enumerate_all(&sc),
            Err(TorusError::TooLarge { .. })
        ));
    }

    #[test]
    fn spec_round_trip() {
        let sc = preset("a2-z3").unwrap();
        let pt = generate_seeded(&sc, 4);
        assert_eq!(TorusPoint::parse(&sc, &pt.spec()).unwrap(), pt);
        assert!(TorusPoint::parse(&sc, "1").is_err());
    }
}
