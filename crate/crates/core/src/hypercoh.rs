//! Hypercocycles of the doubling complex `X --2--> X` and their sign characters.

use std::sync::Arc;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{FieldDesc, FqElem, GfError, SquareClass};
use crate::quadspace::norm_between;
use crate::sigma_set::{GaloisFrame, OrbitKind, SigmaError, SigmaSet, Under};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("positive part is not a half of the set")]
    BadPartition,
    #[error("negation fixes index {0}")]
    FixedPointUnderNegation(usize),
    #[error("characters are not equivariant at index {0}")]
    NotEquivariant(usize),
    #[error("no evaluation context: {0}")]
    ContextMissing(String),
    #[error("value at index {0} is not norm one")]
    NotNormOne(usize),
    #[error("value at index {0} leaves its residue field")]
    OutsideResidueField(usize),
    #[error("ramified symmetric index {0} has no formula")]
    Ramified(usize),
    #[error("lattice action matrix is not invertible over Z or has no finite order")]
    BadAction,
    #[error("point is not equivariant")]
    BadPoint,
    #[error("Frobenius value {0} is not a sign")]
    NotSign(String),
    #[error("too many points to enumerate")]
    TooLarge,
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type LVec = Vec<i64>;

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> LVec {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b[0].len();
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().enumerate().map(|(k, x)| x * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn add(a: &[i64], b: &[i64]) -> LVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> LVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(c: i64, a: &[i64]) -> LVec {
    a.iter().map(|x| c * x).collect()
}

/// A free lattice with Frobenius acting by an integer matrix of finite order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharLattice {
    rank: usize,
    powers: Vec<Vec<Vec<i64>>>,
}

impl CharLattice {
    pub fn new(frob: Vec<Vec<i64>>) -> Result<CharLattice, HyperError> {
        let n = frob.len();
        if frob.iter().any(|r| r.len() != n) {
            return Err(HyperError::BadAction);
        }
        let id = identity(n);
        let mut powers = vec![id.clone()];
        let mut cur = frob.clone();
        while cur != id {
            if powers.len() > 64 {
                return Err(HyperError::BadAction);
            }
            powers.push(cur.clone());
            cur = mat_mul(&frob, &cur);
        }
        Ok(CharLattice { rank: n, powers })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Order of the Frobenius matrix.
    pub fn order(&self) -> usize {
        self.powers.len()
    }

    pub fn frob_matrix(&self) -> &[Vec<i64>] {
        &self.powers[1 % self.powers.len()]
    }

    /// `F^k χ`.
    pub fn act(&self, k: usize, chi: &[i64]) -> LVec {
        mat_vec(&self.powers[k % self.powers.len()], chi)
    }
}

/// Lattice, Galois frame, base field `k` and the field `K ⊇ k` holding values.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub lattice: CharLattice,
    pub frame: Arc<GaloisFrame>,
    pub base: FieldDesc,
    pub field: FieldDesc,
}

/// A `k`-point of the torus with character lattice `X`: values on the basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupPoint {
    pub basis: Vec<FqElem>,
}

impl EvalContext {
    pub fn new(
        lattice: CharLattice,
        frame: Arc<GaloisFrame>,
        base: FieldDesc,
        field: FieldDesc,
    ) -> Result<EvalContext, HyperError> {
        if !frame.f_total().is_multiple_of(lattice.order()) {
            return Err(HyperError::BadAction);
        }
        if !base.divides(&field) || !frame.f_total().is_multiple_of((field.degree() / base.degree()) as usize)
        {
            return Err(HyperError::ContextMissing(
                "Frobenius period does not divide the frame".into(),
            ));
        }
        Ok(EvalContext {
            lattice,
            frame,
            base,
            field,
        })
    }

    /// `σ χ`, through the residue Frobenius power of `σ`.
    pub fn act(&self, g: usize, chi: &[i64]) -> LVec {
        self.lattice.act(self.frame.frob_image(g), chi)
    }

    pub fn eval(&self, chi: &[i64], g: &GroupPoint) -> FqElem {
        chi.iter()
            .zip(&g.basis)
            .fold(self.field.one(), |acc, (&c, &b)| {
                acc * b.pow(c).expect("units")
            })
    }

    pub fn frob(&self, x: FqElem) -> FqElem {
        x.frobenius(&self.base, 1).expect("base divides field")
    }

    /// `(Fχ)(g) = Frob(χ(g))` on the basis.
    pub fn is_point(&self, g: &GroupPoint) -> bool {
        g.basis.len() == self.lattice.rank()
            && g.basis
                .iter()
                .all(|b| !b.is_zero() && b.field() == self.field)
            && (0..self.lattice.rank()).all(|j| {
                let mut e = vec![0; self.lattice.rank()];
                e[j] = 1;
                self.eval(&self.lattice.act(1, &e), g) == self.frob(g.basis[j])
            })
    }

    /// `χ ↦ Π_i Frob^i(t)^{⟨F^{-i}χ, λ⟩}` over one period of the frame.
    pub fn norm_point(&self, t: FqElem, lambda: &[i64]) -> GroupPoint {
        let n = self.lattice.rank();
        let period = self.frame.f_total();
        let basis = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                (0..period).fold(self.field.one(), |acc, i| {
                    let inv = (period - i % period) % period;
                    let v = self.lattice.act(inv, &e);
                    let k: i64 = v.iter().zip(lambda).map(|(a, b)| a * b).sum();
                    acc * t.frobenius(&self.base, i as i64).unwrap().pow(k).unwrap()
                })
            })
            .collect();
        GroupPoint { basis }
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> GroupPoint {
        let units = self.field.order() as i64 - 1;
        let n = self.lattice.rank();
        let mut basis = vec![self.field.one(); n];
        for _ in 0..2 {
            let t = self.field.generator().pow(rng.gen_range(0..units)).unwrap();
            let lambda: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            let p = self.norm_point(t, &lambda);
            basis = basis.iter().zip(&p.basis).map(|(a, b)| *a * *b).collect();
        }
        GroupPoint { basis }
    }

    /// Every point, when there are at most `limit` candidates.
    pub fn enumerate_points(&self, limit: u64) -> Result<Vec<GroupPoint>, HyperError> {
        let n = self.lattice.rank() as u32;
        let m = self.field.order() as u64 - 1;
        if m.checked_pow(n).is_none_or(|c| c > limit) {
            return Err(HyperError::TooLarge);
        }
        let q = self.base.order() as u64;
        let fm = self.lattice.frob_matrix();
        let n = n as usize;
        let mut out = Vec::new();
        let mut logs = vec![0u64; n];
        let g = self.field.generator();
        loop {
            let ok = (0..n).all(|j| {
                let lhs: i128 = (0..n).map(|i| fm[i][j] as i128 * logs[i] as i128).sum();
                (lhs - logs[j] as i128 * q as i128).rem_euclid(m as i128) == 0
            });
            if ok {
                out.push(GroupPoint {
                    basis: logs.iter().map(|&l| g.pow(l as i64).unwrap()).collect(),
                });
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
}

/// A pair `(ρ, δ)` with `(1-σ)δ = 2ρ_σ` and `ρ` a cocycle; `ρ` indexed by frame elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperCocycle {
    pub rho: Vec<LVec>,
    pub delta: LVec,
}

impl HyperCocycle {
    pub fn is_valid(&self, ctx: &EvalContext) -> bool {
        let fr = &ctx.frame;
        (0..fr.order()).all(|s| {
            scale(2, &self.rho[s]) == sub(&self.delta, &ctx.act(s, &self.delta))
                && (0..fr.order())
                    .all(|t| self.rho[fr.mul(s, t)] == add(&self.rho[s], &ctx.act(s, &self.rho[t])))
        })
    }

    pub fn add(&self, other: &HyperCocycle) -> HyperCocycle {
        HyperCocycle {
            rho: self
                .rho
                .iter()
                .zip(&other.rho)
                .map(|(a, b)| add(a, b))
                .collect(),
            delta: add(&self.delta, &other.delta),
        }
    }

    /// Image of `χ` in degree zero: `ρ_σ = χ - σχ`, `δ = 2χ`.
    pub fn coboundary(ctx: &EvalContext, chi: &[i64]) -> HyperCocycle {
        HyperCocycle {
            rho: (0..ctx.frame.order())
                .map(|s| sub(chi, &ctx.act(s, chi)))
                .collect(),
            delta: scale(2, chi),
        }
    }

    /// Pullback along `f^*: X → X'`, given as a matrix.
    pub fn pullback(&self, f: &[Vec<i64>]) -> HyperCocycle {
        HyperCocycle {
            rho: self.rho.iter().map(|r| mat_vec(f, r)).collect(),
            delta: mat_vec(f, &self.delta),
        }
    }
}

/// Default positive half: the lesser of each pair `{i, -i}`.
pub fn default_positive(s: &SigmaSet) -> Vec<usize> {
    (0..s.len()).filter(|&i| i < s.neg(i)).collect()
}

fn check_sigma(s: &SigmaSet, chars: &[LVec], ctx: &EvalContext) -> Result<(), HyperError> {
    if chars.len() != s.len() {
        return Err(HyperError::ContextMissing("one character per index".into()));
    }
    for i in 0..s.len() {
        if s.neg(i) == i {
            return Err(HyperError::FixedPointUnderNegation(i));
        }
        if chars[s.neg(i)] != scale(-1, &chars[i]) {
            return Err(HyperError::NotEquivariant(i));
        }
        for g in 0..s.frame().order() {
            if chars[s.act(g, i)] != ctx.act(g, &chars[i]) {
                return Err(HyperError::NotEquivariant(i));
            }
        }
    }
    Ok(())
}

/// `δ = Σ_{S⁺} χ_i`, `ρ_σ = Σ_{i ∈ S⁺ ∩ σS⁻} χ_i`.
pub fn from_sigma_set(
    s: &SigmaSet,
    positive: &[usize],
    chars: &[LVec],
    ctx: &EvalContext,
) -> Result<HyperCocycle, HyperError> {
    check_sigma(s, chars, ctx)?;
    let mut pos = vec![false; s.len()];
    for &i in positive {
        if i >= s.len() || pos[i] {
            return Err(HyperError::BadPartition);
        }
        pos[i] = true;
    }
    if (0..s.len()).any(|i| pos[i] == pos[s.neg(i)]) {
        return Err(HyperError::BadPartition);
    }
    let n = ctx.lattice.rank();
    let fr = s.frame();
    let mut delta = vec![0; n];
    for &i in positive {
        delta = add(&delta, &chars[i]);
    }
    let rho = (0..fr.order())
        .map(|g| {
            let ginv = fr.inv(g);
            positive
                .iter()
                .filter(|&&i| !pos[s.act(ginv, i)])
                .fold(vec![0; n], |acc, &i| add(&acc, &chars[i]))
        })
        .collect();
    Ok(HyperCocycle { rho, delta })
}

/// `a + b√c` over `K`.
#[derive(Clone, Copy, Debug)]
struct QuadElem {
    a: FqElem,
    b: FqElem,
    c: FqElem,
}

impl QuadElem {
    fn mul(self, o: QuadElem) -> QuadElem {
        QuadElem {
            a: self.a * o.a + self.b * o.b * self.c,
            b: self.a * o.b + self.b * o.a,
            c: self.c,
        }
    }

    fn pow(self, mut e: u64) -> QuadElem {
        let f = self.a.field();
        let mut acc = QuadElem {
            a: f.one(),
            b: f.zero(),
            c: self.c,
        };
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }
}

/// `Frob(√x)/√x` with `√x` in `K` or in `K(√x)`.
fn frob_ratio_of_sqrt(x: FqElem, q: u64, negate_root: bool) -> Result<FqElem, HyperError> {
    let f = x.field();
    let sign = if negate_root { -f.one() } else { f.one() };
    match x.sqrt()? {
        Some(r) => {
            let r = sign * r;
            Ok(QuadElem {
                a: r,
                b: f.zero(),
                c: x,
            }
            .pow(q)
            .a / r)
        }
        None => {
            let y = QuadElem {
                a: f.zero(),
                b: sign,
                c: x,
            };
            let yq = y.pow(q);
            if !yq.a.is_zero() {
                return Err(HyperError::NotSign(format!("{:?}", yq.a)));
            }
            Ok(yq.b / sign)
        }
    }
}

fn to_class(ctx: &EvalContext, v: FqElem) -> Result<SquareClass, HyperError> {
    if v.is_one() {
        Ok(SquareClass::trivial(ctx.base))
    } else if (-v).is_one() {
        Ok(SquareClass::from_sign(ctx.base, -1))
    } else {
        Err(HyperError::NotSign(format!("{v:?}")))
    }
}

/// `ρ_F(g)·Frob(√δ(g))/√δ(g)`, a sign read as a class in `k^×/k^{×2}`.
pub fn eval_direct(
    hc: &HyperCocycle,
    ctx: &EvalContext,
    g: &GroupPoint,
) -> Result<SquareClass, HyperError> {
    eval_direct_with_root(hc, ctx, g, false)
}

/// As [`eval_direct`], optionally with the other square root.
pub fn eval_direct_with_root(
    hc: &HyperCocycle,
    ctx: &EvalContext,
    g: &GroupPoint,
    negate_root: bool,
) -> Result<SquareClass, HyperError> {
    if !ctx.is_point(g) {
        return Err(HyperError::BadPoint);
    }
    let rho_f = ctx.eval(&hc.rho[ctx.frame.frob()], g);
    let ratio = frob_ratio_of_sqrt(ctx.eval(&hc.delta, g), ctx.base.order() as u64, negate_root)?;
    to_class(ctx, rho_f * ratio)
}

/// Norms of orbit values, with Lang's map on symmetric orbits, read modulo squares.
pub fn eval_formula(
    s: &SigmaSet,
    chars: &[LVec],
    ctx: &EvalContext,
    g: &GroupPoint,
) -> Result<SquareClass, HyperError> {
    check_sigma(s, chars, ctx)?;
    if !ctx.is_point(g) {
        return Err(HyperError::BadPoint);
    }
    let p = ctx.base.p();
    let m = ctx.base.degree();
    let mut acc = ctx.field.one();
    for i in s.reps(Under::Gamma) {
        let cls = s.classify(i)?;
        let v = ctx.eval(&chars[i], g);
        let ki = FieldDesc::new(p, m * cls.f as u32)?;
        if !ki.divides(&ctx.field) || !v.in_subfield(ki.degree()) {
            return Err(HyperError::OutsideResidueField(i));
        }
        match cls.kind {
            OrbitKind::Asymmetric => {
                if s.orbit_rep(i, Under::Sigma) == i {
                    acc = acc * norm_between(v, &ki, &ctx.base);
                }
            }
            OrbitKind::SymmetricUnramified => {
                let kpm = FieldDesc::new(p, m * cls.f_pm as u32)?;
                let x = match v.lang(&kpm) {
                    Ok(x) => x,
                    Err(GfError::NotNormOne) => return Err(HyperError::NotNormOne(i)),
                    Err(e) => return Err(e.into()),
                };
                acc = acc * norm_between(x, &ki, &ctx.base);
            }
            OrbitKind::SymmetricRamified => return Err(HyperError::Ramified(i)),
        }
    }
    Ok(acc.sgn_in(&ctx.base)?)
}

/// A random Σ-set over a cyclic frame with equivariant characters, for testing.
#[derive(Debug, Clone)]
pub struct RandomContext {
    pub ctx: EvalContext,
    pub sigma: SigmaSet,
    pub chars: Vec<LVec>,
}

const QS: &[(u32, u32)] = &[
    (3, 1),
    (5, 1),
    (7, 1),
    (3, 2),
    (11, 1),
    (13, 1),
    (5, 2),
    (3, 3),
    (7, 2),
];

impl RandomContext {
    pub fn generate(seed: u64) -> RandomContext {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            if let Some(rc) = Self::attempt(&mut rng) {
                return rc;
            }
        }
    }

    fn attempt(rng: &mut ChaCha8Rng) -> Option<RandomContext> {
        let &(p, m) = QS.choose(rng)?;
        // orbits: (cycle length, symmetric?)
        let norbits = rng.gen_range(1..=3);
        let mut orbits = Vec::new();
        let mut size = 0;
        for _ in 0..norbits {
            let sym = rng.gen_bool(0.5);
            let len = if sym {
                2 * rng.gen_range(1..=2)
            } else {
                rng.gen_range(1..=3)
            };
            size += if sym { len } else { 2 * len };
            orbits.push((len, sym));
        }
        if size > 12 {
            return None;
        }
        let d = orbits.iter().fold(1usize, |acc, (l, _)| acc.lcm(l));
        let field_q = (p as u64).checked_pow(m * d as u32)?;
        if field_q > 1_000_000 {
            return None;
        }
        let n = rng.gen_range(1..=4usize);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let frob: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if perm[j] == i {
                            if rng.gen_bool(0.3) {
                                -1
                            } else {
                                1
                            }
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let lattice = CharLattice::new(frob).ok()?;
        let period = lattice.order().lcm(&d);
        let frame = GaloisFrame::cyclic(period);
        let base = FieldDesc::new(p, m).ok()?;
        let field = FieldDesc::new(p, m * d as u32).ok()?;
        let ctx = EvalContext::new(lattice, frame.clone(), base, field).ok()?;

        // points and actions
        let mut neg = vec![0usize; size];
        let mut layout = Vec::new();
        let mut off = 0;
        for &(len, sym) in &orbits {
            layout.push(off);
            if sym {
                for j in 0..len {
                    neg[off + j] = off + (j + len / 2) % len;
                }
                off += len;
            } else {
                for j in 0..len {
                    neg[off + j] = off + len + j;
                    neg[off + len + j] = off + j;
                }
                off += 2 * len;
            }
        }
        let act: Vec<Vec<usize>> = (0..period)
            .map(|k| {
                let mut a = vec![0usize; size];
                for (o, &(len, sym)) in orbits.iter().enumerate() {
                    let base_off = layout[o];
                    let blocks = if sym { 1 } else { 2 };
                    for b in 0..blocks {
                        for j in 0..len {
                            a[base_off + b * len + j] = base_off + b * len + (j + k) % len;
                        }
                    }
                }
                a
            })
            .collect();
        let sigma = SigmaSet::new(frame, act, neg).ok()?;

        let mut chars = vec![vec![0i64; n]; size];
        for (o, &(len, sym)) in orbits.iter().enumerate() {
            let mu: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            let base_off = layout[o];
            let chi0: LVec = if sym {
                let h = len / 2;
                (0..period / len).fold(vec![0; n], |acc, t| {
                    let a = ctx.lattice.act(len * t, &mu);
                    let b = ctx.lattice.act(len * t + h, &mu);
                    add(&acc, &sub(&a, &b))
                })
            } else {
                (0..period / len).fold(vec![0; n], |acc, t| {
                    add(&acc, &ctx.lattice.act(len * t, &mu))
                })
            };
            for j in 0..len {
                let c = ctx.lattice.act(j, &chi0);
                chars[base_off + j] = c.clone();
                if !sym {
                    chars[base_off + len + j] = scale(-1, &c);
                }
            }
        }
        Some(RandomContext { ctx, sigma, chars })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial_ctx(p: u32) -> EvalContext {
        let lattice = CharLattice::new(vec![vec![1]]).unwrap();
        let f = FieldDesc::new(p, 1).unwrap();
        EvalContext::new(lattice, GaloisFrame::cyclic(1), f, f).unwrap()
    }

    #[test]
    fn pair_with_trivial_group() {
        let ctx = trivial_ctx(7);
        let s = SigmaSet::new(ctx.frame.clone(), vec![vec![0, 1]], vec![1, 0]).unwrap();
        let chars = vec![vec![1], vec![-1]];
        let hc = from_sigma_set(&s, &[0], &chars, &ctx).unwrap();
        assert_eq!(hc.delta, vec![1]);
        assert_eq!(hc.rho, vec![vec![0]]);
        let f = ctx.field;
        for x in f.units() {
            let g = GroupPoint { basis: vec![x] };
            assert_eq!(eval_direct(&hc, &ctx, &g).unwrap(), x.sgn().unwrap());
            assert_eq!(
                eval_formula(&s, &chars, &ctx, &g).unwrap(),
                x.sgn().unwrap()
            );
        }
    }

    #[test]
    fn swap_gives_rho_chi() {
        let lattice = CharLattice::new(vec![vec![-1]]).unwrap();
        let ctx = EvalContext::new(
            lattice,
            GaloisFrame::cyclic(2),
            FieldDesc::new(5, 1).unwrap(),
            FieldDesc::new(5, 2).unwrap(),
        )
        .unwrap();
        let s = SigmaSet::new(ctx.frame.clone(), vec![vec![0, 1], vec![1, 0]], vec![1, 0]).unwrap();
        let chars = vec![vec![1], vec![-1]];
        let hc = from_sigma_set(&s, &[0], &chars, &ctx).unwrap();
        assert_eq!(hc.rho[1], vec![1]);
        assert!(hc.is_valid(&ctx));
    }

    #[test]
    fn partition_errors() {
        let ctx = trivial_ctx(3);
        let s = SigmaSet::new(ctx.frame.clone(), vec![vec![0, 1]], vec![1, 0]).unwrap();
        let chars = vec![vec![1], vec![-1]];
        assert_eq!(
            from_sigma_set(&s, &[0, 1], &chars, &ctx),
            Err(HyperError::BadPartition)
        );
        let fixed = SigmaSet::new(ctx.frame.clone(), vec![vec![0]], vec![0]).unwrap();
        assert_eq!(
            from_sigma_set(&fixed, &[], &[vec![0]], &ctx),
            Err(HyperError::FixedPointUnderNegation(0))
        );
    }

    #[test]
    fn random_contexts_agree() {
        for seed in 0..40 {
            let rc = RandomContext::generate(seed);
            let hc = from_sigma_set(&rc.sigma, &default_positive(&rc.sigma), &rc.chars, &rc.ctx)
                .unwrap();
            assert!(hc.is_valid(&rc.ctx), "seed {seed}");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..5 {
                let g = rc.ctx.random_point(&mut rng);
                assert!(rc.ctx.is_point(&g));
                assert_eq!(
                    eval_direct(&hc, &rc.ctx, &g).unwrap(),
                    eval_formula(&rc.sigma, &rc.chars, &rc.ctx, &g).unwrap(),
                    "seed {seed}"
                );
            }
        }
    }
}
