//! Quadratic spaces over `k`, reflections, spinor norms and graded spaces.

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{disc_ext, FieldDesc, FqElem, GfError, SquareClass};
use crate::linalg::{dot, Matrix};
use crate::sigma_set::{GaloisFrame, SigmaError, SigmaSet};

/// Largest `q^n` searched by [`QuadSpace::decompose`].
pub const SEARCH_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("form is degenerate")]
    Degenerate,
    #[error("entry outside the base field")]
    OutsideBase,
    #[error("matrix does not preserve the form")]
    NotAnIsometry,
    #[error("vector is isotropic")]
    IsotropicVector,
    #[error("search space q^n = {0} is too large")]
    SearchSpaceTooLarge(u64),
    #[error("no reflection product found within {0} steps")]
    DecompositionFailed(usize),
    #[error("{0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// `(k^n, b)` with `b` symmetric, entries living in the ambient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSpace {
    base: FieldDesc,
    gram: Matrix,
}

impl QuadSpace {
    pub fn new(base: FieldDesc, gram: Matrix) -> Result<QuadSpace, QuadError> {
        let n = gram.rows();
        if gram.cols() != n || gram.transpose() != gram {
            return Err(QuadError::NotSymmetric);
        }
        if !base.divides(&gram.field()) {
            return Err(QuadError::Field(GfError::FieldMismatch));
        }
        if (0..n).any(|i| (0..n).any(|j| !gram.get(i, j).in_subfield(base.degree()))) {
            return Err(QuadError::OutsideBase);
        }
        if gram.det().is_zero() {
            return Err(QuadError::Degenerate);
        }
        Ok(QuadSpace { base, gram })
    }

    /// Diagonal form `Σ a_i x_i y_i`.
    pub fn diagonal(
        base: FieldDesc,
        ambient: FieldDesc,
        diag: &[FqElem],
    ) -> Result<QuadSpace, QuadError> {
        let g = Matrix::from_fn(ambient, diag.len(), diag.len(), |i, j| {
            if i == j {
                diag[i]
            } else {
                ambient.zero()
            }
        });
        QuadSpace::new(base, g)
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn base(&self) -> FieldDesc {
        self.base
    }

    pub fn ambient(&self) -> FieldDesc {
        self.gram.field()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn b(&self, x: &[FqElem], y: &[FqElem]) -> FqElem {
        dot(x, &self.gram.mul_vec(y))
    }

    pub fn phi(&self, x: &[FqElem]) -> FqElem {
        self.b(x, x)
    }

    pub fn is_isometry(&self, a: &Matrix) -> bool {
        a.rows() == self.dim()
            && a.cols() == self.dim()
            && a.transpose().mul(&self.gram).mul(a) == self.gram
            && !a.det().is_zero()
    }

    /// `τ_v(w) = w - 2b(v,w)/b(v,v)·v`.
    pub fn reflection(&self, v: &[FqElem]) -> Result<Matrix, QuadError> {
        let f = self.ambient();
        let q = self.phi(v);
        if q.is_zero() {
            return Err(QuadError::IsotropicVector);
        }
        let gv = self.gram.mul_vec(v);
        let two = f.from_int(2);
        let n = self.dim();
        Ok(Matrix::from_fn(f, n, n, |i, j| {
            let id = if i == j { f.one() } else { f.zero() };
            id - two * v[i] * gv[j] / q
        }))
    }

    fn vector(&self, elems: &[FqElem], mut idx: u64) -> Vec<FqElem> {
        let q = elems.len() as u64;
        (0..self.dim())
            .map(|_| {
                let d = elems[(idx % q) as usize];
                idx /= q;
                d
            })
            .collect()
    }

    /// Anisotropic `v_1..v_m` with `τ_{v_1}···τ_{v_m} = a`.
    pub fn decompose(&self, a: &Matrix) -> Result<Vec<Vec<FqElem>>, QuadError> {
        if !self.is_isometry(a) {
            return Err(QuadError::NotAnIsometry);
        }
        let n = self.dim();
        let f = self.ambient();
        let elems = f.subfield_elements(self.base.degree())?;
        let total = (elems.len() as u64)
            .checked_pow(n as u32)
            .filter(|&t| t <= SEARCH_LIMIT)
            .ok_or(QuadError::SearchSpaceTooLarge(
                (elems.len() as f64).powi(n as i32) as u64,
            ))?;
        let id = Matrix::identity(f, n);
        let cap = 2 * n + 2;
        let mut cur = a.clone();
        let mut out = Vec::new();
        while !cur.is_identity() {
            if out.len() >= cap {
                return Err(QuadError::DecompositionFailed(cap));
            }
            let diff = cur.sub(&id);
            let direct = (1..total).find_map(|i| {
                let w = diff.mul_vec(&self.vector(&elems, i));
                (!self.phi(&w).is_zero()).then_some(w)
            });
            let w = match direct {
                Some(w) => w,
                None => (1..total)
                    .map(|i| self.vector(&elems, i))
                    .find(|u| {
                        !self.phi(u).is_zero()
                            && self.has_direct(&self.reflection(u).unwrap().mul(&cur))
                    })
                    .ok_or(QuadError::DecompositionFailed(cap))?,
            };
            cur = self.reflection(&w)?.mul(&cur);
            out.push(w);
        }
        Ok(out)
    }

    /// The image of `a - 1` is not totally isotropic.
    fn has_direct(&self, a: &Matrix) -> bool {
        let d = a.sub(&Matrix::identity(self.ambient(), self.dim()));
        let cols: Vec<Vec<FqElem>> = (0..self.dim()).map(|j| d.column(j)).collect();
        cols.iter()
            .any(|c| cols.iter().any(|e| !self.b(c, e).is_zero()))
    }

    pub fn spinor_norm(&self, a: &Matrix) -> Result<SquareClass, QuadError> {
        let vs = self.decompose(a)?;
        let prod = vs
            .iter()
            .fold(self.ambient().one(), |acc, v| acc * self.phi(v));
        Ok(prod.sgn_in(&self.base)?)
    }

    /// Orthogonal sum.
    pub fn sum(&self, other: &QuadSpace) -> QuadSpace {
        QuadSpace {
            base: self.base,
            gram: Matrix::block_diag(self.ambient(), &[self.gram.clone(), other.gram.clone()]),
        }
    }
}

/// Coordinates of `k_i` in the basis `θ^l` over `k`.
#[derive(Debug, Clone)]
struct Coords {
    base: FieldDesc,
    powers: Vec<FqElem>,
    dual: Matrix,
}

impl Coords {
    fn new(ambient: FieldDesc, base: FieldDesc, deg: u32) -> Result<Coords, QuadError> {
        let f = (deg / base.degree()) as usize;
        let theta = ambient.subfield_generator(deg)?;
        let powers: Vec<FqElem> = (0..f).map(|l| theta.pow(l as i64).unwrap()).collect();
        let sub = FieldDesc::new(base.p(), deg)?;
        let t = Matrix::from_fn(ambient, f, f, |i, j| {
            trace_between(powers[i] * powers[j], &sub, &base)
        });
        let dual = t.inverse().ok_or(QuadError::Degenerate)?;
        Ok(Coords { base, powers, dual })
    }

    fn coords(&self, x: FqElem, sub: &FieldDesc) -> Vec<FqElem> {
        let rhs: Vec<FqElem> = self
            .powers
            .iter()
            .map(|p| trace_between(x * *p, sub, &self.base))
            .collect();
        self.dual.mul_vec(&rhs)
    }

    /// Matrix of multiplication by `x`.
    fn mult(&self, x: FqElem, sub: &FieldDesc) -> Matrix {
        let cols: Vec<Vec<FqElem>> = self
            .powers
            .iter()
            .map(|p| self.coords(x * *p, sub))
            .collect();
        Matrix::from_columns(x.field(), &cols)
    }
}

/// `Tr_{big/small}(x)` for `x` in `big`, both subfields of the ambient field.
pub fn trace_between(x: FqElem, big: &FieldDesc, small: &FieldDesc) -> FqElem {
    let rel = big.degree() / small.degree();
    let mut acc = x.field().zero();
    let mut cur = x;
    for _ in 0..rel {
        acc = acc + cur;
        cur = cur
            .frobenius(small, 1)
            .expect("small divides the ambient field");
    }
    acc
}

/// `N_{big/small}(x)` for `x` in `big`.
pub fn norm_between(x: FqElem, big: &FieldDesc, small: &FieldDesc) -> FqElem {
    let e = (big.order() as u64 - 1) / (small.order() as u64 - 1);
    x.pow(e as i64).expect("nonzero")
}

/// One Σ-orbit of the grading, with `f = [k_i : k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    /// `V_i ⊕ V_{-i}`, each `k_i^dim`, paired by the trace.
    Hyperbolic { f: u32, dim: usize },
    /// `V_i = k_i^d` with `½Tr(c_j x σ(y))`, `c_j ∈ k_{±i}`; `f` even.
    Hermitian { f: u32, scales: Vec<FqElem> },
    /// `V_i = k_i^d` with `Tr(c_j x y)`, `i = -i`.
    Anisotropic { f: u32, scales: Vec<FqElem> },
}

impl Block {
    pub fn f(&self) -> u32 {
        match self {
            Block::Hyperbolic { f, .. }
            | Block::Hermitian { f, .. }
            | Block::Anisotropic { f, .. } => *f,
        }
    }

    /// Dimension over `k`.
    pub fn k_dim(&self) -> usize {
        match self {
            Block::Hyperbolic { f, dim } => 2 * *f as usize * dim,
            Block::Hermitian { f, scales } | Block::Anisotropic { f, scales } => {
                *f as usize * scales.len()
            }
        }
    }
}

/// Graded quadratic space built from blocks; the grading frame is cyclic.
#[derive(Debug, Clone)]
pub struct GradedQuadSpace {
    base: FieldDesc,
    blocks: Vec<Block>,
    coords: Vec<Coords>,
    space: QuadSpace,
    grading: SigmaSet,
}

impl GradedQuadSpace {
    pub fn new(
        ambient: FieldDesc,
        base: FieldDesc,
        blocks: Vec<Block>,
    ) -> Result<GradedQuadSpace, QuadError> {
        let half = ambient.from_int(2).inv()?;
        let mut grams = Vec::new();
        let mut coords = Vec::new();
        for b in &blocks {
            let f = b.f();
            let deg = base.degree() * f;
            if f == 0 || !ambient.degree().is_multiple_of(deg) {
                return Err(QuadError::InvariantViolation(format!(
                    "residue degree {f} does not fit"
                )));
            }
            let ki = FieldDesc::new(base.p(), deg)?;
            let c = Coords::new(ambient, base, deg)?;
            let th = &c.powers;
            let fu = f as usize;
            let tr = |x: FqElem| trace_between(x, &ki, &base);
            let gram = match b {
                Block::Hyperbolic { dim, .. } => {
                    let n = fu * dim;
                    Matrix::from_fn(ambient, 2 * n, 2 * n, |r, s| {
                        let (hr, hs) = (r / n, s / n);
                        let (jr, js) = ((r % n) / fu, (s % n) / fu);
                        if hr == hs || jr != js {
                            ambient.zero()
                        } else {
                            half * tr(th[r % fu] * th[s % fu])
                        }
                    })
                }
                Block::Hermitian { scales, .. } => {
                    if f % 2 != 0 {
                        return Err(QuadError::InvariantViolation(
                            "Hermitian block needs even degree".into(),
                        ));
                    }
                    if scales
                        .iter()
                        .any(|c| c.is_zero() || !c.in_subfield(deg / 2))
                    {
                        return Err(QuadError::InvariantViolation(
                            "Hermitian scale outside k_±".into(),
                        ));
                    }
                    let n = fu * scales.len();
                    Matrix::from_fn(ambient, n, n, |r, s| {
                        if r / fu != s / fu {
                            return ambient.zero();
                        }
                        let y = th[s % fu].frobenius(&base, (f / 2) as i64).unwrap();
                        half * tr(scales[r / fu] * th[r % fu] * y)
                    })
                }
                Block::Anisotropic { scales, .. } => {
                    if scales.iter().any(|c| c.is_zero() || !c.in_subfield(deg)) {
                        return Err(QuadError::InvariantViolation("scale outside k_i".into()));
                    }
                    let n = fu * scales.len();
                    Matrix::from_fn(ambient, n, n, |r, s| {
                        if r / fu != s / fu {
                            ambient.zero()
                        } else {
                            tr(scales[r / fu] * th[r % fu] * th[s % fu])
                        }
                    })
                }
            };
            grams.push(gram);
            coords.push(c);
        }
        let space = QuadSpace::new(base, Matrix::block_diag(ambient, &grams))?;
        let grading = grading_of(&blocks)?;
        Ok(GradedQuadSpace {
            base,
            blocks,
            coords,
            space,
            grading,
        })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn space(&self) -> &QuadSpace {
        &self.space
    }

    pub fn grading(&self) -> &SigmaSet {
        &self.grading
    }

    fn check_lambdas(&self, lambdas: &[FqElem]) -> Result<(), QuadError> {
        if lambdas.len() != self.blocks.len() {
            return Err(QuadError::InvariantViolation(
                "one eigenvalue per block".into(),
            ));
        }
        for (b, &l) in self.blocks.iter().zip(lambdas) {
            let deg = self.base.degree() * b.f();
            if l.is_zero() || !l.in_subfield(deg) {
                return Err(QuadError::InvariantViolation(format!(
                    "eigenvalue {l} outside k_i"
                )));
            }
            match b {
                Block::Hermitian { .. } => {
                    let kpm = FieldDesc::new(self.base.p(), deg / 2)?;
                    let ki = FieldDesc::new(self.base.p(), deg)?;
                    if !norm_between(l, &ki, &kpm).is_one() {
                        return Err(QuadError::InvariantViolation(format!(
                            "{l} is not norm one"
                        )));
                    }
                }
                Block::Anisotropic { .. } if !(l.is_one() || (-l).is_one()) => {
                    return Err(QuadError::InvariantViolation(format!("{l} is not a sign")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// The isometry acting by `λ_i` on each `V_i`.
    pub fn isometry(&self, lambdas: &[FqElem]) -> Result<Matrix, QuadError> {
        self.check_lambdas(lambdas)?;
        let mut mats = Vec::new();
        for ((b, c), &l) in self.blocks.iter().zip(&self.coords).zip(lambdas) {
            let ki = FieldDesc::new(self.base.p(), self.base.degree() * b.f())?;
            let m = c.mult(l, &ki);
            match b {
                Block::Hyperbolic { dim, .. } => {
                    let minv = c.mult(l.inv()?, &ki);
                    mats.extend(std::iter::repeat_n(m, *dim));
                    mats.extend(std::iter::repeat_n(minv, *dim));
                }
                Block::Hermitian { scales, .. } | Block::Anisotropic { scales, .. } => {
                    mats.extend(std::iter::repeat_n(m, scales.len()));
                }
            }
        }
        Ok(Matrix::block_diag(self.space.ambient(), &mats))
    }

    /// Norms of the determinants on asymmetric and Hermitian blocks; discriminants on `-1` blocks.
    pub fn spinor_formula(&self, lambdas: &[FqElem]) -> Result<SquareClass, QuadError> {
        self.check_lambdas(lambdas)?;
        let k = self.base;
        let mut acc = SquareClass::trivial(k);
        for (b, &l) in self.blocks.iter().zip(lambdas) {
            let deg = k.degree() * b.f();
            let ki = FieldDesc::new(k.p(), deg)?;
            let cls = match b {
                Block::Hyperbolic { dim, .. } => {
                    norm_between(l.pow(*dim as i64)?, &ki, &k).sgn_in(&k)?
                }
                Block::Hermitian { scales, .. } => {
                    let kpm = FieldDesc::new(k.p(), deg / 2)?;
                    let x = l.pow(scales.len() as i64)?.lang(&kpm)?;
                    norm_between(x, &ki, &k).sgn_in(&k)?
                }
                Block::Anisotropic { scales, .. } => {
                    if l.is_one() {
                        SquareClass::trivial(k)
                    } else {
                        let det = scales.iter().fold(l.field().one(), |a, c| a * *c);
                        let mut d = norm_between(det, &ki, &k).sgn_in(&k)?;
                        let disc = disc_ext(&ki, &k)?;
                        for _ in 0..scales.len() {
                            d = d.mul(&disc)?;
                        }
                        d
                    }
                }
            };
            acc = acc.mul(&cls)?;
        }
        Ok(acc)
    }

    pub fn spinor_norm(&self, lambdas: &[FqElem]) -> Result<SquareClass, QuadError> {
        self.space.spinor_norm(&self.isometry(lambdas)?)
    }
}

/// The Σ-set of a block list: `f`-cycles under a cyclic frame of order `lcm f`.
fn grading_of(blocks: &[Block]) -> Result<SigmaSet, QuadError> {
    let period = blocks
        .iter()
        .fold(1usize, |acc, b| acc.lcm(&(b.f() as usize)));
    let mut neg = Vec::new();
    let mut cycles = Vec::new();
    for b in blocks {
        let f = b.f() as usize;
        let off = neg.len();
        match b {
            Block::Hyperbolic { .. } => {
                neg.extend((0..f).map(|j| off + f + j));
                neg.extend((0..f).map(|j| off + j));
                cycles.push((off, f));
                cycles.push((off + f, f));
            }
            Block::Hermitian { .. } => {
                neg.extend((0..f).map(|j| off + (j + f / 2) % f));
                cycles.push((off, f));
            }
            Block::Anisotropic { .. } => {
                neg.extend((0..f).map(|j| off + j));
                cycles.push((off, f));
            }
        }
    }
    let act = (0..period)
        .map(|k| {
            let mut a = vec![0; neg.len()];
            for &(off, f) in &cycles {
                for j in 0..f {
                    a[off + j] = off + (j + k) % f;
                }
            }
            a
        })
        .collect();
    Ok(SigmaSet::new(GaloisFrame::cyclic(period), act, neg)?)
}

/// A random graded space of `k`-dimension at most `max_dim` with eigenvalues.
pub fn random_graded(seed: u64, max_dim: usize) -> (GradedQuadSpace, Vec<FqElem>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let &(p, m) = [(3, 1), (5, 1), (7, 1), (3, 2)].choose(&mut rng).unwrap();
        let nblocks = rng.gen_range(1..=3);
        let mut shapes = Vec::new();
        let mut dim = 0;
        for _ in 0..nblocks {
            let kind = rng.gen_range(0..3);
            let f: u32 = match kind {
                1 => 2,
                _ => rng.gen_range(1..=2),
            };
            let d = rng.gen_range(1..=2usize);
            dim += if kind == 0 {
                2 * f as usize * d
            } else {
                f as usize * d
            };
            shapes.push((kind, f, d));
        }
        let period = shapes.iter().fold(1u32, |acc, s| acc.lcm(&s.1));
        if dim > max_dim || (p as u64).pow(m * dim as u32) > SEARCH_LIMIT {
            continue;
        }
        let base = FieldDesc::new(p, m).unwrap();
        let ambient = FieldDesc::new(p, m * period).unwrap();
        let mut blocks = Vec::new();
        let mut lambdas = Vec::new();
        let pick = |deg: u32, rng: &mut ChaCha8Rng| {
            let els = ambient.subfield_elements(deg).unwrap();
            els[rng.gen_range(1..els.len())]
        };
        for &(kind, f, d) in &shapes {
            let deg = m * f;
            match kind {
                0 => {
                    blocks.push(Block::Hyperbolic { f, dim: d });
                    lambdas.push(pick(deg, &mut rng));
                }
                1 => {
                    let scales = (0..d).map(|_| pick(deg / 2, &mut rng)).collect();
                    blocks.push(Block::Hermitian { f, scales });
                    let x = pick(deg, &mut rng);
                    lambdas.push(
                        x / x
                            .frobenius(&FieldDesc::new(p, deg / 2).unwrap(), 1)
                            .unwrap(),
                    );
                }
                _ => {
                    let scales = (0..d).map(|_| pick(deg, &mut rng)).collect();
                    blocks.push(Block::Anisotropic { f, scales });
                    lambdas.push(if rng.gen_bool(0.5) {
                        -ambient.one()
                    } else {
                        ambient.one()
                    });
                }
            }
        }
        let g = GradedQuadSpace::new(ambient, base, blocks).expect("random blocks are valid");
        return (g, lambdas);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, n: u32) -> FieldDesc {
        FieldDesc::new(p, n).unwrap()
    }

    #[test]
    fn reflection_of_basis_vector() {
        let f = gf(5, 1);
        let v = QuadSpace::diagonal(f, f, &[f.from_int(1), f.from_int(2), f.from_int(3)]).unwrap();
        let t = v.reflection(&[f.zero(), f.one(), f.zero()]).unwrap();
        let want = Matrix::from_fn(f, 3, 3, |i, j| {
            if i != j {
                f.zero()
            } else if i == 1 {
                -f.one()
            } else {
                f.one()
            }
        });
        assert_eq!(t, want);
        let w = [f.from_int(1), f.from_int(1), f.from_int(1)];
        let tw = v.reflection(&w).unwrap();
        let w3: Vec<FqElem> = w.iter().map(|x| *x * f.from_int(3)).collect();
        assert_eq!(tw, v.reflection(&w3).unwrap());
        assert_eq!(tw.det(), -f.one());
        assert!(tw.mul(&tw).is_identity());
        assert_eq!(v.spinor_norm(&tw).unwrap(), v.phi(&w).sgn().unwrap());
    }

    #[test]
    fn minus_one_on_plane() {
        let f = gf(3, 1);
        let v = QuadSpace::diagonal(f, f, &[f.one(), f.one()]).unwrap();
        let m = Matrix::identity(f, 2).scale(-f.one());
        let vs = v.decompose(&m).unwrap();
        assert_eq!(vs.len(), 2);
        assert!(v.b(&vs[0], &vs[1]).is_zero());
        assert!(v.decompose(&Matrix::identity(f, 2)).unwrap().is_empty());
        let iso = QuadSpace::diagonal(f, f, &[f.one(), -f.one()]).unwrap();
        assert_eq!(
            iso.reflection(&[f.one(), f.one()]),
            Err(QuadError::IsotropicVector)
        );
    }

    #[test]
    fn graded_formula_matches() {
        for seed in 0..60 {
            let (g, l) = random_graded(seed, 8);
            assert!(
                g.space().is_isometry(&g.isometry(&l).unwrap()),
                "seed {seed}"
            );
            assert_eq!(
                g.spinor_norm(&l).unwrap(),
                g.spinor_formula(&l).unwrap(),
                "seed {seed}: {:?}",
                g.blocks()
            );
        }
    }
}
