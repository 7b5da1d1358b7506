//! Finite fields of odd characteristic.
//!
//! Elements are stored by their polynomial code `Σ c_i p^i` over the
//! canonical modulus (the least irreducible monic polynomial in code order).
//! Multiplication and addition go through discrete-log and Zech tables, which
//! are built once per `(p, n)` and shared for the life of the process.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::linalg::Matrix;

/// Largest field order for which tables are built.
pub const MAX_ORDER: u64 = 1 << 21;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GfError {
    #[error("inverse of zero")]
    ZeroInversion,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("zero has no square class")]
    ZeroInput,
    #[error("element is not of norm one")]
    NotNormOne,
    #[error("element does not lie in a quadratic extension of the given field")]
    NotQuadratic,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("field of order {0} exceeds the table cap")]
    TooLarge(u64),
    #[error("element does not lie in the requested subfield")]
    NotInSubfield,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

struct FieldData {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

/// Handle to a finite field `GF(p^n)`. Cheap to copy.
#[derive(Clone, Copy)]
pub struct FieldDesc(&'static FieldData);

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}
impl Eq for FieldDesc {}

impl std::hash::Hash for FieldDesc {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.n).hash(state)
    }
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.n)
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.n == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.n)
        }
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), &'static FieldData>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), &'static FieldData>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

// ---- dense polynomials over GF(p), lowest coefficient first ----

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = (r[d] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = d - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
    poly_rem(&prod, m, p)
}

fn poly_powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = poly_rem(a, m, p);
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Ben-Or irreducibility test for a monic polynomial of degree `n`.
fn irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u32, 1];
    let mut h = x.clone();
    for _ in 0..n / 2 {
        h = poly_powmod(&h, p as u64, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        if poly_gcd(f, &diff, p).len() > 1 {
            return false;
        }
    }
    true
}

fn code_to_poly(mut c: u64, p: u32, n: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(n as usize);
    for _ in 0..n {
        v.push((c % p as u64) as u32);
        c /= p as u64;
    }
    trim(&mut v);
    v
}

fn poly_to_code(v: &[u32], p: u32) -> u32 {
    v.iter()
        .rev()
        .fold(0u64, |acc, &c| acc * p as u64 + c as u64) as u32
}

fn build(p: u32, n: u32) -> FieldData {
    let q64 = (p as u64).pow(n);
    let q = q64 as u32;
    let modulus = if n == 1 {
        vec![0, 1]
    } else {
        (0..q64)
            .map(|c| {
                let mut f = code_to_poly(c, p, n);
                f.resize(n as usize, 0);
                f.push(1);
                f
            })
            .find(|f| irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists")
    };
    let order = q64 - 1;
    let factors = prime_factors(order);
    let gen = (1..q64)
        .map(|c| code_to_poly(c, p, n))
        .find(|g| {
            factors
                .iter()
                .all(|&l| poly_powmod(g, order / l, &modulus, p) != [1])
        })
        .expect("the multiplicative group is cyclic");
    let mut exp = vec![0u32; order as usize];
    let mut log = vec![NONE; q as usize];
    let mut cur = vec![1u32];
    for k in 0..order as usize {
        let code = poly_to_code(&cur, p);
        exp[k] = code;
        log[code as usize] = k as u32;
        cur = poly_mulmod(&cur, &gen, &modulus, p);
    }
    let mut zech = vec![NONE; order as usize];
    for k in 0..order as usize {
        let one_plus = add_codes(1, exp[k], p, n);
        zech[k] = log[one_plus as usize];
    }
    FieldData {
        p,
        n,
        q,
        modulus,
        exp,
        log,
        zech,
    }
}

fn add_codes(a: u32, b: u32, p: u32, n: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..n {
        let d = (a % p + b % p) % p;
        out += d * place;
        place = place.wrapping_mul(p);
        a /= p;
        b /= p;
    }
    out
}

impl FieldDesc {
    /// The field `GF(p^n)`; tables are built on first use.
    pub fn new(p: u32, n: u32) -> Result<FieldDesc, GfError> {
        if p == 2 || !is_prime(p as u64) {
            return Err(GfError::NotOddPrime(p));
        }
        let q = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if n == 0 || q > MAX_ORDER {
            return Err(GfError::TooLarge(q));
        }
        if let Some(d) = registry().lock().unwrap().get(&(p, n)) {
            return Ok(FieldDesc(d));
        }
        let data: &'static FieldData = Box::leak(Box::new(build(p, n)));
        let mut reg = registry().lock().unwrap();
        let d = *reg.entry((p, n)).or_insert(data);
        Ok(FieldDesc(d))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.n
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    fn unit_order(&self) -> u64 {
        self.0.q as u64 - 1
    }

    fn elem(&self, code: u32) -> FqElem {
        FqElem { field: *self, code }
    }

    fn from_log(&self, k: u64) -> FqElem {
        self.elem(self.0.exp[(k % self.unit_order()) as usize])
    }

    pub fn zero(&self) -> FqElem {
        self.elem(0)
    }

    pub fn one(&self) -> FqElem {
        self.elem(1)
    }

    pub fn from_int(&self, v: i64) -> FqElem {
        self.elem(v.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> FqElem {
        let p = self.0.p as i64;
        let mut v: Vec<u32> = coeffs.iter().map(|c| c.rem_euclid(p) as u32).collect();
        trim(&mut v);
        let v = if v.len() > self.0.n as usize {
            poly_rem(&v, &self.0.modulus, self.0.p)
        } else {
            v
        };
        self.elem(poly_to_code(&v, self.0.p))
    }

    /// Element with the given polynomial code.
    pub fn from_code(&self, code: u32) -> Option<FqElem> {
        (code < self.0.q).then(|| self.elem(code))
    }

    /// The least primitive element.
    pub fn generator(&self) -> FqElem {
        self.from_log(1)
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        let f = *self;
        (0..self.0.q).map(move |c| f.elem(c))
    }

    pub fn units(&self) -> impl Iterator<Item = FqElem> + '_ {
        let f = *self;
        (1..self.0.q).map(move |c| f.elem(c))
    }

    /// True iff `self` is (isomorphic to) a subfield of `big`.
    pub fn divides(&self, big: &FieldDesc) -> bool {
        self.0.p == big.0.p && big.0.n.is_multiple_of(self.0.n)
    }

    fn check_sub(&self, sub: &FieldDesc) -> Result<u32, GfError> {
        if sub.divides(self) {
            Ok(self.0.n / sub.0.n)
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    /// Primitive element of the subfield with `p^m` elements.
    pub fn subfield_generator(&self, m: u32) -> Result<FqElem, GfError> {
        if m == 0 || !self.0.n.is_multiple_of(m) {
            return Err(GfError::FieldMismatch);
        }
        let sub_units = (self.0.p as u64).pow(m) - 1;
        Ok(self.from_log(self.unit_order() / sub_units))
    }

    /// Elements of the subfield with `p^m` elements: zero, then powers of its generator.
    pub fn subfield_elements(&self, m: u32) -> Result<Vec<FqElem>, GfError> {
        let g = self.subfield_generator(m)?;
        let sub_units = (self.0.p as u64).pow(m) - 1;
        let mut out = vec![self.zero()];
        let mut cur = self.one();
        for _ in 0..sub_units {
            out.push(cur);
            cur = cur * g;
        }
        Ok(out)
    }

    fn embedding_root(&self, small: &FieldDesc) -> Result<FqElem, GfError> {
        static ROOTS: OnceLock<Mutex<HashMap<(u32, u32, u32), u32>>> = OnceLock::new();
        self.check_sub(small)?;
        let key = (self.0.p, small.0.n, self.0.n);
        let roots = ROOTS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(&c) = roots.lock().unwrap().get(&key) {
            return Ok(self.elem(c));
        }
        let m = small.modulus();
        let root = self
            .subfield_elements(small.0.n)?
            .into_iter()
            .filter(|x| {
                let mut acc = self.zero();
                for &c in m.iter().rev() {
                    acc = acc * *x + self.from_int(c as i64);
                }
                acc.is_zero()
            })
            .min_by_key(|x| x.code)
            .expect("the subfield contains every root of its modulus");
        roots.lock().unwrap().insert(key, root.code);
        Ok(root)
    }

    /// Image of `a` (an element of a subfield) under the fixed embedding that
    /// sends the generator `x` of the small field to the least root of its
    /// modulus in `self`.
    pub fn embed(&self, a: FqElem) -> Result<FqElem, GfError> {
        if a.field == *self {
            return Ok(a);
        }
        let rho = self.embedding_root(&a.field)?;
        let mut acc = self.zero();
        for &c in a.coeffs().iter().rev() {
            acc = acc * rho + self.from_int(c as i64);
        }
        Ok(acc)
    }

    /// Inverse of [`FieldDesc::embed`].
    pub fn restrict(&self, a: FqElem, small: &FieldDesc) -> Result<FqElem, GfError> {
        if a.field != *self {
            return Err(GfError::FieldMismatch);
        }
        self.check_sub(small)?;
        if !a.in_subfield(small.0.n) {
            return Err(GfError::NotInSubfield);
        }
        small
            .elements()
            .find(|&b| self.embed(b).map(|e| e == a).unwrap_or(false))
            .ok_or(GfError::NotInSubfield)
    }

    /// Parse an integer (`"-1"`), a generator power (`"g^5"`) or a
    /// coefficient list (`"[1,2]"`, constant term first).
    pub fn parse_elem(&self, s: &str) -> Result<FqElem, GfError> {
        let t = s.trim();
        let bad = || GfError::Parse(s.to_string());
        if let Some(e) = t.strip_prefix("g^") {
            let e: i64 = e.trim().parse().map_err(|_| bad())?;
            return self.generator().pow(e);
        }
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .filter(|c| !c.trim().is_empty())
                .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(self.from_coeffs(&coeffs));
        }
        let v: i64 = t.parse().map_err(|_| bad())?;
        Ok(self.from_int(v))
    }
}

/// An element of a finite field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FqElem {
    field: FieldDesc,
    code: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Mul,
    Inv,
    Pow(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOrNorm {
    Trace,
    Norm,
}

/// Checked arithmetic entry point; `b` is ignored for unary operations.
pub fn arith(a: FqElem, b: FqElem, op: Op) -> Result<FqElem, GfError> {
    match op {
        Op::Add => {
            a.same(&b)?;
            Ok(a + b)
        }
        Op::Mul => {
            a.same(&b)?;
            Ok(a * b)
        }
        Op::Inv => a.inv(),
        Op::Pow(e) => a.pow(e),
    }
}

impl FqElem {
    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn coeffs(&self) -> Vec<u32> {
        let mut v = code_to_poly(self.code as u64, self.field.0.p, self.field.0.n);
        v.resize(self.field.0.n as usize, 0);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn is_one(&self) -> bool {
        self.code == 1
    }

    fn same(&self, other: &FqElem) -> Result<(), GfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    /// Discrete logarithm to the base [`FieldDesc::generator`].
    pub fn log(&self) -> Option<u64> {
        (!self.is_zero()).then(|| self.field.0.log[self.code as usize] as u64)
    }

    fn ulog(&self) -> u64 {
        self.field.0.log[self.code as usize] as u64
    }

    pub fn inv(&self) -> Result<FqElem, GfError> {
        if self.is_zero() {
            return Err(GfError::ZeroInversion);
        }
        let m = self.field.unit_order();
        Ok(self.field.from_log((m - self.ulog()) % m))
    }

    pub fn pow(&self, e: i64) -> Result<FqElem, GfError> {
        if self.is_zero() {
            return match e.cmp(&0) {
                std::cmp::Ordering::Less => Err(GfError::ZeroInversion),
                std::cmp::Ordering::Equal => Ok(self.field.one()),
                std::cmp::Ordering::Greater => Ok(*self),
            };
        }
        let m = self.field.unit_order() as i128;
        let k = (self.ulog() as i128 * e as i128).rem_euclid(m);
        Ok(self.field.from_log(k as u64))
    }

    fn pow_u(&self, e: u64) -> FqElem {
        if self.is_zero() {
            return if e == 0 { self.field.one() } else { *self };
        }
        let m = self.field.unit_order() as u128;
        self.field
            .from_log(((self.ulog() as u128 * e as u128) % m) as u64)
    }

    /// True iff the element lies in the subfield with `p^m` elements.
    pub fn in_subfield(&self, m: u32) -> bool {
        if !self.field.0.n.is_multiple_of(m) {
            return false;
        }
        self.pow_u((self.field.0.p as u64).pow(m)) == *self
    }

    /// `a^(|over|^k)`; negative `k` is allowed.
    pub fn frobenius(&self, over: &FieldDesc, k: i64) -> Result<FqElem, GfError> {
        let rel = self.field.check_sub(over)? as i64;
        let k = k.rem_euclid(rel) as u32;
        let qo = over.order() as u64;
        let mut e = 1u64;
        let m = self.field.unit_order();
        for _ in 0..k {
            e = (e as u128 * qo as u128 % m as u128) as u64;
        }
        Ok(self.pow_u(e))
    }

    pub fn trace(&self, to: &FieldDesc) -> Result<FqElem, GfError> {
        let rel = self.field.check_sub(to)?;
        let mut acc = self.field.zero();
        let mut cur = *self;
        for _ in 0..rel {
            acc = acc + cur;
            cur = cur.frobenius(to, 1)?;
        }
        Ok(acc)
    }

    pub fn norm(&self, to: &FieldDesc) -> Result<FqElem, GfError> {
        self.field.check_sub(to)?;
        let e = self.field.unit_order() / (to.order() as u64 - 1);
        Ok(self.pow_u(e))
    }

    pub fn trace_norm(&self, to: &FieldDesc, which: TraceOrNorm) -> Result<FqElem, GfError> {
        match which {
            TraceOrNorm::Trace => self.trace(to),
            TraceOrNorm::Norm => self.norm(to),
        }
    }

    /// Trace and norm to the subfield with `p^m` elements.
    pub fn trace_deg(&self, m: u32) -> Result<FqElem, GfError> {
        self.trace(&FieldDesc::new(self.field.0.p, m)?)
    }

    pub fn norm_deg(&self, m: u32) -> Result<FqElem, GfError> {
        self.norm(&FieldDesc::new(self.field.0.p, m)?)
    }

    /// Quadratic character of the element's own field.
    pub fn sgn(&self) -> Result<SquareClass, GfError> {
        self.sgn_in(&self.field)
    }

    /// Quadratic character of the subfield `k`, for an element lying in `k`.
    pub fn sgn_in(&self, k: &FieldDesc) -> Result<SquareClass, GfError> {
        self.field.check_sub(k)?;
        if self.is_zero() {
            return Err(GfError::ZeroInput);
        }
        if !self.in_subfield(k.degree()) {
            return Err(GfError::NotInSubfield);
        }
        let m = self.field.unit_order();
        let sub_units = k.order() as u64 - 1;
        // a = g^l lies in k, so l is a multiple of m / sub_units; it is a
        // square in k iff l / (m / sub_units) is even.
        let l = self.ulog() / (m / sub_units);
        Ok(SquareClass {
            field: *k,
            nontrivial: l % 2 == 1,
        })
    }

    fn quadratic_log(&self, over: &FieldDesc) -> Result<(u64, u64, u64), GfError> {
        let n = self.field.0.n;
        if over.0.p != self.field.0.p || !n.is_multiple_of(2 * over.0.n) {
            return Err(GfError::NotQuadratic);
        }
        if self.is_zero() {
            return Err(GfError::NotNormOne);
        }
        if !self.in_subfield(2 * over.0.n) {
            return Err(GfError::NotQuadratic);
        }
        let qo = over.order() as u64;
        let step = self.field.unit_order() / (qo * qo - 1);
        let j = self.ulog() / step;
        if !j.is_multiple_of(qo - 1) {
            return Err(GfError::NotNormOne);
        }
        Ok((j / (qo - 1), qo, step))
    }

    /// Quadratic character of the norm-one group of the quadratic extension of `over`.
    pub fn sgn1(&self, over: &FieldDesc) -> Result<i8, GfError> {
        let (t, _, _) = self.quadratic_log(over)?;
        // u = h^{(Q-1) t} with h of order Q^2-1; the norm-one group is
        // generated by h^{Q-1}, so u is a square there iff t is even.
        Ok(if t % 2 == 0 { 1 } else { -1 })
    }

    /// A representative `a` with `a / frobenius(a, over, 1) = self`.
    pub fn lang(&self, over: &FieldDesc) -> Result<FqElem, GfError> {
        let (t, qo, step) = self.quadratic_log(over)?;
        let x = (qo + 1 - t % (qo + 1)) % (qo + 1);
        Ok(self.field.from_log(step * x))
    }

    /// A square root in the element's own field, if one exists.
    pub fn sqrt(&self) -> Result<Option<FqElem>, GfError> {
        if self.is_zero() {
            return Err(GfError::ZeroInput);
        }
        let l = self.ulog();
        Ok(l.is_multiple_of(2).then(|| self.field.from_log(l / 2)))
    }

    /// The integer value of an element of the prime field.
    pub fn as_prime_int(&self) -> Option<u32> {
        (self.code < self.field.0.p).then_some(self.code)
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.0.n == 1 {
            return write!(f, "{}", self.code);
        }
        let c = self.coeffs();
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let t = match (i, ci) {
                (0, _) => format!("{ci}"),
                (1, 1) => "x".to_string(),
                (1, _) => format!("{ci}x"),
                (_, 1) => format!("x^{i}"),
                _ => format!("{ci}x^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl std::ops::Add for FqElem {
    type Output = FqElem;
    fn add(self, rhs: FqElem) -> FqElem {
        assert!(self.field == rhs.field, "field mismatch in addition");
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let m = self.field.unit_order();
        let la = self.ulog();
        let d = (rhs.ulog() + m - la) % m;
        match self.field.0.zech[d as usize] {
            NONE => self.field.zero(),
            z => self.field.from_log(la + z as u64),
        }
    }
}

impl std::ops::Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        if self.is_zero() {
            return self;
        }
        let half = self.field.unit_order() / 2;
        self.field.from_log(self.ulog() + half)
    }
}

impl std::ops::Sub for FqElem {
    type Output = FqElem;
    fn sub(self, rhs: FqElem) -> FqElem {
        self + (-rhs)
    }
}

impl std::ops::Mul for FqElem {
    type Output = FqElem;
    fn mul(self, rhs: FqElem) -> FqElem {
        assert!(self.field == rhs.field, "field mismatch in multiplication");
        if self.is_zero() || rhs.is_zero() {
            return self.field.zero();
        }
        self.field.from_log(self.ulog() + rhs.ulog())
    }
}

impl std::ops::Div for FqElem {
    type Output = FqElem;
    fn div(self, rhs: FqElem) -> FqElem {
        self * rhs.inv().expect("division by zero")
    }
}

/// A class in `k^× / k^{×2}`, tagged with `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SquareClass {
    field: FieldDesc,
    nontrivial: bool,
}

impl SquareClass {
    pub fn trivial(field: FieldDesc) -> SquareClass {
        SquareClass {
            field,
            nontrivial: false,
        }
    }

    pub fn from_sign(field: FieldDesc, sign: i8) -> SquareClass {
        SquareClass {
            field,
            nontrivial: sign < 0,
        }
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn is_trivial(&self) -> bool {
        !self.nontrivial
    }

    /// `+1` for the trivial class, `-1` otherwise.
    pub fn sign(&self) -> i8 {
        if self.nontrivial {
            -1
        } else {
            1
        }
    }

    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass, GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch);
        }
        Ok(SquareClass {
            field: self.field,
            nontrivial: self.nontrivial ^ other.nontrivial,
        })
    }
}

/// Square class of the discriminant of the trace form of `big` over `small`.
pub fn disc_ext(big: &FieldDesc, small: &FieldDesc) -> Result<SquareClass, GfError> {
    let d = big.check_sub(small)? as usize;
    let theta = big.generator();
    let powers: Vec<FqElem> = (0..2 * d).map(|i| theta.pow(i as i64).unwrap()).collect();
    let mut gram = Matrix::zeros(*big, d, d);
    for i in 0..d {
        for j in 0..d {
            gram.set(i, j, powers[i + j].trace(small)?);
        }
    }
    gram.det().sgn_in(small)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, n: u32) -> FieldDesc {
        FieldDesc::new(p, n).unwrap()
    }

    #[test]
    fn gf7_products_and_squares() {
        let f = gf(7, 1);
        assert_eq!(f.from_int(3) * f.from_int(5), f.one());
        assert_eq!(f.from_int(3).sgn().unwrap().sign(), -1);
        let r = f.from_int(2).sqrt().unwrap().unwrap();
        assert!(r == f.from_int(3) || r == f.from_int(4));
        assert_eq!(f.from_int(3).sqrt().unwrap(), None);
    }

    #[test]
    fn gf9_uses_x2_plus_1() {
        let f = gf(3, 2);
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let x = f.from_coeffs(&[0, 1]);
        assert_eq!(x * x, f.from_int(-1));
        let g3 = gf(3, 1);
        assert_eq!(x.frobenius(&g3, 1).unwrap(), -x);
        assert_eq!(x.norm(&g3).unwrap(), f.one());
        assert!(!disc_ext(&f, &g3).unwrap().is_trivial());
        assert_eq!(f.from_int(-1).sgn1(&g3).unwrap(), 1);
    }

    #[test]
    fn gf27_modulus_is_least_irreducible() {
        assert_eq!(gf(3, 3).modulus(), &[1, 2, 0, 1]);
    }

    #[test]
    fn zero_errors() {
        let f = gf(5, 1);
        assert_eq!(f.zero().inv(), Err(GfError::ZeroInversion));
        assert_eq!(f.zero().sgn(), Err(GfError::ZeroInput));
        assert_eq!(f.zero().sqrt(), Err(GfError::ZeroInput));
        assert_eq!(f.zero().pow(-1), Err(GfError::ZeroInversion));
        assert_eq!(f.from_int(2).pow(0).unwrap(), f.one());
    }

    #[test]
    fn mismatched_fields() {
        let a = gf(3, 1).one();
        let b = gf(5, 1).one();
        assert_eq!(arith(a, b, Op::Add), Err(GfError::FieldMismatch));
        assert_eq!(
            gf(3, 2).one().frobenius(&gf(5, 1), 1),
            Err(GfError::FieldMismatch)
        );
        let c = SquareClass::trivial(gf(3, 1));
        assert!(c.mul(&SquareClass::trivial(gf(5, 1))).is_err());
    }

    #[test]
    fn rejects_even_and_composite_characteristic() {
        assert_eq!(FieldDesc::new(2, 3).err(), Some(GfError::NotOddPrime(2)));
        assert_eq!(FieldDesc::new(9, 1).err(), Some(GfError::NotOddPrime(9)));
    }

    #[test]
    fn lang_inverts_quotient_map() {
        for (p, n) in [(3u32, 2u32), (5, 2), (3, 4), (7, 2)] {
            let big = gf(p, n);
            let over = gf(p, n / 2);
            for u in big.units() {
                if u.norm(&over).unwrap() != big.one() {
                    assert_eq!(u.sgn1(&over), Err(GfError::NotNormOne));
                    continue;
                }
                let a = u.lang(&over).unwrap();
                assert_eq!(a / a.frobenius(&over, 1).unwrap(), u);
                assert_eq!(a.sgn().unwrap().sign(), u.sgn1(&over).unwrap());
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = gf(3, 2);
        let big = gf(3, 4);
        for a in small.elements() {
            for b in small.elements() {
                let ea = big.embed(a).unwrap();
                let eb = big.embed(b).unwrap();
                assert_eq!(big.embed(a * b).unwrap(), ea * eb);
                assert_eq!(big.embed(a + b).unwrap(), ea + eb);
            }
            assert_eq!(big.restrict(big.embed(a).unwrap(), &small).unwrap(), a);
        }
    }

    #[test]
    fn parse_forms() {
        let f = gf(3, 2);
        assert_eq!(f.parse_elem("-1").unwrap(), f.from_int(2));
        assert_eq!(f.parse_elem("[0,1]").unwrap(), f.from_coeffs(&[0, 1]));
        assert_eq!(f.parse_elem("g^1").unwrap(), f.generator());
        assert!(f.parse_elem("zz").is_err());
    }
}
