//! Gauss sums, tame characters of the root fields, χ-data, ζ-data and the `Δ_II` factor.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{FieldDesc, FqElem, GfError};
use crate::quadspace::norm_between;
use crate::scenario::Scenario;
use crate::sigma_set::OrbitKind;
use crate::torus::TorusPoint;

/// Tolerance for every complex comparison.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChiError {
    #[error("root {0} is not ramified symmetric")]
    NotRamifiedSymmetric(usize),
    #[error("root {0} has the wrong symmetry class for this χ-datum")]
    WrongSymmetryClass(usize),
    #[error("residue of α(γ) is 1 at root {0}")]
    ResiduallySingular(usize),
    #[error("valuation {0} is not a multiple of the pin valuation {1}")]
    OffPin(String, String),
    #[error("root {0} has no a-datum")]
    NoResidue(usize),
    #[error("ζ-data are not Galois invariant at root {0}")]
    NotInvariant(usize),
    #[error(transparent)]
    Field(#[from] GfError),
}

pub fn approx_eq(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < TOL
}

fn sign_c(s: i8) -> Complex64 {
    Complex64::new(s as f64, 0.0)
}

/// `q^{-1/2} Σ sgn(x) ψ(Tr x)` with `ψ(y) = e^{2πi y/p}` on the prime field.
pub fn gauss_sum(k: &FieldDesc) -> Complex64 {
    let p = k.p();
    let fp = FieldDesc::new(p, 1).expect("prime field");
    let mut acc = Complex64::new(0.0, 0.0);
    for x in k.units() {
        let t = x
            .trace(&fp)
            .expect("prime subfield")
            .as_prime_int()
            .expect("prime field value");
        let s = x.sgn().expect("unit").sign() as f64;
        acc += Complex64::from_polar(s, 2.0 * PI * t as f64 / p as f64);
    }
    acc / (k.order() as f64).sqrt()
}

/// `-𝔊_big = (-𝔊_small)^[big:small]`.
pub fn hasse_davenport(small: &FieldDesc, big: &FieldDesc) -> bool {
    if !small.divides(big) {
        return false;
    }
    let d = (big.degree() / small.degree()) as i32;
    approx_eq(-gauss_sum(big), (-gauss_sum(small)).powi(d))
}

/// An element of a tame extension: valuation in `F`-units and a leading residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TameElement {
    pub valuation: Rational64,
    pub leading: FqElem,
}

impl TameElement {
    pub fn new(valuation: Rational64, leading: FqElem) -> Result<TameElement, ChiError> {
        if leading.is_zero() {
            return Err(ChiError::Field(GfError::ZeroInput));
        }
        Ok(TameElement { valuation, leading })
    }

    pub fn unit(leading: FqElem) -> TameElement {
        TameElement {
            valuation: Rational64::from_integer(0),
            leading,
        }
    }

    pub fn mul(&self, o: &TameElement) -> TameElement {
        TameElement {
            valuation: self.valuation + o.valuation,
            leading: self.leading * o.leading,
        }
    }

    pub fn inv(&self) -> TameElement {
        TameElement {
            valuation: -self.valuation,
            leading: self.leading.inv().expect("nonzero"),
        }
    }

    pub fn pow(&self, n: i64) -> TameElement {
        TameElement {
            valuation: self.valuation * n,
            leading: self.leading.pow(n).expect("nonzero"),
        }
    }
}

/// A character of the unit residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueChar {
    Trivial,
    /// `sgn` of the given field.
    Sign(FieldDesc),
    /// `sgn_to(N_{from/to}(x))^exponent`.
    SignOfNorm {
        from: FieldDesc,
        to: FieldDesc,
        exponent: u32,
    },
}

impl ResidueChar {
    pub fn eval(&self, x: FqElem) -> Result<i8, ChiError> {
        Ok(match *self {
            ResidueChar::Trivial => 1,
            ResidueChar::Sign(k) => x.sgn_in(&k)?.sign(),
            ResidueChar::SignOfNorm { from, to, exponent } => {
                let s = norm_between(x, &from, &to).sgn_in(&to)?.sign();
                if exponent % 2 == 0 {
                    1
                } else {
                    s
                }
            }
        })
    }
}

/// A tamely ramified character, fixed by its residue character and its value at a pin element.
#[derive(Debug, Clone, PartialEq)]
pub struct TameCharacter {
    pub residue: ResidueChar,
    pub pin: Option<TameElement>,
    pub value: Complex64,
}

impl TameCharacter {
    pub fn trivial() -> TameCharacter {
        TameCharacter {
            residue: ResidueChar::Trivial,
            pin: None,
            value: Complex64::new(1.0, 0.0),
        }
    }

    /// `χ(z) = value^n · res(lead(z)/lead(pin)^n)` with `n = val(z)/val(pin)`.
    pub fn eval(&self, z: &TameElement) -> Result<Complex64, ChiError> {
        let Some(pin) = self.pin else {
            return Ok(sign_c(self.residue.eval(z.leading)?));
        };
        let n = z.valuation / pin.valuation;
        if !n.is_integer() {
            return Err(ChiError::OffPin(
                z.valuation.to_string(),
                pin.valuation.to_string(),
            ));
        }
        let n = n.to_integer();
        let res = match self.residue {
            ResidueChar::Trivial => 1,
            r => r.eval(z.leading / pin.leading.pow(n)?)?,
        };
        Ok(self.value.powi(n as i32) * sign_c(res))
    }
}

/// `sgn_{k_α}(e_α/2)·𝔊_{k_α}`.
pub fn lambda_constant(sc: &Scenario, a: usize) -> Result<Complex64, ChiError> {
    if sc.kind(a) != OrbitKind::SymmetricRamified {
        return Err(ChiError::NotRamifiedSymmetric(a));
    }
    let k = sc.k_field(a);
    let half_e = sc.ambient().from_int(sc.e(a) as i64 / 2);
    Ok(sign_c(half_e.sgn_in(&k)?.sign()) * gauss_sum(&k))
}

/// `a_α`: valuation `-r`, leading `c_α`.
pub fn a_datum(sc: &Scenario, a: usize) -> Result<TameElement, ChiError> {
    let c = sc.residue(a).ok_or(ChiError::NoResidue(a))?;
    TameElement::new(-sc.depth(), c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiVariant {
    Prime,
    DoublePrime0,
    DoublePrime,
}

/// Residue data of a ramified symmetric `α` over a ramified symmetric `α_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamifiedPair {
    pub k: FieldDesc,
    pub k0: FieldDesc,
    pub e: usize,
    pub e_rel: usize,
    pub f0: usize,
    pub f_rel: usize,
}

impl RamifiedPair {
    pub fn of(sc: &Scenario, a: usize) -> Result<RamifiedPair, ChiError> {
        let c0 = sc.class0(a);
        if c0.kind != OrbitKind::SymmetricRamified {
            return Err(ChiError::WrongSymmetryClass(a));
        }
        Ok(RamifiedPair {
            k: sc.k_field(a),
            k0: sc.k0_field(a),
            e: sc.e(a),
            e_rel: sc.e(a) / c0.e,
            f0: c0.f,
            f_rel: sc.f(a) / c0.f,
        })
    }

    pub fn f(&self) -> usize {
        self.f0 * self.f_rel
    }

    fn sign_in(&self, x: i64, k: &FieldDesc) -> Result<i8, ChiError> {
        let amb = FieldDesc::new(k.p(), self.k.degree())?;
        Ok(amb.from_int(x).sgn_in(k)?.sign())
    }

    /// `χ′_α`, pinned at `2a`.
    pub fn chi_prime(&self, a: TameElement) -> Result<TameCharacter, ChiError> {
        let two = a.leading.field().from_int(2);
        let lambda = sign_c(self.sign_in(self.e as i64 / 2, &self.k)?) * gauss_sum(&self.k);
        Ok(TameCharacter {
            residue: ResidueChar::Sign(self.k),
            pin: Some(TameElement::new(a.valuation, two * a.leading)?),
            value: lambda,
        })
    }

    /// `χ″_{α_0}`, pinned at `ℓa`.
    pub fn chi_doubleprime0(&self, ell_a: TameElement) -> TameCharacter {
        TameCharacter {
            residue: ResidueChar::Sign(self.k0),
            pin: Some(ell_a),
            value: sign_c(if self.f0.is_multiple_of(2) { -1 } else { 1 }) * gauss_sum(&self.k0),
        }
    }

    /// `χ″_α = χ″_{α_0} ∘ N`.
    pub fn chi_doubleprime(&self, ell_a: TameElement) -> TameCharacter {
        let base = self.chi_doubleprime0(ell_a);
        TameCharacter {
            residue: ResidueChar::SignOfNorm {
                from: self.k,
                to: self.k0,
                exponent: self.e_rel as u32,
            },
            pin: base.pin,
            value: base.value.powi((self.e_rel * self.f_rel) as i32),
        }
    }

    /// `(-1)^{f_α+1} κ(e_α ℓ) κ(-1)^{(e_rel-1)/2}`.
    pub fn closed_ratio(&self, ell: i64) -> Result<Complex64, ChiError> {
        let mut s = if self.f().is_multiple_of(2) { -1 } else { 1 };
        s *= self.sign_in(self.e as i64 * ell, &self.k)?;
        if (self.e_rel / 2) % 2 == 1 {
            s *= self.sign_in(-1, &self.k)?;
        }
        Ok(sign_c(s))
    }

    /// Numeric `χ″(ℓa)/χ′(ℓa)` and the closed sign.
    pub fn ratio(&self, a: TameElement, ell: i64) -> Result<(Complex64, Complex64), ChiError> {
        let ell_lead = a.leading.field().from_int(ell);
        let ell_a = TameElement::new(a.valuation, ell_lead * a.leading)?;
        let num = self.chi_doubleprime(ell_a).eval(&ell_a)? / self.chi_prime(a)?.eval(&ell_a)?;
        Ok((num, self.closed_ratio(ell)?))
    }
}

fn unramified(e: usize, per_step: i8) -> TameCharacter {
    TameCharacter {
        residue: ResidueChar::Trivial,
        pin: Some(TameElement {
            valuation: Rational64::new(1, e as i64),
            leading: FieldDesc::new(3, 1).expect("GF(3)").one(),
        }),
        value: sign_c(per_step),
    }
}

fn ell(sc: &Scenario, a: usize) -> i64 {
    sc.ell_pprime(sc.dual_length(a)) as i64
}

fn ell_a(sc: &Scenario, a: usize) -> Result<TameElement, ChiError> {
    let ad = a_datum(sc, a)?;
    TameElement::new(ad.valuation, sc.ambient().from_int(ell(sc, a)) * ad.leading)
}

pub fn make_chi(sc: &Scenario, a: usize, variant: ChiVariant) -> Result<TameCharacter, ChiError> {
    if sc.is_levi(a) {
        return Err(ChiError::WrongSymmetryClass(a));
    }
    let c0 = sc.class0(a);
    match variant {
        ChiVariant::Prime => match sc.kind(a) {
            OrbitKind::Asymmetric => Ok(TameCharacter::trivial()),
            OrbitKind::SymmetricUnramified => Ok(unramified(sc.e(a), -1)),
            OrbitKind::SymmetricRamified => {
                let k = sc.k_field(a);
                let pair = RamifiedPair {
                    k,
                    k0: k,
                    e: sc.e(a),
                    e_rel: 1,
                    f0: sc.f(a),
                    f_rel: 1,
                };
                pair.chi_prime(a_datum(sc, a)?)
            }
        },
        ChiVariant::DoublePrime0 => match c0.kind {
            OrbitKind::Asymmetric => Ok(TameCharacter::trivial()),
            OrbitKind::SymmetricUnramified => Ok(unramified(c0.e, -1)),
            OrbitKind::SymmetricRamified => {
                Ok(RamifiedPair::of(sc, a)?.chi_doubleprime0(ell_a(sc, a)?))
            }
        },
        ChiVariant::DoublePrime => match c0.kind {
            OrbitKind::Asymmetric => Ok(TameCharacter::trivial()),
            OrbitKind::SymmetricUnramified => {
                let f_rel = sc.f(a) / c0.f;
                Ok(unramified(sc.e(a), if f_rel % 2 == 1 { -1 } else { 1 }))
            }
            OrbitKind::SymmetricRamified => {
                Ok(RamifiedPair::of(sc, a)?.chi_doubleprime(ell_a(sc, a)?))
            }
        },
    }
}

/// Compares `χ″(ℓa)/χ′(ℓa)` with the closed sign at one root; `e(α/α_0)` must be odd.
pub fn ratio_check(sc: &Scenario, a: usize) -> Result<bool, ChiError> {
    let pair = RamifiedPair::of(sc, a)?;
    if sc.kind(a) != OrbitKind::SymmetricRamified || pair.e_rel % 2 == 0 {
        return Err(ChiError::WrongSymmetryClass(a));
    }
    let (num, closed) = pair.ratio(a_datum(sc, a)?, ell(sc, a))?;
    Ok(approx_eq(num, closed))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub q0: u32,
    pub f_rel: usize,
    pub e_rel: usize,
    pub ell: i64,
    pub numeric: [f64; 2],
    pub closed: i8,
    pub ok: bool,
}

/// Synthetic sweep over `q_0`, `f(α/α_0)`, odd `e(α/α_0)` and `ℓ`, with `e_{α_0} = 2`.
pub fn ratio_sweep(
    q0s: &[(u32, u32)],
    f_rels: &[usize],
    e_rels: &[usize],
    ells: &[i64],
) -> Result<Vec<RatioRow>, ChiError> {
    let mut out = Vec::new();
    for &(p, d0) in q0s {
        for &f_rel in f_rels {
            let k0 = FieldDesc::new(p, d0)?;
            let k = FieldDesc::new(p, d0 * f_rel as u32)?;
            for &e_rel in e_rels {
                let e = 2 * e_rel;
                if (e as u32).is_multiple_of(p) {
                    continue;
                }
                for &ell in ells {
                    if ell % p as i64 == 0 {
                        continue;
                    }
                    let pair = RamifiedPair {
                        k,
                        k0,
                        e,
                        e_rel,
                        f0: d0 as usize,
                        f_rel,
                    };
                    // any unit of k_0 serves as the leading term
                    let a = TameElement::new(Rational64::new(-1, 2), k.from_int(1))?;
                    let (num, closed) = pair.ratio(a, ell)?;
                    out.push(RatioRow {
                        q0: k0.order(),
                        f_rel,
                        e_rel,
                        ell,
                        numeric: [num.re, num.im],
                        closed: closed.re.round() as i8,
                        ok: approx_eq(num, closed),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The default sweep: `q_0 ∈ {3,5,7,9,11}`, `f ∈ {1,2}`, `e ∈ {1,3}`, `ℓ ∈ {1,2,3}`.
pub fn default_ratio_sweep() -> Result<Vec<RatioRow>, ChiError> {
    ratio_sweep(
        &[(3, 1), (5, 1), (7, 1), (3, 2), (11, 1)],
        &[1, 2],
        &[1, 3],
        &[1, 2, 3],
    )
}

/// Which roots enter `Δ_II`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaRange {
    /// Every Galois orbit of `R(T,G/M)`.
    All,
    SymmetricOnly,
}

/// `Δ_II = Π χ_α((α(γ)-1)/a_α)` over Galois orbits with `α(γ) ≠ 1`.
pub fn delta_ii_with(
    sc: &Scenario,
    chi: &dyn Fn(usize) -> Result<TameCharacter, ChiError>,
    g: &TorusPoint,
    range: DeltaRange,
) -> Result<Complex64, ChiError> {
    let mut acc = Complex64::new(1.0, 0.0);
    for a in sc.gamma_orbit_reps() {
        let sym = sc.kind(a).is_symmetric();
        if range == DeltaRange::SymmetricOnly && !sym {
            continue;
        }
        let w = g.value(a);
        if w.is_one() {
            continue;
        }
        let c = sc.residue(a).ok_or(ChiError::NoResidue(a))?;
        let lead = (w - w.field().one()) / c;
        if lead.is_zero() {
            return Err(ChiError::ResiduallySingular(a));
        }
        let z = TameElement::new(sc.depth(), lead)?;
        acc *= chi(a)?.eval(&z)?;
    }
    Ok(acc)
}

pub fn delta_ii(sc: &Scenario, variant: ChiVariant, g: &TorusPoint) -> Result<Complex64, ChiError> {
    delta_ii_with(sc, &|a| make_chi(sc, a, variant), g, DeltaRange::All)
}

fn check_invariant(sc: &Scenario, eps: &BTreeMap<usize, i8>) -> Result<(), ChiError> {
    for (&a, &s) in eps {
        for b in sc.root_set().gamma_orbit(a) {
            if eps.get(&b).is_some_and(|&t| t != s) {
                return Err(ChiError::NotInvariant(a));
            }
        }
    }
    Ok(())
}

fn eps_of(sc: &Scenario, eps: &BTreeMap<usize, i8>, a: usize) -> i8 {
    sc.root_set()
        .gamma_orbit(a)
        .iter()
        .find_map(|b| eps.get(b).copied())
        .unwrap_or(1)
}

/// `Π ε_α` over ramified symmetric Galois orbits with `α(γ) = -1`; unlisted orbits carry `+1`.
pub fn zeta_character(
    sc: &Scenario,
    eps: &BTreeMap<usize, i8>,
    g: &TorusPoint,
) -> Result<i8, ChiError> {
    check_invariant(sc, eps)?;
    let mut acc = 1;
    for a in sc.gamma_orbit_reps() {
        if sc.kind(a) != OrbitKind::SymmetricRamified {
            continue;
        }
        let w = g.value(a);
        if (w + w.field().one()).is_zero() {
            acc *= eps_of(sc, eps, a);
        }
    }
    Ok(acc)
}

/// The same character through unramified `ζ_α` evaluated at `δ_α`, a unit when `α(γ) = 1` and a uniformizer otherwise.
pub fn zeta_by_uniformizers(
    sc: &Scenario,
    eps: &BTreeMap<usize, i8>,
    g: &TorusPoint,
) -> Result<i8, ChiError> {
    check_invariant(sc, eps)?;
    let mut acc = Complex64::new(1.0, 0.0);
    for a in sc.gamma_orbit_reps() {
        if sc.kind(a) != OrbitKind::SymmetricRamified {
            continue;
        }
        let e = sc.e(a) as i64;
        let one = sc.ambient().one();
        let v = if g.value(a).is_one() {
            Rational64::from_integer(0)
        } else {
            Rational64::new(1, e)
        };
        let zeta = TameCharacter {
            residue: ResidueChar::Trivial,
            pin: Some(TameElement::new(Rational64::new(1, e), one)?),
            value: sign_c(eps_of(sc, eps, a)),
        };
        acc *= zeta.eval(&TameElement::new(v, one)?)?;
    }
    Ok(acc.re.round() as i8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epschar::{eps_named, Named};
    use crate::presets;
    use crate::torus::sample_points;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_gauss_sums() {
        let f = |p, n| gauss_sum(&FieldDesc::new(p, n).unwrap());
        assert!(approx_eq(f(3, 1), c(0.0, 1.0)));
        assert!(approx_eq(f(5, 1), c(1.0, 0.0)));
        assert!(approx_eq(f(7, 1), c(0.0, 1.0)));
        assert!(approx_eq(f(3, 2), c(1.0, 0.0)));
        assert!(approx_eq(f(5, 2), c(-1.0, 0.0)));
    }

    #[test]
    fn gauss_square_and_lifts() {
        for (p, n) in [
            (3, 1),
            (3, 2),
            (3, 3),
            (5, 1),
            (5, 2),
            (7, 1),
            (7, 2),
            (11, 1),
            (11, 2),
            (13, 1),
        ] {
            let k = FieldDesc::new(p, n).unwrap();
            let g = gauss_sum(&k);
            assert!((g.norm() - 1.0).abs() < TOL);
            let m1 = sign_c(k.from_int(-1).sgn().unwrap().sign());
            assert!(approx_eq(g * g, m1), "{k}");
            assert!(hasse_davenport(&FieldDesc::new(p, 1).unwrap(), &k));
        }
        assert!(!hasse_davenport(
            &FieldDesc::new(3, 2).unwrap(),
            &FieldDesc::new(3, 3).unwrap()
        ));
    }

    #[test]
    fn sweep_holds() {
        let rows = default_ratio_sweep().unwrap();
        assert!(rows.len() > 40);
        assert!(
            rows.iter().all(|r| r.ok),
            "{:?}",
            rows.iter().find(|r| !r.ok)
        );
    }

    #[test]
    fn tame_eval() {
        let k = FieldDesc::new(5, 1).unwrap();
        let ch = TameCharacter {
            residue: ResidueChar::Sign(k),
            pin: Some(TameElement::new(Rational64::new(1, 2), k.from_int(2)).unwrap()),
            value: c(0.0, 1.0),
        };
        // 2² = 4 is a square, so χ(ϖ²·4) = i²
        let z = TameElement::new(Rational64::from_integer(1), k.from_int(4)).unwrap();
        assert!(approx_eq(ch.eval(&z).unwrap(), c(-1.0, 0.0)));
        let off = TameElement::new(Rational64::new(1, 3), k.from_int(1)).unwrap();
        assert!(matches!(ch.eval(&off), Err(ChiError::OffPin(..))));
    }

    #[test]
    fn delta_comparison_on_presets() {
        for sc in presets::all_presets() {
            for g in sample_points(&sc, 40, 5) {
                let Ok(d1) = delta_ii(&sc, ChiVariant::Prime, &g) else {
                    continue;
                };
                let d2 = delta_ii(&sc, ChiVariant::DoublePrime, &g).unwrap();
                let flat = eps_named(&sc, Named::Flat, &g).unwrap();
                assert!(
                    approx_eq(d2, d1 * sign_c(flat)),
                    "{} {}",
                    sc.name(),
                    g.spec()
                );
            }
        }
    }

    #[test]
    fn zeta_paths_agree() {
        for sc in presets::all_presets() {
            let eps: BTreeMap<usize, i8> = sc
                .gamma_orbit_reps()
                .into_iter()
                .filter(|&a| sc.kind(a) == OrbitKind::SymmetricRamified)
                .map(|a| (a, -1))
                .collect();
            for g in sample_points(&sc, 30, 2) {
                assert_eq!(
                    zeta_character(&sc, &eps, &g).unwrap(),
                    zeta_by_uniformizers(&sc, &eps, &g).unwrap()
                );
            }
            let id = TorusPoint::identity(&sc);
            assert_eq!(zeta_character(&sc, &eps, &id).unwrap(), 1);
        }
    }

    #[test]
    fn ratio_on_presets() {
        for sc in presets::all_presets() {
            for a in sc.gamma_orbit_reps() {
                if sc.kind(a) == OrbitKind::SymmetricRamified
                    && sc.class0(a).kind == OrbitKind::SymmetricRamified
                {
                    assert!(ratio_check(&sc, a).unwrap(), "{} {a}", sc.name());
                }
            }
        }
    }
}
