use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;

use tamesign::checks::o2_f3;
use tamesign::chidata::{
    approx_eq, gauss_sum, hasse_davenport, ResidueChar, TameCharacter, TameElement,
};
use tamesign::epschar::{char_row, eps_named, piece_esr, piece_hyper, piece_spinor, Mode, Named};
use tamesign::hypercoh::{
    default_positive, eval_direct, eval_formula, from_sigma_set, RandomContext,
};
use tamesign::linalg::Matrix;
use tamesign::presets::{all_presets, preset, PRESETS};
use tamesign::quadspace::{random_graded, QuadSpace};
use tamesign::scenario::ScenarioDoc;
use tamesign::synth::{synth_scenario, SynthConfig};
use tamesign::torus::{enumerate_all, generate_seeded, sample_points};
use tamesign::{FieldDesc, FqElem, Scenario};

const FIELDS: &[(u32, u32)] = &[(3, 1), (3, 4), (5, 2), (7, 2), (11, 1), (13, 2)];

fn field_and_elems() -> impl Strategy<Value = (FieldDesc, u32, u32, u32)> {
    (0..FIELDS.len()).prop_flat_map(|i| {
        let (p, n) = FIELDS[i];
        let q = p.pow(n);
        (Just(FieldDesc::new(p, n).unwrap()), 0..q, 0..q, 0..q)
    })
}

fn el(f: &FieldDesc, c: u32) -> FqElem {
    f.from_code(c).unwrap()
}

proptest! {
    #[test]
    fn field_axioms((f, a, b, c) in field_and_elems()) {
        let (a, b, c) = (el(&f, a), el(&f, b), el(&f, c));
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!(a - a, f.zero());
        if !a.is_zero() {
            prop_assert_eq!(a * a.inv().unwrap(), f.one());
        }
    }

    #[test]
    fn sign_and_norm_multiply((f, a, b, _c) in field_and_elems()) {
        let (a, b) = (el(&f, a), el(&f, b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!(
            (a * b).sgn().unwrap().sign(),
            a.sgn().unwrap().sign() * b.sgn().unwrap().sign()
        );
        let prime = FieldDesc::new(f.p(), 1).unwrap();
        prop_assert_eq!((a * b).norm(&prime).unwrap(), a.norm(&prime).unwrap() * b.norm(&prime).unwrap());
        prop_assert_eq!((a + b).trace(&prime).unwrap(), a.trace(&prime).unwrap() + b.trace(&prime).unwrap());
    }

    #[test]
    fn hypercocycle_formula_matches_direct(seed in 0u64..5000) {
        let rc = RandomContext::generate(seed);
        let hc = from_sigma_set(&rc.sigma, &default_positive(&rc.sigma), &rc.chars, &rc.ctx).unwrap();
        prop_assert!(hc.is_valid(&rc.ctx));
        let g = {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            rc.ctx.random_point(&mut rng)
        };
        prop_assert_eq!(eval_direct(&hc, &rc.ctx, &g).unwrap(), eval_formula(&rc.sigma, &rc.chars, &rc.ctx, &g).unwrap());
    }

    #[test]
    fn graded_spinor_formula(seed in 0u64..5000) {
        let (gq, lambdas) = random_graded(seed, 6);
        prop_assert_eq!(gq.spinor_formula(&lambdas).unwrap(), gq.spinor_norm(&lambdas).unwrap());
    }

    #[test]
    fn named_characters_multiply(i in 0..PRESETS.len(), s1 in 0u64..1000, s2 in 0u64..1000) {
        let sc = preset(PRESETS[i]).unwrap();
        let (g, h) = (generate_seeded(&sc, s1), generate_seeded(&sc, s2));
        let gh = g.mul(&h);
        for n in Named::ALL {
            prop_assert_eq!(
                eps_named(&sc, n, &gh).unwrap(),
                eps_named(&sc, n, &g).unwrap() * eps_named(&sc, n, &h).unwrap()
            );
        }
        for m in [Mode::Formula, Mode::Oracle] {
            prop_assert_eq!(piece_esr(&sc, &gh, m).unwrap(), piece_esr(&sc, &g, m).unwrap() * piece_esr(&sc, &h, m).unwrap());
            prop_assert_eq!(piece_hyper(&sc, &gh, m).unwrap(), piece_hyper(&sc, &g, m).unwrap() * piece_hyper(&sc, &h, m).unwrap());
        }
        prop_assert_eq!(
            piece_spinor(&sc, &gh, Mode::Formula).unwrap(),
            piece_spinor(&sc, &g, Mode::Formula).unwrap() * piece_spinor(&sc, &h, Mode::Formula).unwrap()
        );
    }

    #[test]
    fn synthetic_rows_consistent(seed in 0u64..400) {
        let Some(sc) = synth_scenario(seed, &SynthConfig::enumerable()) else { return Ok(()) };
        for g in sample_points(&sc, 20, seed).into_iter().take(20) {
            let row = char_row(&sc, &g).unwrap();
            prop_assert_eq!(row.eps_x, row.closed);
            prop_assert_eq!(row.esr[0], row.esr[1]);
            prop_assert_eq!(row.hyper[0], row.hyper[1]);
            if let Some(sp) = row.spinor {
                prop_assert_eq!(sp[0], sp[1]);
            }
        }
    }

    #[test]
    fn scenario_documents_round_trip(seed in 0u64..400) {
        let Some(sc) = synth_scenario(seed, &SynthConfig::default()) else { return Ok(()) };
        let doc = sc.to_doc();
        let back = Scenario::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(ScenarioDoc::from_json(&doc.to_json()).unwrap(), doc.clone());
        prop_assert_eq!(back.to_doc(), doc);
    }

    #[test]
    fn tame_characters_multiply(k in 1i64..6, a in 1i64..5, b in 1i64..5, n in -3i64..4, m in -3i64..4) {
        let f = FieldDesc::new(7, 1).unwrap();
        let ch = TameCharacter {
            residue: ResidueChar::Sign(f),
            pin: Some(TameElement::new(Rational64::new(1, 2), f.from_int(k)).unwrap()),
            value: Complex64::new(0.0, 1.0),
        };
        let x = TameElement::new(Rational64::new(n, 2), f.from_int(a)).unwrap();
        let y = TameElement::new(Rational64::new(m, 2), f.from_int(b)).unwrap();
        let lhs = ch.eval(&x.mul(&y)).unwrap();
        prop_assert!(approx_eq(lhs, ch.eval(&x).unwrap() * ch.eval(&y).unwrap()));
        prop_assert!(approx_eq(ch.eval(&x.inv()).unwrap() * ch.eval(&x).unwrap(), Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn hasse_davenport_on_subfields(i in 0..FIELDS.len()) {
        let (p, n) = FIELDS[i];
        let big = FieldDesc::new(p, n).unwrap();
        for d in (1..=n).filter(|d| n % d == 0) {
            prop_assert!(hasse_davenport(&FieldDesc::new(p, d).unwrap(), &big));
        }
        prop_assert!(((gauss_sum(&big)).norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn spinor_norm_is_a_homomorphism_on_o2_f3() {
    for diag in [[1, 1], [1, 2]] {
        let (v, group) = o2_f3(diag);
        for x in &group {
            for y in &group {
                let lhs = v.spinor_norm(&x.mul(y)).unwrap();
                assert_eq!(
                    lhs,
                    v.spinor_norm(x)
                        .unwrap()
                        .mul(&v.spinor_norm(y).unwrap())
                        .unwrap()
                );
            }
        }
    }
}

#[test]
fn commutators_have_trivial_spinor_norm() {
    let (v, group) = o2_f3([1, 1]);
    for x in &group {
        for y in &group {
            let c = x
                .mul(y)
                .mul(&x.inverse().unwrap())
                .mul(&y.inverse().unwrap());
            assert!(v.spinor_norm(&c).unwrap().is_trivial());
        }
    }
}

#[test]
fn unipotent_isometries_have_trivial_spinor_norm() {
    // hyperbolic plane ⊕ <1> over GF(5): Eichler transvection
    let f = FieldDesc::new(5, 1).unwrap();
    let z = f.zero();
    let o = f.one();
    let gram = Matrix::from_fn(f, 3, 3, |i, j| match (i, j) {
        (0, 1) | (1, 0) => o,
        (2, 2) => f.from_int(2),
        _ => z,
    });
    let v = QuadSpace::new(f, gram).unwrap();
    for t in 1..5 {
        let t = f.from_int(t);
        // e ↦ e, w ↦ w - t·b(w,e')… with e = e0 isotropic and u = e2
        let m = Matrix::from_fn(f, 3, 3, |i, j| match (i, j) {
            (0, 0) | (1, 1) | (2, 2) => o,
            (0, 2) => -t * f.from_int(2),
            (2, 1) => t,
            (0, 1) => -t * t,
            _ => z,
        });
        assert!(v.is_isometry(&m), "t = {t}");
        assert!(v.spinor_norm(&m).unwrap().is_trivial());
    }
}

#[test]
fn scaling_by_minus_one_on_a_plane_is_the_discriminant() {
    for (p, d) in [
        (3, [1, 1]),
        (3, [1, 2]),
        (5, [1, 2]),
        (7, [1, 3]),
        (7, [2, 3]),
    ] {
        let f = FieldDesc::new(p, 1).unwrap();
        let v = QuadSpace::diagonal(f, f, &[f.from_int(d[0]), f.from_int(d[1])]).unwrap();
        let minus = Matrix::identity(f, 2).scale(-f.one());
        let det = f.from_int(d[0] * d[1]);
        assert_eq!(
            v.spinor_norm(&minus).unwrap(),
            det.sgn().unwrap(),
            "p={p} {d:?}"
        );
    }
}

#[test]
fn orthogonal_sums_multiply_spinor_norms() {
    let f = FieldDesc::new(5, 1).unwrap();
    let v = QuadSpace::diagonal(f, f, &[f.from_int(1), f.from_int(2)]).unwrap();
    let w = QuadSpace::diagonal(f, f, &[f.from_int(3)]).unwrap();
    let vw = v.sum(&w);
    let a = v.reflection(&[f.one(), f.one()]).unwrap();
    let b = Matrix::identity(f, 1).scale(-f.one());
    let ab = Matrix::block_diag(f, &[a.clone(), b.clone()]);
    assert!(vw.is_isometry(&ab));
    assert_eq!(
        vw.spinor_norm(&ab).unwrap(),
        v.spinor_norm(&a)
            .unwrap()
            .mul(&w.spinor_norm(&b).unwrap())
            .unwrap()
    );
}

#[test]
fn enumerated_presets_satisfy_the_closed_form() {
    for sc in all_presets() {
        let Ok(pts) = enumerate_all(&sc) else {
            continue;
        };
        for g in pts {
            let row = char_row(&sc, &g).unwrap();
            assert_eq!(row.eps_x, row.closed, "{} {}", sc.name(), g.spec());
        }
    }
}
