use std::cmp::Ordering;

use cgl_core::fixtures;
use cgl_core::poisson::{ExtensionSpec, WeightOf};
use cgl_core::quantizer::{quantize, Quantization, QuantizeOptions};
use cgl_core::scalars::{ratio, QLaurent, QRational, Rational};
use cgl_core::terms::{compare_total_order, CommPoly, Exponent};
use cgl_core::text::{parse_comm_poly, parse_scalar};
use cgl_core::verifier::Sampler;
use proptest::prelude::*;
use std::sync::OnceLock;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn laurent() -> impl Strategy<Value = QLaurent> {
    prop::collection::vec((-3i64..=3, rational()), 0..4).prop_map(QLaurent::from_terms)
}

fn q_rational() -> impl Strategy<Value = QRational> {
    (laurent(), laurent()).prop_filter_map("nonzero denominator", |(a, b)| {
        if b.is_zero() {
            None
        } else {
            QRational::new(a, b).ok()
        }
    })
}

fn poly(n: usize) -> impl Strategy<Value = CommPoly> {
    prop::collection::vec((prop::collection::vec(0i32..=2, n), -3i64..=3), 0..4).prop_map(
        move |terms| {
            let mut p = CommPoly::zero(n);
            for (e, c) in terms {
                p.add_term(Exponent(e), ratio(c, 1));
            }
            p
        },
    )
}

fn exponent() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(-3i32..=3, 3)
}

fn quantized() -> &'static [Quantization] {
    static CELL: OnceLock<Vec<Quantization>> = OnceLock::new();
    CELL.get_or_init(|| {
        fixtures::all()
            .iter()
            .map(|f| quantize(&f.spec, &QuantizeOptions::default()).unwrap())
            .collect()
    })
}

fn specs() -> Vec<ExtensionSpec> {
    fixtures::all().into_iter().map(|f| f.spec).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn division_by_q_minus_one_inverts_multiplication(a in laurent()) {
        let q_minus_one = QLaurent::from_terms([(1, ratio(1, 1)), (0, ratio(-1, 1))]);
        prop_assert_eq!((&a * &q_minus_one).divide_by_q_minus_one().unwrap(), a);
    }

    #[test]
    fn eval_at_one_is_multiplicative(a in laurent(), b in laurent()) {
        prop_assert_eq!((&a * &b).eval_at_one(), a.eval_at_one() * b.eval_at_one());
    }

    #[test]
    fn scalar_text_round_trip(a in q_rational(), l in laurent()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
        let lq = QRational::from(l);
        prop_assert_eq!(parse_scalar(&lq.to_string()).unwrap(), lq);
    }

    #[test]
    fn field_laws(a in q_rational(), b in q_rational()) {
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a.clone());
        }
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn total_order_is_compatible_with_addition(u in exponent(), v in exponent(), s in exponent(), t in exponent()) {
        let le = |a: &[i32], b: &[i32]| compare_total_order(a, b).unwrap() != Ordering::Greater;
        let add = |a: &[i32], b: &[i32]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        if le(&u, &v) && le(&s, &t) {
            prop_assert!(le(&add(&u, &s), &add(&v, &t)));
        }
        prop_assert_eq!(compare_total_order(&u, &v).unwrap(), compare_total_order(&v, &u).unwrap().reverse());
    }

    #[test]
    fn poisson_leibniz_and_antisymmetry(idx in 0usize..4, a in poly(4), b in poly(4), c in poly(4)) {
        let spec = &specs()[idx];
        let n = spec.n;
        let trim = |p: &CommPoly| p.map_terms(n, |e, c| (Exponent(e.0[..n].to_vec()), c.clone()));
        let (a, b, c) = (trim(&a), trim(&b), trim(&c));
        let lhs = spec.bracket(&a.mul(&b), &c);
        let rhs = a.mul(&spec.bracket(&b, &c)).add(&spec.bracket(&a, &c).mul(&b));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(spec.bracket(&a, &b), spec.bracket(&b, &a).neg());
    }

    #[test]
    fn bracket_preserves_weights(idx in 0usize..4, u in prop::collection::vec(0i32..=2, 4), v in prop::collection::vec(0i32..=2, 4)) {
        let spec = &specs()[idx];
        let n = spec.n;
        let a = CommPoly::monomial(Exponent(u[..n].to_vec()), ratio(1, 1));
        let b = CommPoly::monomial(Exponent(v[..n].to_vec()), ratio(1, 1));
        let br = spec.bracket(&a, &b);
        if !br.is_zero() {
            let want: Vec<i64> = spec.monomial_weight(&Exponent(u[..n].to_vec()))
                .iter()
                .zip(spec.monomial_weight(&Exponent(v[..n].to_vec())))
                .map(|(x, y)| x + y)
                .collect();
            prop_assert_eq!(spec.weight_of(&br).unwrap(), WeightOf::Weight(want));
        }
    }

    #[test]
    fn ore_multiplication_is_associative(idx in 0usize..4, seed in any::<u64>()) {
        let qz = &quantized()[idx];
        let pres = qz.presentation();
        let mut s = Sampler::new(seed, pres.n(), 2);
        let (a, b, c) = (s.element(), s.element(), s.element());
        prop_assert_eq!(pres.mul(&pres.mul(&a, &b), &c), pres.mul(&a, &pres.mul(&b, &c)));
    }

    #[test]
    fn embedding_is_an_injective_homomorphism(idx in 0usize..4, seed in any::<u64>()) {
        let qz = &quantized()[idx];
        let (pres, q) = (qz.presentation(), &qz.quantum);
        let mut s = Sampler::new(seed, pres.n(), 3);
        let (a, b) = (s.element(), s.element());
        let ea = q.embed(&a);
        prop_assert!(!ea.is_zero());
        prop_assert_eq!(q.embed(&pres.mul(&a, &b)), q.torus.mul(&ea, &q.embed(&b)));
        prop_assert_eq!(q.torus_to_ore(&ea, 100_000).unwrap(), a);
    }

    #[test]
    fn leading_exponent_law(idx in 0usize..4, seed in any::<u64>()) {
        let qz = &quantized()[idx];
        let q = &qz.quantum;
        let mut s = Sampler::new(seed, q.n(), 3);
        let u = s.exponent();
        let image = q.embed(&qz.presentation().monomial(u.clone()));
        prop_assert_eq!(q.leading_transform().apply(image.leading().unwrap().0), u);
    }

    #[test]
    fn torus_product_is_associative(idx in 0usize..4, seed in any::<u64>()) {
        let t = &quantized()[idx].quantum.torus;
        let mut s = Sampler::new(seed, t.n(), 2);
        let (a, b, c) = (s.torus_element(), s.torus_element(), s.torus_element());
        prop_assert_eq!(t.mul(&t.mul(&a, &b), &c), t.mul(&a, &t.mul(&b, &c)));
    }

    #[test]
    fn polynomial_text_round_trip(idx in 0usize..4, p in poly(4)) {
        let spec = &specs()[idx];
        let n = spec.n;
        let p = p.map_terms(n, |e, c| (Exponent(e.0[..n].to_vec()), c.clone()));
        let text = spec.display(&p);
        prop_assert_eq!(parse_comm_poly(&text, &spec.names).unwrap(), p);
    }
}

#[test]
fn quantize_is_deterministic() {
    for fx in fixtures::all() {
        let a = quantize(&fx.spec, &QuantizeOptions::default()).unwrap();
        let b = quantize(&fx.spec, &QuantizeOptions::default()).unwrap();
        assert_eq!(a.presentation(), b.presentation());
        assert_eq!(a.quantum.y, b.quantum.y);
    }
}

#[test]
fn level_sets_are_preserved() {
    for qz in quantized() {
        assert_eq!(qz.comm.level_sets(), qz.quantum.level_sets());
        for j in 0..qz.comm.n() {
            assert_eq!(
                cgl_core::ore::eval_at_one(&qz.quantum.y[j]).unwrap(),
                qz.comm.y[j]
            );
        }
    }
}
