//! Worked examples, one group per module.

use std::cmp::Ordering;

use cgl_core::commutative::CommutativeAnalysis;
use cgl_core::fixtures;
use cgl_core::ore::{OrePresentation, QTorus};
use cgl_core::poisson::{ExtensionSpec, PrependData, WeightOf};
use cgl_core::quantizer::{quantize, scaled_variant, QuantizeOptions};
use cgl_core::quantum::{f_map, QuantumAnalysis, DEFAULT_MAX_PEEL};
use cgl_core::scalars::{rat, ratio, QLaurent, QRational};
use cgl_core::terms::{
    compare_total_order, default_names, CommPoly, Exponent, OreElement, TorusElement,
};
use cgl_core::text::{parse_comm_poly, parse_ordered, parse_scalar};
use cgl_core::Error;

fn spec(name: &str) -> ExtensionSpec {
    fixtures::by_name(name).unwrap().spec
}

fn xs(n: usize) -> Vec<String> {
    default_names("X", n)
}

fn ys(n: usize) -> Vec<String> {
    default_names("Y", n)
}

fn ore(text: &str, n: usize) -> OreElement {
    parse_ordered(text, &xs(n), false).unwrap()
}

fn torus(text: &str, n: usize) -> TorusElement {
    parse_ordered(text, &ys(n), true).unwrap()
}

fn laurent(text: &str) -> QLaurent {
    parse_scalar(text).unwrap().to_laurent().unwrap()
}

#[test]
fn scalar_examples() {
    assert_eq!(laurent("q^3 - 2*q + 1").eval_at_one(), rat(0));
    assert_eq!(laurent("1").eval_at_one(), rat(1));
    assert_eq!(laurent("3/2*q^-1 + 1/2*q").eval_at_one(), rat(2));

    assert_eq!(
        laurent("q^2 - 1").divide_by_q_minus_one().unwrap(),
        laurent("q + 1")
    );
    assert_eq!(
        QLaurent::zero().divide_by_q_minus_one().unwrap(),
        QLaurent::zero()
    );
    assert_eq!(
        laurent("q^-1 - 1").divide_by_q_minus_one().unwrap(),
        laurent("-q^-1")
    );
    assert!(laurent("q + 1").divide_by_q_minus_one().is_err());

    assert!(parse_scalar("(1 - q^2)/2").unwrap().is_in_l());
    assert!(!parse_scalar("1/(q^2 - 1)").unwrap().is_in_l());
    assert!(parse_scalar("q^-5").unwrap().is_in_l());
}

#[test]
fn validation_examples() {
    assert!(spec("quantum-plane").validate().valid);
    assert!(spec("weyl3").validate().valid);

    let mut broken = spec("quantum-plane").to_file();
    broken.h[1] = vec![1, 0];
    let broken = ExtensionSpec::from_file(&broken).unwrap();
    let report = broken.validate();
    assert!(!report.valid);
    assert!(report.entries.iter().any(|e| e.check == "eta" && !e.ok));
}

#[test]
fn bracket_examples() {
    let qp = spec("quantum-plane");
    let w = spec("weyl3");
    assert_eq!(
        qp.bracket(&qp.var(1), &qp.var(0)),
        qp.var(0).mul(&qp.var(1))
    );
    assert_eq!(
        w.bracket(&w.var(2), &w.var(0)),
        parse_comm_poly("x2^2", &w.names).unwrap()
    );
    let a = parse_comm_poly("x1*x3 - 2*x2 + x2^2*x3", &w.names).unwrap();
    assert!(w.bracket(&a, &a).is_zero());
}

#[test]
fn weight_examples() {
    let w = spec("weyl3");
    let p = |s: &str| parse_comm_poly(s, &w.names).unwrap();
    assert_eq!(w.weight_of(&p("x2^2")), Ok(WeightOf::Weight(vec![2, 2])));
    assert_eq!(
        w.weight_of(&p("x1*x3 - x2^2/2")),
        Ok(WeightOf::Weight(vec![2, 2]))
    );
    let qp = spec("quantum-plane");
    assert_eq!(
        qp.weight_of(&parse_comm_poly("x1 + x2", &qp.names).unwrap()),
        Ok(WeightOf::NotHomogeneous)
    );
    assert_eq!(qp.weight_of(&CommPoly::zero(2)), Err(Error::ZeroInput));
}

#[test]
fn total_order_examples() {
    assert_eq!(compare_total_order(&[5, 0], &[0, 1]), Ok(Ordering::Less));
    assert_eq!(
        compare_total_order(&[1, 2, 3], &[1, 2, 3]),
        Ok(Ordering::Equal)
    );
    assert_eq!(
        compare_total_order(&[0, -1, 2], &[0, 0, 2]),
        Ok(Ordering::Less)
    );
    assert!(matches!(
        compare_total_order(&[1], &[1, 2]),
        Err(Error::LengthMismatch { .. })
    ));
}

#[test]
fn y_sequence_examples() {
    let w = CommutativeAnalysis::new(&spec("weyl3")).unwrap();
    let names = &w.spec.names;
    assert_eq!(w.y[2], parse_comm_poly("x1*x3 - x2^2/2", names).unwrap());
    assert_eq!(w.p, vec![None, None, Some(0)]);
    assert_eq!(w.level_sets(), vec![vec![0, 2], vec![1]]);
    assert_eq!(w.rank(), 2);

    let qp = CommutativeAnalysis::new(&spec("quantum-plane")).unwrap();
    assert_eq!(qp.y, vec![qp.spec.var(0), qp.spec.var(1)]);
    assert_eq!(qp.kappa, vec![vec![0, -1], vec![1, 0]]);

    let c = CommutativeAnalysis::new(&spec("chain3")).unwrap();
    assert_eq!(c.p, vec![None, Some(0), Some(1)]);
    assert_eq!(c.rank(), 1);
}

#[test]
fn weyl_poisson_matrix() {
    // y3 = x1 x3 - x2^2/2 Poisson-commutes with x1 and x2.
    let w = CommutativeAnalysis::new(&spec("weyl3")).unwrap();
    assert_eq!(w.kappa, vec![vec![0, -1, 0], vec![1, 0, 0], vec![0, 0, 0]]);
    for i in 0..3 {
        assert_eq!(w.kappa[i][i], 0);
    }
}

#[test]
fn torus_embedding_examples() {
    let w = CommutativeAnalysis::new(&spec("weyl3")).unwrap();
    let y = default_names("y", 3);
    let x3 = w.embed(&w.spec.var(2));
    assert_eq!(
        x3,
        parse_ordered("y1^-1*y3 + 1/2*y1^-1*y2^2", &y, true)
            .unwrap()
            .map_coeffs_to_rational()
    );
    assert_eq!(w.embed(&w.spec.var(0)), CommPoly::var(3, 0));

    let b = w.compute_b(2).unwrap();
    assert_eq!(b.exponent, Exponent(vec![0, 2, 0]));
    assert_eq!(b.coeff, ratio(1, 2));
    assert!(w.check_b(2, &b).passed());
}

#[test]
fn weyl_d_chain() {
    let s = spec("weyl3");
    let step = PrependData::new(&s, 0);
    assert_eq!(step.eta, -2);
    let tail = CommutativeAnalysis::new(&step.tail).unwrap();
    let dc = cgl_core::commutative::compute_d_chain(&step, &tail)
        .unwrap()
        .unwrap();
    assert_eq!(dc.m(), 0);
    assert_eq!(dc.pivot, 1);
    let d = default_names("y", 2);
    assert_eq!(dc.d0(), &parse_comm_poly_laurent("1/2*y1^2*y2^-1", &d));
    assert!(dc.checks.iter().all(|c| c.passed()));

    let trivial = PrependData::new(&s, 1);
    let tail = CommutativeAnalysis::new(&trivial.tail).unwrap();
    assert!(cgl_core::commutative::compute_d_chain(&trivial, &tail)
        .unwrap()
        .is_none());
}

fn parse_comm_poly_laurent(s: &str, names: &[String]) -> CommPoly {
    parse_ordered(s, names, true)
        .unwrap()
        .map_coeffs_to_rational()
}

trait ToRational {
    fn map_coeffs_to_rational(&self) -> CommPoly;
}

impl ToRational for OreElement {
    fn map_coeffs_to_rational(&self) -> CommPoly {
        self.map_terms(self.nvars(), |e, c| (e.clone(), c.eval_at_one().unwrap()))
    }
}

#[test]
fn ore_multiplication_examples() {
    let qp = quantize(&spec("quantum-plane"), &QuantizeOptions::default()).unwrap();
    let p = qp.presentation();
    assert_eq!(p.mul(&p.var(1), &p.var(0)), ore("q*X1*X2", 2));

    let w = quantize(&spec("weyl3"), &QuantizeOptions::default()).unwrap();
    let p = w.presentation();
    assert_eq!(
        p.mul(&p.var(2), &p.var(0)),
        ore("X1*X3 - (1 - q^2)/2*X2^2", 3)
    );
    let a = ore("X1*X2^2 + q*X3", 3);
    assert_eq!(p.mul(&p.one(), &a), a);
}

#[test]
fn sigma_and_delta_examples() {
    let qp = quantize(&spec("quantum-plane"), &QuantizeOptions::default()).unwrap();
    let p = qp.presentation();
    assert_eq!(p.apply_sigma(1, &p.var(0)), ore("q*X1", 2));
    assert_eq!(p.apply_sigma(1, &ore("X1^2", 2)), ore("q^2*X1^2", 2));

    let w = quantize(&spec("weyl3"), &QuantizeOptions::default()).unwrap();
    let p = w.presentation();
    assert_eq!(p.apply_sigma(2, &ore("X1*X2", 3)), ore("q*X1*X2", 3));
    assert!(p.apply_delta(2, &p.one()).is_zero());
    // Δ_3(X_1) = -q^{λ_13} Δ_{1,3}
    assert_eq!(p.apply_delta(2, &p.var(0)), ore("-(1 - q^2)/2*X2^2", 3));
    let x1 = p.var(0);
    let lhs = p.apply_delta(2, &p.mul(&x1, &x1));
    let rhs = p
        .mul(&p.apply_sigma(2, &x1), &p.apply_delta(2, &x1))
        .add(&p.mul(&p.apply_delta(2, &x1), &x1));
    assert_eq!(lhs, rhs);
}

#[test]
fn torus_examples() {
    let t = QTorus {
        l: vec![vec![0, 0, 0], vec![0, 0, -1], vec![0, 1, 0]],
    };
    let a = torus("Y3^-1", 3);
    let b = torus("Y2", 3);
    assert_eq!(t.mul(&a, &b), torus("q^-1*Y2*Y3^-1", 3));
    let c = torus("Y1*Y2 + 3", 3);
    assert_eq!(t.mul(&TorusElement::one(3), &c), c);
    assert_eq!(
        t.mul(&torus("Y1", 3), &torus("Y1^-1", 3)),
        TorusElement::one(3)
    );

    assert_eq!(f_map(&CommPoly::one(3)), TorusElement::one(3));
    let v = CommPoly::monomial(Exponent(vec![0, 2, -1]), rat(1));
    assert_eq!(f_map(&v), torus("Y2^2*Y3^-1", 3));
}

#[test]
fn embedding_and_peeling_examples() {
    let w = quantize(&spec("weyl3"), &QuantizeOptions::default()).unwrap();
    let q = &w.quantum;
    assert_eq!(q.embed(&ore("X1", 3)), torus("Y1", 3));
    assert_eq!(q.x_in_y(2), &torus("Y1^-1*Y3 + 1/2*Y1^-1*Y2^2", 3));
    assert_eq!(
        q.torus_to_ore(&torus("Y2^2", 3), DEFAULT_MAX_PEEL).unwrap(),
        ore("X2^2", 3)
    );
    assert_eq!(
        q.torus_to_ore(&torus("(1 - q^2)/2*Y2^2", 3), DEFAULT_MAX_PEEL)
            .unwrap(),
        ore("(1 - q^2)/2*X2^2", 3)
    );
    assert!(matches!(
        q.torus_to_ore(&torus("Y1^-1", 3), DEFAULT_MAX_PEEL),
        Err(Error::NotInSubalgebra(_))
    ));
}

#[test]
fn quantum_y_sequence_examples() {
    let w = quantize(&spec("weyl3"), &QuantizeOptions::default()).unwrap();
    assert_eq!(w.quantum.y[2], ore("X1*X3 - 1/2*X2^2", 3));
    let (e, c) = w.quantum.compute_b(2).unwrap();
    assert_eq!(e, Exponent(vec![0, 2, 0]));
    assert_eq!(c, QRational::from(ratio(1, 2)));
    // Y3 X2 = X2 Y3: the shift is q^0 for this convention.
    let s = w.quantum.check_normality(2).unwrap();
    assert!(s.contains(&(1, 0)));

    let qp = quantize(&spec("quantum-plane"), &QuantizeOptions::default()).unwrap();
    assert_eq!(qp.quantum.y, vec![ore("X1", 2), ore("X2", 2)]);
    assert_eq!(qp.quantum.torus.l, vec![vec![0, -1], vec![1, 0]]);
}

#[test]
fn quantizer_examples() {
    let qp = quantize(&spec("quantum-plane"), &QuantizeOptions::default()).unwrap();
    assert_eq!(qp.presentation().lambda(0, 1), 1);
    assert!(qp.presentation().relation_delta(0, 1).is_zero());

    let w = quantize(&spec("weyl3"), &QuantizeOptions::default()).unwrap();
    assert_eq!(w.steps[0].k, 2);
    assert!(w.steps[0].trivial);
    assert_eq!(w.steps[1].distinguished, vec!["1/2*Y2^2*Y3^-1".to_string()]);
    assert_eq!(
        w.steps[1].deltas.get("X3").map(String::as_str),
        Some("(1/2 - 1/2*q^2)*X2^2")
    );

    let m = quantize(&spec("m2x2"), &QuantizeOptions::default()).unwrap();
    let p = m.presentation();
    for i in 0..4 {
        for j in i + 1..4 {
            let d = p.relation_delta(i, j);
            if (i, j) == (0, 3) {
                let (e, c) = d.single_term().unwrap();
                assert_eq!(e, &Exponent(vec![0, 1, 1, 0]));
                assert_eq!(
                    c.divide_by_q_minus_one().unwrap().eval_at_one(),
                    Some(rat(2))
                );
            } else {
                assert!(d.is_zero(), "Δ{},{}", i + 1, j + 1);
            }
        }
    }
}

#[test]
fn scaled_variant_examples() {
    let w = quantize(&spec("weyl3"), &QuantizeOptions::default()).unwrap();
    let same = scaled_variant(w.presentation(), &QRational::one()).unwrap();
    assert_eq!(&same, w.presentation());
    let v = scaled_variant(w.presentation(), &parse_scalar("q").unwrap()).unwrap();
    assert_eq!(v.relation_delta(0, 2), ore("q*(1 - q^2)/2*X2^2", 3));
    assert!(matches!(
        scaled_variant(w.presentation(), &parse_scalar("q + 1").unwrap()),
        Err(Error::BadEpsilon(_))
    ));
}

#[test]
fn pivot_mismatch_is_reported() {
    // A quantum relation that vanishes where the Poisson one does not.
    let s = spec("weyl3");
    let pres = OrePresentation::new(
        vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
        vec![
            vec![],
            vec![OreElement::zero(3)],
            vec![OreElement::zero(3), OreElement::zero(3)],
        ],
    )
    .unwrap();
    let c = CommutativeAnalysis::new(&s).unwrap();
    let eta = (0..3).map(|j| s.eta(j)).collect();
    assert!(matches!(
        QuantumAnalysis::new(pres, eta, Some(&c.p)),
        Err(Error::PivotMismatch { j: 3, .. })
    ));
}

#[test]
fn spec_parsing_examples() {
    let qp = spec("quantum-plane");
    assert_eq!(qp.n, 2);
    let w = spec("weyl3");
    assert_eq!(w.delta[2][0], parse_comm_poly("x2^2", &w.names).unwrap());
    let bad = r#"{"n":2,"r":1,"lambda":[[1],[1]],"h":[[1],[1]],"h_prime":[[1],[1]],"delta":{"2":{"1":"x0^2"}}}"#;
    assert!(matches!(
        ExtensionSpec::from_json(bad),
        Err(Error::Parse(_))
    ));
    for fx in fixtures::all() {
        let text = serde_json::to_string(&fx.spec.to_file()).unwrap();
        assert_eq!(
            ExtensionSpec::from_json(&text).unwrap(),
            fx.spec,
            "{}",
            fx.name
        );
    }
}
