//! Quantum side: the Y-sequence of an Ore presentation, its quantum torus,
//! conversion back to normal form, and the elements `D^{(i)}` of a prepend step.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::commutative::{chain_maxima, degree_pattern, level_sets, successor, DChain};
use crate::error::{Error, Result};
use crate::ore::{coefficients_in_l, eval_at_one, lift, OrePresentation, QTorus};
use crate::poisson::PrependData;
use crate::report::CheckResult;
use crate::scalars::{QLaurent, QRational, Scalar};
use crate::terms::{CommLaurent, Exponent, OreElement, TorusElement};

pub const DEFAULT_MAX_PEEL: usize = 100_000;

/// Matrix whose columns are the leading exponents of the `Y_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingTransform {
    pub columns: Vec<Exponent>,
}

impl LeadingTransform {
    /// `u = T v`: the `X`-exponent whose image leads with `Y^v`.
    pub fn apply(&self, v: &Exponent) -> Exponent {
        let n = self.columns.len();
        let mut u = Exponent::zeros(n);
        for (j, col) in self.columns.iter().enumerate() {
            if v.0[j] == 0 {
                continue;
            }
            for l in 0..n {
                u.0[l] += col.0[l] * v.0[j];
            }
        }
        u
    }
}

pub struct QuantumAnalysis {
    pub pres: OrePresentation,
    /// `η_j`, so that `ω_j = q^{η_j}`.
    pub eta: Vec<i64>,
    pub p: Vec<Option<usize>>,
    pub y: Vec<OreElement>,
    /// `C_j = -(1 - ω_j)^{-1} (Δ_j ∘ σ_j^{-1})(Y_{p(j)})`.
    pub c: Vec<OreElement>,
    pub degrees: Vec<Exponent>,
    pub torus: QTorus,
    x_in_y: Vec<TorusElement>,
    embed_memo: RwLock<HashMap<Exponent, TorusElement>>,
}

impl std::fmt::Debug for QuantumAnalysis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuantumAnalysis")
            .field("p", &self.p)
            .field("l", &self.torus.l)
            .finish()
    }
}

impl QuantumAnalysis {
    /// Builds the Y-sequence. When `expected_p` is given, the quantum pivots must agree with it.
    pub fn new(
        pres: OrePresentation,
        eta: Vec<i64>,
        expected_p: Option<&[Option<usize>]>,
    ) -> Result<Self> {
        let n = pres.n();
        let mut p: Vec<Option<usize>> = Vec::with_capacity(n);
        let mut y: Vec<OreElement> = Vec::with_capacity(n);
        let mut c: Vec<OreElement> = Vec::with_capacity(n);
        for j in 0..n {
            let xj = pres.var(j);
            if (0..j).all(|i| pres.delta(j, i).is_zero()) {
                p.push(None);
                y.push(xj);
                c.push(OreElement::zero(n));
            } else {
                let candidates = chain_maxima(&p, j - 1);
                let hits: Vec<usize> = candidates
                    .iter()
                    .copied()
                    .filter(|&i| !pres.apply_delta(j, &y[i]).is_zero())
                    .collect();
                if hits.len() != 1 {
                    return Err(Error::AmbiguousPivot {
                        j: j + 1,
                        candidates: hits.iter().map(|i| i + 1).collect(),
                    });
                }
                let pj = hits[0];
                let d = pres.apply_delta(j, &pres.apply_sigma_inverse(j, &y[pj]));
                let one_minus_omega = QRational::from(QLaurent::one() - QLaurent::q_pow(eta[j]));
                let factor = one_minus_omega.inv()?.neg_ref();
                let cj = d.scale(&factor);
                if !coefficients_in_l(&cj) {
                    return Err(Error::CoefficientNotInL(format!(
                        "C{} = {}",
                        j + 1,
                        pres.display(&cj)
                    )));
                }
                y.push(pres.mul(&y[pj], &xj).sub(&cj));
                p.push(Some(pj));
                c.push(cj);
            }
            if let Some(exp) = expected_p {
                if exp[j] != p[j] {
                    return Err(Error::PivotMismatch {
                        j: j + 1,
                        detail: format!(
                            "quantum p = {:?}, Poisson p = {:?}",
                            p[j].map(|x| x + 1),
                            exp[j].map(|x| x + 1)
                        ),
                    });
                }
            }
        }

        let degrees: Vec<Exponent> = y.iter().map(|yj| yj.leading().unwrap().0.clone()).collect();

        let mut l = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let a = pres.mul(&y[i], &y[j]);
                let b = pres.mul(&y[j], &y[i]);
                let (le, lc) = b.leading().unwrap();
                let s = a
                    .coeff(le)
                    .checked_div(lc)
                    .ok()
                    .and_then(|r| r.as_q_power())
                    .ok_or(Error::NonIntegralCommutation { i: i + 1, j: j + 1 })?;
                if a != b.scale(&QRational::q_pow(s)) {
                    return Err(Error::NonIntegralCommutation { i: i + 1, j: j + 1 });
                }
                l[i][j] = s;
                l[j][i] = -s;
            }
        }
        let torus = QTorus { l };

        let mut out = Self {
            pres,
            eta,
            p,
            y,
            c,
            degrees,
            torus,
            x_in_y: Vec::with_capacity(n),
            embed_memo: RwLock::new(HashMap::new()),
        };
        for j in 0..n {
            let mut inner = TorusElement::var(n, j).add(&out.embed(&out.c[j]));
            if let Some(pj) = out.p[j] {
                inner = out
                    .torus
                    .mul(&out.torus.inverse_monomial(&Exponent::unit(n, pj)), &inner);
            }
            out.x_in_y.push(inner);
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.pres.n()
    }

    pub fn level_sets(&self) -> Vec<Vec<usize>> {
        level_sets(&self.p)
    }

    pub fn degree_pattern(&self, j: usize) -> Exponent {
        degree_pattern(&self.p, j)
    }

    pub fn leading_transform(&self) -> LeadingTransform {
        LeadingTransform {
            columns: self.degrees.clone(),
        }
    }

    pub fn x_in_y(&self, j: usize) -> &TorusElement {
        &self.x_in_y[j]
    }

    fn embed_monomial(&self, u: &Exponent) -> TorusElement {
        let n = self.n();
        let Some(t) = u.top() else {
            return TorusElement::one(n);
        };
        if let Some(v) = self.embed_memo.read().unwrap().get(u) {
            return v.clone();
        }
        let rest = u.with(t, u.0[t] - 1);
        let out = self.torus.mul(&self.embed_monomial(&rest), &self.x_in_y[t]);
        self.embed_memo
            .write()
            .unwrap()
            .insert(u.clone(), out.clone());
        out
    }

    /// Image of an element of the Ore algebra in the quantum torus.
    pub fn embed(&self, a: &OreElement) -> TorusElement {
        let mut out = TorusElement::zero(self.n());
        for (u, c) in a.iter() {
            out.add_scaled(&self.embed_monomial(u), c);
        }
        out
    }

    /// Recovers the normal form of a torus element lying in the Ore algebra by
    /// repeatedly cancelling the leading term.
    pub fn torus_to_ore(&self, g: &TorusElement, max_peel: usize) -> Result<OreElement> {
        let t = self.leading_transform();
        let mut rest = g.clone();
        let mut out = OreElement::zero(self.n());
        let mut steps = 0usize;
        while let Some((v, c)) = rest.leading().map(|(v, c)| (v.clone(), c.clone())) {
            steps += 1;
            if steps > max_peel {
                return Err(Error::CapExceeded { cap: max_peel });
            }
            let u = t.apply(&v);
            if !u.is_nonneg() {
                return Err(Error::NotInSubalgebra(format!(
                    "leading term {} needs X-exponent {:?}",
                    self.torus.display(&TorusElement::monomial(v, c)),
                    u.0
                )));
            }
            let image = self.embed_monomial(&u);
            let (lv, lc) = image.leading().expect("nonzero image");
            debug_assert_eq!(lv, &v);
            let coef = c.checked_div(lc)?;
            rest = rest.sub(&image.scale(&coef));
            out.add_term(u, coef);
        }
        Ok(out)
    }

    /// `B_k`: the part of `C_k` (in the torus) free of `Y_{p(k)}`, required to be one monomial.
    pub fn compute_b(&self, k: usize) -> Result<(Exponent, QRational)> {
        let pk = self.p[k]
            .ok_or_else(|| Error::NotAMonomial(format!("B{} with p({}) = 0", k + 1, k + 1)))?;
        let cy = self.embed(&self.c[k]);
        let mut constant = TorusElement::zero(self.n());
        for (e, v) in cy.iter() {
            if e.0[pk] < 0 || e.top().is_some_and(|t| t >= k) {
                return Err(Error::NotAMonomial(format!(
                    "C{} leaves Γ'[Y{}]",
                    k + 1,
                    pk + 1
                )));
            }
            if e.0[pk] == 0 {
                constant.add_term(e.clone(), v.clone());
            }
        }
        match constant.single_term() {
            Some((e, v)) => Ok((e.clone(), v.clone())),
            None => Err(Error::NotAMonomial(format!("B{}", k + 1))),
        }
    }

    /// Exponents `s` with `Y_j X_i = q^s X_i Y_j` for `i` below the successor of `j`.
    pub fn check_normality(&self, j: usize) -> Result<Vec<(usize, i64)>> {
        let upto = successor(&self.p, j).unwrap_or(self.n());
        let mut out = Vec::new();
        for i in 0..upto {
            let xi = self.pres.var(i);
            let a = self.pres.mul(&self.y[j], &xi);
            let b = self.pres.mul(&xi, &self.y[j]);
            let (le, lc) = b.leading().unwrap();
            let s = a
                .coeff(le)
                .checked_div(lc)
                .ok()
                .and_then(|r| r.as_q_power())
                .filter(|&s| a == b.scale(&QRational::q_pow(s)))
                .ok_or_else(|| {
                    Error::IdentityFailed(format!("Y{} is not normal against X{}", j + 1, i + 1))
                })?;
            out.push((i, s));
        }
        Ok(out)
    }

    pub fn display_y(&self, j: usize) -> String {
        self.pres.display(&self.y[j])
    }
}

/// `y^v ↦ Y^v`.
pub fn f_map(f: &CommLaurent) -> TorusElement {
    lift(f)
}

/// Torus degree under `σ`: `σ(Y_i) = q^{s_i} Y_i`.
pub fn sigma_on_y(q: &QuantumAnalysis, sigma_exponents: &[i64]) -> Vec<i64> {
    q.degrees
        .iter()
        .map(|d| {
            d.0.iter()
                .zip(sigma_exponents)
                .map(|(&a, &s)| a as i64 * s)
                .sum()
        })
        .collect()
}

pub fn apply_sigma_torus(a: &TorusElement, sigma_y: &[i64]) -> TorusElement {
    a.map_terms(a.nvars(), |v, c| {
        let s: i64 = v.0.iter().zip(sigma_y).map(|(&k, &s)| k as i64 * s).sum();
        (v.clone(), c.shift(s))
    })
}

/// The chain `D^{(0)}, ..., D^{(m)}` of a prepend step.
#[derive(Clone, Debug)]
pub struct QuantumDChain {
    pub chain: Vec<usize>,
    pub d: Vec<TorusElement>,
    /// `B_{p^i(k)}` for `i < m`.
    pub b: Vec<(Exponent, QRational)>,
    pub checks: Vec<CheckResult>,
}

impl QuantumDChain {
    pub fn d0(&self) -> &TorusElement {
        &self.d[0]
    }
}

pub fn compute_quantum_d_chain(
    step: &PrependData,
    tail: &QuantumAnalysis,
    dchain: &DChain,
    max_peel: usize,
) -> Result<QuantumDChain> {
    let n = tail.n();
    let torus = &tail.torus;
    let m = dchain.m();
    let chain = dchain.chain.clone();
    if dchain.d[m].single_term().is_none() {
        return Err(Error::NotAMonomial(format!(
            "d^({m}) = {}",
            dchain.d[m].display_y()
        )));
    }
    let mut d = vec![TorusElement::zero(n); m + 2];
    d[m] = f_map(&dchain.d[m]);
    let mut bs = vec![(Exponent::zeros(n), QRational::zero()); m];
    for i in (0..m).rev() {
        let j = chain[i];
        let (be, bc) = tail.compute_b(j)?;
        bs[i] = (be.clone(), bc.clone());
        let factor = torus
            .mul(
                &torus.inverse_monomial(&Exponent::unit(n, j)),
                &TorusElement::monomial(be, bc),
            )
            .scale(&QRational::q_pow(tail.eta[j]));
        let diff = d[i + 1].sub(&d[i + 2]);
        d[i] = d[i + 1].add(&torus.mul(&factor, &diff));
    }
    d.truncate(m + 1);

    let mut checks = Vec::new();
    let zero = TorusElement::zero(n);
    let qdiff = |i: usize| d[i].sub(d.get(i + 1).unwrap_or(&zero));
    let czero = CommLaurent::zero(n);
    let cdiff = |i: usize| dchain.d[i].sub(dchain.d.get(i + 1).unwrap_or(&czero));

    let mut bad = Vec::new();
    let mut bad_mono = Vec::new();
    for i in 0..=m {
        let q = qdiff(i);
        if eval_at_one(&q).as_ref() != Some(&cdiff(i)) {
            bad.push(format!("i = {i}"));
        }
        if q.single_term().is_none() {
            bad_mono.push(format!("i = {i}: {}", torus.display(&q)));
        }
    }
    checks.push(CheckResult::from_failures("d_chain_congruence", &bad));
    checks.push(CheckResult::from_failures("d_chain_monomials", &bad_mono));

    // D = Σ_i (ω Y^{-1} B)_{p^i} ... (ω Y^{-1} B)_{p^{m-1}} f(d^{(m)})
    let mut sum = TorusElement::zero(n);
    for i in 0..=m {
        let mut term = d[m].clone();
        for t in (i..m).rev() {
            let j = chain[t];
            let (be, bc) = bs[t].clone();
            let factor = torus
                .mul(
                    &torus.inverse_monomial(&Exponent::unit(n, j)),
                    &TorusElement::monomial(be, bc),
                )
                .scale(&QRational::q_pow(tail.eta[j]));
            term = torus.mul(&factor, &term);
        }
        sum = sum.add(&term);
    }
    checks.push(CheckResult::from_bool(
        "d_product_formula",
        sum == d[0],
        || {
            format!(
                "sum = {}, D = {}",
                torus.display(&sum),
                torus.display(&d[0])
            )
        },
    ));

    let mut bad = Vec::new();
    for i in 0..=m {
        let j = chain[i];
        let prod = torus.mul(&TorusElement::var(n, j), &d[i]);
        match tail.torus_to_ore(&prod, max_peel) {
            Ok(a) if coefficients_in_l(&a) && a.top_index().is_none_or(|t| t <= j) => {}
            Ok(a) => bad.push(format!("Y{} D({}) = {}", j + 1, i, tail.pres.display(&a))),
            Err(e) => bad.push(format!("Y{} D({}): {}", j + 1, i, e)),
        }
    }
    checks.push(CheckResult::from_failures("y_times_d_in_algebra", &bad));

    let sigma_y = sigma_on_y(tail, &step.sigma_exponents);
    let d0 = &d[0];
    let dd = torus.mul(d0, d0);
    let lhs = dd.sub(&torus.mul(&apply_sigma_torus(d0, &sigma_y), d0));
    let rhs = dd.scale(&QRational::from(
        QLaurent::one() - QLaurent::q_pow(step.eta),
    ));
    checks.push(CheckResult::from_bool(
        "delta_d_equals_one_minus_omega_d_squared",
        lhs == rhs,
        || format!("Δ(D) = {}", torus.display(&lhs)),
    ));

    Ok(QuantumDChain {
        chain,
        d,
        b: bs,
        checks,
    })
}

/// `Δ(X_j) = D X_j - σ(X_j) D` for each tail generator, in normal form.
pub fn step_deltas(
    step: &PrependData,
    tail: &QuantumAnalysis,
    d: &TorusElement,
    max_peel: usize,
) -> Result<Vec<OreElement>> {
    let mut out = Vec::with_capacity(tail.n());
    for j in 0..tail.n() {
        let e = tail.x_in_y(j);
        let val = tail.torus.mul(d, e).sub(
            &tail
                .torus
                .mul(e, d)
                .scale(&QRational::q_pow(step.sigma_exponents[j])),
        );
        let a = tail.torus_to_ore(&val, max_peel)?;
        if !coefficients_in_l(&a) {
            return Err(Error::CoefficientNotInL(format!(
                "Δ(X{}) = {}",
                j + step.k + 2,
                tail.pres.display(&a)
            )));
        }
        if a.top_index().is_some_and(|t| t >= j) {
            return Err(Error::SupportViolation(format!(
                "Δ(X{}) = {}",
                j + step.k + 2,
                tail.pres.display(&a)
            )));
        }
        out.push(a);
    }
    Ok(out)
}

impl OreElement {
    /// Largest variable index that occurs.
    pub fn top_index(&self) -> Option<usize> {
        self.support().last().copied()
    }
}
