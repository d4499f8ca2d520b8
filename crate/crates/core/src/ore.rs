//! Iterated q-skew polynomial rings over `Q(q)` and their quantum tori.
//!
//! Relations are `X_j X_i = q^{λ_{ij}} X_i X_j + Δ_j(X_i)` for `i < j`, with
//! `Δ_j(X_i)` supported on `X_{i+1}, ..., X_{j-1}`. Elements are kept in the
//! normal form `Σ c_u X_1^{u_1} ... X_n^{u_n}`.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::scalars::{QRational, Rational, Scalar};
use crate::terms::{default_names, CommPoly, Exponent, OreElement, TorusElement};

pub struct OrePresentation {
    n: usize,
    /// `lambda[i][j] = λ_{ij}` for `i < j`.
    lambda: Vec<Vec<i64>>,
    /// `delta[j][i] = Δ_j(X_i)` for `i < j`.
    delta: Vec<Vec<OreElement>>,
    names: Vec<String>,
    left_memo: RwLock<HashMap<(usize, Exponent), OreElement>>,
    delta_memo: RwLock<HashMap<(usize, Exponent), OreElement>>,
}

impl Clone for OrePresentation {
    fn clone(&self) -> Self {
        Self::build(self.lambda.clone(), self.delta.clone())
    }
}

impl std::fmt::Debug for OrePresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrePresentation")
            .field("n", &self.n)
            .field("lambda", &self.lambda)
            .finish()
    }
}

impl PartialEq for OrePresentation {
    fn eq(&self, other: &Self) -> bool {
        self.lambda == other.lambda && self.delta == other.delta
    }
}

impl OrePresentation {
    fn build(lambda: Vec<Vec<i64>>, delta: Vec<Vec<OreElement>>) -> Self {
        let n = lambda.len();
        Self {
            n,
            lambda,
            delta,
            names: default_names("X", n),
            left_memo: RwLock::new(HashMap::new()),
            delta_memo: RwLock::new(HashMap::new()),
        }
    }

    /// Builds a presentation, rejecting `Δ_j(X_i)` outside `X_{i+1..j-1}`.
    pub fn new(lambda: Vec<Vec<i64>>, delta: Vec<Vec<OreElement>>) -> Result<Self> {
        let n = lambda.len();
        if delta.len() != n || lambda.iter().any(|row| row.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: delta.len(),
            });
        }
        for (j, row) in delta.iter().enumerate() {
            if row.len() != j {
                return Err(Error::LengthMismatch {
                    expected: j,
                    got: row.len(),
                });
            }
            for (i, d) in row.iter().enumerate() {
                if d.nvars() != n || !d.is_nonneg() {
                    return Err(Error::SupportViolation(format!(
                        "Δ{}(X{}) is not a polynomial in X1..X{}",
                        j + 1,
                        i + 1,
                        n
                    )));
                }
                if let Some(v) = d.support().into_iter().find(|&v| v <= i || v >= j) {
                    return Err(Error::SupportViolation(format!(
                        "Δ{}(X{}) involves X{}",
                        j + 1,
                        i + 1,
                        v + 1
                    )));
                }
            }
        }
        Ok(Self::build(lambda, delta))
    }

    /// Like [`OrePresentation::new`] but without the support check, so that
    /// malformed tables can be handed to the verifier.
    pub fn new_unchecked(lambda: Vec<Vec<i64>>, delta: Vec<Vec<OreElement>>) -> Self {
        Self::build(lambda, delta)
    }

    /// Polynomial ring in one variable.
    pub fn single() -> Self {
        Self::build(vec![vec![0]], vec![Vec::new()])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lambda(&self, i: usize, j: usize) -> i64 {
        self.lambda[i][j]
    }

    pub fn lambda_matrix(&self) -> &[Vec<i64>] {
        &self.lambda
    }

    /// `Δ_j(X_i)`.
    pub fn delta(&self, j: usize, i: usize) -> &OreElement {
        &self.delta[j][i]
    }

    /// `Δ_{i,j}` in `X_i X_j = q^{-λ_{ij}} X_j X_i + Δ_{i,j}`.
    pub fn relation_delta(&self, i: usize, j: usize) -> OreElement {
        self.delta[j][i]
            .scale(&QRational::q_pow(-self.lambda[i][j]))
            .neg()
    }

    pub fn var(&self, i: usize) -> OreElement {
        OreElement::var(self.n, i)
    }

    pub fn one(&self) -> OreElement {
        OreElement::one(self.n)
    }

    pub fn monomial(&self, e: Exponent) -> OreElement {
        OreElement::monomial(e, QRational::one())
    }

    pub fn display(&self, a: &OreElement) -> String {
        a.display_with(&self.names).to_string()
    }

    /// `σ_j` on `A_{j-1}`: `X^u ↦ q^{Σ u_i λ_{ij}} X^u`.
    pub fn sigma_exponent(&self, j: usize, u: &Exponent) -> i64 {
        (0..j).map(|i| u.0[i] as i64 * self.lambda[i][j]).sum()
    }

    pub fn apply_sigma(&self, j: usize, a: &OreElement) -> OreElement {
        a.map_terms(self.n, |u, c| {
            (u.clone(), c.shift(self.sigma_exponent(j, u)))
        })
    }

    pub fn apply_sigma_inverse(&self, j: usize, a: &OreElement) -> OreElement {
        a.map_terms(self.n, |u, c| {
            (u.clone(), c.shift(-self.sigma_exponent(j, u)))
        })
    }

    /// `Δ_j` on an element of `A_{j-1}`.
    pub fn apply_delta(&self, j: usize, a: &OreElement) -> OreElement {
        let mut out = OreElement::zero(self.n);
        for (u, c) in a.iter() {
            debug_assert!(u.top().is_none_or(|t| t < j));
            if u.is_zero() {
                continue;
            }
            out.add_scaled(&self.delta_monomial(j, u), c);
        }
        out
    }

    fn delta_monomial(&self, j: usize, u: &Exponent) -> OreElement {
        let key = (j, u.clone());
        if let Some(v) = self.delta_memo.read().unwrap().get(&key) {
            return v.clone();
        }
        let l = u.bottom().expect("nonconstant monomial");
        let rest = u.with(l, u.0[l] - 1);
        // Δ_j(X_l r) = σ_j(X_l) Δ_j(r) + Δ_j(X_l) r
        let out = if rest.is_zero() {
            self.delta[j][l].clone()
        } else {
            let inner = self.delta_monomial(j, &rest);
            let first = self
                .left_mul_gen(l, &inner)
                .scale(&QRational::q_pow(self.lambda[l][j]));
            let second = self.mul(&self.delta[j][l], &self.monomial(rest));
            first.add(&second)
        };
        self.delta_memo.write().unwrap().insert(key, out.clone());
        out
    }

    /// `X_j * X^u`.
    fn gen_times_monomial(&self, j: usize, u: &Exponent) -> OreElement {
        let below = u.0[..j].iter().any(|&x| x != 0);
        let raised = u.with(j, u.0[j] + 1);
        if !below {
            return self.monomial(raised);
        }
        let key = (j, u.clone());
        if let Some(v) = self.left_memo.read().unwrap().get(&key) {
            return v.clone();
        }
        let mut r = Exponent::zeros(self.n);
        let mut t = Exponent::zeros(self.n);
        for (i, &x) in u.0.iter().enumerate() {
            if i < j {
                r.0[i] = x;
            } else {
                t.0[i] = x;
            }
        }
        // X_j r = σ_j(r) X_j + Δ_j(r), and r X^t is already ordered.
        let mut out = OreElement::monomial(raised, QRational::q_pow(self.sigma_exponent(j, &r)));
        for (v, c) in self.delta_monomial(j, &r).iter() {
            out.add_term(v.add(&t), c.clone());
        }
        self.left_memo.write().unwrap().insert(key, out.clone());
        out
    }

    /// `X_j * a`.
    pub fn left_mul_gen(&self, j: usize, a: &OreElement) -> OreElement {
        let mut out = OreElement::zero(self.n);
        for (u, c) in a.iter() {
            out.add_scaled(&self.gen_times_monomial(j, u), c);
        }
        out
    }

    /// Product in normal form.
    pub fn mul(&self, a: &OreElement, b: &OreElement) -> OreElement {
        let mut out = OreElement::zero(self.n);
        for (u, c) in a.iter() {
            let mut acc = b.clone();
            for idx in (0..self.n).rev() {
                for _ in 0..u.0[idx] {
                    acc = self.left_mul_gen(idx, &acc);
                }
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    pub fn pow(&self, a: &OreElement, k: u32) -> OreElement {
        let mut out = self.one();
        for _ in 0..k {
            out = self.mul(&out, a);
        }
        out
    }

    pub fn commutator(&self, a: &OreElement, b: &OreElement) -> OreElement {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// Generators `start..n` as a presentation of their own.
    pub fn restrict(&self, start: usize) -> OrePresentation {
        let m = self.n - start;
        let lambda = (start..self.n)
            .map(|i| (start..self.n).map(|j| self.lambda[i][j]).collect())
            .collect();
        let delta = (start..self.n)
            .map(|j| {
                (start..j)
                    .map(|i| self.delta[j][i].reindex(m, |v| v - start))
                    .collect()
            })
            .collect();
        Self::build(lambda, delta)
    }

    /// Adjoins `X_0` in front with `X_0 X_j = q^{-row[j]} X_j X_0 + rel[j]`,
    /// where `row[j] = λ_{0,j}` and `rel[j] = Δ_{0,j}` lives in the current generators.
    pub fn prepend(&self, row: &[i64], rel: &[OreElement]) -> Result<OrePresentation> {
        let m = self.n + 1;
        let mut lambda = vec![vec![0i64; m]; m];
        for j in 0..self.n {
            lambda[0][j + 1] = row[j];
            for i in 0..self.n {
                lambda[i + 1][j + 1] = self.lambda[i][j];
            }
        }
        let mut delta: Vec<Vec<OreElement>> = vec![Vec::new()];
        for j in 0..self.n {
            let mut r = Vec::with_capacity(j + 1);
            // Δ_j(X_0) = -q^{λ_{0j}} Δ_{0,j}
            r.push(
                rel[j]
                    .reindex(m, |v| v + 1)
                    .scale(&QRational::q_pow(row[j]))
                    .neg(),
            );
            for i in 0..j {
                r.push(self.delta[j][i].reindex(m, |v| v + 1));
            }
            delta.push(r);
        }
        Self::new(lambda, delta)
    }

    /// Replaces every `Δ_j(X_1)` by `ε Δ_j(X_1)`.
    pub fn scale_first_column(&self, eps: &QRational) -> OrePresentation {
        let mut delta = self.delta.clone();
        for row in delta.iter_mut().skip(1) {
            row[0] = row[0].scale(eps);
        }
        Self::build(self.lambda.clone(), delta)
    }

    pub fn coefficients_in_l(&self) -> bool {
        self.delta.iter().flatten().all(coefficients_in_l)
    }

    pub fn clear_caches(&self) {
        self.left_memo.write().unwrap().clear();
        self.delta_memo.write().unwrap().clear();
    }
}

pub fn coefficients_in_l(a: &OreElement) -> bool {
    a.iter().all(|(_, c)| c.is_in_l())
}

/// Specialization `q = 1`, returning `None` if some coefficient has a pole there.
pub fn eval_at_one(a: &OreElement) -> Option<CommPoly> {
    let mut out = CommPoly::zero(a.nvars());
    for (u, c) in a.iter() {
        out.add_term(u.clone(), c.eval_at_one()?);
    }
    Some(out)
}

/// Lifts a rational polynomial to `L` coefficients with the same exponents.
pub fn lift(f: &crate::terms::Terms<Rational>) -> TorusElement {
    f.map_terms(f.nvars(), |e, c| (e.clone(), QRational::from(c.clone())))
}

/// Quantum torus with `Y_i Y_j = q^{l_{ij}} Y_j Y_i`, elements in the order `Y_1^{v_1}...Y_n^{v_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTorus {
    pub l: Vec<Vec<i64>>,
}

impl QTorus {
    pub fn n(&self) -> usize {
        self.l.len()
    }

    /// `Y^v Y^w = q^{Σ_{i>j} v_i w_j l_{ij}} Y^{v+w}`.
    pub fn twist(&self, v: &Exponent, w: &Exponent) -> i64 {
        let mut s = 0i64;
        for i in 0..self.n() {
            if v.0[i] == 0 {
                continue;
            }
            for j in 0..i {
                s += v.0[i] as i64 * w.0[j] as i64 * self.l[i][j];
            }
        }
        s
    }

    pub fn mul(&self, a: &TorusElement, b: &TorusElement) -> TorusElement {
        let mut out = TorusElement::zero(self.n());
        for (v, c) in a.iter() {
            for (w, d) in b.iter() {
                out.add_term(v.add(w), c.mul_ref(d).shift(self.twist(v, w)));
            }
        }
        out
    }

    pub fn monomial(&self, v: Exponent) -> TorusElement {
        TorusElement::monomial(v, QRational::one())
    }

    /// Inverse of the monomial `Y^v`.
    pub fn inverse_monomial(&self, v: &Exponent) -> TorusElement {
        TorusElement::monomial(v.neg(), QRational::q_pow(self.twist(v, v)))
    }

    pub fn display(&self, a: &TorusElement) -> String {
        a.display_with(&default_names("Y", self.n())).to_string()
    }
}

/// Specialization `q = 1` of a torus element.
pub fn torus_eval_at_one(a: &TorusElement) -> Option<crate::terms::CommLaurent> {
    eval_at_one(a)
}
