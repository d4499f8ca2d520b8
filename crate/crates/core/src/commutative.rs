//! Commutative side: the y-sequence, level sets, the log-canonical torus and
//! the distinguished elements attached to a prepend step.

use crate::error::{Error, Result};
use crate::poisson::{rational_to_i64, ExtensionSpec, PrependData, Weight, WeightOf};
use crate::report::CheckResult;
use crate::scalars::{rat, Rational};
use crate::terms::{default_names, CommLaurent, CommPoly, Exponent, Terms};

#[derive(Clone, Debug)]
pub struct CommutativeAnalysis {
    pub spec: ExtensionSpec,
    /// `y_j`, 0-based.
    pub y: Vec<CommPoly>,
    /// `p(j)`; `None` stands for `p(j) = 0`.
    pub p: Vec<Option<usize>>,
    /// `c_j = δ_j(y_{p(j)}) / η_j`.
    pub c: Vec<CommPoly>,
    pub kappa: Vec<Vec<i64>>,
    pub y_weights: Vec<Weight>,
    /// `x_j` written in the torus `k[y^{±1}]`.
    x_in_y: Vec<CommLaurent>,
}

/// Constant term `b_k = c · y^v` of `c_k` with respect to `y_{p(k)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BTerm {
    pub exponent: Exponent,
    pub coeff: Rational,
}

/// Level-set maxima of `A_j`: indices `i <= j` not yet followed in their chain.
pub fn chain_maxima(p: &[Option<usize>], j: usize) -> Vec<usize> {
    (0..=j)
        .filter(|&i| !(i + 1..=j).any(|l| p[l] == Some(i)))
        .collect()
}

/// Chains of `p`, each listed from bottom to top, ordered by first element.
pub fn level_sets(p: &[Option<usize>]) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut out = Vec::new();
    for start in 0..n {
        if p[start].is_some() {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        while let Some(next) = (cur + 1..n).find(|&l| p[l] == Some(cur)) {
            chain.push(next);
            cur = next;
        }
        out.push(chain);
    }
    out
}

/// `f_{j,l} = 1` iff `l <= j` lies in the level set of `j`.
pub fn degree_pattern(p: &[Option<usize>], j: usize) -> Exponent {
    let mut e = Exponent::zeros(p.len());
    let mut cur = Some(j);
    while let Some(i) = cur {
        e.0[i] = 1;
        cur = p[i];
    }
    e
}

pub fn successor(p: &[Option<usize>], j: usize) -> Option<usize> {
    (j + 1..p.len()).find(|&l| p[l] == Some(j))
}

/// `Λ(v, w) = Σ v_i κ_{ij} w_j`.
pub fn lambda_form(kappa: &[Vec<i64>], v: &Exponent, w: &Exponent) -> i64 {
    let mut s = 0;
    for (i, &a) in v.0.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in w.0.iter().enumerate() {
            s += a as i64 * kappa[i][j] * b as i64;
        }
    }
    s
}

/// Poisson bracket on `k[y^{±1}]` with `{y_i, y_j} = κ_{ij} y_i y_j`.
pub fn torus_bracket(kappa: &[Vec<i64>], f: &CommLaurent, g: &CommLaurent) -> CommLaurent {
    let mut out = CommLaurent::zero(f.nvars());
    for (v, a) in f.iter() {
        for (w, b) in g.iter() {
            let l = lambda_form(kappa, v, w);
            if l != 0 {
                out.add_term(v.add(w), a * b * rat(l));
            }
        }
    }
    out
}

impl CommutativeAnalysis {
    pub fn new(spec: &ExtensionSpec) -> Result<Self> {
        let n = spec.n;
        let mut y: Vec<CommPoly> = Vec::with_capacity(n);
        let mut p: Vec<Option<usize>> = Vec::with_capacity(n);
        let mut c: Vec<CommPoly> = Vec::with_capacity(n);
        for j in 0..n {
            let xj = spec.var(j);
            if spec.delta[j].iter().all(CommPoly::is_zero) {
                p.push(None);
                c.push(CommPoly::zero(n));
                y.push(xj);
                continue;
            }
            let candidates = if j == 0 {
                Vec::new()
            } else {
                chain_maxima(&p, j - 1)
            };
            let hits: Vec<(usize, CommPoly)> = candidates
                .iter()
                .map(|&i| (i, spec.delta_j(j, &y[i])))
                .filter(|(_, d)| !d.is_zero())
                .collect();
            if hits.len() != 1 {
                return Err(Error::AmbiguousPivot {
                    j: j + 1,
                    candidates: hits.iter().map(|(i, _)| i + 1).collect(),
                });
            }
            let (i, d) = hits.into_iter().next().unwrap();
            let cj = d.scale(&rat(spec.eta(j)).recip());
            y.push(y[i].mul(&xj).sub(&cj));
            p.push(Some(i));
            c.push(cj);
        }

        let mut kappa = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b = spec.bracket(&y[i], &y[j]);
                if b.is_zero() {
                    continue;
                }
                let prod = y[i].mul(&y[j]);
                let (le, lc) = prod.leading().unwrap();
                let k = rational_to_i64(&(b.coeff(le) / lc))
                    .ok_or(Error::NotLogCanonical { i: i + 1, j: j + 1 })?;
                if b != prod.scale(&rat(k)) {
                    return Err(Error::NotLogCanonical { i: i + 1, j: j + 1 });
                }
                kappa[i][j] = k;
                kappa[j][i] = -k;
            }
        }

        let mut y_weights = Vec::with_capacity(n);
        for (j, yj) in y.iter().enumerate() {
            match spec.weight_of(yj)? {
                WeightOf::Weight(w) => y_weights.push(w),
                WeightOf::NotHomogeneous => {
                    return Err(Error::IdentityFailed(format!(
                        "y{} is not homogeneous",
                        j + 1
                    )))
                }
            }
        }

        let mut out = Self {
            spec: spec.clone(),
            y,
            p,
            c,
            kappa,
            y_weights,
            x_in_y: Vec::new(),
        };
        for j in 0..n {
            let mut xj = CommLaurent::var(n, j).add(&out.embed(&out.c[j]));
            if let Some(pj) = out.p[j] {
                xj = xj.shift_exponents(&Exponent::unit(n, pj).neg());
            }
            out.x_in_y.push(xj);
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn level_sets(&self) -> Vec<Vec<usize>> {
        level_sets(&self.p)
    }

    pub fn rank(&self) -> usize {
        self.p.iter().filter(|x| x.is_none()).count()
    }

    /// `I_j`: indices `i < j` with `δ_{i+1}, ..., δ_j` all vanishing on `y_i`.
    pub fn i_set(&self, j: usize) -> Vec<usize> {
        chain_maxima(&self.p, j)
            .into_iter()
            .filter(|&i| i < j)
            .collect()
    }

    pub fn degree_pattern(&self, j: usize) -> Exponent {
        degree_pattern(&self.p, j)
    }

    /// Writes a polynomial in the generators `x` as a Laurent polynomial in `y`.
    pub fn embed(&self, f: &CommPoly) -> CommLaurent {
        let n = self.n();
        let mut out = CommLaurent::zero(n);
        for (e, c) in f.iter() {
            let mut t = CommLaurent::constant(n, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&self.x_in_y[i].pow(k as u32));
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn x_in_y(&self, j: usize) -> &CommLaurent {
        &self.x_in_y[j]
    }

    /// Inverse of [`embed`](Self::embed) on polynomials in `y` with nonnegative exponents.
    pub fn y_monomial_to_x(&self, e: &Exponent) -> CommPoly {
        let mut t = CommPoly::one(self.n());
        for (i, &k) in e.0.iter().enumerate() {
            if k > 0 {
                t = t.mul(&self.y[i].pow(k as u32));
            }
        }
        t
    }

    pub fn y_names(&self) -> Vec<String> {
        default_names("y", self.n())
    }

    pub fn compute_b(&self, k: usize) -> Result<BTerm> {
        let pk = self.p[k]
            .ok_or_else(|| Error::NotAMonomial(format!("b{} with p({}) = 0", k + 1, k + 1)))?;
        let cy = self.embed(&self.c[k]);
        let mut constant = CommLaurent::zero(self.n());
        for (e, v) in cy.iter() {
            if e.0[pk] < 0 || e.top().is_some_and(|t| t >= k) {
                return Err(Error::NotAMonomial(format!(
                    "c{} leaves Γ'[y{}]",
                    k + 1,
                    pk + 1
                )));
            }
            if e.0[pk] == 0 {
                constant.add_term(e.clone(), v.clone());
            }
        }
        match constant.single_term() {
            Some((e, v)) => Ok(BTerm {
                exponent: e.clone(),
                coeff: v.clone(),
            }),
            None => Err(Error::NotAMonomial(format!("b{}", k + 1))),
        }
    }

    /// Weight and log-canonical cross-check of `b_k = c y^v`.
    pub fn check_b(&self, k: usize, b: &BTerm) -> CheckResult {
        let name = format!("b{}_cross_check", k + 1);
        let pk = self.p[k].expect("b_k needs p(k) > 0");
        let mut w = vec![0i64; self.spec.r];
        for (i, &a) in b.exponent.0.iter().enumerate() {
            for (t, x) in w.iter_mut().enumerate() {
                *x += a as i64 * self.y_weights[i][t];
            }
        }
        if w != self.y_weights[k] {
            return CheckResult::fail(
                name,
                format!(
                    "weight {:?} differs from wt(y{}) = {:?}",
                    w,
                    k + 1,
                    self.y_weights[k]
                ),
            );
        }
        for l in 0..k {
            let lhs = lambda_form(&self.kappa, &b.exponent, &Exponent::unit(self.n(), l));
            let rhs = self.kappa[k][l] + if l == pk { self.spec.eta(k) } else { 0 };
            if lhs != rhs {
                return CheckResult::fail(
                    name,
                    format!("Λ(v, e{}) = {} but expected {}", l + 1, lhs, rhs),
                );
            }
        }
        CheckResult::pass(name)
    }

    /// `{y_j, x_i} ∈ y_j A_j` for every chain top `j` of `A_j` and `i <= j`.
    pub fn check_prime_normality(&self) -> CheckResult {
        let mut bad = Vec::new();
        for j in 0..self.n() {
            for i in 0..=j {
                let b = self.spec.bracket(&self.y[j], &self.spec.var(i));
                if !b.is_zero() && !b.div_rem(&self.y[j]).1.is_zero() {
                    bad.push(format!(
                        "{{y{}, x{}}} not divisible by y{}",
                        j + 1,
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        CheckResult::from_failures("y_normality", &bad)
    }

    /// For every `j` with `p(j) > 0`, `d_j = c_j / y_{p(j)}` is `(θ_j, δ_j)`-distinguished.
    pub fn check_step_distinguished(&self) -> CheckResult {
        let n = self.n();
        let mut bad = Vec::new();
        for j in 0..n {
            let Some(pj) = self.p[j] else { continue };
            let d = self
                .embed(&self.c[j])
                .shift_exponents(&Exponent::unit(n, pj).neg());
            let eta = rat(self.spec.eta(j));
            for a in 0..j {
                let xa = self.x_in_y(a);
                let lhs = torus_bracket(&self.kappa, &d, xa);
                let theta = xa.scale(&rat(self.spec.lambda_ij(a, j)));
                let rhs = theta.mul(&d).add(&self.embed(&self.spec.delta[j][a]));
                if lhs != rhs {
                    bad.push(format!("{{d{}, x{}}}", j + 1, a + 1));
                }
            }
            let images: Vec<CommLaurent> =
                (0..j).map(|a| self.embed(&self.spec.delta[j][a])).collect();
            let dd = laurent_derivation(&d, &images, self);
            if dd != d.mul(&d).scale(&(-eta)) {
                bad.push(format!("δ{}(d{}) ≠ -η d^2", j + 1, j + 1));
            }
        }
        CheckResult::from_failures("distinguished_steps", &bad)
    }
}

/// Applies the derivation `x_a ↦ images[a]` (images already in `y`) to an element of the torus.
fn laurent_derivation(
    f: &CommLaurent,
    images: &[CommLaurent],
    an: &CommutativeAnalysis,
) -> CommLaurent {
    let n = an.n();
    // δ(y_i) for the y's inside A_{len(images)}.
    let dy: Vec<CommLaurent> = (0..n)
        .map(|i| {
            if i >= images.len() {
                return CommLaurent::zero(n);
            }
            let mut acc = CommLaurent::zero(n);
            for (a, img) in images.iter().enumerate() {
                let part = an.y[i].partial(a);
                if !part.is_zero() && !img.is_zero() {
                    acc = acc.add(&an.embed(&part).mul(img));
                }
            }
            acc
        })
        .collect();
    torus_derivation(f, &dy)
}

/// Derivation of `k[y^{±1}]` determined by `y_i ↦ dy[i]`.
pub fn torus_derivation(f: &CommLaurent, dy: &[CommLaurent]) -> CommLaurent {
    let n = f.nvars();
    let mut out = CommLaurent::zero(n);
    for (v, c) in f.iter() {
        for (i, &k) in v.0.iter().enumerate() {
            if k == 0 || dy[i].is_zero() {
                continue;
            }
            let mono = CommLaurent::monomial(v.with(i, k - 1), c * rat(k as i64));
            out = out.add(&mono.mul(&dy[i]));
        }
    }
    out
}

/// The chain `d^{(0)}, ..., d^{(m)}` of a nontrivial prepend step.
#[derive(Clone, Debug)]
pub struct DChain {
    /// Tail index of the pivot `k*`.
    pub pivot: usize,
    /// `p^i(k*)` for `i = 0..=m`.
    pub chain: Vec<usize>,
    pub d: Vec<CommLaurent>,
    /// `M^{(i)} = y_{p^i} y_{p^{i+1}} (d^{(i)} - d^{(i+1)})`.
    pub m_monomials: Vec<(Exponent, Rational)>,
    pub checks: Vec<CheckResult>,
}

impl DChain {
    pub fn m(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn d0(&self) -> &CommLaurent {
        &self.d[0]
    }
}

pub fn compute_d_chain(step: &PrependData, tail: &CommutativeAnalysis) -> Result<Option<DChain>> {
    if step.is_trivial() {
        return Ok(None);
    }
    let n = tail.n();
    let eta = rat(step.eta);
    let delta_y: Vec<CommPoly> = tail.y.iter().map(|yj| step.delta_of(yj)).collect();
    let maxima = chain_maxima(&tail.p, n - 1);
    let hits: Vec<usize> = maxima
        .iter()
        .copied()
        .filter(|&i| !delta_y[i].is_zero())
        .collect();
    if hits.len() != 1 {
        return Err(Error::AmbiguousPivot {
            j: step.k + 1,
            candidates: hits.iter().map(|i| i + step.k + 2).collect(),
        });
    }
    let pivot = hits[0];
    let mut chain = vec![pivot];
    while let Some(prev) = tail.p[*chain.last().unwrap()] {
        chain.push(prev);
    }

    let d: Vec<CommLaurent> = chain
        .iter()
        .map(|&j| {
            tail.embed(&delta_y[j])
                .shift_exponents(&Exponent::unit(n, j).neg())
                .scale(&eta.recip())
        })
        .collect();
    let zero = CommLaurent::zero(n);
    let diff = |i: usize| -> CommLaurent {
        let next = d.get(i + 1).unwrap_or(&zero);
        d[i].sub(next)
    };

    let mut m_monomials = Vec::new();
    for i in 0..chain.len() {
        let mut shift = Exponent::unit(n, chain[i]);
        if let Some(&next) = chain.get(i + 1) {
            shift = shift.add(&Exponent::unit(n, next));
        }
        let mi = diff(i).shift_exponents(&shift);
        match mi.single_term() {
            Some((e, c)) if e.is_nonneg() => m_monomials.push((e.clone(), c.clone())),
            _ => {
                return Err(Error::NotAMonomial(format!(
                    "M({}) = {}",
                    i,
                    mi.display_with(&tail.y_names())
                )))
            }
        }
    }

    let mut checks = Vec::new();

    // d^{(i)} - d^{(i+1)} = (b_{p^i} / y_{p^i}) (d^{(i+1)} - d^{(i+2)})
    let mut bad = Vec::new();
    for i in 0..chain.len() - 1 {
        let b = tail.compute_b(chain[i])?;
        let factor = CommLaurent::monomial(b.exponent.sub(&Exponent::unit(n, chain[i])), b.coeff);
        if diff(i) != factor.mul(&diff(i + 1)) {
            bad.push(format!("i = {i}"));
        }
    }
    checks.push(CheckResult::from_failures("d_chain_recursion", &bad));

    let mut bad = Vec::new();
    for j in 0..n {
        if let Some(pj) = tail.p[j] {
            if delta_y[j].is_zero() != delta_y[pj].is_zero() {
                bad.push(format!("δ(y{}) vs δ(y{})", j + 1, pj + 1));
            }
        }
    }
    checks.push(CheckResult::from_failures("vanishing_along_chains", &bad));

    let dy: Vec<CommLaurent> = delta_y.iter().map(|f| tail.embed(f)).collect();
    let d0 = &d[0];
    let lhs = torus_derivation(d0, &dy);
    let rhs = d0.mul(d0).scale(&(-eta.clone()));
    checks.push(CheckResult::from_bool(
        "delta_d_equals_minus_eta_d_squared",
        lhs == rhs,
        || format!("δ(d) = {}", lhs.display_with(&tail.y_names())),
    ));

    let mut bad = Vec::new();
    for j in 0..n {
        let xj = tail.x_in_y(j);
        let lhs = torus_bracket(&tail.kappa, d0, xj);
        let rhs = xj
            .scale(&rat(step.sigma_exponents[j]))
            .mul(d0)
            .add(&tail.embed(&step.delta[j]));
        if lhs != rhs {
            bad.push(format!("x{}", j + step.k + 2));
        }
    }
    checks.push(CheckResult::from_failures("d_is_distinguished", &bad));

    Ok(Some(DChain {
        pivot,
        chain,
        d,
        m_monomials,
        checks,
    }))
}

impl Terms<Rational> {
    /// Text form in `y1, y2, ...`.
    pub fn display_y(&self) -> String {
        self.display_with(&default_names("y", self.nvars()))
            .to_string()
    }
}
