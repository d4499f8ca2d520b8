//! Polynomial Poisson algebras given by a generator table and their validation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{rat, Rational};
use crate::terms::{default_names, CommPoly, Exponent};
use crate::text::parse_comm_poly;

pub type Weight = Vec<i64>;

pub fn pair(w: &[i64], h: &[i64]) -> i64 {
    w.iter().zip(h).map(|(a, b)| a * b).sum()
}

pub fn add_weights(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Serialized form of an extension specification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub r: usize,
    pub lambda: Vec<Vec<i64>>,
    pub h: Vec<Vec<i64>>,
    pub h_prime: Vec<Vec<i64>>,
    #[serde(default)]
    pub delta: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

/// Iterated Poisson-Ore extension `k[x1][x2; θ2, δ2]...[xn; θn, δn]` with torus data.
///
/// Indices are 0-based internally; text forms are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionSpec {
    pub name: String,
    pub n: usize,
    pub r: usize,
    pub lambda: Vec<Weight>,
    pub h: Vec<Weight>,
    pub h_prime: Vec<Weight>,
    /// `delta[j][i]` is `δ_j(x_i)` for `i < j`.
    pub delta: Vec<Vec<CommPoly>>,
    pub names: Vec<String>,
    brackets: Vec<Vec<CommPoly>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightOf {
    Weight(Weight),
    NotHomogeneous,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValidationEntry {
    pub check: String,
    pub ok: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<String> {
        self.entries
            .iter()
            .flat_map(|e| {
                e.failures
                    .iter()
                    .map(move |f| format!("{}: {}", e.check, f))
            })
            .collect()
    }
}

fn check_len(what: &str, v: &[Vec<i64>], n: usize, r: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::Parse(format!(
            "{what} has {} entries, expected {n}",
            v.len()
        )));
    }
    if let Some(bad) = v.iter().find(|w| w.len() != r) {
        return Err(Error::Parse(format!(
            "{what} entry of length {}, expected {r}",
            bad.len()
        )));
    }
    Ok(())
}

impl ExtensionSpec {
    pub fn from_file(file: &SpecFile) -> Result<Self> {
        let n = file.n;
        if n == 0 {
            return Err(Error::Parse("n must be positive".into()));
        }
        check_len("lambda", &file.lambda, n, file.r)?;
        check_len("h", &file.h, n, file.r)?;
        check_len("h_prime", &file.h_prime, n, file.r)?;
        let names = match &file.names {
            Some(names) if names.len() == n => names.clone(),
            Some(names) => {
                return Err(Error::Parse(format!(
                    "{} names given for {n} generators",
                    names.len()
                )))
            }
            None => default_names("x", n),
        };
        let mut delta = vec![Vec::new(); n];
        for (j, row) in delta.iter_mut().enumerate() {
            *row = vec![CommPoly::zero(n); j];
        }
        for (jk, row) in &file.delta {
            let j = parse_index(jk, n)?;
            for (ik, text) in row {
                let i = parse_index(ik, n)?;
                if i >= j {
                    return Err(Error::Parse(format!(
                        "delta entry ({jk}, {ik}) needs i < j"
                    )));
                }
                delta[j][i] = parse_comm_poly(text, &names)?;
            }
        }
        Ok(Self::new(
            file.name.clone().unwrap_or_else(|| "spec".into()),
            file.r,
            file.lambda.clone(),
            file.h.clone(),
            file.h_prime.clone(),
            delta,
            names,
        ))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> SpecFile {
        let mut delta = BTreeMap::new();
        for j in 0..self.n {
            for i in 0..j {
                if !self.delta[j][i].is_zero() {
                    delta
                        .entry((j + 1).to_string())
                        .or_insert_with(BTreeMap::new)
                        .insert(
                            (i + 1).to_string(),
                            self.delta[j][i].display_with(&self.names).to_string(),
                        );
                }
            }
        }
        SpecFile {
            name: Some(self.name.clone()),
            n: self.n,
            r: self.r,
            lambda: self.lambda.clone(),
            h: self.h.clone(),
            h_prime: self.h_prime.clone(),
            delta,
            names: Some(self.names.clone()),
        }
    }

    pub fn new(
        name: String,
        r: usize,
        lambda: Vec<Weight>,
        h: Vec<Weight>,
        h_prime: Vec<Weight>,
        delta: Vec<Vec<CommPoly>>,
        names: Vec<String>,
    ) -> Self {
        let n = lambda.len();
        let mut spec = Self {
            name,
            n,
            r,
            lambda,
            h,
            h_prime,
            delta,
            names,
            brackets: Vec::new(),
        };
        spec.brackets = (0..n)
            .map(|i| (0..n).map(|j| spec.generator_bracket(i, j)).collect())
            .collect();
        spec
    }

    /// `λ_{i,j} = λ_i(h_j)`.
    pub fn lambda_ij(&self, i: usize, j: usize) -> i64 {
        pair(&self.lambda[i], &self.h[j])
    }

    /// `η_j = λ_j(h_j)`.
    pub fn eta(&self, j: usize) -> i64 {
        pair(&self.lambda[j], &self.h[j])
    }

    /// `λ_j(h'_j)`, the scalar of the step that prepends `x_j`.
    pub fn eta_prime(&self, j: usize) -> i64 {
        pair(&self.lambda[j], &self.h_prime[j])
    }

    fn generator_bracket(&self, a: usize, b: usize) -> CommPoly {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => CommPoly::zero(self.n),
            // {x_j, x_i} = λ_{i,j} x_i x_j + δ_j(x_i)
            Greater => {
                let (j, i) = (a, b);
                let mut e = Exponent::zeros(self.n);
                e.0[i] += 1;
                e.0[j] += 1;
                CommPoly::monomial(e, rat(self.lambda_ij(i, j))).add(&self.delta[j][i])
            }
            Less => self.generator_bracket(b, a).neg(),
        }
    }

    pub fn var(&self, i: usize) -> CommPoly {
        CommPoly::var(self.n, i)
    }

    /// `{x_a, x_b}`.
    pub fn gen_bracket(&self, a: usize, b: usize) -> &CommPoly {
        &self.brackets[a][b]
    }

    pub fn bracket(&self, f: &CommPoly, g: &CommPoly) -> CommPoly {
        let df: Vec<CommPoly> = (0..self.n).map(|i| f.partial(i)).collect();
        let dg: Vec<CommPoly> = (0..self.n).map(|i| g.partial(i)).collect();
        let mut out = CommPoly::zero(self.n);
        for i in 0..self.n {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if i == j || dg[j].is_zero() || self.brackets[i][j].is_zero() {
                    continue;
                }
                out = out.add(&df[i].mul(&dg[j]).mul(&self.brackets[i][j]));
            }
        }
        out
    }

    /// Applies the derivation sending `x_i` to `images[i]`.
    pub fn apply_derivation(f: &CommPoly, images: &[CommPoly]) -> CommPoly {
        let mut out = CommPoly::zero(f.nvars());
        for (i, img) in images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let d = f.partial(i);
            if !d.is_zero() {
                out = out.add(&d.mul(img));
            }
        }
        out
    }

    /// `δ_j` extended to `A_{j-1}` as a derivation.
    pub fn delta_j(&self, j: usize, f: &CommPoly) -> CommPoly {
        Self::apply_derivation(f, &self.delta[j])
    }

    /// `θ_j`, acting by `x_i ↦ λ_{i,j} x_i` on `A_{j-1}`.
    pub fn theta_j(&self, j: usize, f: &CommPoly) -> CommPoly {
        let images: Vec<CommPoly> = (0..j)
            .map(|i| self.var(i).scale(&rat(self.lambda_ij(i, j))))
            .collect();
        Self::apply_derivation(f, &images)
    }

    pub fn monomial_weight(&self, e: &Exponent) -> Weight {
        let mut w = vec![0; self.r];
        for (i, &k) in e.0.iter().enumerate() {
            for (t, x) in w.iter_mut().enumerate() {
                *x += k as i64 * self.lambda[i][t];
            }
        }
        w
    }

    pub fn weight_of(&self, f: &CommPoly) -> Result<WeightOf> {
        let mut it = f.iter();
        let Some((e0, _)) = it.next() else {
            return Err(Error::ZeroInput);
        };
        let w = self.monomial_weight(e0);
        for (e, _) in it {
            if self.monomial_weight(e) != w {
                return Ok(WeightOf::NotHomogeneous);
            }
        }
        Ok(WeightOf::Weight(w))
    }

    /// Sub-extension on the generators `start..n`, reindexed from 0.
    pub fn restrict(&self, start: usize) -> ExtensionSpec {
        let m = self.n - start;
        let delta = (start..self.n)
            .map(|j| {
                (start..j)
                    .map(|i| self.delta[j][i].reindex(m, |v| v - start))
                    .collect()
            })
            .collect();
        ExtensionSpec::new(
            format!("{}[{}..{}]", self.name, start + 1, self.n),
            self.r,
            self.lambda[start..].to_vec(),
            self.h[start..].to_vec(),
            self.h_prime[start..].to_vec(),
            delta,
            self.names[start..].to_vec(),
        )
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.n;
        let mut entries = Vec::new();
        let mut push = |check: &str, failures: Vec<String>| {
            entries.push(ValidationEntry {
                check: check.into(),
                ok: failures.is_empty(),
                failures,
            });
        };
        let nm = |i: usize| self.names[i].clone();

        let mut f = Vec::new();
        for j in 0..n {
            for i in 0..j {
                let bad: Vec<usize> = self.delta[j][i]
                    .support()
                    .into_iter()
                    .filter(|&v| v <= i || v >= j)
                    .collect();
                if !bad.is_empty() {
                    f.push(format!(
                        "δ{}({}) involves {}",
                        j + 1,
                        nm(i),
                        bad.iter().map(|&v| nm(v)).collect::<Vec<_>>().join(", ")
                    ));
                }
            }
        }
        push("support", f);

        let mut f = Vec::new();
        for j in 0..n {
            for i in 0..j {
                let lhs = pair(&self.lambda[i], &self.h[j]);
                let rhs = -pair(&self.lambda[j], &self.h_prime[i]);
                if lhs != rhs {
                    f.push(format!(
                        "λ{}(h{}) = {} but -λ{}(h'{}) = {}",
                        i + 1,
                        j + 1,
                        lhs,
                        j + 1,
                        i + 1,
                        rhs
                    ));
                }
            }
        }
        push("pairing", f);

        let f = (0..n)
            .filter(|&j| self.eta(j) == 0)
            .map(|j| format!("λ{0}(h{0}) = 0", j + 1))
            .collect();
        push("eta", f);
        let f = (0..n)
            .filter(|&j| self.eta_prime(j) == 0)
            .map(|j| format!("λ{0}(h'{0}) = 0", j + 1))
            .collect();
        push("eta_prime", f);

        let mut f = Vec::new();
        for j in 0..n {
            for i in 0..j {
                let d = &self.delta[j][i];
                if d.is_zero() {
                    continue;
                }
                let want = add_weights(&self.lambda[i], &self.lambda[j]);
                match self.weight_of(d) {
                    Ok(WeightOf::Weight(w)) if w == want => {}
                    Ok(WeightOf::Weight(w)) => f.push(format!(
                        "δ{}({}) has weight {:?}, expected {:?}",
                        j + 1,
                        nm(i),
                        w,
                        want
                    )),
                    _ => f.push(format!("δ{}({}) is not homogeneous", j + 1, nm(i))),
                }
            }
        }
        push("homogeneity", f);

        // δ_j({a, b}) = {δ_j a, b} + {a, δ_j b} + θ_j(a) δ_j(b) - δ_j(a) θ_j(b)
        let mut f = Vec::new();
        for j in 0..n {
            for a in 0..j {
                for b in (a + 1)..j {
                    let (xa, xb) = (self.var(a), self.var(b));
                    let lhs = self.delta_j(j, self.gen_bracket(a, b));
                    let (da, db) = (&self.delta[j][a], &self.delta[j][b]);
                    let rhs = self
                        .bracket(da, &xb)
                        .add(&self.bracket(&xa, db))
                        .add(&self.theta_j(j, &xa).mul(db))
                        .sub(&da.mul(&self.theta_j(j, &xb)));
                    if lhs != rhs {
                        f.push(format!("δ{} fails on ({}, {})", j + 1, nm(a), nm(b)));
                    }
                }
            }
        }
        push("theta_derivation", f);

        // [θ_j, δ_j] = η_j δ_j on generators
        let mut f = Vec::new();
        for j in 0..n {
            let eta = rat(self.eta(j));
            for i in 0..j {
                let xi = self.var(i);
                let lhs = self
                    .theta_j(j, &self.delta[j][i])
                    .sub(&self.delta_j(j, &self.theta_j(j, &xi)));
                if lhs != self.delta[j][i].scale(&eta) {
                    f.push(format!("[θ{0}, δ{0}]({1}) ≠ η{0} δ{0}({1})", j + 1, nm(i)));
                }
            }
        }
        push("commutator", f);

        let mut f = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let (xa, xb, xc) = (self.var(a), self.var(b), self.var(c));
                    let s = self
                        .bracket(&xa, self.gen_bracket(b, c))
                        .add(&self.bracket(&xb, self.gen_bracket(c, a)))
                        .add(&self.bracket(&xc, self.gen_bracket(a, b)));
                    if !s.is_zero() {
                        f.push(format!("({}, {}, {})", nm(a), nm(b), nm(c)));
                    }
                }
            }
        }
        push("jacobi", f);

        let valid = entries.iter().all(|e| e.ok);
        ValidationReport { valid, entries }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.valid {
            Ok(())
        } else {
            Err(Error::InvalidSpec(report.failures()))
        }
    }

    pub fn display(&self, f: &CommPoly) -> String {
        f.display_with(&self.names).to_string()
    }
}

fn parse_index(key: &str, n: usize) -> Result<usize> {
    let k: usize = key
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad index '{key}'")))?;
    if k == 0 || k > n {
        return Err(Error::Parse(format!("index {k} out of range 1..={n}")));
    }
    Ok(k - 1)
}

/// Data of the step that adjoins `x_k` in front of `k[x_{k+1}, ..., x_n]`.
#[derive(Clone, Debug)]
pub struct PrependData {
    pub k: usize,
    pub tail: ExtensionSpec,
    /// `θ(x_j) = l_j x_j`, indexed by tail position.
    pub sigma_exponents: Vec<i64>,
    /// `δ(x_j) = -δ_j(x_k)` in tail variables.
    pub delta: Vec<CommPoly>,
    pub eta: i64,
    pub weight: Weight,
}

impl PrependData {
    pub fn new(spec: &ExtensionSpec, k: usize) -> Self {
        let tail = spec.restrict(k + 1);
        let m = tail.n;
        let sigma_exponents = (k + 1..spec.n)
            .map(|j| pair(&spec.lambda[j], &spec.h_prime[k]))
            .collect();
        let delta = (k + 1..spec.n)
            .map(|j| spec.delta[j][k].reindex(m, |v| v - (k + 1)).neg())
            .collect();
        Self {
            k,
            tail,
            sigma_exponents,
            delta,
            eta: spec.eta_prime(k),
            weight: spec.lambda[k].clone(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.delta.iter().all(CommPoly::is_zero)
    }

    /// `δ` on the tail algebra, as a derivation.
    pub fn delta_of(&self, f: &CommPoly) -> CommPoly {
        ExtensionSpec::apply_derivation(f, &self.delta)
    }

    /// `θ` on the tail algebra.
    pub fn theta_of(&self, f: &CommPoly) -> CommPoly {
        let m = self.tail.n;
        let images: Vec<CommPoly> = (0..m)
            .map(|j| CommPoly::var(m, j).scale(&rat(self.sigma_exponents[j])))
            .collect();
        ExtensionSpec::apply_derivation(f, &images)
    }
}

pub fn rational_to_i64(c: &Rational) -> Option<i64> {
    if c.is_integer() {
        i64::try_from(c.to_integer()).ok()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn bundled_fixtures_validate() {
        for fx in fixtures::all() {
            let report = fx.spec.validate();
            assert!(report.valid, "{}: {:?}", fx.name, report.failures());
        }
    }

    #[test]
    fn weyl_generator_brackets() {
        let spec = fixtures::by_name("weyl3").unwrap().spec;
        let x2sq = parse_comm_poly("x2^2", &spec.names).unwrap();
        // {x1, x3} = -x2^2
        assert_eq!(spec.gen_bracket(0, 2), &x2sq.neg());
        assert_eq!(
            spec.gen_bracket(1, 0),
            &parse_comm_poly("x1*x2", &spec.names).unwrap()
        );
        assert_eq!(spec.eta_prime(0), -2);
    }

    #[test]
    fn weights_and_zero_input() {
        let spec = fixtures::by_name("weyl3").unwrap().spec;
        let p = parse_comm_poly("x1*x3 - x2^2/2", &spec.names).unwrap();
        assert_eq!(spec.weight_of(&p).unwrap(), WeightOf::Weight(vec![2, 2]));
        let q = parse_comm_poly("x1 + x2", &spec.names).unwrap();
        assert_eq!(spec.weight_of(&q).unwrap(), WeightOf::NotHomogeneous);
        assert_eq!(spec.weight_of(&CommPoly::zero(3)), Err(Error::ZeroInput));
    }

    #[test]
    fn validation_reports_broken_support_and_pairing() {
        let mut file = fixtures::by_name("weyl3").unwrap().spec.to_file();
        file.delta
            .get_mut("3")
            .unwrap()
            .insert("1".into(), "x1*x2".into());
        file.h[1] = vec![5, 5];
        let report = ExtensionSpec::from_file(&file).unwrap().validate();
        assert!(!report.valid);
        let failed: Vec<&str> = report
            .entries
            .iter()
            .filter(|e| !e.ok)
            .map(|e| e.check.as_str())
            .collect();
        assert!(failed.contains(&"support"));
        assert!(failed.contains(&"pairing"));
    }

    #[test]
    fn zero_index_is_rejected() {
        let mut file = fixtures::by_name("weyl3").unwrap().spec.to_file();
        file.delta
            .get_mut("3")
            .unwrap()
            .insert("1".into(), "x0".into());
        assert!(matches!(
            ExtensionSpec::from_file(&file),
            Err(Error::Parse(_))
        ));
    }
}
