//! Exponent vectors under the reverse-lexicographic total order and sparse term maps.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{QRational, Rational, Scalar};

/// Vector in `Z^n`. Ordered with the last coordinate most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Exponent(pub Vec<i32>);

impl Exponent {
    pub fn zeros(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Exponent(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&x| x as i64).sum()
    }

    pub fn add(&self, o: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Exponent {
        Exponent(self.0.iter().map(|a| -a).collect())
    }

    pub fn scaled(&self, k: i32) -> Exponent {
        Exponent(self.0.iter().map(|a| a * k).collect())
    }

    pub fn with(&self, i: usize, value: i32) -> Exponent {
        let mut v = self.0.clone();
        v[i] = value;
        Exponent(v)
    }

    /// Highest index with a nonzero entry.
    pub fn top(&self) -> Option<usize> {
        self.0.iter().rposition(|&x| x != 0)
    }

    /// Lowest index with a nonzero entry.
    pub fn bottom(&self) -> Option<usize> {
        self.0.iter().position(|&x| x != 0)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `u < v` iff some `u_k < v_k` with `u_j = v_j` for every `j > k`.
pub fn compare_total_order(u: &[i32], v: &[i32]) -> Result<Ordering> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(u.iter().rev().cmp(v.iter().rev()))
}

/// Sparse linear combination of exponent vectors.
#[derive(Clone, PartialEq, Debug)]
pub struct Terms<C> {
    nvars: usize,
    map: BTreeMap<Exponent, C>,
}

pub type CommPoly = Terms<Rational>;
pub type CommLaurent = Terms<Rational>;
pub type OreElement = Terms<QRational>;
pub type TorusElement = Terms<QRational>;

impl<C: Scalar> Terms<C> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            map: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(Exponent::zeros(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn monomial(e: Exponent, c: C) -> Self {
        let mut out = Self::zero(e.len());
        out.add_term(e, c);
        out
    }

    /// The generator with index `i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(nvars, i), C::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &C)> {
        self.map.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> C {
        self.map.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: C) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.map.get_mut(&e) {
            Some(slot) => {
                let s = slot.add_ref(&c);
                if s.is_zero() {
                    self.map.remove(&e);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.map.insert(e, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        for (e, v) in other.iter() {
            self.add_term(e.clone(), v.mul_ref(c));
        }
    }

    /// Term with the largest exponent under the total order.
    pub fn leading(&self) -> Option<(&Exponent, &C)> {
        self.map.iter().next_back()
    }

    pub fn single_term(&self) -> Option<(&Exponent, &C)> {
        if self.map.len() == 1 {
            self.map.iter().next()
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in o.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in o.iter() {
            out.add_term(e.clone(), c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg_ref())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        self.map_coeffs(|v| v.mul_ref(c))
    }

    pub fn map_coeffs<F: Fn(&C) -> C>(&self, f: F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.iter() {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn map_terms<D: Scalar, F: Fn(&Exponent, &C) -> (Exponent, D)>(
        &self,
        nvars: usize,
        f: F,
    ) -> Terms<D> {
        let mut out = Terms::zero(nvars);
        for (e, c) in self.iter() {
            let (e2, d) = f(e, c);
            out.add_term(e2, d);
        }
        out
    }

    /// Multiplies every exponent by the monomial `e` (commutative shift).
    pub fn shift_exponents(&self, e: &Exponent) -> Self {
        self.map_terms(self.nvars, |x, c| (x.add(e), c.clone()))
    }

    pub fn is_nonneg(&self) -> bool {
        self.map.keys().all(Exponent::is_nonneg)
    }

    /// Set of variable indices that occur with a nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for e in self.map.keys() {
            for (i, &x) in e.0.iter().enumerate() {
                if x != 0 {
                    used[i] = true;
                }
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    /// Commutative product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in self.iter() {
            for (e2, c2) in o.iter() {
                out.add_term(e1.add(e2), c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative along variable `i`.
    pub fn partial(&self, i: usize) -> Self
    where
        C: From<Rational>,
    {
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.iter() {
            let k = e.0[i];
            if k != 0 {
                let mut e2 = e.clone();
                e2.0[i] -= 1;
                out.add_term(e2, c.mul_ref(&C::from(crate::scalars::rat(k as i64))));
            }
        }
        out
    }

    /// Re-embeds into `nvars` variables, moving variable `i` to `map(i)`.
    pub fn reindex(&self, nvars: usize, map: impl Fn(usize) -> usize) -> Self {
        self.map_terms(nvars, |e, c| {
            let mut v = vec![0; nvars];
            for (i, &x) in e.0.iter().enumerate() {
                if x != 0 {
                    v[map(i)] = x;
                }
            }
            (Exponent(v), c.clone())
        })
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> TermsDisplay<'a, C> {
        TermsDisplay { terms: self, names }
    }
}

impl Terms<Rational> {
    /// Exact division with remainder by a single divisor under the total order.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let (le, lc) = divisor.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quo = Self::zero(self.nvars);
        let mut out_rem = Self::zero(self.nvars);
        while let Some((e, c)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let d = e.sub(le);
            if d.is_nonneg() {
                let t = Self::monomial(d, &c / lc);
                quo = quo.add(&t);
                rem = rem.sub(&t.mul(divisor));
            } else {
                rem.map.remove(&e);
                out_rem.add_term(e, c);
            }
        }
        (quo, out_rem)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::from_integer(0.into());
        for (e, c) in self.iter() {
            let mut t = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t *= num_traits::pow(point[i].clone(), k as usize);
                } else if k < 0 {
                    t *= num_traits::pow(point[i].recip(), (-k) as usize);
                }
            }
            acc += t;
        }
        acc
    }
}

pub struct TermsDisplay<'a, C> {
    terms: &'a Terms<C>,
    names: &'a [String],
}

pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Writes a monomial in index order, e.g. `X1*X3^2*Y4^-1`.
pub fn write_monomial(f: &mut dyn fmt::Write, e: &Exponent, names: &[String]) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.0.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(&names[i])?;
        if k != 1 {
            write!(f, "^{}", k)?;
        }
    }
    if first {
        f.write_char('1')?;
    }
    Ok(())
}

impl<C: Scalar> fmt::Display for TermsDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return write!(f, "0");
        }
        let one = C::one();
        let minus_one = one.neg_ref();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let first = idx == 0;
            let is_const = e.is_zero();
            if c.is_compound() {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "({})", c)?;
                if !is_const {
                    write!(f, "*")?;
                    write_monomial(f, e, self.names)?;
                }
                continue;
            }
            let text = c.to_string();
            let (neg, abs) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            let unit = *c == one || *c == minus_one;
            if is_const {
                write!(f, "{}", abs)?;
            } else {
                if !unit {
                    write!(f, "{}*", abs)?;
                }
                write_monomial(f, e, self.names)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn last_coordinate_dominates() {
        assert_eq!(
            compare_total_order(&[5, 0], &[0, 1]).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            compare_total_order(&[1, 2], &[1, 2]).unwrap(),
            Ordering::Equal
        );
        assert!(compare_total_order(&[1], &[1, 2]).is_err());
        assert!(Exponent(vec![1, 0, 1]) > Exponent(vec![0, 2, 0]));
    }

    proptest! {
        #[test]
        fn order_is_translation_invariant(
            u in proptest::collection::vec(-5i32..5, 3),
            v in proptest::collection::vec(-5i32..5, 3),
            w in proptest::collection::vec(-5i32..5, 3),
        ) {
            let (u, v, w) = (Exponent(u), Exponent(v), Exponent(w));
            prop_assert_eq!(u.cmp(&v), u.add(&w).cmp(&v.add(&w)));
        }
    }

    #[test]
    fn printing_uses_leading_term_first() {
        let names = default_names("x", 3);
        let mut p = CommPoly::zero(3);
        p.add_term(Exponent(vec![1, 0, 1]), rat(1));
        p.add_term(Exponent(vec![0, 2, 0]), ratio(-1, 2));
        assert_eq!(p.display_with(&names).to_string(), "x1*x3 - 1/2*x2^2");
    }

    #[test]
    fn division_with_remainder() {
        // (x1*x2 + x2) / x2 = x1 + 1
        let mut p = CommPoly::zero(2);
        p.add_term(Exponent(vec![1, 1]), rat(1));
        p.add_term(Exponent(vec![0, 1]), rat(1));
        let d = CommPoly::var(2, 1);
        let (q, r) = p.div_rem(&d);
        assert!(r.is_zero());
        assert_eq!(q.mul(&d), p);
    }
}
