//! Exact scalars: rationals, Laurent polynomials in `q` and rational functions in `q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ScalarError;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Common arithmetic surface shared by every coefficient ring in the crate.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// True when printing needs parentheses next to a `*`.
    fn is_compound(&self) -> bool;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn is_compound(&self) -> bool {
        false
    }
}

/// Element of `Q[q, q^-1]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QLaurent {
    terms: BTreeMap<i64, Rational>,
}

impl QLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn q_pow(e: i64) -> Self {
        Self::monomial(rat(1), e)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in it {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: i64, c: Rational) {
        if Zero::is_zero(&c) {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Zero::zero);
        *slot += c;
        if Zero::is_zero(slot) {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(One::is_one)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Returns `(c, e)` when the element is the single term `c*q^e`.
    pub fn as_monomial(&self) -> Option<(Rational, i64)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), *e))
        } else {
            None
        }
    }

    /// Returns `e` when the element is exactly `q^e`.
    pub fn as_q_power(&self) -> Option<i64> {
        match self.as_monomial() {
            Some((c, e)) if One::is_one(&c) => Some(e),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if Zero::is_zero(c) {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + s, v.clone())).collect(),
        }
    }

    pub fn eval_at_one(&self) -> Rational {
        self.terms
            .values()
            .fold(Zero::zero(), |acc: Rational, c| acc + c)
    }

    pub fn eval_at(&self, x: &Rational) -> Rational {
        let mut acc: Rational = Zero::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rational(x, *e);
        }
        acc
    }

    /// Exact quotient by `q - 1`.
    pub fn divide_by_q_minus_one(&self) -> Result<QLaurent, ScalarError> {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Ok(Self::zero());
        };
        // Synthetic division from the top: b_{e-1} = a_e + b_e.
        let mut out = BTreeMap::new();
        let mut carry: Rational = Zero::zero();
        let mut e = hi;
        while e > lo {
            carry += self.coeff(e);
            if !Zero::is_zero(&carry) {
                out.insert(e - 1, carry.clone());
            }
            e -= 1;
        }
        if carry + self.coeff(lo) != Zero::zero() {
            return Err(ScalarError::NotDivisible(self.to_string()));
        }
        Ok(Self { terms: out })
    }

    fn split(&self) -> (i64, Vec<Rational>) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let poly = (lo..=hi).map(|e| self.coeff(e)).collect();
        (lo, poly)
    }

    fn from_poly(shift: i64, poly: &[Rational]) -> Self {
        Self::from_terms(
            poly.iter()
                .enumerate()
                .map(|(i, c)| (i as i64 + shift, c.clone())),
        )
    }
}

fn pow_rational(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

// Dense univariate helpers, coefficients low to high, no trailing zeros.

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lb = &b[db];
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quo = vec![<Rational as Zero>::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / lb;
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] = &rem[shift + i] - &c * bc;
        }
        quo[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quo);
    (quo, rem)
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lc) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &lc;
        }
    }
    x
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Scalar for QLaurent {
    fn zero() -> Self {
        QLaurent::zero()
    }
    fn one() -> Self {
        QLaurent::one()
    }
    fn is_zero(&self) -> bool {
        QLaurent::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn is_compound(&self) -> bool {
        self.terms.len() > 1 || self.terms.iter().any(|(e, _)| *e != 0)
    }
}

fn fmt_rational_coeff(c: &Rational, first: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if neg { " - " } else { " + " })?;
    }
    write!(f, "{}", abs)
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let first = i == 0;
            if *e == 0 {
                fmt_rational_coeff(c, first, f)?;
                continue;
            }
            let abs = c.abs();
            if One::is_one(&abs) {
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
                }
            } else {
                fmt_rational_coeff(c, first, f)?;
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "q")?;
            } else {
                write!(f, "q^{}", e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QLaurent({})", self)
    }
}

/// Element of `Q(q)` kept as `num / den` with `den` monic, `den(0) != 0`
/// and no common factor. Elements of `L` have `den == 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRational {
    num: QLaurent,
    den: QLaurent,
}

impl Default for QRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<QLaurent> for QRational {
    fn from(num: QLaurent) -> Self {
        Self {
            num,
            den: QLaurent::one(),
        }
    }
}

impl From<Rational> for QRational {
    fn from(c: Rational) -> Self {
        QLaurent::constant(c).into()
    }
}

impl QRational {
    pub fn zero() -> Self {
        QLaurent::zero().into()
    }

    pub fn one() -> Self {
        QLaurent::one().into()
    }

    pub fn from_int(n: i64) -> Self {
        rat(n).into()
    }

    pub fn q_pow(e: i64) -> Self {
        QLaurent::q_pow(e).into()
    }

    pub fn new(num: QLaurent, den: QLaurent) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (s, p) = num.split();
        let (t, qd) = den.split();
        let g = poly_gcd(&p, &qd);
        let (mut p, mut qd) = if g.len() > 1 {
            (poly_divrem(&p, &g).0, poly_divrem(&qd, &g).0)
        } else {
            (p, qd)
        };
        let lc = qd.last().unwrap().clone();
        for c in p.iter_mut().chain(qd.iter_mut()) {
            *c = &*c / &lc;
        }
        Ok(Self {
            num: QLaurent::from_poly(s - t, &p),
            den: QLaurent::from_poly(0, &qd),
        })
    }

    pub fn numer(&self) -> &QLaurent {
        &self.num
    }

    pub fn denom(&self) -> &QLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_in_l(&self) -> bool {
        self.den.is_one()
    }

    pub fn to_laurent(&self) -> Option<QLaurent> {
        self.is_in_l().then(|| self.num.clone())
    }

    pub fn as_q_power(&self) -> Option<i64> {
        if self.is_in_l() {
            self.num.as_q_power()
        } else {
            None
        }
    }

    pub fn as_monomial(&self) -> Option<(Rational, i64)> {
        if self.is_in_l() {
            self.num.as_monomial()
        } else {
            None
        }
    }

    pub fn shift(&self, s: i64) -> Self {
        Self {
            num: self.num.shift(s),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if Zero::is_zero(c) {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if rhs.is_in_l() {
            if let Some((c, e)) = rhs.num.as_monomial() {
                return Ok(Self {
                    num: self.num.shift(-e).scale(&c.recip()),
                    den: self.den.clone(),
                });
            }
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Value at `q = 1`; `None` when `q = 1` is a pole.
    pub fn eval_at_one(&self) -> Option<Rational> {
        let d = self.den.eval_at_one();
        if Zero::is_zero(&d) {
            None
        } else {
            Some(self.num.eval_at_one() / d)
        }
    }

    /// Exact quotient by `q - 1`, required to stay in `L`.
    pub fn divide_by_q_minus_one(&self) -> Result<QRational, ScalarError> {
        let num = self
            .to_laurent()
            .ok_or_else(|| ScalarError::NotInL(self.to_string()))?;
        Ok(num.divide_by_q_minus_one()?.into())
    }

    /// Value of `self / (q - 1)` at `q = 1`.
    pub fn semiclassical_limit(&self) -> Result<Rational, ScalarError> {
        if self.is_zero() {
            return Ok(Zero::zero());
        }
        let quo = Self::new(
            self.num.clone(),
            &self.den * &QLaurent::from_terms([(1, rat(1)), (0, rat(-1))]),
        )?;
        quo.eval_at_one()
            .ok_or_else(|| ScalarError::NotDivisible(self.to_string()))
    }
}

impl Add for &QRational {
    type Output = QRational;
    fn add(self, rhs: &QRational) -> QRational {
        if self.den == rhs.den {
            if self.den.is_one() {
                return (&self.num + &rhs.num).into();
            }
            return QRational::new(&self.num + &rhs.num, self.den.clone())
                .expect("nonzero denominator");
        }
        QRational::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero denominator")
    }
}

impl Sub for &QRational {
    type Output = QRational;
    fn sub(self, rhs: &QRational) -> QRational {
        self + &(-rhs)
    }
}

impl Mul for &QRational {
    type Output = QRational;
    fn mul(self, rhs: &QRational) -> QRational {
        if self.den.is_one() && rhs.den.is_one() {
            return (&self.num * &rhs.num).into();
        }
        QRational::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Neg for &QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        QRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(QLaurent, Add, add);
forward_owned!(QLaurent, Sub, sub);
forward_owned!(QLaurent, Mul, mul);
forward_owned!(QRational, Add, add);
forward_owned!(QRational, Sub, sub);
forward_owned!(QRational, Mul, mul);

impl Scalar for QRational {
    fn zero() -> Self {
        QRational::zero()
    }
    fn one() -> Self {
        QRational::one()
    }
    fn is_zero(&self) -> bool {
        QRational::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn is_compound(&self) -> bool {
        !self.den.is_one() || self.num.is_compound()
    }
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.is_compound() {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/({})", self.den)
    }
}

impl fmt::Debug for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRational({})", self)
    }
}
