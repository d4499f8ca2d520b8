//! Text forms for scalars, commutative polynomials and ordered (Ore / torus) elements.
//!
//! Input is parsed into a free algebra over `Q(q)` and then projected to the
//! requested shape. Ordered shapes require factors in increasing index order.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalars::{QRational, Rational};
use crate::terms::{CommPoly, Exponent, Terms};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(
                text.parse()
                    .map_err(|_| Error::Parse(format!("bad number {text}")))?,
            ));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!(
                "unexpected character '{c}' in \"{s}\""
            )));
        }
    }
    Ok(out)
}

type Word = Vec<(usize, i32)>;

/// Element of the free algebra on the named generators.
#[derive(Clone, Debug, PartialEq)]
struct Free(BTreeMap<Word, QRational>);

impl Free {
    fn scalar(c: QRational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Vec::new(), c);
        }
        Free(m)
    }

    fn var(i: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert(vec![(i, 1)], QRational::one());
        Free(m)
    }

    fn add_term(&mut self, w: Word, c: QRational) {
        let slot = self.0.entry(w.clone()).or_insert_with(QRational::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.0.remove(&w);
        }
    }

    fn add(mut self, o: Free, sign: i64) -> Free {
        for (w, c) in o.0 {
            let c = if sign < 0 { -&c } else { c };
            self.add_term(w, c);
        }
        self
    }

    fn mul(&self, o: &Free) -> Free {
        let mut out = Free(BTreeMap::new());
        for (w1, c1) in &self.0 {
            for (w2, c2) in &o.0 {
                let mut w = w1.clone();
                for &(v, k) in w2 {
                    match w.last_mut() {
                        Some(last) if last.0 == v => {
                            last.1 += k;
                            if last.1 == 0 {
                                w.pop();
                            }
                        }
                        _ => w.push((v, k)),
                    }
                }
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    fn as_scalar(&self) -> Option<QRational> {
        match self.0.len() {
            0 => Some(QRational::zero()),
            1 => self.0.get(&Vec::new()).cloned(),
            _ => None,
        }
    }
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a [String],
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in \"{}\"", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Free> {
        let mut acc = if self.eat('-') {
            Free::scalar(QRational::zero()).add(self.term()?, -1)
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?, 1);
            } else if self.eat('-') {
                acc = acc.add(self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Free> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let d = d
                    .as_scalar()
                    .ok_or_else(|| self.err("division by a non-scalar"))?;
                let inv = d.inv().map_err(|_| self.err("division by zero"))?;
                acc = acc.mul(&Free::scalar(inv));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Free> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Free::scalar(QRational::zero()).add(inner, -1));
        }
        self.power()
    }

    fn int_exponent(&mut self) -> Result<i32> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let value = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                i32::try_from(n).map_err(|_| self.err("exponent too large"))?
            }
            _ => return Err(self.err("expected an integer exponent")),
        };
        if paren && !self.eat(')') {
            return Err(self.err("missing ')'"));
        }
        Ok(if neg { -value } else { value })
    }

    fn power(&mut self) -> Result<Free> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let k = self.int_exponent()?;
        if let Some(s) = base.as_scalar() {
            return Ok(Free::scalar(
                scalar_pow(&s, k).map_err(|_| self.err("zero to a negative power"))?,
            ));
        }
        if base.0.len() == 1 {
            let (w, c) = base.0.iter().next().unwrap();
            if w.len() == 1 && c.is_one() {
                let mut m = BTreeMap::new();
                if k != 0 {
                    m.insert(vec![(w[0].0, w[0].1 * k)], QRational::one());
                } else {
                    m.insert(Vec::new(), QRational::one());
                }
                return Ok(Free(m));
            }
        }
        if k < 0 {
            return Err(self.err("negative power of a compound expression"));
        }
        let mut acc = Free::scalar(QRational::one());
        for _ in 0..k {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Free> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Free::scalar(Rational::from_integer(n).into()))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                if id == "q" {
                    return Ok(Free::scalar(QRational::q_pow(1)));
                }
                match self.names.iter().position(|n| *n == id) {
                    Some(i) => Ok(Free::var(i)),
                    None => Err(self.err(&format!("unknown variable '{id}'"))),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("unexpected end of input")),
        }
    }
}

fn scalar_pow(s: &QRational, k: i32) -> std::result::Result<QRational, crate::error::ScalarError> {
    let base = if k < 0 { s.inv()? } else { s.clone() };
    let mut acc = QRational::one();
    for _ in 0..k.unsigned_abs() {
        acc = &acc * &base;
    }
    Ok(acc)
}

fn parse_free(s: &str, names: &[String]) -> Result<Free> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        names,
        src: s,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parses an element of `Q(q)`, e.g. `(1 - q^2)/2`.
pub fn parse_scalar(s: &str) -> Result<QRational> {
    parse_free(s, &[])?
        .as_scalar()
        .ok_or_else(|| Error::Parse(format!("\"{s}\" is not a scalar")))
}

/// Parses a commutative polynomial with rational coefficients.
pub fn parse_comm_poly(s: &str, names: &[String]) -> Result<CommPoly> {
    let free = parse_free(s, names)?;
    let mut out = CommPoly::zero(names.len());
    for (w, c) in free.0 {
        let coeff = c
            .to_laurent()
            .and_then(|l| {
                if l.is_zero() {
                    Some(Rational::from_integer(0.into()))
                } else {
                    l.as_monomial().filter(|m| m.1 == 0).map(|m| m.0)
                }
            })
            .ok_or_else(|| Error::Parse(format!("coefficient {c} in \"{s}\" is not rational")))?;
        let mut e = vec![0i32; names.len()];
        for (v, k) in w {
            e[v] += k;
        }
        if e.iter().any(|&k| k < 0) {
            return Err(Error::Parse(format!(
                "negative exponent in polynomial \"{s}\""
            )));
        }
        out.add_term(Exponent(e), coeff);
    }
    Ok(out)
}

/// Parses an element written in normal order (`X1^a1*...*Xn^an`).
pub fn parse_ordered(s: &str, names: &[String], allow_negative: bool) -> Result<Terms<QRational>> {
    let free = parse_free(s, names)?;
    let mut out = Terms::zero(names.len());
    for (w, c) in free.0 {
        let mut e = vec![0i32; names.len()];
        let mut last: Option<usize> = None;
        for (v, k) in w {
            if last.is_some_and(|l| l >= v) {
                return Err(Error::Parse(format!(
                    "\"{s}\" is not written in normal order"
                )));
            }
            if k < 0 && !allow_negative {
                return Err(Error::Parse(format!("negative exponent in \"{s}\"")));
            }
            last = Some(v);
            e[v] = k;
        }
        out.add_term(Exponent(e), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{ratio, QLaurent};
    use crate::terms::default_names;

    #[test]
    fn scalar_forms() {
        let s = parse_scalar("(1 - q^2)/2").unwrap();
        assert_eq!(
            s.to_laurent().unwrap(),
            QLaurent::from_terms([(0, ratio(1, 2)), (2, ratio(-1, 2))])
        );
        assert_eq!(parse_scalar("q^-1").unwrap(), QRational::q_pow(-1));
        assert_eq!(parse_scalar("2 - q").unwrap().to_string(), "2 - q");
        let k = parse_scalar("1/(1 - q)").unwrap();
        assert!(!k.is_in_l());
        assert_eq!(parse_scalar(&k.to_string()).unwrap(), k);
    }

    #[test]
    fn polynomial_round_trip() {
        let names = default_names("x", 3);
        let p = parse_comm_poly("-2*x2*x3 + x1^2/3", &names).unwrap();
        let text = p.display_with(&names).to_string();
        assert_eq!(parse_comm_poly(&text, &names).unwrap(), p);
        assert!(parse_comm_poly("x0", &names).is_err());
        assert!(parse_comm_poly("x1^-1", &names).is_err());
    }

    #[test]
    fn ordered_elements_demand_normal_order() {
        let names = default_names("X", 3);
        let e = parse_ordered("(1/2 - 1/2*q^2)*X2^2 + X1*X3", &names, false).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(
            parse_ordered(&e.display_with(&names).to_string(), &names, false).unwrap(),
            e
        );
        assert!(parse_ordered("X3*X1", &names, false).is_err());
        let y = default_names("Y", 3);
        assert!(parse_ordered("Y2^2*Y3^-1", &y, true).is_ok());
        assert!(parse_ordered("Y2^2*Y3^-1", &y, false).is_err());
    }
}
