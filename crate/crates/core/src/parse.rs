//! Text grammars for operators and model distributions.
//!
//! Operators: `x` or `y`, `D = ∂`, `T = v∂`, `i`, rational and decimal
//! literals, `+ - * /`, integer powers `^k` or `^(-k)`, parentheses. `*` is
//! composition; `/` divides by a monomial `c v^k`.
//!
//! Distributions: sums of products of
//! - polynomials in `y`, `conj(y)` (with `conj(...)` of such polynomials),
//! - `polar(m,n)` = `ρ^m e^{inθ}` and `gauss(y)` = `e^{-|y|²}`,
//! - `abs(y)^(e)` for a Gaussian rational `e`, so `β = e/2`,
//! - `L` or `L^l` with `L = -log|y|²`,
//! - `exp(φ - conj(φ))` with `φ` a polynomial in `1/y` without constant term.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::blowup::FourierTaylor;
use crate::error::{Error, Result};
use crate::exponential::ExponentialPart;
use crate::laurent::Var;
use crate::mellin::{ModelDistribution, ModelTerm};
use crate::operator::DiffOp;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let mantissa: String = chars[start..i].iter().collect();
            let mut value = decimal(&mantissa, start)?;
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '-' || chars[j] == '+') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    let es = j;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let exp: i32 = chars[es..j].iter().collect::<String>().parse().map_err(|_| Error::Parse {
                        pos: es,
                        expected: "exponent".into(),
                    })?;
                    let neg = chars[i + 1] == '-';
                    let p = BigRational::from_integer(num_traits::pow(BigInt::from(10), exp as usize));
                    value = if neg { value / p } else { value * p };
                    i = j;
                }
            }
            out.push((start, Tok::Num(value)));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^(),".contains(ch) {
            out.push((i, Tok::Sym(ch)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                expected: format!("operator, number or name, found `{ch}`"),
            });
        }
    }
    Ok(out)
}

fn decimal(s: &str, pos: usize) -> Result<BigRational> {
    let bad = || Error::Parse {
        pos,
        expected: format!("number, found `{s}`"),
    };
    let (ip, fp) = s.split_once('.').unwrap_or((s, ""));
    if fp.contains('.') {
        return Err(bad());
    }
    let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    Ok(BigRational::new(n, num_traits::pow(BigInt::from(10), fp.len())))
}

struct Cursor {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Cursor {
    fn new(text: &str) -> Result<Self> {
        Ok(Self {
            toks: tokenize(text)?,
            at: 0,
            end: text.chars().count(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            expected: expected.to_string(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("`{c}`"))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at < self.toks.len() {
            self.err("end of input")
        } else {
            Ok(())
        }
    }

    /// `k`, `-k`, `(k)` or `(-k)` after `^`.
    /// Consumes unary signs after a binary one; returns the resulting sign.
    fn signs(&mut self, mut neg: bool) -> bool {
        loop {
            if self.eat('-') {
                neg = !neg;
            } else if !self.eat('+') {
                return neg;
            }
        }
    }

    fn int_exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let v = match self.peek() {
            Some(Tok::Num(r)) if r.is_integer() => {
                let v = r.to_integer().to_i64();
                self.at += 1;
                v
            }
            _ => None,
        };
        let Some(v) = v else {
            return self.err("integer exponent");
        };
        if paren {
            self.expect(')')?;
        }
        Ok(if neg { -v } else { v })
    }
}

fn unsupported_name(name: &str) -> Error {
    Error::UnsupportedField(format!("`{name}` is not a Gaussian rational or a known symbol"))
}

// ---------------------------------------------------------------- operators

struct OpParser {
    cur: Cursor,
    var: Var,
}

impl OpParser {
    fn expr(&mut self) -> Result<DiffOp> {
        let mut acc = if self.cur.eat('-') {
            self.term()?.scale(&-ExactScalar::one())
        } else {
            self.cur.eat('+');
            self.term()?
        };
        loop {
            let neg = if self.cur.eat('+') {
                false
            } else if self.cur.eat('-') {
                true
            } else {
                return Ok(acc);
            };
            let t = if self.cur.signs(neg) { self.term()?.scale(&-ExactScalar::one()) } else { self.term()? };
            acc = acc.add(&t);
        }
    }

    fn term(&mut self) -> Result<DiffOp> {
        let mut acc = self.power()?;
        loop {
            if self.cur.eat('*') {
                acc = acc.compose(&self.power()?);
            } else if self.cur.eat('/') {
                let pos = self.cur.pos();
                let d = self.power()?;
                acc = acc.compose(&self.inverse(&d, pos)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn inverse(&self, d: &DiffOp, pos: usize) -> Result<DiffOp> {
        let d = d.to_theta();
        let monomial = (d.order() == 0)
            .then(|| {
                let mut it = d.coeffs()[0].terms();
                let first = it.next();
                if it.next().is_some() {
                    None
                } else {
                    first.map(|(k, c)| (k, c.clone()))
                }
            })
            .flatten();
        match monomial {
            Some((k, c)) => Ok(DiffOp::multiplication(self.var, -k, c.inv())),
            None => Err(Error::Parse {
                pos,
                expected: "nonzero monomial divisor".into(),
            }),
        }
    }

    fn power(&mut self) -> Result<DiffOp> {
        let base = self.atom()?;
        if !self.cur.eat('^') {
            return Ok(base);
        }
        let pos = self.cur.pos();
        let e = self.cur.int_exponent()?;
        if e >= 0 {
            Ok(base.pow(e as u32))
        } else {
            Ok(self.inverse(&base, pos)?.pow((-e) as u32))
        }
    }

    fn atom(&mut self) -> Result<DiffOp> {
        let pos = self.cur.pos();
        match self.cur.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.cur.at += 1;
                Ok(DiffOp::constant(self.var, ExactScalar::real(r)))
            }
            Some(Tok::Ident(name)) => {
                self.cur.at += 1;
                match name.as_str() {
                    "i" => Ok(DiffOp::constant(self.var, ExactScalar::i())),
                    "x" | "y" => Ok(DiffOp::multiplication(self.var, 1, ExactScalar::one())),
                    "D" => Ok(DiffOp::derivation(self.var)),
                    "T" => Ok(DiffOp::theta(self.var)),
                    _ => Err(unsupported_name(&name)),
                }
            }
            Some(Tok::Sym('(')) => {
                self.cur.at += 1;
                let e = self.expr()?;
                self.cur.expect(')')?;
                Ok(e)
            }
            _ => Err(Error::Parse {
                pos,
                expected: "number, `i`, `x`, `y`, `D`, `T` or `(`".into(),
            }),
        }
    }
}

/// Parses an operator; the result is in θ-form.
pub fn parse_operator(text: &str) -> Result<DiffOp> {
    let cur = Cursor::new(text)?;
    let has = |v: &str| cur.toks.iter().any(|t| t.1 == Tok::Ident(v.into()));
    let var = match (has("x"), has("y")) {
        (true, true) => {
            let pos = cur.toks.iter().find(|t| t.1 == Tok::Ident("y".into())).map_or(0, |t| t.0);
            return Err(Error::Parse {
                pos,
                expected: "a single variable (`x` or `y`)".into(),
            });
        }
        (_, true) => Var::Y,
        _ => Var::X,
    };
    let mut p = OpParser { cur, var };
    if p.cur.toks.is_empty() {
        return p.cur.err("operator");
    }
    let op = p.expr()?;
    p.cur.finish()?;
    Ok(op.to_theta())
}

/// Printed form accepted by [`parse_operator`].
pub fn print_operator(op: &DiffOp) -> String {
    op.to_theta().to_string()
}

// ------------------------------------------------------------ distributions

/// `Σ c ρ^m e^{inθ}`; `y^a ȳ^b` sits at `(a+b, a-b)`.
#[derive(Clone, Debug, Default, PartialEq)]
struct Bi(BTreeMap<(i64, i64), ExactScalar>);

impl Bi {
    fn constant(c: ExactScalar) -> Self {
        Self::monomial(0, 0, c)
    }

    fn monomial(m: i64, n: i64, c: ExactScalar) -> Self {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert((m, n), c);
        }
        Self(map)
    }

    fn y_power(a: i64, b: i64, c: ExactScalar) -> Self {
        Self::monomial(a + b, a - b, c)
    }

    fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            let e = m.entry(*k).or_insert_with(ExactScalar::zero);
            *e += c;
            if e.is_zero() {
                m.remove(k);
            }
        }
        Self(m)
    }

    fn neg(&self) -> Self {
        Self(self.0.iter().map(|(k, c)| (*k, -c.clone())).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        let mut acc = Self::default();
        for (&(a, b), c) in &self.0 {
            for (&(a2, b2), c2) in &o.0 {
                acc = acc.add(&Self::monomial(a + a2, b + b2, c * c2));
            }
        }
        acc
    }

    fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(ExactScalar::one()), |acc, _| acc.mul(self))
    }

    fn conj(&self) -> Self {
        Self(self.0.iter().map(|(&(m, n), c)| ((m, -n), c.conj())).collect())
    }

    fn as_monomial(&self) -> Option<(i64, i64, ExactScalar)> {
        let mut it = self.0.iter();
        let (k, c) = it.next()?;
        it.next().is_none().then(|| (k.0, k.1, c.clone()))
    }

    fn as_constant(&self) -> Option<ExactScalar> {
        if self.0.is_empty() {
            return Some(ExactScalar::zero());
        }
        self.as_monomial().filter(|m| m.0 == 0 && m.1 == 0).map(|m| m.2)
    }
}

/// A product of factors, before it becomes a `ModelTerm`.
#[derive(Clone, Debug)]
struct Product {
    g: Bi,
    gauss: bool,
    phi: ExponentialPart,
    beta: ExactScalar,
    l: u32,
}

impl Product {
    fn scalar(b: Bi) -> Self {
        Self {
            g: b,
            gauss: false,
            phi: ExponentialPart::zero(),
            beta: ExactScalar::zero(),
            l: 0,
        }
    }

    fn is_plain(&self) -> bool {
        !self.gauss && self.phi.is_zero() && self.beta.is_zero() && self.l == 0
    }

    fn mul(mut self, o: Product) -> Product {
        self.g = self.g.mul(&o.g);
        self.gauss |= o.gauss;
        self.phi = self.phi.add(&o.phi);
        self.beta += &o.beta;
        self.l += o.l;
        self
    }

    fn into_term(self) -> ModelTerm {
        // a negative radial degree moves into β
        let min_deg = self.g.0.keys().map(|k| k.0).min().unwrap_or(0).min(0);
        let mut coeffs: BTreeMap<(u32, i32), Complex64> = BTreeMap::new();
        for (&(m, n), c) in &self.g.0 {
            *coeffs.entry(((m - min_deg) as u32, n as i32)).or_default() += c.to_c64();
        }
        let beta = &self.beta + &ExactScalar::from_frac(min_deg, 2);
        ModelTerm {
            g: FourierTaylor::new(coeffs),
            gauss: self.gauss,
            phi: self.phi,
            beta,
            l: self.l,
        }
    }
}

struct DistParser {
    cur: Cursor,
}

impl DistParser {
    fn sum(&mut self) -> Result<Vec<Product>> {
        let mut out = Vec::new();
        let mut neg = self.cur.eat('-');
        if !neg {
            self.cur.eat('+');
        }
        loop {
            let mut p = self.product()?;
            if neg {
                p.g = p.g.neg();
            }
            out.push(p);
            if self.cur.eat('+') {
                neg = self.cur.signs(false);
            } else if self.cur.eat('-') {
                neg = self.cur.signs(true);
            } else {
                return Ok(out);
            }
        }
    }

    fn product(&mut self) -> Result<Product> {
        let mut acc = self.power()?;
        loop {
            if self.cur.eat('*') {
                acc = acc.mul(self.power()?);
            } else if self.cur.eat('/') {
                let pos = self.cur.pos();
                let d = self.power()?;
                let inv = match (d.is_plain(), d.g.as_monomial()) {
                    (true, Some((m, n, c))) => Bi::monomial(-m, -n, c.inv()),
                    _ => {
                        return Err(Error::Parse {
                            pos,
                            expected: "monomial divisor in y, conj(y)".into(),
                        })
                    }
                };
                acc = acc.mul(Product::scalar(inv));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Product> {
        let pos = self.cur.pos();
        let base = self.factor()?;
        if !self.cur.eat('^') {
            return Ok(base);
        }
        let e = self.cur.int_exponent()?;
        if base.is_plain() {
            if e >= 0 {
                return Ok(Product::scalar(base.g.pow(e as u32)));
            }
            if let Some((m, n, c)) = base.g.as_monomial() {
                return Ok(Product::scalar(Bi::monomial(m * e, n * e, c.pow((-e) as u32).inv())));
            }
        }
        if e < 0 {
            return Err(Error::Parse {
                pos,
                expected: "nonnegative power".into(),
            });
        }
        let mut acc = Product::scalar(Bi::constant(ExactScalar::one()));
        for _ in 0..e {
            acc = acc.mul(base.clone());
        }
        Ok(acc)
    }

    fn call_arg<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.cur.expect('(')?;
        let v = f(self)?;
        self.cur.expect(')')?;
        Ok(v)
    }

    fn polynomial(&mut self) -> Result<Bi> {
        let pos = self.cur.pos();
        let parts = self.sum()?;
        let mut acc = Bi::default();
        for p in parts {
            if !p.is_plain() {
                return Err(Error::Parse {
                    pos,
                    expected: "polynomial in y, conj(y)".into(),
                });
            }
            acc = acc.add(&p.g);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Product> {
        let pos = self.cur.pos();
        match self.cur.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.cur.at += 1;
                Ok(Product::scalar(Bi::constant(ExactScalar::real(r))))
            }
            Some(Tok::Sym('(')) => {
                self.cur.at += 1;
                let parts = self.sum()?;
                self.cur.expect(')')?;
                if parts.len() == 1 {
                    return Ok(parts.into_iter().next().unwrap());
                }
                if parts.iter().all(Product::is_plain) {
                    let g = parts.iter().fold(Bi::default(), |acc, p| acc.add(&p.g));
                    return Ok(Product::scalar(g));
                }
                Err(Error::Parse {
                    pos,
                    expected: "polynomial in y, conj(y) inside a parenthesised sum".into(),
                })
            }
            Some(Tok::Ident(name)) => {
                self.cur.at += 1;
                self.named(&name, pos)
            }
            _ => self.cur.err("number, name or `(`"),
        }
    }

    fn expect_y(&mut self) -> Result<()> {
        match self.cur.peek() {
            Some(Tok::Ident(n)) if n == "y" => {
                self.cur.at += 1;
                Ok(())
            }
            _ => self.cur.err("`y`"),
        }
    }

    fn named(&mut self, name: &str, pos: usize) -> Result<Product> {
        let one = || Bi::constant(ExactScalar::one());
        match name {
            "i" => Ok(Product::scalar(Bi::constant(ExactScalar::i()))),
            "y" => Ok(Product::scalar(Bi::y_power(1, 0, ExactScalar::one()))),
            "L" => Ok(Product {
                l: 1,
                ..Product::scalar(one())
            }),
            "conj" => {
                let b = self.call_arg(|p| p.polynomial())?;
                Ok(Product::scalar(b.conj()))
            }
            "gauss" => {
                self.call_arg(|p| p.expect_y())?;
                Ok(Product {
                    gauss: true,
                    ..Product::scalar(one())
                })
            }
            "polar" => {
                let (m, n) = self.call_arg(|p| {
                    let m = p.cur.int_exponent()?;
                    p.cur.expect(',')?;
                    let n = p.cur.int_exponent()?;
                    Ok((m, n))
                })?;
                if m < 0 {
                    return Err(Error::Parse {
                        pos,
                        expected: "polar(m,n) with m >= 0".into(),
                    });
                }
                Ok(Product::scalar(Bi::monomial(m, n, ExactScalar::one())))
            }
            "abs" => {
                self.call_arg(|p| p.expect_y())?;
                let e = if self.cur.eat('^') {
                    let epos = self.cur.pos();
                    let b = if self.cur.eat('(') {
                        let b = self.polynomial()?;
                        self.cur.expect(')')?;
                        b
                    } else {
                        let neg = self.cur.eat('-');
                        let f = self.factor()?;
                        if neg {
                            f.g.neg()
                        } else {
                            f.g
                        }
                    };
                    b.as_constant().ok_or(Error::Parse {
                        pos: epos,
                        expected: "constant exponent".into(),
                    })?
                } else {
                    ExactScalar::one()
                };
                Ok(Product {
                    beta: &e * &ExactScalar::from_frac(1, 2),
                    ..Product::scalar(one())
                })
            }
            "exp" => {
                let b = self.call_arg(|p| p.polynomial())?;
                Ok(Product {
                    phi: exponent_part(&b)?,
                    ..Product::scalar(one())
                })
            }
            _ => Err(unsupported_name(name)),
        }
    }
}

/// `φ` from an exponent `φ - conj(φ)`.
fn exponent_part(b: &Bi) -> Result<ExponentialPart> {
    let mut hol = Vec::new();
    let mut anti = Bi::default();
    for (&(m, n), c) in &b.0 {
        if m < 0 && n == m {
            hol.push((m, c.clone()));
        } else if m < 0 && n == -m {
            anti = anti.add(&Bi::monomial(m, n, c.clone()));
        } else {
            return Err(Error::NonModerate(format!(
                "exponent term rho^{m} e^({n}i theta) is not in 1/y or 1/conj(y)"
            )));
        }
    }
    let phi = ExponentialPart::from_terms(hol.clone())?;
    let expected = hol
        .iter()
        .fold(Bi::default(), |acc, (a, c)| acc.add(&Bi::y_power(*a, 0, c.clone())))
        .conj()
        .neg();
    if expected != anti {
        return Err(Error::NonModerate(
            "exponential factor is not of the form exp(phi - conj(phi))".into(),
        ));
    }
    Ok(phi)
}

pub fn parse_distribution(text: &str) -> Result<ModelDistribution> {
    let mut p = DistParser { cur: Cursor::new(text)? };
    if p.cur.toks.is_empty() {
        return p.cur.err("distribution");
    }
    let parts = p.sum()?;
    p.cur.finish()?;
    Ok(ModelDistribution::new(parts.into_iter().map(Product::into_term).collect()))
}

fn print_real(x: f64) -> String {
    let r = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        // floats are dyadic; print as a fraction so parsing is exact
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn print_complex(c: Complex64) -> String {
    match (c.re == 0.0, c.im == 0.0) {
        (_, true) => format!("({})", print_real(c.re)),
        (true, false) => format!("({}*i)", print_real(c.im)),
        _ => format!("({} + {}*i)", print_real(c.re), print_real(c.im)),
    }
}

/// Printed form accepted by [`parse_distribution`].
pub fn print_distribution(v: &ModelDistribution) -> String {
    if v.terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in v.terms.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let g: Vec<String> = t
            .g
            .coefficients
            .iter()
            .map(|(&(m, n), &c)| format!("{}*polar({m},{})", print_complex(c), if n < 0 { format!("({n})") } else { n.to_string() }))
            .collect();
        let _ = write!(out, "({})", if g.is_empty() { "0".to_string() } else { g.join(" + ") });
        if t.gauss {
            out.push_str("*gauss(y)");
        }
        if !t.phi.is_zero() {
            let _ = write!(out, "*exp(({0}) - conj({0}))", t.phi);
        }
        if !t.beta.is_zero() {
            let _ = write!(out, "*abs(y)^({})", &t.beta * &ExactScalar::from_int(2));
        }
        if t.l > 0 {
            let _ = write!(out, "*L^{}", t.l);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Form;

    #[test]
    fn operators() {
        let p = parse_operator("4*x^3*D^2 + 6*x^2*D - 1").unwrap();
        assert_eq!(p.order(), 2);
        assert_eq!(p.form(), Form::Theta);
        let t = parse_operator("T^2").unwrap();
        assert_eq!(t, DiffOp::theta(Var::X).pow(2));
        let q = parse_operator("x*D - 1/2*i").unwrap();
        let expected = DiffOp::theta(Var::X).sub(&DiffOp::constant(Var::X, ExactScalar::from_frac(1, 2) * ExactScalar::i()));
        assert_eq!(q, expected);
        assert_eq!(parse_operator("x^2*D + 1").unwrap().var(), Var::X);
        assert_eq!(parse_operator("y^2*D + 1").unwrap().var(), Var::Y);
        // `/` composes on the right
        assert_eq!(parse_operator("(x^2*D + 1)/x^2").unwrap(), parse_operator("D - 2/x + x^(-2)").unwrap());
    }

    #[test]
    fn operator_errors() {
        assert!(matches!(parse_operator("x*D +"), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse_operator("sqrt(2)*D"), Err(Error::UnsupportedField(_))));
        assert!(matches!(parse_operator("x*y"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("1/(x+1)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn operator_round_trip() {
        for s in ["4*x^3*D^2 + 6*x^2*D - 1", "T^2", "x*D - 1/2*i", "x^2*D + 1", "(3/4+i)*y^-2*T^3 - y"] {
            let p = parse_operator(s).unwrap();
            assert_eq!(parse_operator(&print_operator(&p)).unwrap(), p, "{s}");
        }
    }

    #[test]
    fn distributions() {
        let v = parse_distribution("abs(y)^(0.6)*L").unwrap();
        assert_eq!(v.terms.len(), 1);
        assert_eq!(v.terms[0].beta, ExactScalar::from_frac(3, 10));
        assert_eq!(v.terms[0].l, 1);

        let w = parse_distribution("exp(1/y - conj(1/y))").unwrap();
        assert_eq!(w.terms[0].phi, ExponentialPart::monomial(1, ExactScalar::one()));
        assert_eq!(parse_distribution("exp(1/y - 1/conj(y))").unwrap(), w);

        let g = parse_distribution("(y+conj(y))*L^2").unwrap();
        assert_eq!(g.terms[0].smooth_monomials(), vec![(0, 1), (1, 0)]);
        assert_eq!(g.terms[0].l, 2);

        let u = parse_distribution("gauss(y)*polar(1,-1)*abs(y)^2").unwrap();
        assert!(u.terms[0].gauss);
        assert_eq!(u.terms[0].beta, ExactScalar::one());
    }

    #[test]
    fn distribution_errors() {
        assert!(matches!(parse_distribution("exp(1/y)"), Err(Error::NonModerate(_))));
        assert!(matches!(parse_distribution("exp(y - conj(y))"), Err(Error::NonModerate(_))));
        assert!(matches!(parse_distribution("abs(y)^(y)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_distribution("(1 + L)*y"), Err(Error::Parse { .. })));
        assert!(matches!(parse_distribution("cos(y)"), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn distribution_round_trip() {
        for s in [
            "abs(y)^(0.6)*L",
            "exp(1/y - conj(1/y))*abs(y)^(-1/3+i)*gauss(y)",
            "(y+conj(y))*L^2 - 0.1*y^2*conj(y)",
            "exp((2+i)/y^2 - conj((2+i)/y^2))*polar(0,3)",
        ] {
            let v = parse_distribution(s).unwrap();
            assert_eq!(parse_distribution(&print_distribution(&v)).unwrap(), v, "{s}");
        }
    }

    #[test]
    fn unary_signs_after_binary_ones() {
        assert_eq!(parse_operator("T + -x").unwrap(), parse_operator("T - x").unwrap());
        assert_eq!(parse_operator("T - -x").unwrap(), parse_operator("T + x").unwrap());
        assert_eq!(parse_distribution("1 + -y").unwrap(), parse_distribution("1 - y").unwrap());
    }
}
