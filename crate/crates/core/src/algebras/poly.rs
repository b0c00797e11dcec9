use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{QkError, Result};
use crate::linalg::Field;

pub type Exponent = Vec<u32>;

/// Polynomial in a fixed number of variables over `Q` or `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl Poly {
    pub fn zero(field: Field, nvars: usize) -> Self {
        Poly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, nvars: usize, c: BigRational) -> Self {
        Self::monomial(field, c, vec![0; nvars])
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::constant(field, nvars, BigRational::one())
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, BigRational::one(), e)
    }

    pub fn monomial(field: Field, c: BigRational, exponent: Exponent) -> Self {
        let mut p = Self::zero(field, exponent.len());
        p.add_term(exponent, c);
        p
    }

    /// Univariate from coefficients, constant term first.
    pub fn from_coeffs(field: Field, coeffs: &[BigRational]) -> Self {
        let mut p = Self::zero(field, 1);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let f = self.field;
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry = f.add(entry, &c);
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coefficient(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&self.field.neg(&BigRational::one()))
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut out = Self::zero(self.field, self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), self.field.mul(x, c));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Self::zero(self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Self::one(self.field, self.nvars), |acc, _| acc.mul(self))
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Self::zero(self.field, self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, self.field.mul(c, &self.field.from_i64(e[i] as i64)));
        }
        out
    }

    /// Univariate degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0]).max()
    }

    /// Univariate coefficients, constant term first.
    pub fn coeffs(&self) -> Vec<BigRational> {
        let n = self.degree().map_or(0, |d| d as usize + 1);
        (0..n).map(|k| self.coefficient(&[k as u32])).collect()
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.degree()
            .map_or_else(BigRational::zero, |d| self.coefficient(&[d]))
    }

    /// Univariate division with remainder.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let f = self.field;
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = f.inv(&d.leading_coefficient()).expect("nonzero leading coefficient");
        let mut q = Self::zero(f, 1);
        let mut r = self.clone();
        while let Some(rd) = r.degree().filter(|&rd| rd >= dd) {
            let c = f.mul(&r.leading_coefficient(), &lc_inv);
            let t = Self::monomial(f, c, vec![rd - dd]);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        (q, r)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.field.inv(&self.leading_coefficient()).expect("nonzero"))
    }

    /// Monic univariate gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn display_with(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // highest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let (neg, mag) = match self.field {
                Field::Rationals => (c.is_negative(), c.abs()),
                Field::Prime(_) => (false, c.clone()),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { vars[i].clone() } else { format!("{}^{x}", vars[i]) })
                .collect();
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = if self.nvars == 1 {
            vec!["x".into()]
        } else {
            (1..=self.nvars).map(|i| format!("x{i}")).collect()
        };
        write!(f, "{}", self.display_with(&vars))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
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
            out.push(Token::Num(text.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(QkError::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    field: Field,
    vars: &'a [String],
    source: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> QkError {
        QkError::Parse(format!("{msg} in `{}`", self.source))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() || !d.is_constant() {
                    return Err(self.err("division by a nonconstant or zero"));
                }
                let inv = self
                    .field
                    .inv(&d.coefficient(&vec![0; self.vars.len()]))
                    .ok_or_else(|| self.err("division by zero"))?;
                acc = acc.scale(&inv);
            } else if matches!(self.peek(), Some(Token::Ident(_)) | Some(Token::Op('('))) {
                // juxtaposition, as in `3x`
                acc = acc.mul(&self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    if e > 64 {
                        return Err(self.err("exponent too large"));
                    }
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let n = self.vars.len();
        match self.peek().cloned() {
            Some(Token::Num(x)) => {
                self.pos += 1;
                let c = self.field.convert(&BigRational::from_integer(x))?;
                Ok(Poly::constant(self.field, n, c))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| self.err(&format!("unknown variable `{name}`")))?;
                Ok(Poly::var(self.field, n, i))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let p = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing `)`"));
                }
                Ok(p)
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

/// Parses `+ - * / ^` and parentheses over the given variables; `/` only
/// by nonzero constants.
pub fn parse_poly(field: Field, vars: &[String], s: &str) -> Result<Poly> {
    let mut p = Parser {
        tokens: tokenize(s)?,
        pos: 0,
        field,
        vars,
        source: s,
    };
    if p.tokens.is_empty() {
        return Err(QkError::Parse("empty polynomial".into()));
    }
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_print() {
        let q = Field::Rationals;
        let v = vars(&["x", "y"]);
        let p = parse_poly(q, &v, "(x + y)^2 - 2*x*y - 1/2").unwrap();
        assert_eq!(p.display_with(&v), "x^2 + y^2 - 1/2");
        assert_eq!(parse_poly(q, &v, "3x y").unwrap().display_with(&v), "3*x*y");
        assert!(parse_poly(q, &v, "x / y").is_err());
        assert!(parse_poly(q, &v, "z").is_err());
        assert!(parse_poly(q, &v, "x +").is_err());
    }

    #[test]
    fn prime_field_coefficients() {
        let f3 = Field::prime(3).unwrap();
        let v = vars(&["x"]);
        let p = parse_poly(f3, &v, "x^3 + 3*x").unwrap();
        assert_eq!(p.derivative(0), Poly::zero(f3, 1));
        assert!(parse_poly(f3, &v, "1/3").is_err());
    }

    #[test]
    fn univariate_gcd() {
        let q = Field::Rationals;
        let v = vars(&["x"]);
        let f = parse_poly(q, &v, "x^3 - x").unwrap();
        let g = parse_poly(q, &v, "2*x^2 - 2").unwrap();
        assert_eq!(f.gcd(&g).display_with(&v), "x^2 - 1");
        let (quo, r) = f.div_rem(&parse_poly(q, &v, "x - 1").unwrap());
        assert!(r.is_zero());
        assert_eq!(quo.display_with(&v), "x^2 + x");
    }
}
