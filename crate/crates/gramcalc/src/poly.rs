//! Sparse Laurent polynomials over the rationals in the fixed alphabet
//! `{a, x, y, u, v}`, plus the quadratic ring extension by `rho` with
//! `rho^2 = y^2 - x^2`.
//!
//! Coefficients are exact [`Rational`]s throughout; zero coefficients are
//! never stored. Terms are kept in graded-lexicographic order, which fixes
//! the display format and makes equality diffs deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational coefficient (arbitrary precision, always reduced,
/// denominator positive).
pub type Rational = BigRational;

/// Integer as a [`Rational`].
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Fraction `n/d` as a [`Rational`].
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// One of the five admissible variables.
///
/// The alphabet is closed: parsing any other symbol is rejected.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Variable {
    A,
    X,
    Y,
    U,
    V,
}

impl Variable {
    /// All variables in canonical order.
    pub const ALL: [Variable; 5] = [Variable::A, Variable::X, Variable::Y, Variable::U, Variable::V];

    fn index(self) -> usize {
        match self {
            Variable::A => 0,
            Variable::X => 1,
            Variable::Y => 2,
            Variable::U => 3,
            Variable::V => 4,
        }
    }

    /// The printed symbol.
    pub fn symbol(self) -> char {
        match self {
            Variable::A => 'a',
            Variable::X => 'x',
            Variable::Y => 'y',
            Variable::U => 'u',
            Variable::V => 'v',
        }
    }

    /// Inverse of [`Variable::symbol`]; unknown symbols are an error.
    pub fn from_symbol(c: char) -> Result<Variable> {
        match c {
            'a' => Ok(Variable::A),
            'x' => Ok(Variable::X),
            'y' => Ok(Variable::Y),
            'u' => Ok(Variable::U),
            'v' => Ok(Variable::V),
            _ => Err(Error::UnknownVariable(c.to_string())),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Variable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Variable> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Variable::from_symbol(c),
            _ => Err(Error::UnknownVariable(s.to_string())),
        }
    }
}

/// Exponent vector over the alphabet. Negative exponents are allowed;
/// zero exponents are implicit (never rendered, never significant).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: [i32; 5],
}

impl Monomial {
    /// The empty product.
    pub fn one() -> Monomial {
        Monomial { exps: [0; 5] }
    }

    /// A single variable.
    pub fn var(v: Variable) -> Monomial {
        Monomial::one().with_exp(v, 1)
    }

    /// The exponent of `v`.
    pub fn exp(&self, v: Variable) -> i32 {
        self.exps[v.index()]
    }

    /// Copy with the exponent of `v` replaced.
    pub fn with_exp(mut self, v: Variable, e: i32) -> Monomial {
        self.exps[v.index()] = e;
        self
    }

    /// Sum of all exponents.
    pub fn total_degree(&self) -> i64 {
        self.exps.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Product (exponent-wise sum).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e += o;
        }
        Monomial { exps }
    }

    /// Quotient (always defined for Laurent monomials).
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e -= o;
        }
        Monomial { exps }
    }

    /// `k`-th power, `k` of either sign.
    pub fn pow(&self, k: i32) -> Monomial {
        let mut exps = self.exps;
        for e in exps.iter_mut() {
            *e *= k;
        }
        Monomial { exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for v in Variable::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

/// Sparse Laurent polynomial: a map from monomials to nonzero rational
/// coefficients, kept in graded-lex order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> LaurentPoly {
        LaurentPoly::monomial(Monomial::one(), c)
    }

    pub fn var(v: Variable) -> LaurentPoly {
        LaurentPoly::monomial(Monomial::var(v), Rational::one())
    }

    /// Single term `c * m`; the zero coefficient yields the zero polynomial.
    pub fn monomial(m: Monomial, c: Rational) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        p.insert_term(m, c);
        p
    }

    /// Build from terms, combining duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (m, c) in iter {
            p.insert_term(m, c);
        }
        p
    }

    fn insert_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num_terms() == 1 && self.coefficient_of(&Monomial::one()).is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of `m`, zero when absent.
    pub fn coefficient_of(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some((m, c))` when the polynomial is exactly one term.
    pub fn as_monomial(&self) -> Option<(Monomial, Rational)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((*m, c.clone()))
        } else {
            None
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, q)| (*m, q * c)).collect(),
        }
    }

    /// Multiply by the single term `c * m`.
    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(t, q)| (t.mul(m), q * c)).collect(),
        }
    }

    /// `k`-th power. Negative `k` is permitted only for a single-term
    /// polynomial, whose inverse is again a monomial.
    pub fn pow(&self, k: i32) -> Result<LaurentPoly> {
        if k == 0 {
            return Ok(LaurentPoly::one());
        }
        if k < 0 {
            let (m, c) = self.as_monomial().ok_or_else(|| {
                Error::NotInvertible(format!("negative power of a non-monomial: {}", self))
            })?;
            let inv = LaurentPoly::monomial(m.pow(-1), c.recip());
            return inv.pow(-k);
        }
        let mut acc = LaurentPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Parse the display format: terms joined by `+`/`-`, factors joined
    /// by `*`, exponents after `^` (possibly negative), rational
    /// coefficients written as `n` or `n/d`.
    pub fn parse(input: &str) -> Result<LaurentPoly> {
        parse_poly(input)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.insert_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.insert_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in rhs.terms.iter() {
                out.insert_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// The default modulus of the quadratic extension: `y^2 - x^2`.
pub fn rho_modulus() -> LaurentPoly {
    let y2 = LaurentPoly::monomial(Monomial::one().with_exp(Variable::Y, 2), Rational::one());
    let x2 = LaurentPoly::monomial(Monomial::one().with_exp(Variable::X, 2), Rational::one());
    &y2 - &x2
}

/// Element `p + q*rho` of the quadratic extension, `rho^2 = y^2 - x^2`.
///
/// The modulus `y^2 - x^2` is not a square in the polynomial ring, so the
/// extension is an integral domain and cancellation by nonzero elements is
/// valid; the identity suite exploits this to check division-shaped
/// formulas cross-multiplied.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RhoElement {
    p: LaurentPoly,
    q: LaurentPoly,
}

impl RhoElement {
    pub fn new(p: LaurentPoly, q: LaurentPoly) -> RhoElement {
        RhoElement { p, q }
    }

    /// Embed a plain polynomial (zero rho-part).
    pub fn from_poly(p: LaurentPoly) -> RhoElement {
        RhoElement::new(p, LaurentPoly::zero())
    }

    pub fn zero() -> RhoElement {
        RhoElement::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> RhoElement {
        RhoElement::from_poly(LaurentPoly::one())
    }

    /// The element `rho` itself.
    pub fn rho() -> RhoElement {
        RhoElement::new(LaurentPoly::zero(), LaurentPoly::one())
    }

    pub fn p(&self) -> &LaurentPoly {
        &self.p
    }

    pub fn q(&self) -> &LaurentPoly {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Product with an explicit modulus for `rho^2`.
    pub fn mul_mod(&self, other: &RhoElement, rho_sq: &LaurentPoly) -> RhoElement {
        let p = &(&self.p * &other.p) + &(&(&self.q * &other.q) * rho_sq);
        let q = &(&self.p * &other.q) + &(&self.q * &other.p);
        RhoElement::new(p, q)
    }

    pub fn scale_poly(&self, f: &LaurentPoly) -> RhoElement {
        RhoElement::new(&self.p * f, &self.q * f)
    }

    pub fn scale(&self, c: &Rational) -> RhoElement {
        RhoElement::new(self.p.scale(c), self.q.scale(c))
    }
}

impl Add for &RhoElement {
    type Output = RhoElement;
    fn add(self, rhs: &RhoElement) -> RhoElement {
        RhoElement::new(&self.p + &rhs.p, &self.q + &rhs.q)
    }
}

impl Sub for &RhoElement {
    type Output = RhoElement;
    fn sub(self, rhs: &RhoElement) -> RhoElement {
        RhoElement::new(&self.p - &rhs.p, &self.q - &rhs.q)
    }
}

impl Mul for &RhoElement {
    type Output = RhoElement;
    fn mul(self, rhs: &RhoElement) -> RhoElement {
        self.mul_mod(rhs, &rho_modulus())
    }
}

impl Neg for &RhoElement {
    type Output = RhoElement;
    fn neg(self) -> RhoElement {
        RhoElement::new(-&self.p, -&self.q)
    }
}

impl fmt::Display for RhoElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        if self.p.is_zero() {
            return write!(f, "({})*rho", self.q);
        }
        write!(f, "({}) + ({})*rho", self.p, self.q)
    }
}

/// Product in the extension with the default modulus `y^2 - x^2`.
pub fn rho_mul(e1: &RhoElement, e2: &RhoElement) -> RhoElement {
    e1 * e2
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Int(BigInt),
    Var(Variable),
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '+' => {
                chars.next();
                tokens.push(Token::Plus);
            }
            '-' => {
                chars.next();
                tokens.push(Token::Minus);
            }
            '*' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '^' => {
                chars.next();
                tokens.push(Token::Caret);
            }
            '/' => {
                chars.next();
                tokens.push(Token::Slash);
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n = digits
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad integer {digits:?}: {e}")))?;
                tokens.push(Token::Int(n));
            }
            _ if c.is_ascii_alphabetic() => {
                chars.next();
                tokens.push(Token::Var(Variable::from_symbol(c)?));
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_int(&mut self, what: &str) -> Result<BigInt> {
        match self.next() {
            Some(Token::Int(n)) => Ok(n),
            other => Err(Error::Parse(format!("expected {what}, found {other:?}"))),
        }
    }

    /// integer with optional leading sign
    fn signed_int(&mut self, what: &str) -> Result<BigInt> {
        match self.peek() {
            Some(Token::Minus) => {
                self.next();
                Ok(-self.expect_int(what)?)
            }
            Some(Token::Plus) => {
                self.next();
                self.expect_int(what)
            }
            _ => self.expect_int(what),
        }
    }

    /// factor := int [ '/' int ] | var [ '^' signed-int ]
    fn factor(&mut self) -> Result<(Rational, Monomial)> {
        match self.next() {
            Some(Token::Int(n)) => {
                if matches!(self.peek(), Some(Token::Slash)) {
                    self.next();
                    let d = self.expect_int("denominator")?;
                    if d.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    Ok((Rational::new(n, d), Monomial::one()))
                } else {
                    Ok((Rational::from_integer(n), Monomial::one()))
                }
            }
            Some(Token::Var(v)) => {
                if matches!(self.peek(), Some(Token::Caret)) {
                    self.next();
                    let e = self.signed_int("exponent")?;
                    let e = i32::try_from(&e)
                        .map_err(|_| Error::Parse(format!("exponent {e} out of range")))?;
                    Ok((Rational::one(), Monomial::one().with_exp(v, e)))
                } else {
                    Ok((Rational::one(), Monomial::var(v)))
                }
            }
            other => Err(Error::Parse(format!("expected factor, found {other:?}"))),
        }
    }

    /// term := factor ( '*' factor )*
    fn term(&mut self) -> Result<(Rational, Monomial)> {
        let (mut coeff, first) = self.factor()?;
        let mut mono = first;
        while matches!(self.peek(), Some(Token::Star)) {
            self.next();
            let (c, m) = self.factor()?;
            coeff *= c;
            mono = mono.mul(&m);
        }
        Ok((coeff, mono))
    }
}

fn parse_poly(input: &str) -> Result<LaurentPoly> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let mut out = LaurentPoly::zero();
    let mut sign = Rational::one();
    if matches!(p.peek(), Some(Token::Minus)) {
        p.next();
        sign = -sign;
    } else if matches!(p.peek(), Some(Token::Plus)) {
        p.next();
    }
    loop {
        let (c, m) = p.term()?;
        out.insert_term(m, c * &sign);
        match p.next() {
            None => break,
            Some(Token::Plus) => sign = Rational::one(),
            Some(Token::Minus) => sign = -rat(1),
            other => return Err(Error::Parse(format!("expected + or -, found {other:?}"))),
        }
    }
    Ok(out)
}
