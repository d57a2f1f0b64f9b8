//! Exact multivariate polynomials over `Q` or `F_p`.
//!
//! Exponents are dense vectors (one slot per ring variable). Terms live in a
//! `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded lexicographic with
//! the first declared variable most significant; printing walks the map in
//! descending order so output is canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{format_rational, parse_rational, Field, Rational};

/// Ring-size cap; supported inputs use at most four variables.
pub const DEFAULT_VARIABLE_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("illegal substitution: replacement for variable {0} involves that variable")]
    IllegalSubstitution(usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("ring has {got} variables, cap is {cap}")]
    TooManyVariables { got: usize, cap: usize },
    #[error("invalid variable split: {0}")]
    BadSplit(String),
    #[error("coefficient {0} is not defined in {1}")]
    BadCoefficient(String, Field),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Degree counted only in the listed variables.
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&v| self.0[v]).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    pub fn extend(&self, nvars: usize) -> Monomial {
        let mut e = self.0.clone();
        e.resize(nvars, 0);
        Monomial(e)
    }

    pub fn set(&mut self, i: usize, e: u32) {
        self.0[i] = e;
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(field: Field, nvars: usize) -> Self {
        Polynomial { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::constant(field, nvars, Rational::one())
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        Self::term(field, Monomial::var(nvars, i), Rational::one())
    }

    pub fn term(field: Field, mono: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(field, mono.nvars());
        p.add_term(mono, c);
        p
    }

    /// Builds from raw terms; coefficients are reduced into the field.
    pub fn from_terms(
        field: Field,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            let c = field.reduce(&c).expect("coefficient defined in field");
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Adds `c * m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        let field = self.field;
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = field.add(existing, &c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        assert_eq!(self.nvars, other.nvars, "polynomials in different rings");
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.field, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Polynomial { field: self.field, nvars: self.nvars, terms }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(u, a)| (u.mul(m), self.field.mul(a, c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Polynomial { field: self.field, nvars: self.nvars, terms }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.field, self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest total degree among the terms (`None` for zero): the order at the origin.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Lowest degree counted in `vars` only: the order at the coordinate prime they generate.
    pub fn order_in(&self, vars: &[usize]) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_in(vars)).min()
    }

    pub fn homogeneous_component(&self, d: u32) -> Polynomial {
        self.component_in(&(0..self.nvars).collect::<Vec<_>>(), d)
    }

    /// Sum of the terms whose degree in `vars` equals `d`.
    pub fn component_in(&self, vars: &[usize], d: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree_in(vars) == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial { field: self.field, nvars: self.nvars, terms }
    }

    /// The nonzero homogeneous component of least degree.
    pub fn initial_form(&self) -> Result<Polynomial, PolyError> {
        let d = self.order().ok_or(PolyError::ZeroPolynomial)?;
        Ok(self.homogeneous_component(d))
    }

    /// Initial form with respect to the grading by degree in `vars`.
    pub fn initial_form_in(&self, vars: &[usize]) -> Result<Polynomial, PolyError> {
        let d = self.order_in(vars).ok_or(PolyError::ZeroPolynomial)?;
        Ok(self.component_in(vars, d))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn degree_in_var(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponents()[var]).max()
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponents()[var] > 0)
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.contains_var(v)).collect()
    }

    /// The coefficient of `var^k`, as a polynomial free of `var`.
    pub fn coefficient_in(&self, var: usize, k: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[var] == k)
            .map(|(m, c)| {
                let mut m = m.clone();
                m.set(var, 0);
                (m, c.clone())
            })
            .collect();
        Polynomial { field: self.field, nvars: self.nvars, terms }
    }

    /// Hasse derivative: the coefficient of `T^b` in `f(.., var + T, ..)`.
    /// On `x^n` it yields `binomial(n, b) x^(n-b)`.
    pub fn hasse_derivative(&self, var: usize, b: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let n = m.exponents()[var];
            if n < b {
                continue;
            }
            let binom = self.field.binomial(n, b);
            if binom.is_zero() {
                continue;
            }
            let mut m2 = m.clone();
            m2.set(var, n - b);
            out.add_term(m2, self.field.mul(c, &binom));
        }
        out
    }

    /// Replaces `var` by `s` (which may involve any variable).
    pub fn substitute(&self, var: usize, s: &Polynomial) -> Polynomial {
        self.check_compatible(s);
        let Some(deg) = self.degree_in_var(var) else {
            return self.clone();
        };
        // Horner in `var`.
        let mut acc = Polynomial::zero(self.field, self.nvars);
        for k in (0..=deg).rev() {
            acc = &(&acc * s) + &self.coefficient_in(var, k);
        }
        acc
    }

    /// `f` with `var` replaced by `var + s`; `s` must not involve `var`.
    pub fn translate(&self, var: usize, s: &Polynomial) -> Result<Polynomial, PolyError> {
        if s.contains_var(var) {
            return Err(PolyError::IllegalSubstitution(var));
        }
        let shifted = &Polynomial::var(self.field, self.nvars, var) + s;
        Ok(self.substitute(var, &shifted))
    }

    /// `G` with `G^(p^e) = self`, when one exists in characteristic `p`.
    ///
    /// Over `F_p` the Frobenius is the identity on coefficients, so a root
    /// exists iff every exponent is divisible by `p^e`. Returns `None` over `Q`.
    pub fn pth_power_root(&self, e: u32) -> Option<Polynomial> {
        let Field::Prime(p) = self.field else {
            return None;
        };
        let q = (p as u32).checked_pow(e)?;
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            if m.exponents().iter().any(|&x| x % q != 0) {
                return None;
            }
            out.add_term(Monomial::new(m.exponents().iter().map(|x| x / q).collect()), c.clone());
        }
        Some(out)
    }

    /// Leading term under graded lex (the largest monomial).
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Scales so that the graded-lex leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Embeds into a ring with `nvars` variables (new ones appended).
    pub fn extend_vars(&self, nvars: usize) -> Polynomial {
        assert!(nvars >= self.nvars);
        let terms = self.terms.iter().map(|(m, c)| (m.extend(nvars), c.clone())).collect();
        Polynomial { field: self.field, nvars, terms }
    }

    /// Drops trailing variables, which must not occur.
    pub fn restrict_vars(&self, nvars: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m.exponents()[nvars..].iter().all(|&e| e == 0));
                (Monomial::new(m.exponents()[..nvars].to_vec()), c.clone())
            })
            .collect();
        Polynomial { field: self.field, nvars, terms }
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect();
        Polynomial { field: self.field, nvars: self.nvars, terms }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_compatible(rhs);
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        out
    }
}

/// Disjoint base/fiber partition of the ring variables (a projection onto the base).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableSplit {
    base: Vec<usize>,
    fiber: Vec<usize>,
}

impl VariableSplit {
    pub fn new(nvars: usize, fiber: Vec<usize>) -> Result<Self, PolyError> {
        let mut seen = vec![false; nvars];
        for &f in &fiber {
            if f >= nvars {
                return Err(PolyError::BadSplit(format!("variable {f} out of range")));
            }
            if seen[f] {
                return Err(PolyError::BadSplit(format!("variable {f} listed twice")));
            }
            seen[f] = true;
        }
        if fiber.is_empty() {
            return Err(PolyError::BadSplit("no fiber variables".into()));
        }
        let base = (0..nvars).filter(|&i| !seen[i]).collect();
        Ok(VariableSplit { base, fiber })
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn fiber(&self) -> &[usize] {
        &self.fiber
    }

    pub fn is_base(&self, v: usize) -> bool {
        self.base.contains(&v)
    }
}

/// Variable names plus coefficient field: the context for parsing and printing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    names: Vec<String>,
    field: Field,
}

impl Ring {
    pub fn new<S: Into<String>>(names: Vec<S>, field: Field) -> Result<Self, PolyError> {
        Self::with_cap(names, field, DEFAULT_VARIABLE_CAP)
    }

    pub fn with_cap<S: Into<String>>(
        names: Vec<S>,
        field: Field,
        cap: usize,
    ) -> Result<Self, PolyError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > cap {
            return Err(PolyError::TooManyVariables { got: names.len(), cap });
        }
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(PolyError::BadSplit(format!("invalid variable name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(PolyError::BadSplit(format!("duplicate variable name {n:?}")));
            }
        }
        Ok(Ring { names, field })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PolyError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>, PolyError> {
        names.iter().map(|n| self.index_of(n.as_ref())).collect()
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.field, self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.field, self.nvars())
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.field, self.nvars(), i)
    }

    pub fn constant(&self, c: &Rational) -> Result<Polynomial, PolyError> {
        let c = self
            .field
            .reduce(c)
            .ok_or_else(|| PolyError::BadCoefficient(format_rational(c), self.field))?;
        Ok(Polynomial::constant(self.field, self.nvars(), c))
    }

    /// Parses `z^2 - y1^3*y2`-style text. Integer (or `a/b`) coefficients are
    /// reduced into the field.
    pub fn parse(&self, text: &str) -> Result<Polynomial, PolyError> {
        let mut p = Parser { ring: self, src: text.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }

    pub fn format(&self, f: &Polynomial) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in f.terms().rev().enumerate() {
            let (negative, abs) = match self.field {
                Field::Rational if c < &Rational::zero() => (true, -c.clone()),
                _ => (false, c.clone()),
            };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            let coef = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format_rational(&abs)
            };
            match (abs.is_one(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&coef),
                (false, false) => {
                    out.push_str(&coef);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        m.exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.names[i].clone()
                } else {
                    format!("{}^{}", self.names[i], e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: u32 = digits.parse().map_err(|_| self.error("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let mut end = self.pos;
                // `a/b` rational literal
                if self.src.get(self.pos) == Some(&b'/')
                    && self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit)
                {
                    self.pos += 1;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    end = self.pos;
                }
                let lit = std::str::from_utf8(&self.src[start..end]).unwrap();
                let q = parse_rational(lit).ok_or_else(|| self.error("bad number"))?;
                self.ring.constant(&q)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let i = self.ring.index_of(name)?;
                Ok(self.ring.var(i))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use proptest::prelude::*;

    fn ring(names: &[&str], c: u64) -> Ring {
        Ring::new(names.to_vec(), Field::from_characteristic(c).unwrap()).unwrap()
    }

    #[test]
    fn parse_and_format_round_trip() {
        let r = ring(&["z", "y1", "y2"], 0);
        let f = r.parse("z^2 - y1^3*y2 + 3/2*z").unwrap();
        assert_eq!(r.format(&f), "-y1^3*y2 + z^2 + 3/2*z");
        assert_eq!(r.parse(&r.format(&f)).unwrap(), f);
        assert_eq!(r.format(&r.parse("(z+y1)^2 - z^2 - y1^2").unwrap()), "2*z*y1");
        assert!(matches!(r.parse("w + 1"), Err(PolyError::UnknownVariable(_))));
        assert!(r.parse("z^").is_err());
        assert!(r.parse("z + + ").is_err());
    }

    #[test]
    fn parse_reduces_mod_p() {
        let r = ring(&["x", "y"], 2);
        assert_eq!(r.format(&r.parse("x^2 - y^3").unwrap()), "y^3 + x^2");
        assert_eq!(r.parse("2*x + 4").unwrap(), r.zero());
        assert_eq!(r.format(&r.parse("3*x").unwrap()), "x");
    }

    #[test]
    fn initial_form_examples() {
        let r = ring(&["z", "y"], 0);
        assert_eq!(r.parse("z^2 - y^3").unwrap().initial_form().unwrap(), r.parse("z^2").unwrap());
        let node = r.parse("z^2 - y^2").unwrap();
        assert_eq!(node.initial_form().unwrap(), node);
        assert_eq!(r.parse("y^3 + y^5").unwrap().initial_form().unwrap(), r.parse("y^3").unwrap());
        assert_eq!(r.zero().initial_form(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn hasse_derivative_examples() {
        let r = ring(&["z", "y"], 2);
        let y3 = r.parse("y^3").unwrap();
        assert_eq!(y3.hasse_derivative(1, 1), r.parse("y^2").unwrap());
        let z6 = r.parse("z^6").unwrap();
        // binomial(6, 4) = 15 = 1 mod 2
        assert_eq!(z6.hasse_derivative(0, 4), r.parse("z^2").unwrap());
        let f = r.parse("z^2 + y^3*z").unwrap();
        assert_eq!(f.hasse_derivative(0, 0), f);
        // iterated ordinary derivatives of z^2 vanish in char 2; the divided power does not
        assert_eq!(r.parse("z^2").unwrap().hasse_derivative(0, 2), r.one());
    }

    #[test]
    fn translate_examples() {
        let r = ring(&["z", "y1", "y2"], 2);
        let f = r.parse("z^2 + y1^2*y2^2").unwrap();
        let s = r.parse("y1*y2").unwrap();
        assert_eq!(f.translate(0, &s).unwrap(), r.parse("z^2").unwrap());
        assert_eq!(f.translate(0, &r.zero()).unwrap(), f);
        assert_eq!(f.translate(0, &r.parse("z").unwrap()), Err(PolyError::IllegalSubstitution(0)));

        let q = ring(&["z", "y"], 0);
        let g = q.parse("z^2 + 2*y*z + y^3 + y^2").unwrap();
        let t = g.translate(0, &q.parse("-y").unwrap()).unwrap();
        assert_eq!(t, q.parse("z^2 + y^3").unwrap());
    }

    #[test]
    fn pth_power_root_examples() {
        let r = ring(&["y1", "y2"], 2);
        let h = r.parse("y1^2*y2^2").unwrap();
        assert_eq!(h.pth_power_root(1), Some(r.parse("y1*y2").unwrap()));
        assert_eq!(r.parse("y1^3").unwrap().pth_power_root(1), None);
        assert_eq!(r.parse("y1^4").unwrap().pth_power_root(2), Some(r.parse("y1").unwrap()));
        let q = ring(&["y"], 0);
        assert_eq!(q.parse("y^2").unwrap().pth_power_root(1), None);
    }

    #[test]
    fn coefficient_extraction() {
        let r = ring(&["z", "y"], 0);
        let f = r.parse("z^2 + 3*y*z + y^3").unwrap();
        assert_eq!(f.coefficient_in(0, 1), r.parse("3*y").unwrap());
        assert_eq!(f.coefficient_in(0, 0), r.parse("y^3").unwrap());
        assert_eq!(f.degree_in_var(0), Some(2));
        assert_eq!(f.order_in(&[1]), Some(0));
        assert_eq!(f.order(), Some(2));
    }

    #[test]
    fn variable_split_validation() {
        let s = VariableSplit::new(3, vec![0]).unwrap();
        assert_eq!(s.base(), &[1, 2]);
        assert!(VariableSplit::new(3, vec![0, 0]).is_err());
        assert!(VariableSplit::new(3, vec![5]).is_err());
        assert!(VariableSplit::new(3, vec![]).is_err());
    }

    #[test]
    fn ring_rejects_too_many_variables() {
        let names: Vec<String> = (0..9).map(|i| format!("x{i}")).collect();
        assert!(matches!(
            Ring::new(names, Field::Rational),
            Err(PolyError::TooManyVariables { got: 9, cap: 8 })
        ));
    }

    fn arb_poly(field: Field, nvars: usize) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(
            (proptest::collection::vec(0u32..4, nvars), -4i64..5),
            0..5,
        )
        .prop_map(move |ts| {
            Polynomial::from_terms(field, nvars, ts.into_iter().map(|(e, c)| (Monomial::new(e), int(c))))
        })
    }

    fn fields() -> impl Strategy<Value = Field> {
        prop_oneof![
            Just(Field::Rational),
            Just(Field::Prime(2)),
            Just(Field::Prime(3)),
            Just(Field::Prime(5)),
        ]
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in fields().prop_flat_map(|f| (arb_poly(f, 3), arb_poly(f, 3), arb_poly(f, 3)))) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn taylor_identity(f in fields().prop_flat_map(|fl| arb_poly(fl, 2))) {
            // variables: z = 0, y = 1, T = 2
            let fl = f.field();
            let big = f.extend_vars(3);
            let t = Polynomial::var(fl, 3, 2);
            let lhs = big.translate(0, &t).unwrap();
            let mut rhs = Polynomial::zero(fl, 3);
            for b in 0..=f.degree_in_var(0).unwrap_or(0) {
                rhs = &rhs + &(&big.hasse_derivative(0, b) * &t.pow(b));
            }
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn hasse_is_linear_over_base(
            (f, c) in fields().prop_flat_map(|fl| (arb_poly(fl, 2), arb_poly(fl, 2))),
            b in 0u32..4,
        ) {
            // c restricted to the base variable y (index 1)
            let c_base = c.coefficient_in(0, 0);
            let lhs = (&c_base * &f).hasse_derivative(0, b);
            let rhs = &c_base * &f.hasse_derivative(0, b);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pth_root_inverts_power(g in arb_poly(Field::Prime(3), 2), e in 1u32..3) {
            let h = g.pow(3u32.pow(e));
            let root = h.pth_power_root(e);
            prop_assert!(root.is_some());
            prop_assert_eq!(root.unwrap().pow(3u32.pow(e)), h);
        }

        #[test]
        fn initial_form_is_multiplicative(
            (f, g) in fields().prop_flat_map(|fl| (arb_poly(fl, 2), arb_poly(fl, 2)))
        ) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let lhs = (&f * &g).initial_form().unwrap();
            let rhs = &f.initial_form().unwrap() * &g.initial_form().unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
