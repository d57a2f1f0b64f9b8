//! Buchberger Gröbner bases, ideal and radical membership, ideal powers and
//! the Krull dimension of monomial quotients.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{Field, Rational};
use crate::poly::{Monomial, Polynomial};

pub const DEFAULT_PAIR_CAP: usize = 50_000;
pub const BUDGET_ENV_VAR: &str = "SLOPELAB_BUDGET";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("Gröbner budget exceeded: more than {cap} critical pairs")]
    BudgetExceeded { cap: usize },
    #[error("ideal is not generated by monomials")]
    NotMonomial,
}

/// Cap on the number of critical pairs a single basis computation may enqueue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: DEFAULT_PAIR_CAP }
    }
}

impl Budget {
    /// Default cap, overridden by `SLOPELAB_BUDGET` when it holds a positive integer.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .map(|max_pairs| Budget { max_pairs })
            .unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    Lex,
    GrLex,
    #[default]
    GRevLex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match self {
            MonomialOrder::Lex => ea.cmp(eb),
            MonomialOrder::GrLex => a.degree().cmp(&b.degree()).then_with(|| ea.cmp(eb)),
            MonomialOrder::GRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in ea.iter().zip(eb).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Finitely many generators in a fixed polynomial ring. No generators means the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPresentation {
    field: Field,
    nvars: usize,
    generators: Vec<Polynomial>,
}

impl IdealPresentation {
    /// Zero generators are dropped.
    pub fn new(field: Field, nvars: usize, generators: Vec<Polynomial>) -> Self {
        for g in &generators {
            assert_eq!(g.field(), field, "generator over a different field");
            assert_eq!(g.nvars(), nvars, "generator in a different ring");
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        IdealPresentation { field, nvars, generators }
    }

    pub fn zero(field: Field, nvars: usize) -> Self {
        Self::new(field, nvars, Vec::new())
    }

    /// The ideal of the origin, generated by all variables.
    pub fn maximal(field: Field, nvars: usize) -> Self {
        Self::new(field, nvars, (0..nvars).map(|i| Polynomial::var(field, nvars, i)).collect())
    }

    /// The coordinate prime generated by the listed variables.
    pub fn coordinate(field: Field, nvars: usize, vars: &[usize]) -> Self {
        Self::new(field, nvars, vars.iter().map(|&i| Polynomial::var(field, nvars, i)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.generators.iter().all(Polynomial::is_monomial)
    }

    pub fn is_principal(&self) -> bool {
        self.generators.len() == 1
    }

    pub fn sum(&self, other: &IdealPresentation) -> IdealPresentation {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Self::new(self.field, self.nvars, gens)
    }

    pub fn with_generator(&self, g: Polynomial) -> IdealPresentation {
        let mut gens = self.generators.clone();
        gens.push(g);
        Self::new(self.field, self.nvars, gens)
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> IdealPresentation {
        Self::new(self.field, self.nvars, self.generators.iter().map(f).collect())
    }

    /// Vanishes at the origin (every generator has zero constant term).
    pub fn is_in_origin(&self) -> bool {
        self.generators.iter().all(|g| g.constant_term().is_zero())
    }
}

/// A reduced Gröbner basis: monic, sorted by leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    field: Field,
    nvars: usize,
    elements: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Element {
    // descending in the basis order; leading term first, coefficient one
    terms: Vec<(Monomial, Rational)>,
}

impl Element {
    fn lead(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Key {
    mono: Monomial,
    order: MonomialOrder,
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&self.mono, &other.mono)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn to_element(p: &Polynomial, order: MonomialOrder) -> Option<Element> {
    let mut terms: Vec<(Monomial, Rational)> =
        p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    if terms.is_empty() {
        return None;
    }
    terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
    let inv = p.field().inv(&terms[0].1).expect("nonzero coefficient");
    for t in &mut terms {
        t.1 = p.field().mul(&t.1, &inv);
    }
    Some(Element { terms })
}

fn from_element(e: &Element, field: Field, nvars: usize) -> Polynomial {
    let mut p = Polynomial::zero(field, nvars);
    for (m, c) in &e.terms {
        p.add_term(m.clone(), c.clone());
    }
    p
}

/// Full normal form of `f` modulo `basis`.
fn normal_form_terms(
    f: impl IntoIterator<Item = (Monomial, Rational)>,
    basis: &[Element],
    order: MonomialOrder,
    field: Field,
) -> Vec<(Monomial, Rational)> {
    let mut work: BTreeMap<Key, Rational> = BTreeMap::new();
    let add = |work: &mut BTreeMap<Key, Rational>, mono: Monomial, c: Rational| {
        let key = Key { mono, order };
        match work.get_mut(&key) {
            Some(v) => {
                let s = field.add(v, &c);
                if s.is_zero() {
                    work.remove(&key);
                } else {
                    *v = s;
                }
            }
            None => {
                if !c.is_zero() {
                    work.insert(key, c);
                }
            }
        }
    };
    for (m, c) in f {
        add(&mut work, m, c);
    }
    let mut rem = Vec::new();
    while let Some((key, lc)) = work.pop_last() {
        match basis.iter().find(|g| g.lead().divides(&key.mono)) {
            Some(g) => {
                let q = key.mono.div(g.lead()).expect("divisible");
                let c = field.neg(&lc);
                for (m, a) in &g.terms[1..] {
                    add(&mut work, m.mul(&q), field.mul(&c, a));
                }
            }
            None => rem.push((key.mono, lc)),
        }
    }
    rem
}

fn s_polynomial(a: &Element, b: &Element, field: Field) -> Vec<(Monomial, Rational)> {
    let l = a.lead().lcm(b.lead());
    let qa = l.div(a.lead()).expect("lcm divisible");
    let qb = l.div(b.lead()).expect("lcm divisible");
    let mut out: Vec<(Monomial, Rational)> =
        a.terms[1..].iter().map(|(m, c)| (m.mul(&qa), c.clone())).collect();
    out.extend(b.terms[1..].iter().map(|(m, c)| (m.mul(&qb), field.neg(c))));
    out
}

/// Reduced Gröbner basis by Buchberger's algorithm with the coprime-leading-term
/// criterion and normal pair selection.
pub fn buchberger(
    ideal: &IdealPresentation,
    order: MonomialOrder,
    budget: Budget,
) -> Result<GroebnerBasis, GroebnerError> {
    let field = ideal.field();
    let mut basis: Vec<Element> = Vec::new();
    // pairs keyed by (lcm degree, insertion index) for normal selection
    let mut pairs: BTreeMap<(u32, usize), (usize, usize)> = BTreeMap::new();
    let mut enqueued = 0usize;
    let mut serial = 0usize;

    let mut push = |basis: &mut Vec<Element>,
                    pairs: &mut BTreeMap<(u32, usize), (usize, usize)>,
                    e: Element|
     -> Result<(), GroebnerError> {
        let j = basis.len();
        for (i, g) in basis.iter().enumerate() {
            if g.lead().is_coprime(e.lead()) || (g.is_monomial() && e.is_monomial()) {
                continue;
            }
            enqueued += 1;
            if enqueued > budget.max_pairs {
                return Err(GroebnerError::BudgetExceeded { cap: budget.max_pairs });
            }
            serial += 1;
            pairs.insert((g.lead().lcm(e.lead()).degree(), serial), (i, j));
        }
        basis.push(e);
        Ok(())
    };

    let mut inputs: Vec<Element> =
        ideal.generators().iter().filter_map(|g| to_element(g, order)).collect();
    inputs.sort_by(|a, b| order.cmp(a.lead(), b.lead()));
    for e in inputs {
        let r = normal_form_terms(e.terms, &basis, order, field);
        let p = Polynomial::from_terms(field, ideal.nvars(), r);
        if let Some(e) = to_element(&p, order) {
            push(&mut basis, &mut pairs, e)?;
        }
    }

    while let Some((_, (i, j))) = pairs.pop_first() {
        let s = s_polynomial(&basis[i], &basis[j], field);
        let r = normal_form_terms(s, &basis, order, field);
        if r.is_empty() {
            continue;
        }
        let p = Polynomial::from_terms(field, ideal.nvars(), r);
        let e = to_element(&p, order).expect("nonzero remainder");
        push(&mut basis, &mut pairs, e)?;
    }

    Ok(GroebnerBasis::reduce_from(basis, order, field, ideal.nvars()))
}

impl GroebnerBasis {
    fn reduce_from(mut elems: Vec<Element>, order: MonomialOrder, field: Field, nvars: usize) -> Self {
        // minimalize: drop elements whose leading monomial is divisible by another's
        elems.sort_by(|a, b| order.cmp(a.lead(), b.lead()));
        let mut minimal: Vec<Element> = Vec::new();
        for e in elems {
            if !minimal.iter().any(|g| g.lead().divides(e.lead())) {
                minimal.push(e);
            }
        }
        // interreduce tails
        let mut reduced = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<Element> = minimal
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, e)| e.clone())
                .collect();
            let lead = minimal[i].terms[0].clone();
            let tail = normal_form_terms(minimal[i].terms[1..].to_vec(), &others, order, field);
            let mut terms = vec![lead];
            terms.extend(tail);
            terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
            reduced.push(Element { terms });
        }
        GroebnerBasis { order, field, nvars, elements: reduced }
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.elements.iter().map(|e| from_element(e, self.field, self.nvars)).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|e| e.lead().clone()).collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let terms = f.terms().map(|(m, c)| (m.clone(), c.clone()));
        let r = normal_form_terms(terms, &self.elements, self.order, self.field);
        let mut p = Polynomial::zero(self.field, self.nvars);
        for (m, c) in r {
            p.add_term(m, c);
        }
        p
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elements.iter().any(|e| e.lead().is_one())
    }

    /// The ideal of leading monomials.
    pub fn leading_ideal(&self) -> IdealPresentation {
        IdealPresentation::new(
            self.field,
            self.nvars,
            self.leading_monomials()
                .into_iter()
                .map(|m| Polynomial::term(self.field, m, Rational::one()))
                .collect(),
        )
    }
}

pub fn ideal_member(
    f: &Polynomial,
    ideal: &IdealPresentation,
    budget: Budget,
) -> Result<bool, GroebnerError> {
    if f.is_zero() {
        return Ok(true);
    }
    Ok(buchberger(ideal, MonomialOrder::GRevLex, budget)?.contains(f))
}

/// `f ∈ √I`, decided by `1 ∈ I + ⟨1 - t f⟩` in one extra variable `t`.
pub fn radical_member(
    f: &Polynomial,
    ideal: &IdealPresentation,
    budget: Budget,
) -> Result<bool, GroebnerError> {
    if f.is_zero() {
        return Ok(true);
    }
    let n = ideal.nvars() + 1;
    let field = ideal.field();
    let t = Polynomial::var(field, n, n - 1);
    let rabinowitsch = &Polynomial::one(field, n) - &(&t * &f.extend_vars(n));
    let mut gens: Vec<Polynomial> = ideal.generators().iter().map(|g| g.extend_vars(n)).collect();
    gens.push(rabinowitsch);
    let big = IdealPresentation::new(field, n, gens);
    Ok(buchberger(&big, MonomialOrder::GRevLex, budget)?.is_unit_ideal())
}

/// `I^m` generated by all `m`-fold products of the generators (duplicates removed).
pub fn ideal_power(ideal: &IdealPresentation, m: u32) -> IdealPresentation {
    let (field, n) = (ideal.field(), ideal.nvars());
    if m == 0 {
        return IdealPresentation::new(field, n, vec![Polynomial::one(field, n)]);
    }
    let gens = ideal.generators();
    let mut out: Vec<Polynomial> = Vec::new();
    fn rec(
        gens: &[Polynomial],
        start: usize,
        left: u32,
        acc: Polynomial,
        out: &mut Vec<Polynomial>,
    ) {
        if left == 0 {
            if !out.contains(&acc) {
                out.push(acc);
            }
            return;
        }
        for i in start..gens.len() {
            rec(gens, i, left - 1, &acc * &gens[i], out);
        }
    }
    rec(gens, 0, m, Polynomial::one(field, n), &mut out);
    IdealPresentation::new(field, n, out)
}

/// Krull dimension of `k[x]/M` for a monomial ideal `M`: the size of the
/// largest variable set containing no generator's support. The unit ideal
/// gives -1 (the zero ring).
pub fn monomial_dimension(ideal: &IdealPresentation) -> Result<i64, GroebnerError> {
    if !ideal.is_monomial() {
        return Err(GroebnerError::NotMonomial);
    }
    let n = ideal.nvars();
    let supports: Vec<u32> = ideal
        .generators()
        .iter()
        .map(|g| {
            let m = g.monomials().next().expect("monomial");
            m.support().iter().fold(0u32, |acc, &v| acc | (1 << v))
        })
        .collect();
    let mut best = -1i64;
    for set in 0u32..(1 << n) {
        if supports.iter().all(|&s| s & !set != 0) {
            best = best.max(set.count_ones() as i64);
        }
    }
    Ok(best)
}

/// Krull dimension of `k[x]/I` through the leading-term ideal of a grevlex basis.
pub fn quotient_dimension(ideal: &IdealPresentation, budget: Budget) -> Result<i64, GroebnerError> {
    let gb = buchberger(ideal, MonomialOrder::GRevLex, budget)?;
    monomial_dimension(&gb.leading_ideal())
}

/// Standard basis of `J + m^j` for `m` the ideal of all variables, computed in
/// `k[x]/m^j` under the local degree order (lowest degree leads, grevlex
/// breaks ties). Terms of degree at least `j` are dropped throughout, so
/// reduction terminates and pairs with `m^j` never need to be formed.
#[derive(Clone, Debug)]
pub struct TruncatedBasis {
    truncation: u32,
    polys: Vec<Polynomial>,
}

fn local_lead(f: &Polynomial) -> Option<(Monomial, Rational)> {
    f.terms()
        .min_by(|(a, _), (b, _)| {
            a.degree().cmp(&b.degree()).then_with(|| MonomialOrder::GRevLex.cmp(b, a))
        })
        .map(|(m, c)| (m.clone(), c.clone()))
}

fn truncate(f: &Polynomial, j: u32) -> Polynomial {
    let terms: Vec<(Monomial, Rational)> = f.terms().filter(|(m, _)| m.degree() < j).map(|(m, c)| (m.clone(), c.clone())).collect();
    Polynomial::from_terms(f.field(), f.nvars(), terms)
}

impl TruncatedBasis {
    pub fn new(generators: &[Polynomial], j: u32, budget: Budget) -> Result<Self, GroebnerError> {
        let mut basis = TruncatedBasis { truncation: j, polys: Vec::new() };
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut enqueued = 0usize;
        let mut add = |basis: &mut TruncatedBasis, pairs: &mut Vec<(usize, usize)>, g: Polynomial| {
            let k = basis.polys.len();
            enqueued += k;
            if enqueued > budget.max_pairs {
                return Err(GroebnerError::BudgetExceeded { cap: budget.max_pairs });
            }
            pairs.extend((0..k).map(|i| (i, k)));
            let (_, c) = local_lead(&g).expect("nonzero");
            basis.polys.push(g.scale(&g.field().inv(&c).expect("nonzero lead")));
            Ok(())
        };
        for g in generators {
            let r = basis.reduce(g);
            if !r.is_zero() {
                add(&mut basis, &mut pairs, r)?;
            }
        }
        while let Some((i, k)) = pairs.pop() {
            let (a, b) = (&basis.polys[i], &basis.polys[k]);
            let (la, _) = local_lead(a).expect("nonzero");
            let (lb, _) = local_lead(b).expect("nonzero");
            let l = la.lcm(&lb);
            if l.degree() >= j {
                continue;
            }
            let one = Rational::one();
            let s = &a.mul_monomial(&l.div(&la).expect("divides"), &one)
                - &b.mul_monomial(&l.div(&lb).expect("divides"), &one);
            let r = basis.reduce(&s);
            if !r.is_zero() {
                add(&mut basis, &mut pairs, r)?;
            }
        }
        Ok(basis)
    }

    /// Lead-reduces `f` modulo `m^j`; zero exactly when `f ∈ J + m^j`.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let mut f = truncate(f, self.truncation);
        'outer: while let Some((lm, lc)) = local_lead(&f) {
            for g in &self.polys {
                let (gm, _) = local_lead(g).expect("nonzero");
                if let Some(q) = lm.div(&gm) {
                    f = truncate(&(&f - &g.mul_monomial(&q, &lc)), self.truncation);
                    continue 'outer;
                }
            }
            return f;
        }
        f
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;

    fn ring(names: &[&str], c: u64) -> Ring {
        Ring::new(names.to_vec(), Field::from_characteristic(c).unwrap()).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> IdealPresentation {
        IdealPresentation::new(r.field(), r.nvars(), gens.iter().map(|g| r.parse(g).unwrap()).collect())
    }

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let r = ring(&["x", "y"], 0);
        let gb = buchberger(&ideal(&r, &["x^2 - y^3"]), MonomialOrder::GRevLex, Budget::default()).unwrap();
        assert_eq!(gb.polynomials(), vec![r.parse("y^3 - x^2").unwrap()]);
    }

    #[test]
    fn monomial_ideal_basis() {
        let r = ring(&["x", "y"], 0);
        let gb = buchberger(&ideal(&r, &["x^2", "x*y", "y^2"]), MonomialOrder::GRevLex, Budget::default())
            .unwrap();
        let mut got = gb.polynomials();
        got.sort_by(|a, b| r.format(a).cmp(&r.format(b)));
        assert_eq!(got, vec![r.parse("x*y").unwrap(), r.parse("x^2").unwrap(), r.parse("y^2").unwrap()]);
    }

    #[test]
    fn s_polynomial_yields_y4() {
        let r = ring(&["x", "y"], 0);
        let i = ideal(&r, &["x^2 - y^3", "x*y"]);
        // x^2 leads only in lex; in grlex y^3 leads and the basis gains x^3 instead
        let gb = buchberger(&i, MonomialOrder::Lex, Budget::default()).unwrap();
        assert!(gb.polynomials().contains(&r.parse("y^4").unwrap()));
        let grlex = buchberger(&i, MonomialOrder::GrLex, Budget::default()).unwrap();
        assert!(grlex.polynomials().contains(&r.parse("x^3").unwrap()));
        assert!(grlex.contains(&r.parse("y^4").unwrap()));
        // idempotent
        let again = buchberger(
            &IdealPresentation::new(r.field(), 2, gb.polynomials()),
            MonomialOrder::Lex,
            Budget::default(),
        )
        .unwrap();
        assert_eq!(again, gb);
    }

    #[test]
    fn membership_examples() {
        let r = ring(&["x", "y"], 0);
        let i = ideal(&r, &["x^2", "y^3"]);
        let f = r.parse("x^2*y^3").unwrap();
        assert!(ideal_member(&f, &ideal_power(&i, 2), Budget::default()).unwrap());
        assert!(!ideal_member(&f, &ideal_power(&i, 3), Budget::default()).unwrap());
        assert!(ideal_member(&r.zero(), &i, Budget::default()).unwrap());
    }

    #[test]
    fn radical_examples() {
        let r = ring(&["z", "y"], 0);
        let z = r.parse("z").unwrap();
        assert!(radical_member(&z, &ideal(&r, &["z^2"]), Budget::default()).unwrap());
        let cusp = ideal(&r, &["z^2 - y^3"]);
        assert!(!radical_member(&z, &cusp, Budget::default()).unwrap());
        for k in 1..=8 {
            assert!(!ideal_member(&z.pow(k), &cusp, Budget::default()).unwrap());
        }
        let r2 = ring(&["x", "y"], 2);
        assert!(radical_member(
            &r2.parse("x + y").unwrap(),
            &ideal(&r2, &["x^2 - y^2"]),
            Budget::default()
        )
        .unwrap());
    }

    #[test]
    fn power_examples() {
        let r = ring(&["x", "y"], 0);
        assert_eq!(ideal_power(&ideal(&r, &["x", "y"]), 2), ideal(&r, &["x^2", "x*y", "y^2"]));
        assert_eq!(
            ideal_power(&ideal(&r, &["x^2 - y^3"]), 3),
            ideal(&r, &["(x^2 - y^3)^3"])
        );
        assert_eq!(ideal_power(&ideal(&r, &["x^2", "y^3"]), 2), ideal(&r, &["x^4", "x^2*y^3", "y^6"]));
    }

    #[test]
    fn monomial_dimension_examples() {
        let r = ring(&["z", "y"], 0);
        assert_eq!(monomial_dimension(&ideal(&r, &["z^2"])).unwrap(), 1);
        let r3 = ring(&["x", "y", "w"], 0);
        assert_eq!(monomial_dimension(&ideal(&r3, &["x*y"])).unwrap(), 2);
        let r2 = ring(&["x", "y"], 0);
        assert_eq!(monomial_dimension(&ideal(&r2, &["x", "y"])).unwrap(), 0);
        assert_eq!(monomial_dimension(&ideal(&r2, &["1"])).unwrap(), -1);
        assert_eq!(monomial_dimension(&ideal(&r2, &[])).unwrap(), 2);
        assert_eq!(monomial_dimension(&ideal(&r2, &["x + y"])), Err(GroebnerError::NotMonomial));
    }

    #[test]
    fn budget_is_enforced() {
        let r = ring(&["x", "y", "z"], 0);
        let i = ideal(&r, &["x^3 - y*z", "y^3 - x*z", "z^3 - x*y", "x*y*z - 1"]);
        let err = buchberger(&i, MonomialOrder::GRevLex, Budget { max_pairs: 3 });
        assert_eq!(err, Err(GroebnerError::BudgetExceeded { cap: 3 }));
    }

    #[test]
    fn every_generator_reduces_to_zero() {
        let r = ring(&["x", "y", "z"], 3);
        let i = ideal(&r, &["x^2*y - z", "y^2 - x*z + 1", "x*z^2 + y"]);
        let gb = buchberger(&i, MonomialOrder::GRevLex, Budget::default()).unwrap();
        for g in i.generators() {
            assert!(gb.contains(g));
        }
    }

    #[test]
    fn truncated_basis_matches_global_basis() {
        let cases: [(&[&str], u64, &[&str]); 4] = [
            (&["x", "y"], 0, &["x^2 - y^3"]),
            (&["x", "y"], 2, &["x^2 + y^2 + x*y^3"]),
            (&["x", "y", "z"], 3, &["x*y - z^2", "y^3 - x*z + x^2"]),
            (&["z", "a", "b"], 2, &["z^2 + a^2*b^2 + a^5"]),
        ];
        for (names, c, gens) in cases {
            let r = ring(names, c);
            let gens: Vec<Polynomial> = gens.iter().map(|g| r.parse(g).unwrap()).collect();
            let probes: Vec<Polynomial> = ["x", "y", "z", "x^2", "x*y", "y^3", "x^3 - y^2", "z^2", "a*b + z", "a^3"]
                .iter()
                .filter_map(|p| r.parse(p).ok())
                .collect();
            for j in 1..=6 {
                let tb = TruncatedBasis::new(&gens, j, Budget::default()).unwrap();
                let m = IdealPresentation::maximal(r.field(), r.nvars());
                let gb = buchberger(&ideal_power(&m, j).sum(&IdealPresentation::new(r.field(), r.nvars(), gens.clone())), MonomialOrder::GRevLex, Budget::default()).unwrap();
                for f in &probes {
                    for k in 1..=3 {
                        let g = f.pow(k);
                        assert_eq!(tb.contains(&g), gb.contains(&g), "{} at j = {j}", r.format(&g));
                    }
                }
            }
        }
    }
}
