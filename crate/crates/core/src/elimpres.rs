//! Rees algebras and hypersurface presentations: Hironaka's order, one-step
//! differential saturation, p-presentations with their elimination data,
//! slope and cleaning to normal form, the Tschirnhausen order in tame
//! characteristic, and the cross-checks relating H-ord to the Samuel slope.

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ExtendedRational, Field, Rational};
use crate::groebner::{ideal_member, Budget, GroebnerError, IdealPresentation};
use crate::poly::{Monomial, PolyError, Polynomial, VariableSplit};
use crate::samuel::{
    kernel_lambda, samuel_slope, KernelClass, KernelReport, LocalRingPresentation, NubarStrategy,
    SamuelError, SamuelOptions, SlopeResult,
};

pub use crate::samuel::PointSpec;

pub const DEFAULT_MAX_ROUNDS: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElimError {
    #[error(transparent)]
    Samuel(#[from] SamuelError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("polynomial is not monic in the fiber variable")]
    NotMonic,
    #[error("bad degree: {0}")]
    BadDegree(String),
    #[error("coefficients must not involve fiber variables")]
    FiberInCoefficient,
    #[error("p-presentations need characteristic p = {0}, found {1}")]
    WrongCharacteristic(u64, u64),
    #[error("point is not in the singular locus: {0}")]
    PointNotSingular(String),
    #[error("the point must contain every fiber variable")]
    PointMissingFiber,
    #[error("cleaning did not reach normal form within {} rounds", .0.rounds)]
    RoundsExhausted(Box<SlopeReport>),
    #[error("the characteristic divides the degree")]
    CharDividesDegree,
    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),
}

/// `R[f_1 W^{n_1}, ..., f_r W^{n_r}]` over a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReesAlgebra {
    field: Field,
    nvars: usize,
    generators: Vec<(Polynomial, u32)>,
}

impl ReesAlgebra {
    /// Zero generators are dropped; weights must be positive.
    pub fn new(field: Field, nvars: usize, generators: Vec<(Polynomial, u32)>) -> Self {
        for (f, n) in &generators {
            assert!(*n >= 1, "weights are positive");
            assert_eq!((f.field(), f.nvars()), (field, nvars), "generator in a different ring");
        }
        let generators = generators.into_iter().filter(|(f, _)| !f.is_zero()).collect();
        ReesAlgebra { field, nvars, generators }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[(Polynomial, u32)] {
        &self.generators
    }

    /// Generator-list union.
    pub fn amalgam(&self, other: &ReesAlgebra) -> ReesAlgebra {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        ReesAlgebra::new(self.field, self.nvars, gens)
    }
}

/// `min_i ν_point(f_i)/n_i`; `∞` without generators. The point is in
/// `Sing` iff the value is at least one.
pub fn sing_order(g: &ReesAlgebra, at: &PointSpec) -> ExtendedRational {
    g.generators
        .iter()
        .map(|(f, n)| at.order(f).div_int(*n as u64))
        .min()
        .unwrap_or(ExtendedRational::Infinity)
}

/// Adds `Δ^b_v(f)·W^{n-b}` for every generator, variable `v` and `0 < b < n`,
/// repeating until nothing new appears. A candidate is dropped when an
/// existing generator of at least its weight divides it.
pub fn diff_saturate_once(g: &ReesAlgebra, budget: Budget) -> Result<ReesAlgebra, ElimError> {
    let mut gens: Vec<(Polynomial, u32)> = g.generators.iter().map(|(f, n)| (f.monic(), *n)).collect();
    let mut frontier = gens.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (f, n) in &frontier {
            for v in 0..g.nvars {
                for b in 1..*n {
                    let d = f.hasse_derivative(v, b);
                    if d.is_zero() {
                        continue;
                    }
                    let cand = (d.monic(), n - b);
                    if !is_redundant(&cand, &gens, budget)? {
                        gens.push(cand.clone());
                        next.push(cand);
                    }
                }
            }
        }
        frontier = next;
    }
    gens.sort_by_cached_key(|(f, n)| (*n, term_key(f)));
    Ok(ReesAlgebra::new(g.field, g.nvars, gens))
}

/// Terms from the largest monomial down, for a deterministic order.
fn term_key(f: &Polynomial) -> Vec<(Monomial, Rational)> {
    f.terms().rev().map(|(m, c)| (m.clone(), c.clone())).collect()
}

fn is_redundant(cand: &(Polynomial, u32), gens: &[(Polynomial, u32)], budget: Budget) -> Result<bool, ElimError> {
    for (h, n) in gens {
        if *n < cand.1 {
            continue;
        }
        let principal = IdealPresentation::new(h.field(), h.nvars(), vec![h.clone()]);
        if ideal_member(&cand.0, &principal, budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One fiber `h(z) = z^q + ã_1 z^{q-1} + ... + ã_q` with `q = p^ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub var: usize,
    pub ell: u32,
    pub h: Polynomial,
}

impl Fiber {
    pub fn degree(&self) -> u32 {
        self.h.degree_in_var(self.var).unwrap_or(0)
    }

    /// `ã_j` for `1 ≤ j ≤ q`.
    pub fn coefficient(&self, j: u32) -> Polynomial {
        self.h.coefficient_in(self.var, self.degree() - j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPresentation {
    field: Field,
    nvars: usize,
    p: u64,
    split: VariableSplit,
    fibers: Vec<Fiber>,
    elimination: Vec<(Polynomial, u32)>,
    elimination_supplied: bool,
}

fn check_monic_in(g: &Polynomial, z: usize, split: &VariableSplit) -> Result<u32, ElimError> {
    let n = g.degree_in_var(z).unwrap_or(0);
    if n == 0 {
        return Err(ElimError::BadDegree("degree zero in the fiber variable".into()));
    }
    let lead = g.coefficient_in(z, n);
    if !(lead.is_constant() && lead.constant_term().is_one()) {
        return Err(ElimError::NotMonic);
    }
    for k in 0..n {
        let c = g.coefficient_in(z, k);
        if split.fiber().iter().any(|&v| c.contains_var(v)) {
            return Err(ElimError::FiberInCoefficient);
        }
    }
    Ok(n)
}

/// `h = (1/N') Δ^r_z g` with `N = N' p^ℓ` and `r = (N' - 1) p^ℓ`; monic of degree `p^ℓ`.
fn reduce_to_p_power(g: &Polynomial, z: usize, split: &VariableSplit, p: u64) -> Result<Fiber, ElimError> {
    let n = check_monic_in(g, z, split)?;
    let (mut q, mut ell) = (1u32, 0u32);
    while n % (q * p as u32) == 0 {
        q *= p as u32;
        ell += 1;
    }
    if ell == 0 {
        return Err(ElimError::BadDegree(format!(
            "degree {n} is prime to {p}; use the Tschirnhausen order"
        )));
    }
    let nprime = n / q;
    let r = (nprime - 1) * q;
    let field = g.field();
    let inv = field.inv(&field.from_int(nprime as i64)).expect("N' is a unit mod p");
    let h = g.hasse_derivative(z, r).scale(&inv);
    Ok(Fiber { var: z, ell, h })
}

/// p-presentation of `g`, monic in the single fiber variable of `split`.
pub fn build_p_presentation(g: &Polynomial, split: &VariableSplit, p: u64) -> Result<PPresentation, ElimError> {
    build_multi(std::slice::from_ref(g), split, p)
}

/// Coordinate-separated p-presentation: `gs[i]` is monic in the `i`-th fiber variable.
pub fn build_multi(gs: &[Polynomial], split: &VariableSplit, p: u64) -> Result<PPresentation, ElimError> {
    let first = gs.first().ok_or_else(|| ElimError::BadDegree("no polynomials".into()))?;
    let field = first.field();
    if field.characteristic() != p {
        return Err(ElimError::WrongCharacteristic(p, field.characteristic()));
    }
    if gs.len() != split.fiber().len() {
        return Err(ElimError::Inconsistent(format!(
            "{} polynomials for {} fiber variables",
            gs.len(),
            split.fiber().len()
        )));
    }
    let fibers = gs
        .iter()
        .zip(split.fiber())
        .map(|(g, &z)| reduce_to_p_power(g, z, split, p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pres = PPresentation {
        field,
        nvars: first.nvars(),
        p,
        split: split.clone(),
        fibers,
        elimination: Vec::new(),
        elimination_supplied: false,
    };
    pres.elimination = elimination_generators(&pres);
    Ok(pres)
}

/// Multi-indices over `vars` with total degree `d`.
fn multi_indices(vars: &[usize], d: u32) -> Vec<Vec<(usize, u32)>> {
    match vars.split_first() {
        None => {
            if d == 0 {
                vec![Vec::new()]
            } else {
                Vec::new()
            }
        }
        Some((&v, rest)) => {
            let mut out = Vec::new();
            for e in 0..=d {
                for mut tail in multi_indices(rest, d - e) {
                    if e > 0 {
                        tail.insert(0, (v, e));
                    }
                    out.push(tail);
                }
            }
            out
        }
    }
}

/// Generating rule for the elimination algebra: `ã_j W^j` for `j < q`, and
/// Hasse derivatives `D^α(ã_j) W^{j-|α|}` in the base variables for
/// `0 < |α| < j ≤ q`. Monic and deduplicated.
pub fn elimination_generators(pres: &PPresentation) -> Vec<(Polynomial, u32)> {
    let base = pres.split.base().to_vec();
    let mut out: Vec<(Polynomial, u32)> = Vec::new();
    let mut push = |f: Polynomial, w: u32| {
        if f.is_zero() {
            return;
        }
        let item = (f.monic(), w);
        if !out.contains(&item) {
            out.push(item);
        }
    };
    for fiber in &pres.fibers {
        let q = fiber.degree();
        for j in 1..=q {
            let a = fiber.coefficient(j);
            if a.is_zero() {
                continue;
            }
            if j < q {
                push(a.clone(), j);
            }
            for b in 1..j {
                for alpha in multi_indices(&base, b) {
                    let d = alpha.iter().fold(a.clone(), |acc, &(v, e)| acc.hasse_derivative(v, e));
                    push(d, j - b);
                }
            }
        }
    }
    out.sort_by_cached_key(|(f, n)| (*n, term_key(f)));
    out
}

impl PPresentation {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn split(&self) -> &VariableSplit {
        &self.split
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn elimination(&self) -> &[(Polynomial, u32)] {
        &self.elimination
    }

    /// The implemented elimination rule is approximate unless a list was supplied.
    pub fn elimination_is_approximate(&self) -> bool {
        !self.elimination_supplied
    }

    pub fn with_elimination(mut self, gens: Vec<(Polynomial, u32)>) -> Self {
        self.elimination = gens.into_iter().filter(|(f, _)| !f.is_zero()).collect();
        self.elimination_supplied = true;
        self
    }

    /// The elimination algebra as a Rees algebra over the ambient ring.
    pub fn elimination_algebra(&self) -> ReesAlgebra {
        ReesAlgebra::new(self.field, self.nvars, self.elimination.clone())
    }

    /// Replaces the fiber variable `z` of fiber `i` by `z + s`.
    pub fn translate_fiber(&self, i: usize, s: &Polynomial) -> Result<PPresentation, ElimError> {
        if self.split.fiber().iter().any(|&v| s.contains_var(v)) {
            return Err(ElimError::FiberInCoefficient);
        }
        let mut out = self.clone();
        let f = &mut out.fibers[i];
        f.h = f.h.translate(f.var, s)?;
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    A,
    B1,
    B2,
    B3,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub var: usize,
    pub degree: u32,
    /// `ν(ã_j)/j` for `j = 1..q`.
    pub orders: Vec<ExtendedRational>,
    pub case: Case,
    /// `G` with `In(ã_q) = G^q` in case B3.
    pub root: Option<Polynomial>,
}

impl FiberReport {
    pub fn top_order(&self) -> &ExtendedRational {
        self.orders.last().expect("q ≥ 1")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    pub var: usize,
    pub shift: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeReport {
    pub fibers: Vec<FiberReport>,
    pub elimination_order: ExtendedRational,
    pub slope: ExtendedRational,
    pub case: Case,
    pub h_ord: Option<ExtendedRational>,
    /// `(fiber index, j)` with `j < q` and `ν(ã_j)/j` below the elimination order.
    pub violations: Vec<(usize, u32)>,
    pub transcript: Vec<Translation>,
    pub rounds: u32,
    pub degenerate: bool,
    pub elimination_approximate: bool,
    pub presentation: PPresentation,
}

impl SlopeReport {
    pub fn is_normal_form(&self) -> bool {
        self.case != Case::B3
    }
}

fn base_point(pres: &PPresentation, at: &PointSpec) -> Result<PointSpec, ElimError> {
    let vars = at.variables(pres.nvars);
    if pres.split.fiber().iter().any(|v| !vars.contains(v)) {
        return Err(ElimError::PointMissingFiber);
    }
    Ok(PointSpec::CoordinatePrime(vars.into_iter().filter(|&v| pres.split.is_base(v)).collect()))
}

/// `Sl = min(min_i ν(ã^{(i)}_q)/q, ord of the elimination algebra)` with case labels.
pub fn slope(pres: &PPresentation, at: &PointSpec) -> Result<SlopeReport, ElimError> {
    let beta = base_point(pres, at)?;
    let beta_vars = beta.variables(pres.nvars);
    let elimination_order = sing_order(&pres.elimination_algebra(), &beta);
    let one = ExtendedRational::from_int(1);
    let mut fibers = Vec::new();
    let mut violations = Vec::new();
    for (i, fiber) in pres.fibers.iter().enumerate() {
        let q = fiber.degree();
        let orders: Vec<ExtendedRational> =
            (1..=q).map(|j| beta.order(&fiber.coefficient(j)).div_int(j as u64)).collect();
        if let Some(j) = orders.iter().position(|o| *o < one) {
            return Err(ElimError::PointNotSingular(format!(
                "ν(ã_{})/{} < 1 in fiber {}",
                j + 1,
                j + 1,
                i
            )));
        }
        for (j, o) in orders[..orders.len() - 1].iter().enumerate() {
            if *o < elimination_order {
                violations.push((i, j as u32 + 1));
            }
        }
        let top = orders.last().expect("q ≥ 1").clone();
        let (case, root) = if top >= elimination_order {
            (Case::A, None)
        } else if !top.is_positive_integer() {
            (Case::B1, None)
        } else {
            let initial = fiber.coefficient(q).initial_form_in(&beta_vars)?;
            match initial.pth_power_root(fiber.ell) {
                Some(g) => (Case::B3, Some(g)),
                None => (Case::B2, None),
            }
        };
        fibers.push(FiberReport { var: fiber.var, degree: q, orders, case, root });
    }
    let top_min = fibers.iter().map(|f| f.top_order().clone()).min().unwrap_or(ExtendedRational::Infinity);
    let slope = top_min.clone().min(elimination_order.clone());
    let case = if slope == elimination_order {
        Case::A
    } else {
        let minimizers: Vec<&FiberReport> = fibers.iter().filter(|f| *f.top_order() == slope).collect();
        if minimizers.iter().any(|f| f.case == Case::B3) {
            Case::B3
        } else {
            minimizers[0].case
        }
    };
    let h_ord = (case != Case::B3).then(|| slope.clone());
    Ok(SlopeReport {
        fibers,
        elimination_order,
        degenerate: slope.is_infinite(),
        slope,
        case,
        h_ord,
        violations,
        transcript: Vec::new(),
        rounds: 0,
        elimination_approximate: pres.elimination_is_approximate(),
        presentation: pres.clone(),
    })
}

/// Translates every B3 fiber `z ↦ z - G` where `In(ã_q) = G^q`, until the
/// presentation is in normal form; then `H-ord = Sl`. The elimination
/// algebra is kept fixed, being invariant under these translations.
pub fn clean(pres: &PPresentation, at: &PointSpec, max_rounds: u32) -> Result<SlopeReport, ElimError> {
    let mut current = pres.clone();
    let mut transcript = Vec::new();
    let mut report = slope(&current, at)?;
    let mut rounds = 0;
    while report.case == Case::B3 {
        if rounds >= max_rounds {
            report.transcript = transcript;
            report.rounds = rounds;
            return Err(ElimError::RoundsExhausted(Box::new(report)));
        }
        for (i, fr) in report.fibers.iter().enumerate() {
            if let (Case::B3, Some(g)) = (fr.case, &fr.root) {
                let shift = -g;
                current = current.translate_fiber(i, &shift)?;
                transcript.push(Translation { var: fr.var, shift });
            }
        }
        rounds += 1;
        report = slope(&current, at)?;
    }
    report.transcript = transcript;
    report.rounds = rounds;
    Ok(report)
}

/// Hironaka's order of a monic `f` of degree `m` in `z` when the
/// characteristic does not divide `m`: translate `z ↦ z - a_1/m`, then
/// `min_{i ≥ 2} ν(a'_i)/i`.
pub fn tschirnhausen_ord(f: &Polynomial, z: usize, at: &PointSpec) -> Result<ExtendedRational, ElimError> {
    let split = VariableSplit::new(f.nvars(), vec![z])?;
    let m = check_monic_in(f, z, &split)?;
    let field = f.field();
    let p = field.characteristic();
    if p != 0 && m as u64 % p == 0 {
        return Err(ElimError::CharDividesDegree);
    }
    let base: Vec<usize> = at.variables(f.nvars()).into_iter().filter(|&v| v != z).collect();
    let beta = PointSpec::CoordinatePrime(base);
    let inv_m = field.inv(&field.from_int(m as i64)).expect("m is a unit");
    let a1 = f.coefficient_in(z, m - 1);
    let g = f.translate(z, &(-&a1).scale(&inv_m))?;
    let min = (2..=m)
        .map(|i| beta.order(&g.coefficient_in(z, m - i)).div_int(i as u64))
        .min()
        .unwrap_or(ExtendedRational::Infinity);
    Ok(min)
}

/// A hypersurface germ: `poly` monic in the single fiber variable of `split`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    pub poly: Polynomial,
    pub split: VariableSplit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// Not extremal implies `H-ord = 1` (and `ord = 1` at closed points).
    NonExtremal,
    /// Extremal implies `H-ord = min(S-Sl, ord)`.
    Extremal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub theorem: Theorem,
    pub kernel: KernelReport,
    pub h_ord: ExtendedRational,
    pub ord: ExtendedRational,
    pub samuel_slope: Option<SlopeResult>,
    pub slope_report: Option<SlopeReport>,
    pub pass: bool,
    pub detail: String,
}

/// Checks the theorem that applies to `A` at `at`: the non-extremal one
/// (`H-ord = 1`) or the extremal one (`H-ord = min(S-Sl, ord)`). When the
/// extremal identity holds with `H-ord < ord`, the Samuel slope is pinned exact.
pub fn cross_check_theorems(
    a: &LocalRingPresentation,
    germ: &Germ,
    at: &PointSpec,
    opts: &SamuelOptions,
    max_rounds: u32,
) -> Result<CheckReport, ElimError> {
    if a.point() != at {
        return Err(ElimError::Inconsistent("ring and check are at different points".into()));
    }
    let gens = a.ideal().generators();
    if gens.len() != 1 || gens[0].monic() != germ.poly.monic() {
        return Err(ElimError::Inconsistent("the ring is not defined by the germ".into()));
    }
    let [z] = germ.split.fiber() else {
        return Err(ElimError::Inconsistent("germs have one fiber variable".into()));
    };
    let p = a.field().characteristic();
    let degree = germ.poly.degree_in_var(*z).unwrap_or(0);
    let (h_ord, ord, slope_report) = if p != 0 && degree as u64 % p == 0 {
        let pres = build_p_presentation(&germ.poly, &germ.split, p)?;
        let report = clean(&pres, at, max_rounds)?;
        let h = report.h_ord.clone().expect("normal form");
        (h, report.elimination_order.clone(), Some(report))
    } else {
        // tame degree: the Tschirnhausen presentation already realizes H-ord
        let o = tschirnhausen_ord(&germ.poly, *z, at)?;
        (o.clone(), o, None)
    };
    let kernel = kernel_lambda(a, opts)?;
    let one = ExtendedRational::from_int(1);
    let closed = at.is_origin(a.nvars());
    let (theorem, pass, samuel, detail) = match kernel.class {
        KernelClass::NonExtremal => {
            let pass = h_ord == one && (!closed || ord == one);
            let detail = format!("H-ord = {h_ord}, ord = {ord}, closed point: {closed}");
            (Theorem::NonExtremal, pass, None, detail)
        }
        KernelClass::Extremal => {
            let mut s = samuel_slope(a, &[], &NubarStrategy::Auto(None), opts)?;
            let expected = s.lower_bound.clone().min(ord.clone());
            let pass = expected == h_ord;
            if pass && h_ord < ord {
                s.pin(&h_ord);
            }
            let detail = format!("min(S-Sl ≥ {}, ord = {ord}) = {expected}, H-ord = {h_ord}", s.lower_bound);
            (Theorem::Extremal, pass, Some(s), detail)
        }
        KernelClass::Unknown => return Err(ElimError::Samuel(SamuelError::UnknownKernel)),
    };
    Ok(CheckReport { theorem, kernel, h_ord, ord, samuel_slope: samuel, slope_report, pass, detail })
}

/// `u` times the identity on a fiber: `h(u z)/u^q`, still monic.
pub fn rescale_fiber(pres: &PPresentation, i: usize, u: &Rational) -> Result<PPresentation, ElimError> {
    let field = pres.field;
    let inv = field.inv(u).ok_or_else(|| ElimError::Inconsistent("zero unit".into()))?;
    let mut out = pres.clone();
    let f = &mut out.fibers[i];
    let q = f.degree();
    let scaled = Polynomial::term(field, Monomial::var(pres.nvars, f.var), u.clone());
    f.h = f.h.substitute(f.var, &scaled).scale(&field_pow(field, &inv, q));
    Ok(out)
}

fn field_pow(field: Field, x: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| field.mul(&acc, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;

    fn ring(names: &[&str], c: u64) -> Ring {
        Ring::new(names.to_vec(), Field::from_characteristic(c).unwrap()).unwrap()
    }

    fn rees(r: &Ring, gens: &[(&str, u32)]) -> ReesAlgebra {
        ReesAlgebra::new(r.field(), r.nvars(), gens.iter().map(|(g, n)| (r.parse(g).unwrap(), *n)).collect())
    }

    fn q(n: u64, d: u64) -> ExtendedRational {
        ExtendedRational::from_ratio(n, d)
    }

    #[test]
    fn sing_orders() {
        let r = ring(&["y"], 2);
        assert_eq!(sing_order(&rees(&r, &[("y^2", 1)]), &PointSpec::Origin), q(2, 1));
        for p in [2u64, 3, 5] {
            let r = ring(&["y1", "y2"], p);
            let g = rees(&r, &[(&format!("y1^{p}"), p as u32 - 1)]);
            assert_eq!(sing_order(&g, &PointSpec::CoordinatePrime(vec![0])), q(p, p - 1));
        }
        let r = ring(&["x", "y"], 0);
        assert_eq!(sing_order(&rees(&r, &[("x^2", 2), ("y^3", 3)]), &PointSpec::Origin), q(1, 1));
        assert_eq!(sing_order(&rees(&r, &[]), &PointSpec::Origin), ExtendedRational::Infinity);
    }

    #[test]
    fn saturation_examples() {
        let b = Budget::default();
        let r = ring(&["z", "y"], 2);
        let sat = diff_saturate_once(&rees(&r, &[("z^2 - y^3", 2)]), b).unwrap();
        assert_eq!(sat, rees(&r, &[("y^2", 1), ("z^2 + y^3", 2)]));
        for p in [2u64, 3, 5] {
            let r = ring(&["x", "y1", "y2"], p);
            let g = rees(&r, &[(&format!("x^{p} - y1^{p}*y2"), p as u32)]);
            let sat = diff_saturate_once(&g, b).unwrap();
            let want = rees(&r, &[(&format!("y1^{p}"), p as u32 - 1), (&format!("x^{p} - y1^{p}*y2"), p as u32)]);
            assert_eq!(sat.generators().len(), 2, "p = {p}");
            for (f, n) in want.generators() {
                assert!(sat.generators().contains(&(f.monic(), *n)), "p = {p}");
            }
        }
        let r = ring(&["x"], 0);
        let sat = diff_saturate_once(&rees(&r, &[("x^2", 2)]), b).unwrap();
        assert_eq!(sat, rees(&r, &[("x", 1), ("x^2", 2)]));
    }

    #[test]
    fn saturation_preserves_order() {
        let b = Budget::default();
        let r = ring(&["z", "y1", "y2"], 3);
        let g = rees(&r, &[("z^3 + y1^3*y2^2 + y1^5", 3), ("y1^3*y2", 2)]);
        let sat = diff_saturate_once(&g, b).unwrap();
        let one = ExtendedRational::from_int(1);
        let mut singular = 0;
        for at in [
            PointSpec::Origin,
            PointSpec::CoordinatePrime(vec![0, 1]),
            PointSpec::CoordinatePrime(vec![0, 2]),
            PointSpec::CoordinatePrime(vec![1]),
        ] {
            if sing_order(&g, &at) >= one {
                singular += 1;
                assert_eq!(sing_order(&sat, &at), sing_order(&g, &at), "{at:?}");
            }
        }
        assert_eq!(singular, 2);
    }

    #[test]
    fn p_presentations() {
        let r = ring(&["z", "y"], 2);
        let split = VariableSplit::new(2, vec![0]).unwrap();
        let p6 = build_p_presentation(&r.parse("z^6").unwrap(), &split, 2).unwrap();
        assert_eq!(p6.fibers()[0].h, r.parse("z^2").unwrap());
        let p6y = build_p_presentation(&r.parse("z^6 + y^5").unwrap(), &split, 2).unwrap();
        assert_eq!(p6y.fibers()[0].h, r.parse("z^2").unwrap());
        let g = r.parse("z^4 + y*z^2 + y^3").unwrap();
        let once = build_p_presentation(&g, &split, 2).unwrap();
        assert_eq!(once.fibers()[0].h, g);
        let twice = build_p_presentation(&once.fibers()[0].h, &split, 2).unwrap();
        assert_eq!(twice, once);
        assert_eq!(
            build_p_presentation(&r.parse("y*z^2").unwrap(), &split, 2),
            Err(ElimError::NotMonic)
        );
        assert!(matches!(build_p_presentation(&r.parse("z^3 + y").unwrap(), &split, 2), Err(ElimError::BadDegree(_))));
    }

    #[test]
    fn elimination_examples() {
        let r = ring(&["z", "y"], 2);
        let split = VariableSplit::new(2, vec![0]).unwrap();
        let cusp = build_p_presentation(&r.parse("z^2 + y^3").unwrap(), &split, 2).unwrap();
        assert_eq!(cusp.elimination(), &[(r.parse("y^2").unwrap(), 1)]);
        let bare = build_p_presentation(&r.parse("z^2").unwrap(), &split, 2).unwrap();
        assert!(bare.elimination().is_empty());
        for p in [2u64, 3, 5] {
            let r = ring(&["x", "y1", "y2"], p);
            let split = VariableSplit::new(3, vec![0]).unwrap();
            let w = build_p_presentation(&r.parse(&format!("x^{p} - y1^{p}*y2")).unwrap(), &split, p).unwrap();
            assert_eq!(w.elimination(), &[(r.parse(&format!("y1^{p}")).unwrap(), p as u32 - 1)]);
        }
    }

    #[test]
    fn slopes_and_cleaning() {
        let r = ring(&["z", "y"], 2);
        let split = VariableSplit::new(2, vec![0]).unwrap();
        let cusp = build_p_presentation(&r.parse("z^2 + y^3").unwrap(), &split, 2).unwrap();
        let s = clean(&cusp, &PointSpec::Origin, DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!((s.slope.clone(), s.elimination_order.clone(), s.case, s.rounds), (q(3, 2), q(2, 1), Case::B1, 0));
        assert_eq!(s.h_ord, Some(q(3, 2)));

        for p in [2u64, 3, 5] {
            let r = ring(&["x", "y1", "y2"], p);
            let split = VariableSplit::new(3, vec![0]).unwrap();
            let w = build_p_presentation(&r.parse(&format!("x^{p} - y1^{p}*y2")).unwrap(), &split, p).unwrap();
            let s = clean(&w, &PointSpec::CoordinatePrime(vec![0, 1]), DEFAULT_MAX_ROUNDS).unwrap();
            assert_eq!(s.h_ord, Some(q(1, 1)));
            assert_eq!(s.elimination_order, q(p, p - 1));
            assert_eq!(s.case, Case::B2);
        }

        let r = ring(&["z", "y1", "y2"], 2);
        let split = VariableSplit::new(3, vec![0]).unwrap();
        let h = build_p_presentation(&r.parse("z^2 + y1^2*y2^2 + y1^5").unwrap(), &split, 2).unwrap();
        let first = slope(&h, &PointSpec::Origin).unwrap();
        assert_eq!((first.slope.clone(), first.case), (q(2, 1), Case::B3));
        let s = clean(&h, &PointSpec::Origin, DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!(s.rounds, 1);
        assert_eq!(s.presentation.fibers()[0].h, r.parse("z^2 + y1^5").unwrap());
        assert_eq!((s.h_ord.clone(), s.elimination_order.clone(), s.case), (Some(q(5, 2)), q(4, 1), Case::B1));
        assert!(s.slope >= first.slope);

        for p in [2u64, 3] {
            let r = ring(&["z", "y"], p);
            let split = VariableSplit::new(2, vec![0]).unwrap();
            let d = build_p_presentation(&r.parse(&format!("z^{p} + y^{p}")).unwrap(), &split, p).unwrap();
            let s = clean(&d, &PointSpec::Origin, DEFAULT_MAX_ROUNDS).unwrap();
            assert!(s.degenerate);
            assert_eq!(s.h_ord, Some(ExtendedRational::Infinity));
            assert_eq!(s.presentation.fibers()[0].h, r.parse(&format!("z^{p}")).unwrap());
        }
    }

    #[test]
    fn point_must_be_singular() {
        let r = ring(&["z", "y"], 2);
        let split = VariableSplit::new(2, vec![0]).unwrap();
        let smooth = build_p_presentation(&r.parse("z^2 + y").unwrap(), &split, 2).unwrap();
        assert!(matches!(slope(&smooth, &PointSpec::Origin), Err(ElimError::PointNotSingular(_))));
        assert_eq!(slope(&smooth, &PointSpec::CoordinatePrime(vec![1])), Err(ElimError::PointMissingFiber));
    }

    #[test]
    fn rescaling_keeps_case_and_h_ord() {
        let r = ring(&["z", "y1", "y2"], 3);
        let split = VariableSplit::new(3, vec![0]).unwrap();
        for g in ["z^3 + y1^4", "z^3 + y1^3*y2^3 + y1^7", "z^3 - y1^3*y2"] {
            let pres = build_p_presentation(&r.parse(g).unwrap(), &split, 3).unwrap();
            let scaled = rescale_fiber(&pres, 0, &Rational::from_integer(2.into())).unwrap();
            let a = clean(&pres, &PointSpec::Origin, DEFAULT_MAX_ROUNDS).unwrap();
            let b = clean(&scaled, &PointSpec::Origin, DEFAULT_MAX_ROUNDS).unwrap();
            assert_eq!((a.case, a.h_ord), (b.case, b.h_ord), "{g}");
        }
    }

    #[test]
    fn tschirnhausen_examples() {
        let r = ring(&["z", "y"], 0);
        let o = |s: &str| tschirnhausen_ord(&r.parse(s).unwrap(), 0, &PointSpec::Origin).unwrap();
        assert_eq!(o("z^2 - y^3"), q(3, 2));
        assert_eq!(o("z^2 + 2*y*z + y^3 + y^2"), q(3, 2));
        assert_eq!(o("z^2 - y^2"), q(1, 1));
        let r2 = ring(&["z", "y"], 2);
        assert_eq!(
            tschirnhausen_ord(&r2.parse("z^2 + y^3").unwrap(), 0, &PointSpec::Origin),
            Err(ElimError::CharDividesDegree)
        );
    }

    fn check(names: &[&str], c: u64, f: &str, at: PointSpec) -> CheckReport {
        let r = ring(names, c);
        let poly = r.parse(f).unwrap();
        let a = LocalRingPresentation::new(r.clone(), vec![poly.clone()], at.clone()).unwrap();
        let germ = Germ { poly, split: VariableSplit::new(r.nvars(), vec![0]).unwrap() };
        let opts = SamuelOptions { budget: Budget::default(), ..SamuelOptions::default() };
        cross_check_theorems(&a, &germ, &at, &opts, DEFAULT_MAX_ROUNDS).unwrap()
    }

    #[test]
    fn theorem_checks() {
        let cusp2 = check(&["z", "y"], 2, "z^2 + y^3", PointSpec::Origin);
        assert!(cusp2.pass, "{}", cusp2.detail);
        assert_eq!(cusp2.theorem, Theorem::Extremal);
        let s = cusp2.samuel_slope.unwrap();
        assert_eq!((s.lower_bound, s.exact), (q(3, 2), true));

        let node3 = check(&["x", "y"], 3, "x^2 - y^2", PointSpec::Origin);
        assert!(node3.pass && node3.theorem == Theorem::NonExtremal);

        let whitney = check(&["x", "y1", "y2"], 2, "x^2 - y1^2*y2", PointSpec::CoordinatePrime(vec![0, 1]));
        assert!(whitney.pass && whitney.theorem == Theorem::NonExtremal);
        assert_eq!((whitney.h_ord, whitney.ord), (q(1, 1), q(2, 1)));
    }
}
