//! The Samuel function of a local ring `A = k[x]/J` at a point: the order
//! `ν_I` by ideal membership, the asymptotic function `ν̄_I` by three
//! strategies, graded pieces `I^(≥b)`, the kernel of
//! `λ_m : m/m² → m^(≥1)/m^(>1)`, and the Samuel slope.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ExtendedRational, Field, Rational};
use crate::groebner::{
    buchberger, monomial_dimension, quotient_dimension, radical_member, Budget, GroebnerBasis,
    GroebnerError, IdealPresentation, MonomialOrder, TruncatedBasis,
};
use crate::newton::{self, MonomialValuation, NewtonError};
use crate::poly::{Monomial, PolyError, Polynomial, Ring};

pub const DEFAULT_NU_CAP: u32 = 24;
pub const DEFAULT_LIMIT_N: u32 = 20;
/// Largest number of projective linear forms the 𝔽_p enumeration will test.
pub const ENUMERATION_CAP: u64 = 400;
/// Largest number of candidate sequences tried by automatic translation.
pub const TRANSLATION_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamuelError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("generator does not vanish at the point: {0}")]
    NotAtPoint(String),
    #[error("certificate rejected: {0}")]
    CertificateRejected(String),
    #[error("only a lower bound for ν̄ is available")]
    InexactNubar,
    #[error("no exact method applies to the kernel of λ")]
    UnknownKernel,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("not a λ-sequence: {0}")]
    NotALambdaSequence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("expected {expected} elements, got {got}")]
    WrongCount { expected: usize, got: usize },
}

/// Closed point or coordinate prime at which a ring or algebra is localized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointSpec {
    Origin,
    CoordinatePrime(Vec<usize>),
}

impl PointSpec {
    /// Variables generating the point's prime; all of them at the origin.
    pub fn variables(&self, nvars: usize) -> Vec<usize> {
        match self {
            PointSpec::Origin => (0..nvars).collect(),
            PointSpec::CoordinatePrime(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }

    pub fn is_origin(&self, nvars: usize) -> bool {
        self.variables(nvars).len() == nvars
    }

    pub fn ideal(&self, field: Field, nvars: usize) -> IdealPresentation {
        IdealPresentation::coordinate(field, nvars, &self.variables(nvars))
    }

    /// Order of `f` at the point: lowest degree in the point's variables.
    pub fn order(&self, f: &Polynomial) -> ExtendedRational {
        match f.order_in(&self.variables(f.nvars())) {
            None => ExtendedRational::Infinity,
            Some(d) => ExtendedRational::from_int(d as u64),
        }
    }
}

/// `A = k[x]/J` localized at a point. Every generator of `J` vanishes there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRingPresentation {
    ring: Ring,
    ideal: IdealPresentation,
    point: PointSpec,
}

impl LocalRingPresentation {
    pub fn new(ring: Ring, generators: Vec<Polynomial>, point: PointSpec) -> Result<Self, SamuelError> {
        let vars = point.variables(ring.nvars());
        for g in &generators {
            if g.order_in(&vars).is_some_and(|d| d == 0) {
                return Err(SamuelError::NotAtPoint(ring.format(g)));
            }
        }
        let ideal = IdealPresentation::new(ring.field(), ring.nvars(), generators);
        Ok(LocalRingPresentation { ring, ideal, point })
    }

    pub fn at_origin(ring: Ring, generators: Vec<Polynomial>) -> Result<Self, SamuelError> {
        Self::new(ring, generators, PointSpec::Origin)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ideal(&self) -> &IdealPresentation {
        &self.ideal
    }

    pub fn point(&self) -> &PointSpec {
        &self.point
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn point_vars(&self) -> Vec<usize> {
        self.point.variables(self.nvars())
    }

    pub fn maximal_ideal(&self) -> IdealPresentation {
        self.point.ideal(self.field(), self.nvars())
    }

    /// Initial forms of the supplied generators with respect to the point.
    pub fn tangent_cone_ideal(&self) -> IdealPresentation {
        let vars = self.point_vars();
        self.ideal.map(|g| g.initial_form_in(&vars).expect("nonzero generator"))
    }

    /// The tangent cone from supplied generators is the true one for
    /// principal and monomial ideals.
    pub fn tangent_cone_exact(&self) -> bool {
        self.ideal.generators().len() <= 1 || self.ideal.is_monomial()
    }

    fn require_origin(&self, what: &str) -> Result<(), SamuelError> {
        if self.point.is_origin(self.nvars()) {
            Ok(())
        } else {
            Err(SamuelError::Unsupported(format!("{what} at a non-closed point")))
        }
    }
}

#[derive(Clone, Debug)]
pub struct SamuelOptions {
    pub budget: Budget,
    pub nu_cap: u32,
    pub limit_n: u32,
    pub auto_translate: bool,
    pub allow_partial_kernel: bool,
}

impl Default for SamuelOptions {
    fn default() -> Self {
        SamuelOptions {
            budget: Budget::from_env(),
            nu_cap: DEFAULT_NU_CAP,
            limit_n: DEFAULT_LIMIT_N,
            auto_translate: true,
            allow_partial_kernel: false,
        }
    }
}

/// `ν_I(f)`: exact below the cap, otherwise a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NuValue {
    Exact(u32),
    Infinite,
    AtLeast(u32),
}

impl NuValue {
    pub fn lower_bound(&self) -> ExtendedRational {
        match *self {
            NuValue::Exact(k) | NuValue::AtLeast(k) => ExtendedRational::from_int(k as u64),
            NuValue::Infinite => ExtendedRational::Infinity,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, NuValue::AtLeast(_))
    }
}

impl std::fmt::Display for NuValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NuValue::Exact(k) => write!(f, "{k}"),
            NuValue::Infinite => write!(f, "inf"),
            NuValue::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

/// Membership in `I^j + J`, with one cached Gröbner basis per `j`.
pub struct NuEngine<'a> {
    ring: &'a LocalRingPresentation,
    ideal: IdealPresentation,
    budget: Budget,
    coordinate: Option<Vec<usize>>,
    ladder: BTreeMap<u32, Rung>,
    defining: Option<GroebnerBasis>,
}

enum Rung {
    Global(GroebnerBasis),
    Truncated(TruncatedBasis),
}

impl<'a> NuEngine<'a> {
    pub fn new(ring: &'a LocalRingPresentation, ideal: IdealPresentation, budget: Budget) -> Self {
        let coordinate = coordinate_variables(&ideal);
        NuEngine { ring, ideal, budget, coordinate, ladder: BTreeMap::new(), defining: None }
    }

    fn power_plus_defining(&self, j: u32) -> IdealPresentation {
        let power = match &self.coordinate {
            Some(vars) => monomials_of_degree(self.ring.field(), self.ring.nvars(), vars, j),
            None => crate::groebner::ideal_power(&self.ideal, j),
        };
        power.sum(self.ring.ideal())
    }

    fn member(&mut self, f: &Polynomial, j: u32) -> Result<bool, SamuelError> {
        if j == 0 {
            return Ok(true);
        }
        if !self.ladder.contains_key(&j) {
            let all_vars = self.coordinate.as_ref().is_some_and(|v| v.len() == self.ring.nvars());
            let rung = if all_vars {
                Rung::Truncated(TruncatedBasis::new(self.ring.ideal().generators(), j, self.budget)?)
            } else {
                Rung::Global(buchberger(&self.power_plus_defining(j), MonomialOrder::GRevLex, self.budget)?)
            };
            self.ladder.insert(j, rung);
        }
        Ok(match &self.ladder[&j] {
            Rung::Global(gb) => gb.contains(f),
            Rung::Truncated(tb) => tb.contains(f),
        })
    }

    /// `f ∈ J`, i.e. `f = 0` in `A`.
    pub fn vanishes(&mut self, f: &Polynomial) -> Result<bool, SamuelError> {
        if f.is_zero() {
            return Ok(true);
        }
        if self.defining.is_none() {
            self.defining = Some(buchberger(self.ring.ideal(), MonomialOrder::GRevLex, self.budget)?);
        }
        Ok(self.defining.as_ref().expect("set above").contains(f))
    }

    pub fn nu(&mut self, f: &Polynomial, cap: u32) -> Result<NuValue, SamuelError> {
        self.nu_from(f, 0, cap)
    }

    /// As `nu`, given that `f ∈ I^lower + J` is already known.
    pub fn nu_from(&mut self, f: &Polynomial, lower: u32, cap: u32) -> Result<NuValue, SamuelError> {
        if self.vanishes(f)? {
            return Ok(NuValue::Infinite);
        }
        for j in lower.max(1)..=cap {
            if !self.member(f, j)? {
                return Ok(NuValue::Exact(j - 1));
            }
        }
        Ok(NuValue::AtLeast(cap))
    }
}

fn coordinate_variables(ideal: &IdealPresentation) -> Option<Vec<usize>> {
    let mut vars = Vec::new();
    for g in ideal.generators() {
        if !g.is_monomial() || g.total_degree() != Some(1) {
            return None;
        }
        vars.push(g.variables()[0]);
    }
    vars.sort_unstable();
    vars.dedup();
    Some(vars)
}

/// All monomials of degree `d` in `vars`: the `d`-th power of their ideal.
fn monomials_of_degree(field: Field, nvars: usize, vars: &[usize], d: u32) -> IdealPresentation {
    let mut out = Vec::new();
    fn rec(vars: &[usize], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => {
                if left == 0 {
                    out.push(Monomial::new(cur.clone()));
                }
            }
            Some((&v, rest)) => {
                for e in (0..=left).rev() {
                    cur[v] = e;
                    rec(rest, left - e, cur, out);
                }
                cur[v] = 0;
            }
        }
    }
    let mut cur = vec![0; nvars];
    rec(vars, d, &mut cur, &mut out);
    IdealPresentation::new(
        field,
        nvars,
        out.into_iter().map(|m| Polynomial::term(field, m, Rational::one())).collect(),
    )
}

pub fn nu(
    a: &LocalRingPresentation,
    f: &Polynomial,
    ideal: &IdealPresentation,
    cap: u32,
    budget: Budget,
) -> Result<NuValue, SamuelError> {
    a.require_origin("ν")?;
    NuEngine::new(a, ideal.clone(), budget).nu(f, cap)
}

/// A monomial valuation after an optional coordinate change, with the value
/// it is claimed to take on the ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedValuation {
    pub valuation: MonomialValuation,
    pub ideal_value: Rational,
}

/// Valuations witnessing `ν̄`. Translations `x_v ↦ x_v + s` are applied in
/// order to `f`, `I` and `J` before evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValuationCertificate {
    pub valuations: Vec<CertifiedValuation>,
    pub translations: Vec<(usize, Polynomial)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NubarStrategy {
    Monomial,
    Certificate(ValuationCertificate),
    Limit,
    /// Monomial when `J = 0` and `I` is monomial, then the certificate if any, then the limit.
    Auto(Option<ValuationCertificate>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NubarStatus {
    Exact,
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NubarSource {
    Monomial,
    Certificate,
    Limit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NubarResult {
    pub value: ExtendedRational,
    pub status: NubarStatus,
    pub source: NubarSource,
    /// `(n, ν(fⁿ))` for the limit strategy.
    pub trace: Vec<(u32, NuValue)>,
    pub limit_lower_bound: Option<ExtendedRational>,
}

impl NubarResult {
    pub fn is_exact(&self) -> bool {
        self.status == NubarStatus::Exact
    }
}

pub fn nubar(
    a: &LocalRingPresentation,
    f: &Polynomial,
    ideal: &IdealPresentation,
    strategy: &NubarStrategy,
    opts: &SamuelOptions,
) -> Result<NubarResult, SamuelError> {
    a.require_origin("ν̄")?;
    let mut engine = NuEngine::new(a, ideal.clone(), opts.budget);
    nubar_with(&mut engine, f, strategy, opts)
}

/// As `nubar`, reusing the membership ladder of `engine`.
pub fn nubar_with(
    engine: &mut NuEngine<'_>,
    f: &Polynomial,
    strategy: &NubarStrategy,
    opts: &SamuelOptions,
) -> Result<NubarResult, SamuelError> {
    let a = engine.ring;
    let ideal = &engine.ideal.clone();
    a.require_origin("ν̄")?;
    if f.is_zero() {
        return Ok(NubarResult {
            value: ExtendedRational::Infinity,
            status: NubarStatus::Exact,
            source: NubarSource::Monomial,
            trace: Vec::new(),
            limit_lower_bound: None,
        });
    }
    match strategy {
        NubarStrategy::Monomial => nubar_monomial(a, f, ideal),
        NubarStrategy::Certificate(c) => nubar_certificate(engine, f, ideal, c, opts),
        NubarStrategy::Limit => nubar_limit(engine, f, opts),
        NubarStrategy::Auto(cert) => {
            if a.ideal().is_zero_ideal() && ideal.is_monomial() {
                nubar_monomial(a, f, ideal)
            } else if let Some(c) = cert {
                nubar_certificate(engine, f, ideal, c, opts)
            } else {
                nubar_limit(engine, f, opts)
            }
        }
    }
}

fn nubar_monomial(
    a: &LocalRingPresentation,
    f: &Polynomial,
    ideal: &IdealPresentation,
) -> Result<NubarResult, SamuelError> {
    if !a.ideal().is_zero_ideal() {
        return Err(SamuelError::NotApplicable("monomial strategy needs a polynomial ring".into()));
    }
    Ok(NubarResult {
        value: newton::nubar_monomial(ideal, f)?,
        status: NubarStatus::Exact,
        source: NubarSource::Monomial,
        trace: Vec::new(),
        limit_lower_bound: None,
    })
}

/// `max_{n ≤ N} ν(fⁿ)/n`, a lower bound since `ν(f^{ab}) ≥ a·ν(f^b)`.
/// Exact only when `f` is nilpotent in `A`.
fn nubar_limit(engine: &mut NuEngine<'_>, f: &Polynomial, opts: &SamuelOptions) -> Result<NubarResult, SamuelError> {
    let a = engine.ring;
    let mut best = ExtendedRational::zero();
    let mut trace = Vec::new();
    let mut power = Polynomial::one(a.field(), a.nvars());
    let mut first: Option<u32> = None;
    let mut prev: u32 = 0;
    for n in 1..=opts.limit_n.max(1) {
        power = &power * f;
        // superadditivity: ν(fⁿ) ≥ ν(fⁿ⁻¹) + ν(f)
        let lower = prev + first.unwrap_or(0);
        let v = engine.nu_from(&power, lower, opts.nu_cap)?;
        trace.push((n, v));
        match v {
            NuValue::Infinite => {
                return Ok(NubarResult {
                    value: ExtendedRational::Infinity,
                    status: NubarStatus::Exact,
                    source: NubarSource::Limit,
                    trace,
                    limit_lower_bound: Some(ExtendedRational::Infinity),
                });
            }
            NuValue::Exact(k) => {
                best = best.max(ExtendedRational::from_ratio(k as u64, n as u64));
                first.get_or_insert(k);
                prev = k;
            }
            NuValue::AtLeast(k) => {
                best = best.max(ExtendedRational::from_ratio(k as u64, n as u64));
                break;
            }
        }
    }
    Ok(NubarResult {
        value: best.clone(),
        status: NubarStatus::LowerBound,
        source: NubarSource::Limit,
        trace,
        limit_lower_bound: Some(best),
    })
}

fn apply_translations(f: &Polynomial, translations: &[(usize, Polynomial)]) -> Result<Polynomial, SamuelError> {
    let mut g = f.clone();
    for (v, s) in translations {
        g = g.translate(*v, s)?;
    }
    Ok(g)
}

/// Value of the weight filtration on `A` induced by `w`, for `w`-homogeneous `J`:
/// the least weight of a component of `f` not in `J`.
fn filtration_value(w: &MonomialValuation, f: &Polynomial, gb: &GroebnerBasis) -> ExtendedRational {
    let mut parts: BTreeMap<Rational, Polynomial> = BTreeMap::new();
    for (m, c) in f.terms() {
        parts
            .entry(w.monomial_value(m))
            .or_insert_with(|| Polynomial::zero(f.field(), f.nvars()))
            .add_term(m.clone(), c.clone());
    }
    parts
        .into_iter()
        .find(|(_, p)| !gb.contains(p))
        .map(|(d, _)| ExtendedRational::finite(d))
        .unwrap_or(ExtendedRational::Infinity)
}

fn is_weighted_homogeneous(w: &MonomialValuation, g: &Polynomial) -> bool {
    let mut vals = g.monomials().map(|m| w.monomial_value(m));
    match vals.next() {
        None => true,
        Some(v) => vals.all(|u| u == v),
    }
}

/// Accepted when every weight is positive on the point's variables, `J` is
/// weighted homogeneous after the translations, the claimed ideal values are
/// the computed ones, and the limit lower bound does not exceed the value.
fn nubar_certificate(
    engine: &mut NuEngine<'_>,
    f: &Polynomial,
    ideal: &IdealPresentation,
    cert: &ValuationCertificate,
    opts: &SamuelOptions,
) -> Result<NubarResult, SamuelError> {
    let a = engine.ring;
    if cert.valuations.is_empty() {
        return Err(SamuelError::CertificateRejected("no valuations".into()));
    }
    let tf = apply_translations(f, &cert.translations)?;
    let tj: Vec<Polynomial> = a
        .ideal()
        .generators()
        .iter()
        .map(|g| apply_translations(g, &cert.translations))
        .collect::<Result<_, _>>()?;
    let ti: Vec<Polynomial> =
        ideal.generators().iter().map(|g| apply_translations(g, &cert.translations)).collect::<Result<_, _>>()?;
    let tj_ideal = IdealPresentation::new(a.field(), a.nvars(), tj);
    let gb = buchberger(&tj_ideal, MonomialOrder::GRevLex, opts.budget)?;
    let mut value = ExtendedRational::Infinity;
    for cv in &cert.valuations {
        let w = &cv.valuation;
        if w.weights.len() != a.nvars() {
            return Err(SamuelError::CertificateRejected("weight vector has the wrong length".into()));
        }
        if !w.is_nonnegative() || a.point_vars().iter().any(|&v| w.weights[v].is_zero()) {
            return Err(SamuelError::CertificateRejected("weights must be positive on the maximal ideal".into()));
        }
        if let Some(g) = tj_ideal.generators().iter().find(|g| !is_weighted_homogeneous(w, g)) {
            return Err(SamuelError::CertificateRejected(format!(
                "defining generator {} is not weighted homogeneous",
                a.ring().format(g)
            )));
        }
        let ideal_value = ti
            .iter()
            .map(|g| filtration_value(w, g, &gb))
            .min()
            .unwrap_or(ExtendedRational::Infinity);
        if ideal_value != ExtendedRational::finite(cv.ideal_value.clone()) {
            return Err(SamuelError::CertificateRejected(format!(
                "claimed ideal value {} but computed {}",
                ExtendedRational::finite(cv.ideal_value.clone()),
                ideal_value
            )));
        }
        if cv.ideal_value.is_zero() {
            return Err(SamuelError::CertificateRejected("ideal value must be positive".into()));
        }
        value = value.min(filtration_value(w, &tf, &gb).div_rational(&cv.ideal_value));
    }
    let limit = nubar_limit(engine, f, opts)?;
    if limit.value > value {
        return Err(SamuelError::CertificateRejected(format!(
            "limit lower bound {} exceeds certified value {}",
            limit.value, value
        )));
    }
    Ok(NubarResult {
        value,
        status: NubarStatus::Exact,
        source: NubarSource::Certificate,
        trace: limit.trace,
        limit_lower_bound: Some(limit.value),
    })
}

/// `f ∈ I^(≥b)` (or `I^(>b)` when strict); needs an exact `ν̄`.
pub fn graded_piece_member(
    a: &LocalRingPresentation,
    f: &Polynomial,
    ideal: &IdealPresentation,
    b: &Rational,
    strict: bool,
    strategy: &NubarStrategy,
    opts: &SamuelOptions,
) -> Result<bool, SamuelError> {
    if !strict && b.is_zero() {
        return Ok(true);
    }
    let r = nubar(a, f, ideal, strategy, opts)?;
    let b = ExtendedRational::finite(b.clone());
    if !r.is_exact() {
        // a lower bound can still settle membership
        if r.value > b || (!strict && r.value == b) {
            return Ok(true);
        }
        return Err(SamuelError::InexactNubar);
    }
    Ok(if strict { r.value > b } else { r.value >= b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelClass {
    Extremal,
    NonExtremal,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelMethod {
    Factorization,
    Monomial,
    #[serde(rename = "enumeration-fp")]
    Enumeration,
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    /// Linear forms in the point's variables whose classes span `ker(λ_m)`.
    pub basis: Vec<Polynomial>,
    pub r: usize,
    pub t: usize,
    pub dim: usize,
    pub embedding_dim: usize,
    pub class: KernelClass,
    pub method: KernelMethod,
    /// False when the tangent cone was taken from non-principal, non-monomial generators.
    pub tangent_cone_exact: bool,
}

impl KernelReport {
    pub fn is_extremal(&self) -> bool {
        self.class == KernelClass::Extremal
    }
}

fn split_exponents(m: &Monomial, vars: &[usize]) -> (Vec<u32>, Monomial) {
    let s: Vec<u32> = vars.iter().map(|&v| m.exponents()[v]).collect();
    let mut rest = m.clone();
    for &v in vars {
        rest.set(v, 0);
    }
    (s, rest)
}

/// Coefficient (free of `vars`) of the monomial in `vars` with exponents `exps`.
fn coefficient_at(f: &Polynomial, vars: &[usize], exps: &[u32]) -> Polynomial {
    let mut out = Polynomial::zero(f.field(), f.nvars());
    for (m, c) in f.terms() {
        let (s, rest) = split_exponents(m, vars);
        if s == exps {
            out.add_term(rest, c.clone());
        }
    }
    out
}

/// Coordinates of the degree-one part of `f` in `vars`.
pub fn linear_coordinates(f: &Polynomial, vars: &[usize]) -> Vec<Polynomial> {
    (0..vars.len())
        .map(|k| {
            let mut e = vec![0; vars.len()];
            e[k] = 1;
            coefficient_at(f, vars, &e)
        })
        .collect()
}

/// Rank over the fraction field of the coefficient ring, by fraction-free elimination.
pub fn rank_over_fractions(rows: &[Vec<Polynomial>]) -> usize {
    let mut rows: Vec<Vec<Polynomial>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in 0..ncols {
                let v = &(&row[j] * &pivot[c]) - &(&pivot[j] * &factor);
                row[j] = v;
            }
        }
        rank += 1;
    }
    rank
}

fn replace_exponents(f: &Polynomial, vars: &[usize], map: impl Fn(u32) -> Option<u32>) -> Option<Polynomial> {
    let mut out = Polynomial::zero(f.field(), f.nvars());
    for (m, c) in f.terms() {
        let mut m2 = m.clone();
        for &v in vars {
            m2.set(v, map(m.exponents()[v])?);
        }
        out.add_term(m2, c.clone());
    }
    Some(out)
}

/// For `F` homogeneous of degree `m ≥ 1` in `vars` (coefficients in the other
/// variables), a linear form `ℓ` with `F = c·ℓ^m` over the fraction field of
/// the coefficients, if one exists.
pub fn power_of_linear_form(form: &Polynomial, vars: &[usize]) -> Option<Polynomial> {
    let field = form.field();
    let n = form.nvars();
    let m = form.order_in(vars)?;
    if m == 0 || form.component_in(vars, m) != *form {
        return None;
    }
    let (q, e) = match field {
        Field::Rational => (1, 0),
        Field::Prime(p) => {
            let (mut q, mut e) = (1u32, 0u32);
            while m % (q * p as u32) == 0 {
                q *= p as u32;
                e += 1;
            }
            (q, e)
        }
    };
    let mprime = m / q;
    // F(x) = G(x^q) with G of degree m' in vars
    let g = replace_exponents(form, vars, |x| (x % q == 0).then_some(x / q))?;
    let unit = |k: usize, d: u32| {
        let mut v = vec![0; vars.len()];
        v[k] = d;
        v
    };
    let lead = (0..vars.len()).find(|&k| !coefficient_at(&g, vars, &unit(k, mprime)).is_zero())?;
    let c = coefficient_at(&g, vars, &unit(lead, mprime));
    let inv_m = field.inv(&field.from_int(mprime as i64)).expect("m' is a unit");
    let mut lin = c.mul_monomial(&Monomial::var(n, vars[lead]), &Rational::one());
    let mut coeffs = Vec::new();
    for k in 0..vars.len() {
        if k == lead {
            continue;
        }
        let mut ex = unit(lead, mprime - 1);
        ex[k] += 1;
        let e_k = coefficient_at(&g, vars, &ex).scale(&inv_m);
        lin = &lin + &e_k.mul_monomial(&Monomial::var(n, vars[k]), &Rational::one());
        coeffs.push((k, e_k));
    }
    // c^{m'-1} G == (c X_lead + Σ e_k/m' X_k)^{m'}
    if &c.pow(mprime - 1) * &g != lin.pow(mprime) {
        return None;
    }
    if q == 1 {
        return Some(lin);
    }
    // ℓ = c x_lead + Σ (e_k c^{q-1} / m')^{1/q} x_k
    let cq = c.pow(q - 1);
    let mut ell = c.mul_monomial(&Monomial::var(n, vars[lead]), &Rational::one());
    for (k, e_k) in coeffs {
        let root = (&e_k * &cq).pth_power_root(e)?;
        ell = &ell + &root.mul_monomial(&Monomial::var(n, vars[k]), &Rational::one());
    }
    Some(ell)
}

fn linear_parts(a: &LocalRingPresentation) -> Vec<Vec<Polynomial>> {
    let vars = a.point_vars();
    a.ideal()
        .generators()
        .iter()
        .filter(|g| g.order_in(&vars) == Some(1))
        .map(|g| linear_coordinates(g, &vars))
        .collect()
}

fn local_dimension(a: &LocalRingPresentation, budget: Budget) -> Result<usize, SamuelError> {
    let vars = a.point_vars();
    let ideal = a.ideal();
    if ideal.is_zero_ideal() {
        return Ok(vars.len());
    }
    if ideal.is_principal() {
        return Ok(vars.len() - 1);
    }
    if ideal.is_monomial() {
        let field = a.field();
        let restricted: Vec<Polynomial> = ideal
            .generators()
            .iter()
            .map(|g| {
                let (s, _) = split_exponents(g.monomials().next().expect("monomial"), &vars);
                Polynomial::term(field, Monomial::new(s), Rational::one())
            })
            .collect();
        let d = monomial_dimension(&IdealPresentation::new(field, vars.len(), restricted))?;
        return Ok(d.max(0) as usize);
    }
    a.require_origin("dimension of a non-principal, non-monomial ideal")?;
    Ok(quotient_dimension(&a.tangent_cone_ideal(), budget)?.max(0) as usize)
}

/// Kernel of `λ_m` with the first applicable exact method.
pub fn kernel_lambda(a: &LocalRingPresentation, opts: &SamuelOptions) -> Result<KernelReport, SamuelError> {
    let ideal = a.ideal();
    let method = if ideal.is_principal() {
        KernelMethod::Factorization
    } else if ideal.is_monomial() {
        KernelMethod::Monomial
    } else if enumeration_applies(a) {
        KernelMethod::Enumeration
    } else if opts.allow_partial_kernel {
        KernelMethod::Partial
    } else {
        return Err(SamuelError::UnknownKernel);
    };
    kernel_lambda_with(a, method, &[], opts)
}

fn enumeration_applies(a: &LocalRingPresentation) -> bool {
    let n = a.point_vars().len() as u32;
    match a.field() {
        Field::Prime(p) => {
            a.point.is_origin(a.nvars()) && n <= 3 && (p.pow(n) - 1) / (p - 1) <= ENUMERATION_CAP
        }
        Field::Rational => false,
    }
}

/// Kernel of `λ_m` by a chosen method. `candidates` are extra linear forms
/// tested by the partial method.
pub fn kernel_lambda_with(
    a: &LocalRingPresentation,
    method: KernelMethod,
    candidates: &[Polynomial],
    opts: &SamuelOptions,
) -> Result<KernelReport, SamuelError> {
    let vars = a.point_vars();
    let field = a.field();
    let n = a.nvars();
    let lin = linear_parts(a);
    let lin_rank = rank_over_fractions(&lin);
    let embedding_dim = vars.len() - lin_rank;
    let dim = local_dimension(a, opts.budget)?;
    let t = embedding_dim.saturating_sub(dim);

    let nilpotent: Vec<Polynomial> = match method {
        KernelMethod::Factorization => {
            if !a.ideal().is_principal() {
                return Err(SamuelError::NotApplicable("factorization needs a principal ideal".into()));
            }
            let form = a.tangent_cone_ideal().generators()[0].clone();
            power_of_linear_form(&form, &vars).into_iter().collect()
        }
        KernelMethod::Monomial => {
            if !a.ideal().is_monomial() {
                return Err(SamuelError::NotApplicable("monomial method needs a monomial ideal".into()));
            }
            let mut found: Vec<usize> = Vec::new();
            for g in a.ideal().generators() {
                let (s, _) = split_exponents(g.monomials().next().expect("monomial"), &vars);
                let support: Vec<usize> = (0..s.len()).filter(|&k| s[k] > 0).collect();
                if let [k] = support[..] {
                    if !found.contains(&vars[k]) {
                        found.push(vars[k]);
                    }
                }
            }
            found.sort_unstable();
            found.into_iter().map(|v| Polynomial::var(field, n, v)).collect()
        }
        KernelMethod::Enumeration => {
            if !enumeration_applies(a) {
                return Err(SamuelError::NotApplicable("enumeration needs 𝔽_p and at most 3 variables at the origin".into()));
            }
            enumerate_nilpotent(a, &vars, opts)?
        }
        KernelMethod::Partial => {
            a.require_origin("partial kernel search")?;
            let cone = a.tangent_cone_ideal();
            let mut found = Vec::new();
            let mut tests: Vec<Polynomial> = vars.iter().map(|&v| Polynomial::var(field, n, v)).collect();
            tests.extend(candidates.iter().map(|c| c.component_in(&vars, 1)));
            for ell in tests {
                if !ell.is_zero() && radical_member(&ell, &cone, opts.budget)? {
                    found.push(ell);
                }
            }
            found
        }
    };

    // reduce the nilpotent forms modulo the linear parts to a basis of the kernel
    let mut rows = lin.clone();
    let mut basis = Vec::new();
    for ell in nilpotent {
        let mut trial = rows.clone();
        trial.push(linear_coordinates(&ell, &vars));
        if rank_over_fractions(&trial) > rank_over_fractions(&rows) {
            rows = trial;
            basis.push(ell);
        }
    }
    let r = basis.len();
    let class = match method {
        KernelMethod::Partial if r < t => KernelClass::Unknown,
        _ if t > 0 && r == t => KernelClass::Extremal,
        _ => KernelClass::NonExtremal,
    };
    Ok(KernelReport {
        basis,
        r,
        t,
        dim,
        embedding_dim,
        class,
        method,
        tangent_cone_exact: a.tangent_cone_exact(),
    })
}

/// All nilpotent linear forms of the tangent cone over `𝔽_p`, one per line
/// through the origin; fails if they do not form a subspace.
fn enumerate_nilpotent(
    a: &LocalRingPresentation,
    vars: &[usize],
    opts: &SamuelOptions,
) -> Result<Vec<Polynomial>, SamuelError> {
    let Field::Prime(p) = a.field() else { unreachable!("checked by caller") };
    let field = a.field();
    let n = a.nvars();
    let cone = a.tangent_cone_ideal();
    let k = vars.len();
    let make = |coeffs: &[u64]| -> Polynomial {
        let mut f = Polynomial::zero(field, n);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                f.add_term(Monomial::var(n, vars[i]), Rational::from_integer(BigInt::from(c)));
            }
        }
        f
    };
    let mut found: Vec<Vec<u64>> = Vec::new();
    let total = p.pow(k as u32);
    for code in 1..total {
        let coeffs: Vec<u64> = (0..k).map(|i| (code / p.pow(i as u32)) % p).collect();
        // one representative per line: first nonzero coefficient is one
        if coeffs.iter().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        if radical_member(&make(&coeffs), &cone, opts.budget)? {
            found.push(coeffs);
        }
    }
    // subspace check: the number of lines is (p^r - 1)/(p - 1) and sums stay nilpotent
    let normalize = |v: Vec<u64>| -> Option<Vec<u64>> {
        let lead = *v.iter().find(|&&c| c != 0)?;
        let inv = crate::arith::PrimeFieldElement::new(lead as i64, p).inv()?.residue();
        Some(v.iter().map(|c| c * inv % p).collect())
    };
    for u in &found {
        for w in &found {
            let s: Vec<u64> = u.iter().zip(w).map(|(x, y)| (x + y) % p).collect();
            if let Some(s) = normalize(s) {
                if !found.contains(&s) {
                    return Err(SamuelError::Unsupported("nilpotent linear forms are not closed under addition".into()));
                }
            }
        }
    }
    Ok(found.iter().map(|c| make(c)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeResult {
    pub lower_bound: ExtendedRational,
    pub exact: bool,
    pub witness: Vec<Polynomial>,
    pub witness_values: Vec<NubarResult>,
    pub kernel: KernelReport,
    pub sequences_tried: usize,
}

impl SlopeResult {
    /// Marks the slope exact when an independent computation equals the lower bound.
    pub fn pin(&mut self, value: &ExtendedRational) {
        if *value == self.lower_bound {
            self.exact = true;
        }
    }
}

fn validate_sequence(
    a: &LocalRingPresentation,
    kernel: &KernelReport,
    seq: &[Polynomial],
) -> Result<(), SamuelError> {
    if seq.len() != kernel.r {
        return Err(SamuelError::NotALambdaSequence(format!(
            "{} elements for a kernel of dimension {}",
            seq.len(),
            kernel.r
        )));
    }
    let vars = a.point_vars();
    for g in seq {
        if g.order_in(&vars).is_some_and(|d| d == 0) {
            return Err(SamuelError::NotALambdaSequence(format!("{} is a unit", a.ring().format(g))));
        }
    }
    let lin = linear_parts(a);
    let with = |forms: &[Polynomial]| -> usize {
        let mut rows = lin.clone();
        rows.extend(forms.iter().map(|f| linear_coordinates(f, &vars)));
        rank_over_fractions(&rows)
    };
    let base = rank_over_fractions(&lin);
    let mut both: Vec<Polynomial> = kernel.basis.clone();
    both.extend(seq.iter().cloned());
    if with(seq) != base + kernel.r || with(&both) != base + kernel.r {
        return Err(SamuelError::NotALambdaSequence("classes do not form a basis of ker(λ)".into()));
    }
    Ok(())
}

/// Translations `γ - s·x_j·μ` with `x_j` outside the kernel, `μ` a monomial
/// of degree 1 or 2 in the point's variables, and `s` a small scalar.
fn translated_sequences(a: &LocalRingPresentation, kernel: &KernelReport, seq: &[Polynomial]) -> Vec<Vec<Polynomial>> {
    let vars = a.point_vars();
    let field = a.field();
    let n = a.nvars();
    let mut complement = Vec::new();
    let mut rows: Vec<Vec<Polynomial>> = kernel.basis.iter().map(|f| linear_coordinates(f, &vars)).collect();
    rows.extend(linear_parts(a));
    for &v in &vars {
        let x = Polynomial::var(field, n, v);
        let mut trial = rows.clone();
        trial.push(linear_coordinates(&x, &vars));
        if rank_over_fractions(&trial) > rank_over_fractions(&rows) {
            rows = trial;
            complement.push(x);
        }
    }
    let mut multipliers = Vec::new();
    for d in 1..=2 {
        for g in monomials_of_degree(field, n, &vars, d).generators() {
            multipliers.push(g.clone());
        }
    }
    let scalars: Vec<Rational> = match field {
        Field::Rational => vec![Rational::one(), -Rational::one()],
        Field::Prime(p) => (1..p.min(5)).map(|s| field.from_int(s as i64)).collect(),
    };
    let mut out = Vec::new();
    'outer: for i in 0..seq.len() {
        for x in &complement {
            for mu in &multipliers {
                for s in &scalars {
                    if out.len() >= TRANSLATION_CAP {
                        break 'outer;
                    }
                    let mut t = seq.to_vec();
                    t[i] = &t[i] - &(x * mu).scale(s);
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Samuel slope: 1 when not extremal; otherwise the best
/// `min_i ν̄_m(γ_i)` over the candidate λ-sequences (the kernel basis when
/// none are given), as a lower bound.
pub fn samuel_slope(
    a: &LocalRingPresentation,
    candidates: &[Vec<Polynomial>],
    strategy: &NubarStrategy,
    opts: &SamuelOptions,
) -> Result<SlopeResult, SamuelError> {
    let kernel = kernel_lambda(a, opts)?;
    if kernel.t == 0 {
        return Err(SamuelError::NotApplicable("the ring is regular (t = 0)".into()));
    }
    match kernel.class {
        KernelClass::NonExtremal => {
            return Ok(SlopeResult {
                lower_bound: ExtendedRational::from_int(1),
                exact: true,
                witness: Vec::new(),
                witness_values: Vec::new(),
                kernel,
                sequences_tried: 0,
            })
        }
        KernelClass::Unknown => return Err(SamuelError::UnknownKernel),
        KernelClass::Extremal => {}
    }
    a.require_origin("Samuel slope of an extremal ring")?;
    let mut seqs: Vec<Vec<Polynomial>> = if candidates.is_empty() {
        vec![kernel.basis.clone()]
    } else {
        candidates.to_vec()
    };
    for s in &seqs {
        validate_sequence(a, &kernel, s)?;
    }
    if opts.auto_translate {
        let extra: Vec<Vec<Polynomial>> = seqs.iter().flat_map(|s| translated_sequences(a, &kernel, s)).collect();
        seqs.extend(extra);
    }
    let mut engine = NuEngine::new(a, a.maximal_ideal(), opts.budget);
    let mut best: Option<(ExtendedRational, Vec<Polynomial>, Vec<NubarResult>)> = None;
    let mut cache: Vec<(Polynomial, NubarResult)> = Vec::new();
    for seq in &seqs {
        let mut values = Vec::new();
        let mut low = ExtendedRational::Infinity;
        for g in seq {
            let r = match cache.iter().find(|(h, _)| h == g) {
                Some((_, r)) => r.clone(),
                None => {
                    let r = nubar_with(&mut engine, g, strategy, opts)?;
                    cache.push((g.clone(), r.clone()));
                    r
                }
            };
            low = low.min(r.value.clone());
            values.push(r);
        }
        if best.as_ref().is_none_or(|(b, _, _)| low > *b) {
            best = Some((low, seq.clone(), values));
        }
    }
    let (lower_bound, witness, witness_values) = best.expect("at least one sequence");
    Ok(SlopeResult { lower_bound, exact: false, witness, witness_values, kernel, sequences_tried: seqs.len() })
}

/// Whether `⟨κ⟩` is a reduction of `m`: `Gr_m(A)/⟨in(κ)⟩` has dimension 0.
pub fn check_reduction_by_d(
    a: &LocalRingPresentation,
    kappa: &[Polynomial],
    budget: Budget,
) -> Result<bool, SamuelError> {
    a.require_origin("reduction check")?;
    let d = local_dimension(a, budget)?;
    if kappa.len() != d {
        return Err(SamuelError::WrongCount { expected: d, got: kappa.len() });
    }
    let mut cone = a.tangent_cone_ideal();
    for k in kappa {
        if k.is_zero() {
            return Ok(d == 0 && quotient_dimension(&cone, budget)? <= 0);
        }
        cone = cone.with_generator(k.initial_form()?);
    }
    Ok(quotient_dimension(&cone, budget)? <= 0)
}
