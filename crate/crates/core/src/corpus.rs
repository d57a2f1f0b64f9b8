//! The fixed corpus of rings, ideals and germs, and the eight acceptance
//! criteria evaluated on it. Each criterion yields rows of expected against
//! computed values.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{rat, ExtendedRational, Field, Rational};
use crate::elimpres::{
    build_p_presentation, clean, cross_check_theorems, diff_saturate_once, Germ, ReesAlgebra, Theorem,
    DEFAULT_MAX_ROUNDS,
};
use crate::groebner::{ideal_power, Budget, IdealPresentation};
use crate::newton::{build_polyhedron, MonomialValuation};
use crate::poly::{Monomial, Polynomial, Ring, VariableSplit};
use crate::samuel::{
    kernel_lambda, kernel_lambda_with, nu, nubar, CertifiedValuation, KernelMethod,
    LocalRingPresentation, NuValue, NubarStrategy, PointSpec, SamuelOptions, ValuationCertificate,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub tags: &'static [&'static str],
    pub rows: Vec<Row>,
}

impl CriterionOutcome {
    pub fn pass(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub tags: &'static [&'static str],
}

pub const CRITERIA: [Criterion; 8] = [
    Criterion { id: 1, name: "cusp-order", tags: &["cusp", "nu"] },
    Criterion { id: 2, name: "cusp-nubar", tags: &["cusp", "nubar", "certificate", "limit"] },
    Criterion { id: 3, name: "cusp-char2-presentation", tags: &["cusp", "saturation", "hord"] },
    Criterion { id: 4, name: "whitney-presentation", tags: &["whitney", "hord", "prime"] },
    Criterion { id: 5, name: "closure-oracle", tags: &["monomial", "newton", "closure"] },
    Criterion { id: 6, name: "nubar-powers", tags: &["monomial", "newton", "powers"] },
    Criterion { id: 7, name: "kernel-bound", tags: &["kernel", "node", "cusp"] },
    Criterion { id: 8, name: "theorem-cross-checks", tags: &["theorems", "cusp", "node", "whitney"] },
];

impl Criterion {
    /// Case-insensitive substring match on the name, a tag, or the number.
    pub fn matches(&self, filter: &str) -> bool {
        let f = filter.to_lowercase();
        self.name.contains(&f) || self.tags.iter().any(|t| t.contains(&f)) || self.id.to_string() == f
    }
}

#[derive(Clone, Debug, Default)]
pub struct CorpusOptions {
    pub filter: Option<String>,
    /// Negative control: corrupts one expected value.
    pub inject_wrong: bool,
}

struct Rows(Vec<Row>);

impl Rows {
    fn check(&mut self, label: impl Into<String>, expected: impl ToString, computed: impl ToString) {
        let (e, c) = (expected.to_string(), computed.to_string());
        self.0.push(Row { label: label.into(), ok: e == c, expected: e, computed: c });
    }

    fn assert(&mut self, label: impl Into<String>, ok: bool, computed: impl ToString) {
        self.0.push(Row { label: label.into(), expected: "true".into(), computed: computed.to_string(), ok });
    }

    fn error(&mut self, label: impl Into<String>, err: impl std::fmt::Display) {
        self.0.push(Row { label: label.into(), expected: "no error".into(), computed: format!("error: {err}"), ok: false });
    }
}

fn ring(names: &[&str], c: u64) -> Ring {
    Ring::new(names.to_vec(), Field::from_characteristic(c).expect("corpus field")).expect("corpus ring")
}

fn parse(r: &Ring, s: &str) -> Polynomial {
    r.parse(s).expect("corpus polynomial")
}

fn ideal(r: &Ring, gens: &[&str]) -> IdealPresentation {
    IdealPresentation::new(r.field(), r.nvars(), gens.iter().map(|g| parse(r, g)).collect())
}

fn options() -> SamuelOptions {
    SamuelOptions::default()
}

fn q(n: u64, d: u64) -> ExtendedRational {
    ExtendedRational::from_ratio(n, d)
}

/// The cusp `k[x,y]/⟨x² - y³⟩` at the origin.
pub fn cusp(c: u64) -> LocalRingPresentation {
    let r = ring(&["x", "y"], c);
    let g = parse(&r, "x^2 - y^3");
    LocalRingPresentation::at_origin(r, vec![g]).expect("cusp")
}

/// Certificate for `ν̄_m` on the cusp: weights `(3, 2)`, value 2 on `m`.
pub fn cusp_certificate() -> ValuationCertificate {
    ValuationCertificate {
        valuations: vec![CertifiedValuation {
            valuation: MonomialValuation::new(vec![rat(3, 1), rat(2, 1)]),
            ideal_value: rat(2, 1),
        }],
        translations: Vec::new(),
    }
}

/// Monomial ideals in two and three variables.
pub fn monomial_corpus() -> Vec<(Vec<&'static str>, Vec<&'static str>)> {
    vec![
        (vec!["x", "y"], vec!["x^2", "y^3"]),
        (vec!["x", "y"], vec!["x", "y"]),
        (vec!["x", "y"], vec!["x^2*y", "x*y^2"]),
        (vec!["x", "y"], vec!["x^3", "x*y", "y^4"]),
        (vec!["x", "y", "z"], vec!["x^2", "y^2", "z^3"]),
        (vec!["x", "y", "z"], vec!["x*y", "y*z", "x*z"]),
    ]
}

/// Local rings at the origin: name, variables, characteristic, generators.
pub fn local_ring_corpus() -> Vec<(&'static str, Vec<&'static str>, u64, Vec<&'static str>)> {
    vec![
        ("cusp/QQ", vec!["x", "y"], 0, vec!["x^2 - y^3"]),
        ("cusp/GF(2)", vec!["x", "y"], 2, vec!["x^2 - y^3"]),
        ("node/QQ", vec!["x", "y"], 0, vec!["x^2 - y^2"]),
        ("node/GF(3)", vec!["x", "y"], 3, vec!["x^2 - y^2"]),
        ("node/GF(2)", vec!["x", "y"], 2, vec!["x^2 - y^2"]),
        ("regular/QQ", vec!["x", "y"], 0, vec![]),
        ("xy/QQ", vec!["x", "y", "w"], 0, vec!["x*y"]),
    ]
}

/// Hypersurface germs monic in their first variable: name, variables,
/// characteristic, polynomial, point variables (`None` for the origin).
pub fn germ_corpus() -> Vec<(String, Vec<&'static str>, u64, String, Option<Vec<usize>>)> {
    let mut out = vec![
        ("cusp/GF(2)".to_string(), vec!["z", "y"], 2, "z^2 - y^3".to_string(), None),
        ("cusp/QQ".to_string(), vec!["z", "y"], 0, "z^2 - y^3".to_string(), None),
        ("cusp/GF(3)".to_string(), vec!["z", "y"], 3, "z^2 - y^3".to_string(), None),
        ("node/QQ".to_string(), vec!["x", "y"], 0, "x^2 - y^2".to_string(), None),
        ("node/GF(3)".to_string(), vec!["x", "y"], 3, "x^2 - y^2".to_string(), None),
        ("node/GF(2)".to_string(), vec!["x", "y"], 2, "x^2 - y^2".to_string(), None),
        ("b3-cleaning/GF(2)".to_string(), vec!["z", "y1", "y2"], 2, "z^2 + y1^2*y2^2 + y1^5".to_string(), None),
    ];
    for p in [2u64, 3, 5] {
        out.push((format!("whitney/GF({p})"), vec!["x", "y1", "y2"], p, format!("x^{p} - y1^{p}*y2"), Some(vec![0, 1])));
    }
    out
}

/// `exps ∈ a·conv(U) + ℝ≥0ⁿ`, decided by Fourier–Motzkin elimination on
/// `λ ≥ 0, Σλ = 1, Σ λ_i a u_i ≤ exps`.
pub fn in_scaled_newton_polyhedron(points: &[Vec<u32>], a: u64, exps: &[u32]) -> bool {
    if a == 0 {
        return true;
    }
    let g = points.len();
    if g == 0 {
        return false;
    }
    let r = |x: i64| Rational::from_integer(BigInt::from(x));
    // λ_g = 1 - Σ_{i<g} λ_i; unknowns λ_0..λ_{g-2}; rows are (coeffs, rhs) for coeffs·λ ≤ rhs
    let k = g - 1;
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for i in 0..k {
        let mut c = vec![Rational::zero(); k];
        c[i] = r(-1);
        rows.push((c, Rational::zero()));
    }
    rows.push((vec![r(1); k], r(1)));
    let last = &points[g - 1];
    for (d, &e) in exps.iter().enumerate() {
        let au_last = a as i64 * last[d] as i64;
        let coeffs = (0..k).map(|i| r(a as i64 * points[i][d] as i64 - au_last)).collect();
        rows.push((coeffs, r(e as i64 - au_last)));
    }
    for var in 0..k {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for row in rows {
            if row.0[var].is_positive() {
                pos.push(row);
            } else if row.0[var].is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        for (pc, pr) in &pos {
            for (nc, nr) in &neg {
                let (sp, sn) = (-nc[var].clone(), pc[var].clone());
                let coeffs = pc.iter().zip(nc).map(|(x, y)| x * &sp + y * &sn).collect();
                rest.push((coeffs, pr * &sp + nr * &sn));
            }
        }
        rows = rest;
    }
    rows.iter().all(|(_, rhs)| !rhs.is_negative())
}

fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut e = vec![0u32; n];
    loop {
        if e.iter().sum::<u32>() <= d {
            out.push(Monomial::new(e.clone()));
        }
        let mut i = 0;
        while i < n {
            e[i] += 1;
            if e[i] <= d {
                break;
            }
            e[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

fn criterion_1(inject: bool) -> Vec<Row> {
    let mut rows = Rows(Vec::new());
    let a = cusp(0);
    let m = a.maximal_ideal();
    let b = options().budget;
    for (f, want) in [("x", 1), ("x^2", if inject { 4 } else { 3 })] {
        match nu(&a, &parse(a.ring(), f), &m, 24, b) {
            Ok(v) => rows.check(format!("ν_m({f}) in k[x,y]/⟨x²-y³⟩"), NuValue::Exact(want), v),
            Err(e) => rows.error(f, e),
        }
    }
    rows.0
}

fn criterion_2() -> Vec<Row> {
    let mut rows = Rows(Vec::new());
    let a = cusp(0);
    let m = a.maximal_ideal();
    let x = parse(a.ring(), "x");
    match nubar(&a, &x, &m, &NubarStrategy::Certificate(cusp_certificate()), &options()) {
        Ok(r) => {
            rows.check("ν̄_m(x) by certificate", q(3, 2), &r.value);
            rows.check("certificate status", "exact", if r.is_exact() { "exact" } else { "lower-bound" });
        }
        Err(e) => rows.error("certificate", e),
    }
    match nubar(&a, &x, &m, &NubarStrategy::Limit, &options()) {
        Ok(r) => {
            let target = ExtendedRational::finite(rat(3, 2) - rat(1, 10));
            let mut running = ExtendedRational::zero();
            let mut reached = None;
            let mut exceeded = false;
            let mut monotone = true;
            for (n, v) in &r.trace {
                let est = v.lower_bound().div_int(*n as u64);
                exceeded |= est > q(3, 2);
                let next = running.clone().max(est);
                monotone &= next >= running;
                running = next;
                if reached.is_none() && running >= target {
                    reached = Some(*n);
                }
            }
            rows.assert("limit reaches 3/2 - 1/10 by n ≤ 20", reached.is_some_and(|n| n <= 20), format!("n = {reached:?}"));
            rows.assert("limit never exceeds 3/2", !exceeded, format!("max = {running}"));
            rows.assert("running maximum nondecreasing", monotone, monotone);
        }
        Err(e) => rows.error("limit", e),
    }
    rows.0
}

fn criterion_3() -> Vec<Row> {
    let mut rows = Rows(Vec::new());
    let r = ring(&["z", "y"], 2);
    let b = options().budget;
    let g = ReesAlgebra::new(r.field(), 2, vec![(parse(&r, "z^2 - y^3"), 2)]);
    match diff_saturate_once(&g, b) {
        Ok(sat) => {
            let show = |gens: &[(Polynomial, u32)]| {
                gens.iter().map(|(f, n)| format!("({})W^{n}", r.format(f))).collect::<Vec<_>>().join(", ")
            };
            let expected = vec![(parse(&r, "y^2"), 1), (parse(&r, "z^2 - y^3"), 2)];
            let mut computed = sat.generators().to_vec();
            computed.sort_by_key(|(_, n)| *n);
            let shown = if computed == expected { show(&expected) } else { show(&computed) };
            rows.check("Diff(F2[z,y][(z²-y³)W²])", show(&expected), shown);
        }
        Err(e) => rows.error("saturation", e),
    }
    let split = VariableSplit::new(2, vec![0]).expect("split");
    match build_p_presentation(&parse(&r, "z^2 - y^3"), &split, 2).and_then(|p| clean(&p, &PointSpec::Origin, DEFAULT_MAX_ROUNDS)) {
        Ok(s) => {
            rows.check("elimination order at origin", q(2, 1), &s.elimination_order);
            rows.check("H-ord at origin", q(3, 2), s.h_ord.map_or("none".into(), |h| h.to_string()));
            rows.check("case", "B1", s.case);
        }
        Err(e) => rows.error("presentation", e),
    }
    rows.0
}

fn criterion_4() -> Vec<Row> {
    let mut rows = Rows(Vec::new());
    for p in [2u64, 3, 5] {
        let r = ring(&["x", "y1", "y2"], p);
        let split = VariableSplit::new(3, vec![0]).expect("split");
        let f = parse(&r, &format!("x^{p} - y1^{p}*y2"));
        let at = PointSpec::CoordinatePrime(vec![0, 1]);
        match build_p_presentation(&f, &split, p).and_then(|pres| clean(&pres, &at, DEFAULT_MAX_ROUNDS)) {
            Ok(s) => {
                rows.check(format!("p = {p}: H-ord at ⟨x,y1⟩"), q(1, 1), s.h_ord.map_or("none".into(), |h| h.to_string()));
                rows.check(format!("p = {p}: elimination order"), q(p, p - 1), &s.elimination_order);
            }
            Err(e) => rows.error(format!("p = {p}"), e),
        }
    }
    rows.0
}

fn criterion_5() -> Vec<Row> {
    let mut rows = Rows(Vec::new());
    for (names, gens) in monomial_corpus() {
        let r = ring(&names, 0);
        let i = ideal(&r, &gens);
        let poly = match build_polyhedron(&i) {
            Ok(p) => p,
            Err(e) => {
                rows.error(format!("{gens:?}"), e);
                continue;
            }
        };
        let points: Vec<Vec<u32>> = i
            .generators()
            .iter()
            .map(|g| g.monomials().next().expect("monomial").exponents().to_vec())
            .collect();
        let mut checked = 0;
        let mut mismatches = 0;
        for m in monomials_up_to(names.len(), 6) {
            let f = Polynomial::term(r.field(), m.clone(), Rational::from_integer(1.into()));
            let nb = poly.nubar(&f);
            for a in 1..=6u64 {
                for b in 1..=6u64 {
                    let lhs = nb >= q(a, b);
                    let fb: Vec<u32> = m.exponents().iter().map(|e| e * b as u32).collect();
                    let oracle = in_scaled_newton_polyhedron(&points, a, &fb);
                    let facet = poly.closure_contains(&f.pow(b as u32), a);
                    checked += 1;
                    if lhs != oracle || facet != oracle {
                        mismatches += 1;
                    }
                }
            }
        }
        rows.check(format!("{} ({checked} cases): mismatches", gens.join(", ")), 0, mismatches);
    }
    rows.0
}

fn criterion_6() -> Vec<Row> {
    let mut rows = Rows(Vec::new());
    for (names, gens) in monomial_corpus() {
        let r = ring(&names, 0);
        let i = ideal(&r, &gens);
        let mut failures = 0;
        let mut checked = 0;
        let Ok(base) = build_polyhedron(&i) else {
            rows.error(format!("{gens:?}"), "polyhedron");
            continue;
        };
        let powers: Vec<_> = (1..=4u32).map(|k| build_polyhedron(&ideal_power(&i, k))).collect();
        for m in monomials_up_to(names.len(), 4) {
            if m.is_one() {
                continue;
            }
            let f = Polynomial::term(r.field(), m, Rational::from_integer(1.into()));
            let v = base.nubar(&f);
            for k in 1..=4u32 {
                checked += 2;
                if base.nubar(&f.pow(k)) != v.mul_int(k as u64) {
                    failures += 1;
                }
                match &powers[k as usize - 1] {
                    Ok(pk) if pk.nubar(&f) == v.div_int(k as u64) => {}
                    _ => failures += 1,
                }
            }
        }
        rows.check(format!("{} ({checked} identities): failures", gens.join(", ")), 0, failures);
    }
    rows.0
}

fn criterion_7() -> Vec<Row> {
    let mut rows = Rows(Vec::new());
    let opts = options();
    for (name, vars, c, gens) in local_ring_corpus() {
        let r = ring(&vars, c);
        let gens: Vec<Polynomial> = gens.iter().map(|g| parse(&r, g)).collect();
        let a = match LocalRingPresentation::at_origin(r, gens) {
            Ok(a) => a,
            Err(e) => {
                rows.error(name, e);
                continue;
            }
        };
        match kernel_lambda(&a, &opts) {
            Ok(k) => {
                rows.assert(format!("{name}: r ≤ t"), k.r <= k.t, format!("r = {}, t = {}", k.r, k.t));
                if name == "node/GF(2)" {
                    rows.check("node/GF(2) class", "Extremal", format!("{:?}", k.class));
                }
                if name == "node/GF(3)" {
                    rows.check("node/GF(3) class", "NonExtremal", format!("{:?}", k.class));
                }
                if c != 0 {
                    if let Ok(e) = kernel_lambda_with(&a, KernelMethod::Enumeration, &[], &opts) {
                        rows.check(format!("{name}: enumeration agrees"), k.r, e.r);
                    }
                }
            }
            Err(e) => rows.error(name, e),
        }
    }
    rows.0
}

fn criterion_8() -> Vec<Row> {
    let mut rows = Rows(Vec::new());
    let opts = options();
    let (mut extremal, mut non_extremal) = (0, 0);
    for (name, vars, c, f, point) in germ_corpus() {
        let r = ring(&vars, c);
        let poly = parse(&r, &f);
        let at = point.map_or(PointSpec::Origin, PointSpec::CoordinatePrime);
        let run = || -> Result<_, String> {
            let a = LocalRingPresentation::new(r.clone(), vec![poly.clone()], at.clone()).map_err(|e| e.to_string())?;
            let split = VariableSplit::new(r.nvars(), vec![0]).map_err(|e| e.to_string())?;
            cross_check_theorems(&a, &Germ { poly: poly.clone(), split }, &at, &opts, DEFAULT_MAX_ROUNDS)
                .map_err(|e| e.to_string())
        };
        match run() {
            Ok(rep) => {
                match rep.theorem {
                    Theorem::Extremal => extremal += 1,
                    Theorem::NonExtremal => non_extremal += 1,
                }
                rows.assert(format!("{name}: {:?} ({})", rep.theorem, rep.detail), rep.pass, rep.pass);
                if name == "cusp/GF(2)" {
                    let s = rep.samuel_slope.as_ref();
                    rows.check("cusp/GF(2): Samuel slope", q(3, 2), s.map_or("none".into(), |s| s.lower_bound.to_string()));
                    rows.check("cusp/GF(2): Samuel slope certified exact", true, s.is_some_and(|s| s.exact));
                }
            }
            Err(e) => rows.error(name, e),
        }
    }
    rows.assert("corpus has extremal and non-extremal members", extremal > 0 && non_extremal > 0, format!("{extremal} extremal, {non_extremal} non-extremal"));
    rows.0
}

pub fn run_criterion(id: u32, inject_wrong: bool) -> CriterionOutcome {
    let c = CRITERIA.iter().find(|c| c.id == id).expect("criterion id in 1..=8");
    let rows = match id {
        1 => criterion_1(inject_wrong),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        _ => criterion_8(),
    };
    CriterionOutcome { id, name: c.name, tags: c.tags, rows }
}

/// Runs every criterion matching the filter.
pub fn run_all(opts: &CorpusOptions) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .filter(|c| opts.filter.as_deref().is_none_or(|f| c.matches(f)))
        .map(|c| run_criterion(c.id, opts.inject_wrong))
        .collect()
}

/// Budget used by the corpus, honoring `SLOPELAB_BUDGET`.
pub fn budget() -> Budget {
    Budget::from_env()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_polyhedron_oracle() {
        let pts = vec![vec![2, 0], vec![0, 3]];
        assert!(in_scaled_newton_polyhedron(&pts, 1, &[1, 2]));
        assert!(!in_scaled_newton_polyhedron(&pts, 1, &[1, 1]));
        assert!(in_scaled_newton_polyhedron(&pts, 2, &[2, 3]));
        assert!(!in_scaled_newton_polyhedron(&pts, 2, &[2, 2]));
        assert!(in_scaled_newton_polyhedron(&pts, 0, &[0, 0]));
    }

    #[test]
    fn filters() {
        let cusp: Vec<u32> = CRITERIA.iter().filter(|c| c.matches("cusp")).map(|c| c.id).collect();
        assert_eq!(cusp, vec![1, 2, 3, 7, 8]);
        assert!(CRITERIA[4].matches("5"));
    }

    #[test]
    fn negative_control_fails() {
        assert!(!run_criterion(1, true).pass());
        assert!(run_criterion(1, false).pass());
    }
}
