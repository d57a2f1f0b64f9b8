//! Newton polyhedra of monomial ideals. The facet normals with positive
//! threshold are the Rees valuations of the ideal, so the asymptotic Samuel
//! function and integral closure of powers both reduce to facet arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ExtendedRational, Rational};
use crate::groebner::IdealPresentation;
use crate::poly::{Monomial, Polynomial};

pub const MAX_NEWTON_VARS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewtonError {
    #[error("ideal is not generated by monomials")]
    NotMonomial,
    #[error("Newton polyhedra are limited to {MAX_NEWTON_VARS} variables, got {0}")]
    DimensionCap(usize),
    #[error("ideal is not proper")]
    NotProper,
    #[error("ideal is zero")]
    ZeroIdeal,
}

/// Supporting hyperplane `⟨w, x⟩ = threshold` of a facet, with `w` primitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub weights: Vec<u64>,
    pub threshold: u64,
}

impl Facet {
    pub fn value(&self, m: &Monomial) -> u64 {
        self.weights.iter().zip(m.exponents()).map(|(w, &e)| w * e as u64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolyhedron {
    pub generators: Vec<Vec<u32>>,
    pub facets: Vec<Facet>,
}

/// `v(f) = min` over terms of `⟨weights, exponent⟩`; `v(0) = ∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialValuation {
    #[serde(with = "rational_vec")]
    pub weights: Vec<Rational>,
}

impl MonomialValuation {
    pub fn new(weights: Vec<Rational>) -> Self {
        MonomialValuation { weights }
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.weights.iter().any(Signed::is_negative)
    }

    pub fn monomial_value(&self, m: &Monomial) -> Rational {
        self.weights
            .iter()
            .zip(m.exponents())
            .map(|(w, &e)| w * Rational::from_integer(BigInt::from(e)))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn value(&self, f: &Polynomial) -> ExtendedRational {
        f.monomials()
            .map(|m| self.monomial_value(m))
            .min()
            .map(ExtendedRational::finite)
            .unwrap_or(ExtendedRational::Infinity)
    }

    /// Minimum over the generators.
    pub fn ideal_value(&self, ideal: &IdealPresentation) -> ExtendedRational {
        ideal
            .generators()
            .iter()
            .map(|g| self.value(g))
            .min()
            .unwrap_or(ExtendedRational::Infinity)
    }
}

mod rational_vec {
    use super::Rational;
    use crate::arith::{format_rational, parse_rational};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s}"))))
            .collect()
    }
}

fn exponent_points(ideal: &IdealPresentation) -> Result<Vec<Vec<u32>>, NewtonError> {
    if !ideal.is_monomial() {
        return Err(NewtonError::NotMonomial);
    }
    if ideal.nvars() > MAX_NEWTON_VARS {
        return Err(NewtonError::DimensionCap(ideal.nvars()));
    }
    if ideal.is_zero_ideal() {
        return Err(NewtonError::ZeroIdeal);
    }
    let mut pts: Vec<Vec<u32>> = ideal
        .generators()
        .iter()
        .map(|g| g.monomials().next().expect("nonzero monomial").exponents().to_vec())
        .collect();
    if pts.iter().any(|p| p.iter().all(|&e| e == 0)) {
        return Err(NewtonError::NotProper);
    }
    pts.sort();
    pts.dedup();
    // drop points dominated by another point; they are never vertices
    let all = pts.clone();
    pts.retain(|p| !all.iter().any(|q| q != p && q.iter().zip(p).all(|(a, b)| a <= b)));
    Ok(pts)
}

/// One-dimensional null space of the rows, as a primitive integer vector.
fn null_line(rows: &[Vec<BigRational>], n: usize) -> Option<Vec<BigInt>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![BigRational::zero(); n];
    v[free] = BigRational::one();
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = -m[i][free].clone();
    }
    let den = v.iter().fold(BigInt::one(), |a, q| a.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

fn subsets(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i + 1, len, k, cur, out);
            cur.pop();
        }
    }
    rec(0, len, k, &mut cur, &mut out);
    out
}

/// Facets with positive threshold of `conv(exponents) + ℝ≥0ⁿ`. Candidate
/// hyperplanes pass through `k` exponent points and contain `n - k`
/// coordinate directions; a candidate is kept when its normal is
/// nonnegative and every exponent lies on or above it.
pub fn build_polyhedron(ideal: &IdealPresentation) -> Result<NewtonPolyhedron, NewtonError> {
    let pts = exponent_points(ideal)?;
    let n = ideal.nvars();
    let q = |e: u32| BigRational::from_integer(BigInt::from(e));
    let mut facets: Vec<Facet> = Vec::new();
    for k in 1..=n.min(pts.len()) {
        for chosen in subsets(pts.len(), k) {
            for dirs in subsets(n, n - k) {
                let mut rows: Vec<Vec<BigRational>> = Vec::new();
                let base = &pts[chosen[0]];
                for &i in &chosen[1..] {
                    rows.push((0..n).map(|c| q(pts[i][c]) - q(base[c])).collect());
                }
                for &d in &dirs {
                    rows.push((0..n).map(|c| if c == d { BigRational::one() } else { BigRational::zero() }).collect());
                }
                let Some(mut w) = null_line(&rows, n) else { continue };
                if w.iter().all(|x| !x.is_positive()) {
                    w.iter_mut().for_each(|x| *x = -x.clone());
                }
                if w.iter().any(Signed::is_negative) {
                    continue;
                }
                let w: Vec<u64> = w.iter().map(|x| x.to_u64().expect("small weight")).collect();
                let val = |p: &Vec<u32>| -> u64 { w.iter().zip(p).map(|(a, &b)| a * b as u64).sum() };
                let c = val(base);
                if c == 0 || pts.iter().any(|p| val(p) < c) {
                    continue;
                }
                let facet = Facet { weights: w, threshold: c };
                if !facets.contains(&facet) {
                    facets.push(facet);
                }
            }
        }
    }
    facets.sort();
    Ok(NewtonPolyhedron { generators: pts, facets })
}

impl NewtonPolyhedron {
    /// `min` over facets of `v_w(f) / threshold`, where `v_w` is the per-term minimum.
    pub fn nubar(&self, f: &Polynomial) -> ExtendedRational {
        if f.is_zero() {
            return ExtendedRational::Infinity;
        }
        self.facets
            .iter()
            .map(|facet| {
                let v = f.monomials().map(|m| facet.value(m)).min().expect("nonzero");
                ExtendedRational::from_ratio(v, facet.threshold)
            })
            .min()
            .unwrap_or(ExtendedRational::Infinity)
    }

    /// `f ∈ closure(I^a)`: every term clears `a · threshold` on every facet.
    pub fn closure_contains(&self, f: &Polynomial, a: u64) -> bool {
        f.monomials()
            .all(|m| self.facets.iter().all(|facet| facet.value(m) >= a * facet.threshold))
    }
}

/// Exact ν̄ for a monomial ideal. Rees valuations of a monomial ideal are
/// monomial, and a monomial valuation of a polynomial is the minimum over its
/// terms, so no cancellation can lower the value.
pub fn nubar_monomial(ideal: &IdealPresentation, f: &Polynomial) -> Result<ExtendedRational, NewtonError> {
    Ok(build_polyhedron(ideal)?.nubar(f))
}

pub fn closure_member(f: &Polynomial, ideal: &IdealPresentation, a: u64) -> Result<bool, NewtonError> {
    if a == 0 {
        return Ok(true);
    }
    Ok(build_polyhedron(ideal)?.closure_contains(f, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;
    use crate::groebner::ideal_power;
    use crate::poly::Ring;

    fn setup(names: &[&str], gens: &[&str]) -> (Ring, IdealPresentation) {
        let r = Ring::new(names.to_vec(), Field::Rational).unwrap();
        let i = IdealPresentation::new(r.field(), r.nvars(), gens.iter().map(|g| r.parse(g).unwrap()).collect());
        (r, i)
    }

    fn facets(p: &NewtonPolyhedron) -> Vec<(Vec<u64>, u64)> {
        p.facets.iter().map(|f| (f.weights.clone(), f.threshold)).collect()
    }

    #[test]
    fn facet_examples() {
        let (_, i) = setup(&["x", "y"], &["x^2", "y^3"]);
        assert_eq!(facets(&build_polyhedron(&i).unwrap()), vec![(vec![3, 2], 6)]);
        let (_, i) = setup(&["x", "y"], &["x", "y"]);
        assert_eq!(facets(&build_polyhedron(&i).unwrap()), vec![(vec![1, 1], 1)]);
        let (_, i) = setup(&["x", "y"], &["x^2*y", "x*y^2"]);
        assert_eq!(
            facets(&build_polyhedron(&i).unwrap()),
            vec![(vec![0, 1], 1), (vec![1, 0], 1), (vec![1, 1], 3)]
        );
        let (_, i) = setup(&["x", "y", "z"], &["x*y", "y*z", "x*z"]);
        let p = build_polyhedron(&i).unwrap();
        assert!(facets(&p).contains(&(vec![1, 1, 1], 2)));
    }

    #[test]
    fn nubar_examples() {
        let (r, i) = setup(&["x", "y"], &["x^2", "y^3"]);
        assert_eq!(nubar_monomial(&i, &r.parse("x*y").unwrap()).unwrap(), ExtendedRational::from_ratio(5, 6));
        assert_eq!(nubar_monomial(&i, &r.parse("x").unwrap()).unwrap(), ExtendedRational::from_ratio(1, 2));
        assert_eq!(nubar_monomial(&i, &r.zero()).unwrap(), ExtendedRational::Infinity);
        let (r, m) = setup(&["x", "y"], &["x", "y"]);
        assert_eq!(nubar_monomial(&m, &r.one()).unwrap(), ExtendedRational::zero());
    }

    #[test]
    fn closure_examples() {
        let (r, i) = setup(&["x", "y"], &["x^2", "y^2"]);
        assert!(closure_member(&r.parse("x*y").unwrap(), &i, 1).unwrap());
        assert!(!closure_member(&r.parse("x").unwrap(), &i, 1).unwrap());
        assert!(closure_member(&r.parse("x").unwrap(), &i, 0).unwrap());
    }

    #[test]
    fn errors() {
        let (_, i) = setup(&["x", "y"], &["x + y"]);
        assert_eq!(build_polyhedron(&i), Err(NewtonError::NotMonomial));
        let (_, i) = setup(&["a", "b", "c", "d", "e"], &["a"]);
        assert_eq!(build_polyhedron(&i), Err(NewtonError::DimensionCap(5)));
        let (_, i) = setup(&["x"], &["1"]);
        assert_eq!(build_polyhedron(&i), Err(NewtonError::NotProper));
    }

    // brute-force oracle: small integer normals, keeping those that are
    // tight on an affinely spanning set of points and directions
    fn brute_facets(pts: &[Vec<u32>], n: usize, bound: u64) -> Vec<(Vec<u64>, u64)> {
        let mut out = Vec::new();
        let mut w = vec![0u64; n];
        loop {
            let mut i = 0;
            while i < n {
                w[i] += 1;
                if w[i] <= bound {
                    break;
                }
                w[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            let g = w.iter().fold(0u64, |a, &b| a.gcd(&b));
            if g != 1 {
                continue;
            }
            let val = |p: &Vec<u32>| -> u64 { w.iter().zip(p).map(|(a, &b)| a * b as u64).sum() };
            let c = pts.iter().map(val).min().unwrap();
            if c == 0 {
                continue;
            }
            let q = |e: i64| BigRational::from_integer(BigInt::from(e));
            let tight: Vec<&Vec<u32>> = pts.iter().filter(|p| val(p) == c).collect();
            let mut rows: Vec<Vec<BigRational>> = tight[1..]
                .iter()
                .map(|p| (0..n).map(|j| q(p[j] as i64 - tight[0][j] as i64)).collect())
                .collect();
            for d in 0..n {
                if w[d] == 0 {
                    rows.push((0..n).map(|j| q((j == d) as i64)).collect());
                }
            }
            if null_line(&rows, n).is_some() {
                out.push((w.clone(), c));
            }
        }
        out.sort();
        out
    }

    #[test]
    fn facets_match_brute_force() {
        let cases: &[(&[&str], &[&str])] = &[
            (&["x", "y"], &["x^2", "y^3"]),
            (&["x", "y"], &["x^3", "x*y", "y^4"]),
            (&["x", "y"], &["x^5", "x^2*y", "y^3"]),
            (&["x", "y", "z"], &["x^2", "y^2", "z^3"]),
            (&["x", "y", "z"], &["x*y", "y*z", "x*z"]),
            (&["x", "y", "z"], &["x^3", "y*z", "x*y^2"]),
        ];
        for (names, gens) in cases {
            let (_, i) = setup(names, gens);
            let p = build_polyhedron(&i).unwrap();
            let mut got = facets(&p);
            got.sort();
            assert_eq!(got, brute_facets(&p.generators, names.len(), 12), "{gens:?}");
        }
    }

    #[test]
    fn power_rescales_nubar() {
        let (r, i) = setup(&["x", "y"], &["x^3", "x*y", "y^4"]);
        let f = r.parse("x*y^2").unwrap();
        let base = nubar_monomial(&i, &f).unwrap();
        for k in 1..=4u32 {
            assert_eq!(nubar_monomial(&ideal_power(&i, k), &f).unwrap(), base.div_int(k as u64));
            assert_eq!(nubar_monomial(&i, &f.pow(k)).unwrap(), base.mul_int(k as u64));
        }
    }

    #[test]
    fn valuation_values() {
        let (r, i) = setup(&["x", "y"], &["x^2 - y^3"]);
        let v = MonomialValuation::new(vec![Rational::from_integer(3.into()), Rational::from_integer(2.into())]);
        assert_eq!(v.value(&r.parse("x*y").unwrap()), ExtendedRational::from_int(5));
        assert_eq!(v.ideal_value(&i), ExtendedRational::from_int(6));
        assert_eq!(v.value(&r.zero()), ExtendedRational::Infinity);
    }
}
