//! Exact scalar arithmetic.
//!
//! Rationals are `num_rational::BigRational`. Prime-field coefficients are
//! stored as canonical residues in `[0, p)` inside the same rational type, so a
//! single polynomial representation serves both `Q` and `F_p`; [`Field`]
//! performs the reduction after every operation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical `num/den` form; integers keep the `/1`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Accepts `n`, `-n`, or `n/d`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `F_p`, `p` a machine-word prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldElement {
    residue: u64,
    modulus: u64,
}

impl PrimeFieldElement {
    pub fn new(value: i64, modulus: u64) -> Self {
        debug_assert!(is_prime(modulus));
        let m = modulus as i128;
        let r = (value as i128).rem_euclid(m) as u64;
        PrimeFieldElement { residue: r, modulus }
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Self {
        let r = value.mod_floor(&BigInt::from(modulus));
        PrimeFieldElement {
            residue: r.to_u64().expect("residue fits in u64"),
            modulus,
        }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    fn mulmod(a: u64, b: u64, m: u64) -> u64 {
        ((a as u128 * b as u128) % m as u128) as u64
    }

    pub fn add(self, other: Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        let s = (self.residue as u128 + other.residue as u128) % self.modulus as u128;
        PrimeFieldElement { residue: s as u64, modulus: self.modulus }
    }

    pub fn neg(self) -> Self {
        let r = if self.residue == 0 { 0 } else { self.modulus - self.residue };
        PrimeFieldElement { residue: r, modulus: self.modulus }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    pub fn mul(self, other: Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        PrimeFieldElement {
            residue: Self::mulmod(self.residue, other.residue, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self.residue;
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mulmod(acc, base, self.modulus);
            }
            base = Self::mulmod(base, base, self.modulus);
            e >>= 1;
        }
        PrimeFieldElement { residue: acc, modulus: self.modulus }
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }
}

/// Coefficient field of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn from_characteristic(c: u64) -> Option<Field> {
        match c {
            0 => Some(Field::Rational),
            p if is_prime(p) => Some(Field::Prime(p)),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Maps a rational into the field; `None` when the denominator vanishes mod p.
    pub fn reduce(&self, q: &Rational) -> Option<Rational> {
        match self {
            Field::Rational => Some(q.clone()),
            Field::Prime(p) => {
                let n = PrimeFieldElement::from_bigint(q.numer(), *p);
                let d = PrimeFieldElement::from_bigint(q.denom(), *p).inv()?;
                Some(int(n.mul(d).residue() as i64))
            }
        }
    }

    pub fn from_int(&self, n: i64) -> Rational {
        self.reduce(&int(n)).expect("integers always reduce")
    }

    pub fn from_bigint(&self, n: &BigInt) -> Rational {
        self.reduce(&Rational::from_integer(n.clone()))
            .expect("integers always reduce")
    }

    pub fn add(&self, a: &Rational, b: &Rational) -> Rational {
        self.canon(a + b)
    }

    pub fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        self.canon(a - b)
    }

    pub fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        self.canon(a * b)
    }

    pub fn neg(&self, a: &Rational) -> Rational {
        self.canon(-a)
    }

    pub fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rational => Some(a.recip()),
            Field::Prime(p) => {
                let e = PrimeFieldElement::from_bigint(a.numer(), *p).inv()?;
                Some(int(e.residue() as i64))
            }
        }
    }

    /// `binomial(n, k)` as a field element (zero in `F_p` when `p` divides it).
    pub fn binomial(&self, n: u32, k: u32) -> Rational {
        if k > n {
            return Rational::zero();
        }
        let k = k.min(n - k);
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        self.from_bigint(&acc)
    }

    // Integer-valued inputs only, which is all the ring operations produce.
    fn canon(&self, q: Rational) -> Rational {
        match self {
            Field::Rational => q,
            Field::Prime(_) => self.reduce(&q).expect("prime-field residues are integral"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// A value in `Q>=0 ∪ {∞}`: the codomain of every order function here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    Finite(Rational),
    Infinity,
}

impl ExtendedRational {
    /// Panics on negative input.
    pub fn finite(q: Rational) -> Self {
        assert!(!q.is_negative(), "extended rationals are non-negative");
        ExtendedRational::Finite(q)
    }

    pub fn from_ratio(n: u64, d: u64) -> Self {
        ExtendedRational::Finite(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_int(n: u64) -> Self {
        Self::from_ratio(n, 1)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedRational::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtendedRational::Finite(q) => Some(q),
            ExtendedRational::Infinity => None,
        }
    }

    /// True for finite positive integers.
    pub fn is_positive_integer(&self) -> bool {
        matches!(self, ExtendedRational::Finite(q) if q.is_integer() && q.is_positive())
    }

    /// Division by a positive integer weight.
    pub fn div_int(&self, n: u64) -> Self {
        assert!(n > 0, "division by zero weight");
        match self {
            ExtendedRational::Finite(q) => {
                ExtendedRational::Finite(q / Rational::from_integer(BigInt::from(n)))
            }
            ExtendedRational::Infinity => ExtendedRational::Infinity,
        }
    }

    pub fn div_rational(&self, d: &Rational) -> Self {
        assert!(d.is_positive(), "division by a non-positive value");
        match self {
            ExtendedRational::Finite(q) => ExtendedRational::Finite(q / d),
            ExtendedRational::Infinity => ExtendedRational::Infinity,
        }
    }

    pub fn mul_int(&self, n: u64) -> Self {
        match self {
            ExtendedRational::Finite(q) => {
                ExtendedRational::Finite(q * Rational::from_integer(BigInt::from(n)))
            }
            ExtendedRational::Infinity if n == 0 => ExtendedRational::zero(),
            ExtendedRational::Infinity => ExtendedRational::Infinity,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedRational::Finite(q) => q.to_f64().unwrap_or(f64::NAN),
            ExtendedRational::Infinity => f64::INFINITY,
        }
    }
}

pub fn ext_add(a: &ExtendedRational, b: &ExtendedRational) -> ExtendedRational {
    match (a, b) {
        (ExtendedRational::Finite(x), ExtendedRational::Finite(y)) => {
            ExtendedRational::Finite(x + y)
        }
        _ => ExtendedRational::Infinity,
    }
}

pub fn ext_min(a: &ExtendedRational, b: &ExtendedRational) -> ExtendedRational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => a.cmp(b),
            (ExtendedRational::Finite(_), ExtendedRational::Infinity) => Ordering::Less,
            (ExtendedRational::Infinity, ExtendedRational::Finite(_)) => Ordering::Greater,
            (ExtendedRational::Infinity, ExtendedRational::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for ExtendedRational {
    type Output = ExtendedRational;

    /// `∞` absorbs.
    fn add(self, other: Self) -> Self {
        match (self, other) {
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => ExtendedRational::Finite(a + b),
            _ => ExtendedRational::Infinity,
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(q) => write!(f, "{}", format_rational(q)),
            ExtendedRational::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtendedRational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "inf" {
            return Ok(ExtendedRational::Infinity);
        }
        let q = parse_rational(s).ok_or_else(|| format!("not a rational: {s:?}"))?;
        if q.is_negative() {
            return Err(format!("negative value {s:?} is not an order value"));
        }
        Ok(ExtendedRational::Finite(q))
    }
}

impl Serialize for ExtendedRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtendedRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for plain rationals as `"num/den"` strings.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: u64, d: u64) -> ExtendedRational {
        ExtendedRational::from_ratio(n, d)
    }

    #[test]
    fn ext_add_examples() {
        assert_eq!(ext_add(&q(3, 2), &q(1, 3)), q(11, 6));
        assert_eq!(ext_add(&ExtendedRational::Infinity, &q(5, 1)), ExtendedRational::Infinity);
        assert_eq!(ext_add(&q(0, 1), &q(0, 1)), q(0, 1));
    }

    #[test]
    fn ext_min_examples() {
        assert_eq!(ext_min(&q(3, 2), &q(2, 1)), q(3, 2));
        assert_eq!(ext_min(&ExtendedRational::Infinity, &q(7, 3)), q(7, 3));
        assert_eq!(
            ext_min(&ExtendedRational::Infinity, &ExtendedRational::Infinity),
            ExtendedRational::Infinity
        );
    }

    #[test]
    fn serialization_forms() {
        assert_eq!(q(5, 6).to_string(), "5/6");
        assert_eq!(q(2, 1).to_string(), "2");
        assert_eq!(ExtendedRational::Infinity.to_string(), "inf");
        assert_eq!("2".parse::<ExtendedRational>().unwrap(), q(2, 1));
        assert_eq!("10/4".parse::<ExtendedRational>().unwrap(), q(5, 2));
        assert!("-1/2".parse::<ExtendedRational>().is_err());
        let js = serde_json::to_string(&q(3, 2)).unwrap();
        assert_eq!(js, "\"3/2\"");
    }

    #[test]
    fn field_axioms_exhaustive_small_primes() {
        for p in [2u64, 3, 5, 7] {
            let els: Vec<_> = (0..p as i64).map(|v| PrimeFieldElement::new(v, p)).collect();
            let zero = PrimeFieldElement::new(0, p);
            let one = PrimeFieldElement::new(1, p);
            for &a in &els {
                assert_eq!(a.add(zero), a);
                assert_eq!(a.mul(one), a);
                assert_eq!(a.add(a.neg()), zero);
                if !a.is_zero() {
                    assert_eq!(a.mul(a.inv().unwrap()), one);
                }
                for &b in &els {
                    assert_eq!(a.add(b), b.add(a));
                    assert_eq!(a.mul(b), b.mul(a));
                    for &c in &els {
                        assert_eq!(a.add(b).add(c), a.add(b.add(c)));
                        assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
                        assert_eq!(a.mul(b.add(c)), a.mul(b).add(a.mul(c)));
                    }
                }
            }
        }
    }

    #[test]
    fn field_inverse_p11() {
        for v in 1..11 {
            let a = PrimeFieldElement::new(v, 11);
            assert_eq!(a.mul(a.inv().unwrap()).residue(), 1);
        }
    }

    #[test]
    fn binomials_reduce_mod_p() {
        let f2 = Field::Prime(2);
        assert_eq!(f2.binomial(6, 4), int(1)); // 15
        assert_eq!(f2.binomial(4, 2), int(0)); // 6
        assert_eq!(Field::Rational.binomial(6, 4), int(15));
        assert_eq!(Field::Prime(3).reduce(&rat(1, 3)), None);
        assert_eq!(Field::Prime(2).reduce(&rat(1, 3)), Some(int(1)));
    }

    proptest! {
        #[test]
        fn rational_products_are_exact(n in -1000i64..1000, d in 1i64..1000) {
            prop_assume!(n != 0);
            let a = rat(n, d);
            prop_assert!((a.clone() * a.recip()).is_one());
        }

        #[test]
        fn extended_order_is_total_with_infinity_max(
            xs in proptest::collection::vec(proptest::option::of((0u64..50, 1u64..20)), 3)
        ) {
            let vals: Vec<ExtendedRational> = xs
                .iter()
                .map(|x| x.map(|(n, d)| q(n, d)).unwrap_or(ExtendedRational::Infinity))
                .collect();
            let (a, b, c) = (&vals[0], &vals[1], &vals[2]);
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
            prop_assert!(*a <= ExtendedRational::Infinity);
            if a.is_infinite() {
                prop_assert!(b <= a);
            }
            prop_assert_eq!(ext_min(a, b), ext_min(b, a));
        }
    }
}
