//! Exact scalar fields: the rationals and word-sized prime fields.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    /// Parses `Q` or `Fp:<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix("Fp:")
            .or_else(|| s.strip_prefix("F"))
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}`")))?;
        let p: u32 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad characteristic in `{s}`")))?;
        FieldSpec::prime(p)
    }

    pub fn prime(p: u32) -> Result<Self> {
        if p < 2 || p > (1u32 << 31) || !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not a prime ≤ 2^31")));
        }
        Ok(FieldSpec::PrimeField(p))
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field. Elements are plain values; all arithmetic goes through the
/// field object so that prime fields can carry their modulus.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Maps an exact rational into the field; fails when the denominator
    /// vanishes in positive characteristic.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
    /// Canonical exact text form (`-3/2` over Q, a residue in `[0, p)` over F_p).
    fn format(&self, a: &Self::Elem) -> String;
    /// All field elements, for finite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn parse(&self, s: &str) -> Result<Self::Elem> {
        self.from_rational(&parse_rational(s)?)
    }

    fn characteristic(&self) -> u32 {
        self.spec().characteristic()
    }
}

/// Parses `"-3/2"`, `"7"`, `"0"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
}

/// `Z/pZ` for a prime `p < 2^31`; residues are kept in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        FieldSpec::prime(p)?;
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let p = self.p as u64;
        let mut r = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    fn reduce_big(&self, n: &BigInt) -> u32 {
        let p = BigInt::from(self.p);
        n.mod_floor(&p).to_u32().expect("residue fits")
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a as u64, self.p as u64 - 2) as u32)
        }
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn from_rational(&self, q: &BigRational) -> Result<u32> {
        let num = self.reduce_big(q.numer());
        let den = self.reduce_big(q.denom());
        self.inv(&den)
            .map(|d| self.mul(&num, &d))
            .ok_or_else(|| Error::Parse(format!("denominator of {q} vanishes mod {}", self.p)))
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.p).collect())
    }
}

/// Distinct integers used as "generic" coefficients: 2, 3, 5, 7, 11, ...
pub(crate) fn generic_coefficients(count: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u32;
    while out.len() < count {
        if is_prime(n) {
            out.push(n as i64);
        }
        n += 1;
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_text_round_trip() {
        let f = Rationals;
        let x = f.parse("-6/4").unwrap();
        assert_eq!(f.format(&x), "-3/2");
        assert_eq!(f.format(&f.parse("4/2").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn prime_field_from_rational() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.from_rational(&q(1, 2)).unwrap(), 3);
        assert_eq!(f.from_rational(&q(-1, 1)).unwrap(), 4);
        assert!(f.from_rational(&q(1, 5)).is_err());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("Fp:3").unwrap(), FieldSpec::PrimeField(3));
        assert!(FieldSpec::parse("Fp:4").is_err());
        assert!(FieldSpec::parse("R").is_err());
    }

    fn axioms<F: Field>(f: &F, a: F::Elem, b: F::Elem, c: F::Elem) {
        assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        assert_eq!(
            f.mul(&a, &f.add(&b, &c)),
            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
        );
        assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
        if let Some(ai) = f.inv(&a) {
            assert!(f.is_one(&f.mul(&a, &ai)));
        } else {
            assert!(f.is_zero(&a));
        }
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20, e in -9i64..9) {
            axioms(&Rationals, q(a, b), q(c, d), q(e, 1));
        }

        #[test]
        fn prime_field_axioms(p in prop::sample::select(vec![2u32, 3, 5, 7, 101, 2147483647]), a: i64, b: i64, c: i64) {
            let f = PrimeField::new(p).unwrap();
            axioms(&f, f.from_i64(a), f.from_i64(b), f.from_i64(c));
        }
    }
}
