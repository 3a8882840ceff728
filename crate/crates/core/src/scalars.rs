//! Exact scalar fields: arbitrary-precision rationals and prime fields `F_p`
//! with `p < 2^31`, plus the reduction / reconstruction bridges between them.
//!
//! Linear algebra in this crate is written against the [`Field`] trait, which
//! is a *context* object: the field carries whatever runtime data it needs
//! (the modulus for `F_p`) and elements are plain values. This keeps the
//! prime-field inner loops on bare `u32`s.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    MixedFields,
    #[error("bad reduction: {p} divides the denominator")]
    BadReduction { p: u32 },
    #[error("no rational reconstruction within the bound")]
    NoReconstruction,
    #[error("modulus product too small for the requested bound")]
    InsufficientModulus,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ScalarError> {
        let d: BigInt = denom.into();
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), d)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl std::ops::Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl std::ops::Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl std::ops::Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScalarError::Parse(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                Rational::new(n, d).map_err(|_| bad())
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rational::from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// Residue class modulo a prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeFieldElement {
    pub residue: u32,
    pub modulus: u32,
}

impl PrimeFieldElement {
    pub fn new(value: i64, modulus: u32) -> Result<Self, ScalarError> {
        let field = PrimeField::new(modulus)?;
        Ok(PrimeFieldElement {
            residue: field.from_i64(value),
            modulus,
        })
    }
}

/// A value in either scalar field, for APIs that accept both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(Rational),
    Mod(PrimeFieldElement),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Field arithmetic on tagged scalars. Both operands must be in the same field.
pub fn field_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, ScalarError> {
    match (a, b) {
        (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(match op {
            ArithOp::Add => x + y,
            ArithOp::Sub => x - y,
            ArithOp::Mul => x * y,
            ArithOp::Div => x * &y.recip()?,
        })),
        (Scalar::Mod(x), Scalar::Mod(y)) => {
            if x.modulus != y.modulus {
                return Err(ScalarError::MixedFields);
            }
            let f = PrimeField::new(x.modulus)?;
            let (u, v) = (x.residue, y.residue);
            let residue = match op {
                ArithOp::Add => f.add(&u, &v),
                ArithOp::Sub => f.sub(&u, &v),
                ArithOp::Mul => f.mul(&u, &v),
                ArithOp::Div => f.mul(&u, &f.inv(&v).ok_or(ScalarError::DivisionByZero)?),
            };
            Ok(Scalar::Mod(PrimeFieldElement {
                residue,
                modulus: x.modulus,
            }))
        }
        _ => Err(ScalarError::MixedFields),
    }
}

/// Image of a rational in `F_p`; fails when `p` divides the denominator.
pub fn reduce_mod_p(a: &Rational, p: u32) -> Result<PrimeFieldElement, ScalarError> {
    let field = PrimeField::new(p)?;
    Ok(PrimeFieldElement {
        residue: field.reduce(a)?,
        modulus: p,
    })
}

/// Chinese remaindering followed by rational reconstruction.
///
/// Returns the unique `n/d` with `|n|, d <= bound` congruent to every residue.
/// Requires the product of the moduli to exceed `2 * bound^2`.
pub fn crt_lift(residues: &[PrimeFieldElement], bound: &BigInt) -> Result<Rational, ScalarError> {
    let mut seen: Vec<PrimeFieldElement> = Vec::with_capacity(residues.len());
    for r in residues {
        match seen.iter().find(|s| s.modulus == r.modulus) {
            Some(s) if s.residue != r.residue => return Err(ScalarError::NoReconstruction),
            Some(_) => {}
            None => seen.push(*r),
        }
    }
    let (x, m) = crt_combine(&seen);
    let two_b2 = bound * bound * 2u32;
    if m <= two_b2 {
        return Err(ScalarError::InsufficientModulus);
    }
    rational_reconstruct(&x, &m, bound).ok_or(ScalarError::NoReconstruction)
}

/// Combine residues into `(x, M)` with `0 <= x < M = prod p_i`.
pub fn crt_combine(residues: &[PrimeFieldElement]) -> (BigInt, BigInt) {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for r in residues {
        let p = BigInt::from(r.modulus);
        // x' = x + m * ((r - x) * m^{-1} mod p)
        let x_mod = (&x % &p).to_u64().unwrap();
        let m_mod = (&m % &p).to_u64().unwrap();
        let f = PrimeField::new_unchecked(r.modulus);
        let m_inv = f.inv(&(m_mod as u32)).expect("distinct primes");
        let diff = f.sub(&r.residue, &(x_mod as u32));
        let t = f.mul(&diff, &m_inv);
        x += &m * BigInt::from(t);
        m *= p;
    }
    (x, m)
}

/// Wang's rational reconstruction of `x mod m` with numerator and denominator bounded by `bound`.
pub fn rational_reconstruct(x: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Rational> {
    let x = x.mod_floor(m);
    if x.is_zero() {
        return Some(Rational::zero());
    }
    let (mut r0, mut r1) = (m.clone(), x);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Rational::new(r1, t1).ok()
}

/// Exact field used by the generic linear algebra: a context object that owns
/// all runtime data (e.g. the modulus) so elements stay plain values.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn to_rational_string(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// `a - c * b`
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(c, b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, n: i64) -> Rational {
        Rational::from_integer(n)
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        a.recip().ok()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn to_rational_string(&self, a: &Rational) -> String {
        a.to_string()
    }
}

/// The prime field `F_p`, `p < 2^31`; elements are residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, ScalarError> {
        if p >= 1 << 31 || !is_prime(p as u64) {
            return Err(ScalarError::NotPrime(p as u64));
        }
        Ok(PrimeField { p })
    }

    pub(crate) fn new_unchecked(p: u32) -> Self {
        PrimeField { p }
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn reduce(&self, a: &Rational) -> Result<u32, ScalarError> {
        let p = BigInt::from(self.p);
        let d = a.denom().mod_floor(&p).to_u32().unwrap();
        let n = a.numer().mod_floor(&p).to_u32().unwrap();
        let d_inv = self.inv(&d).ok_or(ScalarError::BadReduction { p: self.p })?;
        Ok(self.mul(&n, &d_inv))
    }

    pub fn reduce_int(&self, a: &BigInt) -> u32 {
        a.mod_floor(&BigInt::from(self.p)).to_u32().unwrap()
    }

    /// Symmetric lift of a residue to `(-p/2, p/2]`.
    pub fn lift(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl Field for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (*a as u64 + self.p as u64 - *b as u64) as u32
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on i64
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u32)
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn to_rational_string(&self, a: &u32) -> String {
        a.to_string()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes below `2^31`, in decreasing order from `2^31 - 1`.
pub fn large_primes() -> impl Iterator<Item = u32> {
    (1u32..(1 << 31)).rev().step_by(2).filter(|&n| is_prime(n as u64))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scale a rational vector to a primitive integer vector (same direction, positive
/// scale). The zero vector is returned unchanged.
pub fn primitive_integer_vector(values: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(values.iter());
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&den / v.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}

pub(crate) fn bigint_sign(a: &BigInt) -> i32 {
    match a.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn rational_sum() {
        let s = field_arith(
            &Scalar::Rational(q(1, 2)),
            &Scalar::Rational(q(1, 3)),
            ArithOp::Add,
        )
        .unwrap();
        assert_eq!(s, Scalar::Rational(q(5, 6)));
    }

    #[test]
    fn prime_field_product() {
        let a = PrimeFieldElement::new(3, 7).unwrap();
        let b = PrimeFieldElement::new(5, 7).unwrap();
        let c = field_arith(&Scalar::Mod(a), &Scalar::Mod(b), ArithOp::Mul).unwrap();
        assert_eq!(
            c,
            Scalar::Mod(PrimeFieldElement {
                residue: 1,
                modulus: 7
            })
        );
    }

    #[test]
    fn division_by_zero() {
        let r = field_arith(
            &Scalar::Rational(q(3, 4)),
            &Scalar::Rational(Rational::zero()),
            ArithOp::Div,
        );
        assert_eq!(r, Err(ScalarError::DivisionByZero));
        let a = PrimeFieldElement::new(3, 7).unwrap();
        let z = PrimeFieldElement::new(0, 7).unwrap();
        assert_eq!(
            field_arith(&Scalar::Mod(a), &Scalar::Mod(z), ArithOp::Div),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn mixed_fields() {
        let a = PrimeFieldElement::new(3, 7).unwrap();
        let b = PrimeFieldElement::new(3, 11).unwrap();
        assert_eq!(
            field_arith(&Scalar::Mod(a), &Scalar::Mod(b), ArithOp::Add),
            Err(ScalarError::MixedFields)
        );
        assert_eq!(
            field_arith(&Scalar::Mod(a), &Scalar::Rational(q(1, 2)), ArithOp::Add),
            Err(ScalarError::MixedFields)
        );
    }

    #[test]
    fn reductions() {
        assert_eq!(reduce_mod_p(&q(5, 6), 7).unwrap().residue, 2);
        assert_eq!(reduce_mod_p(&Rational::zero(), 13).unwrap().residue, 0);
        assert_eq!(
            reduce_mod_p(&q(1, 3), 3),
            Err(ScalarError::BadReduction { p: 3 })
        );
        assert!(matches!(
            reduce_mod_p(&q(1, 3), 9),
            Err(ScalarError::NotPrime(9))
        ));
    }

    #[test]
    fn crt_round_trip() {
        let primes = [101u32, 103, 107];
        let res: Vec<_> = primes
            .iter()
            .map(|&p| reduce_mod_p(&q(5, 6), p).unwrap())
            .collect();
        assert_eq!(crt_lift(&res, &BigInt::from(100)).unwrap(), q(5, 6));
        let zero: Vec<_> = primes
            .iter()
            .map(|&p| reduce_mod_p(&Rational::zero(), p).unwrap())
            .collect();
        assert_eq!(crt_lift(&zero, &BigInt::from(100)).unwrap(), Rational::zero());
    }

    #[test]
    fn crt_negative_round_trip() {
        let primes = [101u32, 103, 107];
        let res: Vec<_> = primes
            .iter()
            .map(|&p| reduce_mod_p(&q(-17, 23), p).unwrap())
            .collect();
        assert_eq!(crt_lift(&res, &BigInt::from(100)).unwrap(), q(-17, 23));
    }

    #[test]
    fn crt_inconsistent() {
        // same prime, two different residues
        let r = [
            PrimeFieldElement::new(1, 101).unwrap(),
            PrimeFieldElement::new(2, 101).unwrap(),
            PrimeFieldElement::new(2, 103).unwrap(),
        ];
        assert_eq!(
            crt_lift(&r, &BigInt::from(10)),
            Err(ScalarError::NoReconstruction)
        );
        // x = 1 mod 101, 2 mod 103, 3 mod 107 has no small rational preimage: checked by
        // scanning every n/d with |n|, d <= 20 against the residues.
        let r = [
            PrimeFieldElement::new(1, 101).unwrap(),
            PrimeFieldElement::new(2, 103).unwrap(),
            PrimeFieldElement::new(3, 107).unwrap(),
        ];
        for n in -20i64..=20 {
            for d in 1i64..=20 {
                let hits = r
                    .iter()
                    .all(|e| reduce_mod_p(&q(n, d), e.modulus).unwrap().residue == e.residue);
                assert!(!hits);
            }
        }
        assert_eq!(
            crt_lift(&r, &BigInt::from(20)),
            Err(ScalarError::NoReconstruction)
        );
    }

    #[test]
    fn crt_needs_enough_modulus() {
        let r = [PrimeFieldElement::new(1, 101).unwrap()];
        assert_eq!(
            crt_lift(&r, &BigInt::from(100)),
            Err(ScalarError::InsufficientModulus)
        );
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("5/6".parse::<Rational>().unwrap(), q(5, 6));
        assert_eq!("-4/6".parse::<Rational>().unwrap().to_string(), "-2/3");
        assert_eq!("3/-6".parse::<Rational>().unwrap().to_string(), "-1/2");
        assert_eq!("7".parse::<Rational>().unwrap().to_string(), "7");
        assert_eq!("0/5".parse::<Rational>().unwrap().to_string(), "0");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
    }

    #[test]
    fn large_primes_are_31_bit() {
        let ps: Vec<u32> = large_primes().take(3).collect();
        assert_eq!(ps[0], 2147483647);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| PrimeField::new(p).is_ok()));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            let f = Rationals;
            prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            if !a.is_zero() {
                prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
            prop_assert!(a.denom() > &BigInt::zero());
        }

        #[test]
        fn prime_field_axioms(a in 0u32..2147483647, b in 0u32..2147483647, c in 0u32..2147483647) {
            let f = PrimeField::new(2147483647).unwrap();
            prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.sub(&f.add(&a, &b), &b), a);
            if a != 0 {
                prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
        }

        #[test]
        fn reduction_is_a_homomorphism(a in small_rational(), b in small_rational()) {
            let p = 1_000_003u32;
            let f = PrimeField::new(p).unwrap();
            let ra = f.reduce(&a).unwrap();
            let rb = f.reduce(&b).unwrap();
            prop_assert_eq!(f.reduce(&(&a * &b)).unwrap(), f.mul(&ra, &rb));
            prop_assert_eq!(f.reduce(&(&a + &b)).unwrap(), f.add(&ra, &rb));
        }

        #[test]
        fn crt_inverts_reduction(a in small_rational()) {
            let res: Vec<_> = [1_000_003u32, 1_000_033, 1_000_037]
                .iter()
                .map(|&p| reduce_mod_p(&a, p).unwrap())
                .collect();
            prop_assert_eq!(crt_lift(&res, &BigInt::from(1000)).unwrap(), a);
        }
    }
}
