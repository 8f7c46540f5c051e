//! Concrete fields of characteristic different from two.
//!
//! Three families are supported:
//!
//! - `Fq(q)`: finite fields of odd order, with a deterministic default modulus
//!   (the lexicographically smallest monic irreducible) that can be overridden
//!   with `Fq(q;poly=...)`;
//! - `R`: a real closed field, with units carried by nonzero rationals;
//! - `C`: a quadratically closed field, with units carried by nonzero rationals.
//!
//! Only square classes of units enter the quadratic-form invariants, so the
//! rational carriers for `R` and `C` keep every computation exact.

mod finite;
mod tuples;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
pub(crate) use finite::FiniteField;

pub use finite::MAX_ORDER;
pub use tuples::{enumerate_units, sum_to_one_tuples, SumToOneTuples, DEFAULT_GRID_BOUND};

/// The three implemented field families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FieldFamily {
    FiniteOdd,
    RealClosed,
    QuadraticallyClosed,
}

#[derive(Debug)]
enum FieldInner {
    Finite(FiniteField),
    Real,
    Complex,
}

/// A concrete field. Cheap to clone.
#[derive(Clone)]
pub struct FieldDescriptor {
    inner: Arc<FieldInner>,
}

impl FieldDescriptor {
    /// `F_q` with the default modulus.
    pub fn finite(q: u64) -> Result<Self> {
        Ok(Self::from_inner(FieldInner::Finite(FiniteField::new(q, None)?)))
    }

    /// `F_q` with an explicit modulus (coefficients from low to high degree).
    pub fn finite_with_modulus(q: u64, modulus: Vec<u64>) -> Result<Self> {
        Ok(Self::from_inner(FieldInner::Finite(FiniteField::new(
            q,
            Some(modulus),
        )?)))
    }

    pub fn real() -> Self {
        Self::from_inner(FieldInner::Real)
    }

    pub fn complex() -> Self {
        Self::from_inner(FieldInner::Complex)
    }

    fn from_inner(inner: FieldInner) -> Self {
        FieldDescriptor {
            inner: Arc::new(inner),
        }
    }

    pub fn family(&self) -> FieldFamily {
        match &*self.inner {
            FieldInner::Finite(_) => FieldFamily::FiniteOdd,
            FieldInner::Real => FieldFamily::RealClosed,
            FieldInner::Complex => FieldFamily::QuadraticallyClosed,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.family() == FieldFamily::FiniteOdd
    }

    pub(crate) fn finite_field(&self) -> Option<&FiniteField> {
        match &*self.inner {
            FieldInner::Finite(f) => Some(f),
            _ => None,
        }
    }

    fn expect_finite(&self) -> &FiniteField {
        self.finite_field()
            .expect("finite-field operation on an infinite field")
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u64> {
        self.finite_field().map(|f| f.order())
    }

    pub fn characteristic(&self) -> u64 {
        self.finite_field().map_or(0, |f| f.p())
    }

    /// Degree over the prime field, for finite fields.
    pub fn degree(&self) -> Option<u32> {
        self.finite_field().map(|f| f.degree())
    }

    /// Modulus coefficients (low to high), for finite fields.
    pub fn modulus(&self) -> Option<Vec<u64>> {
        self.finite_field().map(|f| f.modulus().to_vec())
    }

    /// `|F^x / (F^x)^2|`.
    pub fn square_class_count(&self) -> usize {
        match self.family() {
            FieldFamily::FiniteOdd | FieldFamily::RealClosed => 2,
            FieldFamily::QuadraticallyClosed => 1,
        }
    }

    /// `true` when `-1` is a square, i.e. `q = 1 mod 4` for finite fields.
    pub fn minus_one_is_square(&self) -> bool {
        match self.family() {
            FieldFamily::FiniteOdd => self.order().unwrap() % 4 == 1,
            FieldFamily::RealClosed => false,
            FieldFamily::QuadraticallyClosed => true,
        }
    }

    pub fn one(&self) -> Unit {
        match &*self.inner {
            FieldInner::Finite(_) => Unit::residue(self.clone(), 1),
            _ => Unit::rational(self.clone(), BigRational::one()),
        }
    }

    /// The image of an integer; fails when it vanishes in the field.
    pub fn unit_from_int(&self, n: i64) -> Result<Unit> {
        match &*self.inner {
            FieldInner::Finite(f) => {
                let r = f.from_int(n);
                if r == 0 {
                    Err(Error::ZeroUnit)
                } else {
                    Ok(Unit::residue(self.clone(), r))
                }
            }
            _ => self.unit_from_rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn unit_from_rational(&self, r: BigRational) -> Result<Unit> {
        if r.is_zero() {
            return Err(Error::ZeroUnit);
        }
        match &*self.inner {
            FieldInner::Finite(f) => {
                let p = BigInt::from(f.p());
                let num = residue_of(r.numer(), &p);
                let den = residue_of(r.denom(), &p);
                if den == 0 {
                    return Err(Error::Domain(format!(
                        "denominator of {r} vanishes in characteristic {}",
                        f.p()
                    )));
                }
                let v = f.mul(f.from_int(num), f.inv(f.from_int(den)));
                if v == 0 {
                    Err(Error::ZeroUnit)
                } else {
                    Ok(Unit::residue(self.clone(), v))
                }
            }
            _ => Ok(Unit::rational(self.clone(), r)),
        }
    }

    /// `g^k` for the fixed multiplicative generator of a finite field.
    pub fn generator_power(&self, k: i64) -> Result<Unit> {
        let f = self.finite_field().ok_or_else(|| {
            Error::Domain(format!("generator powers need a finite field, got {self}"))
        })?;
        Ok(Unit::residue(self.clone(), f.exp(k)))
    }

    /// The fixed multiplicative generator (smallest in residue order).
    pub fn generator(&self) -> Option<Unit> {
        self.finite_field()
            .map(|f| Unit::residue(self.clone(), f.generator()))
    }

    /// A representative of the nontrivial square class, if there is one.
    pub fn nonsquare(&self) -> Option<Unit> {
        match self.family() {
            FieldFamily::FiniteOdd => self.generator(),
            FieldFamily::RealClosed => Some(self.unit_from_int(-1).unwrap()),
            FieldFamily::QuadraticallyClosed => None,
        }
    }

    /// Representatives of the square classes, the trivial class first.
    pub fn square_class_representatives(&self) -> Vec<Unit> {
        let mut reps = vec![self.one()];
        reps.extend(self.nonsquare());
        reps
    }

    /// Element with encoded residue `e` (finite fields only).
    pub(crate) fn unit_from_residue(&self, e: u32) -> Result<Unit> {
        let f = self.expect_finite();
        if e == 0 || e as u64 >= f.order() {
            return Err(Error::Domain(format!("residue {e} is not a unit of {self}")));
        }
        Ok(Unit::residue(self.clone(), e))
    }

    /// Parses a unit literal: an integer, a rational `a/b`, `g^k` (finite
    /// fields), or a polynomial in `x` (finite fields).
    pub fn parse_unit(&self, text: &str) -> Result<Unit> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty unit literal".into()));
        }
        if let Some(rest) = s.strip_prefix('g') {
            let k = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|k| k.parse::<i64>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad generator power `{text}`")))?
            };
            return self.generator_power(k);
        }
        if s.contains('x') {
            let f = self.finite_field().ok_or_else(|| {
                Error::Parse(format!("polynomial literal `{text}` needs a finite field"))
            })?;
            let coeffs = finite::parse_poly(&s, f.p())?;
            let rem = finite::poly_rem(&coeffs, f.modulus(), f.p());
            let e = f.encode(&rem);
            if e == 0 {
                return Err(Error::ZeroUnit);
            }
            return Ok(Unit::residue(self.clone(), e));
        }
        let r = parse_rational(&s)?;
        self.unit_from_rational(r)
    }

    fn same_as(&self, other: &FieldDescriptor) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return true;
        }
        match (&*self.inner, &*other.inner) {
            (FieldInner::Finite(a), FieldInner::Finite(b)) => {
                a.order() == b.order() && a.modulus() == b.modulus()
            }
            (FieldInner::Real, FieldInner::Real) => true,
            (FieldInner::Complex, FieldInner::Complex) => true,
            _ => false,
        }
    }

    pub(crate) fn check_same(&self, other: &FieldDescriptor) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

fn residue_of(n: &BigInt, p: &BigInt) -> i64 {
    let r = ((n % p) + p) % p;
    i64::try_from(r).expect("residue fits in i64")
}

/// Parses `a` or `a/b` into a rational in lowest terms.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational literal `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for FieldDescriptor {}

impl Hash for FieldDescriptor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.family().hash(state);
        if let Some(f) = self.finite_field() {
            f.order().hash(state);
            f.modulus().hash(state);
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.inner {
            FieldInner::Finite(ff) if ff.degree() == 1 => write!(f, "Fq({})", ff.order()),
            FieldInner::Finite(ff) => write!(
                f,
                "Fq({};poly={})",
                ff.order(),
                finite::format_poly(ff.modulus())
            ),
            FieldInner::Real => write!(f, "R"),
            FieldInner::Complex => write!(f, "C"),
        }
    }
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FieldDescriptor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    /// `Fq(7)`, `Fq(9;poly=x^2+1)`, `R`, `C`.
    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        match s.as_str() {
            "R" => return Ok(Self::real()),
            "C" => return Ok(Self::complex()),
            _ => {}
        }
        let body = s
            .strip_prefix("Fq(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("unknown field literal `{text}`")))?;
        let (q, poly) = match body.split_once(';') {
            Some((q, opt)) => {
                let poly = opt
                    .strip_prefix("poly=")
                    .ok_or_else(|| Error::Parse(format!("unknown field option `{opt}`")))?;
                (q, Some(poly))
            }
            None => (body, None),
        };
        let q: u64 = q
            .parse()
            .map_err(|_| Error::Parse(format!("bad field order `{q}`")))?;
        match poly {
            None => Self::finite(q),
            Some(poly) => {
                let (p, _) = finite::prime_power(q)
                    .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
                Self::finite_with_modulus(q, finite::parse_poly(poly, p)?)
            }
        }
    }
}

/// Exact value carried by a unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnitValue {
    /// Encoded residue of a finite-field element.
    Residue(u32),
    /// Nonzero rational in lowest terms.
    Rational(BigRational),
}

/// A nonzero element of a [`FieldDescriptor`].
#[derive(Clone)]
pub struct Unit {
    field: FieldDescriptor,
    value: UnitValue,
}

/// Square class of a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareClass {
    Square,
    Nonsquare,
    Positive,
    Negative,
    Trivial,
}

impl SquareClass {
    /// `true` for the class of `1`.
    pub fn is_trivial(self) -> bool {
        matches!(
            self,
            SquareClass::Square | SquareClass::Positive | SquareClass::Trivial
        )
    }

    /// 0 for the class of `1`, 1 otherwise.
    pub fn bit(self) -> u8 {
        u8::from(!self.is_trivial())
    }
}

impl Unit {
    fn residue(field: FieldDescriptor, e: u32) -> Self {
        Unit {
            field,
            value: UnitValue::Residue(e),
        }
    }

    fn rational(field: FieldDescriptor, r: BigRational) -> Self {
        Unit {
            field,
            value: UnitValue::Rational(r),
        }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn value(&self) -> &UnitValue {
        &self.value
    }

    pub(crate) fn residue_code(&self) -> Option<u32> {
        match self.value {
            UnitValue::Residue(e) => Some(e),
            UnitValue::Rational(_) => None,
        }
    }

    pub(crate) fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            UnitValue::Rational(r) => Some(r),
            UnitValue::Residue(_) => None,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            UnitValue::Residue(e) => *e == 1,
            UnitValue::Rational(r) => r.is_one(),
        }
    }

    pub fn mul(&self, other: &Unit) -> Result<Unit> {
        self.field.check_same(&other.field)?;
        Ok(match (&self.value, &other.value) {
            (UnitValue::Residue(a), UnitValue::Residue(b)) => {
                Unit::residue(self.field.clone(), self.field.expect_finite().mul(*a, *b))
            }
            (UnitValue::Rational(a), UnitValue::Rational(b)) => {
                Unit::rational(self.field.clone(), a * b)
            }
            _ => unreachable!("unit representation matches its field"),
        })
    }

    pub fn inv(&self) -> Unit {
        match &self.value {
            UnitValue::Residue(a) => {
                Unit::residue(self.field.clone(), self.field.expect_finite().inv(*a))
            }
            UnitValue::Rational(a) => Unit::rational(self.field.clone(), a.recip()),
        }
    }

    pub fn div(&self, other: &Unit) -> Result<Unit> {
        self.mul(&other.inv())
    }

    pub fn neg(&self) -> Unit {
        match &self.value {
            UnitValue::Residue(a) => {
                Unit::residue(self.field.clone(), self.field.expect_finite().neg(*a))
            }
            UnitValue::Rational(a) => Unit::rational(self.field.clone(), -a),
        }
    }

    /// Field sum; `None` when `self + other = 0`.
    pub fn add(&self, other: &Unit) -> Result<Option<Unit>> {
        self.field.check_same(&other.field)?;
        Ok(match (&self.value, &other.value) {
            (UnitValue::Residue(a), UnitValue::Residue(b)) => {
                let s = self.field.expect_finite().add(*a, *b);
                (s != 0).then(|| Unit::residue(self.field.clone(), s))
            }
            (UnitValue::Rational(a), UnitValue::Rational(b)) => {
                let s = a + b;
                (!s.is_zero()).then(|| Unit::rational(self.field.clone(), s))
            }
            _ => unreachable!("unit representation matches its field"),
        })
    }

    /// Field difference; `None` when `self = other`.
    pub fn sub(&self, other: &Unit) -> Result<Option<Unit>> {
        self.add(&other.neg())
    }

    /// `1 - self`, or `None` when `self = 1`.
    pub fn one_minus(&self) -> Option<Unit> {
        self.field.one().sub(self).expect("same field")
    }

    pub fn pow(&self, k: i64) -> Unit {
        match &self.value {
            UnitValue::Residue(a) => {
                Unit::residue(self.field.clone(), self.field.expect_finite().pow(*a, k))
            }
            UnitValue::Rational(a) => {
                let base = if k < 0 { a.recip() } else { a.clone() };
                let e = k.unsigned_abs();
                let mut out = BigRational::one();
                for _ in 0..e {
                    out *= &base;
                }
                Unit::rational(self.field.clone(), out)
            }
        }
    }

    pub fn square_class(&self) -> SquareClass {
        match &self.value {
            UnitValue::Residue(a) => {
                if self.field.expect_finite().is_square(*a) {
                    SquareClass::Square
                } else {
                    SquareClass::Nonsquare
                }
            }
            UnitValue::Rational(r) => match self.field.family() {
                FieldFamily::RealClosed if r.is_negative() => SquareClass::Negative,
                FieldFamily::RealClosed => SquareClass::Positive,
                _ => SquareClass::Trivial,
            },
        }
    }

    /// Discrete logarithm with respect to the field generator (finite fields).
    pub fn log(&self) -> Option<u64> {
        match self.value {
            UnitValue::Residue(a) => Some(self.field.expect_finite().log(a)),
            UnitValue::Rational(_) => None,
        }
    }

    /// Sign of the rational carrier (real and quadratically closed fields).
    pub fn is_negative(&self) -> bool {
        matches!(&self.value, UnitValue::Rational(r) if r.is_negative())
    }

    /// Literal that [`FieldDescriptor::parse_unit`] maps back to this unit.
    pub fn literal(&self) -> String {
        match &self.value {
            UnitValue::Residue(e) => {
                let f = self.field.expect_finite();
                if f.in_prime_field(*e) {
                    e.to_string()
                } else {
                    format!("g^{}", f.log(*e))
                }
            }
            UnitValue::Rational(r) => format_rational(r),
        }
    }
}

impl PartialEq for Unit {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for Unit {}

impl Hash for Unit {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl PartialOrd for Unit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Unit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value.cmp(&other.value)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl fmt::Debug for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.literal(), self.field)
    }
}

impl Serialize for Unit {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.literal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldDescriptor {
        FieldDescriptor::finite(q).unwrap()
    }

    #[test]
    fn add_over_f7() {
        let f7 = f(7);
        let s = f7
            .unit_from_int(3)
            .unwrap()
            .add(&f7.unit_from_int(5).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(s, f7.one());
    }

    #[test]
    fn additive_inverse_is_zero_over_r() {
        let r = FieldDescriptor::real();
        let two = r.unit_from_int(2).unwrap();
        assert!(two.add(&r.unit_from_int(-2).unwrap()).unwrap().is_none());
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = f(7).one();
        let b = f(5).one();
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch { .. })));
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn square_classes() {
        let f7 = f(7);
        assert_eq!(f7.unit_from_int(2).unwrap().square_class(), SquareClass::Square);
        assert_eq!(f7.unit_from_int(-1).unwrap().square_class(), SquareClass::Nonsquare);
        let r = FieldDescriptor::real();
        assert_eq!(r.unit_from_int(-4).unwrap().square_class(), SquareClass::Negative);
        let c = FieldDescriptor::complex();
        assert_eq!(c.unit_from_int(-4).unwrap().square_class(), SquareClass::Trivial);
    }

    #[test]
    fn square_class_map_is_a_surjective_homomorphism() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27] {
            let field = f(q);
            let units = enumerate_units(&field).unwrap();
            let squares = units.iter().filter(|u| u.square_class().is_trivial()).count();
            assert_eq!(squares as u64, (q - 1) / 2);
            for a in &units {
                for b in &units {
                    let ab = a.mul(b).unwrap();
                    assert_eq!(
                        ab.square_class().bit(),
                        a.square_class().bit() ^ b.square_class().bit()
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let field = f(q);
            let units = enumerate_units(&field).unwrap();
            for a in &units {
                assert!(a.mul(&a.inv()).unwrap().is_one());
                assert!(a.add(&a.neg()).unwrap().is_none());
                for b in &units {
                    for c in &units {
                        let l = a.mul(b).unwrap().mul(c).unwrap();
                        let r = a.mul(&b.mul(c).unwrap()).unwrap();
                        assert_eq!(l, r);
                        // a(b + c) = ab + ac, with zero tracked as None
                        let lhs = b.add(c).unwrap().map(|s| a.mul(&s).unwrap());
                        let rhs = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn field_literals_round_trip() {
        for lit in ["Fq(7)", "Fq(9;poly=x^2+1)", "Fq(27;poly=x^3+2x+1)", "R", "C"] {
            let field: FieldDescriptor = lit.parse().unwrap();
            assert_eq!(field.to_string(), lit);
        }
        let nine: FieldDescriptor = "Fq(9)".parse().unwrap();
        assert_eq!(nine.to_string(), "Fq(9;poly=x^2+1)");
        assert!("Fq(8)".parse::<FieldDescriptor>().is_err());
        assert!("Fq(12)".parse::<FieldDescriptor>().is_err());
        assert!("Fq(25;poly=x^2+1)".parse::<FieldDescriptor>().is_err());
        assert!("Q".parse::<FieldDescriptor>().is_err());
    }

    #[test]
    fn unit_literals() {
        let f9: FieldDescriptor = "Fq(9)".parse().unwrap();
        let g = f9.parse_unit("g").unwrap();
        assert_eq!(g, f9.generator().unwrap());
        assert_eq!(f9.parse_unit("g^8").unwrap(), f9.one());
        for u in enumerate_units(&f9).unwrap() {
            assert_eq!(f9.parse_unit(&u.literal()).unwrap(), u);
        }
        assert_eq!(f9.parse_unit("x^2").unwrap(), f9.unit_from_int(-1).unwrap());
        let r = FieldDescriptor::real();
        let u = r.parse_unit("-6/4").unwrap();
        assert_eq!(u.literal(), "-3/2");
        assert!(matches!(r.parse_unit("0"), Err(Error::ZeroUnit)));
        assert!(matches!(f(7).parse_unit("14"), Err(Error::ZeroUnit)));
        assert!(r.parse_unit("g^2").is_err());
        assert_eq!(f(7).parse_unit("1/2").unwrap(), f(7).unit_from_int(4).unwrap());
    }
}
