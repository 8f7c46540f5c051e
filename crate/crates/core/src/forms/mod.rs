//! Grothendieck–Witt and Witt rings through complete invariants.
//!
//! Coordinates of a class in `GW(F)`:
//!
//! - `F_q`: `(rank, disc_dev)`, where `disc_dev` is the square class of the
//!   determinant, i.e. whether it deviates from that of `<1,...,1>`;
//! - `R`: `(rank, signature)`;
//! - `C`: `(rank)`.
//!
//! `W(F)` is the quotient by the hyperbolic plane `<1,-1>`.

pub mod oracle;

use std::fmt;

use serde::ser::SerializeMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldFamily, Unit};
use crate::subgroup::{Ambient, SubgroupDescription};

/// Diagonal form `<a_1, ..., a_n>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    field: FieldDescriptor,
    diagonal: Vec<Unit>,
}

impl QuadraticForm {
    pub fn new(field: &FieldDescriptor, diagonal: Vec<Unit>) -> Result<Self> {
        for u in &diagonal {
            field.check_same(u.field())?;
        }
        Ok(QuadraticForm {
            field: field.clone(),
            diagonal,
        })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn diagonal(&self) -> &[Unit] {
        &self.diagonal
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn orthogonal_sum(&self, other: &QuadraticForm) -> Result<QuadraticForm> {
        self.field.check_same(&other.field)?;
        let mut d = self.diagonal.clone();
        d.extend(other.diagonal.iter().cloned());
        QuadraticForm::new(&self.field, d)
    }

    pub fn tensor(&self, other: &QuadraticForm) -> Result<QuadraticForm> {
        self.field.check_same(&other.field)?;
        let mut d = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.diagonal {
            for b in &other.diagonal {
                d.push(a.mul(b)?);
            }
        }
        QuadraticForm::new(&self.field, d)
    }

    /// Parses `<a1,a2,...>`; `<>` is the zero form.
    pub fn parse(field: &FieldDescriptor, text: &str) -> Result<Self> {
        let s = text.trim();
        let body = s
            .strip_prefix('<')
            .and_then(|b| b.strip_suffix('>'))
            .ok_or_else(|| Error::Parse(format!("form literal must look like <a,b,...>: `{text}`")))?;
        let diagonal = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|t| field.parse_unit(t))
                .collect::<Result<Vec<_>>>()?
        };
        QuadraticForm::new(field, diagonal)
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.diagonal.iter().map(|u| u.literal()).collect();
        write!(f, "<{}>", entries.join(","))
    }
}

/// Class in `GW(F)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GwClass {
    field: FieldDescriptor,
    rank: i64,
    /// `disc_dev` over `F_q`, signature over `R`, unused (0) over `C`.
    second: i64,
}

impl GwClass {
    /// Builds a class from ambient coordinates, validating them.
    pub fn from_coords(field: &FieldDescriptor, coords: &[i64]) -> Result<Self> {
        let bad = || {
            Error::Domain(format!(
                "{coords:?} are not GW coordinates over {field}"
            ))
        };
        let (rank, second) = match (field.family(), coords) {
            (FieldFamily::FiniteOdd, &[r, d]) => (r, d.rem_euclid(2)),
            (FieldFamily::RealClosed, &[r, s]) => {
                if (r - s).rem_euclid(2) != 0 {
                    return Err(bad());
                }
                (r, s)
            }
            (FieldFamily::QuadraticallyClosed, &[r]) => (r, 0),
            _ => return Err(bad()),
        };
        Ok(GwClass {
            field: field.clone(),
            rank,
            second,
        })
    }

    pub fn zero(field: &FieldDescriptor) -> Self {
        GwClass {
            field: field.clone(),
            rank: 0,
            second: 0,
        }
    }

    pub fn one(field: &FieldDescriptor) -> Self {
        gw_of_unit(&field.one())
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn disc_dev(&self) -> Option<i64> {
        (self.field.family() == FieldFamily::FiniteOdd).then_some(self.second)
    }

    pub fn signature(&self) -> Option<i64> {
        (self.field.family() == FieldFamily::RealClosed).then_some(self.second)
    }

    /// Coordinates in [`gw_ambient`].
    pub fn coords(&self) -> Vec<i64> {
        match self.field.family() {
            FieldFamily::QuadraticallyClosed => vec![self.rank],
            _ => vec![self.rank, self.second],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.second == 0
    }

    pub fn add(&self, other: &GwClass) -> Result<GwClass> {
        self.field.check_same(&other.field)?;
        let second = match self.field.family() {
            FieldFamily::FiniteOdd => self.second ^ other.second,
            FieldFamily::RealClosed => self.second + other.second,
            FieldFamily::QuadraticallyClosed => 0,
        };
        Ok(GwClass {
            field: self.field.clone(),
            rank: self.rank + other.rank,
            second,
        })
    }

    pub fn neg(&self) -> GwClass {
        let second = match self.field.family() {
            FieldFamily::RealClosed => -self.second,
            _ => self.second,
        };
        GwClass {
            field: self.field.clone(),
            rank: -self.rank,
            second,
        }
    }

    pub fn sub(&self, other: &GwClass) -> Result<GwClass> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &GwClass) -> Result<GwClass> {
        self.field.check_same(&other.field)?;
        let second = match self.field.family() {
            // det(f ⊗ g) = det(f)^rank(g) det(g)^rank(f)
            FieldFamily::FiniteOdd => {
                (other.rank * self.second + self.rank * other.second).rem_euclid(2)
            }
            FieldFamily::RealClosed => self.second * other.second,
            FieldFamily::QuadraticallyClosed => 0,
        };
        Ok(GwClass {
            field: self.field.clone(),
            rank: self.rank * other.rank,
            second,
        })
    }

    pub fn scale(&self, k: i64) -> GwClass {
        let second = match self.field.family() {
            FieldFamily::FiniteOdd => (k * self.second).rem_euclid(2),
            FieldFamily::RealClosed => k * self.second,
            FieldFamily::QuadraticallyClosed => 0,
        };
        GwClass {
            field: self.field.clone(),
            rank: k * self.rank,
            second,
        }
    }
}

impl fmt::Display for GwClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field.family() {
            FieldFamily::FiniteOdd => write!(f, "(rank {}, disc_dev {})", self.rank, self.second),
            FieldFamily::RealClosed => write!(f, "(rank {}, signature {})", self.rank, self.second),
            FieldFamily::QuadraticallyClosed => write!(f, "(rank {})", self.rank),
        }
    }
}

impl Serialize for GwClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        if let Some(d) = self.disc_dev() {
            m.serialize_entry("disc_dev", &d)?;
        }
        m.serialize_entry("field", &self.field)?;
        m.serialize_entry("rank", &self.rank)?;
        if let Some(sig) = self.signature() {
            m.serialize_entry("signature", &sig)?;
        }
        m.end()
    }
}

/// Class of `<u>`.
pub fn gw_of_unit(u: &Unit) -> GwClass {
    let field = u.field().clone();
    let second = match field.family() {
        FieldFamily::FiniteOdd => i64::from(u.square_class().bit()),
        FieldFamily::RealClosed => {
            if u.is_negative() {
                -1
            } else {
                1
            }
        }
        FieldFamily::QuadraticallyClosed => 0,
    };
    GwClass {
        field,
        rank: 1,
        second,
    }
}

pub fn gw_of_form(form: &QuadraticForm) -> GwClass {
    form.diagonal
        .iter()
        .map(gw_of_unit)
        .fold(GwClass::zero(&form.field), |acc, c| {
            acc.add(&c).expect("same field")
        })
}

/// The hyperbolic plane `<1,-1>`.
pub fn hyperbolic(field: &FieldDescriptor) -> GwClass {
    gw_of_unit(&field.one())
        .add(&gw_of_unit(&field.one().neg()))
        .expect("same field")
}

/// `<u> - <1>`.
pub fn pfister_unit(u: &Unit) -> GwClass {
    gw_of_unit(u).sub(&GwClass::one(u.field())).expect("same field")
}

/// The rank-0 Pfister element `(<u_1> - 1)(<u_2> - 1)...(<u_n> - 1)`.
pub fn pfister(units: &[Unit]) -> Result<GwClass> {
    let (first, rest) = units
        .split_first()
        .ok_or_else(|| Error::Domain("pfister needs at least one unit".into()))?;
    let mut acc = pfister_unit(first);
    for u in rest {
        first.field().check_same(u.field())?;
        acc = acc.mul(&pfister_unit(u))?;
    }
    Ok(acc)
}

/// The classical rank-`2^n` Pfister form `<1,-u_1> ⊗ ... ⊗ <1,-u_n>`.
pub fn classical_pfister_form(units: &[Unit]) -> Result<QuadraticForm> {
    let field = units
        .first()
        .ok_or_else(|| Error::Domain("pfister needs at least one unit".into()))?
        .field()
        .clone();
    let mut form = QuadraticForm::new(&field, vec![field.one()])?;
    for u in units {
        let factor = QuadraticForm::new(&field, vec![field.one(), u.neg()])?;
        form = form.tensor(&factor)?;
    }
    Ok(form)
}

/// Decides `x ∈ I(F)^n`.
pub fn in_fundamental_power(x: &GwClass, n: u32) -> bool {
    if n == 0 {
        return true;
    }
    match x.field.family() {
        FieldFamily::FiniteOdd => x.rank == 0 && (n == 1 || x.second == 0),
        FieldFamily::RealClosed => {
            x.rank == 0 && n < 63 && x.second.rem_euclid(1i64 << n) == 0
        }
        FieldFamily::QuadraticallyClosed => x.is_zero(),
    }
}

fn pow2(n: u32) -> Result<i64> {
    1i64.checked_shl(n)
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::BoundExceeded(format!("2^{n} does not fit in 64 bits")))
}

/// The coordinate group `GW(F)`.
pub fn gw_ambient(field: &FieldDescriptor) -> Ambient {
    let label = format!("GW({field})");
    match field.family() {
        FieldFamily::FiniteOdd => Ambient::new(
            label,
            &["rank", "disc_dev"],
            &[vec![1, 0], vec![0, 1]],
            &[vec![0, 2]],
            true,
        ),
        FieldFamily::RealClosed => Ambient::new(
            label,
            &["rank", "signature"],
            &[vec![1, 1], vec![0, 2]],
            &[],
            true,
        ),
        FieldFamily::QuadraticallyClosed => Ambient::new(label, &["rank"], &[vec![1]], &[], true),
    }
}

/// `I(F)^n ⊆ GW(F)`.
pub fn fundamental_power_description(field: &FieldDescriptor, n: u32) -> Result<SubgroupDescription> {
    let ambient = gw_ambient(field);
    if n == 0 {
        return Ok(ambient.full().with_label("full"));
    }
    Ok(match field.family() {
        FieldFamily::FiniteOdd if n == 1 => ambient.subgroup(&[vec![0, 1]])?.with_label("rank 0"),
        FieldFamily::RealClosed => {
            let g = pow2(n)?;
            ambient
                .subgroup(&[vec![0, g]])?
                .with_label(format!("signature ∈ {g}ℤ, rank 0"))
        }
        _ => ambient.zero().with_label("zero"),
    })
}

/// Class in `W(F)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WittClass {
    field: FieldDescriptor,
    coords: Vec<i64>,
}

/// Shape of `W(F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WittShape {
    /// `Z/4`, for `F_q` with `q = 3 mod 4`.
    Cyclic4,
    /// `Z/2 × Z/2`, for `F_q` with `q = 1 mod 4`.
    Klein,
    /// `Z` via the signature.
    Signature,
    /// `Z/2` via the rank parity.
    Parity,
}

pub fn witt_shape(field: &FieldDescriptor) -> WittShape {
    match field.family() {
        FieldFamily::FiniteOdd if field.minus_one_is_square() => WittShape::Klein,
        FieldFamily::FiniteOdd => WittShape::Cyclic4,
        FieldFamily::RealClosed => WittShape::Signature,
        FieldFamily::QuadraticallyClosed => WittShape::Parity,
    }
}

/// The coordinate group `W(F)`.
pub fn witt_ambient(field: &FieldDescriptor) -> Ambient {
    let label = format!("W({field})");
    match witt_shape(field) {
        WittShape::Cyclic4 => Ambient::new(label, &["witt"], &[vec![1]], &[vec![4]], false),
        WittShape::Klein => Ambient::new(
            label,
            &["rank_parity", "disc_dev"],
            &[vec![1, 0], vec![0, 1]],
            &[vec![2, 0], vec![0, 2]],
            false,
        ),
        WittShape::Signature => Ambient::new(label, &["signature"], &[vec![1]], &[], false),
        WittShape::Parity => Ambient::new(label, &["rank_parity"], &[vec![1]], &[vec![2]], false),
    }
}

/// `I(F)^n` inside `W(F)`.
pub fn witt_fundamental_power(field: &FieldDescriptor, n: u32) -> Result<SubgroupDescription> {
    let ambient = witt_ambient(field);
    if n == 0 {
        return Ok(ambient.full().with_label("full"));
    }
    Ok(match witt_shape(field) {
        WittShape::Cyclic4 if n == 1 => ambient.subgroup(&[vec![2]])?.with_label("2·W"),
        WittShape::Klein if n == 1 => ambient.subgroup(&[vec![0, 1]])?.with_label("even rank"),
        WittShape::Signature => {
            let g = pow2(n)?;
            ambient
                .subgroup(&[vec![g]])?
                .with_label(format!("signature ∈ {g}ℤ"))
        }
        _ => ambient.zero().with_label("zero"),
    })
}

pub fn witt_class(x: &GwClass) -> WittClass {
    let coords = match witt_shape(&x.field) {
        WittShape::Cyclic4 => vec![(x.rank + 2 * x.second).rem_euclid(4)],
        WittShape::Klein => vec![x.rank.rem_euclid(2), x.second],
        WittShape::Signature => vec![x.second],
        WittShape::Parity => vec![x.rank.rem_euclid(2)],
    };
    WittClass {
        field: x.field.clone(),
        coords,
    }
}

impl WittClass {
    pub fn from_coords(field: &FieldDescriptor, coords: &[i64]) -> Result<Self> {
        let ambient = witt_ambient(field);
        if !ambient.contains(coords) {
            return Err(Error::Domain(format!(
                "{coords:?} are not W coordinates over {field}"
            )));
        }
        Ok(WittClass {
            field: field.clone(),
            coords: ambient.reduce(coords),
        })
    }

    pub fn zero(field: &FieldDescriptor) -> Self {
        witt_class(&GwClass::zero(field))
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    /// Canonical coordinates in [`witt_ambient`].
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// A `GW` class mapping to this Witt class.
    pub fn lift(&self) -> GwClass {
        let (rank, second) = match witt_shape(&self.field) {
            WittShape::Cyclic4 => (self.coords[0], 0),
            WittShape::Klein => (self.coords[0], self.coords[1]),
            WittShape::Signature => (self.coords[0].abs(), self.coords[0]),
            WittShape::Parity => (self.coords[0], 0),
        };
        GwClass {
            field: self.field.clone(),
            rank,
            second,
        }
    }

    pub fn add(&self, other: &WittClass) -> Result<WittClass> {
        Ok(witt_class(&self.lift().add(&other.lift())?))
    }

    pub fn neg(&self) -> WittClass {
        witt_class(&self.lift().neg())
    }

    pub fn mul(&self, other: &WittClass) -> Result<WittClass> {
        Ok(witt_class(&self.lift().mul(&other.lift())?))
    }

    pub fn scale(&self, k: i64) -> WittClass {
        witt_class(&self.lift().scale(k))
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match witt_shape(&self.field) {
            WittShape::Cyclic4 => write!(f, "{} mod 4", self.coords[0]),
            WittShape::Klein => write!(f, "({}, {}) in Z/2 × Z/2", self.coords[0], self.coords[1]),
            WittShape::Signature => write!(f, "signature {}", self.coords[0]),
            WittShape::Parity => write!(f, "{} mod 2", self.coords[0]),
        }
    }
}

impl Serialize for WittClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("coords", &self.coords)?;
        m.serialize_entry("field", &self.field)?;
        m.serialize_entry("shape", &witt_shape(&self.field))?;
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::enumerate_units;

    fn f(q: u64) -> FieldDescriptor {
        FieldDescriptor::finite(q).unwrap()
    }

    fn form(field: &FieldDescriptor, s: &str) -> QuadraticForm {
        QuadraticForm::parse(field, s).unwrap()
    }

    #[test]
    fn invariants_of_forms() {
        let r = FieldDescriptor::real();
        let c = gw_of_form(&form(&r, "<1,-1>"));
        assert_eq!((c.rank(), c.signature()), (2, Some(0)));
        let c = gw_of_form(&form(&f(7), "<2>"));
        assert_eq!((c.rank(), c.disc_dev()), (1, Some(0)));
        assert!(gw_of_form(&form(&f(7), "<>")).is_zero());
    }

    #[test]
    fn hyperbolic_planes() {
        assert_eq!(hyperbolic(&FieldDescriptor::real()).coords(), vec![2, 0]);
        assert_eq!(hyperbolic(&f(7)).coords(), vec![2, 1]);
        assert_eq!(hyperbolic(&f(5)).coords(), vec![2, 0]);
        assert_eq!(hyperbolic(&FieldDescriptor::complex()).coords(), vec![2]);
        for field in [f(3), f(5), f(7), f(9), FieldDescriptor::real(), FieldDescriptor::complex()] {
            assert!(witt_class(&hyperbolic(&field)).is_zero());
        }
        let r = FieldDescriptor::real();
        let h = hyperbolic(&r);
        assert_eq!(h.add(&h).unwrap().coords(), vec![4, 0]);
    }

    #[test]
    fn pfister_examples() {
        let r = FieldDescriptor::real();
        let m1 = r.unit_from_int(-1).unwrap();
        assert_eq!(pfister(&[m1.clone()]).unwrap().coords(), vec![0, -2]);
        assert_eq!(pfister(&[m1.clone(), m1.clone()]).unwrap().coords(), vec![0, 4]);
        assert!(pfister(&[r.unit_from_int(4).unwrap()]).unwrap().is_zero());
        assert!(pfister(&[]).is_err());
        let s = f(7).nonsquare().unwrap();
        let p = pfister_unit(&s);
        assert!(p.mul(&p).unwrap().is_zero());
        assert!(p.scale(2).is_zero());
    }

    #[test]
    fn fundamental_powers() {
        let r = FieldDescriptor::real();
        for n in 1..8u32 {
            let k = 1i64 << n;
            assert!(in_fundamental_power(&GwClass::from_coords(&r, &[0, 3 * k]).unwrap(), n));
            if n >= 2 {
                let x = GwClass::from_coords(&r, &[0, k - 2]).unwrap();
                assert!(!in_fundamental_power(&x, n));
            }
        }
        let d = fundamental_power_description(&r, 3).unwrap();
        assert_eq!(d.description(), "signature ∈ 8ℤ, rank 0");
        assert_eq!(d.extent(), crate::subgroup::Extent::IndexInRankZero(4));
        assert_eq!(
            fundamental_power_description(&f(5), 1).unwrap().extent(),
            crate::subgroup::Extent::Order(2)
        );
        assert!(fundamental_power_description(&FieldDescriptor::complex(), 2).unwrap().is_zero());
    }

    #[test]
    fn membership_agrees_with_description() {
        for field in [f(3), f(5), FieldDescriptor::real(), FieldDescriptor::complex()] {
            for n in 0..5u32 {
                let d = fundamental_power_description(&field, n).unwrap();
                for r in -4..=4 {
                    for s in -9..=9 {
                        let coords = match field.family() {
                            FieldFamily::QuadraticallyClosed => vec![r],
                            _ => vec![r, s],
                        };
                        if let Ok(x) = GwClass::from_coords(&field, &coords) {
                            assert_eq!(
                                in_fundamental_power(&x, n),
                                d.contains(&x.coords()),
                                "{field} n={n} {coords:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn witt_structure() {
        let f3 = f(3);
        let one = witt_class(&GwClass::one(&f3));
        let orders: Vec<bool> = (1..=4).map(|k| one.scale(k).is_zero()).collect();
        assert_eq!(orders, [false, false, false, true]);
        let f5 = f(5);
        assert!(witt_class(&GwClass::one(&f5)).scale(2).is_zero());
        assert_eq!(witt_ambient(&f5).structure().to_string(), "Z/2 ⊕ Z/2");
        assert_eq!(witt_ambient(&f3).structure().to_string(), "Z/4");
    }

    #[test]
    fn witt_is_ring_map_with_hyperbolic_kernel() {
        for q in [3u64, 5, 7, 9, 13] {
            let field = f(q);
            let h = hyperbolic(&field);
            let mut elems = Vec::new();
            for r in -3..=3 {
                for d in 0..2 {
                    elems.push(GwClass::from_coords(&field, &[r, d]).unwrap());
                }
            }
            for x in &elems {
                let multiple_of_h = (-3..=3).any(|k| h.scale(k) == *x);
                assert_eq!(witt_class(x).is_zero(), multiple_of_h, "q={q} {x}");
                for y in &elems {
                    assert_eq!(
                        witt_class(&x.add(y).unwrap()),
                        witt_class(x).add(&witt_class(y)).unwrap()
                    );
                    assert_eq!(
                        witt_class(&x.mul(y).unwrap()),
                        witt_class(x).mul(&witt_class(y)).unwrap()
                    );
                }
            }
            let image: std::collections::HashSet<_> = elems.iter().map(witt_class).collect();
            assert_eq!(image.len(), 4);
        }
    }

    #[test]
    fn ideal_powers_multiply() {
        for q in [3u64, 5, 7] {
            let field = f(q);
            let units = enumerate_units(&field).unwrap();
            let i1: Vec<GwClass> = units.iter().map(pfister_unit).collect();
            for x in &i1 {
                assert!(in_fundamental_power(x, 1));
                for y in &i1 {
                    assert!(in_fundamental_power(&x.mul(y).unwrap(), 2));
                }
            }
        }
    }
}
