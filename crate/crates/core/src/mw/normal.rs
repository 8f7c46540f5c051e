//! Normal forms of Milnor–Witt expressions.
//!
//! The coordinate group of `K^MW_m(F)` is the fiber product
//! `K^M_m(F) ×_{I^m/I^{m+1}} I^m` (with `I^m = W` for `m < 0`), modelled as:
//!
//! | field | `m >= 2` | `m = 1` | `m = 0` | `m < 0` |
//! |-------|----------|---------|---------|---------|
//! | `F_q` | 0 | `(log, I-bit)`, order `q - 1` | `GW` | `W` |
//! | `R`   | `Z`, `[-1]^m ↦ 1` | `Z` | `GW` | `W = Z` |
//! | `C`   | 0 | 0 | `GW = Z` | `W = Z/2` |
//!
//! Over `R` the uniquely divisible part of `K^M_m` is factored out; over `C`
//! only the vanishing `I^m` part is modelled in positive degree.

use std::fmt;

use serde::ser::SerializeMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{enumerate_units, FieldDescriptor, FieldFamily, Unit};
use crate::forms::{
    classical_pfister_form, fundamental_power_description, gw_ambient, gw_of_form, pfister,
    witt_ambient, witt_class, witt_fundamental_power, GwClass, WittClass,
};
use crate::subgroup::{Ambient, SubgroupDescription};

use super::expr::{Monomial, MwExpression};

/// The coordinate group of `K^MW_m(F)`.
pub fn kmw_ambient(field: &FieldDescriptor, m: i64) -> Ambient {
    if m == 0 {
        return gw_ambient(field);
    }
    if m < 0 {
        return witt_ambient(field);
    }
    let label = format!("K^MW_{m}({field})");
    match field.family() {
        FieldFamily::FiniteOdd if m == 1 => {
            let q = field.order().expect("finite") as i64;
            Ambient::new(
                label,
                &["milnor", "i_bit"],
                &[vec![1, 1], vec![0, 2]],
                &[vec![q - 1, 0], vec![0, 2]],
                false,
            )
        }
        FieldFamily::RealClosed => Ambient::new(label, &["i_coordinate"], &[vec![1]], &[], false),
        _ => Ambient::trivial(label),
    }
}

/// Canonical coordinates of an element of `K^MW_m(F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MwNormalForm {
    field: FieldDescriptor,
    degree: i64,
    coords: Vec<i64>,
}

impl MwNormalForm {
    pub fn zero(field: &FieldDescriptor, degree: i64) -> Self {
        let dim = kmw_ambient(field, degree).dim();
        MwNormalForm {
            field: field.clone(),
            degree,
            coords: vec![0; dim],
        }
    }

    /// Validates and reduces raw coordinates.
    pub fn from_coords(field: &FieldDescriptor, degree: i64, coords: &[i64]) -> Result<Self> {
        let ambient = kmw_ambient(field, degree);
        if !ambient.contains(coords) {
            return Err(Error::Domain(format!(
                "{coords:?} are not coordinates of {}",
                ambient.label()
            )));
        }
        Ok(MwNormalForm {
            field: field.clone(),
            degree,
            coords: ambient.reduce(coords),
        })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &MwNormalForm) -> Result<MwNormalForm> {
        self.field.check_same(&other.field)?;
        if self.degree != other.degree {
            return Err(Error::Inhomogeneous(self.degree, other.degree));
        }
        let sum: Vec<i64> = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        MwNormalForm::from_coords(&self.field, self.degree, &sum)
    }

    pub fn scale(&self, k: i64) -> MwNormalForm {
        let v: Vec<i64> = self.coords.iter().map(|a| a * k).collect();
        MwNormalForm::from_coords(&self.field, self.degree, &v).expect("lattice is a group")
    }

    /// The degree-0 value as a `GW` class.
    pub fn as_gw(&self) -> Option<GwClass> {
        (self.degree == 0).then(|| GwClass::from_coords(&self.field, &self.coords).expect("valid"))
    }

    /// The negative-degree value as a Witt class.
    pub fn as_witt(&self) -> Option<WittClass> {
        (self.degree < 0).then(|| WittClass::from_coords(&self.field, &self.coords).expect("valid"))
    }

    pub fn group_label(&self) -> String {
        kmw_ambient(&self.field, self.degree).label().to_string()
    }
}

impl fmt::Display for MwNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(x) = self.as_gw() {
            return write!(f, "{x} in {}", self.group_label());
        }
        if let Some(x) = self.as_witt() {
            return write!(f, "{x} in {}", self.group_label());
        }
        let ambient = kmw_ambient(&self.field, self.degree);
        if ambient.dim() == 0 {
            return write!(f, "0 in {}", ambient.label());
        }
        let parts: Vec<String> = ambient
            .coordinate_names()
            .iter()
            .zip(&self.coords)
            .map(|(n, c)| format!("{n} {c}"))
            .collect();
        write!(f, "({}) in {}", parts.join(", "), ambient.label())
    }
}

impl Serialize for MwNormalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ambient = kmw_ambient(&self.field, self.degree);
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("coordinate_names", ambient.coordinate_names())?;
        m.serialize_entry("coords", &self.coords)?;
        m.serialize_entry("degree", &self.degree)?;
        m.serialize_entry("field", &self.field)?;
        m.serialize_entry("group", ambient.label())?;
        m.serialize_entry("is_zero", &self.is_zero())?;
        m.end()
    }
}

/// `c · Π(<u_i> - 1)` in `GW`, the image of a monomial under the
/// η-tower identification `η^a [u_1]...[u_k] ↦ Π(<u_i> - 1)`.
fn i_part(field: &FieldDescriptor, m: &Monomial) -> GwClass {
    let symbols = m.symbols();
    let base = if symbols.is_empty() {
        GwClass::one(field)
    } else {
        pfister(&symbols).expect("nonempty, same field")
    };
    base.scale(m.coeff)
}

fn monomial_coords(field: &FieldDescriptor, degree: i64, m: &Monomial) -> Vec<i64> {
    if degree == 0 {
        return i_part(field, m).coords();
    }
    if degree < 0 {
        return witt_class(&i_part(field, m)).coords().to_vec();
    }
    match field.family() {
        FieldFamily::FiniteOdd if degree == 1 => {
            let bit = i_part(field, m).disc_dev().expect("finite field");
            let milnor = if m.eta_power() == 0 {
                let u = &m.symbols()[0];
                m.coeff * u.log().expect("finite field") as i64
            } else {
                0
            };
            let q1 = field.order().expect("finite") as i64 - 1;
            let milnor = milnor.rem_euclid(q1);
            vec![milnor, bit]
        }
        FieldFamily::RealClosed => {
            let sig = i_part(field, m).signature().expect("real field");
            let scale = (-2i64).pow(degree as u32);
            debug_assert_eq!(sig % scale, 0);
            vec![sig / scale]
        }
        _ => Vec::new(),
    }
}

/// Normal form of a homogeneous expression of the given degree.
pub fn normalize_at(e: &MwExpression, degree: i64) -> Result<MwNormalForm> {
    if let Some(d) = e.degree()? {
        if d != degree {
            return Err(Error::WrongDegree {
                expected: degree.to_string(),
                found: d,
            });
        }
    }
    let field = e.field();
    let ambient = kmw_ambient(field, degree);
    let mut acc = vec![0i64; ambient.dim()];
    for t in e.terms() {
        for (a, c) in acc.iter_mut().zip(monomial_coords(field, degree, t)) {
            *a += c;
        }
    }
    MwNormalForm::from_coords(field, degree, &acc)
}

/// Normal form of a homogeneous expression (the zero expression is taken
/// in degree 0).
pub fn normalize(e: &MwExpression) -> Result<MwNormalForm> {
    let degree = e.degree()?.unwrap_or(0);
    normalize_at(e, degree)
}

/// The isomorphism `K^MW_0(F) → GW(F)`, `η[u] ↦ <u> - 1`.
pub fn theta0(e: &MwExpression) -> Result<GwClass> {
    match e.degree()? {
        Some(d) if d != 0 => Err(Error::WrongDegree {
            expected: "0".into(),
            found: d,
        }),
        _ => Ok(normalize_at(e, 0)?.as_gw().expect("degree 0")),
    }
}

/// The identification `K^MW_m(F) ≅ W(F)` for `m < 0`.
pub fn to_witt(e: &MwExpression) -> Result<WittClass> {
    match e.degree()? {
        Some(d) if d < 0 => Ok(normalize_at(e, d)?.as_witt().expect("negative degree")),
        Some(d) => Err(Error::WrongDegree {
            expected: "< 0".into(),
            found: d,
        }),
        None => Ok(WittClass::zero(e.field())),
    }
}

/// A group generating set of `K^MW_d(F)` in the coordinate model.
pub fn kmw_generators(field: &FieldDescriptor, d: i64) -> Vec<MwExpression> {
    let g = match field.family() {
        FieldFamily::FiniteOdd => field.generator().expect("finite"),
        FieldFamily::RealClosed => field.unit_from_int(-1).expect("nonzero"),
        FieldFamily::QuadraticallyClosed => field.one(),
    };
    let mono = |a: usize, k: usize| {
        MwExpression::from_terms(field, vec![Monomial::from_parts(1, a, &vec![g.clone(); k])])
            .expect("same field")
    };
    if d >= 1 {
        let d = d as usize;
        vec![mono(0, d), mono(1, d + 1)]
    } else {
        let a = d.unsigned_abs() as usize;
        vec![mono(a, 0), mono(a + 1, 1)]
    }
}

/// Image of `×η^n : K^MW_n(F) → K^MW_0(F) = GW(F)`.
///
/// Over a finite field the source is generated by all symbol products
/// `[u_1]...[u_n]`, which are enumerated exhaustively when there are at most
/// `exhaustive_limit` of them; otherwise (and over `R`, `C`) the generating
/// set of [`kmw_generators`] is used.
pub fn eta_power_image(
    field: &FieldDescriptor,
    n: u32,
    exhaustive_limit: usize,
) -> Result<SubgroupDescription> {
    if n == 0 {
        return Err(Error::Domain("eta_power_image needs n >= 1".into()));
    }
    let mut sources = Vec::new();
    if let Some(q) = field.order() {
        let count = (q as usize - 1).checked_pow(n);
        if count.is_some_and(|c| c <= exhaustive_limit) {
            let units = enumerate_units(field)?;
            let mut idx = vec![0usize; n as usize];
            'outer: loop {
                let tuple: Vec<Unit> = idx.iter().map(|&i| units[i].clone()).collect();
                sources.push(MwExpression::symbol_product(field, &tuple)?);
                for k in (0..idx.len()).rev() {
                    idx[k] += 1;
                    if idx[k] < units.len() {
                        continue 'outer;
                    }
                    idx[k] = 0;
                }
                break;
            }
        }
    }
    if sources.is_empty() {
        sources = kmw_generators(field, n as i64);
    }
    let eta_n = MwExpression::eta(field).pow(n)?;
    let ambient = gw_ambient(field);
    let mut gens = Vec::new();
    for s in &sources {
        gens.push(theta0(&eta_n.mul(s)?)?.coords());
    }
    let label = fundamental_power_description(field, n)?.description();
    Ok(ambient.subgroup(&gens)?.with_label(label))
}

/// Outcome of [`cartesian_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartesianReport {
    pub field: String,
    pub degree: i64,
    pub symbols_checked: u64,
    /// Number of symbols whose square failed to commute.
    pub commutation_failures: u64,
    /// `|K^M_m ×_{I^m/I^{m+1}} I^m|`, by enumerating pairs.
    pub fiber_product_order: u64,
    /// Order of the coordinate group of `K^MW_m`.
    pub coordinate_group_order: u64,
    /// Number of distinct normal forms of symbol products.
    pub symbol_image_size: u64,
    pub passed: bool,
}

/// Checks the square `K^MW_m → K^M_m → I^m/I^{m+1} ← I^m ← K^MW_m` over a
/// finite field, for `m ∈ {1, 2}`.
pub fn cartesian_check(field: &FieldDescriptor, m: i64) -> Result<CartesianReport> {
    let q = field
        .order()
        .ok_or_else(|| Error::Domain(format!("cartesian_check needs a finite field, got {field}")))?;
    if !(1..=2).contains(&m) {
        return Err(Error::Domain("cartesian_check supports m = 1 or 2".into()));
    }
    let units = enumerate_units(field)?;
    let next_power = witt_fundamental_power(field, m as u32 + 1)?;

    // (a) Pf(symbol) and the I^m-image agree modulo I^{m+1}.
    let mut symbols_checked = 0u64;
    let mut failures = 0u64;
    let mut image = std::collections::BTreeSet::new();
    let mut idx = vec![0usize; m as usize];
    'outer: loop {
        let tuple: Vec<Unit> = idx.iter().map(|&i| units[i].clone()).collect();
        let nf = normalize(&MwExpression::symbol_product(field, &tuple)?)?;
        image.insert(nf.coords().to_vec());
        let pf = witt_class(&gw_of_form(&classical_pfister_form(&tuple)?));
        let ipart = witt_class(&pfister(&tuple)?);
        let diff = pf.add(&ipart.neg())?;
        if !next_power.contains(diff.coords()) {
            failures += 1;
        }
        symbols_checked += 1;
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < units.len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }

    // (b) Enumerate the fiber product. K^M_1(F_q) = F_q^x, K^M_2(F_q) = 0.
    let milnor: Vec<Option<Unit>> = if m == 1 {
        units.iter().cloned().map(Some).collect()
    } else {
        vec![None]
    };
    let i_m = fundamental_power_description(field, m as u32)?;
    let i_elems: Vec<GwClass> = [vec![0, 0], vec![0, 1]]
        .into_iter()
        .filter(|v| i_m.contains(v))
        .map(|v| GwClass::from_coords(field, &v).expect("valid"))
        .collect();
    let mut fiber = 0u64;
    for x in &milnor {
        let pf = match x {
            Some(u) => witt_class(&gw_of_form(&classical_pfister_form(std::slice::from_ref(u))?)),
            None => WittClass::zero(field),
        };
        for y in &i_elems {
            let diff = pf.add(&witt_class(y).neg())?;
            if next_power.contains(diff.coords()) {
                fiber += 1;
            }
        }
    }
    let coordinate_group_order = kmw_ambient(field, m)
        .structure()
        .order()
        .expect("finite coordinate group");
    let expected = if m == 1 { q - 1 } else { 1 };
    let passed = failures == 0
        && fiber == coordinate_group_order
        && fiber == expected
        && image.len() as u64 == coordinate_group_order;
    Ok(CartesianReport {
        field: field.to_string(),
        degree: m,
        symbols_checked,
        commutation_failures: failures,
        fiber_product_order: fiber,
        coordinate_group_order,
        symbol_image_size: image.len() as u64,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{gw_of_unit, pfister_unit};

    fn f(q: u64) -> FieldDescriptor {
        FieldDescriptor::finite(q).unwrap()
    }

    fn all_fields() -> Vec<FieldDescriptor> {
        vec![f(3), f(5), f(7), f(9), FieldDescriptor::real(), FieldDescriptor::complex()]
    }

    fn nf(field: &FieldDescriptor, s: &str) -> MwNormalForm {
        normalize(&MwExpression::parse(field, s).unwrap()).unwrap()
    }

    #[test]
    fn headline_relations_vanish() {
        for field in all_fields() {
            assert!(nf(&field, "eta*(2 + eta*[-1])").is_zero(), "{field}");
            assert!(nf(&field, "[1]").is_zero());
            assert!(to_witt(&MwExpression::parse(&field, "2*eta + eta^2*[-1]").unwrap())
                .unwrap()
                .is_zero());
        }
        assert!(nf(&f(7), "[3][5]").is_zero());
    }

    #[test]
    fn theta0_values() {
        for field in all_fields() {
            let one = MwExpression::one(&field);
            assert_eq!(theta0(&one).unwrap(), GwClass::one(&field));
            for u in field.square_class_representatives() {
                let eu = MwExpression::parse(&field, &format!("eta*[{u}]")).unwrap();
                assert_eq!(theta0(&eu).unwrap(), pfister_unit(&u));
                assert_eq!(theta0(&MwExpression::bracket(&u)).unwrap(), gw_of_unit(&u));
                let ue = MwExpression::parse(&field, &format!("[{u}]*eta")).unwrap();
                assert_eq!(theta0(&ue).unwrap(), pfister_unit(&u));
            }
        }
        assert!(matches!(
            theta0(&MwExpression::parse(&f(5), "[2]").unwrap()),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn to_witt_values() {
        let r = FieldDescriptor::real();
        let eta = MwExpression::eta(&r);
        assert_eq!(to_witt(&eta).unwrap(), witt_class(&GwClass::one(&r)));
        let e = MwExpression::parse(&r, "eta*eta*[-1]").unwrap();
        assert_eq!(to_witt(&e).unwrap().coords(), &[-2]);
        assert!(to_witt(&MwExpression::one(&r)).is_err());
    }

    #[test]
    fn bracket_square_matches_gw() {
        for q in [3u64, 5, 7, 9] {
            let field = f(q);
            for u in enumerate_units(&field).unwrap() {
                let b = MwExpression::bracket(&u);
                let sq = theta0(&b.mul(&b).unwrap()).unwrap();
                let u2 = u.mul(&u).unwrap();
                assert_eq!(sq, gw_of_unit(&u2));
                assert_eq!(sq, gw_of_unit(&u).mul(&gw_of_unit(&u)).unwrap());
            }
        }
    }

    #[test]
    fn real_positive_degree_convention() {
        let r = FieldDescriptor::real();
        for m in 1..6 {
            let e = MwExpression::symbol_product(&r, &vec![r.unit_from_int(-1).unwrap(); m]).unwrap();
            assert_eq!(normalize(&e).unwrap().coords(), &[1]);
        }
        assert_eq!(nf(&r, "[-1][2]").coords(), &[0]);
        assert_eq!(nf(&r, "eta*[-1][-1][-1]").coords(), &[-2]);
    }

    #[test]
    fn milnor_coordinate_is_logarithm() {
        let field = f(7);
        let g = field.generator().unwrap();
        let e = MwExpression::symbol(&g.pow(4));
        assert_eq!(normalize(&e).unwrap().coords(), &[4, 0]);
        let e = MwExpression::parse(&field, "[3] + [3]").unwrap();
        assert_eq!(normalize(&e).unwrap(), normalize(&MwExpression::symbol(&g.pow(2))).unwrap());
    }

    #[test]
    fn eta_images() {
        for field in all_fields() {
            for n in 1..=8u32 {
                let img = eta_power_image(&field, n, 4096).unwrap();
                assert_eq!(img, fundamental_power_description(&field, n).unwrap(), "{field} n={n}");
            }
        }
    }

    #[test]
    fn cartesian_examples() {
        let r = cartesian_check(&f(7), 1).unwrap();
        assert!(r.passed);
        assert_eq!(r.fiber_product_order, 6);
        let r = cartesian_check(&f(3), 1).unwrap();
        assert_eq!(r.fiber_product_order, 2);
        let r = cartesian_check(&f(9), 2).unwrap();
        assert!(r.passed);
        assert_eq!(r.fiber_product_order, 1);
        assert!(cartesian_check(&FieldDescriptor::real(), 1).is_err());
    }

    #[test]
    fn generators_have_right_degree() {
        for field in all_fields() {
            for d in -4..=4 {
                for g in kmw_generators(&field, d) {
                    assert_eq!(g.degree().unwrap(), Some(d));
                }
            }
        }
    }
}
