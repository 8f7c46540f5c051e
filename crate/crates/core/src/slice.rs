//! The Tate (slice) filtration on `K^MW_{q-p}(F)` and its companions.
//!
//! `F^n π_{p,p} Σ^q S(F) = K^MW_{q-p}(F) · I(F)^{N(n-p, n-q)}` with
//! `N(a, b) = max(0, min(a, b))`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldFamily};
use crate::forms::{fundamental_power_description, gw_ambient, witt_fundamental_power};
use crate::mw::{kmw_ambient, kmw_generators, normalize_at, MwExpression};
use crate::subgroup::{QuotientDescription, SubgroupDescription};

/// `max(0, min(a, b))`.
pub fn shift_index(a: i64, b: i64) -> u32 {
    a.min(b).max(0) as u32
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationQuery {
    pub field: FieldDescriptor,
    pub n: i64,
    pub p: i64,
    pub q: i64,
}

impl FiltrationQuery {
    pub fn new(field: &FieldDescriptor, n: i64, p: i64, q: i64) -> Self {
        FiltrationQuery {
            field: field.clone(),
            n,
            p,
            q,
        }
    }

    /// `N(n - p, n - q)`.
    pub fn shift(&self) -> u32 {
        shift_index(self.n - self.p, self.n - self.q)
    }

    /// `q - p`, the Milnor–Witt degree.
    pub fn degree(&self) -> i64 {
        self.q - self.p
    }

    pub fn shifted(&self, r: i64) -> Self {
        FiltrationQuery::new(&self.field, self.n + r, self.p + r, self.q + r)
    }
}

/// `K^MW_m(F) · I(F)^n` as a subgroup of the coordinate group of `K^MW_m(F)`.
///
/// For `m < 0` this is `I^n ⊆ W`; for `m >= 0` and `n >= 1` it is the part of
/// `K^MW_m` lying over `I^{n+m}` with vanishing Milnor component.
pub fn kmw_times_in(m: i64, n: u32, field: &FieldDescriptor) -> Result<SubgroupDescription> {
    let ambient = kmw_ambient(field, m);
    if n == 0 {
        return Ok(ambient.full().with_label("full"));
    }
    if m < 0 {
        return witt_fundamental_power(field, n);
    }
    if m == 0 {
        return fundamental_power_description(field, n);
    }
    Ok(match field.family() {
        FieldFamily::RealClosed => {
            let g = 1i64
                .checked_shl(n)
                .filter(|&g| g > 0)
                .ok_or_else(|| Error::BoundExceeded(format!("2^{n} does not fit in 64 bits")))?;
            ambient
                .subgroup(&[vec![g]])?
                .with_label(format!("i_coordinate ∈ {g}ℤ"))
        }
        _ => ambient.zero().with_label("zero"),
    })
}

/// `F^n_Tate π_{p,p} Σ^q S(F)`.
pub fn tate_filtration(query: &FiltrationQuery) -> Result<SubgroupDescription> {
    if query.n <= query.p {
        return Ok(kmw_ambient(&query.field, query.degree()).full().with_label("full"));
    }
    kmw_times_in(query.degree(), query.shift(), &query.field)
}

/// `F^n / F^{n+1}`.
pub fn graded_piece(query: &FiltrationQuery) -> Result<QuotientDescription> {
    let upper = tate_filtration(query)?;
    let mut next = query.clone();
    next.n += 1;
    let lower = tate_filtration(&next)?;
    upper.quotient(&lower)
}

/// Image of `×η^M : K^MW_{m+M}(F) → K^MW_m(F)`, from a generating set of the
/// source.
pub fn eta_multiplication_image(
    field: &FieldDescriptor,
    m: i64,
    big_m: u32,
) -> Result<SubgroupDescription> {
    let eta = MwExpression::eta(field).pow(big_m)?;
    let mut gens = Vec::new();
    for g in kmw_generators(field, m + big_m as i64) {
        gens.push(normalize_at(&g.mul(&eta)?, m)?.coords().to_vec());
    }
    kmw_ambient(field, m).subgroup(&gens)
}

/// The exponent `M` with `K^MW_{q-p} I^N = η^M K^MW_{q-p+M}`.
pub fn eta_exponent(query: &FiltrationQuery) -> u32 {
    let m = query.degree();
    let n = query.shift();
    if m >= 0 {
        n
    } else {
        (-m) as u32 + n
    }
}

/// Compares the filtration subgroup with the corresponding `η^M`-image.
pub fn eta_consistency(query: &FiltrationQuery) -> Result<bool> {
    if query.n <= query.p {
        return Ok(true);
    }
    let image = eta_multiplication_image(&query.field, query.degree(), eta_exponent(query))?;
    Ok(image == tate_filtration(query)?)
}

/// Structural reason the filtration is separated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvergenceCertificate {
    /// `I^k = 0`, so every filtration has finite length.
    FiniteLength { vanishing_power: u32, statement: String },
    /// A nonzero element `x` leaves `I^n` once `2^n` exceeds `|x|`.
    TwoAdicValuation { statement: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    pub field: String,
    pub cutoff: u32,
    pub degrees: Vec<i64>,
    pub elements_checked: u64,
    /// First nonzero element found in every `F^n`, `n <= cutoff`, if any.
    pub counterexample: Option<(i64, Vec<i64>)>,
    pub certificate: ConvergenceCertificate,
    pub separated: bool,
}

/// Degrees examined by [`convergence_check`].
pub const CONVERGENCE_DEGREES: [i64; 7] = [-3, -2, -1, 0, 1, 2, 3];

/// Checks `∩_{n <= cutoff} K^MW_m I^n` contains no nonzero element from a
/// coordinate box, for each degree `m` in [`CONVERGENCE_DEGREES`], and
/// attaches a structural certificate.
pub fn convergence_check(field: &FieldDescriptor, cutoff: u32) -> Result<ConvergenceReport> {
    if cutoff < 1 {
        return Err(Error::Domain("cutoff must be at least 1".into()));
    }
    if cutoff > 30 {
        return Err(Error::BoundExceeded("cutoff above 30".into()));
    }
    let certificate = match field.family() {
        FieldFamily::FiniteOdd => {
            let ok = fundamental_power_description(field, 2)?.is_zero()
                && witt_fundamental_power(field, 2)?.is_zero();
            if !ok {
                return Err(Error::Internal("I^2 != 0 over a finite field".into()));
            }
            ConvergenceCertificate::FiniteLength {
                vanishing_power: 2,
                statement: "I² = 0".into(),
            }
        }
        FieldFamily::QuadraticallyClosed => {
            if !fundamental_power_description(field, 1)?.is_zero() {
                return Err(Error::Internal("I != 0 over C".into()));
            }
            ConvergenceCertificate::FiniteLength {
                vanishing_power: 1,
                statement: "I = 0".into(),
            }
        }
        FieldFamily::RealClosed => ConvergenceCertificate::TwoAdicValuation {
            statement: "x ∈ I^n forces 2^n | x, so x ∉ I^n once 2^n > |x|".into(),
        },
    };

    let bound = (1i64 << cutoff) - 1;
    let mut checked = 0u64;
    let mut counterexample = None;
    for &m in &CONVERGENCE_DEGREES {
        let ambient = kmw_ambient(field, m);
        let filtration: Vec<SubgroupDescription> = (0..=cutoff)
            .map(|n| kmw_times_in(m, n, field))
            .collect::<Result<_>>()?;
        for v in box_elements(field, m, bound) {
            if !ambient.contains(&v) || ambient.is_zero(&v) {
                continue;
            }
            checked += 1;
            if filtration.iter().all(|f| f.contains(&v)) && counterexample.is_none() {
                counterexample = Some((m, v));
            }
        }
    }
    Ok(ConvergenceReport {
        field: field.to_string(),
        cutoff,
        degrees: CONVERGENCE_DEGREES.to_vec(),
        elements_checked: checked,
        separated: counterexample.is_none(),
        counterexample,
        certificate,
    })
}

fn box_elements(field: &FieldDescriptor, m: i64, bound: i64) -> Vec<Vec<i64>> {
    let dim = kmw_ambient(field, m).dim();
    let ranges: Vec<(i64, i64)> = match (field.family(), m, dim) {
        (_, _, 0) => vec![],
        (FieldFamily::FiniteOdd, 1, _) => {
            let q = field.order().expect("finite") as i64;
            vec![(0, q - 2), (0, 1)]
        }
        (FieldFamily::FiniteOdd, 0, _) => vec![(-4, 4), (0, 1)],
        (FieldFamily::FiniteOdd, _, _) => vec![(0, 3); dim],
        (FieldFamily::RealClosed, 0, _) => vec![(-4, 4), (-bound, bound)],
        (FieldFamily::RealClosed, _, _) => vec![(-bound, bound)],
        (FieldFamily::QuadraticallyClosed, 0, _) => vec![(-4, 4)],
        (FieldFamily::QuadraticallyClosed, _, _) => vec![(0, 1)],
    };
    let mut out = vec![Vec::new()];
    for (lo, hi) in ranges {
        let mut next = Vec::new();
        for prefix in &out {
            for x in lo..=hi {
                let mut v = prefix.clone();
                v.push(x);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Image of `I(F)^n → GW(F)/ℓ` for an odd prime `ℓ`.
pub fn moore_filtration(ell: i64, field: &FieldDescriptor, n: u32) -> Result<SubgroupDescription> {
    if ell == 2 {
        return Err(Error::Domain("ell must be odd; ell = 2 is rejected".into()));
    }
    if !is_prime(ell) {
        return Err(Error::Domain(format!("ell = {ell} is not a prime")));
    }
    let ambient = gw_ambient(field).modulo(ell);
    let gens = fundamental_power_description(field, n)?.generators();
    let image = ambient.subgroup(&gens)?;
    let label = image.structure().to_string();
    Ok(image.with_label(label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::Extent;

    fn f(q: u64) -> FieldDescriptor {
        FieldDescriptor::finite(q).unwrap()
    }

    fn fields() -> Vec<FieldDescriptor> {
        vec![f(3), f(5), f(7), f(9), FieldDescriptor::real(), FieldDescriptor::complex()]
    }

    #[test]
    fn shift_index_examples() {
        assert_eq!(shift_index(3, 1), 1);
        assert_eq!(shift_index(-1, 2), 0);
        assert_eq!(shift_index(2, 5), 2);
    }

    #[test]
    fn tate_examples() {
        let r = FieldDescriptor::real();
        let full = tate_filtration(&FiltrationQuery::new(&r, 0, 0, 0)).unwrap();
        assert!(full.is_full());
        let i3 = tate_filtration(&FiltrationQuery::new(&r, 3, 0, 0)).unwrap();
        assert_eq!(i3.description(), "signature ∈ 8ℤ, rank 0");
        let z = tate_filtration(&FiltrationQuery::new(&f(5), 2, 0, 0)).unwrap();
        assert_eq!(z.extent(), Extent::Zero);
    }

    #[test]
    fn kmw_times_in_examples() {
        let r = FieldDescriptor::real();
        let s = kmw_times_in(-2, 3, &r).unwrap();
        assert_eq!(s.description(), "signature ∈ 8ℤ");
        assert!(s.contains(&[16]) && !s.contains(&[4]));
        assert!(kmw_times_in(1, 1, &f(7)).unwrap().is_zero());
        assert!(kmw_times_in(5, 0, &r).unwrap().is_full());
    }

    #[test]
    fn graded_examples() {
        for q in [3u64, 5, 7, 9] {
            let field = f(q);
            let gr = |n| graded_piece(&FiltrationQuery::new(&field, n, 0, 0)).unwrap();
            assert_eq!(gr(0).structure.to_string(), "Z");
            assert_eq!(gr(1).order(), Some(2));
            assert!(gr(2).is_trivial() && gr(5).is_trivial());
        }
        let r = FieldDescriptor::real();
        for n in 1..10 {
            assert_eq!(graded_piece(&FiltrationQuery::new(&r, n, 0, 0)).unwrap().order(), Some(2));
        }
        for field in fields() {
            for n in -3..2 {
                assert!(graded_piece(&FiltrationQuery::new(&field, n, 3, 1)).unwrap().is_trivial());
            }
        }
    }

    #[test]
    fn monotone_and_shift_invariant() {
        for field in fields() {
            for n in -4..=4 {
                for p in -3..=3 {
                    for q in -3..=3 {
                        let qr = FiltrationQuery::new(&field, n, p, q);
                        let a = tate_filtration(&qr).unwrap();
                        let mut next = qr.clone();
                        next.n += 1;
                        assert!(tate_filtration(&next).unwrap().is_subgroup_of(&a));
                        for r in -2..=2 {
                            assert_eq!(tate_filtration(&qr.shifted(r)).unwrap(), a);
                        }
                        assert!(eta_consistency(&qr).unwrap(), "{field} {n} {p} {q}");
                    }
                }
            }
        }
    }

    #[test]
    fn convergence() {
        for field in [f(7), FieldDescriptor::real(), FieldDescriptor::complex()] {
            let rep = convergence_check(&field, 12).unwrap();
            assert!(rep.separated, "{field}");
            assert!(rep.elements_checked > 0);
        }
        let rep = convergence_check(&f(7), 5).unwrap();
        assert!(matches!(rep.certificate, ConvergenceCertificate::FiniteLength { vanishing_power: 2, .. }));
        assert!(convergence_check(&f(7), 0).is_err());
    }

    #[test]
    fn moore() {
        let r = FieldDescriptor::real();
        for n in 1..=10 {
            assert_eq!(moore_filtration(3, &r, n).unwrap().description(), "Z/3");
        }
        for q in [3u64, 5, 7, 9] {
            assert!(moore_filtration(3, &f(q), 1).unwrap().is_zero());
            assert!(moore_filtration(3, &f(q), 0).unwrap().is_full());
        }
        assert!(moore_filtration(2, &r, 1).is_err());
        assert!(moore_filtration(9, &r, 1).is_err());
    }
}
