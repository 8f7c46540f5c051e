use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{FieldDescriptor, Unit};
use crate::error::{Error, Result};

/// Default numerator/denominator bound for the rational grid over `R` and `C`.
pub const DEFAULT_GRID_BOUND: i64 = 3;

/// All units of a finite field as `g^0, g^1, ..., g^{q-2}`.
pub fn enumerate_units(field: &FieldDescriptor) -> Result<Vec<Unit>> {
    let f = field
        .finite_field()
        .ok_or_else(|| Error::UnsupportedEnumeration(field.to_string()))?;
    Ok((0..f.order() as i64 - 1)
        .map(|k| Unit::residue(field.clone(), f.exp(k)))
        .collect())
}

/// Nonzero rationals `a/b` with `|a| <= bound`, `1 <= b <= bound`, sorted.
fn rational_grid(field: &FieldDescriptor, bound: i64) -> Vec<Unit> {
    let mut set = BTreeSet::new();
    for b in 1..=bound {
        for a in -bound..=bound {
            if a != 0 {
                set.insert(BigRational::new(BigInt::from(a), BigInt::from(b)));
            }
        }
    }
    set.into_iter()
        .map(|r| field.unit_from_rational(r).expect("nonzero"))
        .collect()
}

/// Tuples `(u_1, ..., u_n)` of units with `u_1 + ... + u_n = 1`.
///
/// Over a finite field the stream is exhaustive: the first `n - 1` entries run
/// over all units in [`enumerate_units`] order (odometer, last index fastest)
/// and the final entry is forced. Over `R` and `C` the first `n - 1` entries
/// run over the rational grid of the given bound instead.
pub fn sum_to_one_tuples(
    field: &FieldDescriptor,
    n: usize,
    grid_bound: i64,
) -> Result<SumToOneTuples> {
    if n < 1 {
        return Err(Error::Domain("tuple length must be at least 1".into()));
    }
    let pool = if field.is_finite() {
        enumerate_units(field)?
    } else {
        if grid_bound < 1 {
            return Err(Error::Domain("grid bound must be at least 1".into()));
        }
        rational_grid(field, grid_bound)
    };
    Ok(SumToOneTuples {
        field: field.clone(),
        pool,
        indices: vec![0; n - 1],
        done: false,
    })
}

/// Iterator returned by [`sum_to_one_tuples`].
pub struct SumToOneTuples {
    field: FieldDescriptor,
    pool: Vec<Unit>,
    indices: Vec<usize>,
    done: bool,
}

impl SumToOneTuples {
    fn advance(&mut self) {
        for i in (0..self.indices.len()).rev() {
            self.indices[i] += 1;
            if self.indices[i] < self.pool.len() {
                return;
            }
            self.indices[i] = 0;
        }
        self.done = true;
    }

    fn current(&self) -> Option<Vec<Unit>> {
        let mut tuple: Vec<Unit> = self.indices.iter().map(|&i| self.pool[i].clone()).collect();
        let mut rest = Some(self.field.one());
        for u in &tuple {
            rest = match rest {
                Some(r) => r.sub(u).expect("same field"),
                None => Some(u.neg()),
            };
        }
        tuple.push(rest?);
        Some(tuple)
    }
}

impl Iterator for SumToOneTuples {
    type Item = Vec<Unit>;

    fn next(&mut self) -> Option<Vec<Unit>> {
        while !self.done {
            let item = self.current();
            self.advance();
            if item.is_some() {
                return item;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn f(q: u64) -> FieldDescriptor {
        FieldDescriptor::finite(q).unwrap()
    }

    fn residues(t: &[Unit]) -> Vec<String> {
        t.iter().map(|u| u.literal()).collect()
    }

    #[test]
    fn unit_enumeration() {
        assert_eq!(residues(&enumerate_units(&f(3)).unwrap()), ["1", "2"]);
        let f5 = enumerate_units(&f(5)).unwrap();
        assert_eq!(f5.len(), 4);
        assert!(f5[0].is_one());
        assert_eq!(enumerate_units(&f(9)).unwrap().len(), 8);
        assert!(matches!(
            enumerate_units(&FieldDescriptor::real()),
            Err(Error::UnsupportedEnumeration(_))
        ));
    }

    #[test]
    fn small_tuple_sets() {
        let t: Vec<_> = sum_to_one_tuples(&f(3), 2, 0).unwrap().collect();
        assert_eq!(t.len(), 1);
        assert_eq!(residues(&t[0]), ["2", "2"]);
        assert_eq!(sum_to_one_tuples(&f(5), 2, 0).unwrap().count(), 3);
        for field in [f(7), FieldDescriptor::real(), FieldDescriptor::complex()] {
            let t: Vec<_> = sum_to_one_tuples(&field, 1, 3).unwrap().collect();
            assert_eq!(t.len(), 1);
            assert!(t[0][0].is_one());
        }
        assert!(matches!(sum_to_one_tuples(&f(7), 0, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn finite_tuples_match_naive_filter() {
        for q in [3u64, 5, 7, 9] {
            let field = f(q);
            let units = enumerate_units(&field).unwrap();
            for n in 1..=3usize {
                let mut naive = HashSet::new();
                let total = units.len().pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let tuple: Vec<Unit> = (0..n)
                        .map(|_| {
                            let u = units[c % units.len()].clone();
                            c /= units.len();
                            u
                        })
                        .collect();
                    let mut s = Some(field.one().neg());
                    for u in &tuple {
                        s = match s {
                            Some(acc) => acc.add(u).unwrap(),
                            None => Some(u.clone()),
                        };
                    }
                    if s.is_none() {
                        naive.insert(residues(&tuple));
                    }
                }
                let emitted: Vec<_> = sum_to_one_tuples(&field, n, 0)
                    .unwrap()
                    .map(|t| residues(&t))
                    .collect();
                let as_set: HashSet<_> = emitted.iter().cloned().collect();
                assert_eq!(as_set.len(), emitted.len(), "duplicates for q={q} n={n}");
                assert_eq!(as_set, naive, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn real_grid_tuples_sum_to_one() {
        let r = FieldDescriptor::real();
        let mut count = 0;
        for t in sum_to_one_tuples(&r, 3, 2).unwrap() {
            let mut s = BigRational::from_integer(0.into());
            for u in &t {
                s += u.as_rational().unwrap();
            }
            assert_eq!(s, BigRational::from_integer(1.into()));
            count += 1;
        }
        assert!(count > 0);
    }
}
