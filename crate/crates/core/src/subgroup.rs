//! Subgroups of coordinate groups.
//!
//! An [`Ambient`] is a group `L / L0` where `L ⊆ Z^d` is the lattice of valid
//! coordinate vectors and `L0 ⊆ L` the relations. A subgroup `H` is stored as
//! the HNF of `gens ∪ L0`, so equality of subgroups is equality of HNFs.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, GroupStructure, Vector};

#[derive(Debug, Clone)]
pub struct Ambient {
    label: String,
    coords: Vec<String>,
    lattice: Vec<Vector>,
    relations: Vec<Vector>,
    augmented: bool,
}

impl Ambient {
    /// `lattice` spans the valid coordinates; `relations` must lie inside it.
    /// With `augmented`, coordinate 0 is a rank whose kernel is the
    /// augmentation ideal.
    pub fn new(
        label: impl Into<String>,
        coords: &[&str],
        lattice: &[Vector],
        relations: &[Vector],
        augmented: bool,
    ) -> Self {
        let dim = coords.len();
        let lattice = lattice::hnf(lattice, dim);
        let relations = lattice::hnf(relations, dim);
        for r in &relations {
            assert!(lattice::contains(&lattice, r), "relation outside the lattice");
        }
        Ambient {
            label: label.into(),
            coords: coords.iter().map(|s| s.to_string()).collect(),
            lattice,
            relations,
            augmented,
        }
    }

    /// The trivial group with no coordinates.
    pub fn trivial(label: impl Into<String>) -> Self {
        Ambient::new(label, &[], &[], &[], false)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coordinate_names(&self) -> &[String] {
        &self.coords
    }

    pub fn is_augmented(&self) -> bool {
        self.augmented
    }

    pub fn structure(&self) -> GroupStructure {
        lattice::quotient_structure(&self.lattice, &self.relations)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim() && lattice::contains(&self.lattice, v)
    }

    /// Canonical representative of the class of `v`.
    pub fn reduce(&self, v: &[i64]) -> Vector {
        lattice::reduce(v, &self.relations)
    }

    pub fn is_zero(&self, v: &[i64]) -> bool {
        lattice::contains(&self.relations, v)
    }

    pub fn equal(&self, a: &[i64], b: &[i64]) -> bool {
        let diff: Vector = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_zero(&diff)
    }

    /// `A / ell A`.
    pub fn modulo(&self, ell: i64) -> Ambient {
        let mut rels = self.relations.clone();
        rels.extend(
            self.lattice
                .iter()
                .map(|row| row.iter().map(|x| x * ell).collect::<Vector>()),
        );
        Ambient {
            label: format!("{}/{ell}", self.label),
            coords: self.coords.clone(),
            lattice: self.lattice.clone(),
            relations: lattice::hnf(&rels, self.dim()),
            augmented: self.augmented,
        }
    }

    pub fn full(&self) -> SubgroupDescription {
        SubgroupDescription::from_hnf(self.clone(), self.lattice.clone())
    }

    pub fn zero(&self) -> SubgroupDescription {
        SubgroupDescription::from_hnf(self.clone(), self.relations.clone())
    }

    /// Subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[Vector]) -> Result<SubgroupDescription> {
        for g in gens {
            if !self.contains(g) {
                return Err(Error::Domain(format!(
                    "{g:?} is not a coordinate vector of {}",
                    self.label
                )));
            }
        }
        let mut rows = gens.to_vec();
        rows.extend(self.relations.iter().cloned());
        Ok(SubgroupDescription::from_hnf(
            self.clone(),
            lattice::hnf(&rows, self.dim()),
        ))
    }

    fn augmentation_kernel(&self) -> Option<Vec<Vector>> {
        if !self.augmented {
            return None;
        }
        Some(self.lattice.iter().filter(|r| r[0] == 0).cloned().collect())
    }
}

impl PartialEq for Ambient {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
            && self.coords == other.coords
            && self.lattice == other.lattice
            && self.relations == other.relations
    }
}

impl Eq for Ambient {}

/// Size of a subgroup relative to its ambient, in decreasing order of
/// specificity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extent {
    Zero,
    Full,
    /// Finite subgroup of the given order.
    Order(u64),
    /// Finite index in the ambient.
    Index(u64),
    /// Finite index inside the rank-0 part of an augmented ambient.
    IndexInRankZero(u64),
    Infinite,
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Zero => write!(f, "zero"),
            Extent::Full => write!(f, "full"),
            Extent::Order(n) => write!(f, "order {n}"),
            Extent::Index(n) => write!(f, "index {n}"),
            Extent::IndexInRankZero(n) => write!(f, "index {n} in the rank-0 part"),
            Extent::Infinite => write!(f, "infinite, infinite index"),
        }
    }
}

impl Serialize for Extent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, value) = match *self {
            Extent::Zero => ("zero", None),
            Extent::Full => ("full", None),
            Extent::Order(n) => ("order", Some(n)),
            Extent::Index(n) => ("index", Some(n)),
            Extent::IndexInRankZero(n) => ("index_in_rank_zero", Some(n)),
            Extent::Infinite => ("infinite", None),
        };
        let mut st = s.serialize_struct("Extent", 2)?;
        st.serialize_field("kind", kind)?;
        st.serialize_field("value", &value)?;
        st.end()
    }
}

/// A subgroup of an [`Ambient`], with an optional human-readable label.
#[derive(Debug, Clone)]
pub struct SubgroupDescription {
    ambient: Ambient,
    basis: Vec<Vector>,
    label: Option<String>,
}

impl SubgroupDescription {
    fn from_hnf(ambient: Ambient, basis: Vec<Vector>) -> Self {
        SubgroupDescription {
            ambient,
            basis,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    /// HNF basis of the subgroup together with the ambient relations.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Canonical generators modulo the ambient relations.
    pub fn generators(&self) -> Vec<Vector> {
        let mut out: Vec<Vector> = Vec::new();
        for row in &self.basis {
            let r = self.ambient.reduce(row);
            if !self.ambient.is_zero(&r) && !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.ambient.contains(v) && lattice::contains(&self.basis, v)
    }

    pub fn is_subgroup_of(&self, other: &SubgroupDescription) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|r| other.contains(r))
    }

    pub fn is_zero(&self) -> bool {
        self.basis == self.ambient.relations
    }

    pub fn is_full(&self) -> bool {
        self.basis == self.ambient.lattice
    }

    /// Isomorphism type of the subgroup itself.
    pub fn structure(&self) -> GroupStructure {
        lattice::quotient_structure(&self.basis, &self.ambient.relations)
    }

    /// Isomorphism type of `ambient / self`.
    pub fn cokernel(&self) -> GroupStructure {
        lattice::quotient_structure(&self.ambient.lattice, &self.basis)
    }

    pub fn extent(&self) -> Extent {
        if self.is_zero() {
            return Extent::Zero;
        }
        if self.is_full() {
            return Extent::Full;
        }
        if let Some(n) = self.structure().order() {
            return Extent::Order(n);
        }
        if let Some(n) = self.cokernel().order() {
            return Extent::Index(n);
        }
        if let Some(kernel) = self.ambient.augmentation_kernel() {
            if self.basis.iter().all(|r| r[0] == 0) {
                if let Some(n) = lattice::quotient_structure(&kernel, &self.basis).order() {
                    return Extent::IndexInRankZero(n);
                }
            }
        }
        Extent::Infinite
    }

    /// `self + other`.
    pub fn join(&self, other: &SubgroupDescription) -> Result<SubgroupDescription> {
        if self.ambient != other.ambient {
            return Err(Error::Domain(format!(
                "subgroups of different ambients: {} vs {}",
                self.ambient.label, other.ambient.label
            )));
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(SubgroupDescription::from_hnf(
            self.ambient.clone(),
            lattice::hnf(&rows, self.ambient.dim()),
        ))
    }

    /// `self / other` for `other ⊆ self`.
    pub fn quotient(&self, other: &SubgroupDescription) -> Result<QuotientDescription> {
        if !other.is_subgroup_of(self) {
            return Err(Error::Precondition(
                "quotient requires a subgroup of the numerator".into(),
            ));
        }
        Ok(QuotientDescription {
            ambient: self.ambient.label.clone(),
            structure: lattice::quotient_structure(&self.basis, &other.basis),
        })
    }

    pub fn description(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => self.extent().to_string(),
        }
    }
}

impl PartialEq for SubgroupDescription {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}

impl Eq for SubgroupDescription {}

impl fmt::Display for SubgroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.description(), self.ambient.label)
    }
}

impl Serialize for SubgroupDescription {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SubgroupDescription", 6)?;
        st.serialize_field("ambient", &self.ambient.label)?;
        st.serialize_field("coordinates", &self.ambient.coords)?;
        st.serialize_field("generators", &self.generators())?;
        st.serialize_field("extent", &self.extent())?;
        st.serialize_field("structure", &self.structure().to_string())?;
        st.serialize_field("description", &self.description())?;
        st.end()
    }
}

/// A subquotient `H1 / H2` of a coordinate group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientDescription {
    pub ambient: String,
    pub structure: GroupStructure,
}

impl QuotientDescription {
    pub fn order(&self) -> Option<u64> {
        self.structure.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.structure.is_trivial()
    }
}

impl fmt::Display for QuotientDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.structure)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gw_real() -> Ambient {
        Ambient::new(
            "GW(R)",
            &["rank", "signature"],
            &[vec![1, 1], vec![0, 2]],
            &[],
            true,
        )
    }

    #[test]
    fn extents() {
        let a = gw_real();
        assert_eq!(a.full().extent(), Extent::Full);
        assert_eq!(a.zero().extent(), Extent::Zero);
        let i3 = a.subgroup(&[vec![0, 8]]).unwrap();
        assert_eq!(i3.extent(), Extent::IndexInRankZero(4));
        assert!(i3.contains(&[0, -16]));
        assert!(!i3.contains(&[0, 4]));
        assert!(a.subgroup(&[vec![1, 0]]).is_err());

        let gw_f = Ambient::new("GW", &["rank", "disc_dev"], &[vec![1, 0], vec![0, 1]], &[vec![0, 2]], true);
        let i = gw_f.subgroup(&[vec![0, 1]]).unwrap();
        assert_eq!(i.extent(), Extent::Order(2));
        assert_eq!(i.generators(), vec![vec![0, 1]]);
        let sub = gw_f.subgroup(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(sub.extent(), Extent::Index(2));
    }

    #[test]
    fn quotient_orders() {
        let a = gw_real();
        let i1 = a.subgroup(&[vec![0, 2]]).unwrap();
        let i2 = a.subgroup(&[vec![0, 4]]).unwrap();
        assert_eq!(i1.quotient(&i2).unwrap().order(), Some(2));
        assert_eq!(a.full().quotient(&i1).unwrap().structure.to_string(), "Z");
        assert!(i2.quotient(&i1).is_err());
    }

    #[test]
    fn modulo_ell() {
        let a = gw_real().modulo(3);
        assert_eq!(a.structure().to_string(), "Z/3 ⊕ Z/3");
        let img = a.subgroup(&[vec![0, 16]]).unwrap();
        assert_eq!(img.structure().to_string(), "Z/3");
    }
}
