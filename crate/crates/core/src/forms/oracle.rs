//! Brute-force classification of diagonal forms over a finite field.
//!
//! Nothing here uses the invariants of the parent module. Square classes are
//! found by searching for `a = b t^2`, binary isometries by searching for
//! represented values, and isometry classes of higher rank by closing under
//! chain equivalence (replacing two entries by an isometric binary pair).

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::field::{enumerate_units, FieldDescriptor, Unit};

use super::QuadraticForm;

/// Largest rank the oracle accepts.
pub const MAX_ORACLE_RANK: usize = 8;

/// Largest rank the Witt oracle accepts (isotropy search is `q^rank`).
pub const MAX_WITT_ORACLE_RANK: usize = 4;

/// An isometry class found by the oracle.
#[derive(Debug, Clone)]
pub struct OracleClass {
    pub rank: usize,
    /// Determinant square class, computed by exhaustive search.
    pub disc: usize,
    /// Every diagonal form over the representatives in the class.
    pub members: Vec<Vec<usize>>,
}

/// Result of [`brute_force_gw`].
#[derive(Debug, Clone)]
pub struct OracleTable {
    field: FieldDescriptor,
    max_rank: usize,
    units: Vec<Unit>,
    /// Square-class representatives, first one the class of 1.
    reps: Vec<Unit>,
    /// Index into `reps` for each unit (by position in `units`).
    unit_class: HashMap<Unit, usize>,
    classes: Vec<OracleClass>,
    node_class: HashMap<Vec<usize>, usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn multisets(k: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for tail in multisets(k, len - 1) {
        let start = tail.last().copied().unwrap_or(0);
        for x in start..k {
            let mut t = tail.clone();
            t.push(x);
            out.push(t);
        }
    }
    out
}

/// Classifies all diagonal forms of rank `<= max_rank` up to isometry.
pub fn brute_force_gw(field: &FieldDescriptor, max_rank: usize) -> Result<OracleTable> {
    if max_rank > MAX_ORACLE_RANK {
        return Err(Error::BoundExceeded(format!(
            "oracle rank {max_rank} exceeds {MAX_ORACLE_RANK}"
        )));
    }
    let units = enumerate_units(field)?;
    let squares: Vec<Unit> = units.iter().map(|t| t.mul(t).expect("same field")).collect();

    let mut reps: Vec<Unit> = Vec::new();
    let mut unit_class = HashMap::new();
    for a in &units {
        let found = reps.iter().position(|b| {
            squares
                .iter()
                .any(|t2| b.mul(t2).expect("same field") == *a)
        });
        let idx = match found {
            Some(i) => i,
            None => {
                reps.push(a.clone());
                reps.len() - 1
            }
        };
        unit_class.insert(a.clone(), idx);
    }

    let represents = |a: &Unit, b: &Unit, c: &Unit| -> bool {
        // c = a x^2 + b y^2 for some x, y (zero allowed)
        let ax: Vec<Option<Unit>> = std::iter::once(None)
            .chain(squares.iter().map(|s| Some(a.mul(s).expect("same field"))))
            .collect();
        let by: Vec<Option<Unit>> = std::iter::once(None)
            .chain(squares.iter().map(|s| Some(b.mul(s).expect("same field"))))
            .collect();
        ax.iter().any(|x| {
            by.iter().any(|y| {
                let sum = match (x, y) {
                    (None, None) => None,
                    (Some(x), None) => Some(x.clone()),
                    (None, Some(y)) => Some(y.clone()),
                    (Some(x), Some(y)) => x.add(y).expect("same field"),
                };
                sum.as_ref() == Some(c)
            })
        })
    };

    let class_of = |u: &Unit| unit_class[u];
    let k = reps.len();
    let disc_of = |pair: (usize, usize)| class_of(&reps[pair.0].mul(&reps[pair.1]).expect("same field"));
    let mut binary_iso: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for a in 0..k {
        for b in a..k {
            for c in 0..k {
                for d in c..k {
                    let same_disc = disc_of((a, b)) == disc_of((c, d));
                    if same_disc && represents(&reps[a], &reps[b], &reps[c]) {
                        binary_iso.push(((a, b), (c, d)));
                    }
                }
            }
        }
    }

    let mut nodes: Vec<Vec<usize>> = Vec::new();
    for rank in 0..=max_rank {
        nodes.extend(multisets(k, rank));
    }
    let index: HashMap<Vec<usize>, usize> =
        nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
    let mut uf = UnionFind((0..nodes.len()).collect());
    for (ni, node) in nodes.iter().enumerate() {
        for i in 0..node.len() {
            for j in i + 1..node.len() {
                let pair = (node[i].min(node[j]), node[i].max(node[j]));
                for (from, to) in &binary_iso {
                    if *from != pair {
                        continue;
                    }
                    let mut next: Vec<usize> = node
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != i && p != j)
                        .map(|(_, &x)| x)
                        .collect();
                    next.push(to.0);
                    next.push(to.1);
                    next.sort_unstable();
                    uf.union(ni, index[&next]);
                }
            }
        }
    }

    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for ni in 0..nodes.len() {
        by_root.entry(uf.find(ni)).or_default().push(ni);
    }
    let mut classes = Vec::new();
    let mut node_class = HashMap::new();
    for members in by_root.values() {
        let first = &nodes[members[0]];
        let mut det = field.one();
        for &x in first {
            det = det.mul(&reps[x]).expect("same field");
        }
        let id = classes.len();
        for &m in members {
            node_class.insert(nodes[m].clone(), id);
        }
        classes.push(OracleClass {
            rank: first.len(),
            disc: class_of(&det),
            members: members.iter().map(|&m| nodes[m].clone()).collect(),
        });
    }

    Ok(OracleTable {
        field: field.clone(),
        max_rank,
        units,
        reps,
        unit_class,
        classes,
        node_class,
    })
}

impl OracleTable {
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    pub fn classes(&self) -> &[OracleClass] {
        &self.classes
    }

    pub fn representatives(&self) -> &[Unit] {
        &self.reps
    }

    pub fn square_class_index(&self, u: &Unit) -> usize {
        self.unit_class[u]
    }

    /// Diagonal form of a class member.
    pub fn member_form(&self, member: &[usize]) -> QuadraticForm {
        QuadraticForm::new(&self.field, member.iter().map(|&i| self.reps[i].clone()).collect())
            .expect("same field")
    }

    /// Isometry class of an arbitrary diagonal form.
    pub fn classify(&self, form: &QuadraticForm) -> Result<usize> {
        if form.rank() > self.max_rank {
            return Err(Error::BoundExceeded(format!(
                "form of rank {} exceeds the table bound {}",
                form.rank(),
                self.max_rank
            )));
        }
        self.field.check_same(form.field())?;
        let mut node: Vec<usize> = form.diagonal().iter().map(|u| self.unit_class[u]).collect();
        node.sort_unstable();
        Ok(self.node_class[&node])
    }

    pub fn is_isometric(&self, a: &QuadraticForm, b: &QuadraticForm) -> Result<bool> {
        Ok(self.classify(a)? == self.classify(b)?)
    }

    /// Whether the form has a nontrivial zero, by search over `F_q^rank`.
    pub fn is_isotropic(&self, form: &QuadraticForm) -> Result<bool> {
        let n = form.rank();
        if n > MAX_WITT_ORACLE_RANK {
            return Err(Error::BoundExceeded(format!(
                "isotropy search of rank {n} exceeds {MAX_WITT_ORACLE_RANK}"
            )));
        }
        let elems: Vec<Option<Unit>> =
            std::iter::once(None).chain(self.units.iter().cloned().map(Some)).collect();
        let q = elems.len();
        let total = q.pow(n as u32);
        for code in 1..total {
            let mut c = code;
            let mut sum: Option<Unit> = None;
            for a in form.diagonal() {
                let x = &elems[c % q];
                c /= q;
                if let Some(x) = x {
                    let term = a.mul(&x.mul(x)?)?;
                    sum = match sum {
                        None => Some(term),
                        Some(s) => s.add(&term)?,
                    };
                }
            }
            if sum.is_none() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Oracle class of the anisotropic part of `form`, found by repeatedly
    /// splitting off hyperbolic planes.
    pub fn witt_reduce(&self, form: &QuadraticForm) -> Result<usize> {
        let mut current = form.clone();
        let h = QuadraticForm::new(&self.field, vec![self.field.one(), self.field.one().neg()])?;
        loop {
            if current.rank() < 2 || !self.is_isotropic(&current)? {
                return self.classify(&current);
            }
            let target = self.classify(&current)?;
            let smaller = self
                .classes
                .iter()
                .filter(|c| c.rank + 2 == current.rank())
                .map(|c| self.member_form(&c.members[0]))
                .find(|f| {
                    h.orthogonal_sum(f)
                        .and_then(|s| self.classify(&s))
                        .map_or(false, |id| id == target)
                })
                .ok_or_else(|| Error::Internal("isotropic form with no hyperbolic splitting".into()))?;
            current = smaller;
        }
    }
}
