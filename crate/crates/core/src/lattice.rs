//! Integer lattices in `Z^d`: Hermite and Smith normal forms.
//!
//! Lattices are stored as row-style Hermite normal forms: echelon rows with
//! positive pivots, and every entry above a pivot reduced into `[0, pivot)`.
//! Two generating sets span the same lattice iff their HNFs are equal.

use std::fmt;

use serde::Serialize;

pub type Vector = Vec<i64>;

/// Column of the first nonzero entry.
pub fn pivot(row: &[i64]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

fn axpy(target: &mut [i64], factor: i64, source: &[i64]) {
    if factor == 0 {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        *t -= factor * s;
    }
}

/// Hermite normal form of the lattice spanned by `rows` in `Z^dim`.
pub fn hnf(rows: &[Vector], dim: usize) -> Vec<Vector> {
    let mut m: Vec<Vector> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| {
            assert_eq!(r.len(), dim, "vector length does not match the ambient");
            r.clone()
        })
        .collect();
    let mut top = 0;
    for col in 0..dim {
        if top >= m.len() {
            break;
        }
        let mut found = false;
        loop {
            let best = (top..m.len())
                .filter(|&i| m[i][col] != 0)
                .min_by_key(|&i| m[i][col].unsigned_abs());
            let Some(best) = best else { break };
            found = true;
            m.swap(top, best);
            let mut clean = true;
            for j in top + 1..m.len() {
                if m[j][col] != 0 {
                    let q = m[j][col] / m[top][col];
                    let pivot_row = m[top].clone();
                    axpy(&mut m[j], q, &pivot_row);
                    if m[j][col] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if m[top][col] < 0 {
            for x in m[top].iter_mut() {
                *x = -*x;
            }
        }
        let pivot_row = m[top].clone();
        for i in 0..top {
            let q = m[i][col].div_euclid(pivot_row[col]);
            axpy(&mut m[i], q, &pivot_row);
        }
        top += 1;
    }
    m.truncate(top);
    m
}

/// Reduces `v` modulo an HNF basis; the result is a canonical coset
/// representative, and is zero iff `v` lies in the lattice.
pub fn reduce(v: &[i64], basis: &[Vector]) -> Vector {
    let mut out = v.to_vec();
    for row in basis {
        let c = pivot(row).expect("HNF rows are nonzero");
        let q = out[c].div_euclid(row[c]);
        axpy(&mut out, q, row);
    }
    out
}

pub fn contains(basis: &[Vector], v: &[i64]) -> bool {
    reduce(v, basis).iter().all(|&x| x == 0)
}

/// Coefficients of `v` in an HNF basis, if `v` lies in the lattice.
pub fn coordinates(v: &[i64], basis: &[Vector]) -> Option<Vector> {
    let mut rest = v.to_vec();
    let mut coeffs = Vec::with_capacity(basis.len());
    for row in basis {
        let c = pivot(row).expect("HNF rows are nonzero");
        if rest[c] % row[c] != 0 {
            return None;
        }
        let q = rest[c] / row[c];
        axpy(&mut rest, q, row);
        coeffs.push(q);
    }
    rest.iter().all(|&x| x == 0).then_some(coeffs)
}

/// Nonzero Smith invariants `d_1 | d_2 | ...` of an integer matrix.
pub fn smith_invariants(matrix: &[Vector]) -> Vec<i64> {
    let mut a: Vec<Vector> = matrix.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let best = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].unsigned_abs());
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t] / a[t][t];
                    let pivot_row = a[t].clone();
                    axpy(&mut a[i], q, &pivot_row);
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j] / a[t][t];
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                let p = a[t][t];
                let bad = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
                match bad {
                    None => break,
                    Some(i) => {
                        let source = a[i].clone();
                        for (x, s) in a[t].iter_mut().zip(&source) {
                            *x += s;
                        }
                        dirty = true;
                    }
                }
            }
            if dirty {
                let best = (t..rows)
                    .flat_map(|i| (t..cols).map(move |j| (i, j)))
                    .filter(|&(i, j)| a[i][j] != 0 && (i == t || j == t))
                    .min_by_key(|&(i, j)| a[i][j].unsigned_abs());
                if let Some((bi, bj)) = best {
                    a.swap(t, bi);
                    for row in a.iter_mut() {
                        row.swap(t, bj);
                    }
                }
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// A finitely generated abelian group `Z^free ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl GroupStructure {
    pub fn trivial() -> Self {
        GroupStructure {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().map(|&t| t as u64).product())
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

/// Structure of `big / small` for HNF lattices with `small ⊆ big`.
pub fn quotient_structure(big: &[Vector], small: &[Vector]) -> GroupStructure {
    let matrix: Vec<Vector> = small
        .iter()
        .map(|v| coordinates(v, big).expect("sublattice rows lie in the lattice"))
        .collect();
    let diag = if matrix.is_empty() {
        Vec::new()
    } else {
        smith_invariants(&matrix)
    };
    GroupStructure {
        free_rank: big.len() - diag.len(),
        torsion: diag.into_iter().filter(|&d| d > 1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_canonical() {
        let a = hnf(&[vec![2, 4], vec![3, 3]], 2);
        let b = hnf(&[vec![1, -1], vec![0, 6], vec![5, 7]], 2);
        assert_eq!(a, vec![vec![1, 5], vec![0, 6]]);
        assert_eq!(a, b);
        assert!(hnf(&[vec![0, 0]], 2).is_empty());
    }

    #[test]
    fn membership_and_coordinates() {
        let l = hnf(&[vec![1, 1], vec![0, 2]], 2);
        assert!(contains(&l, &[3, 5]));
        assert!(!contains(&l, &[1, 0]));
        let c = coordinates(&[3, 5], &l).unwrap();
        assert_eq!(c, vec![3, 1]);
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_invariants(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_invariants(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(smith_invariants(&[vec![0, 0]]), Vec::<i64>::new());
    }

    #[test]
    fn quotients() {
        let z2 = hnf(&[vec![1, 0], vec![0, 1]], 2);
        let sub = hnf(&[vec![0, 2]], 2);
        let s = quotient_structure(&z2, &sub);
        assert_eq!(s.to_string(), "Z ⊕ Z/2");
        let k1 = hnf(&[vec![1, 1], vec![0, 2]], 2);
        let rel = hnf(&[vec![6, 0], vec![0, 2]], 2);
        assert_eq!(quotient_structure(&k1, &rel).order(), Some(6));
    }
}
