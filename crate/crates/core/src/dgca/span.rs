//! Linear algebra on finite families of polynomials.

use std::collections::BTreeMap;

use super::ring::{Monomial, Poly};
use crate::linalg::{kernel_basis, solve, RationalMatrix, Q};

/// Coordinates of `polys` (as columns) over the monomials they mention.
fn coordinate_matrix(polys: &[&Poly]) -> (BTreeMap<Monomial, usize>, RationalMatrix) {
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let n = rows.len();
            rows.entry(m.clone()).or_insert(n);
        }
    }
    let mut mat = RationalMatrix::zeros(rows.len(), polys.len());
    for (j, p) in polys.iter().enumerate() {
        for (m, c) in p.terms() {
            mat.set(rows[m], j, c.clone());
        }
    }
    (rows, mat)
}

/// Coefficients `t` with `Σ t_k cands[k] = target`, or `None`.
pub fn solve_combination(cands: &[Poly], target: &Poly) -> Option<Vec<Q>> {
    let mut all: Vec<&Poly> = cands.iter().collect();
    all.push(target);
    let (rows, mat) = coordinate_matrix(&all);
    let n = cands.len();
    let mut a = RationalMatrix::zeros(rows.len(), n);
    let mut b = vec![Q::default(); rows.len()];
    for (&(i, j), v) in mat.entries() {
        if j < n {
            a.set(i, j, v.clone());
        } else {
            b[i] = v.clone();
        }
    }
    solve(&a, &b).expect("dimensions agree")
}

/// A basis of the linear relations among `polys`.
pub fn relations(polys: &[Poly]) -> Vec<Vec<Q>> {
    let refs: Vec<&Poly> = polys.iter().collect();
    let (_, mat) = coordinate_matrix(&refs);
    kernel_basis(&mat)
}

pub fn combine(polys: &[Poly], coeffs: &[Q]) -> Poly {
    let mut out = Poly::zero();
    for (p, c) in polys.iter().zip(coeffs) {
        out.add_scaled(p, c);
    }
    out
}

/// Rank of the span of `polys`.
pub fn span_rank(polys: &[Poly]) -> usize {
    let refs: Vec<&Poly> = polys.iter().collect();
    coordinate_matrix(&refs).1.rank()
}

/// A linear system whose equations live in several polynomial blocks at
/// once. Column `k` has one polynomial per block; rows are indexed by
/// `(block, monomial)`.
pub fn stacked_system(columns: &[Vec<Poly>], target: &[Poly]) -> (RationalMatrix, Vec<Q>) {
    let mut rows: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut index = |b: usize, m: &Monomial| {
        let n = rows.len();
        *rows.entry((b, m.clone())).or_insert(n)
    };
    let mut entries = Vec::new();
    for (k, col) in columns.iter().enumerate() {
        for (b, p) in col.iter().enumerate() {
            for (m, c) in p.terms() {
                entries.push((index(b, m), k, c.clone()));
            }
        }
    }
    let mut rhs = Vec::new();
    for (b, p) in target.iter().enumerate() {
        for (m, c) in p.terms() {
            rhs.push((index(b, m), c.clone()));
        }
    }
    let mut a = RationalMatrix::zeros(rows.len(), columns.len());
    for (i, k, c) in entries {
        a.set(i, k, c);
    }
    let mut b = vec![Q::default(); rows.len()];
    for (i, c) in rhs {
        b[i] = c;
    }
    (a, b)
}

/// Coefficients `t` with `Σ t_k columns[k] = target` blockwise, or `None`.
pub fn solve_stacked(columns: &[Vec<Poly>], target: &[Poly]) -> Option<Vec<Q>> {
    let (a, b) = stacked_system(columns, target);
    solve(&a, &b).expect("dimensions agree")
}
