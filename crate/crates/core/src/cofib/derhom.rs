//! The adjunction `Der_p(A, M^∨) ≅ Hom_B(M, Der_p(A, B))` for a base map
//! `p: A → B` and a cell module `M` over `B`, checked degree by degree.
//!
//! Both sides have the coordinates `⊕_{a,j} B^{|a| + |m_j| + n}`: on the left
//! the coefficient of `m_j*` in `D(a)`, on the right the value `φ(m_j)(a)`.
//! Coefficient spaces are cut at a base-length cap, which is exact as long as
//! no differential lowers length.

use std::collections::BTreeMap;

use crate::dgca::{apply_derivation, dualize_cell, CellModule, DgcaMorphism, Monomial, Poly};
use crate::error::{Error, Result};
use crate::linalg::{cohomology_dims, q, CohomologyDim, DegreeWindow, FiniteComplex, RationalMatrix, Q};

/// A coordinate: base generator `a` of `A`, module generator `j`, and a
/// monomial of `B`.
type Coord = (usize, usize, Monomial);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerHomDegree {
    pub degree: i32,
    pub dim: usize,
    /// Rank of the comparison map in this degree.
    pub rank: usize,
    pub lhs: CohomologyDim,
    pub rhs: CohomologyDim,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerHomReport {
    pub window: DegreeWindow,
    pub max_len: u32,
    /// The comparison map intertwines the two differentials.
    pub chain_map: bool,
    pub degrees: Vec<DerHomDegree>,
}

impl DerHomReport {
    /// Chain map, bijective in every degree, and equal cohomology wherever
    /// both sides are complete.
    pub fn isomorphism(&self) -> bool {
        self.chain_map
            && self.degrees.iter().all(|d| {
                d.rank == d.dim
                    && match (&d.lhs, &d.rhs) {
                        (CohomologyDim::Dim(x), CohomologyDim::Dim(y)) => x == y,
                        _ => true,
                    }
            })
    }

    /// Degrees where both cohomologies are complete.
    pub fn complete_degrees(&self) -> impl Iterator<Item = &DerHomDegree> {
        self.degrees
            .iter()
            .filter(|d| matches!((&d.lhs, &d.rhs), (CohomologyDim::Dim(_), CohomologyDim::Dim(_))))
    }
}

fn parity(e: i32) -> Q {
    if e.rem_euclid(2) == 1 {
        q(-1)
    } else {
        q(1)
    }
}

struct Setup<'a> {
    p: &'a DgcaMorphism,
    m: &'a CellModule,
    max_len: u32,
}

impl Setup<'_> {
    fn basis(&self, n: i32) -> Vec<Coord> {
        let a = self.p.src().ring();
        let b = self.p.tgt().ring();
        let mut out = Vec::new();
        for ai in 0..a.len() {
            for j in 0..self.m.rank() {
                let deg = a.gen(ai).degree + self.m.module().degree(j) + n;
                for mono in b.monomials(deg, 0, self.max_len) {
                    out.push((ai, j, mono));
                }
            }
        }
        out
    }

    /// The sign relating the two coordinate systems: `(−1)^{|a||m_j|}`.
    fn sign(&self, a: usize, j: usize) -> Q {
        let da = self.p.src().ring().gen(a).degree;
        let dm = self.m.module().degree(j);
        parity(da * dm)
    }

    /// Values per `(a, j)` of a single coordinate vector.
    fn values(&self, c: &Coord) -> BTreeMap<(usize, usize), Poly> {
        let mut v = BTreeMap::new();
        v.insert((c.0, c.1), Poly::term(c.2.clone(), q(1)));
        v
    }

    /// `∂D(a) = d(D a) − (−1)^n D(d_A a)` with `D(a) = Σ_j c_{a,j} m_j*`.
    fn lhs_d(&self, n: i32, vals: &BTreeMap<(usize, usize), Poly>) -> BTreeMap<(usize, usize), Poly> {
        let dual = dualize_cell(self.m);
        let ring = dual.ring();
        let module = dual.module();
        let a = self.p.src();
        let on_gen = |ai: usize| {
            let mut out = Poly::zero();
            for j in 0..self.m.rank() {
                if let Some(c) = vals.get(&(ai, j)) {
                    out.add_assign(&ring.mul(c, &module.gen(j)));
                }
            }
            out
        };
        let gen_vals: Vec<Poly> = (0..a.len()).map(on_gen).collect();
        let mut out = BTreeMap::new();
        for ai in 0..a.len() {
            let mut v = dual.d(&gen_vals[ai]);
            let inner = apply_derivation(a.ring(), ring, self.p.images(), &gen_vals, n, &a.diff()[ai]);
            v.sub_assign(&inner.scale(&parity(n)));
            for (j, c) in module.coefficients(&v).into_iter().enumerate() {
                out.insert((ai, j), c);
            }
        }
        out
    }

    /// `(∂φ)(m_j)(a) = d_B φ(m_j)(a) − (−1)^{|m_j|+n} φ(m_j)(d_A a)
    /// − (−1)^n Σ_i (−1)^{|b_ji| n} b_ji φ(m_i)(a)`.
    fn rhs_d(&self, n: i32, vals: &BTreeMap<(usize, usize), Poly>) -> BTreeMap<(usize, usize), Poly> {
        let a = self.p.src();
        let b = self.p.tgt();
        let m = self.m;
        let get = |ai: usize, j: usize| vals.get(&(ai, j)).cloned().unwrap_or_default();
        let mut out = BTreeMap::new();
        for j in 0..m.rank() {
            let phi_j: Vec<Poly> = (0..a.len()).map(|ai| get(ai, j)).collect();
            let deg = m.module().degree(j) + n;
            for ai in 0..a.len() {
                let mut v = b.d(&phi_j[ai]);
                let inner = apply_derivation(a.ring(), b.ring(), self.p.images(), &phi_j, deg, &a.diff()[ai]);
                v.sub_assign(&inner.scale(&parity(deg)));
                for i in 0..m.rank() {
                    let bji = m.structure_coefficient(j, i);
                    if bji.is_zero() {
                        continue;
                    }
                    let db = b.ring().degree(&bji).ok().flatten().unwrap_or(0);
                    let term = b.ring().mul(&bji, &get(ai, i));
                    v.sub_assign(&term.scale(&(parity(n) * parity(db * n))));
                }
                out.insert((ai, j), v);
            }
        }
        out
    }

    fn matrix(
        &self,
        src: &[Coord],
        tgt: &[Coord],
        f: impl Fn(&BTreeMap<(usize, usize), Poly>) -> BTreeMap<(usize, usize), Poly>,
    ) -> RationalMatrix {
        let index: BTreeMap<&Coord, usize> = tgt.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut mat = RationalMatrix::zeros(tgt.len(), src.len());
        for (col, c) in src.iter().enumerate() {
            for ((ai, j), v) in f(&self.values(c)) {
                for (mono, coeff) in v.terms() {
                    if let Some(&row) = index.get(&(ai, j, mono.clone())) {
                        mat.add_to(row, col, coeff);
                    }
                }
            }
        }
        mat
    }
}

/// Build both sides on `window`, compare them through the coefficient map
/// and report dimensions, ranks and cohomology.
pub fn der_hom_transport(
    p: &DgcaMorphism,
    m: &CellModule,
    window: DegreeWindow,
    max_len: u32,
) -> Result<DerHomReport> {
    if m.base() != p.tgt() {
        return Err(Error::Argument("module must live over the target of the base map".into()));
    }
    let s = Setup { p, m, max_len };
    let bases: BTreeMap<i32, Vec<Coord>> = window.degrees().map(|n| (n, s.basis(n))).collect();
    let labels: BTreeMap<i32, Vec<String>> = bases
        .iter()
        .map(|(&n, cs)| {
            let names = cs
                .iter()
                .map(|(ai, j, mono)| {
                    format!(
                        "{}:{}:{}",
                        p.src().ring().gen(*ai).name,
                        m.module().name(*j),
                        p.tgt().ring().fmt_mono(mono)
                    )
                })
                .collect();
            (n, names)
        })
        .collect();
    let mut lhs = BTreeMap::new();
    let mut rhs = BTreeMap::new();
    let mut chain_map = true;
    for n in window.lo()..window.hi() {
        let (src, tgt) = (&bases[&n], &bases[&(n + 1)]);
        let dl = s.matrix(src, tgt, |v| s.lhs_d(n, v));
        let dr = s.matrix(src, tgt, |v| s.rhs_d(n, v));
        // Ψ is diagonal: compare Ψ ∘ ∂_L with ∂_R ∘ Ψ entrywise
        for (&(row, col), v) in dl.entries() {
            let (a1, j1, _) = &tgt[row];
            let (a0, j0, _) = &src[col];
            let lhs_side = v.clone() * s.sign(*a1, *j1);
            let rhs_side = dr.get(row, col) * s.sign(*a0, *j0);
            if lhs_side != rhs_side {
                chain_map = false;
            }
        }
        for (&(row, col), v) in dr.entries() {
            if dl.get(row, col) == Q::default() && *v != Q::default() {
                chain_map = false;
            }
        }
        lhs.insert(n, dl);
        rhs.insert(n, dr);
    }
    let cl = cohomology_dims(&FiniteComplex::new(window, labels.clone(), lhs)?);
    let cr = cohomology_dims(&FiniteComplex::new(window, labels, rhs)?);
    let degrees = window
        .degrees()
        .map(|n| {
            let dim = bases[&n].len();
            let mut psi = RationalMatrix::zeros(dim, dim);
            for (i, (a, j, _)) in bases[&n].iter().enumerate() {
                psi.set(i, i, s.sign(*a, *j));
            }
            DerHomDegree {
                degree: n,
                dim,
                rank: psi.rank(),
                lhs: cl[&n].clone(),
                rhs: cr[&n].clone(),
            }
        })
        .collect();
    Ok(DerHomReport {
        window,
        max_len,
        chain_map,
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgca::SemiFreeDgca;
    use crate::random::{random_base_map, random_cell_module, random_free_module};
    use rand::{Rng, SeedableRng};

    fn window() -> DegreeWindow {
        DegreeWindow::new(-3, 3).unwrap()
    }

    fn kx() -> SemiFreeDgca {
        SemiFreeDgca::new(vec![("x".into(), 0)], vec![Poly::zero()]).unwrap()
    }

    #[test]
    fn rank_one_free_module() {
        let b = kx();
        let m = CellModule::closed(b.clone(), vec![("m".into(), 0)]).unwrap();
        let r = der_hom_transport(&DgcaMorphism::identity(&b), &m, window(), 3).unwrap();
        assert!(r.isomorphism());
        // Der(k[x], k[x]) in degree 0 with length ≤ 3: x ↦ 1, x, x^2, x^3
        let d0 = r.degrees.iter().find(|d| d.degree == 0).unwrap();
        assert_eq!(d0.dim, 4);
        assert_eq!(d0.lhs, CohomologyDim::Dim(4));
    }

    #[test]
    fn rank_two_module_with_differential() {
        let b = kx();
        let fm = crate::dgca::FreeModule::new(b.clone(), vec![("n".into(), -1), ("m".into(), -2)]).unwrap();
        let d = fm.ring().word(&["x", "n"]).unwrap();
        let m = CellModule::from_module(fm, vec![Poly::zero(), d]).unwrap();
        let r = der_hom_transport(&DgcaMorphism::identity(&b), &m, window(), 3).unwrap();
        assert!(r.chain_map);
        assert!(r.isomorphism());
        assert!(r.complete_degrees().count() > 0);
    }

    #[test]
    fn module_over_wrong_base_is_rejected() {
        let m = CellModule::closed(kx(), vec![("m".into(), 0)]).unwrap();
        let p = DgcaMorphism::identity(&SemiFreeDgca::ground());
        assert!(der_hom_transport(&p, &m, window(), 2).is_err());
    }

    #[test]
    fn seeded_instances_are_isomorphisms() {
        for seed in 0..16 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = random_base_map(&mut rng);
            let rank = rng.gen_range(1..=3);
            let fm = random_free_module(&mut rng, p.tgt(), rank, -2, 1);
            let m = random_cell_module(&mut rng, &fm);
            let r = der_hom_transport(&p, &m, window(), 3).unwrap();
            assert!(r.isomorphism(), "seed {seed}: {r:?}");
        }
    }
}
