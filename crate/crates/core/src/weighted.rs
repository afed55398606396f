//! Weight-truncated formal symmetric algebras over a base dgca, their
//! weight-decomposed differentials and morphisms.
//!
//! A [`FatCdga`] is `Ŝym_A(M*)` truncated above weight `W`: its ring has the
//! base generators in weight 0 followed by dual generators in weight 1. The
//! differential is stored by its (inhomogeneous) values on all generators and
//! extended by the Leibniz rule; `d^n` is the part raising weight by `n`.

use std::fmt;

use crate::dgca::{
    apply_derivation, apply_morphism, dualize_cell, CellModule, DgcaMorphism, DualCellModule, FreeModule,
    Generator, Poly, Ring, SemiFreeDgca,
};
use crate::error::{Error, Result};
use crate::linalg::q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatCdga {
    base: SemiFreeDgca,
    ring: Ring,
    diff: Vec<Poly>,
    shift: i32,
}

impl FatCdga {
    /// `dual` lists the dual generators with their degrees; `diff` gives the
    /// differential on every generator (base generators first). Values are
    /// truncated at `cutoff`.
    pub fn new(
        base: SemiFreeDgca,
        dual: Vec<(String, i32)>,
        diff: Vec<Poly>,
        cutoff: u32,
        shift: i32,
    ) -> Result<Self> {
        let mut gens: Vec<Generator> = base.ring().gens().to_vec();
        gens.extend(dual.into_iter().map(|(n, d)| Generator::new(n, d, 1)));
        let ring = Ring::new(gens, Some(cutoff))?;
        if diff.len() != ring.len() {
            return Err(Error::Dimension(format!(
                "{} generators but {} differential values",
                ring.len(),
                diff.len()
            )));
        }
        let diff: Vec<Poly> = diff.iter().map(|p| ring.truncate(p)).collect();
        let nb = base.len();
        for (i, v) in diff.iter().enumerate() {
            let g = ring.gen(i);
            if let Some(dv) = ring.degree(v)? {
                if dv != g.degree + 1 {
                    return Err(Error::Argument(format!(
                        "d({}) has degree {dv}, expected {}",
                        g.name,
                        g.degree + 1
                    )));
                }
            }
            let w0 = ring.weight_part(v, 0);
            let expected = if i < nb { base.diff()[i].clone() } else { Poly::zero() };
            if w0 != expected {
                return Err(Error::Invalid(format!(
                    "projection to the base does not intertwine d on `{}`",
                    g.name
                )));
            }
        }
        Ok(FatCdga { base, ring, diff, shift })
    }

    /// The base alone, with no dual generators.
    pub fn base_only(base: SemiFreeDgca, cutoff: u32) -> Self {
        let diff = base.diff().to_vec();
        FatCdga::new(base, Vec::new(), diff, cutoff, 0).expect("base differential is valid")
    }

    /// `Ŝym_A(M*)` with only the weight-zero differential, from a dual cell
    /// module.
    pub fn from_dual_module(m: &DualCellModule, cutoff: u32, shift: i32) -> Result<Self> {
        let mut diff = m.base().diff().to_vec();
        diff.extend(m.diff().iter().cloned());
        FatCdga::new(m.base().clone(), m.module().gens(), diff, cutoff, shift)
    }

    /// The weight-zero CE algebra of a cell module: `Ŝym_A(M*)` with the dual
    /// differential.
    pub fn from_cell_module(m: &CellModule, cutoff: u32, shift: i32) -> Result<Self> {
        Self::from_dual_module(&dualize_cell(m), cutoff, shift)
    }

    pub fn base(&self) -> &SemiFreeDgca {
        &self.base
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn cutoff(&self) -> u32 {
        self.ring.cutoff().unwrap_or(0)
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn nbase(&self) -> usize {
        self.base.len()
    }

    pub fn rank(&self) -> usize {
        self.ring.len() - self.nbase()
    }

    pub fn dual_idx(&self, j: usize) -> usize {
        self.nbase() + j
    }

    pub fn dual_gens(&self) -> Vec<(String, i32)> {
        (0..self.rank())
            .map(|j| {
                let g = self.ring.gen(self.dual_idx(j));
                (g.name.clone(), g.degree)
            })
            .collect()
    }

    pub fn diff(&self) -> &[Poly] {
        &self.diff
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.ring.gen(i).weight
    }

    /// Generator values of `d^n`.
    pub fn component(&self, n: u32) -> Vec<Poly> {
        self.diff
            .iter()
            .enumerate()
            .map(|(i, v)| self.ring.weight_part(v, self.weight(i) + n))
            .collect()
    }

    fn identity(&self) -> Vec<Poly> {
        (0..self.ring.len()).map(Poly::gen).collect()
    }

    pub fn d(&self, p: &Poly) -> Poly {
        apply_derivation(&self.ring, &self.ring, &self.identity(), &self.diff, 1, p)
    }

    pub fn d_component(&self, n: u32, p: &Poly) -> Poly {
        apply_derivation(&self.ring, &self.ring, &self.identity(), &self.component(n), 1, p)
    }

    /// Same algebra and differential with a lower (or equal) cutoff.
    pub fn truncated(&self, cutoff: u32) -> Result<FatCdga> {
        FatCdga::new(self.base.clone(), self.dual_gens(), self.diff.clone(), cutoff, self.shift)
    }

    /// The weight-zero part of the differential on dual generators, as a
    /// module differential on `A⟨m*⟩` (no ordering condition imposed).
    pub fn linear_module(&self) -> (FreeModule, Vec<Poly>) {
        let fm = FreeModule::new(self.base.clone(), self.dual_gens()).expect("names already validated");
        let d0 = self.component(0);
        (fm, d0[self.nbase()..].to_vec())
    }

    pub fn fmt(&self, p: &Poly) -> String {
        self.ring.fmt(p)
    }
}

impl fmt::Display for FatCdga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.diff.iter().enumerate() {
            writeln!(f, "d {} = {}", self.ring.gen(i).name, self.ring.fmt(v))?;
        }
        Ok(())
    }
}

/// First failure of `Σ_{i+j=k} d^i d^j = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareZeroFailure {
    pub weight: u32,
    pub degree: i32,
    pub generator: String,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareZeroReport {
    /// Checked for all weights `k` with `weight(g) + k ≤ through`.
    pub through: u32,
    pub failure: Option<SquareZeroFailure>,
}

impl SquareZeroReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Check `Σ_{i+j=k} d^i ∘ d^j = 0` on every generator for every weight `k`
/// whose output is visible below the cutoff: `k ≤ W` on base generators and
/// `k ≤ W − 1` on dual generators.
pub fn square_zero_check(x: &FatCdga) -> SquareZeroReport {
    square_zero_check_through(x, x.cutoff())
}

/// As [`square_zero_check`], only considering weights `k ≤ through`.
pub fn square_zero_check_through(x: &FatCdga, through: u32) -> SquareZeroReport {
    let w = x.cutoff();
    let mut failures: Vec<SquareZeroFailure> = Vec::new();
    for (i, v) in x.diff().iter().enumerate() {
        let dd = x.d(v);
        if dd.is_zero() {
            continue;
        }
        let wg = x.weight(i);
        for k in 0..=through.min(w.saturating_sub(wg)) {
            if wg + k > w {
                break;
            }
            let part = x.ring().weight_part(&dd, wg + k);
            if !part.is_zero() {
                failures.push(SquareZeroFailure {
                    weight: k,
                    degree: x.ring().gen(i).degree,
                    generator: x.ring().gen(i).name.clone(),
                    witness: x.fmt(&part),
                });
                break;
            }
        }
    }
    let failure = failures.into_iter().min_by_key(|f| f.weight);
    SquareZeroReport { through, failure }
}

/// `Ŝym_A(M*) → Ŝym_B(N*)` with its base map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatMorphism {
    src: FatCdga,
    tgt: FatCdga,
    f0: DgcaMorphism,
    images: Vec<Poly>,
}

impl FatMorphism {
    pub fn new(src: FatCdga, tgt: FatCdga, f0: DgcaMorphism, images: Vec<Poly>) -> Result<Self> {
        if f0.src() != src.base() || f0.tgt() != tgt.base() {
            return Err(Error::Argument("base map does not match the bases".into()));
        }
        if images.len() != src.ring().len() {
            return Err(Error::Dimension(format!(
                "{} generators but {} images",
                src.ring().len(),
                images.len()
            )));
        }
        let images: Vec<Poly> = images.iter().map(|p| tgt.ring().truncate(p)).collect();
        for (i, img) in images.iter().enumerate() {
            let g = src.ring().gen(i);
            if let Some(d) = tgt.ring().degree(img)? {
                if d != g.degree {
                    return Err(Error::Argument(format!(
                        "image of `{}` has degree {d}, expected {}",
                        g.name, g.degree
                    )));
                }
            }
            let w0 = tgt.ring().weight_part(img, 0);
            let expected = if i < src.nbase() { f0.images()[i].clone() } else { Poly::zero() };
            if w0 != expected {
                return Err(Error::Invalid(format!(
                    "projections are not compatible on `{}`",
                    g.name
                )));
            }
        }
        Ok(FatMorphism { src, tgt, f0, images })
    }

    pub fn identity(x: &FatCdga) -> Self {
        FatMorphism {
            src: x.clone(),
            tgt: x.clone(),
            f0: DgcaMorphism::identity(x.base()),
            images: x.identity(),
        }
    }

    pub fn src(&self) -> &FatCdga {
        &self.src
    }

    pub fn tgt(&self) -> &FatCdga {
        &self.tgt
    }

    pub fn f0(&self) -> &DgcaMorphism {
        &self.f0
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        apply_morphism(self.tgt.ring(), &self.images, p)
    }

    /// Weight-`k` component: generator values raising weight by `k`.
    pub fn component(&self, k: u32) -> Vec<Poly> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, v)| self.tgt.ring().weight_part(v, self.src.weight(i) + k))
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FatMorphism) -> Result<FatMorphism> {
        if other.tgt != self.src {
            return Err(Error::Argument("composing fat morphisms with mismatched ends".into()));
        }
        let f0 = self.f0.compose(&other.f0)?;
        let images = other.images.iter().map(|p| self.apply(p)).collect();
        FatMorphism::new(other.src.clone(), self.tgt.clone(), f0, images)
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && self.images == self.src.identity()
    }

    /// Inverse of an endomorphism whose base map and weight-preserving part
    /// are the identity, by fixed-point iteration `h ← h + (g − ψ(h))`.
    pub fn inverse_unipotent(&self) -> Result<FatMorphism> {
        if self.src != self.tgt || !self.f0.is_identity() {
            return Err(Error::Argument("inverse only for unipotent endomorphisms".into()));
        }
        let x = &self.src;
        if self.component(0) != x.identity() {
            return Err(Error::Argument("weight-zero part is not the identity".into()));
        }
        let mut h: Vec<Poly> = x.identity();
        for _ in 0..=x.cutoff() + 1 {
            let mut changed = false;
            for (i, hi) in h.iter_mut().enumerate() {
                let err = Poly::gen(i).minus(&self.apply(hi));
                if !err.is_zero() {
                    hi.add_assign(&err);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        FatMorphism::new(x.clone(), x.clone(), self.f0.clone(), h)
    }

    /// The linear part `B ⊗_A M* → N*`.
    pub fn linear_part(&self) -> LinearPart {
        let (tm, td) = self.tgt.linear_module();
        let (sm, sd) = self.src.linear_module();
        let src = FreeModule::new(self.tgt.base().clone(), sm.gens()).expect("names already validated");
        let src_diff = sd.iter().map(|v| sm.push(&self.f0, &src, v)).collect();
        let one = self.component(0);
        let images = (0..self.src.rank())
            .map(|j| one[self.src.dual_idx(j)].clone())
            .collect();
        LinearPart {
            src,
            src_diff,
            tgt: tm,
            tgt_diff: td,
            images,
        }
    }
}

/// A `B`-linear map of free modules `B⟨m*⟩ → B⟨n*⟩` with both differentials.
/// Images are elements of the target module ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearPart {
    pub src: FreeModule,
    pub src_diff: Vec<Poly>,
    pub tgt: FreeModule,
    pub tgt_diff: Vec<Poly>,
    pub images: Vec<Poly>,
}

impl LinearPart {
    pub fn apply(&self, p: &Poly) -> Poly {
        let mut map: Vec<Poly> = (0..self.src.nbase()).map(Poly::gen).collect();
        map.extend(self.images.iter().cloned());
        apply_morphism(self.tgt.ring(), &map, p)
    }

    pub fn is_chain_map(&self) -> bool {
        (0..self.src.rank()).all(|j| {
            let lhs = self.tgt.d_with(&self.tgt_diff, &self.images[j]);
            let rhs = self.apply(&self.src_diff[j]);
            lhs == rhs
        })
    }

    pub fn is_identity(&self) -> bool {
        self.src.gens() == self.tgt.gens() && (0..self.src.rank()).all(|j| self.images[j] == self.tgt.gen(j))
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Poly::is_zero)
    }
}

/// The linear part of a differential, as a dual cell module. Fails if the
/// weight-zero part violates the rising condition.
pub fn linear_part_of_differential(x: &FatCdga) -> Result<DualCellModule> {
    let (fm, d) = x.linear_module();
    DualCellModule::from_module(fm, d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismFailure {
    pub generator: String,
    pub weight: u32,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub through: u32,
    pub failure: Option<MorphismFailure>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Verify `d_tgt ∘ g = g ∘ d_src` on generators through the target cutoff.
/// Projection compatibility is enforced by the constructor.
pub fn check_fat_morphism(g: &FatMorphism) -> MorphismReport {
    let r = g.tgt().ring();
    let mut best: Option<MorphismFailure> = None;
    for (i, img) in g.images().iter().enumerate() {
        let lhs = g.tgt().d(img);
        let rhs = g.apply(&g.src().diff()[i]);
        let diff = lhs.minus(&rhs);
        if diff.is_zero() {
            continue;
        }
        let w = diff.terms().map(|(m, _)| r.mono_weight(m)).min().unwrap_or(0);
        let wk = w.saturating_sub(g.src().weight(i));
        if best.as_ref().is_none_or(|b| wk < b.weight) {
            best = Some(MorphismFailure {
                generator: g.src().ring().gen(i).name.clone(),
                weight: wk,
                witness: r.fmt(&r.weight_part(&diff, w)),
            });
        }
    }
    MorphismReport {
        through: g.tgt().cutoff(),
        failure: best,
    }
}

pub fn compose_fat_morphisms(g: &FatMorphism, h: &FatMorphism) -> Result<FatMorphism> {
    g.compose(h)
}

/// CE algebra of a Lie algebra given by structure constants `(i, j, k, c)`,
/// meaning `[e_i, e_j] = c e_k` for `i < j` (0-based), with structure constants on a basis of
/// odd generators `e_i` (degree −1 in the shifted module), dual generators
/// in degree 1, built directly from the classical formula
/// `d e_k* = −Σ_{i<j} c_ij^k e_i* e_j*`.
pub fn lie_algebra_ce(n: usize, c: &[(usize, usize, usize, i64)], cutoff: u32) -> FatCdga {
    let dual: Vec<(String, i32)> = (1..=n).map(|i| (format!("e{i}'"), 1)).collect();
    let base = SemiFreeDgca::ground();
    let ring = Ring::new(
        dual.iter().map(|(s, d)| Generator::new(s.clone(), *d, 1)).collect(),
        Some(cutoff),
    )
    .expect("fresh generator names");
    let mut diff = vec![Poly::zero(); n];
    for &(i, j, k, v) in c {
        diff[k].sub_assign(&ring.word_idx(&[i, j]).scale(&q(v)));
    }
    FatCdga::new(base, dual, diff, cutoff, 1).expect("quadratic differential has the right degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn classical_ce(n: usize, c: &[(usize, usize, usize, i64)], cutoff: u32) -> FatCdga {
        lie_algebra_ce(n, c, cutoff)
    }

    #[test]
    fn abelian_passes() {
        let x = classical_ce(2, &[], 3);
        assert!(square_zero_check(&x).passed());
        assert!(linear_part_of_differential(&x).unwrap().diff().iter().all(Poly::is_zero));
    }

    #[test]
    fn two_dim_lie_passes() {
        // [e1, e2] = e1
        let x = classical_ce(2, &[(0, 1, 0, 1)], 4);
        assert!(square_zero_check(&x).passed());
    }

    #[test]
    fn sl2_passes() {
        // basis h, e, f: [h,e] = 2e, [h,f] = -2f, [e,f] = h
        let x = classical_ce(3, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)], 4);
        assert!(square_zero_check(&x).passed());
    }

    /// Jacobiator J(a,b,c) = [[a,b],c] + [[b,c],a] + [[c,a],b] for structure
    /// constants, computed by brute force.
    fn jacobiator(n: usize, c: &[(usize, usize, usize, i64)]) -> Vec<i64> {
        let br = |i: usize, j: usize| -> Vec<i64> {
            let mut v = vec![0; n];
            for &(a, b, k, x) in c {
                if (a, b) == (i, j) {
                    v[k] += x;
                }
                if (a, b) == (j, i) {
                    v[k] -= x;
                }
            }
            v
        };
        let br_vec = |u: &[i64], j: usize| -> Vec<i64> {
            let mut out = vec![0; n];
            for (i, &ui) in u.iter().enumerate() {
                for (k, v) in br(i, j).into_iter().enumerate() {
                    out[k] += ui * v;
                }
            }
            out
        };
        let (a, b, cc) = (0, 1, 2);
        let mut out = vec![0; n];
        for (x, y, z) in [(a, b, cc), (b, cc, a), (cc, a, b)] {
            for (k, v) in br_vec(&br(x, y), z).into_iter().enumerate() {
                out[k] += v;
            }
        }
        out
    }

    #[test]
    fn non_jacobi_fails_at_weight_two() {
        let c = [(0, 1, 2, 1), (0, 2, 0, 1)];
        assert_ne!(jacobiator(3, &c), vec![0, 0, 0]);
        let x = classical_ce(3, &c, 4);
        let rep = square_zero_check(&x);
        let f = rep.failure.expect("must fail");
        assert_eq!(f.weight, 2);
    }

    #[test]
    fn morphism_identity_and_perturbation() {
        let x = classical_ce(2, &[(0, 1, 0, 1)], 3);
        let id = FatMorphism::identity(&x);
        assert!(check_fat_morphism(&id).passed());
        assert!(id.linear_part().is_identity());
        assert!(id.linear_part().is_chain_map());
        let mut imgs = id.images().to_vec();
        // perturb the linear coefficient of e2'
        imgs[1] = imgs[1].scale(&q(2));
        let bad = FatMorphism::new(x.clone(), x.clone(), id.f0().clone(), imgs).unwrap();
        let f = check_fat_morphism(&bad).failure.expect("perturbation must be caught");
        assert_eq!((f.generator.as_str(), f.weight), ("e1'", 1));
    }

    #[test]
    fn composition_weight_pattern() {
        // base k[x]; one dual generator u of degree 0 (closed); W = 2
        let base = SemiFreeDgca::new(vec![("x".into(), 0)], vec![Poly::zero()]).unwrap();
        let x = FatCdga::new(base.clone(), vec![("u".into(), 0)], vec![Poly::zero(), Poly::zero()], 2, 0).unwrap();
        let r = x.ring();
        let u = Poly::gen(1);
        let xg = Poly::gen(0);
        // g: x -> x + u, u -> u + u^2 ; h: x -> x + 2u, u -> 3u
        let g = FatMorphism::new(
            x.clone(),
            x.clone(),
            DgcaMorphism::identity(&base),
            vec![xg.plus(&u), u.plus(&r.pow(&u, 2))],
        )
        .unwrap();
        let h = FatMorphism::new(
            x.clone(),
            x.clone(),
            DgcaMorphism::identity(&base),
            vec![xg.plus(&u.scale(&q(2))), u.scale(&q(3))],
        )
        .unwrap();
        let gh = g.compose(&h).unwrap();
        // weight-1 of (g∘h)(x) = g^1(x) + g^0-linear image of h^1(x) = u + 2u
        assert_eq!(gh.component(1)[0], u.scale(&q(3)));
        assert_eq!(gh.component(1)[1], r.pow(&u, 2).scale(&q(3)));
        // associativity at W = 2
        let lhs = g.compose(&h).unwrap().compose(&g).unwrap();
        let rhs = g.compose(&h.compose(&g).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        // unipotent inverse
        let inv = g.inverse_unipotent().unwrap();
        assert!(g.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&g).unwrap().is_identity());
    }
}
