//! Semi-free non-positively graded dgcas and their morphisms.

use super::derivation::{apply_derivation, apply_morphism};
use super::ring::{Generator, Poly, Ring};
use crate::error::{Error, Result};

/// A free graded-commutative algebra `k[x_a]` with `|x_a| ≤ 0` and a
/// triangular differential: `d(x_a)` only involves `x_b` with `b < a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiFreeDgca {
    ring: Ring,
    diff: Vec<Poly>,
}

impl SemiFreeDgca {
    pub fn new(gens: Vec<(String, i32)>, diff: Vec<Poly>) -> Result<Self> {
        if gens.len() != diff.len() {
            return Err(Error::Dimension(format!(
                "{} generators but {} differential values",
                gens.len(),
                diff.len()
            )));
        }
        for (name, deg) in &gens {
            if *deg > 0 {
                return Err(Error::Argument(format!(
                    "algebra generator `{name}` has positive degree {deg}"
                )));
            }
        }
        let ring = Ring::new(gens.into_iter().map(|(n, d)| Generator::new(n, d, 0)).collect(), None)?;
        for (a, v) in diff.iter().enumerate() {
            let g = ring.gen(a);
            if let Some(dv) = ring.degree(v)? {
                if dv != g.degree + 1 {
                    return Err(Error::Argument(format!(
                        "d({}) has degree {dv}, expected {}",
                        g.name,
                        g.degree + 1
                    )));
                }
            }
            for (m, _) in v.terms() {
                if let Some(&(b, _)) = m.factors().iter().find(|f| f.0 >= a) {
                    return Err(Error::Invalid(format!(
                        "d({}) mentions `{}`, which is not an earlier generator",
                        g.name,
                        ring.gen(b).name
                    )));
                }
            }
        }
        let alg = SemiFreeDgca { ring, diff };
        for a in 0..alg.len() {
            let dd = alg.d(&alg.diff[a]);
            if !dd.is_zero() {
                return Err(Error::Invalid(format!(
                    "d^2({}) = {} is not zero",
                    alg.ring.gen(a).name,
                    alg.ring.fmt(&dd)
                )));
            }
        }
        Ok(alg)
    }

    /// The ground field `k`.
    pub fn ground() -> Self {
        SemiFreeDgca {
            ring: Ring::new(Vec::new(), None).expect("empty ring"),
            diff: Vec::new(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    pub fn diff(&self) -> &[Poly] {
        &self.diff
    }

    pub fn gens(&self) -> Vec<(String, i32)> {
        self.ring.gens().iter().map(|g| (g.name.clone(), g.degree)).collect()
    }

    pub fn d(&self, p: &Poly) -> Poly {
        let id: Vec<Poly> = (0..self.len()).map(Poly::gen).collect();
        apply_derivation(&self.ring, &self.ring, &id, &self.diff, 1, p)
    }

    pub fn identity_images(&self) -> Vec<Poly> {
        (0..self.len()).map(Poly::gen).collect()
    }
}

/// A morphism of semi-free dgcas given by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgcaMorphism {
    src: SemiFreeDgca,
    tgt: SemiFreeDgca,
    images: Vec<Poly>,
}

impl DgcaMorphism {
    pub fn new(src: SemiFreeDgca, tgt: SemiFreeDgca, images: Vec<Poly>) -> Result<Self> {
        if images.len() != src.len() {
            return Err(Error::Dimension(format!(
                "{} generators but {} images",
                src.len(),
                images.len()
            )));
        }
        for (a, img) in images.iter().enumerate() {
            let g = src.ring.gen(a);
            if let Some(d) = tgt.ring.degree(img)? {
                if d != g.degree {
                    return Err(Error::Argument(format!(
                        "image of `{}` has degree {d}, expected {}",
                        g.name, g.degree
                    )));
                }
            }
        }
        let f = DgcaMorphism { src, tgt, images };
        for a in 0..f.src.len() {
            let lhs = f.tgt.d(&f.images[a]);
            let rhs = f.apply(&f.src.diff[a]);
            if lhs != rhs {
                return Err(Error::Invalid(format!(
                    "morphism does not commute with d on `{}`",
                    f.src.ring.gen(a).name
                )));
            }
        }
        Ok(f)
    }

    pub fn identity(a: &SemiFreeDgca) -> Self {
        DgcaMorphism {
            src: a.clone(),
            tgt: a.clone(),
            images: a.identity_images(),
        }
    }

    pub fn src(&self) -> &SemiFreeDgca {
        &self.src
    }

    pub fn tgt(&self) -> &SemiFreeDgca {
        &self.tgt
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        apply_morphism(self.tgt.ring(), &self.images, p)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DgcaMorphism) -> Result<DgcaMorphism> {
        if other.tgt != self.src {
            return Err(Error::Argument("composing morphisms with mismatched ends".into()));
        }
        Ok(DgcaMorphism {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            images: other.images.iter().map(|p| self.apply(p)).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && self.images == self.src.identity_images()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    pub(crate) fn koszul_xy() -> SemiFreeDgca {
        // k[x, y], |y| = -1, d y = x^2
        let r = Ring::new(vec![Generator::new("x", 0, 0)], None).unwrap();
        let x2 = r.pow(&Poly::gen(0), 2);
        SemiFreeDgca::new(vec![("x".into(), 0), ("y".into(), -1)], vec![Poly::zero(), x2]).unwrap()
    }

    #[test]
    fn rejects_positive_degree() {
        assert!(SemiFreeDgca::new(vec![("x".into(), 1)], vec![Poly::zero()]).is_err());
    }

    #[test]
    fn rejects_non_triangular() {
        // d x = y with y later
        let r = SemiFreeDgca::new(vec![("x".into(), -1), ("y".into(), 0)], vec![Poly::gen(1), Poly::zero()]);
        assert!(matches!(r, Err(Error::Invalid(_))));
    }

    #[test]
    fn d_on_products() {
        let a = koszul_xy();
        let r = a.ring();
        let xy = r.word(&["x", "y"]).unwrap();
        assert_eq!(a.d(&xy), r.pow(&Poly::gen(0), 3));
    }

    #[test]
    fn morphism_checks() {
        let a = koszul_xy();
        let id = DgcaMorphism::identity(&a);
        assert!(id.is_identity());
        // x -> 2x, y -> 4y commutes with d
        let f = DgcaMorphism::new(a.clone(), a.clone(), vec![Poly::gen(0).scale(&q(2)), Poly::gen(1).scale(&q(4))]).unwrap();
        assert_eq!(f.compose(&id).unwrap(), f);
        // x -> 2x, y -> y does not
        assert!(DgcaMorphism::new(a.clone(), a, vec![Poly::gen(0).scale(&q(2)), Poly::gen(1)]).is_err());
    }
}
