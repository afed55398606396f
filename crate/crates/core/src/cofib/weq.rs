//! Weak equivalences, certified by cone cohomology of length-truncated
//! complexes.
//!
//! A base algebra is replaced by its quotient by monomials of base length
//! greater than `max_len`; this is a quotient complex whenever no generator
//! has a constant differential, and maps descend when no generator is sent to
//! a constant. The linear part is truncated the same way in its coefficients.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::dgca::{FreeModule, Monomial, Poly, Ring, SemiFreeDgca};
use crate::error::Result;
use crate::linalg::{cohomology_dims, q, mapping_cone, CohomologyDim, DegreeWindow, FiniteComplex, RationalMatrix};
use crate::weighted::{FatCdga, FatMorphism};

/// A finite complex together with the monomial basis of each degree.
#[derive(Debug, Clone)]
pub struct TruncatedComplex {
    pub complex: FiniteComplex,
    basis: BTreeMap<i32, Vec<Monomial>>,
}

impl TruncatedComplex {
    fn build(ring: &Ring, window: DegreeWindow, weight: u32, max_len: u32, d: impl Fn(&Poly) -> Poly) -> Result<Self> {
        let mut basis = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for n in window.degrees() {
            let b = ring.monomials(n, weight, max_len);
            labels.insert(n, b.iter().map(|m| ring.fmt_mono(m)).collect());
            basis.insert(n, b);
        }
        let mut diffs = BTreeMap::new();
        for n in window.lo()..window.hi() {
            diffs.insert(n, matrix(&basis[&n], &basis[&(n + 1)], &d));
        }
        Ok(TruncatedComplex {
            complex: FiniteComplex::new(window, labels, diffs)?,
            basis,
        })
    }

    pub fn basis(&self, n: i32) -> &[Monomial] {
        self.basis.get(&n).map_or(&[], |b| b.as_slice())
    }

    pub fn dim(&self, n: i32) -> usize {
        self.basis(n).len()
    }

    /// Degreewise matrices of a map into `tgt`, for every degree both share.
    pub fn map_to(&self, tgt: &TruncatedComplex, f: impl Fn(&Poly) -> Poly) -> BTreeMap<i32, RationalMatrix> {
        self.basis
            .iter()
            .filter_map(|(n, b)| tgt.basis.get(n).map(|t| (*n, matrix(b, t, &f))))
            .collect()
    }
}

/// Matrix of `f` from the span of `src` to the span of `tgt`; terms outside
/// `tgt` (too long) are dropped.
fn matrix(src: &[Monomial], tgt: &[Monomial], f: &impl Fn(&Poly) -> Poly) -> RationalMatrix {
    let index: BTreeMap<&Monomial, usize> = tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = RationalMatrix::zeros(tgt.len(), src.len());
    for (j, m) in src.iter().enumerate() {
        let img = f(&Poly::term(m.clone(), q(1)));
        for (tm, c) in img.terms() {
            if let Some(&i) = index.get(tm) {
                mat.set(i, j, c.clone());
            }
        }
    }
    mat
}

/// The base algebra truncated at base length `max_len`.
pub fn base_complex(a: &SemiFreeDgca, window: DegreeWindow, max_len: u32) -> Result<TruncatedComplex> {
    TruncatedComplex::build(a.ring(), window, 0, max_len, |p| a.d(p))
}

/// A free module with differential, coefficients truncated at `max_len`.
pub fn linear_complex(m: &FreeModule, diff: &[Poly], window: DegreeWindow, max_len: u32) -> Result<TruncatedComplex> {
    TruncatedComplex::build(m.ring(), window, 1, max_len, |p| m.d_with(diff, p))
}

/// Generators of `a` whose differential has a constant term; such bases do
/// not admit the length truncation.
pub fn constant_differentials(a: &SemiFreeDgca) -> Vec<String> {
    a.diff()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.constant_term().is_zero())
        .map(|(i, _)| a.ring().gen(i).name.clone())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeqConfig {
    pub window: DegreeWindow,
    pub max_len: u32,
}

impl WeqConfig {
    pub fn new(window: DegreeWindow, max_len: u32) -> Self {
        WeqConfig { window, max_len }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeqFailure {
    /// `"base"` or `"linear"`.
    pub part: &'static str,
    pub degree: i32,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeqReport {
    pub verdict: Verdict,
    pub config: WeqConfig,
    /// Cone cohomology of the base map.
    pub base: BTreeMap<i32, CohomologyDim>,
    /// Cone cohomology of the linear part.
    pub linear: BTreeMap<i32, CohomologyDim>,
    pub failure: Option<WeqFailure>,
    pub reason: Option<String>,
}

fn cone_dims(
    x: &TruncatedComplex,
    y: &TruncatedComplex,
    f: impl Fn(&Poly) -> Poly,
) -> Result<BTreeMap<i32, CohomologyDim>> {
    let maps = x.map_to(y, f);
    Ok(cohomology_dims(&mapping_cone(&x.complex, &y.complex, &maps)?))
}

/// Decide whether `g` is a weak equivalence: both the base map and the
/// linear part `B ⊗_A M* → N*` must have acyclic cones on the interior of
/// the window.
pub fn is_weak_equivalence(g: &FatMorphism, cfg: &WeqConfig) -> WeqReport {
    let mut report = WeqReport {
        verdict: Verdict::Inconclusive,
        config: *cfg,
        base: BTreeMap::new(),
        linear: BTreeMap::new(),
        failure: None,
        reason: None,
    };
    let src = g.src().base();
    let tgt = g.tgt().base();
    for (name, a) in [("source", src), ("target", tgt)] {
        let bad = constant_differentials(a);
        if !bad.is_empty() {
            report.reason = Some(format!("{name} base has constant differential on {}", bad.join(", ")));
            return report;
        }
    }
    for (i, img) in g.f0().images().iter().enumerate() {
        if !img.constant_term().is_zero() {
            report.reason = Some(format!("base map sends `{}` to a constant", src.ring().gen(i).name));
            return report;
        }
    }
    let w = cfg.window;
    let outer = w.widen(0, 1);
    let run = || -> Result<(BTreeMap<i32, CohomologyDim>, BTreeMap<i32, CohomologyDim>)> {
        let bx = base_complex(src, outer, cfg.max_len)?;
        let by = base_complex(tgt, w, cfg.max_len)?;
        let base = cone_dims(&bx, &by, |p| g.f0().apply(p))?;
        let lp = g.linear_part();
        // At cutoff 0 the formal generators vanish and only the base is seen.
        let visible = |x: &FatCdga, m: &FreeModule, d: &[Poly]| -> Result<(FreeModule, Vec<Poly>)> {
            if x.cutoff() == 0 {
                Ok((FreeModule::new(x.base().clone(), Vec::new())?, Vec::new()))
            } else {
                Ok((m.clone(), d.to_vec()))
            }
        };
        let (sm, sd) = visible(g.src(), &lp.src, &lp.src_diff)?;
        let (tm, td) = visible(g.tgt(), &lp.tgt, &lp.tgt_diff)?;
        let lx = linear_complex(&sm, &sd, outer, cfg.max_len)?;
        let ly = linear_complex(&tm, &td, w, cfg.max_len)?;
        let linear = cone_dims(&lx, &ly, |p| lp.apply(p))?;
        Ok((base, linear))
    };
    match run() {
        Err(e) => {
            report.reason = Some(e.to_string());
        }
        Ok((base, linear)) => {
            report.base = base;
            report.linear = linear;
            let mut complete = false;
            for (part, dims) in [("base", &report.base), ("linear", &report.linear)] {
                for (&n, d) in dims {
                    if let CohomologyDim::Dim(k) = d {
                        complete = true;
                        if *k > 0 && report.failure.is_none() {
                            report.failure = Some(WeqFailure {
                                part,
                                degree: n,
                                dimension: *k,
                            });
                        }
                    }
                }
            }
            report.verdict = if report.failure.is_some() {
                Verdict::False
            } else if complete {
                Verdict::True
            } else {
                report.reason = Some("window has no interior degree".into());
                Verdict::Inconclusive
            };
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgca::{DgcaMorphism, SemiFreeDgca};
    use crate::weighted::{lie_algebra_ce, FatCdga};

    fn cfg() -> WeqConfig {
        WeqConfig::new(DegreeWindow::new(-6, 2).unwrap(), 4)
    }

    fn base_map(src: SemiFreeDgca, tgt: SemiFreeDgca, images: Vec<Poly>) -> FatMorphism {
        let (x, y) = (FatCdga::base_only(src.clone(), 2), FatCdga::base_only(tgt.clone(), 2));
        let f0 = DgcaMorphism::new(src, tgt, images.clone()).unwrap();
        FatMorphism::new(x, y, f0, images).unwrap()
    }

    #[test]
    fn identity_is_a_weak_equivalence() {
        let x = lie_algebra_ce(2, &[(0, 1, 0, 1)], 3);
        let r = is_weak_equivalence(&FatMorphism::identity(&x), &cfg());
        assert_eq!(r.verdict, Verdict::True, "{r:?}");
    }

    #[test]
    fn adjoining_a_variable_is_not() {
        let kx = SemiFreeDgca::new(vec![("x".into(), 0)], vec![Poly::zero()]).unwrap();
        let r = is_weak_equivalence(&base_map(SemiFreeDgca::ground(), kx, vec![]), &cfg());
        assert_eq!(r.verdict, Verdict::False);
        let fail = r.failure.unwrap();
        assert_eq!((fail.part, fail.degree), ("base", 0));
    }

    #[test]
    fn koszul_resolution_is_a_weak_equivalence() {
        // k[x, t], d t = x, maps onto k
        let kxt = SemiFreeDgca::new(vec![("x".into(), 0), ("t".into(), -1)], vec![Poly::zero(), Poly::gen(0)]).unwrap();
        let g = base_map(kxt, SemiFreeDgca::ground(), vec![Poly::zero(), Poly::zero()]);
        assert_eq!(is_weak_equivalence(&g, &cfg()).verdict, Verdict::True);
    }

    #[test]
    fn constant_differential_is_inconclusive() {
        let a = SemiFreeDgca::new(vec![("t".into(), -1)], vec![Poly::one()]).unwrap();
        let g = base_map(a.clone(), a.clone(), vec![Poly::gen(0)]);
        let r = is_weak_equivalence(&g, &cfg());
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.reason.unwrap().contains("constant"));
    }

    #[test]
    fn window_without_interior_is_inconclusive() {
        let x = lie_algebra_ce(1, &[], 2);
        let c = WeqConfig::new(DegreeWindow::new(0, 1).unwrap(), 2);
        assert_eq!(is_weak_equivalence(&FatMorphism::identity(&x), &c).verdict, Verdict::Inconclusive);
    }
}
