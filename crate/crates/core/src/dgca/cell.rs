//! Free modules over semi-free dgcas, cell modules (lowering condition) and
//! their duals (rising condition).

use super::derivation::{apply_derivation, apply_morphism};
use super::ring::{Generator, Monomial, Poly, Ring};
use super::semifree::{DgcaMorphism, SemiFreeDgca};
use crate::error::{Error, Result};
use crate::linalg::Q;

/// `A⟨m_1, …, m_r⟩`. Elements are weight-1 polynomials in a ring whose first
/// generators are those of `A` and whose remaining generators are the `m_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeModule {
    base: SemiFreeDgca,
    ring: Ring,
}

impl FreeModule {
    pub fn new(base: SemiFreeDgca, gens: Vec<(String, i32)>) -> Result<Self> {
        let mut all: Vec<Generator> = base.ring().gens().to_vec();
        all.extend(gens.into_iter().map(|(n, d)| Generator::new(n, d, 1)));
        let ring = Ring::new(all, Some(1))?;
        Ok(FreeModule { base, ring })
    }

    pub fn base(&self) -> &SemiFreeDgca {
        &self.base
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nbase(&self) -> usize {
        self.base.len()
    }

    pub fn rank(&self) -> usize {
        self.ring.len() - self.nbase()
    }

    /// Ring index of the j-th module generator.
    pub fn idx(&self, j: usize) -> usize {
        self.nbase() + j
    }

    pub fn gen(&self, j: usize) -> Poly {
        Poly::gen(self.idx(j))
    }

    pub fn name(&self, j: usize) -> &str {
        &self.ring.gen(self.idx(j)).name
    }

    pub fn degree(&self, j: usize) -> i32 {
        self.ring.gen(self.idx(j)).degree
    }

    pub fn gens(&self) -> Vec<(String, i32)> {
        (0..self.rank()).map(|j| (self.name(j).to_string(), self.degree(j))).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        let i = self.ring.index_of(name)?;
        i.checked_sub(self.nbase())
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// The coefficient `a_j` in `Σ a_j m_j`.
    pub fn coefficient(&self, elem: &Poly, j: usize) -> Poly {
        let idx = self.idx(j);
        elem.map_terms(|m, c| {
            let f = m.factors();
            match f.last() {
                Some(&(i, 1)) if i == idx => Some((Monomial::from_factors(f[..f.len() - 1].to_vec()), c.clone())),
                _ => None,
            }
        })
    }

    pub fn coefficients(&self, elem: &Poly) -> Vec<Poly> {
        (0..self.rank()).map(|j| self.coefficient(elem, j)).collect()
    }

    pub fn from_coefficients(&self, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (j, a) in coeffs.iter().enumerate() {
            out.add_assign(&self.ring.mul(a, &self.gen(j)));
        }
        out
    }

    /// True if every term has exactly one module generator.
    pub fn is_element(&self, p: &Poly) -> bool {
        p.terms().all(|(m, _)| self.ring.mono_weight(m) == 1)
    }

    fn check_values(&self, diff: &[Poly], what: &str) -> Result<()> {
        if diff.len() != self.rank() {
            return Err(Error::Dimension(format!(
                "{} generators but {} differential values",
                self.rank(),
                diff.len()
            )));
        }
        for (j, v) in diff.iter().enumerate() {
            if !self.is_element(v) {
                return Err(Error::Invalid(format!(
                    "d({}) = {} is not a {what} element",
                    self.name(j),
                    self.ring.fmt(v)
                )));
            }
            if let Some(dv) = self.ring.degree(v)? {
                if dv != self.degree(j) + 1 {
                    return Err(Error::Argument(format!(
                        "d({}) has degree {dv}, expected {}",
                        self.name(j),
                        self.degree(j) + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn all_values(&self, diff: &[Poly]) -> Vec<Poly> {
        let mut v = self.base.diff().to_vec();
        v.extend(diff.iter().cloned());
        v
    }

    /// The degree-one derivation extending `d_A` and the given values.
    pub fn d_with(&self, diff: &[Poly], p: &Poly) -> Poly {
        let id: Vec<Poly> = (0..self.ring.len()).map(Poly::gen).collect();
        apply_derivation(&self.ring, &self.ring, &id, &self.all_values(diff), 1, p)
    }

    fn check_square_zero(&self, diff: &[Poly]) -> Result<()> {
        for (j, v) in diff.iter().enumerate() {
            let dd = self.d_with(diff, v);
            if !dd.is_zero() {
                return Err(Error::Invalid(format!(
                    "d^2({}) = {} is not zero",
                    self.name(j),
                    self.ring.fmt(&dd)
                )));
            }
        }
        Ok(())
    }

    /// Apply a base map to all coefficients, landing in `tgt`, a module over
    /// the target base with the same generators.
    pub fn push(&self, f: &DgcaMorphism, tgt: &FreeModule, p: &Poly) -> Poly {
        let mut images = f.images().to_vec();
        images.extend((0..self.rank()).map(|j| tgt.gen(j)));
        apply_morphism(tgt.ring(), &images, p)
    }
}

/// A cell module: `d(m_i)` lies in `A⟨m_j⟩_{j<i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellModule {
    module: FreeModule,
    diff: Vec<Poly>,
}

impl CellModule {
    pub fn new(base: SemiFreeDgca, gens: Vec<(String, i32)>, diff: Vec<Poly>) -> Result<Self> {
        Self::from_module(FreeModule::new(base, gens)?, diff)
    }

    pub fn from_module(module: FreeModule, diff: Vec<Poly>) -> Result<Self> {
        module.check_values(&diff, "module")?;
        for (i, v) in diff.iter().enumerate() {
            for j in i..module.rank() {
                if !module.coefficient(v, j).is_zero() {
                    return Err(Error::Invalid(format!(
                        "lowering condition fails: d({}) involves {}",
                        module.name(i),
                        module.name(j)
                    )));
                }
            }
        }
        module.check_square_zero(&diff)?;
        Ok(CellModule { module, diff })
    }

    /// Zero differential on the given generators.
    pub fn closed(base: SemiFreeDgca, gens: Vec<(String, i32)>) -> Result<Self> {
        let n = gens.len();
        Self::new(base, gens, vec![Poly::zero(); n])
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn base(&self) -> &SemiFreeDgca {
        self.module.base()
    }

    pub fn ring(&self) -> &Ring {
        self.module.ring()
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn diff(&self) -> &[Poly] {
        &self.diff
    }

    pub fn d(&self, p: &Poly) -> Poly {
        self.module.d_with(&self.diff, p)
    }

    /// `a_{ji}`, the coefficient of `m_i` in `d(m_j)`.
    pub fn structure_coefficient(&self, j: usize, i: usize) -> Poly {
        self.module.coefficient(&self.diff[j], i)
    }
}

/// A finite-rank dual cell module: `d(m_i*)` involves only `m_j*` with `j > i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCellModule {
    module: FreeModule,
    diff: Vec<Poly>,
}

impl DualCellModule {
    pub fn new(base: SemiFreeDgca, gens: Vec<(String, i32)>, diff: Vec<Poly>) -> Result<Self> {
        Self::from_module(FreeModule::new(base, gens)?, diff)
    }

    pub fn from_module(module: FreeModule, diff: Vec<Poly>) -> Result<Self> {
        module.check_values(&diff, "module")?;
        for (i, v) in diff.iter().enumerate() {
            for j in 0..=i {
                if !module.coefficient(v, j).is_zero() {
                    return Err(Error::Invalid(format!(
                        "rising condition fails: d({}) involves {}",
                        module.name(i),
                        module.name(j)
                    )));
                }
            }
        }
        module.check_square_zero(&diff)?;
        Ok(DualCellModule { module, diff })
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn base(&self) -> &SemiFreeDgca {
        self.module.base()
    }

    pub fn ring(&self) -> &Ring {
        self.module.ring()
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn diff(&self) -> &[Poly] {
        &self.diff
    }

    pub fn d(&self, p: &Poly) -> Poly {
        self.module.d_with(&self.diff, p)
    }
}

/// Name of the dual of a generator.
pub fn dual_name(name: &str) -> String {
    format!("{name}'")
}

fn primal_name(name: &str) -> String {
    name.strip_suffix('\'').unwrap_or(name).to_string()
}

fn parity_sign(e: i32) -> Q {
    if e.rem_euclid(2) == 1 {
        -Q::from_integer(1.into())
    } else {
        Q::from_integer(1.into())
    }
}

/// Transpose a structure-coefficient matrix with Koszul signs. `coeff(j, i)`
/// is the coefficient of generator i in the value on generator j of the
/// source; the result gives, for each i, the coefficient of j in the value on
/// generator i of the target. `dual_deg(i)` is the degree of target generator
/// i. The rule is `c_ij = −(−1)^{|m_i*|(1+|a_ji|)} a_ji` and is an involution.
fn transpose_coefficients(
    base: &Ring,
    rank: usize,
    coeff: impl Fn(usize, usize) -> Poly,
    dual_deg: impl Fn(usize) -> i32,
) -> Vec<Vec<Poly>> {
    let mut out = vec![vec![Poly::zero(); rank]; rank];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let a = coeff(j, i);
            if a.is_zero() {
                continue;
            }
            let da = base.degree(&a).ok().flatten().unwrap_or(0);
            let s = -parity_sign(dual_deg(i) * (1 + da));
            *slot = a.scale(&s);
        }
    }
    out
}

pub fn dualize_cell(m: &CellModule) -> DualCellModule {
    let module = m.module();
    let gens: Vec<(String, i32)> = module.gens().into_iter().map(|(n, d)| (dual_name(&n), -d)).collect();
    let dual = FreeModule::new(module.base().clone(), gens).expect("dual names are distinct");
    let rows = transpose_coefficients(
        module.base().ring(),
        module.rank(),
        |j, i| m.structure_coefficient(j, i),
        |i| -module.degree(i),
    );
    let diff = rows.iter().map(|r| dual.from_coefficients(r)).collect();
    DualCellModule::from_module(dual, diff).expect("lowering dualizes to rising")
}

pub fn primal_of(d: &DualCellModule) -> CellModule {
    let module = d.module();
    let gens: Vec<(String, i32)> = module.gens().into_iter().map(|(n, g)| (primal_name(&n), -g)).collect();
    let primal = FreeModule::new(module.base().clone(), gens).expect("primal names are distinct");
    // d(m_i*) = Σ_j c_ij m_j*  gives  a_ji = −(−1)^{|m_i*|(1+|c_ij|)} c_ij.
    let ring = module.base().ring();
    let r = module.rank();
    let mut rows = vec![vec![Poly::zero(); r]; r];
    for i in 0..r {
        for (j, row) in rows.iter_mut().enumerate() {
            let c = module.coefficient(&d.diff()[i], j);
            if c.is_zero() {
                continue;
            }
            let dc = ring.degree(&c).ok().flatten().unwrap_or(0);
            row[i] = c.scale(&-parity_sign(module.degree(i) * (1 + dc)));
        }
    }
    let diff = rows.iter().map(|r| primal.from_coefficients(r)).collect();
    CellModule::from_module(primal, diff).expect("rising dualizes to lowering")
}

/// `B ⊗_A M` for a cell module over `A`.
pub fn base_change(f: &DgcaMorphism, m: &CellModule) -> Result<CellModule> {
    if f.src() != m.base() {
        return Err(Error::Argument("base change along a map from a different base".into()));
    }
    let tgt = FreeModule::new(f.tgt().clone(), m.module().gens())?;
    let diff = m.diff().iter().map(|v| m.module().push(f, &tgt, v)).collect();
    CellModule::from_module(tgt, diff)
}

pub fn base_change_dual(f: &DgcaMorphism, m: &DualCellModule) -> Result<DualCellModule> {
    if f.src() != m.base() {
        return Err(Error::Argument("base change along a map from a different base".into()));
    }
    let tgt = FreeModule::new(f.tgt().clone(), m.module().gens())?;
    let diff = m.diff().iter().map(|v| m.module().push(f, &tgt, v)).collect();
    DualCellModule::from_module(tgt, diff)
}
