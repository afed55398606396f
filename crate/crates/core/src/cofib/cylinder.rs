//! Cylinder objects: a factorization `X ⊔ X → C → X` of the fold map into a
//! cofibration followed by a weak equivalence.
//!
//! The weight-zero part is built from a cylinder on the base and a path
//! module on the linear part. Higher weights are found one at a time by a
//! linear solve in the kernel of the projection.

use std::collections::BTreeSet;

use super::constructions::{coproduct, is_cofibration, reindex, suffixed, CofibrationReport, Coproduct};
use super::weq::{is_weak_equivalence, WeqConfig, WeqReport};
use crate::dgca::lift::{kernel_elements, module_monomials};
use crate::dgca::span::{combine, relations, solve_combination, stacked_system};
use crate::dgca::{
    apply_derivation, apply_morphism, dual_name, dualize_cell, lift_differential, primal_of, CellModule,
    DgcaMorphism, FreeModule, Generator, Monomial, Poly, Ring, SemiFreeDgca,
};
use crate::error::{Error, Result};
use crate::linalg::{q, solve, DegreeWindow};
use crate::weighted::{
    check_fat_morphism, linear_part_of_differential, square_zero_check, FatCdga, FatMorphism, MorphismReport,
    SquareZeroReport,
};

/// `Cyl(A) = A ⊗ A ⊗ Λ(s_a)` with `d s_a = x_a⁰ − x_a¹ − h_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCylinder {
    pub cyl: SemiFreeDgca,
    /// `A ⊗ A → Cyl(A)`.
    pub incl: DgcaMorphism,
    /// `Cyl(A) → A`, sending both copies to `A` and every `s_a` to zero.
    pub proj: DgcaMorphism,
    /// The correction terms `h_a`.
    pub homotopy: Vec<Poly>,
}

fn copy_names(names: &[String], suffix: &str, taken: &mut BTreeSet<String>) -> Vec<String> {
    names.iter().map(|n| fresh(suffixed(n, suffix), taken)).collect()
}

fn fresh(name: String, taken: &mut BTreeSet<String>) -> String {
    let mut n = name;
    while taken.contains(&n) {
        n = suffixed(&n, "_");
    }
    taken.insert(n.clone());
    n
}

pub fn base_cylinder(a: &SemiFreeDgca, max_len: u32) -> Result<BaseCylinder> {
    let x = FatCdga::base_only(a.clone(), 0);
    let co = coproduct(&x, &x)?;
    let names: Vec<String> = co.object.ring().gens().iter().map(|g| g.name.clone()).collect();
    let mut taken = names.iter().cloned().collect();
    base_cylinder_named(a, co.object.base(), &mut taken, max_len)
}

/// `ends` is `A ⊗ A` with the naming of the coproduct; `taken` collects the
/// names in use so the `s_a` stay distinct from them.
fn base_cylinder_named(
    a: &SemiFreeDgca,
    ends: &SemiFreeDgca,
    taken: &mut BTreeSet<String>,
    max_len: u32,
) -> Result<BaseCylinder> {
    let nb = a.len();
    let src_names: Vec<String> = a.ring().gens().iter().map(|g| format!("s_{}", g.name)).collect();
    let s_names: Vec<String> = src_names.into_iter().map(|n| fresh(n, taken)).collect();
    let mut gens: Vec<(String, i32)> = ends.gens();
    gens.extend((0..nb).map(|i| (s_names[i].clone(), a.ring().gen(i).degree - 1)));
    let ring = Ring::new(gens.iter().map(|(n, d)| Generator::new(n.clone(), *d, 0)).collect(), None)?;
    let id: Vec<Poly> = (0..ring.len()).map(Poly::gen).collect();
    let mut diff = vec![Poly::zero(); ring.len()];
    diff[..2 * nb].clone_from_slice(ends.diff());
    let end = |p: &Poly, e: usize| reindex(p, &|i| i + e * nb);
    let mut homotopy = Vec::with_capacity(nb);
    for k in 0..nb {
        let target = end(&a.diff()[k], 0).minus(&end(&a.diff()[k], 1));
        let h = if target.is_zero() {
            Poly::zero()
        } else {
            let s_range = 2 * nb..2 * nb + k;
            let space: Vec<Poly> = ring
                .monomials(a.ring().gen(k).degree, 0, max_len)
                .into_iter()
                .filter(|m| {
                    let fs = m.factors();
                    fs.iter().any(|f| s_range.contains(&f.0)) && fs.iter().all(|f| f.0 < 2 * nb + k)
                })
                .map(|m| Poly::term(m, q(1)))
                .collect();
            let images: Vec<Poly> = space
                .iter()
                .map(|p| apply_derivation(&ring, &ring, &id, &diff, 1, p))
                .collect();
            let t = solve_combination(&images, &target).ok_or_else(|| {
                Error::WindowTooSmall(format!(
                    "no homotopy for d({}) with length at most {max_len}",
                    s_names[k]
                ))
            })?;
            combine(&space, &t)
        };
        diff[2 * nb + k] = Poly::gen(k).minus(&Poly::gen(nb + k)).minus(&h);
        homotopy.push(h);
    }
    let cyl = SemiFreeDgca::new(gens, diff)?;
    let incl = DgcaMorphism::new(ends.clone(), cyl.clone(), (0..2 * nb).map(Poly::gen).collect())?;
    let proj_images = (0..3 * nb)
        .map(|i| if i < 2 * nb { Poly::gen(i % nb) } else { Poly::zero() })
        .collect();
    let proj = DgcaMorphism::new(cyl.clone(), a.clone(), proj_images)?;
    Ok(BaseCylinder {
        cyl,
        incl,
        proj,
        homotopy,
    })
}

/// `S(a·t) = (−1)^{|a|} a·t^I`; the `t^I` come first in `p`.
fn suspend(t: &FreeModule, p: &FreeModule, y: &Poly) -> Poly {
    let base = t.base().ring();
    let mut coeffs = vec![Poly::zero(); p.rank()];
    for (j, c) in t.coefficients(y).into_iter().enumerate() {
        coeffs[j] = c.map_terms(|m, v| {
            let s = if base.mono_degree(m).rem_euclid(2) == 1 { -v.clone() } else { v.clone() };
            Some((m.clone(), s))
        });
    }
    p.from_coefficients(&coeffs)
}

/// Fiber of a chain map `φ: S → T` of cell modules over one base: generators
/// `t^I` of degree `|t| + 1` followed by those of `S`, with
/// `d t^I = −S(δt)` and `d s = δs + S(φ s)`.
pub fn fiber_module(
    s: &CellModule,
    t: &CellModule,
    phi: &[Poly],
    t_names: Vec<String>,
    s_names: Vec<String>,
) -> Result<CellModule> {
    if s.base() != t.base() || phi.len() != s.rank() || t_names.len() != t.rank() || s_names.len() != s.rank() {
        return Err(Error::Argument("fiber needs a map between modules over one base".into()));
    }
    let mut images: Vec<Poly> = (0..s.module().nbase()).map(Poly::gen).collect();
    images.extend(phi.iter().cloned());
    for (k, v) in s.diff().iter().enumerate() {
        let lhs = t.d(&phi[k]);
        let rhs = apply_morphism(t.ring(), &images, v);
        if lhs != rhs {
            return Err(Error::Invalid(format!("map is not a chain map at `{}`", s.module().name(k))));
        }
    }
    let rt = t.rank();
    let mut gens: Vec<(String, i32)> = t_names
        .into_iter()
        .enumerate()
        .map(|(j, n)| (n, t.module().degree(j) + 1))
        .collect();
    gens.extend(s_names.into_iter().enumerate().map(|(k, n)| (n, s.module().degree(k))));
    let p = FreeModule::new(s.base().clone(), gens)?;
    let embed_s = |y: &Poly| {
        let mut coeffs = vec![Poly::zero(); rt];
        coeffs.extend(s.module().coefficients(y));
        p.from_coefficients(&coeffs)
    };
    let mut diff: Vec<Poly> = t.diff().iter().map(|v| suspend(t.module(), &p, v).neg()).collect();
    for (k, v) in s.diff().iter().enumerate() {
        diff.push(embed_s(v).plus(&suspend(t.module(), &p, &phi[k])));
    }
    CellModule::from_module(p, diff)
}

/// `Fib(∇)` for `∇: M ⊕ M → M`, `∇(m⁰) = −m`, `∇(m¹) = m`.
pub fn path_module(m: &CellModule) -> Result<CellModule> {
    let r = m.rank();
    let names: Vec<String> = m.module().gens().into_iter().map(|g| g.0).collect();
    let mut taken: BTreeSet<String> = m.base().gens().into_iter().map(|g| g.0).collect();
    let s_gens: Vec<(String, i32)> = ["_0", "_1"]
        .iter()
        .flat_map(|e| (0..r).map(move |j| (*e, j)))
        .map(|(e, j)| (suffixed(&names[j], e), m.module().degree(j)))
        .collect();
    let s_names: Vec<String> = s_gens.iter().map(|g| fresh(g.0.clone(), &mut taken)).collect();
    let t_names = copy_names(&names, "_I", &mut taken);
    let sm = FreeModule::new(m.base().clone(), s_gens.iter().zip(&s_names).map(|(g, n)| (n.clone(), g.1)).collect())?;
    let nb = m.module().nbase();
    let mut s_diff = Vec::with_capacity(2 * r);
    for e in 0..2 {
        let mut images: Vec<Poly> = (0..nb).map(Poly::gen).collect();
        images.extend((0..r).map(|j| sm.gen(e * r + j)));
        s_diff.extend(m.diff().iter().map(|v| apply_morphism(sm.ring(), &images, v)));
    }
    let s = CellModule::from_module(sm, s_diff)?;
    let phi: Vec<Poly> = (0..2 * r)
        .map(|k| if k < r { m.module().gen(k).neg() } else { m.module().gen(k - r) })
        .collect();
    fiber_module(&s, m, &phi, t_names, s_names)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorizationConfig {
    pub window: DegreeWindow,
    /// Weight cutoff `W`.
    pub cutoff: u32,
    /// Base-length cap for every ansatz.
    pub max_len: u32,
    /// Largest linear system attempted at one weight.
    pub max_unknowns: usize,
}

impl FactorizationConfig {
    pub fn new(window: DegreeWindow, cutoff: u32) -> Self {
        FactorizationConfig {
            window,
            cutoff,
            max_len: 3,
            max_unknowns: 4000,
        }
    }
}

/// Size of the linear system solved at one weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionLog {
    pub weight: u32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderWitness {
    pub coproduct: Coproduct,
    pub base: BaseCylinder,
    pub object: FatCdga,
    pub i: FatMorphism,
    pub p: FatMorphism,
    pub logs: Vec<ObstructionLog>,
    pub fold_ok: bool,
    pub cofibration: CofibrationReport,
    pub weq: WeqReport,
    pub square_zero: SquareZeroReport,
    pub i_morphism: MorphismReport,
    pub p_morphism: MorphismReport,
}

impl CylinderWitness {
    /// Every check passed and the weak-equivalence verdict is `true`.
    pub fn passed(&self) -> bool {
        self.fold_ok
            && self.cofibration.cofibration
            && self.weq.verdict == super::weq::Verdict::True
            && self.square_zero.passed()
            && self.i_morphism.passed()
            && self.p_morphism.passed()
    }
}

fn strip_prime(n: &str) -> &str {
    n.strip_suffix('\'').unwrap_or(n)
}

/// Factor the fold map of `x` as `X ⊔ X → C → X`.
pub fn cylinder_ce(x: &FatCdga, cfg: &FactorizationConfig) -> Result<CylinderWitness> {
    if cfg.cutoff > x.cutoff() {
        return Err(Error::Argument(format!(
            "weight cutoff {} exceeds the cutoff {} of the input",
            cfg.cutoff,
            x.cutoff()
        )));
    }
    let x = x.truncated(cfg.cutoff)?;
    let w = cfg.cutoff;
    let a = x.base();
    let (nb, r) = (x.nbase(), x.rank());
    let co = coproduct(&x, &x)?;
    let co_names: Vec<String> = co.object.ring().gens().iter().map(|g| g.name.clone()).collect();
    let mut taken: BTreeSet<String> = co_names.iter().cloned().collect();
    let base = base_cylinder_named(a, co.object.base(), &mut taken, cfg.max_len)?;
    let cyl = &base.cyl;

    // weight zero: the path module of the lifted linear part
    let m = primal_of(&linear_part_of_differential(&x)?);
    let mt = lift_differential(&base.proj, &m, cfg.max_len)?;
    let x_duals: Vec<&str> = x.ring().gens()[nb..].iter().map(|g| g.name.as_str()).collect();
    let i_duals: Vec<String> = x_duals
        .iter()
        .map(|n| fresh(dual_name(&suffixed(strip_prime(n), "_I")), &mut taken))
        .collect();
    let eps_duals: Vec<String> = co_names[2 * nb..].to_vec();
    let sm = FreeModule::new(
        cyl.clone(),
        (0..2 * r).map(|k| (format!("s{k}"), m.module().degree(k % r))).collect(),
    )?;
    let mut s_diff = Vec::with_capacity(2 * r);
    for e in 0..2 {
        let mut images: Vec<Poly> = (0..nb).map(|i| Poly::gen(e * nb + i)).collect();
        images.extend((0..r).map(|j| sm.gen(e * r + j)));
        s_diff.extend(m.diff().iter().map(|v| apply_morphism(sm.ring(), &images, v)));
    }
    let s = CellModule::from_module(sm, s_diff)?;
    let phi = solve_path_map(&s, &mt, &m, &base.proj, cfg.max_len)?;
    let t_names = (0..r).map(|j| format!("t{j}")).collect();
    let s_names = (0..2 * r).map(|k| format!("s{k}")).collect();
    let pm = fiber_module(&s, &mt, &phi, t_names, s_names)?;
    let dual0 = dualize_cell(&pm);

    // layout of C: x⁰, x¹, s, m^I*, m⁰*, m¹*
    let mut dual_names = i_duals;
    dual_names.extend(eps_duals);
    let dual_gens: Vec<(String, i32)> = dual_names
        .iter()
        .zip(dual0.module().gens())
        .map(|(n, g)| (n.clone(), g.1))
        .collect();
    let mut gens: Vec<Generator> = cyl.ring().gens().to_vec();
    gens.extend(dual_gens.iter().map(|(n, d)| Generator::new(n.clone(), *d, 1)));
    let ring = Ring::new(gens, Some(w))?;
    let nc = ring.len();
    let (s0, e0) = (2 * nb, 3 * nb + r);
    let i_map = |k: usize| if k < 2 * nb { k } else { k - 2 * nb + e0 };
    let p_images: Vec<Poly> = (0..nc)
        .map(|k| match k {
            k if k < s0 => Poly::gen(k % nb),
            k if k >= e0 => Poly::gen(nb + (k - e0) % r),
            _ => Poly::zero(),
        })
        .collect();

    let mut levels: Vec<Vec<Poly>> = vec![vec![Poly::zero(); nc]; w as usize + 1];
    levels[0][..3 * nb].clone_from_slice(cyl.diff());
    levels[0][3 * nb..].clone_from_slice(dual0.diff());
    for (ck, v) in co.object.diff().iter().enumerate() {
        let k = i_map(ck);
        let wg = ring.gen(k).weight;
        let image = reindex(v, &i_map);
        for (n, level) in levels.iter_mut().enumerate() {
            let part = ring.weight_part(&image, wg + n as u32);
            if n == 0 {
                if part != level[k] {
                    return Err(Error::Invalid(format!(
                        "weight-zero differential of the cylinder disagrees on `{}`",
                        ring.gen(k).name
                    )));
                }
            } else {
                level[k] = part;
            }
        }
    }

    let mut logs = Vec::new();
    let id: Vec<Poly> = (0..nc).map(Poly::gen).collect();
    for n in 1..=w {
        let unknown: Vec<usize> = (s0..e0).filter(|&k| ring.gen(k).weight + n <= w).collect();
        if unknown.is_empty() {
            continue;
        }
        let mut columns: Vec<(usize, Poly)> = Vec::new();
        for &g in &unknown {
            let wt = ring.gen(g).weight + n;
            let space: Vec<Poly> = ring
                .monomials(ring.gen(g).degree + 1, wt, cfg.max_len)
                .into_iter()
                .map(|mono| Poly::term(mono, q(1)))
                .collect();
            let images: Vec<Poly> = space.iter().map(|p| apply_morphism(x.ring(), &p_images, p)).collect();
            for rel in relations(&images) {
                columns.push((g, combine(&space, &rel)));
            }
            if columns.len() > cfg.max_unknowns {
                return Err(Error::WindowTooSmall(format!(
                    "more than {} unknowns at weight {n}",
                    cfg.max_unknowns
                )));
            }
        }
        let d_with = |vals: &[Poly], p: &Poly| ring.truncate(&apply_derivation(&ring, &ring, &id, vals, 1, p));
        let mut constant = Vec::with_capacity(unknown.len());
        for &g in &unknown {
            let mut c = d_with(&levels[n as usize], &levels[0][g]);
            for l in 1..n as usize {
                c.add_assign(&d_with(&levels[l], &levels[n as usize - l][g]));
            }
            constant.push(c.neg());
        }
        let cols: Vec<Vec<Poly>> = columns
            .iter()
            .map(|(h, v)| {
                let mut vals = vec![Poly::zero(); nc];
                vals[*h] = v.clone();
                unknown
                    .iter()
                    .map(|&g| {
                        let mut e = d_with(&vals, &levels[0][g]);
                        if g == *h {
                            e.add_assign(&d_with(&levels[0], v));
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let (mat, rhs) = stacked_system(&cols, &constant);
        let rank = mat.rank();
        logs.push(ObstructionLog {
            weight: n,
            unknowns: cols.len(),
            equations: rhs.len(),
            rank,
        });
        let t = solve(&mat, &rhs)?.ok_or_else(|| Error::Obstruction {
            weight: n,
            degree: unknown.iter().map(|&g| ring.gen(g).degree).min().unwrap_or(0),
            detail: format!(
                "{} equations in {} unknowns of rank {rank} have no solution",
                rhs.len(),
                cols.len()
            ),
        })?;
        for ((h, v), c) in columns.iter().zip(&t) {
            levels[n as usize][*h].add_scaled(v, c);
        }
    }

    let mut diff = vec![Poly::zero(); nc];
    for level in &levels {
        for (d, v) in diff.iter_mut().zip(level) {
            d.add_assign(v);
        }
    }
    let object = FatCdga::new(cyl.clone(), dual_gens, diff, w, x.shift())?;
    let i_images: Vec<Poly> = (0..co.object.ring().len()).map(|k| Poly::gen(i_map(k))).collect();
    let i0_map = DgcaMorphism::new(co.object.base().clone(), cyl.clone(), i_images[..2 * nb].to_vec())?;
    let i = FatMorphism::new(co.object.clone(), object.clone(), i0_map, i_images)?;
    let p = FatMorphism::new(object.clone(), x.clone(), base.proj.clone(), p_images)?;
    let fold = co.fold()?;
    let fold_ok = p.compose(&i)?.images() == fold.images();
    Ok(CylinderWitness {
        cofibration: is_cofibration(&i),
        weq: is_weak_equivalence(&p, &WeqConfig::new(cfg.window, cfg.max_len)),
        square_zero: square_zero_check(&object),
        i_morphism: check_fat_morphism(&i),
        p_morphism: check_fat_morphism(&p),
        coproduct: co,
        base,
        object,
        i,
        p,
        logs,
        fold_ok,
    })
}

/// `φ(m_j^ε) = ∓m_j + z` with `z ∈ ker(proj)` chosen so `φ` is a chain map.
fn solve_path_map(
    s: &CellModule,
    mt: &CellModule,
    m: &CellModule,
    proj: &DgcaMorphism,
    max_len: u32,
) -> Result<Vec<Poly>> {
    let r = mt.rank();
    let nb = mt.module().nbase();
    let mut phi: Vec<Poly> = Vec::with_capacity(2 * r);
    for k in 0..2 * r {
        let j = k % r;
        let start = if k < r { mt.module().gen(j).neg() } else { mt.module().gen(j) };
        let mut images: Vec<Poly> = (0..nb).map(Poly::gen).collect();
        images.extend(phi.iter().cloned());
        images.resize(nb + 2 * r, Poly::zero());
        let want = apply_morphism(mt.ring(), &images, &s.diff()[k]);
        let e = want.minus(&mt.d(&start));
        let mut value = start;
        if !e.is_zero() {
            let monos: Vec<Monomial> = module_monomials(mt.module(), mt.module().degree(j), r, max_len);
            let kernel = kernel_elements(proj, mt.module(), m.module(), &monos);
            let images: Vec<Poly> = kernel.iter().map(|z| mt.d(z)).collect();
            let t = solve_combination(&images, &e).ok_or_else(|| {
                Error::WindowTooSmall(format!("no chain-map correction for the path module at generator {k}"))
            })?;
            value.add_assign(&combine(&kernel, &t));
        }
        phi.push(value);
    }
    Ok(phi)
}
