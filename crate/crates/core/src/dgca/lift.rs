//! Lifting a cell-module differential along a trivial fibration of bases.

use super::cell::{CellModule, FreeModule};
use super::ring::{Monomial, Poly};
use super::semifree::DgcaMorphism;
use super::span::{combine, relations, solve_combination};
use crate::error::{Error, Result};
use crate::linalg::q;

/// A preimage of `b` under `p` among monomials of base length at most
/// `max_len` (or the length of `b`'s own terms, if larger).
pub fn preimage(p: &DgcaMorphism, b: &Poly, max_len: u32) -> Result<Poly> {
    if b.is_zero() {
        return Ok(Poly::zero());
    }
    let src = p.src().ring();
    let tgt = p.tgt().ring();
    let deg = tgt.degree(b)?.unwrap_or(0);
    let len = b.terms().map(|(m, _)| tgt.base_length(m)).max().unwrap_or(0).max(max_len);
    let space: Vec<Poly> = src
        .monomials(deg, 0, len)
        .into_iter()
        .map(|m| Poly::term(m, q(1)))
        .collect();
    let images: Vec<Poly> = space.iter().map(|m| p.apply(m)).collect();
    let t = solve_combination(&images, b).ok_or_else(|| {
        Error::WindowTooSmall(format!(
            "no preimage of {} with length at most {len}",
            tgt.fmt(b)
        ))
    })?;
    Ok(combine(&space, &t))
}

/// Module elements of the given degree that only involve the first `upto`
/// generators, with base length at most `max_len`.
pub fn module_monomials(m: &FreeModule, degree: i32, upto: usize, max_len: u32) -> Vec<Monomial> {
    let last = m.idx(upto);
    m.ring()
        .monomials(degree, 1, max_len)
        .into_iter()
        .filter(|mono| mono.factors().last().is_some_and(|f| f.0 < last))
        .collect()
}

/// The elements of `ker(p)` inside the given family of module monomials.
pub fn kernel_elements(p: &DgcaMorphism, src: &FreeModule, tgt: &FreeModule, monos: &[Monomial]) -> Vec<Poly> {
    let space: Vec<Poly> = monos.iter().map(|m| Poly::term(m.clone(), q(1))).collect();
    let images: Vec<Poly> = space.iter().map(|x| src.push(p, tgt, x)).collect();
    relations(&images).iter().map(|r| combine(&space, r)).collect()
}

/// Given a trivial fibration `p: A → B` and a cell module `N` over `B`, build
/// a cell module over `A` on the same generators whose differential maps to
/// `N`'s under `p`. Each generator's value is a lift of its `N`-value,
/// corrected by an element of `ker(p)` so that `δ² = 0`.
pub fn lift_differential(p: &DgcaMorphism, n: &CellModule, max_len: u32) -> Result<CellModule> {
    if p.tgt() != n.base() {
        return Err(Error::Argument("module is not over the target of the fibration".into()));
    }
    let src = FreeModule::new(p.src().clone(), n.module().gens())?;
    let rank = n.rank();
    let mut diff: Vec<Poly> = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut y = Poly::zero();
        for j in 0..i {
            let b = n.structure_coefficient(i, j);
            if !b.is_zero() {
                let a = preimage(p, &b, max_len)?;
                y.add_assign(&src.ring().mul(&a, &src.gen(j)));
            }
        }
        let mut current = diff.clone();
        current.resize(rank, Poly::zero());
        let e = src.d_with(&current, &y);
        if !e.is_zero() {
            let deg = src.degree(i) + 1;
            let monos = module_monomials(&src, deg, i, max_len);
            let kernel = kernel_elements(p, &src, n.module(), &monos);
            let images: Vec<Poly> = kernel.iter().map(|c| src.d_with(&current, c)).collect();
            let t = solve_combination(&images, &e).ok_or_else(|| {
                Error::WindowTooSmall(format!(
                    "cannot correct the lift of d({}) inside ker(p) with length at most {max_len}",
                    src.name(i)
                ))
            })?;
            y.sub_assign(&combine(&kernel, &t));
        }
        diff.push(y);
    }
    CellModule::from_module(src, diff)
}
