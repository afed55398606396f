//! Seeded generators of small random instances, shared by tests, the
//! acceptance suite and benchmarks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dgca::{apply_derivation, apply_morphism, CellModule, FreeModule, Poly, Ring, SemiFreeDgca};
use crate::error::Result;
use crate::linalg::q;
use crate::shlr::{pair_from_ce, words, Multiderivation, ShlrPair};
use crate::weighted::FatCdga;

/// A random element of `ring` in the given degree, summed over the listed
/// weights, each monomial kept with probability `density`.
pub fn random_poly(
    rng: &mut ChaCha8Rng,
    ring: &Ring,
    degree: i32,
    weights: &[u32],
    max_len: u32,
    density: f64,
) -> Poly {
    let mut out = Poly::zero();
    for &w in weights {
        for m in ring.monomials(degree, w, max_len) {
            if rng.gen_bool(density) {
                let mut c = rng.gen_range(-2i64..=2);
                if c == 0 {
                    c = 1;
                }
                out.add_term(m, q(c));
            }
        }
    }
    out
}

/// A random semi-free base with at most `max_gens` generators.
pub fn random_base(rng: &mut ChaCha8Rng, max_gens: usize) -> SemiFreeDgca {
    let choice = rng.gen_range(0..=4usize).min(if max_gens == 0 { 0 } else { 4 });
    let choice = if max_gens < 2 { choice.min(1) } else { choice };
    match choice {
        0 => SemiFreeDgca::ground(),
        1 => SemiFreeDgca::new(vec![("x".into(), 0)], vec![Poly::zero()]).expect("valid base"),
        2 => {
            let e = rng.gen_range(0..=2u32);
            let dy = if e == 0 {
                Poly::zero()
            } else {
                let mut p = Poly::zero();
                p.add_term(crate::dgca::Monomial::from_factors(vec![(0, e)]), q(rng.gen_range(1..=2)));
                p
            };
            SemiFreeDgca::new(vec![("x".into(), 0), ("y".into(), -1)], vec![Poly::zero(), dy]).expect("valid base")
        }
        3 => SemiFreeDgca::new(vec![("x".into(), 0), ("t".into(), -2)], vec![Poly::zero(), Poly::zero()])
            .expect("valid base"),
        _ => SemiFreeDgca::new(vec![("x".into(), 0), ("z".into(), 0)], vec![Poly::zero(), Poly::zero()])
            .expect("valid base"),
    }
}

/// A free module with `rank` generators named `m1, m2, …` of degrees in
/// `lo..=hi`.
pub fn random_free_module(rng: &mut ChaCha8Rng, base: &SemiFreeDgca, rank: usize, lo: i32, hi: i32) -> FreeModule {
    let gens = (1..=rank).map(|i| (format!("m{i}"), rng.gen_range(lo..=hi))).collect();
    FreeModule::new(base.clone(), gens).expect("fresh names")
}

/// A cell module with a random lowering differential; falls back to the
/// closed one when a sample fails `δ² = 0`.
pub fn random_cell_module(rng: &mut ChaCha8Rng, m: &FreeModule) -> CellModule {
    for _ in 0..8 {
        let diff: Vec<Poly> = (0..m.rank())
            .map(|j| {
                let mut p = Poly::zero();
                for i in 0..j {
                    let deg = m.degree(j) + 1 - m.degree(i);
                    let c = random_poly(rng, m.base().ring(), deg, &[0], 1, 0.4);
                    p.add_assign(&m.ring().mul(&c, &m.gen(i)));
                }
                p
            })
            .collect();
        if let Ok(c) = CellModule::from_module(m.clone(), diff) {
            return c;
        }
    }
    CellModule::from_module(m.clone(), vec![Poly::zero(); m.rank()]).expect("closed module")
}

/// A random multiderivation of weight `l` over the identity of `m`.
pub fn random_multider(rng: &mut ChaCha8Rng, m: &FreeModule, l: usize, density: f64) -> Multiderivation {
    let base = m.base().ring();
    let mut bracket = BTreeMap::new();
    for w in words(m, l + 1) {
        let deg = w.iter().map(|&j| m.degree(j)).sum::<i32>() + 1;
        bracket.insert(w, random_poly(rng, m.ring(), deg, &[1], 2, density));
    }
    let mut anchor = BTreeMap::new();
    for w in words(m, l) {
        let deg = w.iter().map(|&j| m.degree(j)).sum::<i32>() + 1;
        let vals = (0..base.len())
            .map(|a| random_poly(rng, base, base.gen(a).degree + deg, &[0], 2, density))
            .collect();
        anchor.insert(w, vals);
    }
    Multiderivation::over_identity(m.clone(), l, bracket, anchor).expect("degrees are correct by construction")
}

/// Conjugate the differential of `x` by a random unipotent automorphism
/// (identity plus weight-raising terms). The result again squares to zero.
pub fn random_conjugate(rng: &mut ChaCha8Rng, x: &FatCdga, density: f64) -> Result<FatCdga> {
    let ring = x.ring();
    let w = x.cutoff();
    let nb = x.nbase();
    let images: Vec<Poly> = (0..ring.len())
        .map(|i| {
            let g = ring.gen(i);
            let min = if i < nb { 1 } else { 2 };
            let weights: Vec<u32> = (min..=w).collect();
            Poly::gen(i).plus(&random_poly(rng, ring, g.degree, &weights, 1, density))
        })
        .collect();
    let inverse = unipotent_inverse(ring, &images, w);
    let id: Vec<Poly> = (0..ring.len()).map(Poly::gen).collect();
    let diff: Vec<Poly> = inverse
        .iter()
        .map(|v| {
            let dv = apply_derivation(ring, ring, &id, x.diff(), 1, v);
            ring.truncate(&apply_morphism(ring, &images, &dv))
        })
        .collect();
    FatCdga::new(x.base().clone(), x.dual_gens(), diff, w, x.shift())
}

/// Generator images of the inverse of `id + (weight-raising)`.
pub fn unipotent_inverse(ring: &Ring, images: &[Poly], cutoff: u32) -> Vec<Poly> {
    (0..ring.len())
        .map(|i| {
            let g = Poly::gen(i);
            let mut v = g.clone();
            for _ in 0..=cutoff {
                let err = g.minus(&ring.truncate(&apply_morphism(ring, images, &v)));
                if err.is_zero() {
                    break;
                }
                v.add_assign(&err);
            }
            v
        })
        .collect()
}

/// A seeded valid pair: a random cell module over a random base, its CE
/// algebra conjugated by a random unipotent automorphism, read back as a pair.
pub fn random_valid_pair(rng: &mut ChaCha8Rng, max_rank: usize, cutoff: u32) -> Result<(ShlrPair, FatCdga)> {
    let base = random_base(rng, 2);
    let rank = rng.gen_range(1..=max_rank);
    let m = random_free_module(rng, &base, rank, -2, 1);
    let cell = random_cell_module(rng, &m);
    let ce0 = FatCdga::from_cell_module(&cell, cutoff, 1)?;
    let ce = random_conjugate(rng, &ce0, 0.3)?;
    Ok((pair_from_ce(&ce)?, ce))
}

/// Add a random term to one bracket or anchor value of weight 1 or 2.
/// Returns `None` if no attempt found a spot admitting a term of the right
/// degree.
pub fn perturb_pair(rng: &mut ChaCha8Rng, p: &ShlrPair) -> Option<ShlrPair> {
    (0..32).find_map(|_| perturb_once(rng, p))
}

fn perturb_once(rng: &mut ChaCha8Rng, p: &ShlrPair) -> Option<ShlrPair> {
    let m = p.module();
    let top = p.arity_cutoff().min(2);
    if top == 0 {
        return None;
    }
    let k = rng.gen_range(1..=top);
    let x = &p.multiders()[k];
    let mut bracket = x.brackets().clone();
    let mut anchor = x.anchors().clone();
    if rng.gen_bool(0.5) {
        let ws = words(m, k + 1);
        let w = ws.choose(rng)?.clone();
        let deg = w.iter().map(|&j| m.degree(j)).sum::<i32>() + 1;
        let add = random_poly(rng, m.ring(), deg, &[1], 1, 0.7);
        if add.is_zero() {
            return None;
        }
        bracket.entry(w).or_default().add_assign(&add);
    } else {
        let base = m.base().ring();
        if base.len() == 0 {
            return None;
        }
        let ws = words(m, k);
        let w = ws.choose(rng)?.clone();
        let a = rng.gen_range(0..base.len());
        let deg = w.iter().map(|&j| m.degree(j)).sum::<i32>() + 1 + base.gen(a).degree;
        let add = random_poly(rng, base, deg, &[0], 1, 0.7);
        if add.is_zero() {
            return None;
        }
        let entry = anchor.entry(w).or_insert_with(|| vec![Poly::zero(); base.len()]);
        entry[a].add_assign(&add);
    }
    let y = Multiderivation::over_identity(m.clone(), k, bracket, anchor).ok()?;
    let mut xs = p.multiders().to_vec();
    xs[k] = y;
    ShlrPair::new(m.clone(), xs).ok()
}

/// A seeded base map `A → B` with no generator sent to a constant: an
/// identity, the unit of a random base, or an inclusion of a polynomial
/// subalgebra.
pub fn random_base_map(rng: &mut ChaCha8Rng) -> crate::dgca::DgcaMorphism {
    use crate::dgca::DgcaMorphism;
    let b = random_base(rng, 2);
    match rng.gen_range(0..3) {
        0 => DgcaMorphism::identity(&b),
        1 => DgcaMorphism::new(SemiFreeDgca::ground(), b, Vec::new()).expect("unit map"),
        _ => {
            let kx = SemiFreeDgca::new(vec![("x".into(), 0)], vec![Poly::zero()]).expect("valid base");
            let tgt = if b.is_empty() { kx.clone() } else { b };
            let x = tgt.ring().index_of("x").expect("templates name their first generator x");
            let mut img = Poly::gen(x);
            if rng.gen_bool(0.5) {
                img.add_assign(&tgt.ring().pow(&Poly::gen(x), 2));
            }
            DgcaMorphism::new(kx, tgt, vec![img]).expect("x is closed in every template")
        }
    }
}
