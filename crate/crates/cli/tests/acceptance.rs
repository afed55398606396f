//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shlr_cli::dsl::{parse_model, print_model};
use shlr_core::cofib::{
    coproduct, cylinder_ce, der_hom_transport, is_cofibration, is_weak_equivalence, pushout_along_cofibration,
    FactorizationConfig, Verdict, WeqConfig,
};
use shlr_core::dgca::{
    apply_derivation, apply_morphism, CellModule, DgcaMorphism, FreeModule, Monomial, Poly, SemiFreeDgca,
};
use shlr_core::random::{
    perturb_pair, random_base, random_base_map, random_cell_module, random_conjugate, random_free_module,
    random_multider, random_poly, random_valid_pair, unipotent_inverse,
};
use shlr_core::shlr::{
    ce_from_pair, ce_from_pair_unchecked, dualize_multider, first_square_failure, reconstruct_multider,
    Multiderivation, ShlrPair,
};
use shlr_core::sign::binomial;
use shlr_core::weighted::{check_fat_morphism, lie_algebra_ce, square_zero_check, FatCdga, FatMorphism};
use shlr_core::{koszul_sign, q, unshuffles, DegreeWindow, Permutation};

type Outcome = Result<String, String>;

fn window() -> DegreeWindow {
    DegreeWindow::new(-6, 2).unwrap()
}

fn weq_cfg() -> WeqConfig {
    WeqConfig::new(window(), 3)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// 1. Koszul sign composition law and unshuffle counts.
fn koszul() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..1000 {
        let k = rng.gen_range(1..=7);
        let d: Vec<i32> = (0..k).map(|_| rng.gen_range(-4..=2)).collect();
        let mut perm = || {
            let mut v: Vec<usize> = (1..=k).collect();
            v.shuffle(&mut rng);
            Permutation::new(v).unwrap()
        };
        let (s, t) = (perm(), perm());
        let lhs = e(koszul_sign(&d, &e(t.compose(&s))?))?;
        let rhs = e(koszul_sign(&d, &t))? * e(koszul_sign(&t.permute(&d), &s))?;
        ensure(lhs == rhs, || format!("triple {i} violates the law"))?;
    }
    for l in 0..=7 {
        for m in 0..=7 - l {
            let u = unshuffles(l, m);
            let mut sorted = u.clone();
            sorted.sort();
            sorted.dedup();
            ensure(u.len() == binomial(l + m, l) && sorted.len() == u.len(), || {
                format!("unshuffles({l}, {m}) has {} elements", u.len())
            })?;
            for s in &u {
                let im = s.images();
                ensure(
                    im[..l].windows(2).all(|w| w[0] < w[1]) && im[l..].windows(2).all(|w| w[0] < w[1]),
                    || format!("unshuffles({l}, {m}) contains a non-shuffle"),
                )?;
            }
        }
    }
    Ok("1000 triples, all (l, m) with l + m <= 7".into())
}

// 2. Dualize then reconstruct.
fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..100 {
        let a = random_base(&mut rng, 2);
        let rank = rng.gen_range(1..=3);
        let m = random_free_module(&mut rng, &a, rank, -2, 1);
        let l = rng.gen_range(0..=2);
        let x = random_multider(&mut rng, &m, l, 0.4);
        let d = e(dualize_multider(&x, l as u32 + 1))?;
        let f = (0..m.rank()).map(|j| m.gen(j)).collect();
        let back = e(reconstruct_multider(&d, &m, &m, f, l))?;
        ensure(back == x, || format!("multiderivation {i} does not round-trip"))?;
    }
    Ok("100 multiderivations".into())
}

// 3. Square-zero transport between pairs and CE algebras.
fn transport() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut zero, mut nonzero) = (0, 0);
    for i in 0..50 {
        let (p, _) = e(random_valid_pair(&mut rng, 3, 3))?;
        let p = if i % 2 == 1 { perturb_pair(&mut rng, &p).unwrap_or(p) } else { p };
        let pair_side = e(first_square_failure(&p, 2, 3))?.is_none();
        let ce_side = square_zero_check(&e(ce_from_pair_unchecked(&p, 3))?).passed();
        ensure(pair_side == ce_side, || format!("dataset {i}: pair {pair_side}, CE {ce_side}"))?;
        if pair_side {
            zero += 1;
        } else {
            nonzero += 1;
        }
    }
    ensure(zero > 0 && nonzero > 0, || format!("datasets not mixed: {zero} vs {nonzero}"))?;
    Ok(format!("50 datasets ({zero} square to zero, {nonzero} do not)"))
}

fn lie_pair(n: usize, brackets: &[(usize, usize, usize, i64)], k: usize) -> ShlrPair {
    let names: Vec<(String, i32)> = (1..=n).map(|i| (format!("e{i}"), -1)).collect();
    let m = FreeModule::new(SemiFreeDgca::ground(), names).unwrap();
    let mut b: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
    for &(i, j, t, c) in brackets {
        b.entry(vec![i, j]).or_default().add_scaled(&m.gen(t), &q(c));
    }
    let mut xs = vec![Multiderivation::zero(m.clone(), 0)];
    xs.push(Multiderivation::over_identity(m.clone(), 1, b, BTreeMap::new()).unwrap());
    xs.extend((2..=k).map(|w| Multiderivation::zero(m.clone(), w)));
    ShlrPair::new(m, xs).unwrap()
}

// 4. CE differentials of Lie algebras.
fn ce_correctness() -> Outcome {
    let solvable = [(0, 1, 0, 1)];
    let sl2 = [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)];
    let bad = [(0, 1, 2, 1), (0, 2, 0, 1)];
    for (name, n, c) in [("solvable", 2, &solvable[..]), ("sl2", 3, &sl2[..])] {
        let direct = lie_algebra_ce(n, c, 4);
        ensure(square_zero_check(&direct).passed(), || format!("{name}: d^2 != 0"))?;
        let via_pair = e(ce_from_pair(&lie_pair(n, c, 4), 4))?;
        ensure(via_pair.diff() == direct.diff(), || format!("{name}: pair route disagrees"))?;
    }
    let r = square_zero_check(&lie_algebra_ce(3, &bad, 4));
    let at = r.failure.as_ref().map(|f| f.weight);
    ensure(at == Some(2), || format!("non-Jacobi algebra fails at {at:?}"))?;
    let pair_at = e(first_square_failure(&lie_pair(3, &bad, 4), 3, 4))?;
    ensure(pair_at == Some(2), || format!("non-Jacobi pair fails at {pair_at:?}"))?;
    Ok("d^2 = 0 through W = 4; non-Jacobi fails at weight 2".into())
}

fn module_instance(w: u32) -> FatCdga {
    let a = SemiFreeDgca::new(
        vec![("x".into(), 0), ("y".into(), -1)],
        vec![Poly::zero(), Poly::term(Monomial::from_factors(vec![(0, 2)]), q(1))],
    )
    .unwrap();
    let fm = FreeModule::new(a.clone(), vec![("v".into(), 0), ("u".into(), -1)]).unwrap();
    let du = fm.ring().mul(&Poly::gen(0), &fm.gen(0));
    let cell = CellModule::from_module(fm, vec![Poly::zero(), du]).unwrap();
    FatCdga::from_cell_module(&cell, w, 1).unwrap()
}

// 5. Cylinder axioms at W = 3.
fn cylinder() -> Outcome {
    let w = 3;
    let action = {
        let a = SemiFreeDgca::new(vec![("x".into(), 0)], vec![Poly::zero()]).unwrap();
        let m = FreeModule::new(a, vec![("e".into(), -1)]).unwrap();
        let mut anchor = BTreeMap::new();
        anchor.insert(vec![0], vec![Poly::gen(0)]);
        let mut a0 = BTreeMap::new();
        a0.insert(Vec::new(), vec![Poly::zero()]);
        let x0 = Multiderivation::over_identity(m.clone(), 0, BTreeMap::new(), a0).unwrap();
        let x1 = Multiderivation::over_identity(m.clone(), 1, BTreeMap::new(), anchor).unwrap();
        let mut xs = vec![x0, x1];
        xs.extend((2..=w as usize).map(|k| Multiderivation::zero(m.clone(), k)));
        e(ce_from_pair(&ShlrPair::new(m, xs).unwrap(), w))?
    };
    let instances = [
        ("abelian", lie_algebra_ce(2, &[], w)),
        ("2-dim Lie", lie_algebra_ce(2, &[(0, 1, 0, 1)], w)),
        ("module differential", module_instance(w)),
        ("action", action),
    ];
    let mut cfg = FactorizationConfig::new(window(), w);
    cfg.max_len = 3;
    for (name, x) in &instances {
        let c = e(cylinder_ce(x, &cfg))?;
        ensure(c.fold_ok, || format!("{name}: p.i != fold"))?;
        ensure(is_cofibration(&c.i).cofibration, || format!("{name}: i is not a cofibration"))?;
        ensure(c.weq.verdict == Verdict::True, || format!("{name}: p weq {:?}", c.weq.verdict))?;
        ensure(c.square_zero.passed() && c.square_zero.through == w, || {
            format!("{name}: square zero {:?}", c.square_zero.failure)
        })?;
        ensure(c.i_morphism.passed() && c.p_morphism.passed(), || format!("{name}: i or p not a morphism"))?;
    }
    Ok(format!("{} instances at W = {w}", instances.len()))
}

/// `X → X + (b, c)` with `d b = c`: an acyclic cofibration.
fn attach_cell(x: &FatCdga, k: i32) -> Result<FatMorphism, String> {
    let n = x.ring().len();
    let mut dual = x.dual_gens();
    let tag = dual.len();
    dual.push((format!("cell_b{tag}"), k));
    dual.push((format!("cell_c{tag}"), k + 1));
    let mut diff = x.diff().to_vec();
    diff.push(Poly::gen(n + 1));
    diff.push(Poly::zero());
    let z = e(FatCdga::new(x.base().clone(), dual, diff, x.cutoff(), x.shift()))?;
    let images = (0..n).map(Poly::gen).collect();
    e(FatMorphism::new(x.clone(), z, DgcaMorphism::identity(x.base()), images))
}

/// The inverse of `attach_cell`: send the cell pair to zero.
fn collapse_cell(g: &FatMorphism) -> Result<FatMorphism, String> {
    let x = g.src();
    let mut images: Vec<Poly> = (0..x.ring().len()).map(Poly::gen).collect();
    images.extend([Poly::zero(), Poly::zero()]);
    e(FatMorphism::new(g.tgt().clone(), x.clone(), DgcaMorphism::identity(x.base()), images))
}

/// A random unipotent automorphism `ψ` and the isomorphism `X → ψ X ψ⁻¹`.
fn conjugation(rng: &mut ChaCha8Rng, x: &FatCdga) -> Result<FatMorphism, String> {
    let ring = x.ring();
    let w = x.cutoff();
    let images: Vec<Poly> = (0..ring.len())
        .map(|i| {
            let min = if i < x.nbase() { 1 } else { 2 };
            let weights: Vec<u32> = (min..=w).collect();
            let extra = random_poly(rng, ring, ring.gen(i).degree, &weights, 1, 0.3);
            ring.truncate(&Poly::gen(i).plus(&extra))
        })
        .collect();
    let inverse = unipotent_inverse(ring, &images, w);
    let id: Vec<Poly> = (0..ring.len()).map(Poly::gen).collect();
    let diff = inverse
        .iter()
        .map(|v| ring.truncate(&apply_morphism(ring, &images, &apply_derivation(ring, ring, &id, x.diff(), 1, v))))
        .collect();
    let y = e(FatCdga::new(x.base().clone(), x.dual_gens(), diff, w, x.shift()))?;
    e(FatMorphism::new(x.clone(), y, DgcaMorphism::identity(x.base()), images))
}

/// A CE algebra of a cell module over the ground field or `k[x]`, twisted
/// by a random unipotent automorphism.
fn closed_base_object(rng: &mut ChaCha8Rng, w: u32) -> Result<FatCdga, String> {
    let base = if rng.gen_bool(0.5) {
        SemiFreeDgca::ground()
    } else {
        SemiFreeDgca::new(vec![("x".into(), 0)], vec![Poly::zero()]).unwrap()
    };
    let rank = rng.gen_range(1..=2);
    let fm = random_free_module(rng, &base, rank, -2, 1);
    let cell = random_cell_module(rng, &fm);
    let ce = e(FatCdga::from_cell_module(&cell, w, 1))?;
    e(random_conjugate(rng, &ce, 0.3))
}

// 6. Pushouts of an acyclic cofibration.
fn pushout_stability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut kinds = BTreeMap::new();
    for i in 0..10 {
        let kind = ["conjugation", "inclusion", "base map"][i % 3];
        let f = match kind {
            "conjugation" => {
                let x = closed_base_object(&mut rng, 2)?;
                conjugation(&mut rng, &x)?
            }
            "inclusion" => {
                let x = closed_base_object(&mut rng, 2)?;
                let y = closed_base_object(&mut rng, 2)?;
                e(coproduct(&x, &y))?.in_x
            }
            _ => {
                let p = random_base_map(&mut rng);
                let images = p.images().to_vec();
                let (a, b) = (p.src().clone(), p.tgt().clone());
                e(FatMorphism::new(FatCdga::base_only(a, 2), FatCdga::base_only(b, 2), p, images))?
            }
        };
        ensure(check_fat_morphism(&f).passed(), || format!("morphism {i} is not a chain map"))?;
        let g = attach_cell(f.src(), rng.gen_range(0..=2))?;
        let po = e(pushout_along_cofibration(&f, &g))?;
        let v = is_weak_equivalence(&po.gamma, &weq_cfg()).verdict;
        ensure(v == Verdict::True, || format!("morphism {i} ({kind}): gamma weq {v:?}"))?;
        *kinds.entry(kind).or_insert(0) += 1;
    }
    Ok(format!("10 morphisms {kinds:?}"))
}

/// One step from `x`: (morphism, expected to be a weak equivalence).
fn step(rng: &mut ChaCha8Rng, x: &FatCdga, kind: usize) -> Result<FatMorphism, String> {
    match kind {
        0 => conjugation(rng, x),
        1 => attach_cell(x, rng.gen_range(0..=2)),
        2 => {
            let w = lie_algebra_ce(1, &[], x.cutoff());
            Ok(e(coproduct(x, &w))?.in_x)
        }
        _ => {
            // The augmentation onto the base.
            let mut images: Vec<Poly> = (0..x.nbase()).map(Poly::gen).collect();
            images.extend(std::iter::repeat_n(Poly::zero(), x.rank()));
            let b = FatCdga::base_only(x.base().clone(), x.cutoff());
            e(FatMorphism::new(x.clone(), b, DgcaMorphism::identity(x.base()), images))
        }
    }
}

// 7. 2-out-of-3.
fn two_out_of_three() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    let short = |v: Verdict| match v {
        Verdict::True => 'T',
        Verdict::False => 'F',
        Verdict::Inconclusive => '?',
    };
    for i in 0..50 {
        let x = closed_base_object(&mut rng, 2)?;
        let (g, h) = if i % 10 == 9 {
            let g = attach_cell(&x, rng.gen_range(0..=2))?;
            let h = collapse_cell(&g)?;
            (g, h)
        } else {
            let (a, b) = (rng.gen_range(0..4), rng.gen_range(0..4));
            let g = step(&mut rng, &x, a)?;
            let h = step(&mut rng, &g.tgt().clone(), b)?;
            (g, h)
        };
        let hg = e(h.compose(&g))?;
        for (name, m) in [("g", &g), ("h", &h), ("hg", &hg)] {
            ensure(check_fat_morphism(m).passed(), || format!("pair {i}: {name} is not a chain map"))?;
        }
        let v = [&g, &h, &hg].map(|m| is_weak_equivalence(m, &weq_cfg()).verdict);
        let trues = v.iter().filter(|&&x| x == Verdict::True).count();
        let falses = v.iter().filter(|&&x| x == Verdict::False).count();
        ensure(!(trues == 2 && falses == 1), || format!("pair {i}: verdicts {v:?}"))?;
        *tally.entry(v.iter().map(|&x| short(x)).collect()).or_insert(0) += 1;
    }
    let conclusive: usize = tally.iter().filter(|(k, _)| !k.contains('?')).map(|(_, n)| n).sum();
    ensure(conclusive >= 25, || format!("too few conclusive triples: {tally:?}"))?;
    Ok(format!("50 pairs, verdict patterns (g, h, hg) {tally:?}"))
}

// 8. Der-Hom comparison.
fn der_hom() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut degrees = 0;
    for i in 0..10 {
        let p = random_base_map(&mut rng);
        let rank = rng.gen_range(1..=3);
        let fm = random_free_module(&mut rng, p.tgt(), rank, -2, 1);
        let m = random_cell_module(&mut rng, &fm);
        let r = e(der_hom_transport(&p, &m, window(), 3))?;
        ensure(r.chain_map, || format!("instance {i}: comparison is not a chain map"))?;
        for d in r.complete_degrees() {
            ensure(d.lhs == d.rhs, || format!("instance {i}: degree {} differs", d.degree))?;
            degrees += 1;
        }
    }
    ensure(degrees > 0, || "no complete degrees".into())?;
    Ok(format!("10 instances, {degrees} complete degrees agree"))
}

fn examples() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "shlr"))
        .collect();
    v.sort();
    v
}

// 9. CLI determinism and canonical files.
fn cli() -> Outcome {
    let commands = [
        "check-d2",
        "ce",
        "extract-brackets",
        "linear-part",
        "cohomology",
        "weq",
        "coproduct",
        "pushout",
        "cylinder",
        "dualize",
        "lift",
    ];
    let files = examples();
    ensure(!files.is_empty(), || "no bundled examples".into())?;
    let mut runs = 0;
    for f in &files {
        let text = e(std::fs::read_to_string(f))?;
        let ast = e(parse_model(&text))?;
        ensure(print_model(&ast) == text, || format!("{} is not a print-parse fixpoint", f.display()))?;
        for c in commands {
            let run = || {
                Command::new(env!("CARGO_BIN_EXE_shlr"))
                    .args([c, f.to_str().unwrap(), "--output", "json"])
                    .env_remove("SHLR_TIMING")
                    .output()
                    .unwrap()
            };
            let (a, b) = (run(), run());
            ensure(a.stdout == b.stdout && a.status.code() == b.status.code(), || {
                format!("{c} on {} differs between runs", f.display())
            })?;
            runs += 1;
        }
    }
    Ok(format!("{} files, {runs} command runs repeated", files.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("koszul composition and unshuffles", koszul, Duration::from_secs(5)),
        ("duality round trip", duality, Duration::from_secs(60)),
        ("square-zero transport", transport, Duration::MAX),
        ("CE correctness", ce_correctness, Duration::from_secs(10)),
        ("cylinder axioms", cylinder, Duration::from_secs(300)),
        ("pushout stability", pushout_stability, Duration::MAX),
        ("2-out-of-3", two_out_of_three, Duration::MAX),
        ("Der-Hom dimensions", der_hom, Duration::MAX),
        ("CLI determinism and fixpoint", cli, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        let outcome = match outcome {
            Ok(s) if t > *limit => Err(format!("{s}; took {t:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {t:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}; {t:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
