//! Seeded property tests for the algebraic invariants of the engine.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shlr_core::cofib::{base_cylinder, coproduct, cylinder_ce, is_cofibration, FactorizationConfig};
use shlr_core::dgca::{
    dualize_cell, lift_differential, primal_of, CellModule, DgcaMorphism, FreeModule, Poly, SemiFreeDgca,
};
use shlr_core::linalg::{cohomology_dims, RationalMatrix};
use shlr_core::random::{
    random_base, random_cell_module, random_conjugate, random_free_module, random_multider, random_poly,
    random_valid_pair,
};
use shlr_core::shlr::{ce_from_pair_unchecked, dualize_multider, reconstruct_multider, Multiderivation, ShlrPair};
use shlr_core::weighted::{check_fat_morphism, square_zero_check, FatCdga, FatMorphism};
use shlr_core::{q, CohomologyDim, DegreeWindow, FiniteComplex, Q};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random invertible matrix: unit lower triangular times unit upper triangular.
fn invertible(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Q>> {
    let mut l = vec![vec![q(0); n]; n];
    let mut u = vec![vec![q(0); n]; n];
    for i in 0..n {
        l[i][i] = q(1);
        u[i][i] = q(1);
        for j in 0..i {
            l[i][j] = q(r.gen_range(-2..=2));
            u[j][i] = q(r.gen_range(-2..=2));
        }
    }
    mul(&l, &u, n)
}

fn mul(a: &[Vec<Q>], b: &[Vec<Q>], inner: usize) -> Vec<Vec<Q>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect())
        .collect()
}

fn inverse(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| q((i == j) as i64)));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| m[i][c] != q(0)).unwrap();
        m.swap(c, p);
        let inv = q(1) / &m[c][c];
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && m[i][c] != q(0) {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let v = &m[c][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// A complex assembled from `h_n` cohomology classes and `b_n` cancelling
    /// pairs, disguised by random changes of basis, has exactly `h_n` as
    /// cohomology and obeys the Euler characteristic identity.
    #[test]
    fn cohomology_matches_construction(seed in any::<u64>(), h in prop::collection::vec(0usize..3, 5), b in prop::collection::vec(0usize..3, 4)) {
        let mut r = rng(seed);
        // Degrees 0..=6; the boundary degrees 0 and 6 are zero spaces.
        let window = DegreeWindow::new(0, 6).unwrap();
        let hh = |n: i32| if (1..=5).contains(&n) { h[(n - 1) as usize] } else { 0 };
        let bb = |n: i32| if (1..=4).contains(&n) { b[(n - 1) as usize] } else { 0 };
        let dim = |n: i32| hh(n) + bb(n) + if n >= 1 { bb(n - 1) } else { 0 };
        let bases: Vec<Vec<Vec<Q>>> = (0..=6).map(|n| invertible(&mut r, dim(n))).collect();
        let mut labels = std::collections::BTreeMap::new();
        let mut diffs = std::collections::BTreeMap::new();
        for n in 0..=6 {
            labels.insert(n, (0..dim(n)).map(|i| format!("c{n}_{i}")).collect());
        }
        for n in 0..6 {
            // Layout of C^n: [classes | sources of b_n | targets of b_{n-1}].
            let (rows, cols) = (dim(n + 1), dim(n));
            let mut d = vec![vec![q(0); cols]; rows];
            for k in 0..bb(n) {
                d[hh(n + 1) + bb(n + 1) + k][hh(n) + k] = q(1);
            }
            let p = &bases[(n + 1) as usize];
            let pinv = inverse(&bases[n as usize]);
            let conj = mul(&mul(p, &d, rows), &pinv, cols);
            if rows > 0 && cols > 0 {
                diffs.insert(n, RationalMatrix::from_dense(&conj));
            }
        }
        let c = FiniteComplex::new(window, labels, diffs).unwrap();
        let dims = cohomology_dims(&c);
        let mut euler_h = 0i64;
        let mut euler_c = 0i64;
        for n in 1..=5 {
            prop_assert_eq!(&dims[&n], &CohomologyDim::Dim(hh(n)));
            let s = if n % 2 == 0 { 1 } else { -1 };
            euler_h += s * hh(n) as i64;
            euler_c += s * c.dim(n) as i64;
        }
        prop_assert_eq!(euler_h, euler_c);
    }

    /// Accepted semi-free dgcas square to zero on generators and on products.
    #[test]
    fn semifree_differential_squares_to_zero(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_base(&mut r, 2);
        for i in 0..a.len() {
            prop_assert!(a.d(&a.d(&Poly::gen(i))).is_zero());
        }
        for deg in -3..=0 {
            let p = random_poly(&mut r, a.ring(), deg, &[0], 3, 0.5);
            prop_assert!(a.d(&a.d(&p)).is_zero());
        }
    }

    /// Dualizing a cell module and taking the primal back are inverse.
    #[test]
    fn dualize_and_primal_are_inverse(seed in any::<u64>(), rank in 1usize..4) {
        let mut r = rng(seed);
        let a = random_base(&mut r, 2);
        let m = random_free_module(&mut r, &a, rank, -2, 1);
        let c = random_cell_module(&mut r, &m);
        let d = dualize_cell(&c);
        prop_assert_eq!(&primal_of(&d), &c);
        prop_assert_eq!(&dualize_cell(&primal_of(&d)), &d);
    }

    /// Lifting along a trivial fibration reproduces the target differential
    /// and keeps the lowering order.
    #[test]
    fn lifted_differential_maps_onto_target(seed in any::<u64>(), rank in 1usize..4) {
        let mut r = rng(seed);
        let b = random_base(&mut r, 2);
        let mut gens = b.gens();
        let mut diff = b.diff().to_vec();
        let x = gens.len();
        gens.push(("u_c".into(), 0));
        gens.push(("v_c".into(), -1));
        diff.push(Poly::zero());
        diff.push(Poly::gen(x));
        let a = SemiFreeDgca::new(gens, diff).unwrap();
        let mut images: Vec<Poly> = (0..b.len()).map(Poly::gen).collect();
        images.extend([Poly::zero(), Poly::zero()]);
        let p = DgcaMorphism::new(a, b.clone(), images).unwrap();
        let fm = random_free_module(&mut r, &b, rank, -2, 1);
        let n = random_cell_module(&mut r, &fm);
        let lifted = lift_differential(&p, &n, 3).unwrap();
        let m = lifted.module();
        for j in 0..m.rank() {
            prop_assert_eq!(&m.push(&p, n.module(), &lifted.diff()[j]), &n.diff()[j]);
            for i in j..m.rank() {
                prop_assert!(m.coefficient(&lifted.diff()[j], i).is_zero());
            }
        }
    }

    /// Every differential is weight-homogeneous per component, and the
    /// projection to the base intertwines the differentials.
    #[test]
    fn weight_bookkeeping(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, x) = random_valid_pair(&mut r, 2, 3).unwrap();
        let ring = x.ring();
        for i in 0..ring.len() {
            let w = x.weight(i);
            for n in 0..=x.cutoff() {
                let v = x.d_component(n, &Poly::gen(i));
                let expected = if w + n <= x.cutoff() { ring.weight_part(&v, w + n) } else { Poly::zero() };
                prop_assert_eq!(&v, &expected);
            }
            let base_part = ring.weight_part(&x.diff()[i], 0);
            let want = if i < x.nbase() { x.base().diff()[i].clone() } else { Poly::zero() };
            prop_assert_eq!(base_part, want);
        }
        prop_assert!(square_zero_check(&x).passed());
    }

    /// Conjugating by a unipotent automorphism yields a morphism whose
    /// weight-zero part is the base identity.
    #[test]
    fn morphisms_project_to_base_maps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, x) = random_valid_pair(&mut r, 2, 2).unwrap();
        let y = random_conjugate(&mut r, &x, 0.3).unwrap();
        let id = FatMorphism::identity(&x);
        prop_assert!(check_fat_morphism(&id).passed());
        prop_assert!(square_zero_check(&y).passed());
        let c = coproduct(&x, &y).unwrap();
        let fold = c.fold();
        prop_assert!(fold.is_err() || check_fat_morphism(&fold.unwrap()).passed());
        for (i, img) in id.images().iter().enumerate().take(x.nbase()) {
            prop_assert_eq!(x.ring().weight_part(img, 0), id.f0().images()[i].clone());
        }
    }

    /// Dualization and reconstruction are mutually inverse.
    #[test]
    fn multiderivation_bijection(seed in any::<u64>(), l in 0usize..3) {
        let mut r = rng(seed);
        let a = random_base(&mut r, 2);
        let rank = r.gen_range(1..=3);
        let m = random_free_module(&mut r, &a, rank, -2, 1);
        let x = random_multider(&mut r, &m, l, 0.4);
        let d = dualize_multider(&x, l as u32 + 1).unwrap();
        let f: Vec<Poly> = (0..m.rank()).map(|j| m.gen(j)).collect();
        let back = reconstruct_multider(&d, &m, &m, f, l).unwrap();
        prop_assert_eq!(back, x);
    }

    /// A pair with only its weight-zero part is a dg module: its CE algebra
    /// is the dual module and squares to zero exactly when the module does.
    #[test]
    fn weight_zero_pairs_are_dg_modules(seed in any::<u64>(), rank in 1usize..4) {
        let mut r = rng(seed);
        let a = random_base(&mut r, 2);
        let fm = random_free_module(&mut r, &a, rank, -2, 1);
        let cell = random_cell_module(&mut r, &fm);
        let x0 = Multiderivation::over_identity(
            fm.clone(),
            0,
            (0..rank).map(|j| (vec![j], cell.diff()[j].clone())).collect(),
            std::iter::once((Vec::new(), a.diff().to_vec())).collect(),
        )
        .unwrap();
        let pair = ShlrPair::new(fm, vec![x0]).unwrap();
        let ce = ce_from_pair_unchecked(&pair, 2).unwrap();
        let expected = FatCdga::from_cell_module(&cell, 2, 1).unwrap();
        prop_assert_eq!(ce.diff(), expected.diff());
        prop_assert!(square_zero_check(&ce).passed());
    }

    /// Both ends of the base cylinder project back to the identity.
    #[test]
    fn base_cylinder_ends_project_to_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_base(&mut r, 2);
        let c = base_cylinder(&a, 3).unwrap();
        let n = a.len();
        let composite = c.incl.compose(&c.proj).or_else(|_| c.proj.compose(&c.incl)).unwrap();
        for (k, img) in composite.images().iter().enumerate() {
            prop_assert_eq!(img, &Poly::gen(k % n.max(1)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Cylinder witnesses satisfy every axiom on random valid pairs.
    #[test]
    fn cylinder_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, x) = random_valid_pair(&mut r, 2, 2).unwrap();
        let cfg = FactorizationConfig::new(DegreeWindow::new(-6, 2).unwrap(), 2);
        let w = cylinder_ce(&x, &cfg).unwrap();
        prop_assert!(w.fold_ok);
        prop_assert!(is_cofibration(&w.i).cofibration);
        prop_assert!(w.passed(), "{:?}", w.weq.verdict);
    }
}

#[test]
fn closed_cell_modules_dualize_to_zero_differential() {
    let a = SemiFreeDgca::new(vec![("x".into(), 0)], vec![Poly::zero()]).unwrap();
    let m = FreeModule::new(a.clone(), vec![("m".into(), -1), ("n".into(), 0)]).unwrap();
    let c = CellModule::closed(a, m.gens()).unwrap();
    assert!(dualize_cell(&c).diff().iter().all(Poly::is_zero));
}
