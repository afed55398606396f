//! Cofibrations, finite coproducts and pushouts along cofibrations.

use std::collections::BTreeSet;

use crate::dgca::{apply_morphism, DgcaMorphism, Monomial, Poly, SemiFreeDgca};
use crate::error::{Error, Result};
use crate::weighted::{check_fat_morphism, square_zero_check, FatCdga, FatMorphism, SquareZeroReport};

/// Append `suffix` to a name, keeping trailing primes at the end.
pub fn suffixed(name: &str, suffix: &str) -> String {
    let stem = name.trim_end_matches('\'');
    format!("{stem}{suffix}{}", &name[stem.len()..])
}

/// `name`, or a suffixed variant that is not yet taken; records the result.
fn fresh(name: String, taken: &mut BTreeSet<String>) -> String {
    let mut n = name;
    while taken.contains(&n) {
        n = suffixed(&n, "_");
    }
    taken.insert(n.clone());
    n
}

/// Rename generator indices by a monotone map (no reordering signs arise).
pub(crate) fn reindex(p: &Poly, map: &impl Fn(usize) -> usize) -> Poly {
    p.map_terms(|m, c| {
        let f = m.factors().iter().map(|&(i, e)| (map(i), e)).collect();
        Some((Monomial::from_factors(f), c.clone()))
    })
}

fn names(x: &FatCdga) -> Vec<String> {
    x.ring().gens().iter().map(|g| g.name.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofibrationReport {
    pub cofibration: bool,
    pub reason: Option<String>,
}

/// Syntactic test: base generators go to distinct base generators, dual
/// generators to distinct dual generators, with no other terms.
pub fn is_cofibration(g: &FatMorphism) -> CofibrationReport {
    let src = g.src();
    let tgt = g.tgt();
    let mut seen = BTreeSet::new();
    let fail = |reason: String| CofibrationReport {
        cofibration: false,
        reason: Some(reason),
    };
    for (i, img) in g.images().iter().enumerate() {
        if src.weight(i) > src.cutoff() {
            // Truncated away: the generator is zero in the source.
            continue;
        }
        let name = &src.ring().gen(i).name;
        let target = (0..tgt.ring().len()).find(|&j| *img == Poly::gen(j));
        let Some(j) = target else {
            return fail(format!("`{name}` is not sent to a single generator"));
        };
        if (i < src.nbase()) != (j < tgt.nbase()) {
            return fail(format!("`{name}` changes between base and formal generators"));
        }
        if !seen.insert(j) {
            return fail(format!("two generators are sent to `{}`", tgt.ring().gen(j).name));
        }
    }
    CofibrationReport {
        cofibration: true,
        reason: None,
    }
}

/// `X ⊔ Y` with its two inclusions. Generators of `X` precede those of `Y`
/// in both the base and the formal part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coproduct {
    pub object: FatCdga,
    pub in_x: FatMorphism,
    pub in_y: FatMorphism,
}

impl Coproduct {
    fn x_index(&self, i: usize) -> usize {
        let x = self.in_x.src();
        let nby = self.in_y.src().nbase();
        if i < x.nbase() {
            i
        } else {
            i + nby
        }
    }

    fn y_index(&self, i: usize) -> usize {
        let (x, y) = (self.in_x.src(), self.in_y.src());
        if i < y.nbase() {
            x.nbase() + i
        } else {
            x.ring().len() + i
        }
    }

    /// The morphism `X ⊔ Y → T` restricting to `h1` and `h2`.
    pub fn copair(&self, h1: &FatMorphism, h2: &FatMorphism) -> Result<FatMorphism> {
        if h1.src() != self.in_x.src() || h2.src() != self.in_y.src() || h1.tgt() != h2.tgt() {
            return Err(Error::Argument("copairing needs maps out of both summands into one target".into()));
        }
        let n = self.object.ring().len();
        let mut images = vec![Poly::zero(); n];
        for (i, img) in h1.images().iter().enumerate() {
            images[self.x_index(i)] = img.clone();
        }
        for (i, img) in h2.images().iter().enumerate() {
            images[self.y_index(i)] = img.clone();
        }
        let nb = self.object.nbase();
        let base_images: Vec<Poly> = images[..nb]
            .iter()
            .map(|p| h1.tgt().ring().weight_part(p, 0))
            .collect();
        let f0 = DgcaMorphism::new(self.object.base().clone(), h1.tgt().base().clone(), base_images)?;
        FatMorphism::new(self.object.clone(), h1.tgt().clone(), f0, images)
    }

    /// The fold map `X ⊔ X → X`.
    pub fn fold(&self) -> Result<FatMorphism> {
        let id = FatMorphism::identity(self.in_x.src());
        self.copair(&id, &id)
    }
}

pub fn coproduct(x: &FatCdga, y: &FatCdga) -> Result<Coproduct> {
    let nx = names(x);
    let ny = names(y);
    let collide: BTreeSet<&String> = nx.iter().filter(|n| ny.contains(n)).collect();
    let mut taken = BTreeSet::new();
    let rename = |n: &String, s: &str, taken: &mut BTreeSet<String>| {
        let base = if collide.contains(n) { suffixed(n, s) } else { n.clone() };
        fresh(base, taken)
    };
    let rx: Vec<String> = nx.iter().map(|n| rename(n, "_0", &mut taken)).collect();
    let ry: Vec<String> = ny.iter().map(|n| rename(n, "_1", &mut taken)).collect();
    let (nbx, nby) = (x.nbase(), y.nbase());
    let map_x = |i: usize| if i < nbx { i } else { i + nby };
    let map_y = |i: usize| if i < nby { nbx + i } else { x.ring().len() + i };

    let mut base_gens = Vec::new();
    let mut base_diff = Vec::new();
    for i in 0..nbx {
        base_gens.push((rx[i].clone(), x.ring().gen(i).degree));
        base_diff.push(reindex(&x.base().diff()[i], &map_x));
    }
    for i in 0..nby {
        base_gens.push((ry[i].clone(), y.ring().gen(i).degree));
        base_diff.push(reindex(&y.base().diff()[i], &map_y));
    }
    let base = SemiFreeDgca::new(base_gens, base_diff)?;
    let mut dual = Vec::new();
    let mut diff: Vec<Poly> = x.diff()[..nbx].iter().map(|p| reindex(p, &map_x)).collect();
    diff.extend(y.diff()[..nby].iter().map(|p| reindex(p, &map_y)));
    for j in 0..x.rank() {
        let i = nbx + j;
        dual.push((rx[i].clone(), x.ring().gen(i).degree));
        diff.push(reindex(&x.diff()[i], &map_x));
    }
    for j in 0..y.rank() {
        let i = nby + j;
        dual.push((ry[i].clone(), y.ring().gen(i).degree));
        diff.push(reindex(&y.diff()[i], &map_y));
    }
    let cutoff = x.cutoff().min(y.cutoff());
    let shift = if x.rank() > 0 { x.shift() } else { y.shift() };
    let object = FatCdga::new(base, dual, diff, cutoff, shift)?;
    let inclusion = |src: &FatCdga, map: &dyn Fn(usize) -> usize| -> Result<FatMorphism> {
        let images: Vec<Poly> = (0..src.ring().len()).map(|i| Poly::gen(map(i))).collect();
        let f0 = DgcaMorphism::new(src.base().clone(), object.base().clone(), images[..src.nbase()].to_vec())?;
        FatMorphism::new(src.clone(), object.clone(), f0, images)
    };
    let in_x = inclusion(x, &map_x)?;
    let in_y = inclusion(y, &map_y)?;
    Ok(Coproduct { object, in_x, in_y })
}

/// The pushout square `γ ∘ f = φ ∘ g` for a cofibration `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pushout {
    pub object: FatCdga,
    pub gamma: FatMorphism,
    pub phi: FatMorphism,
    pub square_zero: SquareZeroReport,
}

/// Pushout of `f: X → Y` along a cofibration `g: X → Z`.
///
/// The new object has base `C[x_a]` (base of `Y`, then the base generators of
/// `Z` outside the image of `g`) and formal generators `I ∖ I'` before `J`.
/// Its differential is the unique one intertwined by `γ` and `φ`.
pub fn pushout_along_cofibration(f: &FatMorphism, g: &FatMorphism) -> Result<Pushout> {
    if f.src() != g.src() {
        return Err(Error::Argument("pushout needs maps with a common source".into()));
    }
    let rep = is_cofibration(g);
    if !rep.cofibration {
        return Err(Error::Argument(format!(
            "second map is not a cofibration: {}",
            rep.reason.unwrap_or_default()
        )));
    }
    let y = f.tgt();
    let z = g.tgt();
    let pos = |p: &Poly| -> usize {
        let m = p.terms().next().expect("cofibration images are generators").0;
        m.factors()[0].0
    };
    let g_img: Vec<usize> = g.images().iter().map(pos).collect();
    let new_base: Vec<usize> = (0..z.nbase()).filter(|k| !g_img.contains(k)).collect();
    let new_dual: Vec<usize> = (z.nbase()..z.ring().len()).filter(|k| !g_img.contains(k)).collect();

    let (ncb, nx, r1) = (y.nbase(), new_base.len(), new_dual.len());
    let nb = ncb + nx;
    let map_y = |i: usize| if i < ncb { i } else { nb + r1 + (i - ncb) };

    let mut taken: BTreeSet<String> = names(y).into_iter().collect();
    let znames = names(z);
    let zname = |k: usize, taken: &mut BTreeSet<String>| {
        let n = znames[k].clone();
        if taken.contains(&n) {
            fresh(suffixed(&n, "_1"), taken)
        } else {
            fresh(n, taken)
        }
    };
    let xnames: Vec<String> = new_base.iter().map(|&k| zname(k, &mut taken)).collect();
    let inames: Vec<String> = new_dual.iter().map(|&k| zname(k, &mut taken)).collect();

    // φ on generators of Z
    let mut phi_images = vec![Poly::zero(); z.ring().len()];
    for (i, &k) in g_img.iter().enumerate() {
        phi_images[k] = reindex(&f.images()[i], &map_y);
    }
    for (p, &k) in new_base.iter().enumerate() {
        phi_images[k] = Poly::gen(ncb + p);
    }
    for (p, &k) in new_dual.iter().enumerate() {
        phi_images[k] = Poly::gen(nb + p);
    }

    let mut gens: Vec<(String, i32)> = y.base().gens();
    gens.extend(new_base.iter().zip(&xnames).map(|(&k, n)| (n.clone(), z.ring().gen(k).degree)));
    let dual: Vec<(String, i32)> = new_dual
        .iter()
        .zip(&inames)
        .map(|(&k, n)| (n.clone(), z.ring().gen(k).degree))
        .chain((0..y.rank()).map(|j| {
            let g = y.ring().gen(ncb + j);
            (g.name.clone(), g.degree)
        }))
        .collect();
    // a provisional ring to evaluate φ on differentials
    let cutoff = y.cutoff().min(z.cutoff());
    let mut ring_gens: Vec<crate::dgca::Generator> = gens
        .iter()
        .map(|(n, d)| crate::dgca::Generator::new(n.clone(), *d, 0))
        .collect();
    ring_gens.extend(dual.iter().map(|(n, d)| crate::dgca::Generator::new(n.clone(), *d, 1)));
    let ring = crate::dgca::Ring::new(ring_gens, Some(cutoff))?;
    let phi_d = |k: usize| ring.truncate(&apply_morphism(&ring, &phi_images, &z.diff()[k]));

    let mut diff = vec![Poly::zero(); ring.len()];
    for i in 0..y.ring().len() {
        diff[map_y(i)] = reindex(&y.diff()[i], &map_y);
    }
    for (p, &k) in new_base.iter().enumerate() {
        diff[ncb + p] = phi_d(k);
    }
    for (p, &k) in new_dual.iter().enumerate() {
        diff[nb + p] = phi_d(k);
    }
    let base_diff: Vec<Poly> = diff[..nb].iter().map(|p| ring.weight_part(p, 0)).collect();
    let base = SemiFreeDgca::new(gens, base_diff)?;
    let shift = if y.rank() > 0 { y.shift() } else { z.shift() };
    let object = FatCdga::new(base, dual, diff, cutoff, shift)?;

    let gamma_images: Vec<Poly> = (0..y.ring().len()).map(|i| Poly::gen(map_y(i))).collect();
    let gamma0 = DgcaMorphism::new(y.base().clone(), object.base().clone(), gamma_images[..ncb].to_vec())?;
    let gamma = FatMorphism::new(y.clone(), object.clone(), gamma0, gamma_images)?;
    let phi0_images: Vec<Poly> = phi_images[..z.nbase()].iter().map(|p| ring.weight_part(p, 0)).collect();
    let phi0 = DgcaMorphism::new(z.base().clone(), object.base().clone(), phi0_images)?;
    let phi = FatMorphism::new(z.clone(), object.clone(), phi0, phi_images)?;

    for (name, m) in [("γ", &gamma), ("φ", &phi)] {
        if let Some(fl) = check_fat_morphism(m).failure {
            return Err(Error::WindowTooSmall(format!(
                "{name} does not intertwine differentials at `{}` (weight {})",
                fl.generator, fl.weight
            )));
        }
    }
    if gamma.compose(f)?.images() != phi.compose(g)?.images() {
        return Err(Error::Invalid("pushout square does not commute".into()));
    }
    let square_zero = square_zero_check(&object);
    if !square_zero.passed() {
        return Err(Error::WindowTooSmall("pushout differential does not square to zero".into()));
    }
    Ok(Pushout {
        object,
        gamma,
        phi,
        square_zero,
    })
}
