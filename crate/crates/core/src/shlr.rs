//! Multiderivations, their square-zero calculus, and the duality with
//! weight-graded derivations of the Chevalley–Eilenberg algebra.
//!
//! Words are sorted lists of module generator indices; a word repeating an
//! odd generator is zero in the symmetric power and never stored.
//!
//! Pairing convention between `Sym(M*)` and `Sym(M)`: for a sorted word
//! `w = x_1 ⊙ … ⊙ x_n`,
//! `⟨w*, w⟩ = (Π mult_even!) · (−1)^{Σ_{p<q} |x_p||x_q|}`, coefficients on the
//! dual side factor out on the left, and `ω(a·x) = (−1)^{|a||ω|} a·ω(x)`.

use std::collections::BTreeMap;

use num_traits::One;

use crate::dgca::{apply_derivation, dual_name, DerivationOverMorphism, FreeModule, Generator, Monomial, Poly, Ring};
use crate::error::{Error, Result};
use crate::linalg::{q, Q};
use crate::sign::{koszul_sign, unshuffles};
use crate::weighted::FatCdga;

fn sign_q(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

fn odd(n: i32) -> bool {
    n.rem_euclid(2) == 1
}

/// All sorted words of the given length in the generators of `m`.
pub fn words(m: &FreeModule, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(m: &FreeModule, start: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for j in start..m.rank() {
            if cur.last() == Some(&j) && odd(m.degree(j)) {
                continue;
            }
            cur.push(j);
            rec(m, j, len, cur, out);
            cur.pop();
        }
    }
    rec(m, 0, len, &mut cur, &mut out);
    out
}

/// Sort a word of generators, returning the Koszul sign of the rearrangement,
/// or `None` if an odd generator repeats.
fn sort_word(m: &FreeModule, w: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut v = w.to_vec();
    let mut neg = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                if odd(m.degree(v[j])) && odd(m.degree(v[j + 1])) {
                    neg = !neg;
                }
                v.swap(j, j + 1);
            }
        }
    }
    if v.windows(2).any(|p| p[0] == p[1] && odd(m.degree(p[0]))) {
        return None;
    }
    Some((neg, v))
}

fn word_degree(m: &FreeModule, w: &[usize]) -> i32 {
    w.iter().map(|&j| m.degree(j)).sum()
}

/// `⟨w*, w⟩` for a sorted word.
pub fn pairing_norm(m: &FreeModule, w: &[usize]) -> Q {
    let mut norm = Q::one();
    let mut run = 1i64;
    for i in 1..=w.len() {
        if i < w.len() && w[i] == w[i - 1] {
            run += 1;
        } else {
            for r in 2..=run {
                norm *= q(r);
            }
            run = 1;
        }
    }
    let odd_count = w.iter().filter(|&&j| odd(m.degree(j))).count();
    let pairs = odd_count * odd_count.saturating_sub(1) / 2;
    norm * sign_q(pairs % 2 == 1)
}

/// The dual ring `A ⊕ M*`: base generators, then `m_j*` of degree `−|m_j|`.
pub fn dual_ring(m: &FreeModule, cutoff: u32) -> Ring {
    let mut gens: Vec<Generator> = m.base().ring().gens().to_vec();
    for (n, d) in m.gens() {
        gens.push(Generator::new(dual_name(&n), -d, 1));
    }
    Ring::new(gens, Some(cutoff)).expect("dual names are distinct")
}

fn word_monomial(m: &FreeModule, w: &[usize]) -> Monomial {
    let mut f: Vec<(usize, u32)> = Vec::new();
    for &j in w {
        let idx = m.nbase() + j;
        match f.last_mut() {
            Some(last) if last.0 == idx => last.1 += 1,
            _ => f.push((idx, 1)),
        }
    }
    Monomial::from_factors(f)
}

/// `ω(w)` for `ω` in the dual ring of `m` and a sorted word `w`.
pub fn evaluate_on_word(m: &FreeModule, omega: &Poly, w: &[usize]) -> Poly {
    let mono = word_monomial(m, w);
    let nb = m.nbase();
    let mut out = Poly::zero();
    for (mm, c) in omega.terms() {
        let (base, dual): (Vec<(usize, u32)>, Vec<(usize, u32)>) = mm.factors().iter().partition(|f| f.0 < nb);
        if Monomial::from_factors(dual) == mono {
            out.add_term(Monomial::from_factors(base), c.clone());
        }
    }
    out.scale(&pairing_norm(m, w))
}

/// The dual-ring element whose values on sorted words are given.
fn element_from_values(m: &FreeModule, values: &BTreeMap<Vec<usize>, Poly>) -> Poly {
    let ring = m.base().ring();
    let mut out = Poly::zero();
    for (w, v) in values {
        let norm = pairing_norm(m, w).recip();
        let mono = word_monomial(m, w);
        for (bm, c) in v.terms() {
            let mut f = bm.factors().to_vec();
            f.extend(mono.factors().iter().copied());
            out.add_term(Monomial::from_factors(f), c * &norm);
        }
        let _ = ring;
    }
    out
}

/// Base coefficient of generator `j` in a module element, evaluated by the
/// dual generator: `m_j*(Σ c_i m_i) = (−1)^{|c_j||m_j*|} c_j`.
fn dual_eval(m: &FreeModule, elem: &Poly, j: usize) -> Poly {
    let c = m.coefficient(elem, j);
    let ring = m.base().ring();
    let dual_deg = -m.degree(j);
    c.map_terms(|mono, v| {
        let s = odd(ring.mono_degree(mono) * dual_deg);
        Some((mono.clone(), if s { -v.clone() } else { v.clone() }))
    })
}

/// A multiderivation of weight `l` over an `A`-module map `f: M → N`:
/// a bracket on `(l+1)`-words landing in `N` with degree +1 and an anchor on
/// `l`-words landing in degree-shifted derivations of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiderivation {
    source: FreeModule,
    target: FreeModule,
    f: Vec<Poly>,
    weight: usize,
    bracket: BTreeMap<Vec<usize>, Poly>,
    anchor: BTreeMap<Vec<usize>, Vec<Poly>>,
}

impl Multiderivation {
    pub fn new(
        source: FreeModule,
        target: FreeModule,
        f: Vec<Poly>,
        weight: usize,
        bracket: BTreeMap<Vec<usize>, Poly>,
        anchor: BTreeMap<Vec<usize>, Vec<Poly>>,
    ) -> Result<Self> {
        if source.base() != target.base() {
            return Err(Error::Argument("multiderivation between modules over different bases".into()));
        }
        if f.len() != source.rank() {
            return Err(Error::Dimension("module map has the wrong number of images".into()));
        }
        for (j, img) in f.iter().enumerate() {
            if !target.is_element(img) {
                return Err(Error::Invalid(format!("image of {} is not a module element", source.name(j))));
            }
            if let Some(d) = target.ring().degree(img)? {
                if d != source.degree(j) {
                    return Err(Error::Argument(format!("image of {} has the wrong degree", source.name(j))));
                }
            }
        }
        let base = source.base().ring();
        let bracket: BTreeMap<_, _> = bracket.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let anchor: BTreeMap<_, _> = anchor
            .into_iter()
            .filter(|(_, v): &(Vec<usize>, Vec<Poly>)| v.iter().any(|p| !p.is_zero()))
            .collect();
        for (w, v) in &bracket {
            Self::check_word(&source, w, weight + 1)?;
            if !target.is_element(v) {
                return Err(Error::Invalid("bracket value is not a module element".into()));
            }
            if let Some(d) = target.ring().degree(v)? {
                if d != word_degree(&source, w) + 1 {
                    return Err(Error::Argument(format!(
                        "bracket value on {} has degree {d}, expected {}",
                        Self::fmt_word_in(&source, w),
                        word_degree(&source, w) + 1
                    )));
                }
            }
        }
        for (w, v) in &anchor {
            Self::check_word(&source, w, weight)?;
            if v.len() != base.len() {
                return Err(Error::Dimension("anchor needs one value per base generator".into()));
            }
            for (a, p) in v.iter().enumerate() {
                if let Some(d) = base.degree(p)? {
                    let want = base.gen(a).degree + word_degree(&source, w) + 1;
                    if d != want {
                        return Err(Error::Argument(format!(
                            "anchor value on {} at {} has degree {d}, expected {want}",
                            Self::fmt_word_in(&source, w),
                            base.gen(a).name
                        )));
                    }
                }
            }
        }
        Ok(Multiderivation {
            source,
            target,
            f,
            weight,
            bracket,
            anchor,
        })
    }

    pub fn over_identity(
        module: FreeModule,
        weight: usize,
        bracket: BTreeMap<Vec<usize>, Poly>,
        anchor: BTreeMap<Vec<usize>, Vec<Poly>>,
    ) -> Result<Self> {
        let f = (0..module.rank()).map(|j| module.gen(j)).collect();
        Self::new(module.clone(), module, f, weight, bracket, anchor)
    }

    pub fn zero(module: FreeModule, weight: usize) -> Self {
        Self::over_identity(module, weight, BTreeMap::new(), BTreeMap::new()).expect("zero is valid")
    }

    fn check_word(m: &FreeModule, w: &[usize], len: usize) -> Result<()> {
        if w.len() != len {
            return Err(Error::Argument(format!("word of length {} where {len} expected", w.len())));
        }
        match sort_word(m, w) {
            Some((false, s)) if s == w => Ok(()),
            _ => Err(Error::Argument(format!("word {w:?} is not a sorted nonzero word"))),
        }
    }

    fn fmt_word_in(m: &FreeModule, w: &[usize]) -> String {
        let names: Vec<&str> = w.iter().map(|&j| m.name(j)).collect();
        format!("({})", names.join(","))
    }

    pub fn fmt_word(&self, w: &[usize]) -> String {
        Self::fmt_word_in(&self.source, w)
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn module_map(&self) -> &[Poly] {
        &self.f
    }

    pub fn brackets(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.bracket
    }

    pub fn anchors(&self) -> &BTreeMap<Vec<usize>, Vec<Poly>> {
        &self.anchor
    }

    pub fn is_zero(&self) -> bool {
        self.bracket.is_empty() && self.anchor.is_empty()
    }

    fn is_identity_map(&self) -> bool {
        self.source == self.target && (0..self.source.rank()).all(|j| self.f[j] == self.source.gen(j))
    }

    /// Bracket value on a word of generators in any order.
    pub fn bracket_on(&self, w: &[usize]) -> Poly {
        match sort_word(&self.source, w) {
            None => Poly::zero(),
            Some((neg, s)) => {
                let v = self.bracket.get(&s).cloned().unwrap_or_default();
                if neg {
                    v.neg()
                } else {
                    v
                }
            }
        }
    }

    /// Anchor values (one per base generator) on a word in any order.
    pub fn anchor_on(&self, w: &[usize]) -> Vec<Poly> {
        let nb = self.source.nbase();
        match sort_word(&self.source, w) {
            None => vec![Poly::zero(); nb],
            Some((neg, s)) => {
                let v = self.anchor.get(&s).cloned().unwrap_or_else(|| vec![Poly::zero(); nb]);
                if neg {
                    v.iter().map(Poly::neg).collect()
                } else {
                    v
                }
            }
        }
    }

    /// `σ(w)(a)` for a base element `a`.
    pub fn anchor_apply(&self, w: &[usize], a: &Poly) -> Poly {
        let vals = self.anchor_on(w);
        let deg = word_degree(&self.source, w) + 1;
        let ring = self.source.base().ring();
        let id: Vec<Poly> = (0..ring.len()).map(Poly::gen).collect();
        apply_derivation(ring, ring, &id, &vals, deg, a)
    }

    /// Split module elements into terms `c · a · m_j`.
    fn slot_terms(&self, slot: &Poly) -> Vec<(Q, Monomial, usize)> {
        let nb = self.source.nbase();
        slot.terms()
            .filter_map(|(m, c)| {
                let f = m.factors();
                let &(last, e) = f.last()?;
                if last < nb || e != 1 {
                    return None;
                }
                Some((c.clone(), Monomial::from_factors(f[..f.len() - 1].to_vec()), last - nb))
            })
            .collect()
    }

    fn item_degree(&self, it: &(Monomial, usize)) -> i32 {
        self.source.base().ring().mono_degree(&it.0) + self.source.degree(it.1)
    }

    /// The bracket on a word of arbitrary module elements, extended by the
    /// defining rule
    /// `X(… ⊙ a·m) = σ(…)(a)·f(m) + (−1)^{|a|(1+Σ|m_i|)} a·X(… ⊙ m)`.
    pub fn eval_bracket(&self, slots: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        self.for_each_term_word(slots, &mut |c, items| {
            out.add_scaled(&self.bracket_items(items), c);
        });
        out
    }

    /// The anchor on a word of arbitrary module elements, as generator values
    /// of a derivation of `A`, using `σ(b·w) = (−1)^{|b|} b·σ(w)`.
    pub fn eval_anchor(&self, slots: &[Poly]) -> Vec<Poly> {
        let nb = self.source.nbase();
        let mut out = vec![Poly::zero(); nb];
        self.for_each_term_word(slots, &mut |c, items| {
            for (o, v) in out.iter_mut().zip(self.anchor_items(items)) {
                o.add_scaled(&v, c);
            }
        });
        out
    }

    fn for_each_term_word(&self, slots: &[Poly], f: &mut dyn FnMut(&Q, &[(Monomial, usize)])) {
        let expanded: Vec<Vec<(Q, Monomial, usize)>> = slots.iter().map(|s| self.slot_terms(s)).collect();
        let mut idx = vec![0usize; slots.len()];
        if expanded.iter().any(Vec::is_empty) {
            return;
        }
        loop {
            let mut c = Q::one();
            let items: Vec<(Monomial, usize)> = idx
                .iter()
                .enumerate()
                .map(|(k, &i)| {
                    let t = &expanded[k][i];
                    c *= &t.0;
                    (t.1.clone(), t.2)
                })
                .collect();
            f(&c, &items);
            let mut k = slots.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < expanded[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    fn bracket_items(&self, items: &[(Monomial, usize)]) -> Poly {
        let base = self.source.base().ring();
        let tring = self.target.ring();
        let Some(j) = items.iter().rposition(|it| !it.0.is_one()) else {
            let w: Vec<usize> = items.iter().map(|it| it.1).collect();
            return self.bracket_on(&w);
        };
        // move slot j to the end
        let dj = self.item_degree(&items[j]);
        let after: i32 = items[j + 1..].iter().map(|it| self.item_degree(it)).sum();
        let mut rest: Vec<(Monomial, usize)> = items.to_vec();
        let (a, m) = rest.remove(j);
        let move_sign = sign_q(odd(dj * after));
        let a_poly = Poly::term(a.clone(), Q::one());
        let da = base.mono_degree(&a);
        // σ(rest)(a)·f(m)
        let sigma = self.anchor_items(&rest);
        let id: Vec<Poly> = (0..base.len()).map(Poly::gen).collect();
        let sdeg: i32 = rest.iter().map(|it| self.item_degree(it)).sum::<i32>() + 1;
        let sa = apply_derivation(base, base, &id, &sigma, sdeg, &a_poly);
        let mut out = tring.mul(&sa, &self.f[m]);
        // (−1)^{|a|(1+Σ|rest|)} a·X(rest ⊙ m)
        let mut inner_items = rest.clone();
        inner_items.push((Monomial::one(), m));
        let inner = self.bracket_items(&inner_items);
        let s = sign_q(odd(da * sdeg));
        out.add_scaled(&tring.mul(&a_poly, &inner), &s);
        out.scale(&move_sign)
    }

    fn anchor_items(&self, items: &[(Monomial, usize)]) -> Vec<Poly> {
        let base = self.source.base().ring();
        let Some(j) = items.iter().position(|it| !it.0.is_one()) else {
            let w: Vec<usize> = items.iter().map(|it| it.1).collect();
            return self.anchor_on(&w);
        };
        // (y_1, …, b·m_j, …) = (−1)^{|b| Σ_{p<j}|y_p|} b·(y_1, …, m_j, …)
        let b = items[j].0.clone();
        let db = base.mono_degree(&b);
        let before: i32 = items[..j].iter().map(|it| self.item_degree(it)).sum();
        let mut rest = items.to_vec();
        rest[j].0 = Monomial::one();
        let inner = self.anchor_items(&rest);
        let s = sign_q(odd(db * before) ^ odd(db));
        let b_poly = Poly::term(b, Q::one());
        inner.iter().map(|v| base.mul(&b_poly, v).scale(&s)).collect()
    }
}

/// The derivation `Ŝym_A(N*) → Ŝym_A(M*)` of weight `l` dual to `X`.
///
/// On a base element `a`: `(da)(x_1…x_l) = (−1)^{|a|Σ|x|} σ(x)(a)`.
/// On `n*`: the unshuffle formula with the anchor term over `Sh(l,1)` and
/// `−(−1)^{|n*|} n*(X(x))`.
pub fn dualize_multider(x: &Multiderivation, cutoff: u32) -> Result<DerivationOverMorphism> {
    let m = x.source();
    let n = x.target();
    let l = x.weight();
    let base = m.base().ring();
    let nb = m.nbase();
    let src = dual_ring(n, cutoff);
    let tgt = dual_ring(m, cutoff);
    let mut values = Vec::with_capacity(src.len());
    for a in 0..nb {
        let mut vals = BTreeMap::new();
        let da = base.gen(a).degree;
        for w in words(m, l) {
            let v = x.anchor_apply(&w, &Poly::gen(a));
            let s = sign_q(odd(da * word_degree(m, &w)));
            vals.insert(w, v.scale(&s));
        }
        values.push(tgt.truncate(&element_from_values(m, &vals)));
    }
    for j in 0..n.rank() {
        let ns = -n.degree(j);
        let mut vals = BTreeMap::new();
        for w in words(m, l + 1) {
            let mut v = Poly::zero();
            let total = word_degree(m, &w);
            for sigma in unshuffles(l, 1) {
                let degs: Vec<i32> = w.iter().map(|&i| m.degree(i)).collect();
                let eps = koszul_sign(&degs, &sigma).expect("lengths agree");
                let arranged = sigma.permute(&w);
                let last = arranged[l];
                let first = &arranged[..l];
                let e = ns * (total - m.degree(last));
                let coeff = dual_eval(n, &x.f[last], j);
                if coeff.is_zero() {
                    continue;
                }
                let term = x.anchor_apply(first, &coeff);
                v.add_scaled(&term, &(sign_q(odd(e)) * q(eps as i64)));
            }
            let xv = x.bracket_on(&w);
            let nx = dual_eval(n, &xv, j);
            v.add_scaled(&nx, &-sign_q(odd(ns)));
            vals.insert(w, v);
        }
        values.push(tgt.truncate(&element_from_values(m, &vals)));
    }
    let morphism = dual_map(x, &src, &tgt);
    DerivationOverMorphism::new(src, tgt, morphism, 1, values)
}

/// `f*: Ŝym(N*) → Ŝym(M*)` on generators: identity on the base and
/// `n_j* ↦ Σ_i (−1)^{|b_ij||n_j*|} b_ij m_i*` where `f(m_i) = Σ_j b_ij n_j`.
fn dual_map(x: &Multiderivation, src: &Ring, tgt: &Ring) -> Vec<Poly> {
    let m = x.source();
    let n = x.target();
    let nb = m.nbase();
    let mut out: Vec<Poly> = (0..nb).map(Poly::gen).collect();
    for j in 0..n.rank() {
        let mut img = Poly::zero();
        for i in 0..m.rank() {
            let b = dual_eval(n, &x.f[i], j);
            img.add_assign(&tgt.mul(&b, &Poly::gen(nb + i)));
        }
        out.push(img);
    }
    let _ = src;
    out
}

/// Which sign precedes the reconstructed bracket's derivation term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconstructionSign {
    /// `x*(X(x)) = [anchor sum] − (−1)^{|x*|}(dx*)(x)`, the inverse of
    /// [`dualize_multider`].
    Corrected,
    /// `+(−1)^{|x*|}(dx*)(x)`, as sometimes printed.
    Printed,
}

/// Recover the weight-`l` multiderivation over `f` from its dual derivation.
pub fn reconstruct_multider(
    d: &DerivationOverMorphism,
    source: &FreeModule,
    target: &FreeModule,
    f: Vec<Poly>,
    l: usize,
) -> Result<Multiderivation> {
    reconstruct_with(d, source, target, f, l, ReconstructionSign::Corrected, true)
}

pub fn reconstruct_with(
    d: &DerivationOverMorphism,
    source: &FreeModule,
    target: &FreeModule,
    f: Vec<Poly>,
    l: usize,
    sign: ReconstructionSign,
    need_bracket: bool,
) -> Result<Multiderivation> {
    let cutoff = d.tgt().cutoff().unwrap_or(0);
    if need_bracket && (cutoff as usize) < l + 1 {
        return Err(Error::Argument(format!(
            "weight cutoff {cutoff} is too small to reconstruct a weight-{l} bracket"
        )));
    }
    let base = source.base().ring();
    let nb = source.nbase();
    let vals = d.values();
    let mut anchor = BTreeMap::new();
    for w in words(source, l) {
        let wd = word_degree(source, &w);
        let v: Vec<Poly> = (0..nb)
            .map(|a| {
                let e = evaluate_on_word(source, &vals[a], &w);
                e.scale(&sign_q(odd(base.gen(a).degree * wd)))
            })
            .collect();
        anchor.insert(w, v);
    }
    let anchor_only = Multiderivation::new(
        source.clone(),
        target.clone(),
        f.clone(),
        l,
        BTreeMap::new(),
        anchor.clone(),
    )?;
    let mut bracket = BTreeMap::new();
    if need_bracket {
        for w in words(source, l + 1) {
            let total = word_degree(source, &w);
            let mut coeffs = Vec::with_capacity(target.rank());
            for j in 0..target.rank() {
                let xs = -target.degree(j);
                let mut v = Poly::zero();
                for i in 0..w.len() {
                    let after: i32 = w[i + 1..].iter().map(|&p| source.degree(p)).sum();
                    let e = xs * (1 + total - source.degree(w[i])) + source.degree(w[i]) * after;
                    let mut rest = w.clone();
                    rest.remove(i);
                    let c = dual_eval(target, &f[w[i]], j);
                    if c.is_zero() {
                        continue;
                    }
                    v.add_scaled(&anchor_only.anchor_apply(&rest, &c), &sign_q(odd(e)));
                }
                let dx = evaluate_on_word(source, &vals[nb + j], &w);
                let s = match sign {
                    ReconstructionSign::Corrected => -sign_q(odd(xs)),
                    ReconstructionSign::Printed => sign_q(odd(xs)),
                };
                v.add_scaled(&dx, &s);
                // x_j*(X(w)) = v, so the coefficient of n_j is (−1)^{|c||n_j*|} v
                let c = v.map_terms(|mono, val| {
                    let neg = odd(base.mono_degree(mono) * xs);
                    Some((mono.clone(), if neg { -val.clone() } else { val.clone() }))
                });
                coeffs.push(c);
            }
            bracket.insert(w, target.from_coefficients(&coeffs));
        }
    }
    Multiderivation::new(source.clone(), target.clone(), f, l, bracket, anchor)
}

/// A pair `(A, M)` with multiderivations `𝕏_0, …, 𝕏_K` over the identity,
/// where `M = L[1]` carries the internal (shifted) degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShlrPair {
    module: FreeModule,
    multiders: Vec<Multiderivation>,
}

impl ShlrPair {
    pub fn new(module: FreeModule, multiders: Vec<Multiderivation>) -> Result<Self> {
        if multiders.is_empty() {
            return Err(Error::Argument("a pair needs at least the weight-zero part".into()));
        }
        for (i, x) in multiders.iter().enumerate() {
            if x.weight() != i || x.source() != &module || !x.is_identity_map() {
                return Err(Error::Argument(format!(
                    "entry {i} is not a weight-{i} multiderivation over the identity of the module"
                )));
            }
        }
        let sigma0 = multiders[0].anchor_on(&[]);
        if sigma0 != module.base().diff() {
            return Err(Error::Invalid("the weight-zero anchor must be the base differential".into()));
        }
        Ok(ShlrPair { module, multiders })
    }

    pub fn module(&self) -> &FreeModule {
        &self.module
    }

    pub fn multiders(&self) -> &[Multiderivation] {
        &self.multiders
    }

    pub fn arity_cutoff(&self) -> usize {
        self.multiders.len() - 1
    }

    /// Module differential `X_0` on generators.
    pub fn module_differential(&self) -> Vec<Poly> {
        (0..self.module.rank()).map(|j| self.multiders[0].bracket_on(&[j])).collect()
    }
}

/// Both defects of `Σ_{i+j=k} 𝕏_i ∘ 𝕏_j` at total weight `k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SquareDefect {
    /// Nonzero bracket defects on `(k+1)`-words.
    pub bracket: BTreeMap<Vec<usize>, Poly>,
    /// Nonzero anchor defects on `k`-words, one value per base generator.
    pub anchor: BTreeMap<Vec<usize>, Vec<Poly>>,
}

impl SquareDefect {
    pub fn is_zero(&self) -> bool {
        self.bracket.is_empty() && self.anchor.is_empty()
    }
}

/// Evaluate both unshuffle sums for `Σ_{i+j=k} 𝕏_i ∘ 𝕏_j` on every word.
///
/// Bracket part on `(k+1)`-words:
/// `Σ_{Sh(j+1,i)} ε X_i(X_j(m_σ(1..j+1)) ⊙ m_σ(j+2..))`.
/// Anchor part on `k`-words, evaluated on base generators:
/// `Σ_{Sh(j+1,i−1)} ε σ_i(X_j(…) ⊙ …) + Σ_{Sh(i,j)} ε (−1)^{|m_σ(1)|+…+|m_σ(i)|} σ_i(…)σ_j(…)`.
pub fn multider_square(xs: &[Multiderivation], k: usize) -> Result<SquareDefect> {
    if xs.is_empty() {
        return Ok(SquareDefect::default());
    }
    if k > xs.len() - 1 {
        return Err(Error::Argument(format!(
            "weight {k} exceeds the arity cutoff {}",
            xs.len() - 1
        )));
    }
    let m = xs[0].source().clone();
    for (i, x) in xs.iter().enumerate() {
        if x.source() != &m || x.weight() != i || !x.is_identity_map() {
            return Err(Error::Argument("multiderivations must share the module and be listed by weight".into()));
        }
    }
    let base = m.base().ring();
    let nb = m.nbase();
    let mut defect = SquareDefect::default();
    let gen_poly = |j: usize| m.gen(j);
    for w in words(&m, k + 1) {
        let degs: Vec<i32> = w.iter().map(|&p| m.degree(p)).collect();
        let mut total = Poly::zero();
        for j in 0..=k {
            let i = k - j;
            for sigma in unshuffles(j + 1, i) {
                let eps = q(koszul_sign(&degs, &sigma).expect("lengths agree") as i64);
                let arr = sigma.permute(&w);
                let inner = xs[j].bracket_on(&arr[..=j]);
                if inner.is_zero() {
                    continue;
                }
                let mut slots = vec![inner];
                slots.extend(arr[j + 1..].iter().map(|&p| gen_poly(p)));
                total.add_scaled(&xs[i].eval_bracket(&slots), &eps);
            }
        }
        if !total.is_zero() {
            defect.bracket.insert(w, total);
        }
    }
    for w in words(&m, k) {
        let degs: Vec<i32> = w.iter().map(|&p| m.degree(p)).collect();
        let mut total = vec![Poly::zero(); nb];
        for j in 0..=k {
            let i = k - j;
            if i >= 1 {
                for sigma in unshuffles(j + 1, i - 1) {
                    let eps = q(koszul_sign(&degs, &sigma).expect("lengths agree") as i64);
                    let arr = sigma.permute(&w);
                    let inner = xs[j].bracket_on(&arr[..=j]);
                    if inner.is_zero() {
                        continue;
                    }
                    let mut slots = vec![inner];
                    slots.extend(arr[j + 1..].iter().map(|&p| gen_poly(p)));
                    for (t, v) in total.iter_mut().zip(xs[i].eval_anchor(&slots)) {
                        t.add_scaled(&v, &eps);
                    }
                }
            }
            for sigma in unshuffles(i, j) {
                let eps = koszul_sign(&degs, &sigma).expect("lengths agree");
                let arr = sigma.permute(&w);
                let (u, v) = arr.split_at(i);
                let e: i32 = u.iter().map(|&p| m.degree(p)).sum();
                let s = q(eps as i64) * sign_q(odd(e));
                for (a, t) in total.iter_mut().enumerate() {
                    let inner = xs[j].anchor_apply(v, &Poly::gen(a));
                    if inner.is_zero() {
                        continue;
                    }
                    t.add_scaled(&xs[i].anchor_apply(u, &inner), &s);
                }
            }
        }
        if total.iter().any(|p| !p.is_zero()) {
            defect.anchor.insert(w, total);
        }
    }
    let _ = base;
    Ok(defect)
}

/// Smallest weight `k ≤ through` at which the pair fails to square to zero.
/// Anchor defects are checked up to `through`, bracket defects up to
/// `bracket_through`.
pub fn first_square_failure(p: &ShlrPair, bracket_through: usize, through: usize) -> Result<Option<usize>> {
    for k in 0..=through.min(p.arity_cutoff()) {
        let d = multider_square(p.multiders(), k)?;
        if !d.anchor.is_empty() || (k <= bracket_through && !d.bracket.is_empty()) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// The CE algebra `Ŝym_A(M*)` with `d = Σ_n dualize(𝕏_n)`, truncated at `W`.
/// Rejects pairs that do not square to zero in the visible weights.
pub fn ce_from_pair(p: &ShlrPair, cutoff: u32) -> Result<FatCdga> {
    let w = cutoff as usize;
    if let Some(k) = first_square_failure(p, w.saturating_sub(1), w)? {
        return Err(Error::Invalid(format!("pair does not square to zero at weight {k}")));
    }
    ce_from_pair_unchecked(p, cutoff)
}

pub fn ce_from_pair_unchecked(p: &ShlrPair, cutoff: u32) -> Result<FatCdga> {
    let m = p.module();
    let ring = dual_ring(m, cutoff);
    let mut diff = vec![Poly::zero(); ring.len()];
    for x in p.multiders().iter().take(cutoff as usize + 1) {
        let d = dualize_multider(x, cutoff)?;
        for (t, v) in diff.iter_mut().zip(d.values()) {
            t.add_assign(v);
        }
    }
    let dual: Vec<(String, i32)> = (0..m.rank())
        .map(|j| {
            let g = ring.gen(m.nbase() + j);
            (g.name.clone(), g.degree)
        })
        .collect();
    FatCdga::new(m.base().clone(), dual, diff, cutoff, 1)
}

/// Reconstruct the pair weight by weight. The top weight `W` keeps only its
/// anchor: its bracket lands in weight `W + 1`, beyond the truncation.
pub fn pair_from_ce(x: &FatCdga) -> Result<ShlrPair> {
    let gens: Vec<(String, i32)> = x
        .dual_gens()
        .into_iter()
        .map(|(n, d)| (n.strip_suffix('\'').unwrap_or(&n).to_string(), -d))
        .collect();
    let module = FreeModule::new(x.base().clone(), gens)?;
    let w = x.cutoff();
    let ring = dual_ring(&module, w);
    if ring.gens() != x.ring().gens() {
        return Err(Error::Invalid("dual generators do not follow the naming convention".into()));
    }
    let id: Vec<Poly> = (0..ring.len()).map(Poly::gen).collect();
    let f: Vec<Poly> = (0..module.rank()).map(|j| module.gen(j)).collect();
    let mut multiders = Vec::new();
    for n in 0..=w {
        let d = DerivationOverMorphism::new(ring.clone(), ring.clone(), id.clone(), 1, x.component(n))?;
        let need = n < w;
        multiders.push(reconstruct_with(
            &d,
            &module,
            &module,
            f.clone(),
            n as usize,
            ReconstructionSign::Corrected,
            need,
        )?);
    }
    ShlrPair::new(module, multiders)
}
