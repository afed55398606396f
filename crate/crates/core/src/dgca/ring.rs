//! Free graded-commutative algebras on finitely many generators, with an
//! optional weight grading and truncation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{fmt_q, q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    /// 0 for base generators, 1 for module or dual generators.
    pub weight: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i32, weight: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
            weight,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// A monomial `g_{i1}^{e1} ⋯ g_{ir}^{er}` with `i1 < … < ir`, read as the
/// ordered product. Odd generators have exponent 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn gen(i: usize) -> Self {
        Monomial(vec![(i, 1)])
    }

    pub fn from_factors(mut f: Vec<(usize, u32)>) -> Self {
        f.retain(|&(_, e)| e > 0);
        f.sort();
        Monomial(f)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.iter().find(|f| f.0 == i).map_or(0, |f| f.1)
    }

    /// Generator indices with repetition, in order.
    pub fn expanded(&self) -> Vec<usize> {
        self.0
            .iter()
            .flat_map(|&(i, e)| std::iter::repeat(i).take(e as usize))
            .collect()
    }

    pub fn total_exponent(&self) -> u32 {
        self.0.iter().map(|f| f.1).sum()
    }
}

/// Rational linear combination of monomials. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn gen(i: usize) -> Self {
        Poly::term(Monomial::gen(i), Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Poly) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), -v.clone());
        }
    }

    pub fn plus(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn minus(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.sub_assign(other);
        p
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Q::one())
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        }
    }

    /// Apply a coefficient map to every term.
    pub fn map_terms(&self, mut f: impl FnMut(&Monomial, &Q) -> Option<(Monomial, Q)>) -> Poly {
        let mut out = Poly::zero();
        for (m, v) in &self.terms {
            if let Some((m2, v2)) = f(m, v) {
                out.add_term(m2, v2);
            }
        }
        out
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }
}

/// The ambient free graded-commutative algebra: generator data plus an
/// optional truncation of monomials of weight above the cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    gens: Vec<Generator>,
    cutoff: Option<u32>,
}

impl Ring {
    pub fn new(gens: Vec<Generator>, cutoff: Option<u32>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.weight > 1 {
                return Err(Error::Argument(format!("generator `{}` has weight {}", g.name, g.weight)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Argument(format!("duplicate generator `{}`", g.name)));
            }
        }
        Ok(Ring { gens, cutoff })
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gen(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn cutoff(&self) -> Option<u32> {
        self.cutoff
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<Poly> {
        Ok(Poly::gen(self.index_of(name)?))
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].is_odd()
    }

    pub fn mono_degree(&self, m: &Monomial) -> i32 {
        m.factors().iter().map(|&(i, e)| self.gens[i].degree * e as i32).sum()
    }

    pub fn mono_weight(&self, m: &Monomial) -> u32 {
        m.factors().iter().map(|&(i, e)| self.gens[i].weight * e).sum()
    }

    /// Total exponent of weight-0 generators.
    pub fn base_length(&self, m: &Monomial) -> u32 {
        m.factors()
            .iter()
            .filter(|&&(i, _)| self.gens[i].weight == 0)
            .map(|f| f.1)
            .sum()
    }

    fn within_cutoff(&self, m: &Monomial) -> bool {
        self.cutoff.is_none_or(|w| self.mono_weight(m) <= w)
    }

    /// The homogeneous degree of `p`, or `None` if `p` is zero. Errors if `p`
    /// mixes degrees.
    pub fn degree(&self, p: &Poly) -> Result<Option<i32>> {
        let mut deg = None;
        for (m, _) in p.terms() {
            let d = self.mono_degree(m);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Argument(format!(
                        "element `{}` is not homogeneous",
                        self.fmt(p)
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Weight-homogeneous component.
    pub fn weight_part(&self, p: &Poly, w: u32) -> Poly {
        p.filter(|m| self.mono_weight(m) == w)
    }

    pub fn truncate(&self, p: &Poly) -> Poly {
        match self.cutoff {
            None => p.clone(),
            Some(_) => p.filter(|m| self.within_cutoff(m)),
        }
    }

    /// Product of two monomials in normal form: `(sign, monomial)` or `None`
    /// if an odd generator would repeat.
    pub fn mul_mono(&self, a: &Monomial, b: &Monomial) -> Option<(i32, Monomial)> {
        let mut sign = 1;
        let mut out = Vec::with_capacity(a.0.len() + b.0.len());
        let (mut i, mut j) = (0, 0);
        // number of odd factors of `a` with index greater than the current b factor
        let odd_a: Vec<usize> = a.0.iter().filter(|f| self.is_odd(f.0)).map(|f| f.0).collect();
        for &(bi, _) in &b.0 {
            if self.is_odd(bi) {
                let passed = odd_a.iter().filter(|&&ai| ai > bi).count();
                if passed % 2 == 1 {
                    sign = -sign;
                }
            }
        }
        while i < a.0.len() || j < b.0.len() {
            match (a.0.get(i), b.0.get(j)) {
                (Some(&(ai, ae)), Some(&(bi, be))) if ai == bi => {
                    if self.is_odd(ai) {
                        return None;
                    }
                    out.push((ai, ae + be));
                    i += 1;
                    j += 1;
                }
                (Some(&x), Some(&y)) => {
                    if x.0 < y.0 {
                        out.push(x);
                        i += 1;
                    } else {
                        out.push(y);
                        j += 1;
                    }
                }
                (Some(&x), None) => {
                    out.push(x);
                    i += 1;
                }
                (None, Some(&y)) => {
                    out.push(y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Some((sign, Monomial(out)))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::zero();
        if a.is_zero() || b.is_zero() {
            return out;
        }
        let cut = self.cutoff;
        for (ma, ca) in a.terms() {
            let wa = if cut.is_some() { self.mono_weight(ma) } else { 0 };
            for (mb, cb) in b.terms() {
                if let Some(w) = cut {
                    if wa + self.mono_weight(mb) > w {
                        continue;
                    }
                }
                if let Some((s, m)) = self.mul_mono(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if s < 0 { -c } else { c });
                }
            }
        }
        out
    }

    pub fn mul_all<'a>(&self, factors: impl IntoIterator<Item = &'a Poly>) -> Poly {
        let mut acc = Poly::one();
        for f in factors {
            acc = self.mul(&acc, f);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn pow(&self, p: &Poly, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = self.mul(&acc, p);
        }
        acc
    }

    /// Ordered product of named generators, normalized. Unknown names error.
    pub fn word(&self, names: &[&str]) -> Result<Poly> {
        let vars = names.iter().map(|n| self.var(n)).collect::<Result<Vec<_>>>()?;
        Ok(self.mul_all(vars.iter()))
    }

    /// Ordered product of generators given by index.
    pub fn word_idx(&self, idx: &[usize]) -> Poly {
        let vars: Vec<Poly> = idx.iter().map(|&i| Poly::gen(i)).collect();
        self.mul_all(vars.iter())
    }

    /// Graded commutator sign `(-1)^{|a||b|}` for homogeneous degrees.
    pub fn swap_sign(da: i32, db: i32) -> i32 {
        if (da * db).rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    }

    /// All monomials of the given degree and weight whose base length is at
    /// most `max_len`, in increasing order. Generators of weight 0 and degree
    /// 0 are bounded by the length cap; weight-1 generators by the weight.
    pub fn monomials(&self, degree: i32, weight: u32, max_len: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.enum_rec(0, degree, weight, max_len, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enum_rec(
        &self,
        i: usize,
        deg_left: i32,
        w_left: u32,
        len_left: u32,
        cur: &mut Vec<(usize, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if i == self.gens.len() {
            if deg_left == 0 && w_left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let g = &self.gens[i];
        let cap = if g.weight == 0 { len_left } else { w_left };
        let cap = if g.is_odd() { cap.min(1) } else { cap };
        for e in 0..=cap {
            if e > 0 {
                cur.push((i, e));
            }
            let (nl, nw) = if g.weight == 0 {
                (len_left - e, w_left)
            } else {
                (len_left, w_left - e)
            };
            self.enum_rec(i + 1, deg_left - g.degree * e as i32, nw, nl, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }

    pub fn fmt_mono(&self, m: &Monomial) -> String {
        let mut s = String::new();
        for (k, &(i, e)) in m.factors().iter().enumerate() {
            if k > 0 {
                s.push('*');
            }
            s.push_str(&self.gens[i].name);
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }

    /// Canonical text form, e.g. `x^2*y - 1/2*e1`.
    pub fn fmt(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in p.terms().enumerate() {
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&fmt_q(&a));
            } else {
                if a != q(1) {
                    s.push_str(&fmt_q(&a));
                    s.push('*');
                }
                s.push_str(&self.fmt_mono(m));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sign::{koszul_sign, Permutation};

    fn ring() -> Ring {
        Ring::new(
            vec![
                Generator::new("x", 0, 0),
                Generator::new("y", -1, 0),
                Generator::new("g", -1, 0),
                Generator::new("z", -2, 0),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn even_commutes() {
        let r = ring();
        assert_eq!(r.word(&["y", "x"]).unwrap(), r.word(&["x", "y"]).unwrap());
    }

    #[test]
    fn odd_square_vanishes() {
        let r = ring();
        assert!(r.word(&["g", "g"]).unwrap().is_zero());
    }

    #[test]
    fn unknown_generator() {
        assert_eq!(ring().var("w"), Err(Error::UnknownName("w".into())));
    }

    #[test]
    fn difference_of_squares_with_odd() {
        // (x + g)(x - g) = x^2 - x g + g x - g g = x^2 (x even)
        let r = ring();
        let x = r.var("x").unwrap();
        let g = r.var("g").unwrap();
        let p = r.mul(&x.plus(&g), &x.minus(&g));
        assert_eq!(p, r.pow(&x, 2));
        // (y + g)(y - g) with both odd: -y g + g y = -2 y g
        let y = r.var("y").unwrap();
        let p = r.mul(&y.plus(&g), &y.minus(&g));
        assert_eq!(p, r.word(&["y", "g"]).unwrap().scale(&q(-2)));
    }

    #[test]
    fn format() {
        let r = ring();
        let p = r
            .word(&["g", "x", "x"])
            .unwrap()
            .scale(&crate::linalg::qr(-1, 2))
            .plus(&r.var("z").unwrap());
        assert_eq!(r.fmt(&p), "-1/2*x^2*g + z");
        assert_eq!(r.fmt(&Poly::zero()), "0");
    }

    #[test]
    fn truncation() {
        let r = Ring::new(
            vec![Generator::new("a", 0, 0), Generator::new("u", 1, 1), Generator::new("v", 0, 1)],
            Some(1),
        )
        .unwrap();
        assert!(r.word(&["u", "v"]).unwrap().is_zero());
        assert!(!r.word(&["a", "a", "v"]).unwrap().is_zero());
    }

    #[test]
    fn enumerate() {
        let r = ring();
        let ms = r.monomials(-2, 0, 2);
        let names: Vec<String> = ms.iter().map(|m| r.fmt_mono(m)).collect();
        assert_eq!(names, vec!["x*z", "y*g", "z"]);
        assert_eq!(r.monomials(-2, 0, 3).len(), 5);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word() -> impl Strategy<Value = Vec<usize>> {
            prop::collection::vec(0usize..4, 0..6)
        }

        proptest! {
            /// Any ordering of a word normalizes to the Koszul-signed normal form
            /// of the sorted word.
            #[test]
            fn word_matches_koszul(w in word(), shuffle in Just(()).prop_perturb(|_, mut rng| rng.next_u64())) {
                let r = ring();
                let k = w.len();
                let mut idx: Vec<usize> = (1..=k).collect();
                let mut s = shuffle;
                for i in (1..k).rev() {
                    let j = (s % (i as u64 + 1)) as usize;
                    s /= i as u64 + 1;
                    idx.swap(i, j);
                }
                let sigma = Permutation::new(idx).unwrap();
                let degrees: Vec<i32> = w.iter().map(|&i| r.gen(i).degree).collect();
                let permuted = sigma.permute(&w);
                let eps = koszul_sign(&degrees, &sigma).unwrap();
                prop_assert_eq!(r.word_idx(&permuted), r.word_idx(&w).scale(&q(eps as i64)));
            }

            #[test]
            fn associative(a in word(), b in word(), c in word()) {
                let r = ring();
                let (pa, pb, pc) = (r.word_idx(&a), r.word_idx(&b), r.word_idx(&c));
                prop_assert_eq!(r.mul(&r.mul(&pa, &pb), &pc), r.mul(&pa, &r.mul(&pb, &pc)));
            }

            #[test]
            fn graded_commutative(a in word(), b in word()) {
                let r = ring();
                let (pa, pb) = (r.word_idx(&a), r.word_idx(&b));
                let (Some(da), Some(db)) = (r.degree(&pa).unwrap(), r.degree(&pb).unwrap()) else {
                    return Ok(());
                };
                let s = q(Ring::swap_sign(da, db) as i64);
                prop_assert_eq!(r.mul(&pa, &pb), r.mul(&pb, &pa).scale(&s));
            }
        }
    }
}
