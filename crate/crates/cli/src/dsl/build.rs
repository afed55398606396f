//! Name resolution: turn a parsed file into core objects.
//!
//! Module generators are declared with their degrees in `L`; the core works
//! in `M = L[1]`, so every module degree is lowered by one on the way in.

use std::collections::{BTreeMap, BTreeSet};

use shlr_core::dgca::{CellModule, DgcaMorphism, FreeModule, Generator, Poly, Ring, SemiFreeDgca};
use shlr_core::shlr::{ce_from_pair_unchecked, Multiderivation, ShlrPair};
use shlr_core::weighted::{FatCdga, FatMorphism};
use shlr_core::{q, qr, DegreeWindow};

use super::ast::*;
use super::{ErrorKind, ParseError};

type Res<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub weight_cutoff: u32,
    pub window: DegreeWindow,
    pub seed: u64,
    pub max_len: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            weight_cutoff: 4,
            window: DegreeWindow::new(-6, 2).expect("valid window"),
            seed: 0,
            max_len: 3,
        }
    }
}

/// Command-line values that take precedence over the file's `config` block.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub weight_cutoff: Option<u32>,
    pub window: Option<DegreeWindow>,
    pub seed: Option<u64>,
    pub max_len: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Algebra,
    Module,
    Cdga,
    Morphism,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub file: ModelFile,
    pub config: Config,
    pub algebras: BTreeMap<String, SemiFreeDgca>,
    /// One pair per module; modules without brackets carry only `X_0`.
    pub pairs: BTreeMap<String, ShlrPair>,
    pub cdgas: BTreeMap<String, FatCdga>,
    pub morphisms: BTreeMap<String, FatMorphism>,
    /// Declaration order.
    pub order: Vec<(Kind, String)>,
}

fn err(kind: ErrorKind, at: Span, msg: impl Into<String>) -> ParseError {
    ParseError::new(kind, at, msg)
}

fn invalid(at: Span, e: shlr_core::Error) -> ParseError {
    err(ErrorKind::Invalid, at, e.to_string())
}

impl Model {
    /// The named object as a weighted algebra: a `cdga`, the CE algebra of
    /// a module's pair at the configured cutoff, or an algebra on its own.
    pub fn fat(&self, name: &str) -> Option<FatCdga> {
        let w = self.config.weight_cutoff;
        if let Some(x) = self.cdgas.get(name) {
            return Some(if w < x.cutoff() { x.truncated(w).ok()? } else { x.clone() });
        }
        if let Some(p) = self.pairs.get(name) {
            return ce_from_pair_unchecked(p, w).ok();
        }
        self.algebras.get(name).map(|a| FatCdga::base_only(a.clone(), w))
    }

    /// Names of the given kinds, in declaration order.
    pub fn names(&self, kind: Kind) -> impl Iterator<Item = &str> {
        self.order.iter().filter(move |(k, _)| *k == kind).map(|(_, n)| n.as_str())
    }

    /// The first `cdga`, else the first module, else the first algebra.
    pub fn default_object(&self) -> Option<&str> {
        [Kind::Cdga, Kind::Module, Kind::Algebra]
            .into_iter()
            .find_map(|k| self.names(k).next())
    }

    /// The cell module `M = L[1]` underlying a module declaration.
    pub fn cell_module(&self, name: &str) -> Option<CellModule> {
        let p = self.pairs.get(name)?;
        CellModule::from_module(p.module().clone(), p.module_differential()).ok()
    }
}

pub fn build_model(file: &ModelFile, over: &Overrides) -> Res<Model> {
    let mut b = Builder {
        model: Model {
            file: file.clone(),
            config: Config::default(),
            algebras: BTreeMap::new(),
            pairs: BTreeMap::new(),
            cdgas: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            order: Vec::new(),
        },
        names: BTreeSet::new(),
        modules: BTreeMap::new(),
    };
    let configs: Vec<&ConfigBlock> = file
        .items
        .iter()
        .filter_map(|i| if let Item::Config(c) = i { Some(c) } else { None })
        .collect();
    if configs.len() > 1 {
        let at = configs[1].entries.first().map(|e| e.0.span()).unwrap_or_default();
        return Err(err(ErrorKind::Duplicate, at, "more than one config block"));
    }
    if let Some(c) = configs.first() {
        b.config(c)?;
    }
    let cfg = &mut b.model.config;
    cfg.weight_cutoff = over.weight_cutoff.unwrap_or(cfg.weight_cutoff);
    cfg.window = over.window.unwrap_or(cfg.window);
    cfg.seed = over.seed.unwrap_or(cfg.seed);
    cfg.max_len = over.max_len.unwrap_or(cfg.max_len);

    let brackets: Vec<&BracketsBlock> = file
        .items
        .iter()
        .filter_map(|i| if let Item::Brackets(c) = i { Some(c) } else { None })
        .collect();
    for item in &file.items {
        match item {
            Item::Algebra(blk) => b.algebra(blk)?,
            Item::Module(blk) => b.module(blk)?,
            Item::Cdga(blk) => b.cdga(blk)?,
            Item::Morphism(blk) => b.morphism(blk)?,
            Item::Brackets(blk) => {
                if !b.modules.contains_key(&blk.module.name) {
                    return Err(err(
                        ErrorKind::UnknownName,
                        blk.module.span(),
                        format!("unknown module `{}`", blk.module.name),
                    ));
                }
            }
            Item::Config(_) => {}
        }
        if let Item::Module(blk) = item {
            let mine: Vec<&BracketsBlock> = brackets.iter().copied().filter(|k| k.module.name == blk.name.name).collect();
            if mine.len() > 1 {
                return Err(err(
                    ErrorKind::Duplicate,
                    mine[1].module.span(),
                    format!("second brackets block for `{}`", blk.name.name),
                ));
            }
            b.pair(blk, mine.first().copied())?;
        }
    }
    Ok(b.model)
}

struct Builder {
    model: Model,
    names: BTreeSet<String>,
    /// Module declarations waiting for their brackets: free module and
    /// weight-zero bracket.
    modules: BTreeMap<String, (FreeModule, BTreeMap<Vec<usize>, Poly>)>,
}

impl Builder {
    fn declare(&mut self, id: &Ident, kind: Kind) -> Res<()> {
        if !self.names.insert(id.name.clone()) {
            return Err(err(
                ErrorKind::Duplicate,
                id.span(),
                format!("`{}` is already declared", id.name),
            ));
        }
        self.model.order.push((kind, id.name.clone()));
        Ok(())
    }

    fn config(&mut self, c: &ConfigBlock) -> Res<()> {
        let mut seen = BTreeSet::new();
        for (key, value) in &c.entries {
            if !seen.insert(key.name.as_str()) {
                return Err(err(ErrorKind::Duplicate, key.span(), format!("`{}` set twice", key.name)));
            }
            let cfg = &mut self.model.config;
            let at = key.span();
            let nonneg = |v: &ConfigValue| match v {
                ConfigValue::Int(n) if *n >= 0 => Ok(*n),
                _ => Err(err(ErrorKind::Syntax, at, format!("`{}` needs a non-negative integer", key.name))),
            };
            match key.name.as_str() {
                "weight_cutoff" => {
                    cfg.weight_cutoff = u32::try_from(nonneg(value)?)
                        .map_err(|_| err(ErrorKind::Syntax, at, "weight cutoff out of range"))?
                }
                "seed" => cfg.seed = nonneg(value)? as u64,
                "max_len" => {
                    cfg.max_len =
                        u32::try_from(nonneg(value)?).map_err(|_| err(ErrorKind::Syntax, at, "max_len out of range"))?
                }
                "degree_window" => match value {
                    ConfigValue::Range(lo, hi) => {
                        cfg.window = DegreeWindow::new(*lo, *hi).map_err(|e| invalid(at, e))?;
                    }
                    _ => return Err(err(ErrorKind::Syntax, at, "`degree_window` needs LO:HI")),
                },
                other => return Err(err(ErrorKind::UnknownName, at, format!("unknown config key `{other}`"))),
            }
        }
        Ok(())
    }

    fn base(&self, id: &Ident) -> Res<SemiFreeDgca> {
        self.model.algebras.get(&id.name).cloned().ok_or_else(|| {
            err(
                ErrorKind::UnknownName,
                id.span(),
                format!("unknown algebra `{}`", id.name),
            )
        })
    }

    /// Generators and differential statements of a block, checked for
    /// duplicates against `reserved` names.
    fn split<'a>(blk: &'a Block, reserved: &[String]) -> Res<(Vec<(&'a Ident, i32)>, Vec<(&'a Ident, &'a Expr)>)> {
        let mut gens = Vec::new();
        let mut diffs = Vec::new();
        let mut seen: BTreeSet<&str> = reserved.iter().map(String::as_str).collect();
        for st in &blk.stmts {
            match st {
                Stmt::Gen { name, degree } => {
                    if !seen.insert(&name.name) {
                        return Err(err(
                            ErrorKind::Duplicate,
                            name.span(),
                            format!("generator `{}` declared twice", name.name),
                        ));
                    }
                    gens.push((name, *degree));
                }
                Stmt::Diff { name, value } => diffs.push((name, value)),
            }
        }
        Ok((gens, diffs))
    }

    /// Evaluate `d g = expr` statements into a vector indexed by `ring`,
    /// for generators in `allowed`.
    fn diffs(ring: &Ring, diffs: &[(&Ident, &Expr)], allowed: std::ops::Range<usize>) -> Res<Vec<Option<Poly>>> {
        let mut out = vec![None; ring.len()];
        for (name, value) in diffs {
            let i = ring
                .index_of(&name.name)
                .ok()
                .filter(|i| allowed.contains(i))
                .ok_or_else(|| err(ErrorKind::UnknownName, name.span(), format!("`{}` is not a generator here", name.name)))?;
            if out[i].is_some() {
                return Err(err(
                    ErrorKind::Duplicate,
                    name.span(),
                    format!("differential of `{}` given twice", name.name),
                ));
            }
            out[i] = Some(eval(ring, value)?);
        }
        Ok(out)
    }

    fn algebra(&mut self, blk: &Block) -> Res<()> {
        self.declare(&blk.name, Kind::Algebra)?;
        let (gens, diffs) = Self::split(blk, &[])?;
        for (g, d) in &gens {
            if *d > 0 {
                return Err(err(
                    ErrorKind::Degree,
                    g.span(),
                    format!("algebra generator `{}` has positive degree {d}", g.name),
                ));
            }
        }
        let decl: Vec<(String, i32)> = gens.iter().map(|(g, d)| (g.name.clone(), *d)).collect();
        let ring = Ring::new(decl.iter().map(|(n, d)| Generator::new(n.clone(), *d, 0)).collect(), None)
            .map_err(|e| invalid(blk.name.span(), e))?;
        let values = Self::diffs(&ring, &diffs, 0..ring.len())?;
        let values = values.into_iter().map(Option::unwrap_or_default).collect();
        let a = SemiFreeDgca::new(decl, values).map_err(|e| invalid(blk.name.span(), e))?;
        self.model.algebras.insert(blk.name.name.clone(), a);
        Ok(())
    }

    fn module(&mut self, blk: &Block) -> Res<()> {
        self.declare(&blk.name, Kind::Module)?;
        let over = blk.over.as_ref().expect("parser requires `over`");
        let base = self.base(over)?;
        let reserved: Vec<String> = base.gens().into_iter().map(|g| g.0).collect();
        let (gens, diffs) = Self::split(blk, &reserved)?;
        let decl = gens.iter().map(|(g, d)| (g.name.clone(), d - 1)).collect();
        let fm = FreeModule::new(base.clone(), decl).map_err(|e| invalid(blk.name.span(), e))?;
        let values = Self::diffs(fm.ring(), &diffs, fm.nbase()..fm.ring().len())?;
        let x0 = values
            .into_iter()
            .skip(fm.nbase())
            .enumerate()
            .filter_map(|(j, v)| v.map(|v| (vec![j], v)))
            .collect();
        self.modules.insert(blk.name.name.clone(), (fm, x0));
        Ok(())
    }

    fn pair(&mut self, blk: &Block, brackets: Option<&BracketsBlock>) -> Res<()> {
        let (fm, mut x0) = self.modules[&blk.name.name].clone();
        let base = fm.base().clone();
        let mut bracket: BTreeMap<usize, BTreeMap<Vec<usize>, Poly>> = BTreeMap::new();
        let mut anchor: BTreeMap<usize, BTreeMap<Vec<usize>, Vec<Poly>>> = BTreeMap::new();
        let mut at = blk.name.span();
        if let Some(bb) = brackets {
            at = bb.module.span();
            for st in &bb.stmts {
                let (args, value, is_anchor) = match st {
                    BracketStmt::Bracket { args, value } => (args, value, false),
                    BracketStmt::Anchor { args, value } => (args, value, true),
                };
                let (word, sign) = sorted_word(&fm, args)?;
                let pos = args[0].span();
                if is_anchor {
                    let vals: Vec<Poly> = eval_derivation(base.ring(), value)?.iter().map(|p| p.scale(&sign)).collect();
                    let slot = anchor.entry(word.len()).or_default();
                    if slot.insert(word, vals).is_some() {
                        return Err(err(ErrorKind::Duplicate, pos, "anchor given twice"));
                    }
                } else {
                    let v = eval(fm.ring(), value)?.scale(&sign);
                    if odd_repeat(&fm, &word) && !v.is_zero() {
                        return Err(err(
                            ErrorKind::Invalid,
                            pos,
                            "a bracket repeating an odd generator vanishes by graded symmetry",
                        ));
                    }
                    let w = word.len() - 1;
                    let slot = if w == 0 { &mut x0 } else { bracket.entry(w).or_default() };
                    if slot.insert(word, v).is_some() {
                        return Err(err(ErrorKind::Duplicate, pos, "bracket given twice"));
                    }
                }
            }
        }
        let top = bracket
            .keys()
            .chain(anchor.keys())
            .copied()
            .max()
            .unwrap_or(0)
            .max(self.model.config.weight_cutoff as usize);
        let mut xs = Vec::with_capacity(top + 1);
        let mut a0 = BTreeMap::new();
        a0.insert(Vec::new(), base.diff().to_vec());
        xs.push(Multiderivation::over_identity(fm.clone(), 0, x0, a0).map_err(|e| invalid(at, e))?);
        for k in 1..=top {
            let x = Multiderivation::over_identity(
                fm.clone(),
                k,
                bracket.remove(&k).unwrap_or_default(),
                anchor.remove(&k).unwrap_or_default(),
            )
            .map_err(|e| invalid(at, e))?;
            xs.push(x);
        }
        let pair = ShlrPair::new(fm, xs).map_err(|e| invalid(at, e))?;
        self.model.pairs.insert(blk.name.name.clone(), pair);
        Ok(())
    }

    fn cdga(&mut self, blk: &Block) -> Res<()> {
        self.declare(&blk.name, Kind::Cdga)?;
        let over = blk.over.as_ref().expect("parser requires `over`");
        let base = self.base(over)?;
        let cutoff = blk.cutoff.expect("parser requires `cutoff`");
        let reserved: Vec<String> = base.gens().into_iter().map(|g| g.0).collect();
        let (gens, diffs) = Self::split(blk, &reserved)?;
        let dual: Vec<(String, i32)> = gens.iter().map(|(g, d)| (g.name.clone(), *d)).collect();
        let mut all: Vec<Generator> = base.ring().gens().to_vec();
        all.extend(dual.iter().map(|(n, d)| Generator::new(n.clone(), *d, 1)));
        let ring = Ring::new(all, Some(cutoff)).map_err(|e| invalid(blk.name.span(), e))?;
        let values = Self::diffs(&ring, &diffs, 0..ring.len())?;
        let diff = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.unwrap_or_else(|| base.diff().get(i).cloned().unwrap_or_default()))
            .collect();
        let x = FatCdga::new(base, dual, diff, cutoff, 1).map_err(|e| invalid(blk.name.span(), e))?;
        self.model.cdgas.insert(blk.name.name.clone(), x);
        Ok(())
    }

    fn morphism(&mut self, blk: &MorphismBlock) -> Res<()> {
        self.declare(&blk.name, Kind::Morphism)?;
        let get = |id: &Ident| {
            self.model.fat(&id.name).ok_or_else(|| {
                err(
                    ErrorKind::UnknownName,
                    id.span(),
                    format!("unknown object `{}`", id.name),
                )
            })
        };
        let src = get(&blk.src)?;
        let tgt = get(&blk.tgt)?;
        let mut images: Vec<Option<Poly>> = vec![None; src.ring().len()];
        for (g, e) in &blk.maps {
            let i = src.ring().index_of(&g.name).map_err(|_| {
                err(
                    ErrorKind::UnknownName,
                    g.span(),
                    format!("`{}` is not a generator of `{}`", g.name, blk.src.name),
                )
            })?;
            if images[i].is_some() {
                return Err(err(ErrorKind::Duplicate, g.span(), format!("image of `{}` given twice", g.name)));
            }
            images[i] = Some(eval(tgt.ring(), e)?);
        }
        let images: Vec<Poly> = images.into_iter().map(Option::unwrap_or_default).collect();
        let at = blk.name.span();
        let f0_images = images[..src.nbase()].iter().map(|p| tgt.ring().weight_part(p, 0)).collect();
        let f0 = DgcaMorphism::new(src.base().clone(), tgt.base().clone(), f0_images).map_err(|e| invalid(at, e))?;
        let f = FatMorphism::new(src, tgt, f0, images).map_err(|e| invalid(at, e))?;
        self.model.morphisms.insert(blk.name.name.clone(), f);
        Ok(())
    }
}

/// Sort bracket arguments into a word with the Koszul sign of the sort.
fn sorted_word(m: &FreeModule, args: &[Ident]) -> Res<(Vec<usize>, shlr_core::Q)> {
    let mut idx = Vec::with_capacity(args.len());
    for a in args {
        let j = m.index_of(&a.name).map_err(|_| {
            err(
                ErrorKind::UnknownName,
                a.span(),
                format!("`{}` is not a module generator", a.name),
            )
        })?;
        idx.push(j);
    }
    let mut odd = false;
    for i in 0..idx.len() {
        for k in 0..idx.len() - 1 - i {
            if idx[k] > idx[k + 1] {
                if (m.degree(idx[k]) * m.degree(idx[k + 1])).rem_euclid(2) == 1 {
                    odd = !odd;
                }
                idx.swap(k, k + 1);
            }
        }
    }
    Ok((idx, if odd { q(-1) } else { q(1) }))
}

fn odd_repeat(m: &FreeModule, w: &[usize]) -> bool {
    w.windows(2).any(|p| p[0] == p[1] && m.degree(p[0]).rem_euclid(2) == 1)
}

fn number(num: u64, den: u64, at: Span) -> Res<Poly> {
    let (n, d) = (i64::try_from(num), i64::try_from(den));
    match (n, d) {
        (Ok(n), Ok(d)) => Ok(Poly::constant(qr(n, d))),
        _ => Err(err(ErrorKind::Syntax, at, "numeric literal out of range")),
    }
}

pub fn eval(ring: &Ring, e: &Expr) -> Res<Poly> {
    let mut out = Poly::zero();
    for t in &e.terms {
        let mut p = Poly::one();
        for f in &t.factors {
            let v = match f {
                Factor::Number { num, den, at } => number(*num, *den, at.0)?,
                Factor::Var { name, exp } => {
                    let i = ring.index_of(&name.name).map_err(|_| {
                        err(ErrorKind::UnknownName, name.span(), format!("unknown generator `{}`", name.name))
                    })?;
                    ring.pow(&Poly::gen(i), *exp)
                }
                Factor::Group { expr, exp, .. } => ring.pow(&eval(ring, expr)?, *exp),
                Factor::Deriv(g) => {
                    return Err(err(ErrorKind::Syntax, g.span(), "`D[…]` is only allowed in anchors"));
                }
            };
            p = ring.mul(&p, &v);
        }
        if t.negative {
            out.sub_assign(&p);
        } else {
            out.add_assign(&p);
        }
    }
    Ok(ring.truncate(&out))
}

/// An anchor value `Σ c_a D[a]`: one coefficient per base generator.
fn eval_derivation(base: &Ring, e: &Expr) -> Res<Vec<Poly>> {
    let mut out = vec![Poly::zero(); base.len()];
    for t in &e.terms {
        let derivs: Vec<&Ident> = t
            .factors
            .iter()
            .filter_map(|f| if let Factor::Deriv(g) = f { Some(g) } else { None })
            .collect();
        let [g] = derivs.as_slice() else {
            let at = match t.factors.first() {
                Some(Factor::Var { name, .. }) | Some(Factor::Deriv(name)) => name.span(),
                Some(Factor::Number { at, .. }) | Some(Factor::Group { at, .. }) => at.0,
                None => Span::default(),
            };
            return Err(err(ErrorKind::Syntax, at, "each anchor term needs exactly one `D[…]`"));
        };
        let a = base.index_of(&g.name).map_err(|_| {
            err(ErrorKind::UnknownName, g.span(), format!("`{}` is not a base generator", g.name))
        })?;
        let rest = Expr {
            terms: vec![Term {
                negative: t.negative,
                factors: t.factors.iter().filter(|f| !matches!(f, Factor::Deriv(_))).cloned().collect(),
            }],
        };
        out[a].add_assign(&eval(base, &rest)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::parse_model;
    use super::*;

    fn build(src: &str) -> Res<Model> {
        build_model(&parse_model(src)?, &Overrides::default())
    }

    fn kind(src: &str) -> ErrorKind {
        build(src).unwrap_err().kind
    }

    const LIE: &str = "algebra k {\n}\nmodule L over k {\n  e1 : 0;\n  e2 : 0;\n}\n";

    #[test]
    fn minimal_algebra() {
        let m = build("algebra A { x : 0; }").unwrap();
        let a = &m.algebras["A"];
        assert_eq!(a.gens(), vec![("x".to_string(), 0)]);
        assert!(a.diff()[0].is_zero());
        assert_eq!(m.default_object(), Some("A"));
    }

    #[test]
    fn module_degrees_are_shifted() {
        let m = build(LIE).unwrap();
        assert_eq!(m.pairs["L"].module().degree(0), -1);
        assert_eq!(m.pairs["L"].arity_cutoff(), 4);
    }

    #[test]
    fn swapped_bracket_arguments_pick_up_the_sign() {
        let a = build(&format!("{LIE}brackets L {{ [e1, e2] = e1; }}")).unwrap();
        let b = build(&format!("{LIE}brackets L {{ [e2, e1] = -e1; }}")).unwrap();
        assert_eq!(a.pairs["L"], b.pairs["L"]);
    }

    #[test]
    fn anchors_need_one_derivation_per_term() {
        let src = "algebra A { x : 0; }\nmodule L over A { e : 0; }\n";
        assert!(build(&format!("{src}brackets L {{ anchor(e) = x*D[x]; }}")).is_ok());
        assert_eq!(kind(&format!("{src}brackets L {{ anchor(e) = x; }}")), ErrorKind::Syntax);
        assert_eq!(kind(&format!("{src}brackets L {{ anchor(e) = D[x]*D[x]; }}")), ErrorKind::Syntax);
        assert_eq!(kind(&format!("{src}brackets L {{ [e] = D[x]; }}")), ErrorKind::Syntax);
    }

    #[test]
    fn repeated_odd_argument_is_invalid() {
        let src = "algebra k {\n}\nmodule L over k {\n  e : 0;\n  h : -1;\n}\n";
        assert_eq!(kind(&format!("{src}brackets L {{ [e, e] = h; }}")), ErrorKind::Invalid);
    }

    #[test]
    fn duplicates_are_rejected() {
        assert_eq!(kind("algebra A { x : 0; x : 0; }"), ErrorKind::Duplicate);
        assert_eq!(kind("algebra A { }\nalgebra A { }"), ErrorKind::Duplicate);
        assert_eq!(kind("algebra A { x : 0; d x = 0; d x = 0; }"), ErrorKind::Duplicate);
        assert_eq!(
            kind(&format!("{LIE}brackets L {{ [e1, e2] = e1; [e2, e1] = e1; }}")),
            ErrorKind::Duplicate
        );
        assert_eq!(kind(&format!("{LIE}brackets L {{ [e1] = e1; }}\nbrackets L {{ }}")), ErrorKind::Duplicate);
    }

    #[test]
    fn names_must_be_declared() {
        assert_eq!(kind("module L over B { e : 0; }"), ErrorKind::UnknownName);
        assert_eq!(kind("algebra A { x : 0; d y = x; }"), ErrorKind::UnknownName);
        assert_eq!(kind("config { cutoff = 2; }"), ErrorKind::UnknownName);
        let e = build("algebra A { x : 0;\n d x = y; }").unwrap_err();
        assert_eq!((e.kind, e.line, e.col), (ErrorKind::UnknownName, 2, 8));
    }

    #[test]
    fn algebra_generators_are_nonpositive() {
        let e = build("algebra A {\n  x : 2;\n}").unwrap_err();
        assert_eq!((e.kind, e.line, e.col), (ErrorKind::Degree, 2, 3));
    }

    #[test]
    fn inconsistent_differential_is_invalid() {
        assert_eq!(kind("algebra A { x : 0; y : -1; d x = y; }"), ErrorKind::Invalid);
    }

    #[test]
    fn config_and_overrides() {
        let src = "config { weight_cutoff = 1; degree_window = -2:3; seed = 7; max_len = 4; }";
        let m = build(src).unwrap();
        assert_eq!(m.config.weight_cutoff, 1);
        assert_eq!((m.config.window.lo(), m.config.window.hi()), (-2, 3));
        assert_eq!((m.config.seed, m.config.max_len), (7, 4));
        let o = Overrides {
            weight_cutoff: Some(5),
            ..Overrides::default()
        };
        let m = build_model(&parse_model(src).unwrap(), &o).unwrap();
        assert_eq!(m.config.weight_cutoff, 5);
        assert_eq!(m.config.seed, 7);
    }

    #[test]
    fn morphism_defaults_and_base_part() {
        let src = "algebra A { x : 0; }\nalgebra B { y : 0; }\nmorphism f : A -> B { x -> y^2 + 1; }";
        let m = build(src).unwrap();
        let f = &m.morphisms["f"];
        assert_eq!(f.tgt().ring().fmt(&f.f0().images()[0]), "1 + y^2");
        let m = build("algebra A { x : 0; }\nmorphism z : A -> A { }").unwrap();
        assert!(m.morphisms["z"].images()[0].is_zero());
    }

    #[test]
    fn cdga_keeps_the_base_differential() {
        let src = "algebra A { x : 0; y : -1; d y = x; }\ncdga C over A cutoff 2 { a : 1; }";
        let m = build(src).unwrap();
        let c = &m.cdgas["C"];
        assert_eq!(c.ring().fmt(&c.diff()[1]), "x");
        assert_eq!(m.default_object(), Some("C"));
    }
}
