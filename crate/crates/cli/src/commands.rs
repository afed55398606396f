//! Command dispatch.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use shlr_core::cofib::{
    base_complex, coproduct, cylinder_ce, is_cofibration, is_weak_equivalence, linear_complex,
    pushout_along_cofibration, FactorizationConfig, WeqConfig,
};
use shlr_core::dgca::{dualize_cell, lift_differential, CellModule, FreeModule, Poly};
use shlr_core::linalg::cohomology_dims;
use shlr_core::shlr::{ce_from_pair_unchecked, first_square_failure, pair_from_ce, ShlrPair};
use shlr_core::weighted::{check_fat_morphism, linear_part_of_differential, square_zero_check, FatCdga, FatMorphism};
use thiserror::Error;

use crate::dsl::{Kind, Model, ParseError};
use crate::report::{self, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CheckD2,
    Ce,
    ExtractBrackets,
    LinearPart,
    Cohomology,
    Weq,
    Coproduct,
    Pushout,
    Cylinder,
    Dualize,
    Lift,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::CheckD2,
        Command::Ce,
        Command::ExtractBrackets,
        Command::LinearPart,
        Command::Cohomology,
        Command::Weq,
        Command::Coproduct,
        Command::Pushout,
        Command::Cylinder,
        Command::Dualize,
        Command::Lift,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckD2 => "check-d2",
            Command::Ce => "ce",
            Command::ExtractBrackets => "extract-brackets",
            Command::LinearPart => "linear-part",
            Command::Cohomology => "cohomology",
            Command::Weq => "weq",
            Command::Coproduct => "coproduct",
            Command::Pushout => "pushout",
            Command::Cylinder => "cylinder",
            Command::Dualize => "dualize",
            Command::Lift => "lift",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

/// Which declarations a command acts on. Unset fields fall back to the
/// first suitable declaration in the file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selection {
    pub object: Option<String>,
    pub with: Option<String>,
    pub morphism: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommandError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] shlr_core::Error),
}

impl CommandError {
    /// 2 for input and usage problems, 3 for window or cutoff infeasibility,
    /// 1 when the input describes an invalid structure.
    pub fn exit_code(&self) -> i32 {
        use shlr_core::Error as E;
        match self {
            CommandError::Parse(_) | CommandError::Usage(_) => 2,
            CommandError::Core(e) if e.is_infeasibility() => 3,
            CommandError::Core(E::Invalid(_) | E::InvalidComplex { .. }) => 1,
            CommandError::Core(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        use shlr_core::Error as E;
        match self {
            CommandError::Parse(p) => p.kind.as_str(),
            CommandError::Usage(_) => "usage",
            CommandError::Core(e) => match e {
                E::Argument(_) => "argument",
                E::UnknownName(_) => "unknown-name",
                E::Dimension(_) => "dimension",
                E::InvalidComplex { .. } => "invalid-complex",
                E::Invalid(_) => "invalid",
                E::WindowTooSmall(_) => "window-too-small",
                E::Obstruction { .. } => "obstruction",
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"kind": self.kind(), "message": self.to_string()});
        if let CommandError::Parse(p) = self {
            v["line"] = json!(p.line);
            v["col"] = json!(p.col);
            v["message"] = json!(p.message);
        }
        v
    }
}

type Out = Result<(Vec<(String, Outcome)>, Value), CommandError>;

fn usage(msg: impl Into<String>) -> CommandError {
    CommandError::Usage(msg.into())
}

fn verdict(name: &str, o: Outcome) -> (String, Outcome) {
    (name.to_string(), o)
}

pub fn run_command(cmd: Command, model: &Model, sel: &Selection) -> Out {
    match cmd {
        Command::CheckD2 => check_d2(model, sel),
        Command::Ce => ce(model, sel),
        Command::ExtractBrackets => extract_brackets(model, sel),
        Command::LinearPart => linear_part(model, sel),
        Command::Cohomology => cohomology(model, sel),
        Command::Weq => weq(model, sel),
        Command::Coproduct => coproduct_cmd(model, sel),
        Command::Pushout => pushout(model, sel),
        Command::Cylinder => cylinder(model, sel),
        Command::Dualize => dualize(model, sel),
        Command::Lift => lift(model, sel),
    }
}

fn object_name<'a>(model: &'a Model, sel: &'a Selection) -> Result<&'a str, CommandError> {
    sel.object
        .as_deref()
        .or_else(|| model.default_object())
        .ok_or_else(|| usage("the file declares no algebra, module or cdga"))
}

fn object(model: &Model, name: &str) -> Result<FatCdga, CommandError> {
    if model.morphisms.contains_key(name) {
        return Err(usage(format!("`{name}` is a morphism, not an object")));
    }
    if let Some(p) = model.pairs.get(name) {
        return Ok(ce_from_pair_unchecked(p, model.config.weight_cutoff)?);
    }
    model.fat(name).ok_or_else(|| usage(format!("no object named `{name}`")))
}

fn pair<'a>(model: &'a Model, name: &str) -> Result<&'a ShlrPair, CommandError> {
    model
        .pairs
        .get(name)
        .ok_or_else(|| usage(format!("`{name}` is not a module")))
}

fn morphism<'a>(model: &'a Model, name: Option<&str>) -> Result<(&'a str, &'a FatMorphism), CommandError> {
    let name = match name {
        Some(n) => n,
        None => model.names(Kind::Morphism).next().ok_or_else(|| usage("the file declares no morphism"))?,
    };
    model
        .morphisms
        .get_key_value(name)
        .map(|(k, v)| (k.as_str(), v))
        .ok_or_else(|| usage(format!("no morphism named `{name}`")))
}

fn kind_of(model: &Model, name: &str) -> &'static str {
    match model.order.iter().find(|(_, n)| n == name).map(|(k, _)| *k) {
        Some(Kind::Algebra) => "algebra",
        Some(Kind::Module) => "module",
        Some(Kind::Cdga) => "cdga",
        Some(Kind::Morphism) => "morphism",
        None => "unknown",
    }
}

fn check_d2(model: &Model, sel: &Selection) -> Out {
    let name = object_name(model, sel)?;
    let x = object(model, name)?;
    let r = square_zero_check(&x);
    let mut verdicts = vec![verdict("d_squared", Outcome::check(r.passed()))];
    let mut result = json!({
        "object": name,
        "kind": kind_of(model, name),
        "algebra": report::fat(&x),
        "square_zero": report::square_zero(&r),
    });
    if let Some(p) = model.pairs.get(name) {
        let w = model.config.weight_cutoff as usize;
        let first = first_square_failure(p, w.saturating_sub(1), w)?;
        verdicts.push(verdict("pair_square", Outcome::check(first.is_none())));
        result["pair_first_failure"] = json!(first);
    }
    Ok((verdicts, result))
}

fn ce(model: &Model, sel: &Selection) -> Out {
    let name = object_name(model, sel)?;
    let p = pair(model, name)?;
    let x = ce_from_pair_unchecked(p, model.config.weight_cutoff)?;
    let r = square_zero_check(&x);
    Ok((
        vec![verdict("d_squared", Outcome::check(r.passed()))],
        json!({"object": name, "ce": report::fat(&x), "square_zero": report::square_zero(&r)}),
    ))
}

fn brackets_json(p: &ShlrPair) -> Value {
    let m = p.module();
    let base = m.base().ring();
    let weights: Vec<Value> = p
        .multiders()
        .iter()
        .map(|x| {
            let brackets: Vec<Value> = x
                .brackets()
                .iter()
                .map(|(w, v)| json!({"word": x.fmt_word(w), "value": m.ring().fmt(v)}))
                .collect();
            let anchors: Vec<Value> = x
                .anchors()
                .iter()
                .map(|(w, vals)| {
                    let vals: Vec<Value> = vals
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(a, v)| json!({"generator": base.gen(a).name, "value": base.fmt(v)}))
                        .collect();
                    json!({"word": x.fmt_word(w), "values": vals})
                })
                .collect();
            json!({"weight": x.weight(), "brackets": brackets, "anchors": anchors})
        })
        .collect();
    let gens: Vec<Value> = m
        .gens()
        .into_iter()
        .map(|(n, d)| json!({"name": n, "degree": d}))
        .collect();
    json!({"generators": gens, "multiderivations": weights})
}

fn extract_brackets(model: &Model, sel: &Selection) -> Out {
    let name = object_name(model, sel)?;
    let x = object(model, name)?;
    let p = pair_from_ce(&x)?;
    let back = ce_from_pair_unchecked(&p, x.cutoff())?;
    Ok((
        vec![verdict("round_trip", Outcome::check(back.diff() == x.diff()))],
        json!({"object": name, "pair": brackets_json(&p)}),
    ))
}

fn module_json(m: &FreeModule, diff: &[Poly]) -> Value {
    let gens: Vec<Value> = m
        .gens()
        .into_iter()
        .zip(diff)
        .map(|((n, d), v)| json!({"name": n, "degree": d, "d": m.ring().fmt(v)}))
        .collect();
    json!({"generators": gens})
}

fn linear_part(model: &Model, sel: &Selection) -> Out {
    if sel.morphism.is_some() {
        let (name, f) = morphism(model, sel.morphism.as_deref())?;
        let lp = f.linear_part();
        let images: Vec<Value> = lp
            .src
            .gens()
            .into_iter()
            .zip(&lp.images)
            .map(|((n, _), v)| json!({"generator": n, "image": lp.tgt.ring().fmt(v)}))
            .collect();
        return Ok((
            vec![verdict("chain_map", Outcome::check(lp.is_chain_map()))],
            json!({
                "morphism": name,
                "source": module_json(&lp.src, &lp.src_diff),
                "target": module_json(&lp.tgt, &lp.tgt_diff),
                "images": images,
            }),
        ));
    }
    let name = object_name(model, sel)?;
    let x = object(model, name)?;
    let d = linear_part_of_differential(&x)?;
    Ok((
        Vec::new(),
        json!({"object": name, "linear_part": module_json(d.module(), d.diff())}),
    ))
}

fn cohomology(model: &Model, sel: &Selection) -> Out {
    let name = object_name(model, sel)?;
    let x = object(model, name)?;
    let (window, max_len) = (model.config.window, model.config.max_len);
    let base = base_complex(x.base(), window, max_len)?;
    let (fm, diff) = x.linear_module();
    let linear = linear_complex(&fm, &diff, window, max_len)?;
    Ok((
        Vec::new(),
        json!({
            "object": name,
            "base": report::dims(&cohomology_dims(&base.complex)),
            "linear": report::dims(&cohomology_dims(&linear.complex)),
        }),
    ))
}

fn weq_config(model: &Model) -> WeqConfig {
    WeqConfig::new(model.config.window, model.config.max_len)
}

fn weq(model: &Model, sel: &Selection) -> Out {
    let (name, f) = morphism(model, sel.morphism.as_deref())?;
    let r = is_weak_equivalence(f, &weq_config(model));
    Ok((
        vec![verdict("weak_equivalence", r.verdict.into())],
        json!({"morphism": name, "weq": report::weq(&r)}),
    ))
}

fn coproduct_cmd(model: &Model, sel: &Selection) -> Out {
    let name = object_name(model, sel)?;
    let other = sel.with.as_deref().unwrap_or(name);
    let (x, y) = (object(model, name)?, object(model, other)?);
    let c = coproduct(&x, &y)?;
    let sq = square_zero_check(&c.object);
    let fold = check_fat_morphism(&c.fold()?);
    Ok((
        vec![
            verdict("d_squared", Outcome::check(sq.passed())),
            verdict("fold", Outcome::check(fold.passed())),
        ],
        json!({
            "left": name,
            "right": other,
            "coproduct": report::fat(&c.object),
            "square_zero": report::square_zero(&sq),
        }),
    ))
}

fn pushout(model: &Model, sel: &Selection) -> Out {
    let (fname, f) = morphism(model, sel.morphism.as_deref())?;
    let gname = sel
        .with
        .as_deref()
        .ok_or_else(|| usage("pushout needs --with naming the cofibration"))?;
    let (gname, g) = morphism(model, Some(gname))?;
    let cof = is_cofibration(g);
    if !cof.cofibration {
        return Ok((
            vec![verdict("cofibration", Outcome::Fail)],
            json!({"along": fname, "cofibration": gname, "reason": cof.reason}),
        ));
    }
    let p = pushout_along_cofibration(f, g)?;
    let w = is_weak_equivalence(&p.gamma, &weq_config(model));
    let wg = is_weak_equivalence(g, &weq_config(model));
    Ok((
        vec![
            verdict("cofibration", Outcome::Pass),
            verdict("d_squared", Outcome::check(p.square_zero.passed())),
            verdict("cofibration_weq", wg.verdict.into()),
            verdict("gamma_weq", w.verdict.into()),
        ],
        json!({
            "along": fname,
            "cofibration": gname,
            "pushout": report::fat(&p.object),
            "gamma": report::morphism(&p.gamma),
            "phi": report::morphism(&p.phi),
            "gamma_weq": report::weq(&w),
        }),
    ))
}

fn cylinder(model: &Model, sel: &Selection) -> Out {
    let name = object_name(model, sel)?;
    let x = object(model, name)?;
    let mut cfg = FactorizationConfig::new(model.config.window, model.config.weight_cutoff.min(x.cutoff()));
    cfg.max_len = model.config.max_len;
    let c = cylinder_ce(&x, &cfg)?;
    let logs: Vec<Value> = c
        .logs
        .iter()
        .map(|l| json!({"weight": l.weight, "unknowns": l.unknowns, "equations": l.equations, "rank": l.rank}))
        .collect();
    Ok((
        vec![
            verdict("fold", Outcome::check(c.fold_ok)),
            verdict("cofibration", Outcome::check(c.cofibration.cofibration)),
            verdict("weak_equivalence", c.weq.verdict.into()),
            verdict("d_squared", Outcome::check(c.square_zero.passed())),
            verdict("i_morphism", Outcome::check(c.i_morphism.passed())),
            verdict("p_morphism", Outcome::check(c.p_morphism.passed())),
        ],
        json!({
            "object": name,
            "cutoff": cfg.cutoff,
            "cylinder": report::fat(&c.object),
            "i": report::morphism(&c.i),
            "p": report::morphism(&c.p),
            "obstruction_log": logs,
            "p_weq": report::weq(&c.weq),
        }),
    ))
}

fn cell_module(model: &Model, name: &str) -> Result<CellModule, CommandError> {
    let p = pair(model, name)?;
    Ok(CellModule::from_module(p.module().clone(), p.module_differential())?)
}

fn dualize(model: &Model, sel: &Selection) -> Out {
    let name = object_name(model, sel)?;
    let m = cell_module(model, name)?;
    let d = dualize_cell(&m);
    let ok = (0..d.rank()).all(|j| d.d(&d.d(&d.module().gen(j))).is_zero());
    Ok((
        vec![verdict("d_squared", Outcome::check(ok))],
        json!({
            "object": name,
            "module": module_json(m.module(), m.diff()),
            "dual": module_json(d.module(), d.diff()),
        }),
    ))
}

fn lift(model: &Model, sel: &Selection) -> Out {
    let (fname, f) = morphism(model, sel.morphism.as_deref())?;
    let name = match sel.object.as_deref() {
        Some(n) => n,
        None => model.names(Kind::Module).next().ok_or_else(|| usage("the file declares no module"))?,
    };
    let n = cell_module(model, name)?;
    let p = f.f0();
    let lifted = lift_differential(p, &n, model.config.max_len)?;
    let m = lifted.module();
    let maps = (0..m.rank()).all(|j| m.push(p, n.module(), &lifted.diff()[j]) == n.diff()[j]);
    let square = (0..m.rank()).all(|j| lifted.d(&lifted.d(&m.gen(j))).is_zero());
    Ok((
        vec![
            verdict("d_squared", Outcome::check(square)),
            verdict("covers_target", Outcome::check(maps)),
        ],
        json!({
            "morphism": fname,
            "module": name,
            "lifted": module_json(m, lifted.diff()),
        }),
    ))
}
