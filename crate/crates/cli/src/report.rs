//! Canonical reports. Keys are sorted (serde_json's default map is ordered),
//! elements are printed in the ring's normal form and rationals as `p/q`.

use serde_json::{json, Map, Value};
use shlr_core::cofib::{Verdict, WeqReport};
use shlr_core::dgca::{Poly, Ring};
use shlr_core::weighted::{FatCdga, FatMorphism, MorphismReport, SquareZeroReport};
use shlr_core::{CohomologyDim, Q};

use crate::dsl::Config;

/// Outcome of one certification step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    True,
    False,
    Inconclusive,
}

impl Outcome {
    pub fn check(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::True => "true",
            Outcome::False => "false",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

impl From<Verdict> for Outcome {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::True => Outcome::True,
            Verdict::False => Outcome::False,
            Verdict::Inconclusive => Outcome::Inconclusive,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub file: String,
    pub model: String,
    pub config: Config,
    pub verdicts: Vec<(String, Outcome)>,
    pub result: Value,
    pub timing_ms: Option<u128>,
}

impl Report {
    /// 0 when every verdict holds, 1 on a failed or false verdict,
    /// 3 when the only problem is an inconclusive verdict.
    pub fn exit_code(&self) -> i32 {
        let outs = || self.verdicts.iter().map(|(_, o)| *o);
        if outs().any(|o| matches!(o, Outcome::Fail | Outcome::False)) {
            1
        } else if outs().any(|o| o == Outcome::Inconclusive) {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(1));
        m.insert("command".into(), json!(self.command));
        m.insert("file".into(), json!(self.file));
        m.insert("model".into(), json!(self.model));
        m.insert("config".into(), config_json(&self.config));
        let verdicts: Map<String, Value> = self
            .verdicts
            .iter()
            .map(|(k, o)| (k.clone(), json!(o.as_str())))
            .collect();
        m.insert("verdicts".into(), Value::Object(verdicts));
        m.insert("result".into(), self.result.clone());
        if let Some(t) = self.timing_ms {
            m.insert("timing_ms".into(), json!(t as u64));
        }
        Value::Object(m)
    }
}

pub fn config_json(c: &Config) -> Value {
    json!({
        "weight_cutoff": c.weight_cutoff,
        "degree_window": format!("{}:{}", c.window.lo(), c.window.hi()),
        "seed": c.seed,
        "max_len": c.max_len,
    })
}

pub fn rational(x: &Q) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

pub fn poly(ring: &Ring, p: &Poly) -> Value {
    Value::String(ring.fmt(p))
}

pub fn cohomology(d: &CohomologyDim) -> Value {
    match d {
        CohomologyDim::Dim(n) => json!(n),
        CohomologyDim::WindowIncomplete => json!("incomplete"),
    }
}

pub fn dims(m: &std::collections::BTreeMap<i32, CohomologyDim>) -> Value {
    Value::Array(
        m.iter()
            .map(|(n, d)| json!({"degree": n, "dim": cohomology(d)}))
            .collect(),
    )
}

/// Generators with degree and weight, and the differential on each.
pub fn fat(x: &FatCdga) -> Value {
    let ring = x.ring();
    let gens: Vec<Value> = ring
        .gens()
        .iter()
        .map(|g| json!({"name": g.name, "degree": g.degree, "weight": g.weight}))
        .collect();
    let diff: Vec<Value> = x
        .diff()
        .iter()
        .enumerate()
        .map(|(i, v)| json!({"generator": ring.gen(i).name, "value": ring.fmt(v)}))
        .collect();
    json!({"cutoff": x.cutoff(), "generators": gens, "differential": diff})
}

pub fn morphism(f: &FatMorphism) -> Value {
    let (s, t) = (f.src().ring(), f.tgt().ring());
    let images: Vec<Value> = f
        .images()
        .iter()
        .enumerate()
        .map(|(i, v)| json!({"generator": s.gen(i).name, "image": t.fmt(v)}))
        .collect();
    json!({"images": images})
}

pub fn square_zero(r: &SquareZeroReport) -> Value {
    let failure = r.failure.as_ref().map(|f| {
        json!({
            "weight": f.weight,
            "degree": f.degree,
            "generator": f.generator,
            "witness": f.witness,
        })
    });
    json!({"through": r.through, "failure": failure})
}

pub fn morphism_check(r: &MorphismReport) -> Value {
    let failure = r.failure.as_ref().map(|f| {
        json!({"generator": f.generator, "weight": f.weight, "witness": f.witness})
    });
    json!({"through": r.through, "failure": failure})
}

pub fn weq(r: &WeqReport) -> Value {
    let failure = r.failure.as_ref().map(|f| {
        json!({"part": f.part, "degree": f.degree, "dimension": f.dimension})
    });
    json!({
        "verdict": r.verdict.as_str(),
        "base_cone": dims(&r.base),
        "linear_cone": dims(&r.linear),
        "failure": failure,
        "reason": r.reason,
    })
}

/// Human-readable rendering of a report value: one `key: value` per line,
/// nested objects indented.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    text_into(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Object(o) if o.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn text_into(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) if !s.contains('\n') => out.push_str(&format!("{pad}{k}: {s}\n")),
                    Some(s) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for line in s.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    }
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_into(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text_into(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
