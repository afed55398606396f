//! Canonical text form of a model file. `parse_model(print_model(m)) == m`.

use std::fmt::Write;

use super::ast::*;

pub fn print_model(m: &ModelFile) -> String {
    let blocks: Vec<String> = m.items.iter().map(print_item).collect();
    let mut out = blocks.join("\n");
    if !out.is_empty() && !out.ends_with('\n') {
        out.push('\n');
    }
    out
}

fn print_item(item: &Item) -> String {
    let mut s = String::new();
    match item {
        Item::Algebra(b) => print_block(&mut s, "algebra", b),
        Item::Module(b) => print_block(&mut s, "module", b),
        Item::Cdga(b) => print_block(&mut s, "cdga", b),
        Item::Brackets(b) => {
            let _ = writeln!(s, "brackets {} {{", b.module.name);
            for st in &b.stmts {
                let (open, close, args, value) = match st {
                    BracketStmt::Bracket { args, value } => ("[", "]", args, value),
                    BracketStmt::Anchor { args, value } => ("anchor(", ")", args, value),
                };
                let names: Vec<&str> = args.iter().map(|a| a.name.as_str()).collect();
                let _ = writeln!(s, "  {open}{}{close} = {};", names.join(", "), print_expr(value));
            }
            s.push_str("}\n");
        }
        Item::Morphism(b) => {
            let _ = writeln!(s, "morphism {} : {} -> {} {{", b.name.name, b.src.name, b.tgt.name);
            for (g, e) in &b.maps {
                let _ = writeln!(s, "  {} -> {};", g.name, print_expr(e));
            }
            s.push_str("}\n");
        }
        Item::Config(b) => {
            s.push_str("config {\n");
            for (k, v) in &b.entries {
                let v = match v {
                    ConfigValue::Int(n) => n.to_string(),
                    ConfigValue::Range(lo, hi) => format!("{lo}:{hi}"),
                };
                let _ = writeln!(s, "  {} = {v};", k.name);
            }
            s.push_str("}\n");
        }
    }
    s
}

fn print_block(s: &mut String, kw: &str, b: &Block) {
    let _ = write!(s, "{kw} {}", b.name.name);
    if let Some(o) = &b.over {
        let _ = write!(s, " over {}", o.name);
    }
    if let Some(c) = b.cutoff {
        let _ = write!(s, " cutoff {c}");
    }
    s.push_str(" {\n");
    for st in &b.stmts {
        match st {
            Stmt::Gen { name, degree } => {
                let _ = writeln!(s, "  {} : {degree};", name.name);
            }
            Stmt::Diff { name, value } => {
                let _ = writeln!(s, "  d {} = {};", name.name, print_expr(value));
            }
        }
    }
    s.push_str("}\n");
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    for (i, t) in e.terms.iter().enumerate() {
        match (i, t.negative) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        let fs: Vec<String> = t.factors.iter().map(print_factor).collect();
        s.push_str(&fs.join("*"));
    }
    s
}

fn print_factor(f: &Factor) -> String {
    let pow = |e: u32| if e == 1 { String::new() } else { format!("^{e}") };
    match f {
        Factor::Number { num, den, .. } if *den == 1 => num.to_string(),
        Factor::Number { num, den, .. } => format!("{num}/{den}"),
        Factor::Var { name, exp } => format!("{}{}", name.name, pow(*exp)),
        Factor::Group { expr, exp, .. } => format!("({}){}", print_expr(expr), pow(*exp)),
        Factor::Deriv(g) => format!("D[{}]", g.name),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse_expr, parse_model};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_text_is_a_fixpoint() {
        let src = "algebra A {\n  x : 0;\n  y : -1;\n  d y = x^2;\n}\n\nconfig {\n  degree_window = -6:2;\n}\n";
        let m = parse_model(src).unwrap();
        assert_eq!(print_model(&m), src);
    }

    #[test]
    fn messy_input_normalises() {
        let m = parse_model("algebra A{x:0;d x=+ 1/2*x^1-( x )^2;}").unwrap();
        let text = print_model(&m);
        assert_eq!(text, "algebra A {\n  x : 0;\n  d x = 1/2*x - (x)^2;\n}\n");
        assert_eq!(parse_model(&text).unwrap(), m);
    }

    fn arb_expr() -> impl Strategy<Value = String> {
        let atom = prop_oneof![
            (1u64..20).prop_map(|n| n.to_string()),
            (1u64..9, 1u64..9).prop_map(|(a, b)| format!("{a}/{b}")),
            prop::sample::select(vec!["x", "y'", "e_1"]).prop_map(str::to_string),
            (prop::sample::select(vec!["x", "z"]), 2u32..4).prop_map(|(v, e)| format!("{v}^{e}")),
            prop::sample::select(vec!["D[x]", "D[y]"]).prop_map(str::to_string),
        ];
        atom.prop_recursive(3, 24, 4, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
                (inner.clone(), inner.clone(), any::<bool>())
                    .prop_map(|(a, b, neg)| format!("{a} {} ({b})", if neg { "-" } else { "+" })),
                inner.prop_map(|a| format!("-({a})^2")),
            ]
        })
    }

    proptest! {
        #[test]
        fn expression_print_parse_fixpoint(src in arb_expr()) {
            let e = parse_expr(&src).unwrap();
            let printed = print_expr(&e);
            let again = parse_expr(&printed).unwrap();
            prop_assert_eq!(&again, &e);
            prop_assert_eq!(print_expr(&again), printed);
        }
    }
}
