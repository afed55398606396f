use proptest::prelude::*;
use shlr_cli::dsl::{parse_model, print_model};

fn ident() -> impl Strategy<Value = String> {
    ("[a-z][a-z0-9_]{0,3}", 0usize..2).prop_map(|(s, p)| format!("{s}{}", "'".repeat(p)))
}

fn expr() -> impl Strategy<Value = String> {
    let atom = prop_oneof![
        (0u64..30).prop_map(|n| n.to_string()),
        (1u64..9, 2u64..9).prop_map(|(a, b)| format!("{a}/{b}")),
        ident(),
        (ident(), 2u32..4).prop_map(|(v, e)| format!("{v}^{e}")),
        ident().prop_map(|v| format!("D[{v}]")),
    ];
    atom.prop_recursive(2, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(|v| v.join("*")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
            (inner.clone(), 2u32..3).prop_map(|(a, e)| format!("({a})^{e}")),
        ]
    })
}

fn block() -> impl Strategy<Value = String> {
    let stmt = prop_oneof![
        (ident(), -4i32..3).prop_map(|(g, d)| format!("{g} : {d};")),
        (ident(), expr()).prop_map(|(g, e)| format!("d {g} = {e};")),
    ];
    let stmts = prop::collection::vec(stmt, 0..4).prop_map(|v| v.join(" "));
    let bracket = prop_oneof![
        (prop::collection::vec(ident(), 1..3), expr()).prop_map(|(a, e)| format!("[{}] = {e};", a.join(","))),
        (prop::collection::vec(ident(), 1..3), expr()).prop_map(|(a, e)| format!("anchor({}) = {e};", a.join(","))),
    ];
    let config = prop_oneof![
        (0i64..5).prop_map(|n| format!("weight_cutoff = {n};")),
        (-6i32..0, 0i32..4).prop_map(|(a, b)| format!("degree_window = {a}:{b};")),
        (0i64..100).prop_map(|n| format!("seed = {n};")),
    ];
    prop_oneof![
        (ident(), stmts.clone()).prop_map(|(n, s)| format!("algebra {n} {{ {s} }}")),
        (ident(), ident(), stmts.clone()).prop_map(|(n, o, s)| format!("module {n} over {o} {{ {s} }}")),
        (ident(), ident(), 0u32..4, stmts).prop_map(|(n, o, c, s)| format!("cdga {n} over {o} cutoff {c} {{ {s} }}")),
        (ident(), prop::collection::vec(bracket, 0..3)).prop_map(|(n, b)| format!("brackets {n} {{ {} }}", b.join(" "))),
        (ident(), ident(), ident(), prop::collection::vec((ident(), expr()), 0..3)).prop_map(|(n, s, t, m)| {
            let maps: Vec<String> = m.into_iter().map(|(g, e)| format!("{g} -> {e};")).collect();
            format!("morphism {n} : {s} -> {t} {{ {} }}", maps.join(" "))
        }),
        prop::collection::vec(config, 0..3).prop_map(|c| format!("config {{ {} }}", c.join(" "))),
    ]
}

proptest! {
    #[test]
    fn model_print_parse_fixpoint(blocks in prop::collection::vec(block(), 0..5)) {
        let src = blocks.join("\n# comment\n");
        let ast = parse_model(&src).unwrap();
        let printed = print_model(&ast);
        let again = parse_model(&printed).unwrap();
        prop_assert_eq!(&again, &ast);
        prop_assert_eq!(print_model(&again), printed);
    }
}
