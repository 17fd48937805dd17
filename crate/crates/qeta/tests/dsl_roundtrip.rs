//! Print/parse round-trips over generated programs, and crash-freedom on
//! arbitrary input.

use proptest::prelude::*;
use qeta::dsl::{Assertion, Expr, Program, RationalLit, Stmt};
use qeta::parse_program;

/// Identifiers that survive lexing intact: no keywords, and no `U` directly
/// followed by digits (which splits into the operator and a number).
fn name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["F", "A", "G", "Xx", "y2", "zed", "Uq", "q_x"])
        .prop_map(str::to_string)
}

fn rational() -> impl Strategy<Value = RationalLit> {
    (-50i64..50, 1u64..30).prop_map(|(numer, denom)| RationalLit { numer, denom })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (1u64..100).prop_map(|delta| Expr::Eta { delta }),
        name().prop_map(Expr::Name),
        (0u64..1000).prop_map(Expr::Number),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| Expr::Mul(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| Expr::Div(Box::new(l), Box::new(r))),
            (inner.clone(), -9i64..10).prop_map(|(b, e)| Expr::Pow(Box::new(b), e)),
            (2u64..10, inner).prop_map(|(p, e)| Expr::U { p, inner: Box::new(e) }),
        ]
    })
}

fn assertion() -> impl Strategy<Value = Assertion> {
    prop_oneof![
        name().prop_map(|name| Assertion::Modular { name }),
        (name(), prop::collection::vec(rational(), 1..5))
            .prop_map(|(name, expected)| Assertion::Orders { name, expected }),
        (name(), 1u64..10, 0u32..6, 0u64..100_000).prop_map(|(name, base, alpha, upto)| {
            Assertion::Congruence { name, base, alpha, upto }
        }),
        (expr(), expr(), 0u64..5000)
            .prop_map(|(lhs, rhs, terms)| Assertion::Identity { lhs, rhs, terms }),
    ]
}

fn stmt() -> impl Strategy<Value = Stmt> {
    prop_oneof![
        (name(), expr(), 1u64..2000)
            .prop_map(|(name, expr, level)| Stmt::Let { name, expr, level }),
        assertion().prop_map(Stmt::Assert),
    ]
}

fn program() -> impl Strategy<Value = Program> {
    prop::collection::vec(stmt(), 0..12).prop_map(|statements| Program { statements })
}

/// Fragments that lex but combine into mostly invalid programs, to push the
/// parser through its error paths.
fn token_soup() -> impl Strategy<Value = String> {
    let fragment = prop::sample::select(vec![
        "let", "assert", "eta", "modular", "orders", "congruence", "base", "alpha", "upto",
        "to", "terms", "level", "(", ")", "[", "]", "==", "=", "^", "*", "/", "@", "-", ",",
        "U3", "U", "9z", "z", "F", "G", "1", "0", "42", "#note", "\n",
    ]);
    prop::collection::vec(fragment, 0..30).prop_map(|v| v.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_the_identity(program in program()) {
        let printed = program.to_string();
        let reparsed = parse_program(&printed);
        prop_assert_eq!(reparsed.as_ref(), Ok(&program), "printed form:\n{}", printed);
    }

    #[test]
    fn arbitrary_text_never_crashes_the_parser(source in ".{0,80}") {
        if let Err(diagnostic) = parse_program(&source) {
            prop_assert!(diagnostic.line >= 1);
            prop_assert!(diagnostic.column >= 1);
        }
    }

    #[test]
    fn token_soup_never_crashes_the_parser(source in token_soup()) {
        if let Err(diagnostic) = parse_program(&source) {
            prop_assert!(diagnostic.line >= 1);
            prop_assert!(diagnostic.column >= 1);
        }
    }
}

#[test]
fn diagnostics_point_into_the_source() {
    let source = "let F = eta(9z) @ level 9\nlet G = eta(3z) ^ @ level 2\n";
    let err = parse_program(source).unwrap_err();
    assert_eq!(err.line, 2);
    let lines: Vec<&str> = source.lines().collect();
    let line = lines[err.line - 1];
    assert!(err.column <= line.len() + 1, "column {} beyond line '{line}'", err.column);
}
