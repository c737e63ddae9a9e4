use num_bigint::BigInt;
use proptest::prelude::*;

use orelab_cli::ast::{Ast, BinOp, Func, SeqLit, SeqTail};
use orelab_cli::parse;

fn seq_lit() -> impl Strategy<Value = SeqLit> {
    let ints = || prop::collection::vec((-9i64..10).prop_map(BigInt::from), 0..4);
    let tail = prop_oneof![
        (-9i64..10).prop_map(|c| SeqTail::Const(c.into())),
        prop::collection::vec((-9i64..10).prop_map(BigInt::from), 1..4).prop_map(SeqTail::Period),
    ];
    (ints(), tail).prop_map(|(prefix, tail)| SeqLit { prefix, tail })
}

fn leaf() -> impl Strategy<Value = Ast> {
    prop_oneof![
        (0u64..1000).prop_map(|n| Ast::Int(n.into())),
        prop::sample::select(vec!["x", "y", "u", "uvx", "E01", "S", "theta", "x1"])
            .prop_map(|s| Ast::Sym(s.to_string())),
        seq_lit().prop_map(Ast::Seq),
        prop::collection::vec((0usize..5, seq_lit()), 0..3).prop_map(Ast::Band),
    ]
}

fn ast() -> impl Strategy<Value = Ast> {
    leaf().prop_recursive(5, 48, 4, |inner| {
        let op = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul]);
        let func = prop::sample::select(vec![Func::Sigma, Func::Delta, Func::Theta, Func::Transpose]);
        prop_oneof![
            (op, inner.clone(), inner.clone()).prop_map(|(o, l, r)| Ast::bin(o, l, r)),
            inner.clone().prop_map(|a| Ast::Neg(Box::new(a))),
            (inner.clone(), 0u32..6).prop_map(|(a, n)| Ast::Pow(Box::new(a), n)),
            (func, inner.clone()).prop_map(|(f, a)| Ast::Call(f, Box::new(a))),
            prop::collection::vec(inner.clone(), 0..4).prop_map(Ast::List),
            (prop::collection::vec(inner, 0..4), 1usize..10).prop_map(|(v, n)| Ast::Series(v, n)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_then_parse_is_identity(a in ast()) {
        let printed = a.to_string();
        let back = parse(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), printed);
    }
}
