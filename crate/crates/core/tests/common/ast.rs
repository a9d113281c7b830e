//! Arbitrary ASTs in the shape the parser produces.

use gpml::syntax::*;
use proptest::prelude::*;

fn name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,3}".prop_filter("keyword", |s| {
        tokenize(s).map(|t| matches!(t[0].kind, TokenKind::Ident(_))).unwrap_or(false)
    })
}

fn ident() -> impl Strategy<Value = Ident> {
    name().prop_map(Ident::new)
}

fn label_name() -> impl Strategy<Value = String> {
    "[A-Z][a-zA-Z]{0,4}".prop_filter("keyword", |s| {
        tokenize(s).map(|t| matches!(t[0].kind, TokenKind::Ident(_))).unwrap_or(false)
    })
}

pub fn label() -> impl Strategy<Value = LabelExpr> {
    let leaf = prop_oneof![4 => label_name().prop_map(LabelExpr::Label), 1 => Just(LabelExpr::Wildcard)];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| LabelExpr::Not(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LabelExpr::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| LabelExpr::Or(Box::new(a), Box::new(b))),
        ]
    })
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        Just(Literal::Null),
        any::<bool>().prop_map(Literal::Bool),
        (0i64..=i64::MAX).prop_map(Literal::Int),
        (0.0f64..1e12).prop_map(Literal::Decimal),
        "[ -~]{0,6}".prop_map(Literal::String),
    ]
}

const COMPARISONS: [BinOp; 6] = [BinOp::Eq, BinOp::Ne, BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge];
const ARITH: [BinOp; 4] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div];
const AGGS: [AggFunc; 5] = [AggFunc::Sum, AggFunc::Count, AggFunc::Avg, AggFunc::Min, AggFunc::Max];

pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        literal().prop_map(Expr::Literal),
        (ident(), name()).prop_map(|(var, key)| Expr::Property { var, key }),
        ident().prop_map(Expr::IsDirected),
        (ident(), ident()).prop_map(|(node, edge)| Expr::IsSourceOf { node, edge }),
        (ident(), ident()).prop_map(|(node, edge)| Expr::IsDestinationOf { node, edge }),
        prop::collection::vec(ident(), 1..4).prop_map(|v| Expr::Same(v, Span::default())),
        prop::collection::vec(ident(), 1..4).prop_map(|v| Expr::AllDifferent(v, Span::default())),
        (prop::sample::select(&AGGS[..]), ident()).prop_map(|(func, v)| Expr::Aggregate {
            func,
            arg: AggArg::Elements(v),
            span: Span::default(),
        }),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Not(Box::new(e))),
            (inner.clone(), any::<bool>()).prop_map(|(e, negated)| Expr::IsNull {
                expr: Box::new(e),
                negated
            }),
            (prop::sample::select(&COMPARISONS[..]), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| Expr::binary(op, a, b)),
            (prop::sample::select(&ARITH[..]), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| Expr::binary(op, a, b)),
            (prop::sample::select(&[BinOp::And, BinOp::Or][..]), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| Expr::binary(op, a, b)),
            (prop::sample::select(&AGGS[..]), inner).prop_map(|(func, e)| Expr::Aggregate {
                func,
                arg: AggArg::Expr(Box::new(e)),
                span: Span::default(),
            }),
        ]
    })
}

fn spec() -> impl Strategy<Value = ElementSpec> {
    (
        prop::option::of(ident()),
        prop::option::of(label()),
        prop::option::weighted(0.2, expr()),
    )
        .prop_map(|(variable, label, filter)| ElementSpec { variable, label, filter })
}

fn quantifier() -> impl Strategy<Value = Quantifier> {
    (0u64..4, prop::option::of(0u64..3)).prop_map(|(min, extra)| Quantifier {
        min,
        max: extra.map(|e| min + e),
    })
}

fn node() -> impl Strategy<Value = PatternTerm> {
    spec().prop_map(|spec| {
        PatternTerm::Node(NodePattern {
            spec,
            span: Span::default(),
        })
    })
}

fn edge() -> impl Strategy<Value = PatternTerm> {
    (
        prop::sample::select(&Orientation::ALL[..]),
        prop::option::of(spec()),
        prop::option::weighted(0.3, quantifier()),
    )
        .prop_map(|(orientation, spec, quantifier)| PatternTerm::Edge {
            edge: EdgePattern {
                orientation,
                spec,
                span: Span::default(),
            },
            quantifier,
        })
}

fn concat(items: Vec<PatternTerm>) -> PatternTerm {
    let mut flat = Vec::new();
    for t in items {
        match t {
            PatternTerm::Concat(ts) => flat.extend(ts),
            other => flat.push(other),
        }
    }
    if flat.len() == 1 {
        flat.pop().unwrap()
    } else {
        PatternTerm::Concat(flat)
    }
}

fn bracket(body: PatternTerm) -> PatternTerm {
    PatternTerm::Paren(Box::new(ParenPattern {
        bracket: Bracket::Square,
        restrictor: None,
        body,
        filter: None,
        repetition: None,
        span: Span::default(),
    }))
}

/// Wraps unions and alternations so they can sit inside a sequence or
/// another operator's branch.
fn as_item(t: PatternTerm) -> PatternTerm {
    match t {
        PatternTerm::Union(_) | PatternTerm::Alternation(_) => bracket(t),
        other => other,
    }
}

pub fn term() -> impl Strategy<Value = PatternTerm> {
    let leaf = prop_oneof![node(), edge()];
    leaf.prop_recursive(4, 16, 4, |inner| {
        prop_oneof![
            3 => prop::collection::vec(inner.clone(), 2..4)
                .prop_map(|ts| concat(ts.into_iter().map(as_item).collect())),
            1 => (any::<bool>(), prop::collection::vec(inner.clone(), 2..4)).prop_map(|(union, ts)| {
                let bs: Vec<PatternTerm> = ts.into_iter().map(as_item).collect();
                if union {
                    PatternTerm::Union(bs)
                } else {
                    PatternTerm::Alternation(bs)
                }
            }),
            2 => (
                any::<bool>(),
                prop::option::of(prop::sample::select(&[Restrictor::Trail, Restrictor::Acyclic, Restrictor::Simple][..])),
                inner,
                prop::option::weighted(0.2, expr()),
                prop::option::of(prop_oneof![
                    Just(Repetition::Optional),
                    quantifier().prop_map(Repetition::Quantified)
                ]),
            )
                .prop_map(|(square, restrictor, body, filter, repetition)| {
                    PatternTerm::Paren(Box::new(ParenPattern {
                        bracket: if square { Bracket::Square } else { Bracket::Round },
                        restrictor,
                        body,
                        filter,
                        repetition,
                        span: Span::default(),
                    }))
                }),
        ]
    })
}

fn selector() -> impl Strategy<Value = Selector> {
    prop_oneof![
        Just(Selector::Any),
        Just(Selector::AnyShortest),
        Just(Selector::AllShortest),
        (1u64..5).prop_map(Selector::AnyK),
        (1u64..5).prop_map(Selector::ShortestK),
        (1u64..5).prop_map(Selector::ShortestKGroup),
    ]
}

fn path() -> impl Strategy<Value = PathPattern> {
    (
        prop::option::of(selector()),
        prop::option::of(prop::sample::select(&[Restrictor::Trail, Restrictor::Acyclic, Restrictor::Simple][..])),
        prop::option::weighted(0.3, ident()),
        term(),
    )
        .prop_map(|(selector, restrictor, variable, body)| PathPattern {
            selector,
            restrictor,
            variable,
            body,
            span: Span::default(),
        })
}

pub fn query() -> impl Strategy<Value = Query> {
    (prop::collection::vec(path(), 1..3), prop::option::weighted(0.3, expr()))
        .prop_map(|(paths, filter)| Query { paths, filter })
}
