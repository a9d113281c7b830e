//! Three-valued predicate and value evaluation.

use std::cmp::Ordering;

use crate::graph::{Element, Endpoints, PropertyGraph, Value};
use crate::syntax::{AggArg, AggFunc, BinOp, Expr, Literal};

/// What a variable reference denotes in the current context.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    /// A singleton; `None` when it is an unbound conditional.
    Single(Option<Element>),
    Group(Vec<Element>),
}

/// Supplies variable bindings to the evaluator.
pub trait Env {
    fn lookup(&self, var: &str) -> Bound;
}

/// Rebinds one group variable to a single element while an aggregate
/// iterates over it.
struct Overlay<'a> {
    base: &'a dyn Env,
    var: &'a str,
    elem: Element,
}

impl Env for Overlay<'_> {
    fn lookup(&self, var: &str) -> Bound {
        if var == self.var {
            Bound::Single(Some(self.elem))
        } else {
            self.base.lookup(var)
        }
    }
}

fn single(env: &dyn Env, var: &str) -> Option<Element> {
    match env.lookup(var) {
        Bound::Single(e) => e,
        Bound::Group(_) => None,
    }
}

/// Evaluates a predicate: `Some(true)`, `Some(false)` or `None` (UNKNOWN).
pub fn eval_bool(expr: &Expr, env: &dyn Env, graph: &PropertyGraph) -> Option<bool> {
    match eval_value(expr, env, graph) {
        Value::Bool(b) => Some(b),
        _ => None,
    }
}

/// A WHERE clause keeps a row only when it is TRUE.
pub fn holds(expr: &Expr, env: &dyn Env, graph: &PropertyGraph) -> bool {
    eval_bool(expr, env, graph) == Some(true)
}

fn truth(v: Option<bool>) -> Value {
    v.map(Value::Bool).unwrap_or(Value::Null)
}

fn as_truth(v: Value) -> Option<bool> {
    match v {
        Value::Bool(b) => Some(b),
        _ => None,
    }
}

pub fn eval_value(expr: &Expr, env: &dyn Env, graph: &PropertyGraph) -> Value {
    match expr {
        Expr::Literal(l) => match l {
            Literal::Null => Value::Null,
            Literal::Bool(b) => Value::Bool(*b),
            Literal::Int(i) => Value::Int(*i),
            Literal::Decimal(d) => Value::Decimal(*d),
            Literal::String(s) => Value::String(s.clone()),
        },
        Expr::Property { var, key } => match single(env, &var.name) {
            Some(e) => graph.property(e, key),
            None => Value::Null,
        },
        Expr::Neg(x) => match eval_value(x, env, graph) {
            Value::Int(i) => i.checked_neg().map(Value::Int).unwrap_or(Value::Decimal(-(i as f64))),
            Value::Decimal(d) => Value::Decimal(-d),
            _ => Value::Null,
        },
        Expr::Not(x) => truth(as_truth(eval_value(x, env, graph)).map(|b| !b)),
        Expr::Binary { op: BinOp::And, lhs, rhs } => {
            let l = as_truth(eval_value(lhs, env, graph));
            if l == Some(false) {
                return Value::Bool(false);
            }
            match (l, as_truth(eval_value(rhs, env, graph))) {
                (_, Some(false)) => Value::Bool(false),
                (Some(true), Some(true)) => Value::Bool(true),
                _ => Value::Null,
            }
        }
        Expr::Binary { op: BinOp::Or, lhs, rhs } => {
            let l = as_truth(eval_value(lhs, env, graph));
            if l == Some(true) {
                return Value::Bool(true);
            }
            match (l, as_truth(eval_value(rhs, env, graph))) {
                (_, Some(true)) => Value::Bool(true),
                (Some(false), Some(false)) => Value::Bool(false),
                _ => Value::Null,
            }
        }
        Expr::Binary { op, lhs, rhs } if op.is_comparison() => {
            let l = eval_value(lhs, env, graph);
            let r = eval_value(rhs, env, graph);
            truth(l.compare(&r).map(|o| match op {
                BinOp::Eq => o == Ordering::Equal,
                BinOp::Ne => o != Ordering::Equal,
                BinOp::Lt => o == Ordering::Less,
                BinOp::Le => o != Ordering::Greater,
                BinOp::Gt => o == Ordering::Greater,
                _ => o != Ordering::Less,
            }))
        }
        Expr::Binary { op, lhs, rhs } => arith(*op, eval_value(lhs, env, graph), eval_value(rhs, env, graph)),
        Expr::IsNull { expr, negated } => Value::Bool(eval_value(expr, env, graph).is_null() != *negated),
        Expr::IsDirected(v) => match single(env, &v.name) {
            Some(Element::Edge(e)) => Value::Bool(graph.edge(e).is_directed()),
            _ => Value::Null,
        },
        Expr::IsSourceOf { node, edge } | Expr::IsDestinationOf { node, edge } => {
            match (single(env, &node.name), single(env, &edge.name)) {
                (Some(Element::Node(n)), Some(Element::Edge(e))) => Value::Bool(match graph.edge(e).endpoints {
                    Endpoints::Directed { src, dst } => {
                        if matches!(expr, Expr::IsSourceOf { .. }) {
                            src == n
                        } else {
                            dst == n
                        }
                    }
                    Endpoints::Undirected(..) => false,
                }),
                _ => Value::Null,
            }
        }
        Expr::Same(vars, _) | Expr::AllDifferent(vars, _) => {
            let elems: Option<Vec<Element>> = vars.iter().map(|v| single(env, &v.name)).collect();
            let Some(elems) = elems else { return Value::Null };
            Value::Bool(if matches!(expr, Expr::Same(..)) {
                elems.windows(2).all(|w| w[0] == w[1])
            } else {
                let mut sorted = elems.clone();
                sorted.sort();
                sorted.dedup();
                sorted.len() == elems.len()
            })
        }
        Expr::Aggregate { func, arg, .. } => aggregate(*func, arg, env, graph),
    }
}

fn arith(op: BinOp, l: Value, r: Value) -> Value {
    if let (Value::Int(a), Value::Int(b)) = (&l, &r) {
        let exact = match op {
            BinOp::Add => a.checked_add(*b),
            BinOp::Sub => a.checked_sub(*b),
            BinOp::Mul => a.checked_mul(*b),
            _ => None,
        };
        if let Some(v) = exact {
            return Value::Int(v);
        }
    }
    let (Some(a), Some(b)) = (l.as_f64(), r.as_f64()) else {
        return Value::Null;
    };
    match op {
        BinOp::Add => Value::Decimal(a + b),
        BinOp::Sub => Value::Decimal(a - b),
        BinOp::Mul => Value::Decimal(a * b),
        _ if b == 0.0 => Value::Null,
        _ => Value::Decimal(a / b),
    }
}

/// The single group variable an aggregate ranges over.
fn group_var<'a>(arg: &'a AggArg, env: &dyn Env) -> Option<&'a str> {
    match arg {
        AggArg::Elements(v) => Some(&v.name),
        AggArg::Expr(e) => {
            let mut found = None;
            e.visit_vars(&mut |v, _| {
                if found.is_none() && matches!(env.lookup(&v.name), Bound::Group(_)) {
                    found = Some(v.name.as_str());
                }
            });
            found
        }
    }
}

fn aggregate(func: AggFunc, arg: &AggArg, env: &dyn Env, graph: &PropertyGraph) -> Value {
    let Some(var) = group_var(arg, env) else {
        return Value::Null;
    };
    let elems = match env.lookup(var) {
        Bound::Group(g) => g,
        Bound::Single(Some(e)) => vec![e],
        Bound::Single(None) => Vec::new(),
    };
    let values: Vec<Value> = match arg {
        // `v.*` counts elements; other functions over it yield null
        AggArg::Elements(_) if func == AggFunc::Count => return Value::Int(elems.len() as i64),
        AggArg::Elements(_) => return Value::Null,
        AggArg::Expr(e) => elems
            .iter()
            .map(|&elem| eval_value(e, &Overlay { base: env, var, elem }, graph))
            .filter(|v| !v.is_null())
            .collect(),
    };
    fold(func, values)
}

/// Folds non-null values. Empty input: COUNT is 0, everything else null.
pub fn fold(func: AggFunc, values: Vec<Value>) -> Value {
    match func {
        AggFunc::Count => Value::Int(values.len() as i64),
        _ if values.is_empty() => Value::Null,
        AggFunc::Sum => values.into_iter().reduce(|a, b| arith(BinOp::Add, a, b)).unwrap(),
        AggFunc::Avg => {
            let n = values.len() as f64;
            match values.into_iter().reduce(|a, b| arith(BinOp::Add, a, b)).unwrap().as_f64() {
                Some(s) => Value::Decimal(s / n),
                None => Value::Null,
            }
        }
        AggFunc::Min | AggFunc::Max => {
            let want = if func == AggFunc::Min { Ordering::Less } else { Ordering::Greater };
            let mut best = values[0].clone();
            for v in &values[1..] {
                match v.compare(&best) {
                    Some(o) if o == want => best = v.clone(),
                    Some(_) => {}
                    None => return Value::Null,
                }
            }
            best
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixture;
    use crate::syntax::parse;
    use std::collections::HashMap;

    struct Map(HashMap<String, Bound>);

    impl Env for Map {
        fn lookup(&self, var: &str) -> Bound {
            self.0.get(var).cloned().unwrap_or(Bound::Single(None))
        }
    }

    fn where_of(q: &str) -> Expr {
        parse(q).unwrap().filter.unwrap()
    }

    fn env(g: &PropertyGraph, pairs: &[(&str, &[&str])], groups: &[&str]) -> Map {
        Map(pairs
            .iter()
            .map(|(k, ids)| {
                let elems: Vec<Element> = ids.iter().map(|i| g.lookup(i).unwrap()).collect();
                let b = if groups.contains(k) {
                    Bound::Group(elems)
                } else {
                    Bound::Single(elems.first().copied())
                };
                (k.to_string(), b)
            })
            .collect())
    }

    #[test]
    fn comparisons_and_nulls() {
        let g = fixture();
        let e = env(&g, &[("x", &["a1"])], &[]);
        assert_eq!(eval_bool(&where_of("MATCH (x) WHERE x.isBlocked='no'"), &e, &g), Some(true));
        // p is an unbound conditional
        let q = where_of("MATCH (x) WHERE p.isBlocked='yes'");
        assert_eq!(eval_bool(&q, &e, &g), None);
        let q = where_of("MATCH (x) WHERE p.isBlocked='yes' OR x.owner='Scott'");
        assert_eq!(eval_bool(&q, &e, &g), Some(true));
        let q = where_of("MATCH (x) WHERE x.missing = 1 AND FALSE");
        assert_eq!(eval_bool(&q, &e, &g), Some(false));
        assert_eq!(eval_bool(&where_of("MATCH (x) WHERE x.missing IS NULL"), &e, &g), Some(true));
        assert_eq!(eval_bool(&where_of("MATCH (x) WHERE x.owner = 5"), &e, &g), None);
    }

    #[test]
    fn graphical_predicates() {
        let g = fixture();
        let e = env(&g, &[("e", &["hp3"]), ("a", &["a3"]), ("t", &["t1"]), ("s", &["a1"])], &[]);
        assert_eq!(eval_bool(&where_of("MATCH (x) WHERE e IS DIRECTED"), &e, &g), Some(false));
        assert_eq!(eval_bool(&where_of("MATCH (x) WHERE a IS SOURCE OF e"), &e, &g), Some(false));
        assert_eq!(eval_bool(&where_of("MATCH (x) WHERE t IS DIRECTED"), &e, &g), Some(true));
        assert_eq!(eval_bool(&where_of("MATCH (x) WHERE s IS SOURCE OF t"), &e, &g), Some(true));
        assert_eq!(eval_bool(&where_of("MATCH (x) WHERE a IS DESTINATION OF t"), &e, &g), Some(true));
        assert_eq!(eval_bool(&where_of("MATCH (x) WHERE SAME(a, s)"), &e, &g), Some(false));
        assert_eq!(eval_bool(&where_of("MATCH (x) WHERE ALL_DIFFERENT(a, s, t)"), &e, &g), Some(true));
    }

    #[test]
    fn aggregates() {
        let g = fixture();
        let e = env(&g, &[("t", &["t4", "t5", "t2", "t3"]), ("u", &["t1"]), ("z", &[])], &["t", "u", "z"]);
        let v = |q: &str| eval_value(&where_of(q), &e, &g);
        // oracle: sum the fixture amounts directly
        let expected: i64 = ["t4", "t5", "t2", "t3"]
            .iter()
            .map(|id| match g.property(g.lookup(id).unwrap(), "amount") {
                Value::Int(i) => i,
                _ => unreachable!(),
            })
            .sum();
        assert_eq!(v("MATCH (x) WHERE SUM(t.amount)"), Value::Int(expected));
        assert_eq!(expected, 37_000_000);
        assert_eq!(v("MATCH (x) WHERE AVG(u.amount)"), Value::Decimal(8_000_000.0));
        assert_eq!(v("MATCH (x) WHERE COUNT(z.*)"), Value::Int(0));
        assert_eq!(v("MATCH (x) WHERE SUM(z.amount)"), Value::Null);
        assert_eq!(v("MATCH (x) WHERE MAX(t.amount)"), Value::Int(10_000_000));
        assert_eq!(v("MATCH (x) WHERE MIN(t.amount)"), Value::Int(7_000_000));
        assert_eq!(v("MATCH (x) WHERE COUNT(t.*)"), Value::Int(4));
        assert_eq!(v("MATCH (x) WHERE COUNT(t.nothing)"), Value::Int(0));
        assert_eq!(
            v("MATCH (x) WHERE COUNT(t.*)/(COUNT(t.*)+1)"),
            Value::Decimal(0.8)
        );
    }

    #[test]
    fn arithmetic() {
        assert_eq!(arith(BinOp::Add, Value::Int(2), Value::Int(3)), Value::Int(5));
        assert_eq!(arith(BinOp::Div, Value::Int(1), Value::Int(0)), Value::Null);
        assert_eq!(arith(BinOp::Div, Value::Int(3), Value::Int(2)), Value::Decimal(1.5));
        assert_eq!(arith(BinOp::Mul, Value::Int(i64::MAX), Value::Int(2)), Value::Decimal(i64::MAX as f64 * 2.0));
        assert_eq!(arith(BinOp::Add, Value::from("a"), Value::Int(1)), Value::Null);
    }
}
