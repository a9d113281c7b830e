use std::fmt::Write;

use super::ast::*;

/// Canonical text of a query. Parsing the result yields an equal AST.
pub fn render(query: &Query) -> String {
    let mut out = String::from("MATCH ");
    for (i, p) in query.paths.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        path_pattern(&mut out, p);
    }
    if let Some(f) = &query.filter {
        out.push_str(" WHERE ");
        expr(&mut out, f);
    }
    out
}

pub fn render_term(term: &PatternTerm) -> String {
    let mut out = String::new();
    pattern(&mut out, term);
    out
}

pub fn render_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr(&mut out, e);
    out
}

pub fn render_label(l: &LabelExpr) -> String {
    let mut out = String::new();
    label(&mut out, l, 0);
    out
}

pub fn selector_text(s: Selector) -> String {
    match s {
        Selector::AnyShortest => "ANY SHORTEST".into(),
        Selector::AllShortest => "ALL SHORTEST".into(),
        Selector::Any => "ANY".into(),
        Selector::AnyK(k) => format!("ANY {k}"),
        Selector::ShortestK(k) => format!("SHORTEST {k}"),
        Selector::ShortestKGroup(k) => format!("SHORTEST {k} GROUP"),
    }
}

pub fn restrictor_text(r: Restrictor) -> &'static str {
    match r {
        Restrictor::Trail => "TRAIL",
        Restrictor::Acyclic => "ACYCLIC",
        Restrictor::Simple => "SIMPLE",
    }
}

pub fn quantifier_text(q: Quantifier) -> String {
    match (q.min, q.max) {
        (0, None) => "*".into(),
        (1, None) => "+".into(),
        (m, None) => format!("{{{m},}}"),
        (m, Some(n)) => format!("{{{m},{n}}}"),
    }
}

fn path_pattern(out: &mut String, p: &PathPattern) {
    if let Some(s) = p.selector {
        out.push_str(&selector_text(s));
        out.push(' ');
    }
    if let Some(r) = p.restrictor {
        out.push_str(restrictor_text(r));
        out.push(' ');
    }
    if let Some(v) = &p.variable {
        let _ = write!(out, "{} = ", v.name);
    }
    pattern(out, &p.body);
}

fn is_atom(t: &PatternTerm) -> bool {
    matches!(t, PatternTerm::Node(_) | PatternTerm::Edge { .. })
}

fn pattern(out: &mut String, t: &PatternTerm) {
    match t {
        PatternTerm::Node(n) => {
            out.push('(');
            spec(out, &n.spec);
            out.push(')');
        }
        PatternTerm::Edge { edge, quantifier } => {
            match &edge.spec {
                None => out.push_str(edge.orientation.abbreviation()),
                Some(s) => {
                    let (open, close) = edge.orientation.delimiters();
                    out.push_str(open);
                    spec(out, s);
                    out.push_str(close);
                }
            }
            if let Some(q) = quantifier {
                out.push_str(&quantifier_text(*q));
            }
        }
        PatternTerm::Paren(p) => {
            let (open, close) = match p.bracket {
                Bracket::Round => ('(', ')'),
                Bracket::Square => ('[', ']'),
            };
            out.push(open);
            if let Some(r) = p.restrictor {
                out.push_str(restrictor_text(r));
                out.push(' ');
            }
            pattern(out, &p.body);
            if let Some(f) = &p.filter {
                out.push_str(" WHERE ");
                expr(out, f);
            }
            out.push(close);
            match p.repetition {
                Some(Repetition::Optional) => out.push('?'),
                Some(Repetition::Quantified(q)) => out.push_str(&quantifier_text(q)),
                None => {}
            }
        }
        PatternTerm::Concat(items) => {
            for (i, item) in items.iter().enumerate() {
                // Nodes and edges abut; everything else is space separated,
                // which also keeps `-` from fusing with a following `[`.
                if i > 0 && !(is_atom(&items[i - 1]) && is_atom(item)) {
                    out.push(' ');
                }
                pattern(out, item);
            }
        }
        PatternTerm::Union(branches) | PatternTerm::Alternation(branches) => {
            let sep = if matches!(t, PatternTerm::Union(_)) { " | " } else { " |+| " };
            for (i, b) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                pattern(out, b);
            }
        }
    }
}

fn spec(out: &mut String, s: &ElementSpec) {
    if let Some(v) = &s.variable {
        out.push_str(&v.name);
    }
    if let Some(l) = &s.label {
        out.push(':');
        label(out, l, 0);
    }
    if let Some(f) = &s.filter {
        if s.variable.is_some() || s.label.is_some() {
            out.push(' ');
        }
        out.push_str("WHERE ");
        expr(out, f);
    }
}

/// `min`: 0 accepts anything, 1 needs `&` or tighter, 2 needs a primary.
fn label(out: &mut String, l: &LabelExpr, min: u8) {
    let prec = match l {
        LabelExpr::Or(..) => 0,
        LabelExpr::And(..) => 1,
        _ => 2,
    };
    if prec < min {
        out.push('(');
    }
    match l {
        LabelExpr::Label(name) => out.push_str(name),
        LabelExpr::Wildcard => out.push('%'),
        LabelExpr::Not(e) => {
            out.push('!');
            label(out, e, 2);
        }
        LabelExpr::And(a, b) => {
            label(out, a, 1);
            out.push('&');
            label(out, b, 2);
        }
        LabelExpr::Or(a, b) => {
            label(out, a, 0);
            out.push('|');
            label(out, b, 1);
        }
    }
    if prec < min {
        out.push(')');
    }
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Binary { op: BinOp::Or, .. } => 1,
        Expr::Binary { op: BinOp::And, .. } => 2,
        Expr::Not(_) => 3,
        Expr::Binary { op, .. } if op.is_comparison() => 4,
        Expr::IsNull { .. } | Expr::IsDirected(_) | Expr::IsSourceOf { .. } | Expr::IsDestinationOf { .. } => 4,
        Expr::Binary { op: BinOp::Add | BinOp::Sub, .. } => 5,
        Expr::Binary { .. } => 6,
        Expr::Neg(_) => 7,
        _ => 8,
    }
}

fn expr(out: &mut String, e: &Expr) {
    expr_min(out, e, 0)
}

fn expr_min(out: &mut String, e: &Expr, min: u8) {
    let prec = precedence(e);
    if prec < min {
        out.push('(');
    }
    match e {
        Expr::Literal(l) => literal(out, l),
        Expr::Property { var, key } => {
            let _ = write!(out, "{}.{}", var.name, key);
        }
        Expr::Neg(inner) => {
            out.push('-');
            expr_min(out, inner, 7);
        }
        Expr::Not(inner) => {
            out.push_str("NOT ");
            expr_min(out, inner, 3);
        }
        Expr::Binary { op, lhs, rhs } => {
            let (l, r) = if op.is_comparison() { (5, 5) } else { (prec, prec + 1) };
            expr_min(out, lhs, l);
            let _ = write!(out, " {} ", op.symbol());
            expr_min(out, rhs, r);
        }
        Expr::IsNull { expr: inner, negated } => {
            expr_min(out, inner, 5);
            out.push_str(if *negated { " IS NOT NULL" } else { " IS NULL" });
        }
        Expr::IsDirected(v) => {
            let _ = write!(out, "{} IS DIRECTED", v.name);
        }
        Expr::IsSourceOf { node, edge } => {
            let _ = write!(out, "{} IS SOURCE OF {}", node.name, edge.name);
        }
        Expr::IsDestinationOf { node, edge } => {
            let _ = write!(out, "{} IS DESTINATION OF {}", node.name, edge.name);
        }
        Expr::Same(vars, _) | Expr::AllDifferent(vars, _) => {
            out.push_str(if matches!(e, Expr::Same(..)) { "SAME(" } else { "ALL_DIFFERENT(" });
            let names: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
            out.push_str(&names.join(", "));
            out.push(')');
        }
        Expr::Aggregate { func, arg, .. } => {
            out.push_str(func.name());
            out.push('(');
            match arg {
                AggArg::Elements(v) => {
                    let _ = write!(out, "{}.*", v.name);
                }
                AggArg::Expr(inner) => expr(out, inner),
            }
            out.push(')');
        }
    }
    if prec < min {
        out.push(')');
    }
}

fn literal(out: &mut String, l: &Literal) {
    match l {
        Literal::Null => out.push_str("NULL"),
        Literal::Bool(true) => out.push_str("TRUE"),
        Literal::Bool(false) => out.push_str("FALSE"),
        Literal::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Literal::Decimal(d) => out.push_str(&decimal_text(*d)),
        Literal::String(s) => {
            out.push('\'');
            out.push_str(&s.replace('\'', "''"));
            out.push('\'');
        }
    }
}

/// Shortest round-tripping text, always with a decimal point.
pub fn decimal_text(d: f64) -> String {
    let s = format!("{d}");
    if s.contains('.') || !d.is_finite() {
        s
    } else {
        format!("{s}.0")
    }
}
