//! Canonical form: node/edge sequences that start and end with a node, with
//! every element pattern carrying a variable.

use std::fmt;

use crate::analyze::{AnalyzedQuery, QuantId, VarInfo};
use crate::graph::PropertyGraph;
use crate::syntax::{
    render_expr, render_label, restrictor_text, Expr, LabelExpr, Orientation, PatternTerm,
    Quantifier, Repetition, Restrictor, Selector,
};

/// Index of a named variable in the analyzer's variable table.
pub type Sym = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Var {
    Named(Sym, String),
    /// Fresh variable for a pattern written without one; numbered per kind
    /// in textual order.
    Anon(u32),
}

impl Var {
    pub fn sym(&self) -> Option<Sym> {
        match self {
            Var::Named(s, _) => Some(*s),
            Var::Anon(_) => None,
        }
    }
}

/// How a prefilter sees one variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ref {
    /// The binding annotated with the first `depth` iteration counters.
    Single { sym: Sym, depth: usize },
    /// Every binding that shares the filter's own iteration counters.
    Group { sym: Sym },
}

#[derive(Clone, Debug)]
pub struct Filter<'q> {
    pub expr: &'q Expr,
    /// Number of quantifiers enclosing the filter.
    pub depth: usize,
    pub refs: Vec<(String, Ref)>,
}

#[derive(Clone, Debug)]
pub struct Atom<'q> {
    pub var: Var,
    pub label: Option<&'q LabelExpr>,
    pub filter: Option<Filter<'q>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rep {
    Once,
    Optional,
    Quantified { id: QuantId, min: u64, max: Option<u64> },
}

#[derive(Clone, Debug)]
pub struct Group<'q> {
    pub restrictor: Option<Restrictor>,
    pub body: NTerm<'q>,
    pub filter: Option<Filter<'q>>,
    pub rep: Rep,
}

#[derive(Clone, Debug)]
pub enum NTerm<'q> {
    Node(Atom<'q>),
    Edge(Atom<'q>, Orientation),
    Seq(Vec<NTerm<'q>>),
    Group(Box<Group<'q>>),
    Union(Vec<NTerm<'q>>),
    /// Multiset alternation, numbered so branch tags stay distinct.
    Alternation(u32, Vec<NTerm<'q>>),
}

#[derive(Clone, Debug)]
pub struct NormPath<'q> {
    pub selector: Option<Selector>,
    pub restrictor: Option<Restrictor>,
    pub variable: Option<(Sym, String)>,
    pub body: NTerm<'q>,
}

/// What bounds one quantifier's iteration count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantContext {
    pub quantifier: Quantifier,
    /// Restrictors of the path and of strictly enclosing parens.
    pub restrictors: Vec<Restrictor>,
    pub selector: Option<Selector>,
}

#[derive(Clone, Debug)]
pub struct NormalizedQuery<'q> {
    pub analyzed: &'q AnalyzedQuery,
    pub paths: Vec<NormPath<'q>>,
    pub filter: Option<Filter<'q>>,
    pub quants: Vec<QuantContext>,
}

struct Normalizer<'q> {
    analyzed: &'q AnalyzedQuery,
    anon_nodes: u32,
    anon_edges: u32,
    alternations: u32,
    quants: Vec<QuantContext>,
    chain: Vec<QuantId>,
    restrictors: Vec<Restrictor>,
    selector: Option<Selector>,
}

pub fn normalize(analyzed: &AnalyzedQuery) -> NormalizedQuery<'_> {
    let mut n = Normalizer {
        analyzed,
        anon_nodes: 0,
        anon_edges: 0,
        alternations: 0,
        quants: Vec::new(),
        chain: Vec::new(),
        restrictors: Vec::new(),
        selector: None,
    };
    let paths = analyzed
        .query
        .paths
        .iter()
        .map(|p| {
            n.selector = p.selector;
            n.restrictors = p.restrictor.into_iter().collect();
            NormPath {
                selector: p.selector,
                restrictor: p.restrictor,
                variable: p.variable.as_ref().map(|v| (n.sym(&v.name), v.name.clone())),
                body: n.body(&p.body),
            }
        })
        .collect();
    let filter = analyzed.query.filter.as_ref().map(|f| n.filter(f));
    NormalizedQuery {
        analyzed,
        paths,
        filter,
        quants: n.quants,
    }
}

impl<'q> Normalizer<'q> {
    fn sym(&self, name: &str) -> Sym {
        self.analyzed
            .variables
            .vars
            .iter()
            .position(|v| v.name == name)
            .expect("analyzed variable") as Sym
    }

    fn info(&self, name: &str) -> &'q VarInfo {
        self.analyzed.variables.get(name).expect("analyzed variable")
    }

    /// Resolves references the way the analyzer classified them: a variable
    /// declared under more quantifiers than the filter is a group.
    fn filter(&self, expr: &'q Expr) -> Filter<'q> {
        let mut refs: Vec<(String, Ref)> = Vec::new();
        expr.visit_vars(&mut |v, _| {
            if refs.iter().any(|(n, _)| n == &v.name) {
                return;
            }
            let info = self.info(&v.name);
            let sym = self.sym(&v.name);
            let r = if info.chain.len() > self.chain.len() {
                Ref::Group { sym }
            } else {
                Ref::Single {
                    sym,
                    depth: info.chain.len(),
                }
            };
            refs.push((v.name.clone(), r));
        });
        Filter {
            expr,
            depth: self.chain.len(),
            refs,
        }
    }

    fn var(&mut self, name: Option<&str>, node: bool) -> Var {
        match name {
            Some(n) => Var::Named(self.sym(n), n.to_string()),
            None if node => {
                self.anon_nodes += 1;
                Var::Anon(self.anon_nodes)
            }
            None => {
                self.anon_edges += 1;
                Var::Anon(self.anon_edges)
            }
        }
    }

    fn anon_node(&mut self) -> NTerm<'q> {
        NTerm::Node(Atom {
            var: self.var(None, true),
            label: None,
            filter: None,
        })
    }

    fn quantifier(&mut self, q: Quantifier) -> QuantId {
        let id = QuantId(self.quants.len());
        self.quants.push(QuantContext {
            quantifier: q,
            restrictors: self.restrictors.clone(),
            selector: self.selector,
        });
        id
    }

    /// A group body or path body: a union, an alternation or a sequence.
    fn body(&mut self, t: &'q PatternTerm) -> NTerm<'q> {
        match t {
            PatternTerm::Union(bs) => NTerm::Union(bs.iter().map(|b| self.seq(b)).collect()),
            PatternTerm::Alternation(bs) => {
                let id = self.alternations;
                self.alternations += 1;
                NTerm::Alternation(id, bs.iter().map(|b| self.seq(b)).collect())
            }
            t => self.seq(t),
        }
    }

    fn seq(&mut self, t: &'q PatternTerm) -> NTerm<'q> {
        let items: &[PatternTerm] = match t {
            PatternTerm::Concat(items) => items,
            t => std::slice::from_ref(t),
        };
        let mut out = Vec::new();
        let mut after_edge = true;
        for item in items {
            let is_edge = matches!(item, PatternTerm::Edge { quantifier: None, .. });
            if is_edge && after_edge {
                out.push(self.anon_node());
            }
            out.push(self.item(item));
            after_edge = is_edge;
        }
        if after_edge {
            out.push(self.anon_node());
        }
        NTerm::Seq(out)
    }

    fn edge(&mut self, t: &'q PatternTerm) -> NTerm<'q> {
        let PatternTerm::Edge { edge, .. } = t else { unreachable!() };
        let spec = edge.spec.as_ref();
        let var = self.var(spec.and_then(|s| s.variable.as_ref()).map(|v| v.name.as_str()), false);
        NTerm::Edge(
            Atom {
                var,
                label: spec.and_then(|s| s.label.as_ref()),
                filter: spec.and_then(|s| s.filter.as_ref()).map(|f| self.filter(f)),
            },
            edge.orientation,
        )
    }

    fn item(&mut self, t: &'q PatternTerm) -> NTerm<'q> {
        match t {
            PatternTerm::Node(n) => NTerm::Node(Atom {
                var: self.var(n.spec.variable.as_ref().map(|v| v.name.as_str()), true),
                label: n.spec.label.as_ref(),
                filter: n.spec.filter.as_ref().map(|f| self.filter(f)),
            }),
            PatternTerm::Edge { quantifier: None, .. } => self.edge(t),
            PatternTerm::Edge { quantifier: Some(q), .. } => {
                let id = self.quantifier(*q);
                self.chain.push(id);
                let first = self.anon_node();
                let edge = self.edge(t);
                let last = self.anon_node();
                self.chain.pop();
                NTerm::Group(Box::new(Group {
                    restrictor: None,
                    body: NTerm::Seq(vec![first, edge, last]),
                    filter: None,
                    rep: Rep::Quantified {
                        id,
                        min: q.min,
                        max: q.max,
                    },
                }))
            }
            PatternTerm::Paren(p) => {
                let rep = match p.repetition {
                    None => Rep::Once,
                    Some(Repetition::Optional) => Rep::Optional,
                    Some(Repetition::Quantified(q)) => {
                        let id = self.quantifier(q);
                        self.chain.push(id);
                        Rep::Quantified {
                            id,
                            min: q.min,
                            max: q.max,
                        }
                    }
                };
                let pushed = p.restrictor.is_some() && rep == Rep::Once;
                if pushed {
                    self.restrictors.extend(p.restrictor);
                }
                let body = self.body(&p.body);
                if pushed {
                    self.restrictors.pop();
                }
                let filter = p.filter.as_ref().map(|f| self.filter(f));
                if matches!(rep, Rep::Quantified { .. }) {
                    self.chain.pop();
                }
                NTerm::Group(Box::new(Group {
                    restrictor: p.restrictor,
                    body,
                    filter,
                    rep,
                }))
            }
            PatternTerm::Concat(_) | PatternTerm::Union(_) | PatternTerm::Alternation(_) => {
                unreachable!("nested sequences sit inside parens")
            }
        }
    }
}

/// Per-quantifier iteration caps: finite maxima are kept; an unbounded
/// quantifier gets `min + |E|` under TRAIL, `min + |N|` under ACYCLIC or
/// SIMPLE, and otherwise `min + k·|N|` for a selector keeping `k` paths per
/// partition. Each iteration beyond `min` consumes an edge, so no match is
/// lost.
pub fn expansion_bounds(query: &NormalizedQuery, graph: &PropertyGraph) -> Vec<u64> {
    query
        .quants
        .iter()
        .map(|q| {
            if let Some(max) = q.quantifier.max {
                return max;
            }
            let min = q.quantifier.min;
            let n = graph.node_count() as u64;
            let e = graph.edge_count() as u64;
            let restricted = q
                .restrictors
                .iter()
                .map(|r| match r {
                    Restrictor::Trail => e,
                    Restrictor::Acyclic | Restrictor::Simple => n,
                })
                .min();
            let extra = restricted.unwrap_or_else(|| selector_k(q.selector).saturating_mul(n));
            min.saturating_add(extra)
        })
        .collect()
}

/// How many paths per partition a selector can keep, for bounding purposes.
pub fn selector_k(selector: Option<Selector>) -> u64 {
    match selector {
        Some(Selector::AnyK(k) | Selector::ShortestK(k) | Selector::ShortestKGroup(k)) => k,
        _ => 1,
    }
}

struct Anon<'a>(&'a Var, bool);

impl fmt::Display for Anon<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Var::Named(_, n) => f.write_str(n),
            Var::Anon(i) => write!(f, "_{}{}", if self.1 { 'n' } else { 'e' }, i),
        }
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, a: &Atom, node: bool) -> fmt::Result {
    write!(f, "{}", Anon(&a.var, node))?;
    if let Some(l) = a.label {
        write!(f, ":{}", render_label(l))?;
    }
    if let Some(w) = &a.filter {
        write!(f, " WHERE {}", render_expr(w.expr))?;
    }
    Ok(())
}

impl fmt::Display for NTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NTerm::Node(a) => {
                f.write_str("(")?;
                write_atom(f, a, true)?;
                f.write_str(")")
            }
            NTerm::Edge(a, o) => {
                let (open, close) = o.delimiters();
                f.write_str(open)?;
                write_atom(f, a, false)?;
                f.write_str(close)
            }
            NTerm::Seq(items) => {
                for (i, item) in items.iter().enumerate() {
                    let atomic = |t: &NTerm| matches!(t, NTerm::Node(_) | NTerm::Edge(..));
                    if i > 0 && !(atomic(item) && atomic(&items[i - 1])) {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                Ok(())
            }
            NTerm::Union(bs) | NTerm::Alternation(_, bs) => {
                let sep = if matches!(self, NTerm::Union(_)) { " | " } else { " |+| " };
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    write!(f, "{b}")?;
                }
                Ok(())
            }
            NTerm::Group(g) => {
                f.write_str("[")?;
                if let Some(r) = g.restrictor {
                    write!(f, "{} ", restrictor_text(r))?;
                }
                write!(f, "{}", g.body)?;
                if let Some(w) = &g.filter {
                    write!(f, " WHERE {}", render_expr(w.expr))?;
                }
                f.write_str("]")?;
                match g.rep {
                    Rep::Once => Ok(()),
                    Rep::Optional => f.write_str("?"),
                    Rep::Quantified { min, max, .. } => {
                        // always the explicit form: `+` and `*` are gone
                        match max {
                            Some(m) => write!(f, "{{{min},{m}}}"),
                            None => write!(f, "{{{min},}}"),
                        }
                    }
                }
            }
        }
    }
}

impl fmt::Display for NormPath<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((_, v)) = &self.variable {
            write!(f, "{v} = ")?;
        }
        if let Some(r) = self.restrictor {
            write!(f, "{} ", restrictor_text(r))?;
        }
        write!(f, "{}", self.body)
    }
}
