//! Brute-force reference semantics for differential testing.
//!
//! Every walk up to a length cap is enumerated and checked against the
//! pattern by recursive descent over the AST, trying every decomposition.
//! Nothing here is shared with the evaluator beyond the graph, the AST and
//! the result table.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::eval::{Cell, ResultTable};
use crate::graph::{Direction, EdgeId, Element, Endpoints, Incidence, NodeId, Path, PropertyGraph, Value};
use crate::syntax::{
    AggArg, AggFunc, BinOp, EdgePattern, Expr, Literal, ParenPattern, PathPattern, PatternTerm, Quantifier, Query, Repetition,
    Restrictor, Selector,
};

/// Hard ceiling on enumerated walks.
pub const PATH_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Longest walk considered, in edges.
    pub max_path_len: usize,
    /// Largest number of rows any intermediate result may hold.
    pub max_rows: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_path_len: 8,
            max_rows: 1_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("cap exceeded: more than {limit} {what}")]
    CapExceeded { what: &'static str, limit: usize },
}

/// Every walk with at most `max_len` edges. Each edge is taken in both
/// directions; a self-loop once.
pub fn enumerate_paths(graph: &PropertyGraph, max_len: usize) -> Result<Vec<Path>, OracleError> {
    let mut out = Vec::new();
    let mut stack: Vec<Path> = graph.node_ids().map(Path::single).collect();
    stack.reverse();
    while let Some(p) = stack.pop() {
        if out.len() >= PATH_CAP {
            return Err(OracleError::CapExceeded {
                what: "paths",
                limit: PATH_CAP,
            });
        }
        if p.len() < max_len {
            let here = p.last();
            let mut seen_loops = BTreeSet::new();
            let mut next = Vec::new();
            for e in graph.adjacent(here, Incidence::Any) {
                let (dir, to) = match graph.edge(e).endpoints {
                    Endpoints::Directed { src, dst } if src == dst => {
                        if !seen_loops.insert(e) {
                            continue;
                        }
                        (Direction::Forward, here)
                    }
                    Endpoints::Directed { src, dst } if src == here => (Direction::Forward, dst),
                    Endpoints::Directed { src, .. } => (Direction::Backward, src),
                    Endpoints::Undirected(a, b) => (Direction::Undirected, if a == here { b } else { a }),
                };
                let mut q = p.clone();
                q.push(e, dir, to);
                next.push(q);
            }
            stack.extend(next.into_iter().rev());
        }
        out.push(p);
    }
    Ok(out)
}

/// Something recorded while matching, in pattern order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Mark {
    /// A named variable bound to walk element `1` (nodes even, edges odd).
    Var(String, usize),
    /// Branch `1` of the multiset alternation at AST address `0`, taken at
    /// node index `2`.
    Branch(usize, usize, usize),
}

#[derive(Clone, Debug, Default)]
struct State<'q> {
    marks: Vec<Mark>,
    /// (name, iteration vector, element)
    binds: Vec<(String, Vec<u32>, Element)>,
    /// Filters to evaluate once the walk is matched, with their iterations.
    checks: Vec<(&'q Expr, Vec<u32>)>,
}

/// Variables and their quantifier depth, in declaration order.
#[derive(Default)]
struct Decls {
    order: Vec<String>,
    depth: HashMap<String, usize>,
    paths: Vec<String>,
}

impl Decls {
    fn declare(&mut self, name: &str, depth: usize) {
        if !self.depth.contains_key(name) {
            self.order.push(name.to_string());
            self.depth.insert(name.to_string(), depth);
        }
    }

    fn collect(&mut self, t: &PatternTerm, depth: usize, into: &mut BTreeSet<String>) {
        match t {
            PatternTerm::Node(n) => {
                if let Some(v) = &n.spec.variable {
                    self.declare(&v.name, depth);
                    into.insert(v.name.clone());
                }
            }
            PatternTerm::Edge { edge, quantifier } => {
                if let Some(v) = edge.spec.as_ref().and_then(|s| s.variable.as_ref()) {
                    self.declare(&v.name, depth + quantifier.is_some() as usize);
                    into.insert(v.name.clone());
                }
            }
            PatternTerm::Paren(p) => {
                let d = depth + p.quantifier().is_some() as usize;
                self.collect(&p.body, d, into);
            }
            PatternTerm::Concat(ts) | PatternTerm::Union(ts) | PatternTerm::Alternation(ts) => {
                for t in ts {
                    self.collect(t, depth, into);
                }
            }
        }
    }
}

struct Walk<'w> {
    graph: &'w PropertyGraph,
    path: &'w Path,
    /// Iteration caps of unbounded quantifiers that no restrictor encloses,
    /// by AST address.
    caps: &'w HashMap<usize, u64>,
}

impl Walk<'_> {
    fn node(&self, i: usize) -> NodeId {
        self.path.nodes()[i]
    }

    fn restricted(&self, r: Restrictor, from: usize, to: usize) -> bool {
        let nodes = &self.path.nodes()[from..=to];
        let edges: Vec<EdgeId> = self.path.steps()[from..to].iter().map(|s| s.0).collect();
        let distinct = |xs: &[NodeId]| xs.iter().collect::<BTreeSet<_>>().len() == xs.len();
        match r {
            Restrictor::Trail => edges.iter().collect::<BTreeSet<_>>().len() == edges.len(),
            Restrictor::Acyclic => distinct(nodes),
            Restrictor::Simple => distinct(&nodes[..nodes.len() - 1]) && distinct(&nodes[1..]),
        }
    }

    fn bind<'q>(&self, st: &mut State<'q>, name: &str, iters: &[u32], elem: Element, at: usize) -> bool {
        if st
            .binds
            .iter()
            .any(|(n, it, e)| n == name && it.as_slice() == iters && *e != elem)
        {
            return false;
        }
        st.binds.push((name.to_string(), iters.to_vec(), elem));
        st.marks.push(Mark::Var(name.to_string(), at));
        true
    }

    /// All ways `t` matches from node index `i`: the end index and state.
    fn run<'q>(&self, t: &'q PatternTerm, i: usize, iters: &[u32], st: State<'q>) -> Vec<(usize, State<'q>)> {
        match t {
            PatternTerm::Node(n) => {
                let mut st = st;
                let elem = Element::Node(self.node(i));
                if let Some(l) = &n.spec.label {
                    if !l.matches(self.graph.labels(elem)) {
                        return Vec::new();
                    }
                }
                if let Some(v) = &n.spec.variable {
                    if !self.bind(&mut st, &v.name, iters, elem, 2 * i) {
                        return Vec::new();
                    }
                }
                if let Some(f) = &n.spec.filter {
                    st.checks.push((f, iters.to_vec()));
                }
                vec![(i, st)]
            }
            PatternTerm::Edge { edge, quantifier: None } => self.edge(edge, i, iters, st),
            PatternTerm::Edge { edge, quantifier: Some(q) } => {
                let site = t as *const PatternTerm as usize;
                self.repeat(PatternTermRef::Edge(edge), None, None, *q, site, i, iters, st)
            }
            PatternTerm::Concat(items) => {
                let mut frontier = vec![(i, st)];
                for item in items {
                    frontier = frontier
                        .into_iter()
                        .flat_map(|(j, s)| self.run(item, j, iters, s))
                        .collect();
                }
                frontier
            }
            PatternTerm::Union(bs) => bs.iter().flat_map(|b| self.run(b, i, iters, st.clone())).collect(),
            PatternTerm::Alternation(bs) => {
                let id = t as *const PatternTerm as usize;
                bs.iter()
                    .enumerate()
                    .flat_map(|(k, b)| {
                        let mut s = st.clone();
                        s.marks.push(Mark::Branch(id, k, i));
                        self.run(b, i, iters, s)
                    })
                    .collect()
            }
            PatternTerm::Paren(p) => self.paren(p, i, iters, st),
        }
    }

    fn edge<'q>(&self, edge: &'q EdgePattern, i: usize, iters: &[u32], st: State<'q>) -> Vec<(usize, State<'q>)> {
        let Some(&(e, dir)) = self.path.steps().get(i) else { return Vec::new() };
        let self_loop = matches!(self.graph.edge(e).endpoints, Endpoints::Directed { src, dst } if src == dst);
        let ok = if self_loop {
            edge.orientation.allows(Direction::Forward) || edge.orientation.allows(Direction::Backward)
        } else {
            edge.orientation.allows(dir)
        };
        if !ok {
            return Vec::new();
        }
        let mut st = st;
        if let Some(spec) = &edge.spec {
            let elem = Element::Edge(e);
            if let Some(l) = &spec.label {
                if !l.matches(self.graph.labels(elem)) {
                    return Vec::new();
                }
            }
            if let Some(v) = &spec.variable {
                if !self.bind(&mut st, &v.name, iters, elem, 2 * i + 1) {
                    return Vec::new();
                }
            }
            if let Some(f) = &spec.filter {
                st.checks.push((f, iters.to_vec()));
            }
        }
        vec![(i + 1, st)]
    }

    fn paren<'q>(&self, p: &'q ParenPattern, i: usize, iters: &[u32], st: State<'q>) -> Vec<(usize, State<'q>)> {
        match p.repetition {
            None => self.once(PatternTermRef::Term(&p.body), p.restrictor, p.filter.as_ref(), i, iters, st),
            Some(Repetition::Optional) => {
                let mut out = vec![(i, st.clone())];
                out.extend(self.once(PatternTermRef::Term(&p.body), p.restrictor, p.filter.as_ref(), i, iters, st));
                out
            }
            Some(Repetition::Quantified(q)) => self.repeat(
                PatternTermRef::Term(&p.body),
                p.restrictor,
                p.filter.as_ref(),
                q,
                p as *const ParenPattern as usize,
                i,
                iters,
                st,
            ),
        }
    }

    fn once<'q>(
        &self,
        body: PatternTermRef<'q>,
        restrictor: Option<Restrictor>,
        filter: Option<&'q Expr>,
        i: usize,
        iters: &[u32],
        st: State<'q>,
    ) -> Vec<(usize, State<'q>)> {
        let results = match body {
            PatternTermRef::Term(t) => self.run(t, i, iters, st),
            PatternTermRef::Edge(e) => self.edge(e, i, iters, st),
        };
        results
            .into_iter()
            .filter(|(j, _)| restrictor.is_none_or(|r| self.restricted(r, i, *j)))
            .map(|(j, mut s)| {
                if let Some(f) = filter {
                    s.checks.push((f, iters.to_vec()));
                }
                (j, s)
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn repeat<'q>(
        &self,
        body: PatternTermRef<'q>,
        restrictor: Option<Restrictor>,
        filter: Option<&'q Expr>,
        q: Quantifier,
        site: usize,
        i: usize,
        iters: &[u32],
        st: State<'q>,
    ) -> Vec<(usize, State<'q>)> {
        let (min, max) = (q.min, q.max);
        let limit = max.or_else(|| self.caps.get(&site).copied());
        let mut out = Vec::new();
        let mut frontier = vec![(i, st)];
        let mut count: u64 = 0;
        while !frontier.is_empty() {
            if count >= min {
                out.extend(frontier.iter().cloned());
            }
            if limit.is_some_and(|m| count >= m) {
                break;
            }
            count += 1;
            let mut inner = iters.to_vec();
            inner.push(count as u32);
            // beyond the minimum an unbounded repetition must move forward
            let must_move = max.is_none() && count > min;
            frontier = frontier
                .into_iter()
                .flat_map(|(j, s)| {
                    self.once(body, restrictor, filter, j, &inner, s)
                        .into_iter()
                        .filter(move |(k, _)| !must_move || *k > j)
                })
                .collect();
            if max.is_none() && count > min + self.path.len() as u64 {
                break;
            }
        }
        out
    }
}

#[derive(Clone, Copy)]
enum PatternTermRef<'q> {
    Term(&'q PatternTerm),
    Edge(&'q EdgePattern),
}

/// Three-valued truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tv {
    T,
    F,
    U,
}

impl Tv {
    fn of(b: bool) -> Tv {
        if b {
            Tv::T
        } else {
            Tv::F
        }
    }
}

/// Variable lookup for the oracle's own evaluator.
trait Scope {
    fn one(&self, var: &str) -> Option<Element>;
    fn many(&self, var: &str) -> Option<Vec<Element>>;
}

struct WalkScope<'s, 'q> {
    st: &'s State<'q>,
    iters: &'s [u32],
    depth: &'s HashMap<String, usize>,
}

impl Scope for WalkScope<'_, '_> {
    fn one(&self, var: &str) -> Option<Element> {
        let d = self.depth.get(var).copied().unwrap_or(0);
        if d > self.iters.len() {
            return None;
        }
        let want = &self.iters[..d];
        self.st
            .binds
            .iter()
            .find(|(n, it, _)| n == var && it.as_slice() == want)
            .map(|b| b.2)
    }

    fn many(&self, var: &str) -> Option<Vec<Element>> {
        let d = self.depth.get(var).copied().unwrap_or(0);
        if d <= self.iters.len() {
            return None;
        }
        Some(
            self.st
                .binds
                .iter()
                .filter(|(n, it, _)| n == var && it.starts_with(self.iters))
                .map(|b| b.2)
                .collect(),
        )
    }
}

struct RowScope<'r> {
    row: &'r BTreeMap<String, Cell>,
}

impl Scope for RowScope<'_> {
    fn one(&self, var: &str) -> Option<Element> {
        match self.row.get(var) {
            Some(Cell::Element(e)) => Some(*e),
            _ => None,
        }
    }

    fn many(&self, var: &str) -> Option<Vec<Element>> {
        match self.row.get(var) {
            Some(Cell::List(es)) => Some(es.clone()),
            _ => None,
        }
    }
}

struct Pinned<'a> {
    base: &'a dyn Scope,
    var: &'a str,
    elem: Element,
}

impl Scope for Pinned<'_> {
    fn one(&self, var: &str) -> Option<Element> {
        if var == self.var {
            Some(self.elem)
        } else {
            self.base.one(var)
        }
    }

    fn many(&self, var: &str) -> Option<Vec<Element>> {
        if var == self.var {
            None
        } else {
            self.base.many(var)
        }
    }
}

fn truth(v: &Value) -> Tv {
    match v {
        Value::Bool(b) => Tv::of(*b),
        _ => Tv::U,
    }
}

fn value(e: &Expr, s: &dyn Scope, g: &PropertyGraph) -> Value {
    let tv = |t: Tv| match t {
        Tv::T => Value::Bool(true),
        Tv::F => Value::Bool(false),
        Tv::U => Value::Null,
    };
    match e {
        Expr::Literal(Literal::Null) => Value::Null,
        Expr::Literal(Literal::Bool(b)) => Value::Bool(*b),
        Expr::Literal(Literal::Int(i)) => Value::Int(*i),
        Expr::Literal(Literal::Decimal(d)) => Value::Decimal(*d),
        Expr::Literal(Literal::String(x)) => Value::String(x.clone()),
        Expr::Property { var, key } => s.one(&var.name).map_or(Value::Null, |el| g.property(el, key)),
        Expr::Neg(x) => match value(x, s, g) {
            Value::Int(i) => match i.checked_neg() {
                Some(n) => Value::Int(n),
                None => Value::Decimal(-(i as f64)),
            },
            Value::Decimal(d) => Value::Decimal(-d),
            _ => Value::Null,
        },
        Expr::Not(x) => tv(match truth(&value(x, s, g)) {
            Tv::T => Tv::F,
            Tv::F => Tv::T,
            Tv::U => Tv::U,
        }),
        Expr::Binary { op, lhs, rhs } => {
            let l = value(lhs, s, g);
            let r = value(rhs, s, g);
            match op {
                BinOp::And => tv(match (truth(&l), truth(&r)) {
                    (Tv::F, _) | (_, Tv::F) => Tv::F,
                    (Tv::T, Tv::T) => Tv::T,
                    _ => Tv::U,
                }),
                BinOp::Or => tv(match (truth(&l), truth(&r)) {
                    (Tv::T, _) | (_, Tv::T) => Tv::T,
                    (Tv::F, Tv::F) => Tv::F,
                    _ => Tv::U,
                }),
                BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => match l.compare(&r) {
                    None => Value::Null,
                    Some(o) => Value::Bool(match op {
                        BinOp::Eq => o == Ordering::Equal,
                        BinOp::Ne => o != Ordering::Equal,
                        BinOp::Lt => o == Ordering::Less,
                        BinOp::Le => o != Ordering::Greater,
                        BinOp::Gt => o == Ordering::Greater,
                        _ => o != Ordering::Less,
                    }),
                },
                _ => arithmetic(*op, &l, &r),
            }
        }
        Expr::IsNull { expr, negated } => Value::Bool(matches!(value(expr, s, g), Value::Null) ^ negated),
        Expr::IsDirected(v) => match s.one(&v.name) {
            Some(Element::Edge(e)) => Value::Bool(matches!(g.edge(e).endpoints, Endpoints::Directed { .. })),
            _ => Value::Null,
        },
        Expr::IsSourceOf { node, edge } => endpoint(s, g, &node.name, &edge.name, true),
        Expr::IsDestinationOf { node, edge } => endpoint(s, g, &node.name, &edge.name, false),
        Expr::Same(vs, _) => {
            let els: Vec<Option<Element>> = vs.iter().map(|v| s.one(&v.name)).collect();
            if els.iter().any(Option::is_none) {
                return Value::Null;
            }
            Value::Bool(els.iter().all(|e| *e == els[0]))
        }
        Expr::AllDifferent(vs, _) => {
            let els: Vec<Option<Element>> = vs.iter().map(|v| s.one(&v.name)).collect();
            if els.iter().any(Option::is_none) {
                return Value::Null;
            }
            let mut all = true;
            for a in 0..els.len() {
                for b in a + 1..els.len() {
                    all &= els[a] != els[b];
                }
            }
            Value::Bool(all)
        }
        Expr::Aggregate { func, arg, .. } => aggregate(*func, arg, s, g),
    }
}

fn endpoint(s: &dyn Scope, g: &PropertyGraph, node: &str, edge: &str, source: bool) -> Value {
    let (Some(Element::Node(n)), Some(Element::Edge(e))) = (s.one(node), s.one(edge)) else {
        return Value::Null;
    };
    Value::Bool(match g.edge(e).endpoints {
        Endpoints::Directed { src, dst } => n == if source { src } else { dst },
        Endpoints::Undirected(..) => false,
    })
}

fn number(v: &Value) -> Option<f64> {
    match v {
        Value::Int(i) => Some(*i as f64),
        Value::Decimal(d) => Some(*d),
        _ => None,
    }
}

fn arithmetic(op: BinOp, l: &Value, r: &Value) -> Value {
    if let (Value::Int(a), Value::Int(b)) = (l, r) {
        let exact = match op {
            BinOp::Add => a.checked_add(*b),
            BinOp::Sub => a.checked_sub(*b),
            BinOp::Mul => a.checked_mul(*b),
            _ => None,
        };
        if let Some(x) = exact {
            return Value::Int(x);
        }
    }
    match (number(l), number(r)) {
        (Some(a), Some(b)) => match op {
            BinOp::Add => Value::Decimal(a + b),
            BinOp::Sub => Value::Decimal(a - b),
            BinOp::Mul => Value::Decimal(a * b),
            BinOp::Div if b != 0.0 => Value::Decimal(a / b),
            _ => Value::Null,
        },
        _ => Value::Null,
    }
}

fn aggregate(func: AggFunc, arg: &AggArg, s: &dyn Scope, g: &PropertyGraph) -> Value {
    let (var, expr) = match arg {
        AggArg::Elements(v) => (v.name.clone(), None),
        AggArg::Expr(e) => {
            let mut group = None;
            e.visit_vars(&mut |v, _| {
                if group.is_none() && s.many(&v.name).is_some() {
                    group = Some(v.name.clone());
                }
            });
            match group {
                Some(v) => (v, Some(e)),
                None => return Value::Null,
            }
        }
    };
    let elems = s.many(&var).unwrap_or_else(|| s.one(&var).into_iter().collect());
    let Some(expr) = expr else {
        return if func == AggFunc::Count {
            Value::Int(elems.len() as i64)
        } else {
            Value::Null
        };
    };
    let vals: Vec<Value> = elems
        .iter()
        .map(|&elem| {
            value(
                expr,
                &Pinned {
                    base: s,
                    var: &var,
                    elem,
                },
                g,
            )
        })
        .filter(|v| !matches!(v, Value::Null))
        .collect();
    if func == AggFunc::Count {
        return Value::Int(vals.len() as i64);
    }
    if vals.is_empty() {
        return Value::Null;
    }
    match func {
        AggFunc::Sum | AggFunc::Avg => {
            let mut total = vals[0].clone();
            for v in &vals[1..] {
                total = arithmetic(BinOp::Add, &total, v);
            }
            if func == AggFunc::Sum {
                total
            } else {
                number(&total).map_or(Value::Null, |t| Value::Decimal(t / vals.len() as f64))
            }
        }
        _ => {
            let mut best = vals[0].clone();
            for v in &vals[1..] {
                match v.compare(&best) {
                    None => return Value::Null,
                    Some(Ordering::Less) if func == AggFunc::Min => best = v.clone(),
                    Some(Ordering::Greater) if func == AggFunc::Max => best = v.clone(),
                    _ => {}
                }
            }
            best
        }
    }
}

/// One reduced match of a path pattern.
struct Found {
    path: Path,
    /// Elements per variable in walk order.
    occ: BTreeMap<String, Vec<Element>>,
}

/// Number of paths a selector keeps per partition when it ranks by length.
fn selector_width(selector: Option<Selector>) -> u64 {
    match selector {
        Some(Selector::AnyK(k) | Selector::ShortestK(k) | Selector::ShortestKGroup(k)) => k,
        _ => 1,
    }
}

/// Caps for unbounded quantifiers outside every restrictor: `min + k|N|`.
fn iteration_caps(pp: &PathPattern, graph: &PropertyGraph) -> HashMap<usize, u64> {
    fn walk(t: &PatternTerm, restricted: bool, room: u64, caps: &mut HashMap<usize, u64>) {
        match t {
            PatternTerm::Node(_) => {}
            PatternTerm::Edge { quantifier, .. } => {
                if let Some(q) = quantifier {
                    if q.max.is_none() && !restricted {
                        caps.insert(t as *const PatternTerm as usize, q.min + room);
                    }
                }
            }
            PatternTerm::Paren(p) => {
                if let Some(q) = p.quantifier() {
                    if q.max.is_none() && !restricted {
                        caps.insert(&**p as *const ParenPattern as usize, q.min + room);
                    }
                }
                walk(&p.body, restricted || p.restrictor.is_some(), room, caps);
            }
            PatternTerm::Concat(ts) | PatternTerm::Union(ts) | PatternTerm::Alternation(ts) => {
                ts.iter().for_each(|t| walk(t, restricted, room, caps))
            }
        }
    }
    let mut caps = HashMap::new();
    let room = selector_width(pp.selector) * graph.node_count() as u64;
    walk(&pp.body, pp.restrictor.is_some(), room, &mut caps);
    caps
}

fn restrictor_room(r: Restrictor, graph: &PropertyGraph) -> u64 {
    match r {
        Restrictor::Trail => graph.edge_count() as u64,
        Restrictor::Acyclic => graph.node_count().saturating_sub(1) as u64,
        Restrictor::Simple => graph.node_count() as u64,
    }
}

/// A walk length beyond which no match of `query` can lie, given the
/// iteration caps above. Saturates at `ceiling`.
pub fn path_len_bound(query: &Query, graph: &PropertyGraph, ceiling: usize) -> usize {
    fn longest(t: &PatternTerm, restricted: bool, room: u64, g: &PropertyGraph) -> Option<u64> {
        let reps = |q: &Quantifier| q.max.or(if restricted { None } else { Some(q.min + room) });
        match t {
            PatternTerm::Node(_) => Some(0),
            PatternTerm::Edge { quantifier: None, .. } => Some(1),
            PatternTerm::Edge { quantifier: Some(q), .. } => reps(q),
            PatternTerm::Concat(ts) => ts
                .iter()
                .try_fold(0u64, |acc, t| longest(t, restricted, room, g).map(|l| acc.saturating_add(l))),
            PatternTerm::Union(ts) | PatternTerm::Alternation(ts) => {
                ts.iter().try_fold(0u64, |acc, t| longest(t, restricted, room, g).map(|l| acc.max(l)))
            }
            PatternTerm::Paren(p) => {
                let body = longest(&p.body, restricted || p.restrictor.is_some(), room, g);
                let body = match (body, p.restrictor) {
                    (Some(b), Some(r)) => Some(b.min(restrictor_room(r, g))),
                    (None, Some(r)) => Some(restrictor_room(r, g)),
                    (b, None) => b,
                };
                let times = match p.repetition {
                    None | Some(Repetition::Optional) => Some(1),
                    Some(Repetition::Quantified(q)) => reps(&q),
                };
                match (body, times) {
                    (Some(0), _) => Some(0),
                    (Some(b), Some(n)) => Some(b.saturating_mul(n)),
                    _ => None,
                }
            }
        }
    }
    let mut best = 0u64;
    for pp in &query.paths {
        let room = selector_width(pp.selector) * graph.node_count() as u64;
        let len = longest(&pp.body, pp.restrictor.is_some(), room, graph);
        let len = match (len, pp.restrictor) {
            (Some(l), Some(r)) => l.min(restrictor_room(r, graph)),
            (None, Some(r)) => restrictor_room(r, graph),
            (Some(l), None) => l,
            (None, None) => ceiling as u64,
        };
        best = best.max(len);
    }
    best.min(ceiling as u64) as usize
}

fn solve_path(
    pp: &PathPattern,
    walks: &[Path],
    graph: &PropertyGraph,
    decls: &Decls,
    config: &OracleConfig,
) -> Result<Vec<Found>, OracleError> {
    let caps = iteration_caps(pp, graph);
    let mut seen = BTreeSet::new();
    let mut found = Vec::new();
    for path in walks {
        let w = Walk { graph, path, caps: &caps };
        if let Some(r) = pp.restrictor {
            if !w.restricted(r, 0, path.len()) {
                continue;
            }
        }
        for (end, st) in w.run(&pp.body, 0, &[], State::default()) {
            if end != path.len() {
                continue;
            }
            let ok = st.checks.iter().all(|(f, iters)| {
                let scope = WalkScope {
                    st: &st,
                    iters,
                    depth: &decls.depth,
                };
                truth(&value(f, &scope, graph)) == Tv::T
            });
            if !ok {
                continue;
            }
            let elements = path.elements();
            if !seen.insert((elements.clone(), st.marks.clone())) {
                continue;
            }
            let mut occ: BTreeMap<String, Vec<Element>> = BTreeMap::new();
            for m in &st.marks {
                if let Mark::Var(n, at) = m {
                    occ.entry(n.clone()).or_default().push(elements[*at]);
                }
            }
            found.push(Found {
                path: path.clone(),
                occ,
            });
            if found.len() > config.max_rows {
                return Err(OracleError::CapExceeded {
                    what: "rows",
                    limit: config.max_rows,
                });
            }
        }
    }
    Ok(select(pp.selector, found, graph))
}

fn select(selector: Option<Selector>, found: Vec<Found>, graph: &PropertyGraph) -> Vec<Found> {
    let Some(selector) = selector else { return found };
    let names = |es: &[Element]| -> Vec<String> { es.iter().map(|e| graph.name(*e).to_string()).collect() };
    let mut by_ends: BTreeMap<(String, String), Vec<Found>> = BTreeMap::new();
    for f in found {
        let key = (
            graph.node(f.path.first()).id.clone(),
            graph.node(f.path.last()).id.clone(),
        );
        by_ends.entry(key).or_default().push(f);
    }
    let mut out = Vec::new();
    for (_, mut fs) in by_ends {
        fs.sort_by_cached_key(|f| {
            let binds: Vec<(String, Vec<String>)> = f.occ.iter().map(|(k, v)| (k.clone(), names(v))).collect();
            (f.path.len(), names(&f.path.elements()), binds)
        });
        let lengths: Vec<usize> = fs.iter().map(|f| f.path.len()).collect();
        let keep = match selector {
            Selector::Any | Selector::AnyShortest => 1,
            Selector::AnyK(k) | Selector::ShortestK(k) => k as usize,
            Selector::AllShortest => lengths.iter().filter(|&&l| l == lengths[0]).count(),
            Selector::ShortestKGroup(k) => {
                let distinct: BTreeSet<usize> = lengths.iter().copied().collect();
                let cut: Vec<usize> = distinct.into_iter().take(k as usize).collect();
                lengths.iter().filter(|l| cut.contains(l)).count()
            }
        };
        out.extend(fs.into_iter().take(keep));
    }
    out
}

/// Evaluates `query` by brute force over every walk of at most
/// `config.max_path_len` edges. The query must have passed analysis.
pub fn oracle_match(query: &Query, graph: &PropertyGraph, config: &OracleConfig) -> Result<ResultTable, OracleError> {
    let mut decls = Decls::default();
    let mut per_path: Vec<BTreeSet<String>> = Vec::new();
    for pp in &query.paths {
        let mut mine = BTreeSet::new();
        decls.collect(&pp.body, 0, &mut mine);
        if let Some(v) = &pp.variable {
            if !decls.paths.contains(&v.name) {
                decls.paths.push(v.name.clone());
            }
        }
        per_path.push(mine);
    }
    let walks = enumerate_paths(graph, config.max_path_len)?;
    let mut rows: Vec<BTreeMap<String, Cell>> = vec![BTreeMap::new()];
    for (pp, mine) in query.paths.iter().zip(&per_path) {
        let found = solve_path(pp, &walks, graph, &decls, config)?;
        let mut next = Vec::new();
        for f in &found {
            let mut row: BTreeMap<String, Cell> = BTreeMap::new();
            for v in mine {
                let occ = f.occ.get(v);
                let cell = if decls.depth[v] > 0 {
                    Cell::List(occ.cloned().unwrap_or_default())
                } else {
                    occ.and_then(|o| o.first()).map_or(Cell::Null, |e| Cell::Element(*e))
                };
                row.insert(v.clone(), cell);
            }
            if let Some(p) = &pp.variable {
                row.insert(p.name.clone(), Cell::Path(f.path.clone()));
            }
            for left in &rows {
                if row.iter().all(|(k, c)| left.get(k).is_none_or(|l| l == c)) {
                    let mut r = left.clone();
                    r.extend(row.clone());
                    next.push(r);
                }
            }
            if next.len() > config.max_rows {
                return Err(OracleError::CapExceeded {
                    what: "rows",
                    limit: config.max_rows,
                });
            }
        }
        rows = next;
    }
    if let Some(f) = &query.filter {
        rows.retain(|row| truth(&value(f, &RowScope { row }, graph)) == Tv::T);
    }
    let columns: Vec<String> = decls.order.iter().chain(&decls.paths).cloned().collect();
    let mut table = ResultTable {
        rows: rows
            .iter()
            .map(|r| columns.iter().map(|c| r.get(c).cloned().unwrap_or(Cell::Null)).collect())
            .collect(),
        columns,
    };
    table.sort(graph);
    Ok(table)
}
