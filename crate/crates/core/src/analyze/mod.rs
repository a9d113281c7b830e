//! Static analysis: variable classification, reference resolution and the
//! termination rules that keep every accepted query finite.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{
    line_col, parse, AggArg, Expr, Ident, ParseErrorKind, PatternTerm, Query, Quantifier, Repetition, Span,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ErrorCode {
    LexError,
    ParseError,
    KindConflict,
    DegreeConflict,
    UndeclaredVariable,
    IllegalReference,
    ConditionalJoin,
    GroupJoin,
    IllegalSameArgument,
    BareGroupReference,
    IllegalAggregate,
    UnboundedQuantifier,
    UnboundedGroupPredicate,
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: ErrorCode,
    pub line: usize,
    pub column: usize,
    pub message: String,
    #[serde(skip)]
    pub offset: usize,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.column, self.code, self.message)
    }
}

/// All problems found in one query, sorted by position.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub struct ErrorReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ErrorReport {
    pub fn codes(&self) -> Vec<ErrorCode> {
        self.diagnostics.iter().map(|d| d.code).collect()
    }

    pub fn has(&self, code: ErrorCode) -> bool {
        self.diagnostics.iter().any(|d| d.code == code)
    }

    /// One JSON object per line: `{"code":…,"line":…,"column":…,"message":…}`.
    pub fn to_json_lines(&self) -> String {
        self.diagnostics
            .iter()
            .map(|d| serde_json::to_string(d).expect("diagnostics serialize") + "\n")
            .collect()
    }
}

impl fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VarKind {
    Node,
    Edge,
    Path,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Category {
    Unconditional,
    Conditional,
    Group,
}

/// Quantifiers are numbered in preorder over the whole query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct VarInfo {
    pub name: String,
    pub kind: VarKind,
    pub category: Category,
    /// Quantifiers enclosing the declarations, outermost first.
    pub chain: Vec<QuantId>,
    /// For group variables: whether one iteration may leave it unbound.
    pub iteration_conditional: bool,
    /// Path patterns that declare the variable.
    pub paths: BTreeSet<usize>,
    pub span: Span,
}

/// Variables in order of first declaration.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VariableTable {
    pub vars: Vec<VarInfo>,
}

impl VariableTable {
    pub fn get(&self, name: &str) -> Option<&VarInfo> {
        self.vars.iter().find(|v| v.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantInfo {
    pub id: QuantId,
    pub quantifier: Quantifier,
    /// A restrictor on an enclosing scope (not the quantified paren's own).
    pub restricted: bool,
    pub path: usize,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzedQuery {
    pub query: Query,
    pub variables: VariableTable,
    pub quantifiers: Vec<QuantInfo>,
}

#[derive(Clone, Debug)]
struct Problem {
    code: ErrorCode,
    span: Span,
    message: String,
}

fn problem(code: ErrorCode, span: Span, message: impl Into<String>) -> Problem {
    Problem {
        code,
        span,
        message: message.into(),
    }
}

#[derive(Clone, Debug)]
struct Occ {
    group: bool,
    conditional: bool,
    iteration_conditional: bool,
    chain: Vec<QuantId>,
    span: Span,
}

type Occs = BTreeMap<String, Occ>;

/// A WHERE clause together with where it sits.
struct Site<'q> {
    expr: &'q Expr,
    /// `None` for the final WHERE.
    path: Option<usize>,
    chain: Vec<QuantId>,
    /// Variables declared inside the scope (paren WHEREs only).
    inside: BTreeSet<String>,
}

#[derive(Default)]
struct Classifier<'q> {
    problems: Vec<Problem>,
    quants: Vec<QuantInfo>,
    kinds: HashMap<String, VarKind>,
    order: Vec<(String, Span)>,
    paths: HashMap<String, BTreeSet<usize>>,
    sites: Vec<Site<'q>>,
}

impl<'q> Classifier<'q> {
    fn declare(&mut self, var: &Ident, kind: VarKind, path: usize, chain: &[QuantId]) -> Occs {
        match self.kinds.get(&var.name) {
            Some(k) if *k != kind => self.problems.push(problem(
                ErrorCode::KindConflict,
                var.span,
                format!("`{}` is used both as {} and as {} variable", var.name, article(*k), article(kind)),
            )),
            Some(_) => {}
            None => {
                self.kinds.insert(var.name.clone(), kind);
                self.order.push((var.name.clone(), var.span));
            }
        }
        self.paths.entry(var.name.clone()).or_default().insert(path);
        let mut occs = Occs::new();
        occs.insert(
            var.name.clone(),
            Occ {
                group: false,
                conditional: false,
                iteration_conditional: false,
                chain: chain.to_vec(),
                span: var.span,
            },
        );
        occs
    }

    fn quantifier(&mut self, q: Quantifier, restricted: bool, selector: bool, path: usize, span: Span) -> QuantId {
        let id = QuantId(self.quants.len());
        self.quants.push(QuantInfo {
            id,
            quantifier: q,
            restricted,
            path,
            span,
        });
        if q.max.is_none() && !restricted && !selector {
            self.problems.push(problem(
                ErrorCode::UnboundedQuantifier,
                span,
                "unbounded quantifier needs an enclosing restrictor or a selector",
            ));
        }
        id
    }

    /// Combines occurrences that must bind the same element.
    fn join(&mut self, into: &mut Occs, other: Occs, across_paths: bool) {
        for (name, b) in other {
            let Some(a) = into.get_mut(&name) else {
                into.insert(name, b);
                continue;
            };
            let place = if across_paths { " across path patterns" } else { "" };
            if a.group != b.group {
                self.problems.push(problem(
                    ErrorCode::DegreeConflict,
                    b.span,
                    format!("`{name}` is both a group and a singleton variable"),
                ));
            } else if a.group {
                self.problems.push(problem(
                    ErrorCode::GroupJoin,
                    b.span,
                    format!("group variable `{name}` cannot be joined{place}"),
                ));
            } else if a.conditional || b.conditional {
                self.problems.push(problem(
                    ErrorCode::ConditionalJoin,
                    b.span,
                    format!("conditional singleton `{name}` cannot be joined{place}"),
                ));
            }
            a.conditional = a.conditional && b.conditional;
        }
    }

    fn branches(&mut self, all: Vec<Occs>) -> Occs {
        let n = all.len();
        let mut seen: BTreeMap<String, (usize, Occ)> = BTreeMap::new();
        for occs in all {
            for (name, b) in occs {
                match seen.get_mut(&name) {
                    None => {
                        seen.insert(name, (1, b));
                    }
                    Some((count, a)) => {
                        *count += 1;
                        if a.group != b.group {
                            self.problems.push(problem(
                                ErrorCode::DegreeConflict,
                                b.span,
                                format!("`{name}` is a group in one branch and a singleton in another"),
                            ));
                        } else if a.group && a.chain != b.chain {
                            self.problems.push(problem(
                                ErrorCode::GroupJoin,
                                b.span,
                                format!("group variable `{name}` is declared under different quantifiers"),
                            ));
                        }
                        a.conditional |= b.conditional;
                        a.iteration_conditional |= b.iteration_conditional;
                    }
                }
            }
        }
        seen.into_iter()
            .map(|(name, (count, mut occ))| {
                if count < n && !occ.group {
                    occ.conditional = true;
                }
                (name, occ)
            })
            .collect()
    }

    fn term(
        &mut self,
        t: &'q PatternTerm,
        path: usize,
        chain: &mut Vec<QuantId>,
        restricted: bool,
        selector: bool,
    ) -> Occs {
        match t {
            PatternTerm::Node(n) => {
                let occs = match &n.spec.variable {
                    Some(v) => self.declare(v, VarKind::Node, path, chain),
                    None => Occs::new(),
                };
                if let Some(f) = &n.spec.filter {
                    self.sites.push(Site {
                        expr: f,
                        path: Some(path),
                        chain: chain.clone(),
                        inside: BTreeSet::new(),
                    });
                }
                occs
            }
            PatternTerm::Edge { edge, quantifier } => {
                let id = quantifier.map(|q| self.quantifier(q, restricted, selector, path, edge.span));
                chain.extend(id);
                let mut occs = Occs::new();
                if let Some(spec) = &edge.spec {
                    if let Some(v) = &spec.variable {
                        occs = self.declare(v, VarKind::Edge, path, chain);
                    }
                    if let Some(f) = &spec.filter {
                        self.sites.push(Site {
                            expr: f,
                            path: Some(path),
                            chain: chain.clone(),
                            inside: BTreeSet::new(),
                        });
                    }
                }
                if id.is_some() {
                    chain.pop();
                    groupify(&mut occs);
                }
                occs
            }
            PatternTerm::Paren(p) => {
                let id = p
                    .quantifier()
                    .map(|q| self.quantifier(q, restricted, selector, path, p.span));
                chain.extend(id);
                let mut occs = self.term(&p.body, path, chain, restricted || p.restrictor.is_some(), selector);
                if let Some(f) = &p.filter {
                    self.sites.push(Site {
                        expr: f,
                        path: Some(path),
                        chain: chain.clone(),
                        inside: occs.keys().cloned().collect(),
                    });
                }
                if id.is_some() {
                    chain.pop();
                    groupify(&mut occs);
                }
                if p.repetition == Some(Repetition::Optional) {
                    for occ in occs.values_mut() {
                        if !occ.group {
                            occ.conditional = true;
                        }
                    }
                }
                occs
            }
            PatternTerm::Concat(items) => {
                let mut acc = Occs::new();
                for item in items {
                    let occs = self.term(item, path, chain, restricted, selector);
                    self.join(&mut acc, occs, false);
                }
                acc
            }
            PatternTerm::Union(bs) | PatternTerm::Alternation(bs) => {
                let all = bs
                    .iter()
                    .map(|b| self.term(b, path, chain, restricted, selector))
                    .collect();
                self.branches(all)
            }
        }
    }
}

fn groupify(occs: &mut Occs) {
    for occ in occs.values_mut() {
        if !occ.group {
            occ.group = true;
            occ.iteration_conditional = occ.conditional;
            occ.conditional = false;
        }
    }
}

fn article(k: VarKind) -> &'static str {
    match k {
        VarKind::Node => "a node",
        VarKind::Edge => "an edge",
        VarKind::Path => "a path",
    }
}

enum Resolved {
    Singleton { unconditional: bool },
    Group { crossed: Vec<QuantId> },
}

struct Checker<'a> {
    table: &'a VariableTable,
    quants: &'a [QuantInfo],
    problems: Vec<Problem>,
}

impl Checker<'_> {
    fn resolve(&mut self, var: &Ident, site: &Site) -> Option<(&VarInfo, Resolved)> {
        let table = self.table;
        let Some(info) = table.get(&var.name) else {
            self.problems.push(problem(
                ErrorCode::UndeclaredVariable,
                var.span,
                format!("`{}` is not declared", var.name),
            ));
            return None;
        };
        if info.kind == VarKind::Path {
            self.problems.push(problem(
                ErrorCode::IllegalReference,
                var.span,
                format!("path variable `{}` cannot be used in an expression", var.name),
            ));
            return None;
        }
        let Some(path) = site.path else {
            return Some(if info.chain.is_empty() {
                (
                    info,
                    Resolved::Singleton {
                        unconditional: info.category == Category::Unconditional,
                    },
                )
            } else {
                (info, Resolved::Group { crossed: Vec::new() })
            });
        };
        let resolved = if !info.paths.contains(&path) {
            None
        } else if info.chain == site.chain {
            let unconditional = if info.chain.is_empty() {
                info.category == Category::Unconditional
            } else {
                !info.iteration_conditional
            };
            Some(Resolved::Singleton { unconditional })
        } else if info.chain.is_empty() && info.category == Category::Unconditional {
            Some(Resolved::Singleton { unconditional: true })
        } else if info.chain.len() > site.chain.len()
            && info.chain.starts_with(&site.chain)
            && site.inside.contains(&info.name)
        {
            Some(Resolved::Group {
                crossed: info.chain[site.chain.len()..].to_vec(),
            })
        } else {
            None
        };
        match resolved {
            Some(r) => Some((info, r)),
            None => {
                self.problems.push(problem(
                    ErrorCode::IllegalReference,
                    var.span,
                    format!("`{}` is not visible from this WHERE clause", var.name),
                ));
                None
            }
        }
    }

    /// Resolves a variable used as a value source (property access or
    /// `COUNT(v.*)`).
    fn reference(&mut self, var: &Ident, site: &Site, agg: &mut Option<BTreeSet<String>>) {
        let Some((info, r)) = self.resolve(var, site) else { return };
        let Resolved::Group { crossed } = r else { return };
        let name = info.name.clone();
        match agg {
            None => self.problems.push(problem(
                ErrorCode::BareGroupReference,
                var.span,
                format!("group variable `{name}` may only be used inside an aggregate"),
            )),
            Some(set) => {
                set.insert(name.clone());
            }
        }
        let unbounded = crossed.iter().any(|id| {
            let q = &self.quants[id.0];
            q.quantifier.max.is_none() && !q.restricted
        });
        if unbounded {
            self.problems.push(problem(
                ErrorCode::UnboundedGroupPredicate,
                var.span,
                format!("prefilter over `{name}` sees an unbounded group; add a restrictor or move it to the final WHERE"),
            ));
        }
    }

    fn element_arg(&mut self, var: &Ident, site: &Site, want: VarKind) {
        let Some((info, r)) = self.resolve(var, site) else { return };
        if info.kind != want {
            let msg = format!("`{}` must be {} variable", var.name, article(want));
            self.problems.push(problem(ErrorCode::KindConflict, var.span, msg));
        } else if matches!(r, Resolved::Group { .. }) {
            let msg = format!("group variable `{}` may only be used inside an aggregate", var.name);
            self.problems.push(problem(ErrorCode::BareGroupReference, var.span, msg));
        }
    }

    fn expr(&mut self, e: &Expr, site: &Site, agg: &mut Option<BTreeSet<String>>) {
        match e {
            Expr::Literal(_) => {}
            Expr::Property { var, .. } => self.reference(var, site, agg),
            Expr::Neg(x) | Expr::Not(x) => self.expr(x, site, agg),
            Expr::IsNull { expr, .. } => self.expr(expr, site, agg),
            Expr::Binary { lhs, rhs, .. } => {
                self.expr(lhs, site, agg);
                self.expr(rhs, site, agg);
            }
            Expr::IsDirected(v) => self.element_arg(v, site, VarKind::Edge),
            Expr::IsSourceOf { node, edge } | Expr::IsDestinationOf { node, edge } => {
                self.element_arg(node, site, VarKind::Node);
                self.element_arg(edge, site, VarKind::Edge);
            }
            Expr::Same(vars, _) | Expr::AllDifferent(vars, _) => {
                for v in vars {
                    let Some((_, r)) = self.resolve(v, site) else { continue };
                    if !matches!(r, Resolved::Singleton { unconditional: true }) {
                        self.problems.push(problem(
                            ErrorCode::IllegalSameArgument,
                            v.span,
                            format!("`{}` is not an unconditional singleton here", v.name),
                        ));
                    }
                }
            }
            Expr::Aggregate { func, arg, span } => {
                if agg.is_some() {
                    self.problems
                        .push(problem(ErrorCode::IllegalAggregate, *span, "aggregates cannot be nested"));
                }
                let mut inner = Some(BTreeSet::new());
                match arg {
                    AggArg::Expr(x) => self.expr(x, site, &mut inner),
                    AggArg::Elements(v) => self.reference(v, site, &mut inner),
                }
                let groups = inner.unwrap();
                if let Some(outer) = agg {
                    outer.extend(groups.iter().cloned());
                }
                if groups.len() != 1 {
                    let msg = if groups.is_empty() {
                        format!("{} needs a group variable to aggregate over", func.name())
                    } else {
                        format!("{} mixes several group variables", func.name())
                    };
                    self.problems.push(problem(ErrorCode::IllegalAggregate, *span, msg));
                }
            }
        }
    }
}

/// Classifies variables and checks every rule, without parsing.
pub fn analyze_query(query: Query) -> Result<AnalyzedQuery, Vec<(ErrorCode, Span, String)>> {
    let (variables, quantifiers, problems) = {
        let mut c = Classifier::default();
        let mut all = Occs::new();
        for (i, p) in query.paths.iter().enumerate() {
            let mut chain = Vec::new();
            let mut occs = c.term(&p.body, i, &mut chain, p.restrictor.is_some(), p.selector.is_some());
            if let Some(v) = &p.variable {
                let path_occ = c.declare(v, VarKind::Path, i, &[]);
                if occs.contains_key(&v.name) {
                    // already reported as a kind conflict
                } else {
                    occs.extend(path_occ);
                }
            }
            c.join(&mut all, occs, true);
        }
        if let Some(f) = &query.filter {
            c.sites.push(Site {
                expr: f,
                path: None,
                chain: Vec::new(),
                inside: BTreeSet::new(),
            });
        }
        let vars = c
            .order
            .iter()
            .filter_map(|(name, span)| {
                let occ = all.get(name)?;
                Some(VarInfo {
                    name: name.clone(),
                    kind: c.kinds[name],
                    category: if occ.group {
                        Category::Group
                    } else if occ.conditional {
                        Category::Conditional
                    } else {
                        Category::Unconditional
                    },
                    chain: occ.chain.clone(),
                    iteration_conditional: occ.iteration_conditional,
                    paths: c.paths[name].clone(),
                    span: *span,
                })
            })
            .collect();
        let table = VariableTable { vars };
        let mut checker = Checker {
            table: &table,
            quants: &c.quants,
            problems: Vec::new(),
        };
        for site in &c.sites {
            checker.expr(site.expr, site, &mut None);
        }
        let mut problems = c.problems;
        problems.extend(checker.problems);
        (table, c.quants, problems)
    };
    if problems.is_empty() {
        Ok(AnalyzedQuery {
            query,
            variables,
            quantifiers,
        })
    } else {
        Err(problems.into_iter().map(|p| (p.code, p.span, p.message)).collect())
    }
}

/// Parses and analyzes a query.
pub fn analyze(text: &str) -> Result<AnalyzedQuery, ErrorReport> {
    let query = parse(text).map_err(|e| ErrorReport {
        diagnostics: vec![Diagnostic {
            code: match e.kind {
                ParseErrorKind::Lex => ErrorCode::LexError,
                ParseErrorKind::Parse => ErrorCode::ParseError,
            },
            line: e.line,
            column: e.column,
            message: e.message,
            offset: e.offset,
        }],
    })?;
    analyze_query(query).map_err(|problems| {
        let mut diagnostics: Vec<Diagnostic> = problems
            .into_iter()
            .map(|(code, span, message)| {
                let (line, column) = line_col(text, span.start);
                Diagnostic {
                    code,
                    line,
                    column,
                    message,
                    offset: span.start,
                }
            })
            .collect();
        diagnostics.sort_by_key(|d| (d.offset, d.code));
        diagnostics.dedup_by(|a, b| a.offset == b.offset && a.code == b.code);
        ErrorReport { diagnostics }
    })
}
