//! Deduplication, selectors, cross-pattern joins and the final filter.

use std::collections::{BTreeMap, HashSet};

use super::expr::{holds, Bound, Env};
use super::matcher::{match_path, PathMatch};
use super::normalize::{expansion_bounds, normalize, Filter, Ref, Sym};
use super::table::{Cell, ResultTable};
use crate::analyze::{analyze, AnalyzedQuery, Category, ErrorReport, VarKind};
use crate::graph::{NodeId, PropertyGraph};
use crate::syntax::Selector;

/// Keeps the first of every set of matches with equal keys.
pub fn reduce_dedup(matches: Vec<PathMatch>) -> Vec<PathMatch> {
    let mut seen = HashSet::new();
    matches.into_iter().filter(|m| seen.insert(m.key.clone())).collect()
}

/// Tie-break order inside a partition: shortest first, then by element ids,
/// then by the bindings listed by variable name. Matches that still tie
/// produce identical rows.
type OrderKey = (usize, Vec<String>, Vec<(String, Vec<String>)>);

fn order_key(graph: &PropertyGraph, names: &[String], m: &PathMatch) -> OrderKey {
    let ids = m.path.elements().iter().map(|e| graph.name(*e).to_string()).collect();
    let mut bindings: Vec<(String, Vec<String>)> = m
        .occurrences()
        .into_iter()
        .map(|(s, es)| {
            (
                names[s as usize].clone(),
                es.iter().map(|e| graph.name(*e).to_string()).collect(),
            )
        })
        .collect();
    bindings.sort();
    (m.path.len(), ids, bindings)
}

/// Applies a selector per (first node, last node) partition. `names` maps
/// variable symbols to names. The result is ordered by partition and then
/// by the tie-break order.
pub fn apply_selector(
    selector: Option<Selector>,
    matches: Vec<PathMatch>,
    graph: &PropertyGraph,
    names: &[String],
) -> Vec<PathMatch> {
    let Some(selector) = selector else { return matches };
    let mut parts: BTreeMap<(NodeId, NodeId), Vec<PathMatch>> = BTreeMap::new();
    for m in matches {
        parts.entry((m.path.first(), m.path.last())).or_default().push(m);
    }
    let mut out = Vec::new();
    for (_, ms) in parts {
        let mut keyed: Vec<_> = ms.into_iter().map(|m| (order_key(graph, names, &m), m)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let mut ms: Vec<PathMatch> = keyed.into_iter().map(|(_, m)| m).collect();
        let shortest = ms[0].path.len();
        match selector {
            Selector::Any | Selector::AnyShortest => ms.truncate(1),
            Selector::AnyK(k) | Selector::ShortestK(k) => ms.truncate(k as usize),
            Selector::AllShortest => ms.retain(|m| m.path.len() == shortest),
            Selector::ShortestKGroup(k) => {
                let mut lengths: Vec<usize> = ms.iter().map(|m| m.path.len()).collect();
                lengths.dedup();
                lengths.truncate(k as usize);
                ms.retain(|m| lengths.contains(&m.path.len()));
            }
        }
        out.extend(ms);
    }
    out
}

type Row = BTreeMap<Sym, Cell>;

/// Variable values of one path match.
fn path_row(analyzed: &AnalyzedQuery, index: usize, path_var: Option<Sym>, m: &PathMatch) -> Row {
    let occ = m.occurrences();
    let mut row = Row::new();
    for (sym, info) in analyzed.variables.vars.iter().enumerate() {
        let sym = sym as Sym;
        if !info.paths.contains(&index) {
            continue;
        }
        let cell = if info.kind == VarKind::Path {
            if path_var != Some(sym) {
                continue;
            }
            Cell::Path(m.path.clone())
        } else if info.category == Category::Group {
            Cell::List(occ.get(&sym).cloned().unwrap_or_default())
        } else {
            occ.get(&sym)
                .and_then(|v| v.first())
                .map(|e| Cell::Element(*e))
                .unwrap_or(Cell::Null)
        };
        row.insert(sym, cell);
    }
    row
}

struct RowEnv<'r, 'q> {
    row: &'r Row,
    filter: &'r Filter<'q>,
}

impl Env for RowEnv<'_, '_> {
    fn lookup(&self, var: &str) -> Bound {
        let sym = match self.filter.refs.iter().find(|(n, _)| n == var) {
            Some((_, Ref::Single { sym, .. } | Ref::Group { sym })) => *sym,
            None => return Bound::Single(None),
        };
        match self.row.get(&sym) {
            Some(Cell::Element(e)) => Bound::Single(Some(*e)),
            Some(Cell::List(es)) => Bound::Group(es.clone()),
            _ => Bound::Single(None),
        }
    }
}

/// Evaluates an analyzed query.
pub fn eval_graph_pattern(analyzed: &AnalyzedQuery, graph: &PropertyGraph) -> ResultTable {
    let normalized = normalize(analyzed);
    let bounds = expansion_bounds(&normalized, graph);
    let names: Vec<String> = analyzed.variables.vars.iter().map(|v| v.name.clone()).collect();
    let mut rows: Vec<Row> = vec![Row::new()];
    for (i, path) in normalized.paths.iter().enumerate() {
        let matches = apply_selector(path.selector, reduce_dedup(match_path(path, &bounds, graph)), graph, &names);
        let path_var = path.variable.as_ref().map(|(s, _)| *s);
        let new: Vec<Row> = matches.iter().map(|m| path_row(analyzed, i, path_var, m)).collect();
        let mut joined = Vec::new();
        for left in &rows {
            for right in &new {
                let agree = right.iter().all(|(s, c)| left.get(s).is_none_or(|l| l == c));
                if agree {
                    let mut r = left.clone();
                    r.extend(right.iter().map(|(s, c)| (*s, c.clone())));
                    joined.push(r);
                }
            }
        }
        rows = joined;
    }
    if let Some(f) = &normalized.filter {
        rows.retain(|row| holds(f.expr, &RowEnv { row, filter: f }, graph));
    }
    let vars = &analyzed.variables.vars;
    let order: Vec<usize> = (0..vars.len())
        .filter(|&i| vars[i].kind != VarKind::Path)
        .chain((0..vars.len()).filter(|&i| vars[i].kind == VarKind::Path))
        .collect();
    let mut table = ResultTable {
        columns: order.iter().map(|&i| vars[i].name.clone()).collect(),
        rows: rows
            .into_iter()
            .map(|r| order.iter().map(|&i| r.get(&(i as Sym)).cloned().unwrap_or(Cell::Null)).collect())
            .collect(),
    };
    table.sort(graph);
    table
}

/// Parses, analyzes and evaluates `text`.
pub fn run_query(text: &str, graph: &PropertyGraph) -> Result<ResultTable, ErrorReport> {
    Ok(eval_graph_pattern(&analyze(text)?, graph))
}
