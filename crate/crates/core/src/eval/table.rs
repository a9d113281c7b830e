use std::cmp::Ordering;
use std::fmt::Write;

use crate::graph::{Element, Path, PropertyGraph};

/// One value of a result row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    /// An unbound conditional variable.
    Null,
    Element(Element),
    /// A group variable's elements in iteration order.
    List(Vec<Element>),
    Path(Path),
}

impl Cell {
    pub fn render(&self, graph: &PropertyGraph) -> String {
        match self {
            Cell::Null => "null".to_string(),
            Cell::Element(e) => graph.name(*e).to_string(),
            Cell::List(es) => {
                let names: Vec<&str> = es.iter().map(|e| graph.name(*e)).collect();
                format!("[{}]", names.join(","))
            }
            Cell::Path(p) => format!("<{}>", p.display(graph)),
        }
    }
}

/// Query output: named columns over a multiset of rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cell values of one column, rendered.
    pub fn column_values(&self, name: &str, graph: &PropertyGraph) -> Vec<String> {
        let i = self.column(name).expect("known column");
        self.rows.iter().map(|r| r[i].render(graph)).collect()
    }

    pub fn rendered(&self, graph: &PropertyGraph) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|c| c.render(graph)).collect())
            .collect()
    }

    /// Rows as a sorted multiset, for order-insensitive comparison.
    pub fn multiset(&self, graph: &PropertyGraph) -> Vec<Vec<String>> {
        let mut rows = self.rendered(graph);
        rows.sort();
        rows
    }

    /// Sorts rows by their paths' element ids, then by rendered cells.
    pub fn sort(&mut self, graph: &PropertyGraph) {
        let key = |row: &Vec<Cell>| -> (Vec<Vec<String>>, Vec<String>) {
            let paths = row
                .iter()
                .filter_map(|c| match c {
                    Cell::Path(p) => Some(p.elements().iter().map(|e| graph.name(*e).to_string()).collect()),
                    _ => None,
                })
                .collect();
            (paths, row.iter().map(|c| c.render(graph)).collect())
        };
        let mut keyed: Vec<_> = std::mem::take(&mut self.rows).into_iter().map(|r| (key(&r), r)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        self.rows = keyed.into_iter().map(|(_, r)| r).collect();
    }

    /// A plain aligned text table.
    pub fn to_text(&self, graph: &PropertyGraph) -> String {
        let rows = self.rendered(graph);
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |cells: &[String], out: &mut String| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join(" | ").trim_end());
        };
        line(&self.columns, &mut out);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        let _ = writeln!(out, "{}", rule.join("-+-"));
        for r in &rows {
            line(r, &mut out);
        }
        let _ = write!(out, "({} row{})", rows.len(), if rows.len() == 1 { "" } else { "s" });
        out
    }
}

/// Compares two tables as multisets of rendered rows over the same columns.
pub fn same_multiset(a: &ResultTable, b: &ResultTable, graph: &PropertyGraph) -> bool {
    a.columns == b.columns && a.multiset(graph).cmp(&b.multiset(graph)) == Ordering::Equal
}
