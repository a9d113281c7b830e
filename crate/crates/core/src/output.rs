//! Result table serialization: ASCII grid, CSV and JSON lines.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value as Json};

use crate::eval::{Cell, ResultTable};
use crate::graph::PropertyGraph;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(format!("unknown format `{s}` (expected table, csv or jsonl)")),
        }
    }
}

/// Serializes `table` in `format`. Output always ends with a newline.
pub fn write_table(table: &ResultTable, graph: &PropertyGraph, format: Format) -> String {
    match format {
        Format::Table => grid(table, graph),
        Format::Csv => csv_text(table, graph),
        Format::Jsonl => jsonl(table, graph),
    }
}

/// An ASCII grid followed by a row count.
pub fn grid(table: &ResultTable, graph: &PropertyGraph) -> String {
    let rows = table.rendered(graph);
    let mut widths: Vec<usize> = table.columns.iter().map(|c| c.chars().count()).collect();
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let rule: String = widths.iter().fold("+".to_string(), |mut s, w| {
        s.push_str(&"-".repeat(w + 2));
        s.push('+');
        s
    });
    let line = |cells: &[String]| -> String {
        cells
            .iter()
            .zip(&widths)
            .fold("|".to_string(), |mut s, (c, w)| {
                let _ = write!(s, " {c:<w$} |");
                s
            })
    };
    let mut out = String::new();
    if !table.columns.is_empty() {
        let _ = writeln!(out, "{rule}\n{}\n{rule}", line(&table.columns));
        for r in &rows {
            let _ = writeln!(out, "{}", line(r));
        }
        let _ = writeln!(out, "{rule}");
    }
    let n = rows.len();
    let _ = writeln!(out, "({n} row{})", if n == 1 { "" } else { "s" });
    out
}

/// RFC 4180 CSV with a header row.
pub fn csv_text(table: &ResultTable, graph: &PropertyGraph) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for r in table.rendered(graph) {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn cell_json(cell: &Cell, graph: &PropertyGraph) -> String {
    match cell {
        Cell::Null => "null".to_string(),
        Cell::Element(e) => json!(graph.name(*e)).to_string(),
        Cell::List(es) => es.iter().map(|e| json!(graph.name(*e))).collect::<Json>().to_string(),
        Cell::Path(p) => {
            let nodes: Json = p.nodes().iter().map(|n| json!(graph.node(*n).id)).collect();
            let edges: Json = p.edges().map(|e| json!(graph.edge(e).id)).collect();
            format!("{{\"nodes\":{nodes},\"edges\":{edges}}}")
        }
    }
}

/// One JSON object per row, keys in column order.
pub fn jsonl(table: &ResultTable, graph: &PropertyGraph) -> String {
    let mut out = String::new();
    for row in &table.rows {
        let fields: Vec<String> = table
            .columns
            .iter()
            .zip(row)
            .map(|(c, v)| format!("{}:{}", json!(c), cell_json(v, graph)))
            .collect();
        let _ = writeln!(out, "{{{}}}", fields.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::run_query;
    use crate::graph::fixture;

    #[test]
    fn csv_has_header_and_rows() {
        let g = fixture();
        let t = run_query("MATCH (c:City) | (c:Country)", &g).unwrap();
        assert_eq!(write_table(&t, &g, Format::Csv), "c\r\nc1\r\nc2\r\n");
    }

    #[test]
    fn csv_quotes_group_lists() {
        let g = fixture();
        let t = run_query("MATCH (x WHERE x.owner='Dave') [-[t:Transfer]->]{2} (y)", &g).unwrap();
        let text = write_table(&t, &g, Format::Csv);
        assert!(text.lines().skip(1).all(|l| l.contains("\"[t")), "{text}");
    }

    #[test]
    fn jsonl_objects_keep_column_order() {
        let g = fixture();
        let t = run_query("MATCH ANY SHORTEST p = (a WHERE a.owner='Dave')-[:Transfer]->+(b WHERE b.owner='Aretha')", &g)
            .unwrap();
        let text = jsonl(&t, &g);
        assert_eq!(
            text,
            "{\"a\":\"a6\",\"b\":\"a2\",\"p\":{\"nodes\":[\"a6\",\"a3\",\"a2\"],\"edges\":[\"t5\",\"t2\"]}}\n"
        );
        let v: Json = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(v["p"]["edges"][1], "t2");
    }

    #[test]
    fn jsonl_nulls_are_explicit() {
        let g = fixture();
        let t = run_query("MATCH (x WHERE x.owner='Scott') [-[:signInWithIP]->(ip)]? -[:hasPhone]-(p)", &g).unwrap();
        assert!(jsonl(&t, &g).lines().count() >= 1);
        let t = run_query("MATCH (x WHERE x.owner='Mike') [-[:signInWithIP]->(ip)]?", &g).unwrap();
        assert_eq!(jsonl(&t, &g), "{\"x\":\"a3\",\"ip\":null}\n");
    }

    #[test]
    fn grid_layout() {
        let g = fixture();
        let t = run_query("MATCH (c:City)", &g).unwrap();
        assert_eq!(grid(&t, &g), "+----+\n| c  |\n+----+\n| c2 |\n+----+\n(1 row)\n");
    }

    #[test]
    fn format_names() {
        assert_eq!("jsonl".parse(), Ok(Format::Jsonl));
        assert!("xml".parse::<Format>().is_err());
    }
}
