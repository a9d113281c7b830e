//! Random graphs and queries shared by the integration suites.

#![allow(dead_code)]

pub mod ast;
pub mod queries;

use gpml::analyze::{analyze, AnalyzedQuery};
use gpml::graph::{Ends, PropertyGraph, Value};
use gpml::syntax::Orientation;
use rand::seq::SliceRandom;
use rand::Rng;

/// A graph with at most `max_nodes` nodes, mixing directed, undirected,
/// parallel and self-loop edges.
pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize, max_edges: usize) -> PropertyGraph {
    let mut g = PropertyGraph::new();
    let n = rng.gen_range(1..=max_nodes);
    for i in 0..n {
        let labels: &[&str] = [&["A"][..], &["B"], &["A", "B"], &[]].choose(rng).unwrap();
        let mut props = vec![];
        if rng.gen_bool(0.8) {
            props.push(("v", Value::Int(rng.gen_range(0..4))));
        }
        g.add_node(&format!("n{i}"), labels.iter().copied(), props).unwrap();
    }
    let m = rng.gen_range(0..=max_edges);
    for j in 0..m {
        let s = format!("n{}", rng.gen_range(0..n));
        let d = format!("n{}", rng.gen_range(0..n));
        let ends = if rng.gen_bool(0.3) {
            Ends::Undirected(&s, &d)
        } else {
            Ends::Directed(&s, &d)
        };
        let label = if rng.gen_bool(0.5) { "E" } else { "F" };
        let mut props = vec![];
        if rng.gen_bool(0.8) {
            props.push(("w", Value::Int(rng.gen_range(0..4))));
        }
        g.add_edge(&format!("e{j}"), ends, [label], props).unwrap();
    }
    g
}

/// Feature switches for the query generator.
#[derive(Clone, Copy, Debug)]
pub struct QueryShape {
    pub max_paths: usize,
    pub max_hops: usize,
}

impl Default for QueryShape {
    fn default() -> Self {
        QueryShape {
            max_paths: 2,
            max_hops: 3,
        }
    }
}

const SELECTORS: [&str; 6] = ["ANY", "ANY SHORTEST", "ALL SHORTEST", "ANY 2", "SHORTEST 2", "SHORTEST 2 GROUP"];
const RESTRICTORS: [&str; 3] = ["TRAIL", "ACYCLIC", "SIMPLE"];

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    /// Whether unbounded quantifiers are currently allowed.
    unbounded: bool,
}

impl<R: Rng> Gen<'_, R> {
    fn pick<'a>(&mut self, xs: &[&'a str]) -> &'a str {
        xs.choose(self.rng).unwrap()
    }

    fn node(&mut self) -> String {
        let var = if self.rng.gen_bool(0.6) { self.pick(&["x", "y", "z"]) } else { "" };
        let label = match self.rng.gen_range(0..6) {
            0 => ":A",
            1 => ":B",
            2 => ":A|B",
            3 => ":!A",
            _ => "",
        };
        let filter = if !var.is_empty() && self.rng.gen_bool(0.25) {
            let op = self.pick(&["=", "<>", "<", ">="]);
            format!(" WHERE {var}.v {op} {}", self.rng.gen_range(0..4))
        } else {
            String::new()
        };
        format!("({var}{label}{filter})")
    }

    fn quantifier(&mut self) -> String {
        match self.rng.gen_range(0..8) {
            0 if self.unbounded => "*".into(),
            1 if self.unbounded => "+".into(),
            2 if self.unbounded => "{2,}".into(),
            3 => "?".into(),
            _ => {
                let m = self.rng.gen_range(0..3);
                format!("{{{m},{}}}", m + self.rng.gen_range(0..2))
            }
        }
    }

    fn edge(&mut self) -> String {
        let o = *Orientation::ALL.choose(self.rng).unwrap();
        let quantified = self.rng.gen_bool(0.3);
        let text = if self.rng.gen_bool(0.35) {
            o.abbreviation().to_string()
        } else {
            let var = if self.rng.gen_bool(0.6) { self.pick(&["e", "f"]) } else { "" };
            let label = match self.rng.gen_range(0..5) {
                0 => ":E",
                1 => ":F",
                2 => ":%",
                _ => "",
            };
            let filter = if !var.is_empty() && self.rng.gen_bool(0.25) {
                format!(" WHERE {var}.w > {}", self.rng.gen_range(0..3))
            } else {
                String::new()
            };
            let (open, close) = o.delimiters();
            format!("{open}{var}{label}{filter}{close}")
        };
        if quantified {
            let q = self.quantifier();
            // `?` is not an edge quantifier
            let q = if q == "?" { "{0,1}".to_string() } else { q };
            format!("{text}{q}")
        } else {
            text
        }
    }

    fn paren(&mut self, depth: usize) -> String {
        let restrictor = if self.rng.gen_bool(0.2) {
            format!("{} ", self.pick(&RESTRICTORS))
        } else {
            String::new()
        };
        let outer = self.unbounded;
        self.unbounded |= !restrictor.is_empty();
        let body = if self.rng.gen_bool(0.3) {
            let sep = self.pick(&[" | ", " |+| "]);
            let a = self.seq(depth + 1, 1);
            let b = self.seq(depth + 1, 1);
            format!("{a}{sep}{b}")
        } else {
            self.seq(depth + 1, 2)
        };
        self.unbounded = outer;
        let filter = if self.rng.gen_bool(0.2) {
            match self.rng.gen_range(0..3) {
                0 => " WHERE e.w = 1".to_string(),
                1 => " WHERE COUNT(f.*) >= 1".to_string(),
                _ => " WHERE x.v IS NOT NULL".to_string(),
            }
        } else {
            String::new()
        };
        let rep = match self.rng.gen_range(0..3) {
            0 => String::new(),
            _ => self.quantifier(),
        };
        format!("[{restrictor}{body}{filter}]{rep}")
    }

    /// Node, then up to `hops` (edge or bracket, node) steps.
    fn seq(&mut self, depth: usize, hops: usize) -> String {
        let mut out = self.node();
        for _ in 0..self.rng.gen_range(0..=hops) {
            let step = if depth < 2 && self.rng.gen_bool(0.3) {
                self.paren(depth)
            } else {
                self.edge()
            };
            out.push(' ');
            out.push_str(&step);
            out.push(' ');
            out.push_str(&self.node());
        }
        out
    }

    fn path(&mut self, shape: QueryShape) -> String {
        let mut head = String::new();
        let selector = self.rng.gen_bool(0.4);
        if selector {
            head.push_str(self.pick(&SELECTORS));
            head.push(' ');
        }
        let restrictor = self.rng.gen_bool(0.4);
        if restrictor {
            head.push_str(self.pick(&RESTRICTORS));
            head.push(' ');
        }
        if self.rng.gen_bool(0.3) {
            head.push_str(self.pick(&["p = ", "q = "]));
        }
        self.unbounded = selector || restrictor;
        let body = if self.rng.gen_bool(0.15) {
            let sep = self.pick(&[" | ", " |+| "]);
            let a = self.seq(0, shape.max_hops);
            let b = self.seq(0, shape.max_hops);
            format!("{a}{sep}{b}")
        } else {
            self.seq(0, shape.max_hops)
        };
        format!("{head}{body}")
    }

    fn query(&mut self, shape: QueryShape) -> String {
        let n = self.rng.gen_range(1..=shape.max_paths);
        let paths: Vec<String> = (0..n).map(|_| self.path(shape)).collect();
        let mut q = format!("MATCH {}", paths.join(", "));
        if self.rng.gen_bool(0.2) {
            q.push_str(match self.rng.gen_range(0..3) {
                0 => " WHERE x.v = y.v",
                1 => " WHERE x.v > 1 OR z.v IS NULL",
                _ => " WHERE NOT SAME(x, y)",
            });
        }
        q
    }
}

/// A random query that passes analysis, with its analysis.
pub fn random_query<R: Rng>(rng: &mut R, shape: QueryShape) -> (String, AnalyzedQuery) {
    loop {
        let text = Gen { rng, unbounded: false }.query(shape);
        if let Ok(a) = analyze(&text) {
            return (text, a);
        }
    }
}

/// Longest walk the differential oracle enumerates.
pub const FUZZ_LEN_CAP: usize = 6;

pub struct Divergence {
    pub query: String,
    pub graph: String,
    pub engine: String,
    pub oracle: String,
}

#[derive(Default)]
pub struct FuzzReport {
    pub checked: usize,
    /// Pairs whose length bound exceeds [`FUZZ_LEN_CAP`]; drawn again.
    pub skipped: usize,
    pub divergences: Vec<Divergence>,
    /// Non-empty engine results among the checked pairs.
    pub non_empty: usize,
    /// Grammar features seen in checked queries.
    pub features: std::collections::BTreeSet<&'static str>,
}

/// Grammar features a fuzz corpus must exercise, by marker text.
pub const FEATURES: &[(&str, &str)] = &[
    ("orientation <-", "<-"),
    ("orientation ~", "~"),
    ("orientation ->", "->"),
    ("orientation <~", "<~"),
    ("orientation ~>", "~>"),
    ("orientation <->", "<->"),
    ("orientation -", "-"),
    ("quantifier {m,n}", "}"),
    ("quantifier *", "*"),
    ("quantifier +", "+"),
    ("optional ?", "]?"),
    ("union", " | "),
    ("alternation", " |+| "),
    ("TRAIL", "TRAIL"),
    ("ACYCLIC", "ACYCLIC"),
    ("SIMPLE", "SIMPLE"),
    ("ANY", "ANY "),
    ("ANY SHORTEST", "ANY SHORTEST"),
    ("ALL SHORTEST", "ALL SHORTEST"),
    ("ANY k", "ANY 2"),
    ("SHORTEST k", "SHORTEST 2 "),
    ("SHORTEST k GROUP", "SHORTEST 2 GROUP"),
];

/// Features present in a query, by syntax tree rather than text where text
/// would be ambiguous.
pub fn features_of(query: &gpml::syntax::Query) -> Vec<&'static str> {
    use gpml::syntax::PatternTerm;
    fn orientations(t: &PatternTerm, out: &mut Vec<Orientation>) {
        match t {
            PatternTerm::Node(_) => {}
            PatternTerm::Edge { edge, .. } => out.push(edge.orientation),
            PatternTerm::Paren(p) => orientations(&p.body, out),
            PatternTerm::Concat(ts) | PatternTerm::Union(ts) | PatternTerm::Alternation(ts) => {
                ts.iter().for_each(|t| orientations(t, out))
            }
        }
    }
    let text = gpml::syntax::render(query);
    let mut seen: Vec<&'static str> = FEATURES
        .iter()
        .filter(|(name, marker)| !name.starts_with("orientation") && text.contains(marker))
        .map(|(name, _)| *name)
        .collect();
    let mut os = Vec::new();
    for p in &query.paths {
        orientations(&p.body, &mut os);
    }
    for o in os {
        let name = FEATURES
            .iter()
            .find(|(n, m)| n.starts_with("orientation") && *m == o.abbreviation())
            .unwrap()
            .0;
        seen.push(name);
    }
    seen
}

/// Runs `cases` (graph, query) pairs through the engine and the oracle.
pub fn differential(seed: u64, cases: usize) -> FuzzReport {
    use gpml::eval::{eval_graph_pattern, same_multiset};
    use gpml::oracle::{oracle_match, path_len_bound, OracleConfig};
    use rand::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport::default();
    while report.checked < cases {
        let g = random_graph(&mut rng, 6, 7);
        let (text, analyzed) = random_query(&mut rng, QueryShape::default());
        let len = path_len_bound(&analyzed.query, &g, usize::MAX);
        if len > FUZZ_LEN_CAP {
            report.skipped += 1;
            continue;
        }
        let engine = eval_graph_pattern(&analyzed, &g);
        let config = OracleConfig {
            max_path_len: len,
            max_rows: 1_000_000,
        };
        let oracle = oracle_match(&analyzed.query, &g, &config).expect("within caps");
        report.checked += 1;
        report.features.extend(features_of(&analyzed.query));
        report.non_empty += !engine.is_empty() as usize;
        if !same_multiset(&engine, &oracle, &g) {
            report.divergences.push(Divergence {
                query: text,
                graph: gpml::graph::to_json(&g),
                engine: engine.to_text(&g),
                oracle: oracle.to_text(&g),
            });
        }
    }
    report
}

/// A random graph over the bank vocabulary: accounts, places, transfers and
/// location edges.
pub fn random_bank_graph<R: Rng>(rng: &mut R, max_nodes: usize) -> PropertyGraph {
    let mut g = PropertyGraph::new();
    let n = rng.gen_range(1..=max_nodes);
    let owners = ["Jay", "Dave", "Mike"];
    let mut accounts = vec![];
    let mut places = vec![];
    for i in 0..n {
        let id = format!("n{i}");
        match rng.gen_range(0..5) {
            0 => {
                let labels: &[&str] = [&["City"][..], &["Country"], &["City", "Country"]].choose(rng).unwrap();
                g.add_node(&id, labels.iter().copied(), Vec::<(&str, Value)>::new()).unwrap();
                places.push(id);
            }
            _ => {
                let owner = *owners.choose(rng).unwrap();
                g.add_node(&id, ["Account"], [("owner", Value::from(owner))]).unwrap();
                accounts.push(id);
            }
        }
    }
    let all: Vec<String> = accounts.iter().chain(&places).cloned().collect();
    for j in 0..rng.gen_range(0..=8) {
        let s = all.choose(rng).unwrap();
        let d = all.choose(rng).unwrap();
        let amount = Value::Int(rng.gen_range(1..=10) * 1_000_000);
        g.add_edge(&format!("t{j}"), Ends::Directed(s, d), ["Transfer"], [("amount", amount)])
            .unwrap();
    }
    for (j, a) in accounts.iter().enumerate() {
        if let Some(p) = places.choose(rng) {
            if rng.gen_bool(0.8) {
                g.add_edge(&format!("li{j}"), Ends::Directed(a, p), ["isLocatedIn"], Vec::<(&str, Value)>::new())
                    .unwrap();
            }
        }
    }
    g
}
