//! Compares the engine with the brute-force oracle on a few queries.

use gpml::analyze::analyze;
use gpml::eval::{eval_graph_pattern, same_multiset};
use gpml::graph::fixture;
use gpml::oracle::{oracle_match, path_len_bound, OracleConfig};

fn main() {
    let g = fixture();
    let config = OracleConfig::default();
    for q in [
        "MATCH (x)-[e]->(y)",
        "MATCH ANY SHORTEST p = (a WHERE a.owner='Dave')-[:Transfer]->*(b WHERE b.owner='Aretha')",
        "MATCH (c:City) |+| (c:Country)",
        "MATCH (x) [->(y)]?",
    ] {
        let analyzed = analyze(q).unwrap();
        let bound = path_len_bound(&analyzed.query, &g, config.max_path_len);
        let engine = eval_graph_pattern(&analyzed, &g);
        let oracle = oracle_match(&analyzed.query, &g, &config).unwrap();
        let verdict = if same_multiset(&engine, &oracle, &g) { "agree" } else { "DIFFER" };
        println!("{verdict} ({} rows, paths up to {bound}): {q}", engine.len());
    }
}
