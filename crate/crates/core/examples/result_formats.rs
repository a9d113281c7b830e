//! Writes one result as a grid, CSV and JSON lines.

use gpml::eval::run_query;
use gpml::graph::fixture;
use gpml::output::{write_table, Format};

fn main() {
    let g = fixture();
    let t = run_query("MATCH p = (x:Account WHERE x.owner='Jay')-[t:Transfer]->(y) [->(z:City)]?", &g).unwrap();
    for f in ["table", "csv", "jsonl"] {
        println!("{f}:");
        print!("{}", write_table(&t, &g, f.parse::<Format>().unwrap()));
    }
}
