//! Each selector over the same unbounded Transfer pattern.

use gpml::eval::run_query;
use gpml::graph::fixture;

fn main() {
    let g = fixture();
    let body = "p = (a WHERE a.owner='Dave')-[:Transfer]->*(b WHERE b.owner='Aretha')";
    for sel in ["ANY", "ANY SHORTEST", "ALL SHORTEST", "ANY 2", "SHORTEST 2", "SHORTEST 2 GROUP"] {
        let t = run_query(&format!("MATCH {sel} {body}"), &g).unwrap();
        println!("{sel}:");
        for p in t.column_values("p", &g) {
            println!("  {p}");
        }
    }
}
