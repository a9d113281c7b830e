//! Union keeps a set, multiset alternation keeps one row per branch; the
//! overlapping-range law holds.

use gpml::eval::{run_query, same_multiset};
use gpml::graph::fixture;

fn main() {
    let g = fixture();
    for q in ["MATCH (c:City) | (c:Country)", "MATCH (c:City) |+| (c:Country)"] {
        println!("{q}: {:?}", run_query(q, &g).unwrap().column_values("c", &g));
    }
    let wide = run_query("MATCH ->{1,5} | ->{3,7}", &g).unwrap();
    let narrow = run_query("MATCH ->{1,7}", &g).unwrap();
    println!("{} rows each, equal: {}", wide.len(), same_multiset(&wide, &narrow, &g));
}
