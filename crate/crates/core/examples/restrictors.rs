//! TRAIL, ACYCLIC and SIMPLE over the same pattern; a restrictor can empty
//! a result that a selector keeps.

use gpml::eval::run_query;
use gpml::graph::fixture;

fn main() {
    let g = fixture();
    let body = "p = (a WHERE a.owner='Dave')-[:Transfer]->*(b WHERE b.owner='Aretha')";
    for r in ["TRAIL", "ACYCLIC", "SIMPLE"] {
        let t = run_query(&format!("MATCH {r} {body}"), &g).unwrap();
        println!("{r}: {:?}", t.column_values("p", &g));
    }

    let hops = "(p:Account WHERE p.owner='Natalia')->{1,10}(q:Account WHERE q.owner='Mike')->{1,10}\
                (r:Account WHERE r.owner='Scott')";
    for head in ["", "ALL SHORTEST", "TRAIL"] {
        let t = run_query(&format!("MATCH {head} {hops}"), &g).unwrap();
        println!("{:<12} {} rows", if head.is_empty() { "plain" } else { head }, t.len());
    }
}
