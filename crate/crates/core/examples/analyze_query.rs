//! Shows the variable table for an accepted query and the codes of rejected ones.

use gpml::analyze::analyze;

fn main() {
    let ok = analyze("MATCH (a:Account) [()-[t:Transfer]->() WHERE t.amount>1000000]{2,5} (b) [->(c)]?").unwrap();
    for v in &ok.variables.vars {
        println!("{:<2} {:?} {:?}", v.name, v.kind, v.category);
    }

    for q in [
        "MATCH (a)-[t:Transfer]->*(b)",
        "MATCH [(x)->(y)] | [(x)->(z)], (y)->(w)",
        "MATCH (x)-[x]->(y)",
    ] {
        match analyze(q) {
            Ok(_) => println!("accepted: {q}"),
            Err(e) => println!("{:?}: {q}", e.codes()),
        }
    }
}
