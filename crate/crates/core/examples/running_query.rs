//! Evaluates the running bank query on the bundled graph, with `|` and `|+|`.

use gpml::eval::run_query;
use gpml::graph::fixture;
use gpml::output::grid;

const QUERY: &str = "MATCH TRAIL p = (a WHERE a.owner='Jay') [-[b:Transfer WHERE b.amount>5000000]->]+ \
                     (a) [-[:isLocatedIn]->(c:City) | -[:isLocatedIn]->(c:Country)]";

fn main() {
    let g = fixture();
    print!("{}", grid(&run_query(QUERY, &g).unwrap(), &g));
    print!("{}", grid(&run_query(&QUERY.replace(" | ", " |+| "), &g).unwrap(), &g));
}
