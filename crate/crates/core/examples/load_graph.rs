//! Builds a graph by hand, round-trips it through JSON and walks incidences.

use gpml::graph::{fixture, load_graph, to_json, Ends, Incidence, PropertyGraph, Value};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = PropertyGraph::new();
    g.add_node("x", ["Account"], [("owner", Value::from("Ada"))])?;
    g.add_node("y", ["Account"], [("owner", Value::from("Bo"))])?;
    g.add_edge("t", Ends::Directed("x", "y"), ["Transfer"], [("amount", Value::from(7))])?;
    let back = load_graph(&to_json(&g))?;
    println!("{} nodes, {} edges after a JSON round trip", back.node_count(), back.edge_count());

    let f = fixture();
    for mode in [Incidence::Outgoing, Incidence::Incoming, Incidence::Undirected] {
        let names: Vec<&str> = f
            .incident_edges("a3", mode)?
            .into_iter()
            .map(|e| f.edge(e).id.as_str())
            .collect();
        println!("a3 {mode:?}: {names:?}");
    }
    Ok(())
}
