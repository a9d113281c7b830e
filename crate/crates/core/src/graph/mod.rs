//! In-memory property graphs: nodes and edges with labels and property maps,
//! directed and undirected edges (self-loops and parallel edges allowed), and
//! path values over them.

mod json;
mod path;
mod value;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

pub use json::{load_graph, load_graph_file, to_json};
pub use path::{Direction, Path, PathError};
pub use value::Value;

/// The bank-transfer graph used throughout the documentation and tests.
pub const FIXTURE_JSON: &str = include_str!("../../../../fixtures/paper-graph.json");

/// Loads [`FIXTURE_JSON`].
pub fn fixture() -> PropertyGraph {
    load_graph(FIXTURE_JSON).expect("bundled fixture is well-formed")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A graph element: node or edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Node(NodeId),
    Edge(EdgeId),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: String,
    pub labels: BTreeSet<String>,
    pub properties: BTreeMap<String, Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoints {
    Directed { src: NodeId, dst: NodeId },
    /// Unordered pair, stored in insertion order.
    Undirected(NodeId, NodeId),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: String,
    pub endpoints: Endpoints,
    pub labels: BTreeSet<String>,
    pub properties: BTreeMap<String, Value>,
}

impl Edge {
    pub fn is_directed(&self) -> bool {
        matches!(self.endpoints, Endpoints::Directed { .. })
    }

    /// Both endpoints in stored order (source first for directed edges).
    pub fn ends(&self) -> (NodeId, NodeId) {
        match self.endpoints {
            Endpoints::Directed { src, dst } => (src, dst),
            Endpoints::Undirected(a, b) => (a, b),
        }
    }

    /// The endpoint opposite `node`, if `node` is an endpoint at all.
    pub fn other_end(&self, node: NodeId) -> Option<NodeId> {
        let (a, b) = self.ends();
        if a == node {
            Some(b)
        } else if b == node {
            Some(a)
        } else {
            None
        }
    }
}

/// Edge endpoints given by element id, for building graphs.
#[derive(Clone, Copy, Debug)]
pub enum Ends<'a> {
    Directed(&'a str, &'a str),
    Undirected(&'a str, &'a str),
}

/// Which incident edges [`PropertyGraph::incident_edges`] reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Incidence {
    Outgoing,
    Incoming,
    Undirected,
    Any,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("edge `{edge}` refers to unknown endpoint `{node}`")]
    UnknownEndpoint { edge: String, node: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("malformed graph document: {0}")]
    Malformed(String),
}

/// A property graph with adjacency lists.
///
/// Node and edge ids share one namespace. Once built, a graph is only read,
/// so it can be shared freely between concurrent evaluations.
#[derive(Clone, Debug, Default)]
pub struct PropertyGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    ids: HashMap<String, Element>,
    outgoing: Vec<Vec<EdgeId>>,
    incoming: Vec<Vec<EdgeId>>,
    undirected: Vec<Vec<EdgeId>>,
}

impl PropertyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node<L, P, K>(&mut self, id: &str, labels: L, properties: P) -> Result<NodeId, GraphError>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        P: IntoIterator<Item = (K, Value)>,
        K: Into<String>,
    {
        if id.is_empty() {
            return Err(GraphError::Malformed("empty element id".into()));
        }
        if self.ids.contains_key(id) {
            return Err(GraphError::DuplicateId(id.to_string()));
        }
        let node_id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node {
            id: id.to_string(),
            labels: labels.into_iter().map(Into::into).collect(),
            properties: properties.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        });
        self.outgoing.push(Vec::new());
        self.incoming.push(Vec::new());
        self.undirected.push(Vec::new());
        self.ids.insert(id.to_string(), Element::Node(node_id));
        Ok(node_id)
    }

    pub fn add_edge<L, P, K>(
        &mut self,
        id: &str,
        ends: Ends<'_>,
        labels: L,
        properties: P,
    ) -> Result<EdgeId, GraphError>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        P: IntoIterator<Item = (K, Value)>,
        K: Into<String>,
    {
        if id.is_empty() {
            return Err(GraphError::Malformed("empty element id".into()));
        }
        if self.ids.contains_key(id) {
            return Err(GraphError::DuplicateId(id.to_string()));
        }
        let resolve = |name: &str| match self.ids.get(name) {
            Some(Element::Node(n)) => Ok(*n),
            _ => Err(GraphError::UnknownEndpoint {
                edge: id.to_string(),
                node: name.to_string(),
            }),
        };
        let endpoints = match ends {
            Ends::Directed(s, d) => Endpoints::Directed {
                src: resolve(s)?,
                dst: resolve(d)?,
            },
            Ends::Undirected(a, b) => Endpoints::Undirected(resolve(a)?, resolve(b)?),
        };
        let edge_id = EdgeId(self.edges.len() as u32);
        match endpoints {
            Endpoints::Directed { src, dst } => {
                self.outgoing[src.index()].push(edge_id);
                self.incoming[dst.index()].push(edge_id);
            }
            Endpoints::Undirected(a, b) => {
                self.undirected[a.index()].push(edge_id);
                if a != b {
                    self.undirected[b.index()].push(edge_id);
                }
            }
        }
        self.edges.push(Edge {
            id: id.to_string(),
            endpoints,
            labels: labels.into_iter().map(Into::into).collect(),
            properties: properties.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        });
        self.ids.insert(id.to_string(), Element::Edge(edge_id));
        Ok(edge_id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.index()]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn lookup(&self, id: &str) -> Option<Element> {
        self.ids.get(id).copied()
    }

    pub fn node_by_name(&self, id: &str) -> Option<NodeId> {
        match self.lookup(id) {
            Some(Element::Node(n)) => Some(n),
            _ => None,
        }
    }

    pub fn edge_by_name(&self, id: &str) -> Option<EdgeId> {
        match self.lookup(id) {
            Some(Element::Edge(e)) => Some(e),
            _ => None,
        }
    }

    /// The textual id of any element.
    pub fn name(&self, element: Element) -> &str {
        match element {
            Element::Node(n) => &self.node(n).id,
            Element::Edge(e) => &self.edge(e).id,
        }
    }

    pub fn labels(&self, element: Element) -> &BTreeSet<String> {
        match element {
            Element::Node(n) => &self.node(n).labels,
            Element::Edge(e) => &self.edge(e).labels,
        }
    }

    /// Property lookup; a missing property reads as null.
    pub fn property(&self, element: Element, name: &str) -> Value {
        let props = match element {
            Element::Node(n) => &self.node(n).properties,
            Element::Edge(e) => &self.edge(e).properties,
        };
        props.get(name).cloned().unwrap_or(Value::Null)
    }

    /// Adjacency of `node` without name resolution. Undirected self-loops
    /// are listed once.
    pub fn adjacent(&self, node: NodeId, mode: Incidence) -> impl Iterator<Item = EdgeId> + '_ {
        let i = node.index();
        let (out, inc, und): (&[EdgeId], &[EdgeId], &[EdgeId]) = match mode {
            Incidence::Outgoing => (&self.outgoing[i], &[], &[]),
            Incidence::Incoming => (&[], &self.incoming[i], &[]),
            Incidence::Undirected => (&[], &[], &self.undirected[i]),
            Incidence::Any => (&self.outgoing[i], &self.incoming[i], &self.undirected[i]),
        };
        out.iter().chain(inc).chain(und).copied()
    }

    /// The ids of edges incident to `node` in the requested way, sorted and
    /// without duplicates.
    pub fn incident_edges(&self, node: &str, mode: Incidence) -> Result<Vec<EdgeId>, GraphError> {
        let node = self
            .node_by_name(node)
            .ok_or_else(|| GraphError::UnknownNode(node.to_string()))?;
        let mut edges: Vec<EdgeId> = self.adjacent(node, mode).collect();
        edges.sort();
        edges.dedup();
        Ok(edges)
    }

    /// Checks referential integrity and id disjointness.
    pub fn validate(&self) -> Result<(), GraphError> {
        for edge in &self.edges {
            let (a, b) = edge.ends();
            for n in [a, b] {
                if n.index() >= self.nodes.len() {
                    return Err(GraphError::UnknownEndpoint {
                        edge: edge.id.clone(),
                        node: format!("#{}", n.index()),
                    });
                }
            }
        }
        if self.ids.len() != self.nodes.len() + self.edges.len() {
            return Err(GraphError::Malformed("node and edge ids overlap".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(g: &PropertyGraph, edges: Vec<EdgeId>) -> Vec<&str> {
        let mut v: Vec<&str> = edges.into_iter().map(|e| g.edge(e).id.as_str()).collect();
        v.sort();
        v
    }

    /// Brute-force scan of the edge table, independent of the adjacency lists.
    fn scan(g: &PropertyGraph, node: &str, mode: Incidence) -> Vec<String> {
        let n = g.node_by_name(node).unwrap();
        let mut out: Vec<String> = g
            .edge_ids()
            .filter(|&e| {
                let edge = g.edge(e);
                match (edge.endpoints, mode) {
                    (Endpoints::Directed { src, .. }, Incidence::Outgoing) => src == n,
                    (Endpoints::Directed { dst, .. }, Incidence::Incoming) => dst == n,
                    (Endpoints::Undirected(a, b), Incidence::Undirected) => a == n || b == n,
                    (_, Incidence::Any) => edge.other_end(n).is_some(),
                    _ => false,
                }
            })
            .map(|e| g.edge(e).id.clone())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn add_node_and_duplicates() {
        let mut g = PropertyGraph::new();
        g.add_node(
            "a1",
            ["Account"],
            [("owner", Value::from("Scott")), ("isBlocked", Value::from("no"))],
        )
        .unwrap();
        g.add_node("x", Vec::<String>::new(), Vec::<(String, Value)>::new()).unwrap();
        assert!(g.labels(Element::Node(g.node_by_name("x").unwrap())).is_empty());
        assert_eq!(
            g.add_node("a1", ["Account"], Vec::<(String, Value)>::new()),
            Err(GraphError::DuplicateId("a1".into()))
        );
    }

    #[test]
    fn add_edge_checks_endpoints() {
        let mut g = PropertyGraph::new();
        for id in ["a1", "a3", "p2"] {
            g.add_node(id, ["Account"], Vec::<(String, Value)>::new()).unwrap();
        }
        g.add_edge(
            "t1",
            Ends::Directed("a1", "a3"),
            ["Transfer"],
            [("date", Value::from("1/1/2020")), ("amount", Value::Int(8_000_000))],
        )
        .unwrap();
        g.add_edge("hp3", Ends::Undirected("a3", "p2"), ["hasPhone"], Vec::<(String, Value)>::new())
            .unwrap();
        let err = g
            .add_edge("e", Ends::Directed("a1", "zz"), ["X"], Vec::<(String, Value)>::new())
            .unwrap_err();
        assert_eq!(
            err,
            GraphError::UnknownEndpoint {
                edge: "e".into(),
                node: "zz".into()
            }
        );
        // an edge id cannot double as a node id
        assert!(matches!(
            g.add_node("t1", ["X"], Vec::<(String, Value)>::new()),
            Err(GraphError::DuplicateId(_))
        ));
        g.validate().unwrap();
    }

    #[test]
    fn incident_edges_on_fixture_match_scan() {
        let g = fixture();
        assert_eq!(g.node_count(), 14);
        assert_eq!(g.edge_count(), 22);
        // frozen from the edge-table scan
        assert_eq!(names(&g, g.incident_edges("a3", Incidence::Outgoing).unwrap()), ["li3", "t2", "t7"]);
        assert_eq!(names(&g, g.incident_edges("a6", Incidence::Outgoing).unwrap()), ["li6", "t5", "t6"]);
        assert!(g.incident_edges("ip1", Incidence::Outgoing).unwrap().is_empty());
        for node in g.node_ids() {
            let id = g.node(node).id.clone();
            for mode in [Incidence::Outgoing, Incidence::Incoming, Incidence::Undirected, Incidence::Any] {
                let got: Vec<String> = names(&g, g.incident_edges(&id, mode).unwrap())
                    .into_iter()
                    .map(String::from)
                    .collect();
                assert_eq!(got, scan(&g, &id, mode), "{id} {mode:?}");
            }
        }
        assert_eq!(
            g.incident_edges("nope", Incidence::Any),
            Err(GraphError::UnknownNode("nope".into()))
        );
    }

    #[test]
    fn undirected_self_loop_listed_once() {
        let mut g = PropertyGraph::new();
        g.add_node("n", ["N"], Vec::<(String, Value)>::new()).unwrap();
        g.add_edge("l", Ends::Undirected("n", "n"), ["L"], Vec::<(String, Value)>::new())
            .unwrap();
        assert_eq!(g.incident_edges("n", Incidence::Any).unwrap().len(), 1);
        assert_eq!(g.adjacent(g.node_by_name("n").unwrap(), Incidence::Undirected).count(), 1);
    }

    #[test]
    fn fixture_facts() {
        let g = fixture();
        let a4 = Element::Node(g.node_by_name("a4").unwrap());
        assert_eq!(g.property(a4, "owner"), Value::from("Jay"));
        let blocked: Vec<&str> = g
            .node_ids()
            .filter(|&n| {
                g.labels(Element::Node(n)).contains("Account")
                    && g.property(Element::Node(n), "isBlocked") == Value::from("yes")
            })
            .map(|n| g.node(n).id.as_str())
            .collect();
        assert_eq!(blocked, ["a4"]);
        assert_eq!(g.property(a4, "missing"), Value::Null);
    }
}
