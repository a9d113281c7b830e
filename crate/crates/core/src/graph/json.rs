use std::collections::BTreeMap;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use super::{Endpoints, Ends, GraphError, PropertyGraph, Value};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    nodes: Vec<NodeRow>,
    edges: Vec<EdgeRow>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRow {
    id: String,
    #[serde(default)]
    labels: Vec<String>,
    #[serde(default)]
    properties: BTreeMap<String, serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRow {
    id: String,
    src: String,
    dst: String,
    #[serde(default)]
    undirected: bool,
    #[serde(default)]
    labels: Vec<String>,
    #[serde(default)]
    properties: BTreeMap<String, serde_json::Value>,
}

fn to_value(owner: &str, key: &str, v: serde_json::Value) -> Result<Value, GraphError> {
    use serde_json::Value as J;
    Ok(match v {
        J::Null => Value::Null,
        J::Bool(b) => Value::Bool(b),
        J::String(s) => Value::String(s),
        J::Number(n) => match n.as_i64() {
            Some(i) => Value::Int(i),
            None => Value::Decimal(n.as_f64().unwrap_or(f64::NAN)),
        },
        J::Array(_) | J::Object(_) => {
            return Err(GraphError::Malformed(format!(
                "property `{key}` of `{owner}` must be a string, number, boolean or null"
            )))
        }
    })
}

fn from_value(v: &Value) -> serde_json::Value {
    match v {
        Value::Null => serde_json::Value::Null,
        Value::Bool(b) => (*b).into(),
        Value::Int(i) => (*i).into(),
        Value::Decimal(d) => serde_json::Number::from_f64(*d)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null),
        Value::String(s) => s.clone().into(),
    }
}

fn props(owner: &str, raw: BTreeMap<String, serde_json::Value>) -> Result<Vec<(String, Value)>, GraphError> {
    raw.into_iter()
        .map(|(k, v)| {
            let v = to_value(owner, &k, v)?;
            Ok((k, v))
        })
        .collect()
}

/// Parses a graph document. Nodes are added before edges, so edge rows may
/// precede their endpoints in the file.
pub fn load_graph(document: &str) -> Result<PropertyGraph, GraphError> {
    let doc: Document = serde_json::from_str(document).map_err(|e| GraphError::Malformed(e.to_string()))?;
    let mut g = PropertyGraph::new();
    for n in doc.nodes {
        let p = props(&n.id, n.properties)?;
        g.add_node(&n.id, n.labels, p)?;
    }
    for e in doc.edges {
        let p = props(&e.id, e.properties)?;
        let ends = if e.undirected {
            Ends::Undirected(&e.src, &e.dst)
        } else {
            Ends::Directed(&e.src, &e.dst)
        };
        g.add_edge(&e.id, ends, e.labels, p)?;
    }
    Ok(g)
}

/// Reads and parses a graph file. I/O failures are reported as `Malformed`
/// with the OS message; callers that care can check the file first.
pub fn load_graph_file(path: impl AsRef<FsPath>) -> Result<PropertyGraph, GraphError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| GraphError::Malformed(format!("{}: {e}", path.display())))?;
    load_graph(&text)
}

/// Serializes a graph in the document format accepted by [`load_graph`].
pub fn to_json(graph: &PropertyGraph) -> String {
    let doc = Document {
        nodes: graph
            .node_ids()
            .map(|n| {
                let node = graph.node(n);
                NodeRow {
                    id: node.id.clone(),
                    labels: node.labels.iter().cloned().collect(),
                    properties: node.properties.iter().map(|(k, v)| (k.clone(), from_value(v))).collect(),
                }
            })
            .collect(),
        edges: graph
            .edge_ids()
            .map(|e| {
                let edge = graph.edge(e);
                let (a, b) = edge.ends();
                EdgeRow {
                    id: edge.id.clone(),
                    src: graph.node(a).id.clone(),
                    dst: graph.node(b).id.clone(),
                    undirected: matches!(edge.endpoints, Endpoints::Undirected(..)),
                    labels: edge.labels.iter().cloned().collect(),
                    properties: edge.properties.iter().map(|(k, v)| (k.clone(), from_value(v))).collect(),
                }
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph documents always serialize")
}
