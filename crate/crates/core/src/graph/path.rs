use std::collections::HashSet;

use thiserror::Error;

use super::{EdgeId, Element, Endpoints, NodeId, PropertyGraph};

/// How a path step traverses its edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
    Undirected,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("path needs at least one node")]
    Empty,
    #[error("edge count must be one less than node count")]
    Shape,
    #[error("step {0} does not connect its neighbouring nodes")]
    Disconnected(usize),
}

/// An alternating node/edge sequence `n0 e1 n1 ... ek nk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    nodes: Vec<NodeId>,
    edges: Vec<(EdgeId, Direction)>,
}

impl Path {
    pub fn single(node: NodeId) -> Self {
        Path {
            nodes: vec![node],
            edges: Vec::new(),
        }
    }

    /// Builds a path, checking that every edge links its neighbours. Each
    /// step's direction is derived from the edge; a directed self-loop is
    /// read as forward.
    pub fn new(graph: &PropertyGraph, nodes: Vec<NodeId>, edges: Vec<EdgeId>) -> Result<Self, PathError> {
        if nodes.is_empty() {
            return Err(PathError::Empty);
        }
        if edges.len() + 1 != nodes.len() {
            return Err(PathError::Shape);
        }
        let mut steps = Vec::with_capacity(edges.len());
        for (i, &e) in edges.iter().enumerate() {
            let dir = step_direction(graph, nodes[i], e, nodes[i + 1]).ok_or(PathError::Disconnected(i))?;
            steps.push((e, dir));
        }
        Ok(Path { nodes, edges: steps })
    }

    /// Appends a step without re-checking connectivity.
    pub fn push(&mut self, edge: EdgeId, dir: Direction, node: NodeId) {
        self.edges.push((edge, dir));
        self.nodes.push(node);
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|(e, _)| *e)
    }

    pub fn steps(&self) -> &[(EdgeId, Direction)] {
        &self.edges
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn first(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn last(&self) -> NodeId {
        *self.nodes.last().expect("paths are non-empty")
    }

    /// Interleaved element sequence, starting and ending with a node.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.nodes.len() + self.edges.len());
        out.push(Element::Node(self.nodes[0]));
        for (i, (e, _)) in self.edges.iter().enumerate() {
            out.push(Element::Edge(*e));
            out.push(Element::Node(self.nodes[i + 1]));
        }
        out
    }

    /// No edge repeats.
    pub fn is_trail(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|(e, _)| seen.insert(*e))
    }

    /// No node repeats.
    pub fn is_acyclic(&self) -> bool {
        let mut seen = HashSet::new();
        self.nodes.iter().all(|n| seen.insert(*n))
    }

    /// No node repeats, except that the first and last node may coincide.
    pub fn is_simple(&self) -> bool {
        let n = self.nodes.len();
        if n >= 2 && self.nodes[0] == self.nodes[n - 1] {
            let mut seen = HashSet::new();
            self.nodes[..n - 1].iter().all(|x| seen.insert(*x))
        } else {
            self.is_acyclic()
        }
    }

    pub fn display(&self, graph: &PropertyGraph) -> String {
        self.elements()
            .into_iter()
            .map(|e| graph.name(e).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Direction of traversing `edge` from `from` to `to`, or `None` if the edge
/// does not link them.
pub(crate) fn step_direction(graph: &PropertyGraph, from: NodeId, edge: EdgeId, to: NodeId) -> Option<Direction> {
    match graph.edge(edge).endpoints {
        Endpoints::Directed { src, dst } if src == from && dst == to => Some(Direction::Forward),
        Endpoints::Directed { src, dst } if src == to && dst == from => Some(Direction::Backward),
        Endpoints::Undirected(a, b) if (a == from && b == to) || (a == to && b == from) => Some(Direction::Undirected),
        _ => None,
    }
}
