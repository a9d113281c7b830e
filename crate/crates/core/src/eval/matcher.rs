//! Set-at-a-time matching of rigid patterns.
//!
//! Each event extends every partial match of the current prefix. Bindings
//! carry their iteration annotation, so two atoms join exactly when both
//! name and annotation agree.

use std::collections::BTreeMap;

use super::expand::{drive, Event, RigidPattern, Sink};
use super::expr::{holds, Bound, Env};
use super::normalize::{Atom, Filter, NormPath, Ref, Sym};
use crate::graph::{Direction, EdgeId, Element, Endpoints, NodeId, Path, PropertyGraph};
use crate::syntax::{Orientation, Restrictor};

/// One token of a reduced binding. The token sequence is the deduplication
/// key: elements in path order, the named variables bound at each one, and
/// the multiset-alternation branches taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyTok {
    Node(NodeId),
    Edge(EdgeId),
    Name(Sym),
    Alt(u32, u32),
}

#[derive(Clone, Debug)]
struct Binding {
    sym: Sym,
    iters: Vec<u32>,
    elem: Element,
}

#[derive(Clone, Debug)]
struct Scope {
    restrictor: Option<Restrictor>,
    node_start: usize,
    edge_start: usize,
    /// SIMPLE scope that returned to its first node.
    closed: bool,
}

#[derive(Clone, Debug)]
struct Partial<'a, 'q> {
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
    bindings: Vec<Binding>,
    key: Vec<KeyTok>,
    scopes: Vec<Scope>,
    deferred: Vec<(&'a Filter<'q>, Vec<u32>)>,
}

/// A complete match of a path pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathMatch {
    pub path: Path,
    pub key: Vec<KeyTok>,
}

impl PathMatch {
    /// Elements bound to each named variable, in path order.
    pub fn occurrences(&self) -> BTreeMap<Sym, Vec<Element>> {
        let mut out: BTreeMap<Sym, Vec<Element>> = BTreeMap::new();
        let mut cur = None;
        for t in &self.key {
            match *t {
                KeyTok::Node(n) => cur = Some(Element::Node(n)),
                KeyTok::Edge(e) => cur = Some(Element::Edge(e)),
                KeyTok::Name(s) => out.entry(s).or_default().push(cur.expect("name follows an element")),
                KeyTok::Alt(..) => {}
            }
        }
        out
    }
}

struct FilterEnv<'p, 'a, 'q> {
    partial: &'p Partial<'a, 'q>,
    filter: &'p Filter<'q>,
    iters: &'p [u32],
}

impl FilterEnv<'_, '_, '_> {
    fn single(&self, sym: Sym, depth: usize) -> Option<Element> {
        let want = &self.iters[..depth.min(self.iters.len())];
        self.partial
            .bindings
            .iter()
            .find(|b| b.sym == sym && b.iters == want)
            .map(|b| b.elem)
    }

    fn all_bound(&self) -> bool {
        self.filter.refs.iter().all(|(_, r)| match *r {
            Ref::Single { sym, depth } => self.single(sym, depth).is_some(),
            Ref::Group { .. } => true,
        })
    }
}

impl Env for FilterEnv<'_, '_, '_> {
    fn lookup(&self, var: &str) -> Bound {
        match self.filter.refs.iter().find(|(n, _)| n == var).map(|(_, r)| *r) {
            Some(Ref::Single { sym, depth }) => Bound::Single(self.single(sym, depth)),
            Some(Ref::Group { sym }) => {
                let prefix = &self.iters[..self.filter.depth.min(self.iters.len())];
                Bound::Group(
                    self.partial
                        .bindings
                        .iter()
                        .filter(|b| b.sym == sym && b.iters.starts_with(prefix))
                        .map(|b| b.elem)
                        .collect(),
                )
            }
            None => Bound::Single(None),
        }
    }
}

/// The join sink: a stack of partial-match sets, one per event of the
/// current prefix.
pub struct Matcher<'g, 'a, 'q> {
    graph: &'g PropertyGraph,
    stack: Vec<Vec<Partial<'a, 'q>>>,
    done: Vec<PathMatch>,
}

impl<'g, 'a, 'q> Matcher<'g, 'a, 'q> {
    pub fn new(graph: &'g PropertyGraph) -> Self {
        Matcher {
            graph,
            stack: vec![vec![Partial {
                nodes: Vec::new(),
                edges: Vec::new(),
                bindings: Vec::new(),
                key: Vec::new(),
                scopes: Vec::new(),
                deferred: Vec::new(),
            }]],
            done: Vec::new(),
        }
    }

    pub fn into_matches(self) -> Vec<PathMatch> {
        self.done
    }

    /// Binds `atom` to `elem`, joining with an earlier binding of the same
    /// annotated variable, and applies its prefilter.
    fn bind(&self, p: &mut Partial<'a, 'q>, atom: &'a Atom<'q>, elem: Element, iters: &[u32]) -> bool {
        if let Some(sym) = atom.var.sym() {
            match p.bindings.iter().find(|b| b.sym == sym && b.iters == iters) {
                Some(b) if b.elem != elem => return false,
                _ => {}
            }
            p.bindings.push(Binding {
                sym,
                iters: iters.to_vec(),
                elem,
            });
            p.key.push(KeyTok::Name(sym));
        }
        if let Some(l) = atom.label {
            if !l.matches(self.graph.labels(elem)) {
                return false;
            }
        }
        match &atom.filter {
            Some(f) => self.check(p, f, iters),
            None => true,
        }
    }

    /// Evaluates a filter now if its singletons are bound, else defers it to
    /// the end of the path.
    fn check(&self, p: &mut Partial<'a, 'q>, f: &'a Filter<'q>, iters: &[u32]) -> bool {
        let env = FilterEnv {
            partial: p,
            filter: f,
            iters,
        };
        if env.all_bound() {
            holds(f.expr, &env, self.graph)
        } else {
            p.deferred.push((f, iters.to_vec()));
            true
        }
    }

    fn step(&self, p: &Partial<'a, 'q>, atom: &'a Atom<'q>, o: Orientation, iters: &[u32], out: &mut Vec<Partial<'a, 'q>>) {
        let cur = *p.nodes.last().expect("edge follows a node");
        let mut moves: Vec<(EdgeId, NodeId)> = Vec::new();
        for e in self.graph.adjacent(cur, crate::graph::Incidence::Any) {
            let (dir, next) = match self.graph.edge(e).endpoints {
                Endpoints::Directed { src, dst } if src == dst => {
                    // a directed self-loop reads the same either way
                    if o.allows(Direction::Forward) || o.allows(Direction::Backward) {
                        if moves.contains(&(e, cur)) {
                            continue;
                        }
                        (None, cur)
                    } else {
                        continue;
                    }
                }
                Endpoints::Directed { src, dst } if src == cur => (Some(Direction::Forward), dst),
                Endpoints::Directed { src, .. } => (Some(Direction::Backward), src),
                Endpoints::Undirected(a, b) => (Some(Direction::Undirected), if a == cur { b } else { a }),
            };
            if dir.is_some_and(|d| !o.allows(d)) {
                continue;
            }
            moves.push((e, next));
        }
        'moves: for (e, next) in moves {
            let mut q = p.clone();
            for s in q.scopes.iter_mut() {
                match s.restrictor {
                    None => {}
                    Some(Restrictor::Trail) => {
                        if p.edges[s.edge_start..].contains(&e) {
                            continue 'moves;
                        }
                    }
                    Some(Restrictor::Acyclic) => {
                        if p.nodes[s.node_start..].contains(&next) {
                            continue 'moves;
                        }
                    }
                    Some(Restrictor::Simple) => {
                        if s.closed {
                            continue 'moves;
                        }
                        if p.nodes[s.node_start] == next {
                            s.closed = true;
                        } else if p.nodes[s.node_start..].contains(&next) {
                            continue 'moves;
                        }
                    }
                }
            }
            q.edges.push(e);
            q.nodes.push(next);
            q.key.push(KeyTok::Edge(e));
            // the edge's name sits between the edge and the next node
            if !self.bind(&mut q, atom, Element::Edge(e), iters) {
                continue;
            }
            q.key.push(KeyTok::Node(next));
            out.push(q);
        }
    }

    fn extend(&self, event: Event<'a, 'q>, iters: &[u32]) -> Vec<Partial<'a, 'q>> {
        let top = self.stack.last().expect("root level");
        let mut out = Vec::new();
        match event {
            Event::Node(atom) => {
                for p in top {
                    if p.nodes.is_empty() {
                        for n in self.graph.node_ids() {
                            let mut q = p.clone();
                            q.nodes.push(n);
                            q.key.push(KeyTok::Node(n));
                            if self.bind(&mut q, atom, Element::Node(n), iters) {
                                out.push(q);
                            }
                        }
                    } else {
                        let mut q = p.clone();
                        let n = *q.nodes.last().unwrap();
                        if self.bind(&mut q, atom, Element::Node(n), iters) {
                            out.push(q);
                        }
                    }
                }
            }
            Event::Edge(atom, o) => {
                for p in top {
                    self.step(p, atom, o, iters, &mut out);
                }
            }
            Event::Open(restrictor) => {
                for p in top {
                    let mut q = p.clone();
                    q.scopes.push(Scope {
                        restrictor,
                        node_start: p.nodes.len().saturating_sub(1),
                        edge_start: p.edges.len(),
                        closed: false,
                    });
                    out.push(q);
                }
            }
            Event::Close { filter, progress } => {
                for p in top {
                    let mut q = p.clone();
                    let s = q.scopes.pop().expect("open scope");
                    if progress && q.edges.len() == s.edge_start {
                        continue;
                    }
                    if let Some(f) = filter {
                        if !self.check(&mut q, f, iters) {
                            continue;
                        }
                    }
                    out.push(q);
                }
            }
            Event::Alt(id, branch) => {
                for p in top {
                    let mut q = p.clone();
                    q.key.push(KeyTok::Alt(id, branch));
                    out.push(q);
                }
            }
        }
        out
    }
}

impl<'a, 'q> Sink<'a, 'q> for Matcher<'_, 'a, 'q> {
    fn push(&mut self, event: Event<'a, 'q>, iters: &[u32]) -> bool {
        let next = self.extend(event, iters);
        let alive = !next.is_empty();
        self.stack.push(next);
        alive
    }

    fn pop(&mut self) {
        self.stack.pop();
    }

    fn end(&mut self) {
        let graph = self.graph;
        let top = self.stack.last().expect("root level");
        // a pattern whose every part was iterated zero times matches each
        // node as a path of length zero
        let widened: Vec<Partial<'a, 'q>>;
        let top = if top.iter().any(|p| p.nodes.is_empty()) {
            widened = top
                .iter()
                .flat_map(|p| {
                    let starts: Vec<NodeId> = if p.nodes.is_empty() {
                        graph.node_ids().collect()
                    } else {
                        vec![p.nodes[0]]
                    };
                    starts.into_iter().map(move |n| {
                        let mut q = p.clone();
                        if q.nodes.is_empty() {
                            q.nodes.push(n);
                            q.key.insert(0, KeyTok::Node(n));
                        }
                        q
                    })
                })
                .collect();
            &widened
        } else {
            top
        };
        for p in top {
            let ok = p.deferred.iter().all(|(f, iters)| {
                let env = FilterEnv {
                    partial: p,
                    filter: f,
                    iters,
                };
                holds(f.expr, &env, graph)
            });
            if ok {
                let path = Path::new(graph, p.nodes.clone(), p.edges.clone()).expect("matched walk is a path");
                // branch tags taken before the first node atom still follow it
                let mut key = p.key.clone();
                if let Some(i) = key.iter().position(|t| matches!(t, KeyTok::Node(_))) {
                    key[..=i].rotate_right(1);
                }
                self.done.push(PathMatch { path, key });
            }
        }
    }
}

/// Matches one rigid pattern, returning every binding in discovery order.
pub fn match_rigid(rigid: &RigidPattern<'_, '_>, graph: &PropertyGraph) -> Vec<PathMatch> {
    let mut m = Matcher::new(graph);
    let mut depth = 0;
    for item in &rigid.items {
        depth += 1;
        if !m.push(item.event, &item.iters) {
            break;
        }
        if depth == rigid.items.len() {
            m.end();
        }
    }
    m.into_matches()
}

/// Expands and matches a path pattern in one pass, pruning every rigid
/// pattern whose prefix has no match. Duplicates are not removed.
pub fn match_path(path: &NormPath<'_>, bounds: &[u64], graph: &PropertyGraph) -> Vec<PathMatch> {
    drive(path, bounds, Matcher::new(graph)).into_matches()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::analyze;
    use crate::eval::expand::expand;
    use crate::eval::normalize::{expansion_bounds, normalize};
    use crate::graph::{fixture, Value};

    const RUNNING: &str = "MATCH TRAIL (a WHERE a.owner='Jay') [-[b:Transfer WHERE b.amount>5000000]->]+ \
                           (a) [-[:isLocatedIn]->(c:City) | -[:isLocatedIn]->(c:Country)]";

    fn paths(g: &PropertyGraph, ms: &[PathMatch]) -> Vec<String> {
        let mut v: Vec<String> = ms.iter().map(|m| m.path.display(g)).collect();
        v.sort();
        v
    }

    #[test]
    fn pi_4_city() {
        let g = fixture();
        let a = analyze(RUNNING).unwrap();
        let n = normalize(&a);
        let rigids = expand(&n.paths[0], &[8]);
        let find = |k: usize, branch: &str| {
            rigids
                .iter()
                .find(|r| r.len() == k + 1 && r.to_string().contains(branch))
                .unwrap()
                .clone()
        };
        let pi4 = find(4, "City");
        assert_eq!(paths(&g, &match_rigid(&pi4, &g)), ["a4,t4,a6,t5,a3,t2,a2,t3,a4,li4,c2"]);
        // a rigid pattern cut after its first node-edge-node atom
        let first = RigidPattern {
            items: pi4
                .items
                .iter()
                .take_while(|i| !matches!(i.event, Event::Close { .. }))
                .cloned()
                .collect(),
        };
        let m = match_rigid(&first, &g);
        assert_eq!(paths(&g, &m), ["a4,t4,a6"]);
        assert!(match_rigid(&find(8, "City"), &g).is_empty());
        assert_eq!(paths(&g, &match_rigid(&find(7, "Country"), &g)).len(), 1);
    }

    #[test]
    fn fused_matches_agree_with_rigid_ones() {
        let g = fixture();
        let a = analyze(RUNNING).unwrap();
        let n = normalize(&a);
        let bounds = expansion_bounds(&n, &g);
        let mut via_rigid: Vec<PathMatch> = expand(&n.paths[0], &bounds)
            .iter()
            .flat_map(|r| match_rigid(r, &g))
            .collect();
        let mut fused = match_path(&n.paths[0], &bounds, &g);
        via_rigid.sort_by(|x, y| x.key.cmp(&y.key));
        fused.sort_by(|x, y| x.key.cmp(&y.key));
        assert_eq!(via_rigid, fused);
        // City and Country branches for n = 4 and n = 7
        assert_eq!(fused.len(), 4);
    }

    #[test]
    fn orientation_and_self_loops() {
        let mut g = PropertyGraph::new();
        g.add_node("x", ["N"], [("k", Value::Int(1))]).unwrap();
        g.add_node("y", ["N"], [("k", Value::Int(2))]).unwrap();
        g.add_edge("l", crate::graph::Ends::Directed("x", "x"), ["E"], Vec::<(&str, Value)>::new()).unwrap();
        g.add_edge("u", crate::graph::Ends::Undirected("x", "y"), ["E"], Vec::<(&str, Value)>::new()).unwrap();
        let run = |q: &str| {
            let a = analyze(q).unwrap();
            let n = normalize(&a);
            let b = expansion_bounds(&n, &g);
            paths(&g, &match_path(&n.paths[0], &b, &g))
        };
        assert_eq!(run("MATCH -[e]-"), ["x,l,x", "x,u,y", "y,u,x"]);
        assert_eq!(run("MATCH <-[e]-"), ["x,l,x"]);
        assert_eq!(run("MATCH ~[e]~"), ["x,u,y", "y,u,x"]);
        assert_eq!(run("MATCH (a WHERE a.k = b.k - 1)-[e]-(b)"), ["x,u,y"]);
        assert_eq!(run("MATCH SIMPLE (a)-[e]->(a)"), ["x,l,x"]);
        assert!(run("MATCH ACYCLIC (a)-[e]->(a)").is_empty());
        assert_eq!(run("MATCH TRAIL -[e]-{2,2}"), ["x,l,x,u,y", "y,u,x,l,x"]);
    }
}
