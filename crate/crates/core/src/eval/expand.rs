//! Expansion of a normalized path pattern into rigid patterns.
//!
//! The expansion is a depth-first search over iteration counts and branch
//! choices. Each rigid pattern is streamed as a sequence of events into a
//! [`Sink`]; a sink that rejects an event prunes every rigid pattern with
//! that prefix.

use std::fmt;

use super::normalize::{Atom, Filter, Group, NTerm, NormPath, Rep, Var};
use crate::syntax::{render_expr, render_label, restrictor_text, Orientation, Restrictor};

/// One step of a rigid pattern.
#[derive(Clone, Copy, Debug)]
pub enum Event<'a, 'q> {
    Node(&'a Atom<'q>),
    Edge(&'a Atom<'q>, Orientation),
    /// Start of a parenthesized scope (one iteration, for quantified ones).
    Open(Option<Restrictor>),
    /// End of that scope. `progress` demands that it consumed an edge.
    Close {
        filter: Option<&'a Filter<'q>>,
        progress: bool,
    },
    /// Branch `1` of the alternation numbered `0`.
    Alt(u32, u32),
}

/// Receives the events of rigid patterns in depth-first order.
pub trait Sink<'a, 'q> {
    /// Extends the current prefix. Returning `false` prunes it; `pop` is
    /// called either way.
    fn push(&mut self, event: Event<'a, 'q>, iters: &[u32]) -> bool;
    fn pop(&mut self);
    /// The current prefix is a complete rigid pattern.
    fn end(&mut self);
}

#[derive(Clone, Copy)]
enum Work<'a, 'q> {
    Term(&'a NTerm<'q>),
    Items(&'a [NTerm<'q>]),
    Loop { group: &'a Group<'q>, done: u64 },
    EndScope { group: &'a Group<'q>, progress: bool, counted: bool },
}

struct Cont<'c, 'a, 'q> {
    work: Work<'a, 'q>,
    next: Option<&'c Cont<'c, 'a, 'q>>,
}

struct Driver<'b, S> {
    bounds: &'b [u64],
    iters: Vec<u32>,
    sink: S,
}

/// Streams every rigid pattern of `path` into `sink`, with quantifier `i`
/// iterated at most `bounds[i]` times.
pub fn drive<'a, 'q, S: Sink<'a, 'q>>(path: &'a NormPath<'q>, bounds: &[u64], sink: S) -> S {
    let mut d = Driver {
        bounds,
        iters: Vec::new(),
        sink,
    };
    if d.sink.push(Event::Open(path.restrictor), &[]) {
        d.run(Work::Term(&path.body), None);
    }
    d.sink.pop();
    d.sink
}

impl<'b, 'a, 'q, S: Sink<'a, 'q>> Driver<'b, S> {
    fn emit(&mut self, event: Event<'a, 'q>, then: impl FnOnce(&mut Self)) {
        if self.sink.push(event, &self.iters) {
            then(self);
        }
        self.sink.pop();
    }

    fn resume(&mut self, next: Option<&Cont<'_, 'a, 'q>>) {
        match next {
            None => self.sink.end(),
            Some(c) => self.run(c.work, c.next),
        }
    }

    fn run(&mut self, work: Work<'a, 'q>, next: Option<&Cont<'_, 'a, 'q>>) {
        match work {
            Work::Term(NTerm::Node(a)) => self.emit(Event::Node(a), |d| d.resume(next)),
            Work::Term(NTerm::Edge(a, o)) => self.emit(Event::Edge(a, *o), |d| d.resume(next)),
            Work::Term(NTerm::Seq(items)) => self.run(Work::Items(items), next),
            Work::Items([]) => self.resume(next),
            Work::Items([first, rest @ ..]) => {
                let cont = Cont {
                    work: Work::Items(rest),
                    next,
                };
                self.run(Work::Term(first), Some(&cont));
            }
            Work::Term(NTerm::Union(branches)) => {
                for b in branches {
                    self.run(Work::Term(b), next);
                }
            }
            Work::Term(NTerm::Alternation(id, branches)) => {
                for (i, b) in branches.iter().enumerate() {
                    self.emit(Event::Alt(*id, i as u32), |d| d.run(Work::Term(b), next));
                }
            }
            Work::Term(NTerm::Group(g)) => match g.rep {
                Rep::Quantified { .. } => self.run(Work::Loop { group: g, done: 0 }, next),
                Rep::Optional => {
                    self.resume(next);
                    self.once(g, next);
                }
                Rep::Once => self.once(g, next),
            },
            Work::Loop { group, done } => {
                let Rep::Quantified { id, min, max } = group.rep else { unreachable!() };
                if done >= min {
                    self.resume(next);
                }
                if done < self.bounds[id.0] {
                    let this = done + 1;
                    self.iters.push(this as u32);
                    let after = Cont {
                        work: Work::Loop { group, done: this },
                        next,
                    };
                    let close = Cont {
                        work: Work::EndScope {
                            group,
                            progress: max.is_none() && this > min,
                            counted: true,
                        },
                        next: Some(&after),
                    };
                    self.emit(Event::Open(group.restrictor), |d| d.run(Work::Term(&group.body), Some(&close)));
                    self.iters.pop();
                }
            }
            Work::EndScope { group, progress, counted } => {
                let event = Event::Close {
                    filter: group.filter.as_ref(),
                    progress,
                };
                self.emit(event, |d| {
                    if counted {
                        let i = d.iters.pop().expect("iteration counter");
                        d.resume(next);
                        d.iters.push(i);
                    } else {
                        d.resume(next);
                    }
                });
            }
        }
    }

    fn once(&mut self, g: &'a Group<'q>, next: Option<&Cont<'_, 'a, 'q>>) {
        let close = Cont {
            work: Work::EndScope {
                group: g,
                progress: false,
                counted: false,
            },
            next,
        };
        self.emit(Event::Open(g.restrictor), |d| d.run(Work::Term(&g.body), Some(&close)));
    }
}

/// One event of a materialized rigid pattern with its iteration annotation.
#[derive(Clone, Debug)]
pub struct RigidItem<'a, 'q> {
    pub event: Event<'a, 'q>,
    pub iters: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct RigidPattern<'a, 'q> {
    pub items: Vec<RigidItem<'a, 'q>>,
}

impl RigidPattern<'_, '_> {
    /// Number of edge patterns.
    pub fn len(&self) -> usize {
        self.items.iter().filter(|i| matches!(i.event, Event::Edge(..))).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Default)]
struct Collect<'a, 'q> {
    prefix: Vec<RigidItem<'a, 'q>>,
    out: Vec<RigidPattern<'a, 'q>>,
}

impl<'a, 'q> Sink<'a, 'q> for Collect<'a, 'q> {
    fn push(&mut self, event: Event<'a, 'q>, iters: &[u32]) -> bool {
        self.prefix.push(RigidItem {
            event,
            iters: iters.to_vec(),
        });
        true
    }

    fn pop(&mut self) {
        self.prefix.pop();
    }

    fn end(&mut self) {
        self.out.push(RigidPattern {
            items: self.prefix.clone(),
        });
    }
}

/// Every rigid pattern of `path`, shortest first.
pub fn expand<'a, 'q>(path: &'a NormPath<'q>, bounds: &[u64]) -> Vec<RigidPattern<'a, 'q>> {
    let mut out = drive(path, bounds, Collect::default()).out;
    out.sort_by_key(|r| r.len());
    out
}

struct Annotated<'a>(&'a Var, bool, &'a [u32]);

impl fmt::Display for Annotated<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Var::Named(_, n) => f.write_str(n)?,
            Var::Anon(i) => write!(f, "_{}{}", if self.1 { 'n' } else { 'e' }, i)?,
        }
        if !self.2.is_empty() {
            let parts: Vec<String> = self.2.iter().map(|i| i.to_string()).collect();
            write!(f, "^{}", parts.join("."))?;
        }
        Ok(())
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, a: &Atom, node: bool, iters: &[u32]) -> fmt::Result {
    write!(f, "{}", Annotated(&a.var, node, iters))?;
    if let Some(l) = a.label {
        write!(f, ":{}", render_label(l))?;
    }
    if let Some(w) = &a.filter {
        write!(f, " WHERE {}", render_expr(w.expr))?;
    }
    Ok(())
}

/// Shows the cleaned-up pattern: in each run of adjacent node patterns the
/// anonymous ones are dropped, keeping one if the run has no named pattern.
/// Scopes and branch tags are not shown.
impl fmt::Display for RigidPattern<'_, '_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<&RigidItem> = self
            .items
            .iter()
            .filter(|i| matches!(i.event, Event::Node(_) | Event::Edge(..)))
            .collect();
        let mut i = 0;
        while i < atoms.len() {
            match atoms[i].event {
                Event::Edge(a, o) => {
                    let (open, close) = o.delimiters();
                    f.write_str(open)?;
                    write_atom(f, a, false, &atoms[i].iters)?;
                    f.write_str(close)?;
                    i += 1;
                }
                _ => {
                    let start = i;
                    while i < atoms.len() && matches!(atoms[i].event, Event::Node(_)) {
                        i += 1;
                    }
                    let run = &atoms[start..i];
                    let named: Vec<&&RigidItem> = run
                        .iter()
                        .filter(|r| matches!(r.event, Event::Node(a) if a.var.sym().is_some()))
                        .collect();
                    let shown = if named.is_empty() { vec![&run[0]] } else { named };
                    for (k, r) in shown.iter().enumerate() {
                        if k > 0 {
                            f.write_str(" ")?;
                        }
                        let Event::Node(a) = r.event else { unreachable!() };
                        f.write_str("(")?;
                        write_atom(f, a, true, &r.iters)?;
                        f.write_str(")")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Event<'_, '_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Node(a) => write!(f, "node {}", Annotated(&a.var, true, &[])),
            Event::Edge(a, _) => write!(f, "edge {}", Annotated(&a.var, false, &[])),
            Event::Open(r) => write!(f, "open {}", r.map(restrictor_text).unwrap_or("")),
            Event::Close { progress, .. } => write!(f, "close{}", if *progress { " +" } else { "" }),
            Event::Alt(a, b) => write!(f, "alt {a}.{b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::analyze;
    use crate::eval::normalize::{expansion_bounds, normalize};
    use crate::graph::fixture;

    const RUNNING: &str = "MATCH TRAIL (a WHERE a.owner='Jay') [-[b:Transfer WHERE b.amount>5000000]->]+ \
                           (a) [-[:isLocatedIn]->(c:City) | -[:isLocatedIn]->(c:Country)]";

    fn rigid(q: &str, bounds: Option<Vec<u64>>) -> Vec<String> {
        let a = analyze(q).unwrap();
        let n = normalize(&a);
        let b = bounds.unwrap_or_else(|| expansion_bounds(&n, &fixture()));
        expand(&n.paths[0], &b).iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn running_query_expansions() {
        let all = rigid(RUNNING, Some(vec![4]));
        // four iteration counts, two union branches
        assert_eq!(all.len(), 8);
        assert_eq!(
            all[0],
            "(a WHERE a.owner = 'Jay')-[b^1:Transfer WHERE b.amount > 5000000]->(a)\
             -[_e1:isLocatedIn]->(c:City)"
        );
        let pi4 = all.iter().find(|r| r.matches("Transfer").count() == 4 && r.contains("City")).unwrap();
        assert_eq!(
            pi4,
            "(a WHERE a.owner = 'Jay')-[b^1:Transfer WHERE b.amount > 5000000]->(_n2^1)\
             -[b^2:Transfer WHERE b.amount > 5000000]->(_n2^2)\
             -[b^3:Transfer WHERE b.amount > 5000000]->(_n2^3)\
             -[b^4:Transfer WHERE b.amount > 5000000]->(a)\
             -[_e1:isLocatedIn]->(c:City)"
        );
    }

    #[test]
    fn zero_iterations_merge_neighbours() {
        let all = rigid("MATCH ANY SHORTEST (x) [-[e]->(y)]* (z)", Some(vec![2]));
        assert_eq!(all[0], "(x) (z)");
        assert_eq!(all[1], "(x)-[e^1]->(y^1) (z)");
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn branches_and_bounds() {
        assert_eq!(rigid("MATCH ->{1,5} | ->{3,7}", None).len(), 5 + 5);
        assert_eq!(rigid("MATCH (x) [->(y)]?", None), ["(x)", "(x)-[_e1]->(y)"]);
        assert_eq!(rigid("MATCH (c:City) |+| (c:Country)", None).len(), 2);
        assert_eq!(rigid("MATCH TRAIL ->*", None).len(), fixture().edge_count() + 1);
    }
}
