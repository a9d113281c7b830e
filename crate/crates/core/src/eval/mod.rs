//! Evaluation of analyzed queries against a property graph.

mod engine;
mod expand;
mod expr;
mod matcher;
mod normalize;
mod table;

pub use expr::{eval_bool, eval_value, fold, holds, Bound, Env};
pub use normalize::{
    expansion_bounds, normalize, selector_k, Atom, Filter, Group, NTerm, NormPath, NormalizedQuery, QuantContext, Ref,
    Rep, Sym, Var,
};
pub use expand::{drive, expand, Event, RigidItem, RigidPattern, Sink};
pub use matcher::{match_path, match_rigid, KeyTok, Matcher, PathMatch};
pub use engine::{apply_selector, eval_graph_pattern, reduce_dedup, run_query};
pub use table::{same_multiset, Cell, ResultTable};
