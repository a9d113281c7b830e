use crate::graph::Direction;

/// Byte range in the query text.
///
/// Spans always compare equal so that ASTs compare structurally.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start, other.end)
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl std::hash::Hash for Span {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Ident {
            name: name.into(),
            span: Span::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Query {
    pub paths: Vec<PathPattern>,
    /// Postfilter applied to joined rows.
    pub filter: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathPattern {
    pub selector: Option<Selector>,
    pub restrictor: Option<Restrictor>,
    pub variable: Option<Ident>,
    pub body: PatternTerm,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    AnyShortest,
    AllShortest,
    Any,
    AnyK(u64),
    ShortestK(u64),
    ShortestKGroup(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Restrictor {
    Trail,
    Acyclic,
    Simple,
}

/// A pattern term.
///
/// `Concat` children are never `Concat`, `Union` or `Alternation`;
/// union and alternation branches are never themselves unions or alternations
/// of the same level.
#[derive(Clone, Debug, PartialEq)]
pub enum PatternTerm {
    Node(NodePattern),
    Edge {
        edge: EdgePattern,
        quantifier: Option<Quantifier>,
    },
    Paren(Box<ParenPattern>),
    Concat(Vec<PatternTerm>),
    /// `|`: set union of the branches' matches.
    Union(Vec<PatternTerm>),
    /// `|+|`: multiset alternation.
    Alternation(Vec<PatternTerm>),
}

/// Variable, label expression and prefilter shared by node and edge patterns.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ElementSpec {
    pub variable: Option<Ident>,
    pub label: Option<LabelExpr>,
    pub filter: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodePattern {
    pub spec: ElementSpec,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `<-[ ]-`, `<-`
    Left,
    /// `~[ ]~`, `~`
    Undirected,
    /// `-[ ]->`, `->`
    Right,
    /// `<~[ ]~`, `<~`
    LeftOrUndirected,
    /// `~[ ]~>`, `~>`
    UndirectedOrRight,
    /// `<-[ ]->`, `<->`
    LeftOrRight,
    /// `-[ ]-`, `-`
    Any,
}

impl Orientation {
    pub const ALL: [Orientation; 7] = [
        Orientation::Left,
        Orientation::Undirected,
        Orientation::Right,
        Orientation::LeftOrUndirected,
        Orientation::UndirectedOrRight,
        Orientation::LeftOrRight,
        Orientation::Any,
    ];

    /// Whether a traversal in direction `dir` matches this orientation.
    pub fn allows(self, dir: Direction) -> bool {
        use Direction::*;
        match self {
            Orientation::Left => dir == Backward,
            Orientation::Undirected => dir == Undirected,
            Orientation::Right => dir == Forward,
            Orientation::LeftOrUndirected => dir != Forward,
            Orientation::UndirectedOrRight => dir != Backward,
            Orientation::LeftOrRight => dir != Undirected,
            Orientation::Any => true,
        }
    }

    pub fn abbreviation(self) -> &'static str {
        match self {
            Orientation::Left => "<-",
            Orientation::Undirected => "~",
            Orientation::Right => "->",
            Orientation::LeftOrUndirected => "<~",
            Orientation::UndirectedOrRight => "~>",
            Orientation::LeftOrRight => "<->",
            Orientation::Any => "-",
        }
    }

    /// Opening and closing delimiters of the full form.
    pub fn delimiters(self) -> (&'static str, &'static str) {
        match self {
            Orientation::Left => ("<-[", "]-"),
            Orientation::Undirected => ("~[", "]~"),
            Orientation::Right => ("-[", "]->"),
            Orientation::LeftOrUndirected => ("<~[", "]~"),
            Orientation::UndirectedOrRight => ("~[", "]~>"),
            Orientation::LeftOrRight => ("<-[", "]->"),
            Orientation::Any => ("-[", "]-"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgePattern {
    pub orientation: Orientation,
    /// `None` for the abbreviated forms such as `->`; the full form `-[]->`
    /// carries an empty spec.
    pub spec: Option<ElementSpec>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LabelExpr {
    Label(String),
    /// `%`: any label at all.
    Wildcard,
    Not(Box<LabelExpr>),
    And(Box<LabelExpr>, Box<LabelExpr>),
    Or(Box<LabelExpr>, Box<LabelExpr>),
}

impl LabelExpr {
    pub fn matches(&self, labels: &std::collections::BTreeSet<String>) -> bool {
        match self {
            LabelExpr::Label(l) => labels.contains(l),
            LabelExpr::Wildcard => !labels.is_empty(),
            LabelExpr::Not(e) => !e.matches(labels),
            LabelExpr::And(a, b) => a.matches(labels) && b.matches(labels),
            LabelExpr::Or(a, b) => a.matches(labels) || b.matches(labels),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bracket {
    Round,
    Square,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quantifier {
    pub min: u64,
    /// `None` is unbounded.
    pub max: Option<u64>,
}

impl Quantifier {
    pub fn is_bounded(&self) -> bool {
        self.max.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Repetition {
    Quantified(Quantifier),
    /// `?`: zero or one, exposing singletons as conditional.
    Optional,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParenPattern {
    pub bracket: Bracket,
    pub restrictor: Option<Restrictor>,
    pub body: PatternTerm,
    pub filter: Option<Expr>,
    pub repetition: Option<Repetition>,
    pub span: Span,
}

impl ParenPattern {
    pub fn quantifier(&self) -> Option<Quantifier> {
        match self.repetition {
            Some(Repetition::Quantified(q)) => Some(q),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Literal {
    Null,
    Bool(bool),
    Int(i64),
    Decimal(f64),
    String(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Or => "OR",
            BinOp::And => "AND",
            BinOp::Eq => "=",
            BinOp::Ne => "<>",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AggFunc {
    Sum,
    Count,
    Avg,
    Min,
    Max,
}

impl AggFunc {
    pub fn name(self) -> &'static str {
        match self {
            AggFunc::Sum => "SUM",
            AggFunc::Count => "COUNT",
            AggFunc::Avg => "AVG",
            AggFunc::Min => "MIN",
            AggFunc::Max => "MAX",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AggArg {
    Expr(Box<Expr>),
    /// `v.*`: the group's elements themselves.
    Elements(Ident),
}

/// Boolean and value expressions share one tree; truth values are
/// `Bool` or null (UNKNOWN) at evaluation time.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Literal(Literal),
    Property {
        var: Ident,
        key: String,
    },
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    IsNull {
        expr: Box<Expr>,
        negated: bool,
    },
    IsDirected(Ident),
    IsSourceOf {
        node: Ident,
        edge: Ident,
    },
    IsDestinationOf {
        node: Ident,
        edge: Ident,
    },
    Same(Vec<Ident>, Span),
    AllDifferent(Vec<Ident>, Span),
    Aggregate {
        func: AggFunc,
        arg: AggArg,
        span: Span,
    },
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    /// Calls `f` on every variable occurrence together with whether it sits
    /// inside an aggregate.
    pub fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a Ident, bool)) {
        self.visit_vars_in(false, f)
    }

    fn visit_vars_in<'a>(&'a self, in_agg: bool, f: &mut impl FnMut(&'a Ident, bool)) {
        match self {
            Expr::Literal(_) => {}
            Expr::Property { var, .. } => f(var, in_agg),
            Expr::Neg(e) | Expr::Not(e) => e.visit_vars_in(in_agg, f),
            Expr::IsNull { expr, .. } => expr.visit_vars_in(in_agg, f),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.visit_vars_in(in_agg, f);
                rhs.visit_vars_in(in_agg, f);
            }
            Expr::IsDirected(v) => f(v, in_agg),
            Expr::IsSourceOf { node, edge } | Expr::IsDestinationOf { node, edge } => {
                f(node, in_agg);
                f(edge, in_agg);
            }
            Expr::Same(vs, _) | Expr::AllDifferent(vs, _) => vs.iter().for_each(|v| f(v, in_agg)),
            Expr::Aggregate { arg, .. } => match arg {
                AggArg::Expr(e) => e.visit_vars_in(true, f),
                AggArg::Elements(v) => f(v, true),
            },
        }
    }
}
