use thiserror::Error;

use super::ast::*;
use super::token::{tokenize, EdgeClose, EdgeOpen, Keyword, Token, TokenKind};

/// A lexing or parsing failure with its 1-based source position.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lex,
    Parse,
}

/// 1-based line and column (in characters) of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
    (line, col)
}

pub fn parse(text: &str) -> Result<Query, ParseError> {
    let tokens = tokenize(text).map_err(|e| {
        let (line, column) = line_col(text, e.offset);
        ParseError {
            kind: ParseErrorKind::Lex,
            offset: e.offset,
            line,
            column,
            message: e.message,
        }
    })?;
    let mut p = Parser {
        text,
        tokens,
        pos: 0,
    };
    p.query()
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, n: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + n).map(|t| &t.kind)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|t| t.span.start)
            .unwrap_or(self.text.len())
    }

    fn last_end(&self) -> usize {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.tokens.get(i))
            .map(|t| t.span.end)
            .unwrap_or(0)
    }

    fn error_at(&self, offset: usize, message: String) -> ParseError {
        let (line, column) = line_col(self.text, offset);
        ParseError {
            kind: ParseErrorKind::Parse,
            offset,
            line,
            column,
            message,
        }
    }

    fn expected(&self, what: &str) -> ParseError {
        let found = match self.tokens.get(self.pos) {
            Some(t) => t.kind.to_string(),
            None => "end of input".to_string(),
        };
        self.error_at(self.offset(), format!("expected {what}, found {found}"))
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: Keyword) -> bool {
        self.eat(&TokenKind::Keyword(kw))
    }

    fn expect(&mut self, kind: &TokenKind) -> PResult<Token> {
        if self.peek() == Some(kind) {
            Ok(self.bump())
        } else {
            Err(self.expected(&kind.to_string()))
        }
    }

    fn is_kw(&self, kw: Keyword) -> bool {
        self.peek() == Some(&TokenKind::Keyword(kw))
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match self.peek() {
            Some(TokenKind::Ident(_)) => {
                let t = self.bump();
                let TokenKind::Ident(name) = t.kind else { unreachable!() };
                Ok(Ident { name, span: t.span })
            }
            Some(TokenKind::Keyword(k)) => {
                let k = *k;
                Err(self.error_at(
                    self.offset(),
                    format!("expected {what}, found reserved keyword {}", k.as_str()),
                ))
            }
            _ => Err(self.expected(what)),
        }
    }

    /// Label and property names may be keywords.
    fn name(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(TokenKind::Ident(_)) | Some(TokenKind::Keyword(_)) => Ok(self.bump().text),
            _ => Err(self.expected(what)),
        }
    }

    fn positive_int(&mut self, what: &str) -> PResult<u64> {
        match self.peek() {
            Some(TokenKind::Number { decimal: false, .. }) => {
                let t = self.bump();
                t.text
                    .parse()
                    .map_err(|_| self.error_at(t.span.start, "integer literal out of range".into()))
            }
            _ => Err(self.expected(what)),
        }
    }

    fn query(&mut self) -> PResult<Query> {
        if !self.eat_kw(Keyword::Match) {
            return Err(self.expected("MATCH"));
        }
        let mut paths = vec![self.path_pattern()?];
        while self.eat(&TokenKind::Comma) {
            paths.push(self.path_pattern()?);
        }
        let filter = if self.eat_kw(Keyword::Where) {
            Some(self.expr()?)
        } else {
            None
        };
        if self.peek().is_some() {
            return Err(self.expected("`,`, WHERE or end of input"));
        }
        Ok(Query { paths, filter })
    }

    fn selector(&mut self) -> PResult<Option<Selector>> {
        if self.eat_kw(Keyword::Any) {
            if self.eat_kw(Keyword::Shortest) {
                return Ok(Some(Selector::AnyShortest));
            }
            if matches!(self.peek(), Some(TokenKind::Number { .. })) {
                return Ok(Some(Selector::AnyK(self.selector_k()?)));
            }
            return Ok(Some(Selector::Any));
        }
        if self.eat_kw(Keyword::All) {
            if !self.eat_kw(Keyword::Shortest) {
                return Err(self.expected("SHORTEST"));
            }
            return Ok(Some(Selector::AllShortest));
        }
        if self.eat_kw(Keyword::Shortest) {
            let k = self.selector_k()?;
            if self.eat_kw(Keyword::Group) {
                return Ok(Some(Selector::ShortestKGroup(k)));
            }
            return Ok(Some(Selector::ShortestK(k)));
        }
        Ok(None)
    }

    fn selector_k(&mut self) -> PResult<u64> {
        let at = self.offset();
        let k = self.positive_int("a positive integer")?;
        if k == 0 {
            return Err(self.error_at(at, "selector count must be at least 1".into()));
        }
        Ok(k)
    }

    fn restrictor(&mut self) -> Option<Restrictor> {
        let r = match self.peek() {
            Some(TokenKind::Keyword(Keyword::Trail)) => Restrictor::Trail,
            Some(TokenKind::Keyword(Keyword::Acyclic)) => Restrictor::Acyclic,
            Some(TokenKind::Keyword(Keyword::Simple)) => Restrictor::Simple,
            _ => return None,
        };
        self.pos += 1;
        Some(r)
    }

    fn path_pattern(&mut self) -> PResult<PathPattern> {
        let start = self.offset();
        let selector = self.selector()?;
        let restrictor = self.restrictor();
        let variable = if matches!(self.peek(), Some(TokenKind::Ident(_))) && self.peek_at(1) == Some(&TokenKind::Eq)
        {
            let v = self.ident("path variable")?;
            self.pos += 1;
            Some(v)
        } else {
            None
        };
        if self.is_kw(Keyword::Any) || self.is_kw(Keyword::All) || self.is_kw(Keyword::Shortest) {
            return Err(self.error_at(
                self.offset(),
                "a selector may only appear at the head of a path pattern".into(),
            ));
        }
        let body = self.alternatives()?;
        Ok(PathPattern {
            selector,
            restrictor,
            variable,
            body,
            span: Span::new(start, self.last_end()),
        })
    }

    /// `seq ((| | |+|) seq)*`, one operator kind per level.
    fn alternatives(&mut self) -> PResult<PatternTerm> {
        let first = self.sequence()?;
        let mut op: Option<TokenKind> = None;
        let mut branches = vec![first];
        while let Some(k @ (TokenKind::Pipe | TokenKind::MultisetAlt)) = self.peek() {
            let kind = k.clone();
            if let Some(prev) = &op {
                if *prev != kind {
                    return Err(self.error_at(
                        self.offset(),
                        "`|` and `|+|` cannot be mixed without brackets".into(),
                    ));
                }
            }
            self.pos += 1;
            op = Some(kind);
            branches.push(self.sequence()?);
        }
        Ok(match op {
            None => branches.pop().unwrap(),
            Some(TokenKind::Pipe) => PatternTerm::Union(branches),
            Some(_) => PatternTerm::Alternation(branches),
        })
    }

    fn starts_term(&self) -> bool {
        matches!(self.peek(), Some(k) if starts_edge(k) || matches!(k, TokenKind::LParen | TokenKind::LBracket))
    }

    fn sequence(&mut self) -> PResult<PatternTerm> {
        let mut terms = Vec::new();
        while self.starts_term() {
            terms.push(self.term()?);
        }
        match terms.len() {
            0 => Err(self.expected("a node, edge or parenthesized pattern")),
            1 => Ok(terms.pop().unwrap()),
            _ => Ok(PatternTerm::Concat(terms)),
        }
    }

    fn term(&mut self) -> PResult<PatternTerm> {
        match self.peek() {
            Some(TokenKind::LParen) => {
                let is_paren = matches!(
                    self.peek_at(1),
                    Some(k) if starts_edge(k)
                        || matches!(
                            k,
                            TokenKind::LParen
                                | TokenKind::LBracket
                                | TokenKind::Keyword(Keyword::Trail | Keyword::Acyclic | Keyword::Simple)
                        )
                );
                if is_paren {
                    self.paren()
                } else {
                    Ok(PatternTerm::Node(self.node()?))
                }
            }
            Some(TokenKind::LBracket) => self.paren(),
            _ => {
                let edge = self.edge()?;
                let quantifier = self.quantifier()?;
                Ok(PatternTerm::Edge { edge, quantifier })
            }
        }
    }

    fn element_spec(&mut self) -> PResult<ElementSpec> {
        let variable = match self.peek() {
            Some(TokenKind::Ident(_)) => Some(self.ident("variable")?),
            Some(TokenKind::Keyword(k)) if *k != Keyword::Where => return Err(self.ident("variable").unwrap_err()),
            _ => None,
        };
        let label = if self.eat(&TokenKind::Colon) {
            Some(self.label_or()?)
        } else {
            None
        };
        let filter = if self.eat_kw(Keyword::Where) {
            Some(self.expr()?)
        } else {
            None
        };
        Ok(ElementSpec {
            variable,
            label,
            filter,
        })
    }

    fn node(&mut self) -> PResult<NodePattern> {
        let start = self.expect(&TokenKind::LParen)?.span.start;
        let spec = self.element_spec()?;
        self.expect(&TokenKind::RParen)?;
        Ok(NodePattern {
            spec,
            span: Span::new(start, self.last_end()),
        })
    }

    fn edge(&mut self) -> PResult<EdgePattern> {
        let start = self.offset();
        let abbrev = match self.peek() {
            Some(TokenKind::LeftArrow) => Some(Orientation::Left),
            Some(TokenKind::Tilde) => Some(Orientation::Undirected),
            Some(TokenKind::RightArrow) => Some(Orientation::Right),
            Some(TokenKind::LeftTilde) => Some(Orientation::LeftOrUndirected),
            Some(TokenKind::TildeRight) => Some(Orientation::UndirectedOrRight),
            Some(TokenKind::LeftRightArrow) => Some(Orientation::LeftOrRight),
            Some(TokenKind::Minus) => Some(Orientation::Any),
            _ => None,
        };
        if let Some(orientation) = abbrev {
            self.pos += 1;
            return Ok(EdgePattern {
                orientation,
                spec: None,
                span: Span::new(start, self.last_end()),
            });
        }
        let open = match self.peek() {
            Some(TokenKind::EdgeOpen(o)) => *o,
            _ => return Err(self.expected("an edge pattern")),
        };
        self.pos += 1;
        let spec = self.element_spec()?;
        let close = match self.peek() {
            Some(TokenKind::EdgeClose(c)) => *c,
            _ => return Err(self.expected("an edge closer such as `]->`")),
        };
        let orientation = match (open, close) {
            (EdgeOpen::Left, EdgeClose::Minus) => Orientation::Left,
            (EdgeOpen::Tilde, EdgeClose::Tilde) => Orientation::Undirected,
            (EdgeOpen::Minus, EdgeClose::Right) => Orientation::Right,
            (EdgeOpen::LeftTilde, EdgeClose::Tilde) => Orientation::LeftOrUndirected,
            (EdgeOpen::Tilde, EdgeClose::TildeRight) => Orientation::UndirectedOrRight,
            (EdgeOpen::Left, EdgeClose::Right) => Orientation::LeftOrRight,
            (EdgeOpen::Minus, EdgeClose::Minus) => Orientation::Any,
            _ => {
                return Err(self.error_at(
                    self.offset(),
                    "edge closer does not match its opener".into(),
                ))
            }
        };
        self.pos += 1;
        Ok(EdgePattern {
            orientation,
            spec: Some(spec),
            span: Span::new(start, self.last_end()),
        })
    }

    fn quantifier(&mut self) -> PResult<Option<Quantifier>> {
        if self.eat(&TokenKind::Star) {
            return Ok(Some(Quantifier { min: 0, max: None }));
        }
        if self.eat(&TokenKind::Plus) {
            return Ok(Some(Quantifier { min: 1, max: None }));
        }
        if self.peek() != Some(&TokenKind::LBrace) {
            return Ok(None);
        }
        let start = self.bump().span.start;
        let min = self.positive_int("a repetition count")?;
        let max = if self.eat(&TokenKind::Comma) {
            if matches!(self.peek(), Some(TokenKind::Number { .. })) {
                Some(self.positive_int("a repetition count")?)
            } else {
                None
            }
        } else {
            Some(min)
        };
        self.expect(&TokenKind::RBrace)?;
        if matches!(max, Some(m) if m < min) {
            return Err(self.error_at(start, "quantifier minimum exceeds its maximum".into()));
        }
        Ok(Some(Quantifier { min, max }))
    }

    fn paren(&mut self) -> PResult<PatternTerm> {
        let open = self.bump();
        let (bracket, close) = match open.kind {
            TokenKind::LParen => (Bracket::Round, TokenKind::RParen),
            _ => (Bracket::Square, TokenKind::RBracket),
        };
        let restrictor = self.restrictor();
        let body = self.alternatives()?;
        let filter = if self.eat_kw(Keyword::Where) {
            Some(self.expr()?)
        } else {
            None
        };
        self.expect(&close)?;
        let repetition = if self.eat(&TokenKind::Question) {
            Some(Repetition::Optional)
        } else {
            self.quantifier()?.map(Repetition::Quantified)
        };
        Ok(PatternTerm::Paren(Box::new(ParenPattern {
            bracket,
            restrictor,
            body,
            filter,
            repetition,
            span: Span::new(open.span.start, self.last_end()),
        })))
    }

    fn label_or(&mut self) -> PResult<LabelExpr> {
        let mut lhs = self.label_and()?;
        while self.eat(&TokenKind::Pipe) {
            lhs = LabelExpr::Or(Box::new(lhs), Box::new(self.label_and()?));
        }
        Ok(lhs)
    }

    fn label_and(&mut self) -> PResult<LabelExpr> {
        let mut lhs = self.label_not()?;
        while self.eat(&TokenKind::Amp) {
            lhs = LabelExpr::And(Box::new(lhs), Box::new(self.label_not()?));
        }
        Ok(lhs)
    }

    fn label_not(&mut self) -> PResult<LabelExpr> {
        if self.eat(&TokenKind::Bang) {
            return Ok(LabelExpr::Not(Box::new(self.label_not()?)));
        }
        if self.eat(&TokenKind::Percent) {
            return Ok(LabelExpr::Wildcard);
        }
        if self.eat(&TokenKind::LParen) {
            let inner = self.label_or()?;
            self.expect(&TokenKind::RParen)?;
            return Ok(inner);
        }
        Ok(LabelExpr::Label(self.name("a label")?))
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.expr_and()?;
        while self.eat_kw(Keyword::Or) {
            lhs = Expr::binary(BinOp::Or, lhs, self.expr_and()?);
        }
        Ok(lhs)
    }

    fn expr_and(&mut self) -> PResult<Expr> {
        let mut lhs = self.expr_not()?;
        while self.eat_kw(Keyword::And) {
            lhs = Expr::binary(BinOp::And, lhs, self.expr_not()?);
        }
        Ok(lhs)
    }

    fn expr_not(&mut self) -> PResult<Expr> {
        if self.eat_kw(Keyword::Not) {
            return Ok(Expr::Not(Box::new(self.expr_not()?)));
        }
        self.expr_cmp()
    }

    fn element_predicate(&mut self) -> PResult<Option<Expr>> {
        if !matches!(self.peek(), Some(TokenKind::Ident(_))) || self.peek_at(1) != Some(&TokenKind::Keyword(Keyword::Is)) {
            return Ok(None);
        }
        let kind = match self.peek_at(2) {
            Some(TokenKind::Keyword(k @ (Keyword::Directed | Keyword::Source | Keyword::Destination))) => *k,
            _ => return Ok(None),
        };
        let var = self.ident("variable")?;
        self.pos += 2;
        if kind == Keyword::Directed {
            return Ok(Some(Expr::IsDirected(var)));
        }
        if !self.eat_kw(Keyword::Of) {
            return Err(self.expected("OF"));
        }
        let edge = self.ident("edge variable")?;
        Ok(Some(if kind == Keyword::Source {
            Expr::IsSourceOf { node: var, edge }
        } else {
            Expr::IsDestinationOf { node: var, edge }
        }))
    }

    fn expr_cmp(&mut self) -> PResult<Expr> {
        if let Some(e) = self.element_predicate()? {
            return Ok(e);
        }
        let lhs = self.expr_add()?;
        if self.eat_kw(Keyword::Is) {
            let negated = self.eat_kw(Keyword::Not);
            if !self.eat_kw(Keyword::Null) {
                return Err(self.expected("NULL"));
            }
            return Ok(Expr::IsNull {
                expr: Box::new(lhs),
                negated,
            });
        }
        let op = match self.peek() {
            Some(TokenKind::Eq) => BinOp::Eq,
            Some(TokenKind::Ne) => BinOp::Ne,
            Some(TokenKind::Lt) => BinOp::Lt,
            Some(TokenKind::Le) => BinOp::Le,
            Some(TokenKind::Gt) => BinOp::Gt,
            Some(TokenKind::Ge) => BinOp::Ge,
            Some(TokenKind::LeftArrow) => {
                // `x<-1` lexes as an arrow; read it as `<` and a negation.
                self.pos += 1;
                let rhs = Expr::Neg(Box::new(self.expr_unary()?));
                let rhs = self.continue_mul(rhs)?;
                let rhs = self.continue_add(rhs)?;
                return Ok(Expr::binary(BinOp::Lt, lhs, rhs));
            }
            _ => return Ok(lhs),
        };
        self.pos += 1;
        let rhs = self.expr_add()?;
        Ok(Expr::binary(op, lhs, rhs))
    }

    fn expr_add(&mut self) -> PResult<Expr> {
        let lhs = self.expr_mul()?;
        self.continue_add(lhs)
    }

    fn continue_add(&mut self, mut lhs: Expr) -> PResult<Expr> {
        loop {
            let op = match self.peek() {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::binary(op, lhs, self.expr_mul()?);
        }
    }

    fn expr_mul(&mut self) -> PResult<Expr> {
        let lhs = self.expr_unary()?;
        self.continue_mul(lhs)
    }

    fn continue_mul(&mut self, mut lhs: Expr) -> PResult<Expr> {
        loop {
            let op = match self.peek() {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::binary(op, lhs, self.expr_unary()?);
        }
    }

    fn expr_unary(&mut self) -> PResult<Expr> {
        if self.eat(&TokenKind::Minus) {
            return Ok(Expr::Neg(Box::new(self.expr_unary()?)));
        }
        self.expr_primary()
    }

    fn ident_list(&mut self) -> PResult<Vec<Ident>> {
        self.expect(&TokenKind::LParen)?;
        let mut vars = vec![self.ident("variable")?];
        while self.eat(&TokenKind::Comma) {
            vars.push(self.ident("variable")?);
        }
        self.expect(&TokenKind::RParen)?;
        Ok(vars)
    }

    fn expr_primary(&mut self) -> PResult<Expr> {
        let start = self.offset();
        let Some(kind) = self.peek().cloned() else {
            return Err(self.expected("an expression"));
        };
        match kind {
            TokenKind::Number { text, decimal } => {
                self.pos += 1;
                if decimal {
                    let d: f64 = text.parse().map_err(|_| self.error_at(start, "bad decimal literal".into()))?;
                    Ok(Expr::Literal(Literal::Decimal(d)))
                } else {
                    let i: i64 = text
                        .parse()
                        .map_err(|_| self.error_at(start, "integer literal out of range".into()))?;
                    Ok(Expr::Literal(Literal::Int(i)))
                }
            }
            TokenKind::String(s) => {
                self.pos += 1;
                Ok(Expr::Literal(Literal::String(s)))
            }
            TokenKind::Keyword(Keyword::True) => {
                self.pos += 1;
                Ok(Expr::Literal(Literal::Bool(true)))
            }
            TokenKind::Keyword(Keyword::False) => {
                self.pos += 1;
                Ok(Expr::Literal(Literal::Bool(false)))
            }
            TokenKind::Keyword(Keyword::Null) => {
                self.pos += 1;
                Ok(Expr::Literal(Literal::Null))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Keyword(Keyword::Same) => {
                self.pos += 1;
                let vars = self.ident_list()?;
                Ok(Expr::Same(vars, Span::new(start, self.last_end())))
            }
            TokenKind::Keyword(Keyword::AllDifferent) => {
                self.pos += 1;
                let vars = self.ident_list()?;
                Ok(Expr::AllDifferent(vars, Span::new(start, self.last_end())))
            }
            TokenKind::Keyword(k @ (Keyword::Sum | Keyword::Count | Keyword::Avg | Keyword::Min | Keyword::Max)) => {
                self.pos += 1;
                let func = match k {
                    Keyword::Sum => AggFunc::Sum,
                    Keyword::Count => AggFunc::Count,
                    Keyword::Avg => AggFunc::Avg,
                    Keyword::Min => AggFunc::Min,
                    _ => AggFunc::Max,
                };
                self.expect(&TokenKind::LParen)?;
                let elements = matches!(self.peek(), Some(TokenKind::Ident(_)))
                    && self.peek_at(1) == Some(&TokenKind::Dot)
                    && self.peek_at(2) == Some(&TokenKind::Star);
                let arg = if elements {
                    let v = self.ident("variable")?;
                    self.pos += 2;
                    AggArg::Elements(v)
                } else {
                    AggArg::Expr(Box::new(self.expr()?))
                };
                self.expect(&TokenKind::RParen)?;
                Ok(Expr::Aggregate {
                    func,
                    arg,
                    span: Span::new(start, self.last_end()),
                })
            }
            TokenKind::Ident(_) => {
                let var = self.ident("variable")?;
                if !self.eat(&TokenKind::Dot) {
                    return Err(self.expected("`.` and a property name after a variable"));
                }
                let key = self.name("a property name")?;
                Ok(Expr::Property { var, key })
            }
            _ => Err(self.expected("an expression")),
        }
    }
}

fn starts_edge(k: &TokenKind) -> bool {
    matches!(
        k,
        TokenKind::EdgeOpen(_)
            | TokenKind::LeftArrow
            | TokenKind::RightArrow
            | TokenKind::LeftRightArrow
            | TokenKind::Tilde
            | TokenKind::LeftTilde
            | TokenKind::TildeRight
            | TokenKind::Minus
    )
}
