use std::fmt;

use thiserror::Error;

use super::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Keyword {
    Match,
    Where,
    Trail,
    Acyclic,
    Simple,
    Any,
    All,
    Shortest,
    Group,
    Same,
    AllDifferent,
    Is,
    Directed,
    Source,
    Destination,
    Of,
    Null,
    And,
    Or,
    Not,
    Sum,
    Count,
    Avg,
    Min,
    Max,
    True,
    False,
}

impl Keyword {
    const ALL: [(Keyword, &'static str); 27] = [
        (Keyword::Match, "MATCH"),
        (Keyword::Where, "WHERE"),
        (Keyword::Trail, "TRAIL"),
        (Keyword::Acyclic, "ACYCLIC"),
        (Keyword::Simple, "SIMPLE"),
        (Keyword::Any, "ANY"),
        (Keyword::All, "ALL"),
        (Keyword::Shortest, "SHORTEST"),
        (Keyword::Group, "GROUP"),
        (Keyword::Same, "SAME"),
        (Keyword::AllDifferent, "ALL_DIFFERENT"),
        (Keyword::Is, "IS"),
        (Keyword::Directed, "DIRECTED"),
        (Keyword::Source, "SOURCE"),
        (Keyword::Destination, "DESTINATION"),
        (Keyword::Of, "OF"),
        (Keyword::Null, "NULL"),
        (Keyword::And, "AND"),
        (Keyword::Or, "OR"),
        (Keyword::Not, "NOT"),
        (Keyword::Sum, "SUM"),
        (Keyword::Count, "COUNT"),
        (Keyword::Avg, "AVG"),
        (Keyword::Min, "MIN"),
        (Keyword::Max, "MAX"),
        (Keyword::True, "TRUE"),
        (Keyword::False, "FALSE"),
    ];

    pub fn lookup(word: &str) -> Option<Keyword> {
        Self::ALL
            .iter()
            .find(|(_, s)| s.eq_ignore_ascii_case(word))
            .map(|(k, _)| *k)
    }

    pub fn as_str(self) -> &'static str {
        Self::ALL.iter().find(|(k, _)| *k == self).map(|(_, s)| *s).unwrap()
    }
}

/// Edge-pattern openers: `<-[`, `~[`, `-[`, `<~[`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOpen {
    Left,
    Tilde,
    Minus,
    LeftTilde,
}

/// Edge-pattern closers: `]-`, `]->`, `]~`, `]~>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClose {
    Minus,
    Right,
    Tilde,
    TildeRight,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Keyword(Keyword),
    /// Numeric literal text; `decimal` when it contains a point.
    Number { text: String, decimal: bool },
    String(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Dot,
    Question,
    Pipe,
    /// `|+|`
    MultisetAlt,
    Amp,
    Bang,
    Percent,
    Plus,
    Star,
    Slash,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    /// `-`: minus sign, or the any-direction abbreviated edge.
    Minus,
    /// `<-`
    LeftArrow,
    /// `->`
    RightArrow,
    /// `<->`
    LeftRightArrow,
    /// `~`
    Tilde,
    /// `<~`
    LeftTilde,
    /// `~>`
    TildeRight,
    EdgeOpen(EdgeOpen),
    EdgeClose(EdgeClose),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(name) => return write!(f, "identifier `{name}`"),
            TokenKind::Keyword(k) => return write!(f, "keyword {}", k.as_str()),
            TokenKind::Number { text, .. } => return write!(f, "number {text}"),
            TokenKind::String(_) => "string literal",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBracket => "`[`",
            TokenKind::RBracket => "`]`",
            TokenKind::LBrace => "`{`",
            TokenKind::RBrace => "`}`",
            TokenKind::Comma => "`,`",
            TokenKind::Colon => "`:`",
            TokenKind::Dot => "`.`",
            TokenKind::Question => "`?`",
            TokenKind::Pipe => "`|`",
            TokenKind::MultisetAlt => "`|+|`",
            TokenKind::Amp => "`&`",
            TokenKind::Bang => "`!`",
            TokenKind::Percent => "`%`",
            TokenKind::Plus => "`+`",
            TokenKind::Star => "`*`",
            TokenKind::Slash => "`/`",
            TokenKind::Eq => "`=`",
            TokenKind::Ne => "`<>`",
            TokenKind::Lt => "`<`",
            TokenKind::Le => "`<=`",
            TokenKind::Gt => "`>`",
            TokenKind::Ge => "`>=`",
            TokenKind::Minus => "`-`",
            TokenKind::LeftArrow => "`<-`",
            TokenKind::RightArrow => "`->`",
            TokenKind::LeftRightArrow => "`<->`",
            TokenKind::Tilde => "`~`",
            TokenKind::LeftTilde => "`<~`",
            TokenKind::TildeRight => "`~>`",
            TokenKind::EdgeOpen(EdgeOpen::Left) => "`<-[`",
            TokenKind::EdgeOpen(EdgeOpen::Tilde) => "`~[`",
            TokenKind::EdgeOpen(EdgeOpen::Minus) => "`-[`",
            TokenKind::EdgeOpen(EdgeOpen::LeftTilde) => "`<~[`",
            TokenKind::EdgeClose(EdgeClose::Minus) => "`]-`",
            TokenKind::EdgeClose(EdgeClose::Right) => "`]->`",
            TokenKind::EdgeClose(EdgeClose::Tilde) => "`]~`",
            TokenKind::EdgeClose(EdgeClose::TildeRight) => "`]~>`",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
    /// Source text of the token (original case for keywords).
    pub text: String,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{message} at byte {offset}")]
pub struct LexError {
    pub offset: usize,
    pub message: String,
}

const FIXED: &[(&str, TokenKind)] = &[
    ("|+|", TokenKind::MultisetAlt),
    ("<-[", TokenKind::EdgeOpen(EdgeOpen::Left)),
    ("<~[", TokenKind::EdgeOpen(EdgeOpen::LeftTilde)),
    ("<->", TokenKind::LeftRightArrow),
    ("<-", TokenKind::LeftArrow),
    ("<~", TokenKind::LeftTilde),
    ("<>", TokenKind::Ne),
    ("<=", TokenKind::Le),
    ("<", TokenKind::Lt),
    (">=", TokenKind::Ge),
    (">", TokenKind::Gt),
    ("-[", TokenKind::EdgeOpen(EdgeOpen::Minus)),
    ("->", TokenKind::RightArrow),
    ("-", TokenKind::Minus),
    ("~[", TokenKind::EdgeOpen(EdgeOpen::Tilde)),
    ("~>", TokenKind::TildeRight),
    ("~", TokenKind::Tilde),
    ("(", TokenKind::LParen),
    (")", TokenKind::RParen),
    ("[", TokenKind::LBracket),
    ("{", TokenKind::LBrace),
    ("}", TokenKind::RBrace),
    (",", TokenKind::Comma),
    (":", TokenKind::Colon),
    (".", TokenKind::Dot),
    ("?", TokenKind::Question),
    ("|", TokenKind::Pipe),
    ("&", TokenKind::Amp),
    ("!", TokenKind::Bang),
    ("%", TokenKind::Percent),
    ("+", TokenKind::Plus),
    ("*", TokenKind::Star),
    ("/", TokenKind::Slash),
    ("=", TokenKind::Eq),
];

/// `]` closes an edge spec only while one is open; elsewhere it is a plain
/// bracket, so `[...]->` reads as a bracket followed by an arrow.
const CLOSERS: &[(&str, TokenKind)] = &[
    ("]->", TokenKind::EdgeClose(EdgeClose::Right)),
    ("]-", TokenKind::EdgeClose(EdgeClose::Minus)),
    ("]~>", TokenKind::EdgeClose(EdgeClose::TildeRight)),
    ("]~", TokenKind::EdgeClose(EdgeClose::Tilde)),
];

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let mut tokens = Vec::new();
    let mut in_edge = false;
    let mut pos = 0;
    while pos < text.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        let start = pos;
        let kind = if is_ident_start(c) {
            let len = rest.find(|ch: char| !is_ident_char(ch)).unwrap_or(rest.len());
            let word = &rest[..len];
            pos += len;
            match Keyword::lookup(word) {
                Some(k) => TokenKind::Keyword(k),
                None => TokenKind::Ident(word.to_string()),
            }
        } else if c.is_ascii_digit() {
            let mut len = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            let mut decimal = false;
            let after = &rest[len..];
            if after.starts_with('.') && after[1..].starts_with(|ch: char| ch.is_ascii_digit()) {
                decimal = true;
                len += 1 + after[1..].find(|ch: char| !ch.is_ascii_digit()).unwrap_or(after.len() - 1);
            }
            if rest[len..].starts_with(is_ident_start) {
                return Err(LexError {
                    offset: start,
                    message: "malformed number".into(),
                });
            }
            pos += len;
            TokenKind::Number {
                text: rest[..len].to_string(),
                decimal,
            }
        } else if c == '\'' {
            let mut value = String::new();
            let mut i = 1;
            loop {
                let Some(ch) = rest[i..].chars().next() else {
                    return Err(LexError {
                        offset: start,
                        message: "unterminated string literal".into(),
                    });
                };
                i += ch.len_utf8();
                if ch == '\'' {
                    if rest[i..].starts_with('\'') {
                        value.push('\'');
                        i += 1;
                    } else {
                        break;
                    }
                } else {
                    value.push(ch);
                }
            }
            pos += i;
            TokenKind::String(value)
        } else if c == ']' {
            let closer = if in_edge {
                CLOSERS.iter().find(|(s, _)| rest.starts_with(s))
            } else {
                None
            };
            in_edge = false;
            match closer {
                Some((s, k)) => {
                    pos += s.len();
                    k.clone()
                }
                None => {
                    pos += 1;
                    TokenKind::RBracket
                }
            }
        } else if let Some((s, k)) = FIXED.iter().find(|(s, _)| rest.starts_with(s)) {
            pos += s.len();
            if matches!(k, TokenKind::EdgeOpen(_)) {
                in_edge = true;
            }
            k.clone()
        } else {
            return Err(LexError {
                offset: start,
                message: format!("unexpected character `{c}`"),
            });
        };
        tokens.push(Token {
            kind,
            span: Span::new(start, pos),
            text: text[start..pos].to_string(),
        });
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn full_edge_tokens() {
        assert_eq!(
            kinds("-[e:Transfer]->"),
            [
                TokenKind::EdgeOpen(EdgeOpen::Minus),
                TokenKind::Ident("e".into()),
                TokenKind::Colon,
                TokenKind::Ident("Transfer".into()),
                TokenKind::EdgeClose(EdgeClose::Right),
            ]
        );
    }

    #[test]
    fn abbreviated_edge_with_quantifier() {
        let num = |s: &str| TokenKind::Number {
            text: s.into(),
            decimal: false,
        };
        assert_eq!(
            kinds("->{1,5}"),
            [
                TokenKind::RightArrow,
                TokenKind::LBrace,
                num("1"),
                TokenKind::Comma,
                num("5"),
                TokenKind::RBrace
            ]
        );
    }

    #[test]
    fn unterminated_string() {
        assert_eq!(tokenize("'unclosed").unwrap_err().offset, 0);
        assert_eq!(tokenize("MATCH (x WHERE x.a = 'b)").unwrap_err().offset, 21);
        assert_eq!(tokenize("MATCH (x) $").unwrap_err().offset, 10);
    }

    #[test]
    fn bracket_close_outside_edge_is_plain() {
        assert_eq!(
            kinds("[(a)]->(b)")[4..6],
            [TokenKind::RBracket, TokenKind::RightArrow]
        );
        assert_eq!(
            kinds("~[e]~>")[2],
            TokenKind::EdgeClose(EdgeClose::TildeRight)
        );
    }

    #[test]
    fn keywords_ignore_case_and_strings_unescape() {
        assert_eq!(kinds("match Where")[..], [TokenKind::Keyword(Keyword::Match), TokenKind::Keyword(Keyword::Where)]);
        assert_eq!(kinds("'it''s'"), [TokenKind::String("it's".into())]);
        assert_eq!(
            kinds("2.50"),
            [TokenKind::Number {
                text: "2.50".into(),
                decimal: true
            }]
        );
        assert!(tokenize("5M").is_err());
    }

    #[test]
    fn spans_tile_the_input() {
        let text = "MATCH TRAIL (a WHERE a.owner='Jay') [-[b:Transfer WHERE b.amount>5000000]->]+ (a)";
        let tokens = tokenize(text).unwrap();
        let mut pos = 0;
        for t in &tokens {
            assert!(text[pos..t.span.start].chars().all(char::is_whitespace));
            assert_eq!(&text[t.span.start..t.span.end], t.text);
            pos = t.span.end;
        }
        assert_eq!(pos, text.len());
    }
}
