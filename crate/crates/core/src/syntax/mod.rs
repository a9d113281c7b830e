//! Lexer, parser, AST and canonical renderer for graph pattern queries.

pub mod ast;
mod parser;
mod render;
mod token;

pub use ast::*;
pub use parser::{line_col, parse, ParseError, ParseErrorKind};
pub use render::{
    decimal_text, quantifier_text, render, render_expr, render_label, render_term, restrictor_text, selector_text,
};
pub use token::{tokenize, EdgeClose, EdgeOpen, Keyword, LexError, Token, TokenKind};
