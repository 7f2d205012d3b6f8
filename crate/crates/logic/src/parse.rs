//! Recursive-descent parser for the modal formula grammar.
//!
//! Grammar (UTF-8 text, whitespace-insensitive between tokens):
//!
//! ```text
//! equiv   := implies ( "<->" equiv )?          (right-associative)
//! implies := or ( "->" implies )?              (right-associative)
//! or      := and ( "|" and )*                  (left-associative)
//! and     := unary ( "&" unary )*              (left-associative)
//! unary   := "~" unary | "[" agent "]" unary | "<" agent ">" unary | primary
//! primary := atom | "(" equiv ")"
//! ```
//!
//! Atoms are bare identifiers (`p`, `phi_FR`) or structured measurement and
//! state atoms, written without internal whitespace:
//!
//! ```text
//! M[agent,time]=value          a recorded outcome
//! ket[state;system;time]       a system is in a given state
//! ind[agent;state;system;time] an agent's memory indicates a state
//! ind2[x;y;state;system;time]  x's memory indicates y's memory indicating
//! ```

use crate::formula::{Agent, Formula};
use crate::{LogicError, Result};

/// Parses a formula from text.
pub fn parse(text: &str) -> Result<Formula> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, index: 0 };
    let formula = parser.equiv()?;
    match parser.peek() {
        Some(token) => Err(err(token.position, "unexpected trailing input")),
        None => Ok(formula),
    }
}

fn err(position: usize, message: impl Into<String>) -> LogicError {
    LogicError::Parse {
        position,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Atom(String),
    Not,
    And,
    Or,
    Implies,
    Equiv,
    LParen,
    RParen,
    BoxOp(String),
    DiamondOp(String),
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    position: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn is_field_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '+'
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek_char(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek_char() == Some(expected) {
            self.pos += expected.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek_char() {
            if is_ident_continue(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        self.text[start..self.pos].to_owned()
    }

    /// One bracket field: a non-empty run of `[A-Za-z0-9_+]`.
    fn field(&mut self) -> Result<String> {
        let start = self.pos;
        while let Some(c) = self.peek_char() {
            if is_field_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(err(start, "expected a field inside a structured atom"));
        }
        Ok(self.text[start..self.pos].to_owned())
    }

    /// The tail of a structured atom whose head identifier has just been
    /// consumed and whose `[` is next. Returns the atom's canonical text.
    fn structured_atom(&mut self, head: &str, head_pos: usize) -> Result<String> {
        self.pos += 1; // consume '['
        let (field_count, has_value) = match head {
            "M" => (2, true),
            "ket" => (3, false),
            "ind" => (4, false),
            "ind2" => (5, false),
            _ => {
                return Err(err(
                    head_pos,
                    format!("'{head}' is not a structured atom head (expected M, ket, ind, ind2)"),
                ))
            }
        };
        let separator = if head == "M" { ',' } else { ';' };
        let mut fields = Vec::with_capacity(field_count);
        for i in 0..field_count {
            if i > 0 && !self.eat(separator) {
                return Err(err(
                    self.pos,
                    format!("expected '{separator}' between fields of a {head} atom"),
                ));
            }
            fields.push(self.field()?);
        }
        if !self.eat(']') {
            return Err(err(self.pos, format!("expected ']' closing the {head} atom")));
        }
        let mut text = format!("{head}[{}]", fields.join(&separator.to_string()));
        if has_value {
            if !self.eat('=') {
                return Err(err(self.pos, "expected '=' after a measurement atom"));
            }
            let value = self.field()?;
            text.push('=');
            text.push_str(&value);
        }
        Ok(text)
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut lexer = Lexer { text, pos: 0 };
    let mut tokens = Vec::new();
    while let Some(c) = lexer.peek_char() {
        let position = lexer.pos;
        if c.is_whitespace() {
            lexer.bump();
            continue;
        }
        let kind = match c {
            '~' => {
                lexer.bump();
                TokenKind::Not
            }
            '&' => {
                lexer.bump();
                TokenKind::And
            }
            '|' => {
                lexer.bump();
                TokenKind::Or
            }
            '(' => {
                lexer.bump();
                TokenKind::LParen
            }
            ')' => {
                lexer.bump();
                TokenKind::RParen
            }
            '-' => {
                lexer.bump();
                if !lexer.eat('>') {
                    return Err(err(position, "expected '->'"));
                }
                TokenKind::Implies
            }
            '<' => {
                lexer.bump();
                if lexer.eat('-') {
                    if !lexer.eat('>') {
                        return Err(err(position, "expected '<->'"));
                    }
                    TokenKind::Equiv
                } else {
                    let agent_pos = lexer.pos;
                    match lexer.peek_char() {
                        Some(a) if is_ident_start(a) => {}
                        _ => return Err(err(agent_pos, "expected an agent id after '<'")),
                    }
                    let agent = lexer.ident();
                    if !lexer.eat('>') {
                        return Err(err(lexer.pos, "expected '>' closing the possibility operator"));
                    }
                    TokenKind::DiamondOp(agent)
                }
            }
            '[' => {
                lexer.bump();
                let agent_pos = lexer.pos;
                match lexer.peek_char() {
                    Some(a) if is_ident_start(a) => {}
                    _ => return Err(err(agent_pos, "expected an agent id after '['")),
                }
                let agent = lexer.ident();
                if !lexer.eat(']') {
                    return Err(err(lexer.pos, "expected ']' closing the certainty operator"));
                }
                TokenKind::BoxOp(agent)
            }
            c if is_ident_start(c) => {
                let head = lexer.ident();
                if lexer.peek_char() == Some('[') && matches!(head.as_str(), "M" | "ket" | "ind" | "ind2") {
                    TokenKind::Atom(lexer.structured_atom(&head, position)?)
                } else {
                    TokenKind::Atom(head)
                }
            }
            other => return Err(err(position, format!("unexpected character '{other}'"))),
        };
        tokens.push(Token { kind, position });
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    index: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index)
    }

    fn advance(&mut self) -> Option<Token> {
        let token = self.tokens.get(self.index).cloned();
        if token.is_some() {
            self.index += 1;
        }
        token
    }

    fn end_position(&self) -> usize {
        self.tokens.last().map_or(0, |t| t.position + 1)
    }

    fn equiv(&mut self) -> Result<Formula> {
        let lhs = self.implies()?;
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Equiv)) {
            self.advance();
            let rhs = self.equiv()?;
            Ok(lhs.equiv(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Implies)) {
            self.advance();
            let rhs = self.implies()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Or)) {
            self.advance();
            let rhs = self.and()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::And)) {
            self.advance();
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let Some(token) = self.peek().cloned() else {
            return Err(err(self.end_position(), "expected a formula"));
        };
        match token.kind {
            TokenKind::Not => {
                self.advance();
                Ok(self.unary()?.not())
            }
            TokenKind::BoxOp(agent) => {
                self.advance();
                Ok(Formula::Box(Agent::new(agent), Box::new(self.unary()?)))
            }
            TokenKind::DiamondOp(agent) => {
                self.advance();
                Ok(Formula::Diamond(Agent::new(agent), Box::new(self.unary()?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        let Some(token) = self.advance() else {
            return Err(err(self.end_position(), "expected a formula"));
        };
        match token.kind {
            TokenKind::Atom(name) => Ok(Formula::Atom(name)),
            TokenKind::LParen => {
                let inner = self.equiv()?;
                match self.advance() {
                    Some(Token {
                        kind: TokenKind::RParen,
                        ..
                    }) => Ok(inner),
                    Some(other) => Err(err(other.position, "expected ')'")),
                    None => Err(err(self.end_position(), "expected ')'")),
                }
            }
            _ => Err(err(token.position, "expected an atom, '~', '(', '[x]' or '<x>'")),
        }
    }
}
