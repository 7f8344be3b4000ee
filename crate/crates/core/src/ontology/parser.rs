//! Recursive-descent parser for the functional-syntax subset.
//!
//! Supported statements: `Prefix`, `SubClassOf`, `EquivalentClasses`,
//! `DisjointClasses`, `SubObjectPropertyOf` (with `ObjectPropertyChain`),
//! `InverseObjectProperties`, `ObjectPropertyDomain`, `ObjectPropertyRange`,
//! `ClassAssertion`, `ObjectPropertyAssertion`. Class expressions use
//! `ObjectIntersectionOf`, `ObjectUnionOf`, `ObjectComplementOf`,
//! `ObjectSomeValuesFrom`, `ObjectAllValuesFrom`, `owl:Thing` and
//! `owl:Nothing`. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::ast::{Axiom, ClassExpression, ClassId, IndividualId, RoleId, Signature};
use super::{NamespaceClash, Ontology};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: unknown construct `{name}`")]
    UnknownConstruct { pos: Pos, name: String },
    #[error("{pos}: `{construct}` expects {expected}, found {found} argument(s)")]
    Arity { pos: Pos, construct: String, expected: String, found: usize },
    #[error("{pos}: expression nesting exceeds the maximum depth of {max}")]
    DepthLimit { pos: Pos, max: usize },
    #[error("signature error: {0}")]
    Namespace(#[from] NamespaceClash),
}

/// Line/column of a token, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone)]
pub struct ParserConfig {
    /// Maximum class-expression nesting depth.
    pub max_depth: usize,
    /// Accept `?name` variable tokens in identifier positions (used by the
    /// relational-pattern file format, not by ontology documents).
    pub allow_variables: bool,
}

impl Default for ParserConfig {
    fn default() -> Self {
        ParserConfig { max_depth: 64, allow_variables: false }
    }
}

/// Parses an ontology document with the default configuration.
pub fn parse_ontology(text: &str) -> Result<Ontology, ParseError> {
    parse_ontology_with(text, &ParserConfig::default())
}

pub fn parse_ontology_with(text: &str, config: &ParserConfig) -> Result<Ontology, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens: &tokens, at: 0, config };
    let mut prefixes = BTreeMap::new();
    let mut axioms = Vec::new();
    while !parser.at_end() {
        if parser.peek_word() == Some("Prefix") {
            let (name, iri) = parser.prefix_declaration()?;
            prefixes.insert(name, iri);
        } else {
            axioms.push(parser.axiom()?);
        }
    }
    let signature = Signature::from_axioms(&axioms)?;
    Ok(Ontology { prefixes, signature, axioms })
}

/// Parses a single axiom, e.g. `SubClassOf(:A :B)`.
pub fn parse_axiom(text: &str) -> Result<Axiom, ParseError> {
    parse_axiom_with(text, &ParserConfig::default())
}

pub(crate) fn parse_axiom_with(text: &str, config: &ParserConfig) -> Result<Axiom, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens: &tokens, at: 0, config };
    let axiom = parser.axiom()?;
    if !parser.at_end() {
        return Err(parser.err_here("trailing input after axiom"));
    }
    Ok(axiom)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    LParen,
    RParen,
    Equals,
    /// `<...>`
    IriRef(String),
    /// Any other run of non-delimiter characters.
    Word(String),
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: Pos,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                chars.next();
                col += 1;
                tokens.push(Token { kind: TokenKind::LParen, pos });
            }
            ')' => {
                chars.next();
                col += 1;
                tokens.push(Token { kind: TokenKind::RParen, pos });
            }
            '=' => {
                chars.next();
                col += 1;
                tokens.push(Token { kind: TokenKind::Equals, pos });
            }
            '<' => {
                chars.next();
                col += 1;
                let mut iri = String::new();
                loop {
                    match chars.next() {
                        Some('>') => {
                            col += 1;
                            break;
                        }
                        Some('\n') | None => {
                            return Err(ParseError::Syntax {
                                pos,
                                message: "unterminated IRI reference".into(),
                            });
                        }
                        Some(c) => {
                            col += 1;
                            iri.push(c);
                        }
                    }
                }
                tokens.push(Token { kind: TokenKind::IriRef(iri), pos });
            }
            _ => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '=' | '<' | '#') {
                        break;
                    }
                    word.push(c);
                    chars.next();
                    col += 1;
                }
                tokens.push(Token { kind: TokenKind::Word(word), pos });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    at: usize,
    config: &'a ParserConfig,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.at >= self.tokens.len()
    }

    fn here(&self) -> Pos {
        self.tokens
            .get(self.at)
            .or_else(|| self.tokens.last())
            .map(|t| t.pos)
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.here(), message: message.into() }
    }

    fn next(&mut self) -> Result<&'a Token, ParseError> {
        let token = self.tokens.get(self.at).ok_or_else(|| ParseError::Syntax {
            pos: self.here(),
            message: "unexpected end of input".into(),
        })?;
        self.at += 1;
        Ok(token)
    }

    fn peek_word(&self) -> Option<&'a str> {
        match self.tokens.get(self.at) {
            Some(Token { kind: TokenKind::Word(w), .. }) => Some(w.as_str()),
            _ => None,
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Pos, ParseError> {
        let token = self.next()?;
        if token.kind == kind {
            Ok(token.pos)
        } else {
            Err(ParseError::Syntax { pos: token.pos, message: format!("expected {what}") })
        }
    }

    fn word(&mut self) -> Result<(&'a str, Pos), ParseError> {
        let token = self.next()?;
        match &token.kind {
            TokenKind::Word(w) => Ok((w.as_str(), token.pos)),
            _ => Err(ParseError::Syntax { pos: token.pos, message: "expected a name".into() }),
        }
    }

    fn prefix_declaration(&mut self) -> Result<(String, String), ParseError> {
        self.word()?; // Prefix
        self.expect(TokenKind::LParen, "`(`")?;
        let (name, pos) = self.word()?;
        let Some(stripped) = name.strip_suffix(':') else {
            return Err(ParseError::Syntax {
                pos,
                message: "prefix name must end with `:`".into(),
            });
        };
        if stripped == "_" || stripped == "owl" {
            return Err(ParseError::Syntax {
                pos,
                message: format!("prefix `{stripped}:` is reserved"),
            });
        }
        self.expect(TokenKind::Equals, "`=`")?;
        let token = self.next()?;
        let TokenKind::IriRef(iri) = &token.kind else {
            return Err(ParseError::Syntax {
                pos: token.pos,
                message: "expected an IRI reference".into(),
            });
        };
        self.expect(TokenKind::RParen, "`)`")?;
        Ok((stripped.to_owned(), iri.clone()))
    }

    fn identifier(&mut self) -> Result<(String, Pos), ParseError> {
        let (word, pos) = self.word()?;
        if self.config.allow_variables && word.starts_with('?') && word.len() > 1 {
            return Ok((word.to_owned(), pos));
        }
        match word.split_once(':') {
            Some((prefix, local)) if !local.is_empty() && prefix != "_" && prefix != "owl" => {
                Ok((word.to_owned(), pos))
            }
            _ => Err(ParseError::Syntax {
                pos,
                message: format!("expected an identifier like `:Name`, found `{word}`"),
            }),
        }
    }

    fn role(&mut self) -> Result<RoleId, ParseError> {
        let (id, _) = self.identifier()?;
        Ok(RoleId::new(id))
    }

    fn individual(&mut self) -> Result<IndividualId, ParseError> {
        let (id, _) = self.identifier()?;
        Ok(IndividualId::new(id))
    }

    fn axiom(&mut self) -> Result<Axiom, ParseError> {
        let (name, pos) = self.word()?;
        let axiom = match name {
            "SubClassOf" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let sub = self.class_expression(1)?;
                let sup = self.class_expression(1)?;
                Axiom::SubClassOf { sub, sup }
            }
            "EquivalentClasses" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let members = self.expression_list(pos, "EquivalentClasses", 0)?;
                return Ok(Axiom::EquivalentClasses(members));
            }
            "DisjointClasses" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let a = self.class_expression(1)?;
                let b = self.class_expression(1)?;
                Axiom::DisjointClasses(a, b)
            }
            "SubObjectPropertyOf" => {
                self.expect(TokenKind::LParen, "`(`")?;
                if self.peek_word() == Some("ObjectPropertyChain") {
                    self.word()?;
                    let chain_pos = self.expect(TokenKind::LParen, "`(`")?;
                    let mut chain = Vec::new();
                    while self.peek_word().is_some() {
                        chain.push(self.role()?);
                    }
                    self.expect(TokenKind::RParen, "`)`")?;
                    if chain.len() < 2 {
                        return Err(ParseError::Arity {
                            pos: chain_pos,
                            construct: "ObjectPropertyChain".into(),
                            expected: "at least 2 roles".into(),
                            found: chain.len(),
                        });
                    }
                    let sup = self.role()?;
                    Axiom::RoleChain { chain, sup }
                } else {
                    let sub = self.role()?;
                    let sup = self.role()?;
                    Axiom::SubRoleOf { sub, sup }
                }
            }
            "InverseObjectProperties" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let a = self.role()?;
                let b = self.role()?;
                Axiom::InverseRoles(a, b)
            }
            "ObjectPropertyDomain" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let r = self.role()?;
                let c = self.class_expression(1)?;
                Axiom::Domain(r, c)
            }
            "ObjectPropertyRange" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let r = self.role()?;
                let c = self.class_expression(1)?;
                Axiom::Range(r, c)
            }
            "ClassAssertion" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let c = self.class_expression(1)?;
                let a = self.individual()?;
                Axiom::ClassAssertion(c, a)
            }
            "ObjectPropertyAssertion" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let r = self.role()?;
                let a = self.individual()?;
                let b = self.individual()?;
                Axiom::RoleAssertion(r, a, b)
            }
            _ => return Err(ParseError::UnknownConstruct { pos, name: name.to_owned() }),
        };
        self.expect(TokenKind::RParen, "`)`")?;
        Ok(axiom)
    }

    /// Parses `expr expr ... )` requiring at least two members.
    fn expression_list(
        &mut self,
        pos: Pos,
        construct: &str,
        depth: usize,
    ) -> Result<Vec<ClassExpression>, ParseError> {
        let mut members = Vec::new();
        loop {
            match self.tokens.get(self.at) {
                Some(Token { kind: TokenKind::RParen, .. }) => {
                    self.at += 1;
                    break;
                }
                Some(_) => members.push(self.class_expression(depth + 1)?),
                None => return Err(self.err_here("unexpected end of input")),
            }
        }
        if members.len() < 2 {
            return Err(ParseError::Arity {
                pos,
                construct: construct.to_owned(),
                expected: "at least 2 class expressions".into(),
                found: members.len(),
            });
        }
        Ok(members)
    }

    fn class_expression(&mut self, depth: usize) -> Result<ClassExpression, ParseError> {
        if depth > self.config.max_depth {
            return Err(ParseError::DepthLimit { pos: self.here(), max: self.config.max_depth });
        }
        let (word, pos) = self.word()?;
        match word {
            "owl:Thing" => Ok(ClassExpression::Top),
            "owl:Nothing" => Ok(ClassExpression::Bottom),
            "ObjectIntersectionOf" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let members = self.expression_list(pos, "ObjectIntersectionOf", depth)?;
                Ok(ClassExpression::And(members))
            }
            "ObjectUnionOf" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let members = self.expression_list(pos, "ObjectUnionOf", depth)?;
                Ok(ClassExpression::Or(members))
            }
            "ObjectComplementOf" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let inner = self.class_expression(depth + 1)?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(ClassExpression::Not(Box::new(inner)))
            }
            "ObjectSomeValuesFrom" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let r = self.role()?;
                let filler = self.class_expression(depth + 1)?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(ClassExpression::Exists(r, Box::new(filler)))
            }
            "ObjectAllValuesFrom" => {
                self.expect(TokenKind::LParen, "`(`")?;
                let r = self.role()?;
                let filler = self.class_expression(depth + 1)?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(ClassExpression::Forall(r, Box::new(filler)))
            }
            _ => {
                if self.config.allow_variables && word.starts_with('?') && word.len() > 1 {
                    return Ok(ClassExpression::Named(ClassId::new(word)));
                }
                match word.split_once(':') {
                    Some((prefix, local))
                        if !local.is_empty() && prefix != "_" && prefix != "owl" =>
                    {
                        Ok(ClassExpression::Named(ClassId::new(word)))
                    }
                    // Bare words in expression position are construct names
                    // we do not know about.
                    None => Err(ParseError::UnknownConstruct { pos, name: word.to_owned() }),
                    _ => Err(ParseError::Syntax {
                        pos,
                        message: format!("expected a class expression, found `{word}`"),
                    }),
                }
            }
        }
    }
}
