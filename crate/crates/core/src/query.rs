//! Self-join-free conjunctive queries: the schema-level model, a text parser
//! and the canonical printer.
//!
//! Grammar (whitespace-insensitive, trailing period optional):
//!
//! ```text
//! query := IDENT [ "(" [ IDENT { "," IDENT } ] ")" ] ":-" atom { "," atom } [ "." ]
//! atom  := IDENT "(" IDENT { "," IDENT } ")"
//! ```
//!
//! Attribute identity is by name, so a name shared by two atoms is a join
//! attribute.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Attribute names are plain identifiers, compared case-sensitively.
pub type Attribute = String;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationSchema {
    pub name: String,
    pub attrs: Vec<Attribute>,
}

impl RelationSchema {
    pub fn new<S: Into<String>>(name: impl Into<String>, attrs: impl IntoIterator<Item = S>) -> Self {
        RelationSchema {
            name: name.into(),
            attrs: attrs.into_iter().map(Into::into).collect(),
        }
    }

    pub fn contains(&self, attr: &str) -> bool {
        self.attrs.iter().any(|a| a == attr)
    }

    pub fn attr_set(&self) -> BTreeSet<&str> {
        self.attrs.iter().map(String::as_str).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Query {
    name: String,
    head: Vec<Attribute>,
    relations: Vec<RelationSchema>,
}

impl Query {
    /// Builds a query named `Q`, checking the well-formedness invariants.
    pub fn new(head: Vec<Attribute>, relations: Vec<RelationSchema>) -> Result<Self> {
        Self::with_name("Q", head, relations)
    }

    pub fn with_name(name: impl Into<String>, head: Vec<Attribute>, relations: Vec<RelationSchema>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for rel in &relations {
            if !seen.insert(rel.name.as_str()) {
                return Err(Error::SelfJoin(rel.name.clone()));
            }
            let mut attrs = BTreeSet::new();
            for a in &rel.attrs {
                if !attrs.insert(a.as_str()) {
                    return Err(Error::DuplicateAttributeInAtom {
                        relation: rel.name.clone(),
                        attribute: a.clone(),
                    });
                }
            }
            if rel.attrs.is_empty() {
                return Err(Error::Syntax {
                    position: 0,
                    message: format!("atom `{}` has no attributes", rel.name),
                });
            }
        }
        if relations.is_empty() {
            return Err(Error::Syntax {
                position: 0,
                message: "query body is empty".into(),
            });
        }
        let mut head_seen = BTreeSet::new();
        for a in &head {
            if !head_seen.insert(a.as_str()) {
                return Err(Error::DuplicateAttributeInAtom {
                    relation: "<head>".into(),
                    attribute: a.clone(),
                });
            }
            if !relations.iter().any(|r| r.contains(a)) {
                return Err(Error::UnboundHeadAttribute(a.clone()));
            }
        }
        Ok(Query {
            name: name.into(),
            head,
            relations,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).query()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn head(&self) -> &[Attribute] {
        &self.head
    }

    pub fn relations(&self) -> &[RelationSchema] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&RelationSchema> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn relation_names(&self) -> Vec<&str> {
        self.relations.iter().map(|r| r.name.as_str()).collect()
    }

    pub fn is_head(&self, attr: &str) -> bool {
        self.head.iter().any(|a| a == attr)
    }

    /// `attr(Q)` in first-occurrence order over the body.
    pub fn attrs(&self) -> Vec<Attribute> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for rel in &self.relations {
            for a in &rel.attrs {
                if seen.insert(a.as_str()) {
                    out.push(a.clone());
                }
            }
        }
        out
    }

    /// Non-output attributes in first-occurrence order.
    pub fn non_output_attrs(&self) -> Vec<Attribute> {
        self.attrs().into_iter().filter(|a| !self.is_head(a)).collect()
    }

    /// `head(R) = head(Q) ∩ attr(R)`, in the relation's attribute order.
    pub fn head_of(&self, rel: &RelationSchema) -> Vec<Attribute> {
        rel.attrs.iter().filter(|a| self.is_head(a)).cloned().collect()
    }

    /// Relations whose attributes are all output attributes.
    pub fn is_head_only(&self, rel: &RelationSchema) -> bool {
        rel.attrs.iter().all(|a| self.is_head(a))
    }

    pub fn is_full(&self) -> bool {
        self.attrs().iter().all(|a| self.is_head(a))
    }

    pub fn is_boolean(&self) -> bool {
        self.head.is_empty()
    }

    /// Restriction to the named relations; head attributes not covered by them
    /// are dropped.
    pub fn subquery(&self, relation_names: &[&str]) -> Result<Query> {
        let relations: Vec<RelationSchema> = self
            .relations
            .iter()
            .filter(|r| relation_names.contains(&r.name.as_str()))
            .cloned()
            .collect();
        let head = self
            .head
            .iter()
            .filter(|a| relations.iter().any(|r| r.contains(a)))
            .cloned()
            .collect();
        Query::with_name(self.name.clone(), head, relations)
    }

    /// Same body, different head (every new head attribute must be bound).
    pub fn with_head(&self, head: Vec<Attribute>) -> Result<Query> {
        Query::with_name(self.name.clone(), head, self.relations.clone())
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) :- ", self.name, self.head.join(", "))?;
        for (i, rel) in self.relations.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}({})", rel.name, rel.attrs.join(", "))?;
        }
        f.write_str(".")
    }
}

impl FromStr for Query {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Query::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Turnstile,
    Period,
    End,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn error<T>(&self, position: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Returns the next token and the byte offset it starts at.
    fn next(&mut self) -> Result<(Token, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok((Token::End, start));
        };
        let tok = match c {
            '(' => Token::LParen,
            ')' => Token::RParen,
            ',' => Token::Comma,
            '.' => Token::Period,
            ':' => {
                if rest.starts_with(":-") {
                    self.pos += 2;
                    return Ok((Token::Turnstile, start));
                }
                return self.error(start, "expected `:-`");
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = rest
                    .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .unwrap_or(rest.len());
                self.pos += len;
                return Ok((Token::Ident(rest[..len].to_string()), start));
            }
            other => return self.error(start, format!("unexpected character `{other}`")),
        };
        self.pos += c.len_utf8();
        Ok((tok, start))
    }

    fn peek(&mut self) -> Result<Token> {
        let save = self.pos;
        let (tok, _) = self.next()?;
        self.pos = save;
        Ok(tok)
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        let (tok, at) = self.next()?;
        if tok == want {
            Ok(())
        } else {
            self.error(at, format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize)> {
        match self.next()? {
            (Token::Ident(s), at) => Ok((s, at)),
            (_, at) => self.error(at, format!("expected {what}")),
        }
    }

    /// Comma-separated identifiers up to and including `)`.
    fn ident_list(&mut self, allow_empty: bool) -> Result<Vec<String>> {
        let mut out = Vec::new();
        if self.peek()? == Token::RParen {
            let (_, at) = self.next()?;
            if !allow_empty {
                return self.error(at, "atom needs at least one attribute");
            }
            return Ok(out);
        }
        loop {
            out.push(self.ident("an attribute name")?.0);
            match self.next()? {
                (Token::Comma, _) => continue,
                (Token::RParen, _) => return Ok(out),
                (_, at) => return self.error(at, "expected `,` or `)`"),
            }
        }
    }

    fn query(mut self) -> Result<Query> {
        let (name, _) = self.ident("a head name")?;
        let head = if self.peek()? == Token::LParen {
            self.next()?;
            self.ident_list(true)?
        } else {
            Vec::new()
        };
        self.expect(Token::Turnstile, "`:-`")?;
        let mut relations = Vec::new();
        let mut positions = Vec::new();
        loop {
            let (rel, at) = self.ident("a relation name")?;
            self.expect(Token::LParen, "`(`")?;
            let attrs = self.ident_list(false)?;
            positions.push(at);
            relations.push(RelationSchema::new(rel, attrs));
            match self.next()? {
                (Token::Comma, _) => continue,
                (Token::Period, _) => {
                    let (tok, at) = self.next()?;
                    if tok != Token::End {
                        return self.error(at, "unexpected input after `.`");
                    }
                    break;
                }
                (Token::End, _) => break,
                (_, at) => return self.error(at, "expected `,`, `.` or end of input"),
            }
        }
        Query::with_name(name, head, relations)
    }
}
