//! A small s-expression reader and writer shared by every file format.
//!
//! Atoms are runs of non-delimiter characters; strings are double-quoted with
//! `\"` and `\\` escapes; `;` starts a comment that runs to the end of line.

use std::fmt;

use thiserror::Error;

/// Line/column position in the source text, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SexpKind {
    Atom(String),
    Str(String),
    List(Vec<Sexp>),
}

/// A parsed s-expression together with the position it started at.
#[derive(Clone, Debug)]
pub struct Sexp {
    pub kind: SexpKind,
    pub pos: Pos,
}

// Positions are metadata; two expressions are equal when their contents are.
impl PartialEq for Sexp {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Sexp {}

impl Sexp {
    pub fn atom(s: impl Into<String>) -> Sexp {
        Sexp {
            kind: SexpKind::Atom(s.into()),
            pos: Pos::default(),
        }
    }

    pub fn string(s: impl Into<String>) -> Sexp {
        Sexp {
            kind: SexpKind::Str(s.into()),
            pos: Pos::default(),
        }
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp {
            kind: SexpKind::List(items),
            pos: Pos::default(),
        }
    }

    /// `(head items...)`
    pub fn tagged(head: &str, items: impl IntoIterator<Item = Sexp>) -> Sexp {
        let mut v = vec![Sexp::atom(head)];
        v.extend(items);
        Sexp::list(v)
    }

    pub fn as_atom(&self) -> Option<&str> {
        match &self.kind {
            SexpKind::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match &self.kind {
            SexpKind::List(items) => Some(items),
            _ => None,
        }
    }

    /// For a list whose first element is an atom, returns that atom and the rest.
    pub fn as_tagged(&self) -> Option<(&str, &[Sexp])> {
        let items = self.as_list()?;
        let (head, rest) = items.split_first()?;
        Some((head.as_atom()?, rest))
    }

    pub fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, message)
    }

    /// Expects `(tag ...)` and returns the arguments.
    pub fn expect_tagged(&self, tag: &str) -> Result<&[Sexp], ParseError> {
        match self.as_tagged() {
            Some((h, rest)) if h == tag => Ok(rest),
            _ => Err(self.err(format!("expected ({tag} ...), found {self}"))),
        }
    }

    pub fn expect_atom(&self) -> Result<&str, ParseError> {
        self.as_atom()
            .ok_or_else(|| self.err(format!("expected an atom, found {self}")))
    }

    /// Renders with line breaks: a list that does not fit in `width` columns
    /// puts each child after the first on its own line.
    pub fn pretty(&self, width: usize) -> String {
        let mut out = String::new();
        self.pretty_into(&mut out, 0, width);
        out
    }

    fn pretty_into(&self, out: &mut String, indent: usize, width: usize) {
        let flat = self.to_string();
        let items = match &self.kind {
            SexpKind::List(items) if indent + flat.len() > width && items.len() > 1 => items,
            _ => {
                out.push_str(&flat);
                return;
            }
        };
        out.push('(');
        // Keep a leading atom run (tags and keyword arguments) on the first line.
        let mut i = 0;
        while i < items.len() && items[i].as_atom().is_some() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&items[i].to_string());
            i += 1;
        }
        if i == 0 {
            items[0].pretty_into(out, indent + 1, width);
            i = 1;
        }
        for item in &items[i..] {
            out.push('\n');
            out.push_str(&" ".repeat(indent + 2));
            item.pretty_into(out, indent + 2, width);
        }
        out.push(')');
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SexpKind::Atom(a) => f.write_str(a),
            SexpKind::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
            SexpKind::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader {
            chars: text.chars().peekable(),
            pos: Pos { line: 1, col: 1 },
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_trivia();
        self.chars.peek().is_none()
    }

    fn read(&mut self) -> Result<Sexp, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        match self.chars.peek().copied() {
            None => Err(ParseError::new(start, "unexpected end of input")),
            Some(')') => Err(ParseError::new(start, "unexpected ')'")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => {
                            return Err(ParseError::new(
                                self.pos,
                                "unexpected end of input: unclosed '('",
                            ))
                        }
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
                Ok(Sexp {
                    kind: SexpKind::List(items),
                    pos: start,
                })
            }
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => {
                            return Err(ParseError::new(self.pos, "unterminated string literal"))
                        }
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return Err(ParseError::new(self.pos, "bad string escape")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Ok(Sexp {
                    kind: SexpKind::Str(s),
                    pos: start,
                })
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp {
                    kind: SexpKind::Atom(s),
                    pos: start,
                })
            }
        }
    }
}

/// Parses exactly one s-expression; trailing non-comment text is an error.
pub fn parse_one(text: &str) -> Result<Sexp, ParseError> {
    let mut r = Reader::new(text);
    let e = r.read()?;
    if !r.at_end() {
        return Err(ParseError::new(r.pos, "trailing input after expression"));
    }
    Ok(e)
}

/// Parses a whitespace-separated sequence of s-expressions.
pub fn parse_many(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut r = Reader::new(text);
    let mut out = Vec::new();
    while !r.at_end() {
        out.push(r.read()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_and_strings() {
        let e = parse_one("(a (b \"c \\\" d\") ; comment\n e)").unwrap();
        assert_eq!(e.to_string(), "(a (b \"c \\\" d\") e)");
        assert_eq!(parse_one(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn unclosed_list_reports_end_of_input() {
        let err = parse_one("(ex y").unwrap_err();
        assert!(err.message.contains("end of input"), "{err}");
        assert_eq!(err.pos, Pos { line: 1, col: 6 });
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        assert!(parse_one("(a) b").is_err());
        assert!(parse_one(")").is_err());
        assert_eq!(parse_many("a (b) ; x\n c").unwrap().len(), 3);
    }

    #[test]
    fn pretty_round_trips() {
        let e = parse_one("(node :id n0 (seq (eq 0 0)) (rule ref 0) (node :id n1 (seq (eq 0 0) (neq 0 0)) (axiom)))").unwrap();
        let p = e.pretty(30);
        assert!(p.contains('\n'));
        assert_eq!(parse_one(&p).unwrap(), e);
    }
}
