//! Small line/token reader shared by the text formats. Every error carries a
//! 1-based line and column.

use std::str::FromStr;

use crate::error::ParseError;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl<'a> Token<'a> {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, message)
    }

    pub fn parse<T: FromStr>(&self, what: &str) -> Result<T, ParseError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected {what}, found {:?}", self.text)))
    }

    pub fn expect(&self, literal: &str) -> Result<(), ParseError> {
        if self.text == literal {
            Ok(())
        } else {
            Err(self.error(format!("expected {literal:?}, found {:?}", self.text)))
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Line<'a> {
    pub text: &'a str,
    pub number: usize,
}

impl<'a> Line<'a> {
    pub fn tokens(&self) -> Vec<Token<'a>> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in self.text.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(self.token(s, i));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push(self.token(s, self.text.len()));
        }
        out
    }

    fn token(&self, start: usize, end: usize) -> Token<'a> {
        Token {
            text: &self.text[start..end],
            line: self.number,
            column: self.text[..start].chars().count() + 1,
        }
    }

    pub fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.number, column, message)
    }

    pub fn is_blank(&self) -> bool {
        self.text.trim().is_empty()
    }
}

/// Sequential access to the lines of a document. Blank lines are kept because
/// some formats use them (an empty wiring is an empty line).
pub(crate) struct Lines<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Lines<'a> {
    pub fn new(input: &'a str) -> Self {
        let mut lines: Vec<Line<'a>> = input
            .split('\n')
            .enumerate()
            .map(|(i, text)| Line {
                text: text.strip_suffix('\r').unwrap_or(text),
                number: i + 1,
            })
            .collect();
        // A trailing newline does not start a new line.
        if lines.last().is_some_and(|l| l.text.is_empty()) {
            lines.pop();
        }
        Lines { lines, pos: 0 }
    }

    /// Drops `#` comment lines; only for formats that allow them.
    pub fn without_comments(mut self) -> Self {
        self.lines.retain(|l| !l.text.trim_start().starts_with('#'));
        self
    }

    pub fn next_line(&mut self, what: &str) -> Result<Line<'a>, ParseError> {
        match self.lines.get(self.pos) {
            Some(line) => {
                self.pos += 1;
                Ok(*line)
            }
            None => Err(ParseError::new(
                self.end_line(),
                1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }

    pub fn peek(&self) -> Option<Line<'a>> {
        self.lines.get(self.pos).copied()
    }

    pub fn skip_blank(&mut self) {
        while self.peek().is_some_and(|l| l.is_blank()) {
            self.pos += 1;
        }
    }

    /// Fails if anything but blank lines remains.
    pub fn finish(mut self) -> Result<(), ParseError> {
        self.skip_blank();
        match self.peek() {
            Some(line) => Err(line.error(1, "unexpected trailing content")),
            None => Ok(()),
        }
    }

    fn end_line(&self) -> usize {
        self.lines.last().map_or(1, |l| l.number + 1)
    }
}

/// Parses a header line `<magic> 1 <fields...>` and returns the numeric fields.
pub(crate) fn parse_header(
    lines: &mut Lines<'_>,
    magic: &str,
    fields: &[&str],
) -> Result<Vec<u64>, ParseError> {
    lines.skip_blank();
    let line = lines.next_line(&format!("{magic} header"))?;
    let tokens = line.tokens();
    if tokens.is_empty() {
        return Err(line.error(1, format!("expected {magic} header")));
    }
    tokens[0].expect(magic)?;
    let version = tokens
        .get(1)
        .ok_or_else(|| line.error(line.text.len() + 1, "missing format version"))?;
    version.expect("1")?;
    let mut out = Vec::with_capacity(fields.len());
    for (i, name) in fields.iter().enumerate() {
        let tok = tokens
            .get(i + 2)
            .ok_or_else(|| line.error(line.text.len() + 1, format!("missing {name}")))?;
        out.push(tok.parse::<u64>(name)?);
    }
    if let Some(extra) = tokens.get(fields.len() + 2) {
        return Err(extra.error("unexpected token in header"));
    }
    Ok(out)
}

/// Parses a string of `0`/`1` characters.
pub(crate) fn parse_bits(tok: &Token<'_>, expected_len: usize) -> Result<Vec<bool>, ParseError> {
    let mut bits = Vec::with_capacity(expected_len);
    for (i, ch) in tok.text.chars().enumerate() {
        match ch {
            '0' => bits.push(false),
            '1' => bits.push(true),
            other => {
                return Err(ParseError::new(
                    tok.line,
                    tok.column + i,
                    format!("expected 0 or 1, found {other:?}"),
                ))
            }
        }
    }
    if bits.len() != expected_len {
        return Err(tok.error(format!(
            "expected {expected_len} bits, found {}",
            bits.len()
        )));
    }
    Ok(bits)
}
