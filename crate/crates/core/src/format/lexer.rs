use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Tok {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Tok {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, message)
    }
}

/// Whitespace-separated words with 1-based positions; `#` starts a comment
/// and braces are always words of their own.
pub(crate) fn tokenize(text: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut start: Option<usize> = None;
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let flush = |start: &mut Option<usize>, end: usize, out: &mut Vec<Tok>| {
            if let Some(s) = start.take() {
                out.push(Tok {
                    text: line[s..end].to_string(),
                    line: i + 1,
                    column: line[..s].chars().count() + 1,
                });
            }
        };
        for &(at, ch) in &chars {
            if ch.is_whitespace() {
                flush(&mut start, at, &mut out);
            } else if ch == '{' || ch == '}' {
                flush(&mut start, at, &mut out);
                out.push(Tok {
                    text: ch.to_string(),
                    line: i + 1,
                    column: line[..at].chars().count() + 1,
                });
            } else if start.is_none() {
                start = Some(at);
            }
        }
        flush(&mut start, line.len(), &mut out);
    }
    out
}

/// A cursor over tokens that groups them by statement keyword.
pub(crate) struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
    eof_line: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Self {
        Cursor {
            toks: tokenize(text),
            pos: 0,
            eof_line: text.lines().count().max(1),
        }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    /// The next token, or an error naming what was expected.
    pub fn expect(&mut self, what: &str) -> Result<Tok, ParseError> {
        self.next()
            .ok_or_else(|| ParseError::new(self.eof_line, 1, format!("expected {what}, found end of file")))
    }

    pub fn keyword(&mut self, word: &str) -> Result<Tok, ParseError> {
        let t = self.expect(&format!("`{word}`"))?;
        if t.text != word {
            return Err(t.error(format!("expected `{word}`, found `{}`", t.text)));
        }
        Ok(t)
    }

    /// Whether the next token sits on the same line as `t`.
    pub fn same_line(&self, t: &Tok) -> bool {
        self.peek().is_some_and(|n| n.line == t.line)
    }
}

pub(crate) fn parse_int<T: std::str::FromStr>(t: &Tok, what: &str) -> Result<T, ParseError> {
    t.text
        .parse()
        .map_err(|_| t.error(format!("`{}` is not a valid {what}", t.text)))
}
