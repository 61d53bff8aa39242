//! Recursive-descent parser for
//!
//! ```text
//! query  := name "(" args? ")"
//! args   := arg ("," arg)*
//! arg    := number | name
//! number := ["-"] digits ["." digits]
//! name   := letter (letter | digit | "_")*
//! ```
//!
//! ASCII whitespace may separate tokens.

use std::fmt;

use super::{Arg, ArgKind, Function, QueryAst};
use crate::exact::Rational;

pub const MAX_QUERY_CHARS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorCode {
    InputTooLong,
    UnexpectedEnd,
    UnexpectedToken,
    UnknownFunction,
    WrongArity,
    WrongArgumentKind,
    MalformedNumber,
    TrailingInput,
}

impl ParseErrorCode {
    /// Stable machine-readable identifier.
    pub fn as_str(self) -> &'static str {
        match self {
            ParseErrorCode::InputTooLong => "input_too_long",
            ParseErrorCode::UnexpectedEnd => "unexpected_end",
            ParseErrorCode::UnexpectedToken => "unexpected_token",
            ParseErrorCode::UnknownFunction => "unknown_function",
            ParseErrorCode::WrongArity => "wrong_arity",
            ParseErrorCode::WrongArgumentKind => "wrong_argument_kind",
            ParseErrorCode::MalformedNumber => "malformed_number",
            ParseErrorCode::TrailingInput => "trailing_input",
        }
    }
}

impl fmt::Display for ParseErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error [{code}] at byte {offset}: {message}; expected {expected}")]
pub struct ParseError {
    pub code: ParseErrorCode,
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
    pub expected: String,
}

impl ParseError {
    fn new(
        code: ParseErrorCode,
        offset: usize,
        message: impl Into<String>,
        expected: impl Into<String>,
    ) -> Self {
        ParseError {
            code,
            offset,
            message: message.into(),
            expected: expected.into(),
        }
    }

    /// Caret diagnostic pointing at the error position.
    pub fn render(&self, input: &str) -> String {
        let shown: String = input.chars().take(120).collect();
        let col = input
            .get(..self.offset.min(input.len()))
            .map(|s| s.chars().count())
            .unwrap_or(0);
        format!("{self}\n  {shown}\n  {}^", " ".repeat(col))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn describe(c: char) -> String {
    format!("`{}`", c.escape_default())
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            None => ParseError::new(
                ParseErrorCode::UnexpectedEnd,
                self.pos,
                "unexpected end of input",
                expected,
            ),
            Some(c) => ParseError::new(
                ParseErrorCode::UnexpectedToken,
                self.pos,
                format!("unexpected {}", describe(c)),
                expected,
            ),
        }
    }

    fn expect(&mut self, want: char, expected: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn name(&mut self) -> Option<(usize, &'a str)> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            _ => return None,
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Some((start, &self.src[start..self.pos]))
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        if self.digits() == 0 {
            return Err(ParseError::new(
                ParseErrorCode::MalformedNumber,
                self.pos,
                "malformed number: missing digits",
                "digit",
            ));
        }
        if self.peek() == Some('.') {
            self.pos += 1;
            if self.digits() == 0 {
                return Err(ParseError::new(
                    ParseErrorCode::MalformedNumber,
                    self.pos,
                    "malformed number: missing digits after `.`",
                    "digit",
                ));
            }
        }
        if let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                return Err(ParseError::new(
                    ParseErrorCode::MalformedNumber,
                    self.pos,
                    format!("malformed number: unexpected {}", describe(c)),
                    "`,` or `)`",
                ));
            }
        }
        Ok(Rational::from_decimal_str(&self.src[start..self.pos]).expect("lexed a valid decimal"))
    }

    fn arg(&mut self) -> Result<(usize, Arg), ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                let (_, n) = self.name().expect("starts with a letter");
                Ok((start, Arg::Name(n.to_string())))
            }
            Some(c) if c.is_ascii_digit() || c == '-' => Ok((start, Arg::Number(self.number()?))),
            _ => Err(self.unexpected("number or name")),
        }
    }

    fn query(&mut self) -> Result<QueryAst, ParseError> {
        self.skip_ws();
        let Some((name_at, name)) = self.name() else {
            return Err(self.unexpected("function name"));
        };
        let function = Function::from_name(name).ok_or_else(|| {
            let known: Vec<&str> = Function::ALL.iter().map(|f| f.name()).collect();
            ParseError::new(
                ParseErrorCode::UnknownFunction,
                name_at,
                format!("unknown function `{name}`"),
                format!("one of {}", known.join(", ")),
            )
        })?;
        self.expect('(', "`(`")?;

        let mut args: Vec<(usize, Arg)> = Vec::new();
        self.skip_ws();
        if self.peek() == Some(')') {
            self.pos += 1;
        } else {
            loop {
                args.push(self.arg()?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.unexpected("`,` or `)`")),
                }
            }
        }
        let close_at = self.pos - 1;

        let signature = function.signature();
        if args.len() != signature.len() {
            let offset = args
                .get(signature.len())
                .map(|(at, _)| *at)
                .unwrap_or(close_at);
            return Err(ParseError::new(
                ParseErrorCode::WrongArity,
                offset,
                format!(
                    "`{function}` takes {} argument(s), got {}",
                    signature.len(),
                    args.len()
                ),
                format!("{} argument(s)", signature.len()),
            ));
        }
        for ((at, arg), want) in args.iter().zip(signature) {
            if arg.kind() != *want {
                let want_text = match want {
                    ArgKind::Number => "number",
                    ArgKind::Name => "series name",
                };
                return Err(ParseError::new(
                    ParseErrorCode::WrongArgumentKind,
                    *at,
                    format!("`{function}` expects a {want_text} here"),
                    want_text,
                ));
            }
        }

        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(ParseError::new(
                ParseErrorCode::TrailingInput,
                self.pos,
                "trailing input after expression",
                "end of input",
            ));
        }
        Ok(QueryAst {
            function,
            args: args.into_iter().map(|(_, a)| a).collect(),
        })
    }
}

pub fn parse(input: &str) -> Result<QueryAst, ParseError> {
    if let Some((offset, _)) = input.char_indices().nth(MAX_QUERY_CHARS) {
        return Err(ParseError::new(
            ParseErrorCode::InputTooLong,
            offset,
            format!("expression exceeds {MAX_QUERY_CHARS} characters"),
            "a shorter expression",
        ));
    }
    Parser { src: input, pos: 0 }.query()
}
