//! Single-expression query language: `name(arg, ...)`.

mod eval;
mod parse;

pub use eval::{evaluate, EvalContext, EvalError, MuDetails, RegintDetails, ResultDocument};
pub use parse::{parse, ParseError, ParseErrorCode, MAX_QUERY_CHARS};

use std::fmt;

use crate::exact::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Mu,
    Zeta,
    Gamma,
    Bernoulli,
    Binomial,
    Lambda,
    Delta,
    Regint,
    Musum,
}

/// What a function accepts in each argument slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgKind {
    Number,
    Name,
}

impl Function {
    pub const ALL: [Function; 9] = [
        Function::Mu,
        Function::Zeta,
        Function::Gamma,
        Function::Bernoulli,
        Function::Binomial,
        Function::Lambda,
        Function::Delta,
        Function::Regint,
        Function::Musum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Mu => "mu",
            Function::Zeta => "zeta",
            Function::Gamma => "gamma",
            Function::Bernoulli => "bernoulli",
            Function::Binomial => "binomial",
            Function::Lambda => "lambda",
            Function::Delta => "delta",
            Function::Regint => "regint",
            Function::Musum => "musum",
        }
    }

    pub fn from_name(name: &str) -> Option<Function> {
        Function::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn signature(self) -> &'static [ArgKind] {
        use ArgKind::*;
        match self {
            Function::Mu
            | Function::Zeta
            | Function::Gamma
            | Function::Bernoulli
            | Function::Lambda
            | Function::Musum => &[Number],
            Function::Binomial | Function::Delta => &[Number, Number],
            Function::Regint => &[Name, Number],
        }
    }

    pub fn arity(self) -> usize {
        self.signature().len()
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    /// Decimal literal held exactly; `3` and `3.0` are the same value.
    Number(Rational),
    Name(String),
}

impl Arg {
    pub fn kind(&self) -> ArgKind {
        match self {
            Arg::Number(_) => ArgKind::Number,
            Arg::Name(_) => ArgKind::Name,
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Number(q) => match q.to_terminating_decimal() {
                Some(text) => f.write_str(&text),
                // not produced by the parser; printed as a quotient for debugging
                None => write!(f, "{q}"),
            },
            Arg::Name(n) => f.write_str(n),
        }
    }
}

/// A parsed call. Arity and argument kinds are checked by the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryAst {
    pub function: Function,
    pub args: Vec<Arg>,
}

impl fmt::Display for QueryAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.function)?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{arg}")?;
        }
        f.write_str(")")
    }
}
