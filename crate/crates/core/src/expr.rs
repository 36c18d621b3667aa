//! A small arithmetic-expression language for user-supplied integrands.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr   := term  (('+' | '-') term)*          left-associative
//! term   := unary (('*' | '/') unary)*         left-associative
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?                  right-associative
//! atom   := number | 'x' | 'pi' | 'e'
//!         | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp | sqrt | atan | abs | log
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`, and
//! `2^3^2` is `2^(3^2) = 512`. `log` is the natural logarithm.
//! Whitespace is insignificant. Parse failures carry the byte offset of
//! the offending input.

use std::fmt;

/// Functions callable from an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Atan,
    Abs,
    Log,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "atan" => Func::Atan,
            "abs" => Func::Abs,
            "log" => Func::Log,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Atan => "atan",
            Func::Abs => "abs",
            Func::Log => "log",
        }
    }
}

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Abstract syntax tree of a parsed expression in the single variable
/// `x`. The named constants `pi` and `e` are folded into literals at
/// parse time.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call {
        func: Func,
        arg: Box<Expr>,
    },
}

/// Syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Domain error raised during evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    SqrtOfNegative(f64),
    LogOfNonPositive(f64),
    DivisionByZero,
    PowOutOfDomain { base: f64, exponent: f64 },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::SqrtOfNegative(v) => write!(f, "sqrt of negative value {v}"),
            EvalError::LogOfNonPositive(v) => write!(f, "log of non-positive value {v}"),
            EvalError::DivisionByZero => write!(f, "division by zero"),
            EvalError::PowOutOfDomain { base, exponent } => {
                write!(f, "{base} ^ {exponent} is out of the real domain")
            }
        }
    }
}

impl std::error::Error for EvalError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn err(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        offset,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token { tok: Tok::Plus, offset: start });
                i += 1;
            }
            '-' => {
                out.push(Token { tok: Tok::Minus, offset: start });
                i += 1;
            }
            '*' => {
                out.push(Token { tok: Tok::Star, offset: start });
                i += 1;
            }
            '/' => {
                out.push(Token { tok: Tok::Slash, offset: start });
                i += 1;
            }
            '^' => {
                out.push(Token { tok: Tok::Caret, offset: start });
                i += 1;
            }
            '(' => {
                out.push(Token { tok: Tok::LParen, offset: start });
                i += 1;
            }
            ')' => {
                out.push(Token { tok: Tok::RParen, offset: start });
                i += 1;
            }
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // Optional exponent part.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| err(start, format!("malformed number `{text}`")))?;
                out.push(Token { tok: Tok::Num(value), offset: start });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(src[start..i].to_string()),
                    offset: start,
                });
            }
            other => return Err(err(start, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token { tok: Tok::Eof, offset: src.len() });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self, open_offset: usize) -> Result<(), ParseError> {
        match self.peek().tok {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            _ => Err(err(
                self.peek().offset,
                format!("expected `)` to close `(` at byte {open_offset}"),
            )),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            // Right-associative: 2^3^2 parses as 2^(3^2). The exponent
            // may carry a unary minus.
            let exponent = self.unary()?;
            return Ok(Expr::Bin {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exponent),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let token = self.bump();
        match token.tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::Var),
                "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                "e" => Ok(Expr::Num(std::f64::consts::E)),
                _ => {
                    if let Some(func) = Func::from_name(&name) {
                        match self.peek().tok {
                            Tok::LParen => {
                                let open = self.bump().offset;
                                let arg = self.expr()?;
                                self.expect_rparen(open)?;
                                Ok(Expr::Call {
                                    func,
                                    arg: Box::new(arg),
                                })
                            }
                            _ => Err(err(
                                self.peek().offset,
                                format!("expected `(` after function `{name}`"),
                            )),
                        }
                    } else {
                        Err(err(token.offset, format!("unknown identifier `{name}`")))
                    }
                }
            },
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen(token.offset)?;
                Ok(inner)
            }
            Tok::Eof => Err(err(token.offset, "unexpected end of input")),
            other => Err(err(
                token.offset,
                format!("expected a value, found `{other:?}`"),
            )),
        }
    }
}

/// Parses an expression in the variable `x`.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    if src.trim().is_empty() {
        return Err(err(0, "empty expression"));
    }
    let tokens = lex(src)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    match parser.peek().tok {
        Tok::Eof => Ok(expr),
        _ => Err(err(
            parser.peek().offset,
            "unexpected trailing input".to_string(),
        )),
    }
}

impl Expr {
    /// Evaluates the expression at `x`. Domain violations (square root
    /// of a negative, log of a non-positive, division by zero, real
    /// power outside its domain) surface as typed errors, never as
    /// silent NaNs.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Var => Ok(x),
            Expr::Neg(inner) => Ok(-inner.eval(x)?),
            Expr::Bin { op, lhs, rhs } => {
                let a = lhs.eval(x)?;
                let b = rhs.eval(x)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b == 0.0 {
                            Err(EvalError::DivisionByZero)
                        } else {
                            Ok(a / b)
                        }
                    }
                    BinOp::Pow => {
                        let r = a.powf(b);
                        if r.is_nan() && !a.is_nan() && !b.is_nan() {
                            Err(EvalError::PowOutOfDomain {
                                base: a,
                                exponent: b,
                            })
                        } else {
                            Ok(r)
                        }
                    }
                }
            }
            Expr::Call { func, arg } => {
                let v = arg.eval(x)?;
                match func {
                    Func::Sin => Ok(v.sin()),
                    Func::Cos => Ok(v.cos()),
                    Func::Exp => Ok(v.exp()),
                    Func::Sqrt => {
                        if v < 0.0 {
                            Err(EvalError::SqrtOfNegative(v))
                        } else {
                            Ok(v.sqrt())
                        }
                    }
                    Func::Atan => Ok(v.atan()),
                    Func::Abs => Ok(v.abs()),
                    Func::Log => {
                        if v <= 0.0 {
                            Err(EvalError::LogOfNonPositive(v))
                        } else {
                            Ok(v.ln())
                        }
                    }
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; reparsing it reproduces the tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => write!(f, "x"),
            Expr::Neg(inner) => write!(f, "(-{inner})"),
            Expr::Bin { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Call { func, arg } => write!(f, "{}({arg})", func.name()),
        }
    }
}
