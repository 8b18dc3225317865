//! Recursive-descent parser for the integrand grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := base ('^' ['-'] integer)?
//! base   := number ['i'] | 'i' | 'z' | 'x' | func '(' expr ')' | '(' expr ')'
//! func   := exp | sin | cos | log | sqrt
//! ```
//!
//! A number immediately followed by `i` is an imaginary literal (`2i`).

use std::fmt;

use num_complex::Complex64;

use super::ExprError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Log,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub(crate) fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Func::Exp => z.exp(),
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
            Func::Log => z.ln(),
            Func::Sqrt => z.sqrt(),
        }
    }
}

/// Expression tree over a single complex variable.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Complex64),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

impl Node {
    pub(crate) fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Node::Const(c) => *c,
            Node::Var => z,
            Node::Neg(a) => -a.eval(z),
            Node::Add(a, b) => a.eval(z) + b.eval(z),
            Node::Sub(a, b) => a.eval(z) - b.eval(z),
            Node::Mul(a, b) => a.eval(z) * b.eval(z),
            Node::Div(a, b) => a.eval(z) / b.eval(z),
            Node::Pow(a, k) => a.eval(z).powi(*k),
            Node::Call(func, a) => func.apply(a.eval(z)),
        }
    }

    /// True when every literal in the tree is real.
    pub(crate) fn has_real_literals(&self) -> bool {
        match self {
            Node::Const(c) => c.im == 0.0,
            Node::Var => true,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.has_real_literals(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.has_real_literals() && b.has_real_literals()
            }
        }
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    if x < 0.0 || (x == 0.0 && x.is_sign_negative()) {
        write!(f, "(-{:?})", -x)
    } else {
        write!(f, "{:?}", x)
    }
}

/// Canonical, fully parenthesised form; parsing it reproduces the tree's values.
impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) if c.im == 0.0 => write_real(f, c.re),
            Node::Const(c) => {
                write!(f, "(")?;
                write_real(f, c.re)?;
                if c.im < 0.0 {
                    write!(f, "-{:?}i)", -c.im)
                } else {
                    write!(f, "+{:?}i)", c.im)
                }
            }
            Node::Var => write!(f, "z"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Div(a, b) => write!(f, "({a} / {b})"),
            Node::Pow(a, k) => write!(f, "({a})^{k}"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

pub(crate) fn parse(text: &str) -> Result<Node, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let node = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(node)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.base()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let negative = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("integer exponent expected"));
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'.' | b'e' | b'E') {
            return Err(self.error("exponent must be an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let k: i32 = digits
            .parse()
            .map_err(|_| ExprError::Syntax { offset: start, message: "exponent out of range".into() })?;
        Ok(Node::Pow(Box::new(base), if negative { -k } else { k }))
    }

    fn base(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(ch) if ch.is_ascii_digit() || ch == b'.' => self.number(),
            Some(ch) if ch.is_ascii_alphabetic() => self.identifier(),
            Some(ch) => Err(self.error(format!("unexpected '{}'", ch as char))),
        }
    }

    fn number(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            return Err(ExprError::Syntax { offset: start, message: "malformed number".into() });
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // not an exponent after all
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii number");
        let value: f64 = text
            .parse()
            .map_err(|_| ExprError::Syntax { offset: start, message: format!("malformed number '{text}'") })?;
        if !value.is_finite() {
            return Err(ExprError::Syntax { offset: start, message: format!("number '{text}' overflows") });
        }
        let imaginary = self.src.get(self.pos) == Some(&b'i')
            && !self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_alphanumeric());
        if imaginary {
            self.pos += 1;
            Ok(Node::Const(Complex64::new(0.0, value)))
        } else {
            Ok(Node::Const(Complex64::new(value, 0.0)))
        }
    }

    fn identifier(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        match name {
            "i" => return Ok(Node::Const(Complex64::new(0.0, 1.0))),
            "z" | "x" => return Ok(Node::Var),
            _ => {}
        }
        let Some(func) = Func::from_name(name) else {
            return Err(ExprError::UnknownIdentifier { name: name.to_string(), offset: start });
        };
        if !self.eat(b'(') {
            return Err(self.error(format!("expected '(' after {name}")));
        }
        let arg = self.expr()?;
        if !self.eat(b')') {
            return Err(self.error("expected ')'"));
        }
        Ok(Node::Call(func, Box::new(arg)))
    }
}
