//! Noncommutative expressions over the Kronecker generators.
//!
//! Grammar (products are left-associative and keep the written order):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | atom
//! atom   := 'x:' int | 's:' nat | 'f:' nat | 'y1' | 'y2' | 't'
//!         | 'X(' int ',' int ',' int ',' int ')'
//!         | 'q^{' int '/2}' | 'q^{' int '}' | 'q^' int | 'q'
//!         | nat | '(' expr ')'
//! ```
//!
//! `t` is `X^{(0,0,1,1)}`; `X(a,b,c,d)` is the torus monomial with
//! coefficient 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// The cluster variable `x_m`.
    Cluster(i64),
    ChebS(usize),
    ChebF(usize),
    /// `X^e` with coefficient 1.
    Monomial([i64; 4]),
    /// The scalar `v^k = q^{k/2}`.
    VPow(i64),
    Int(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

pub fn x(m: i64) -> Expr {
    Expr::Cluster(m)
}

pub fn s(n: usize) -> Expr {
    Expr::ChebS(n)
}

pub fn f(n: usize) -> Expr {
    Expr::ChebF(n)
}

pub fn mono(e: [i64; 4]) -> Expr {
    Expr::Monomial(e)
}

/// `q^{k/2}`.
pub fn qh(k: i64) -> Expr {
    Expr::VPow(k)
}

pub fn y1() -> Expr {
    mono([0, 0, 1, 0])
}

pub fn y2() -> Expr {
    mono([0, 0, 0, 1])
}

/// `t = X^{(0,0,1,1)}`.
pub fn t() -> Expr {
    mono([0, 0, 1, 1])
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl Expr {
    /// Largest `|m|` among cluster atoms and largest Chebyshev index.
    pub fn max_indices(&self) -> (i64, i64, usize) {
        let (mut lo, mut hi, mut n) = (1, 2, 0);
        self.visit(&mut |e| match e {
            Expr::Cluster(m) => {
                lo = lo.min(*m);
                hi = hi.max(*m);
            }
            Expr::ChebS(k) | Expr::ChebF(k) => n = n.max(*k),
            _ => {}
        });
        (lo, hi, n)
    }

    fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Neg(a) => a.visit(f),
            _ => {}
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Neg(..) => 2,
            Expr::Mul(..) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |fm: &mut fmt::Formatter<'_>, e: &Expr, min: u8| {
            if e.precedence() < min {
                write!(fm, "({e})")
            } else {
                write!(fm, "{e}")
            }
        };
        match self {
            Expr::Cluster(m) => write!(fm, "x:{m}"),
            Expr::ChebS(n) => write!(fm, "s:{n}"),
            Expr::ChebF(n) => write!(fm, "f:{n}"),
            Expr::Monomial([0, 0, 1, 0]) => write!(fm, "y1"),
            Expr::Monomial([0, 0, 0, 1]) => write!(fm, "y2"),
            Expr::Monomial([0, 0, 1, 1]) => write!(fm, "t"),
            Expr::Monomial([a, b, c, d]) => write!(fm, "X({a},{b},{c},{d})"),
            Expr::VPow(k) => write!(fm, "q^{{{k}/2}}"),
            Expr::Int(c) if *c < 0 => write!(fm, "({c})"),
            Expr::Int(c) => write!(fm, "{c}"),
            Expr::Add(a, b) => {
                wrap(fm, a, 1)?;
                write!(fm, " + ")?;
                wrap(fm, b, 2)
            }
            Expr::Sub(a, b) => {
                wrap(fm, a, 1)?;
                write!(fm, " - ")?;
                wrap(fm, b, 2)
            }
            Expr::Neg(a) => {
                write!(fm, "-")?;
                wrap(fm, a, 3)
            }
            Expr::Mul(a, b) => {
                wrap(fm, a, 3)?;
                write!(fm, " * ")?;
                wrap(fm, b, 4)
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Expr, ParseError> {
        parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{lit}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                acc = acc + self.term()?;
            } else if self.eat("-") {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        while self.eat("*") {
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat("-") {
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse().map_err(|_| ParseError { pos: start, msg: "expected an integer".into() })
    }

    fn nat(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let k = self.int()?;
        usize::try_from(k).map_err(|_| ParseError { pos: start, msg: "expected a nonnegative index".into() })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.int()?)),
            _ => {
                if self.eat("x:") {
                    Ok(Expr::Cluster(self.int()?))
                } else if self.eat("s:") {
                    Ok(Expr::ChebS(self.nat()?))
                } else if self.eat("f:") {
                    Ok(Expr::ChebF(self.nat()?))
                } else if self.eat("y1") {
                    Ok(y1())
                } else if self.eat("y2") {
                    Ok(y2())
                } else if self.eat("X(") {
                    let mut e = [0i64; 4];
                    for (i, slot) in e.iter_mut().enumerate() {
                        if i > 0 {
                            self.expect(",")?;
                        }
                        *slot = self.int()?;
                    }
                    self.expect(")")?;
                    Ok(Expr::Monomial(e))
                } else if self.eat("q^{") {
                    let k = self.int()?;
                    if self.eat("/2") {
                        self.expect("}")?;
                        Ok(Expr::VPow(k))
                    } else {
                        self.expect("}")?;
                        Ok(Expr::VPow(2 * k))
                    }
                } else if self.eat("q^") {
                    Ok(Expr::VPow(2 * self.int()?))
                } else if self.eat("q") {
                    Ok(Expr::VPow(2))
                } else if self.eat("t") {
                    Ok(t())
                } else {
                    Err(self.err("unknown token"))
                }
            }
        }
    }
}
