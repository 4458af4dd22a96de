//! The 32-case table of RTT computations, transcribed as a regression corpus.
//!
//! Each case fixes a decorated boundary `(sigma, tau, beta, theta, rho, alpha)`
//! up to free charges `k`, `l`, `m`, lists the admissible interior states of
//! both diagrams and the numerator of each state's weight over the common
//! denominator `1 - v X`, `X = (z_i/z_j)^{n_Q}`. The corpus keeps the tables
//! as printed; [`ERRATA`] lists the lines that had to be corrected.
//!
//! Corpus syntax, one item per line:
//!
//! ```text
//! case <id> [k!=0] [k!=l]
//! boundary <sigma> <tau> <beta> <theta> <rho> <alpha>
//! lhs <upper> <lower> <vertical> : <weight>
//! rhs <upper> <lower> <vertical> : <weight>
//! ```
//!
//! A horizontal spin is `-` or `+<charge>`, a vertical spin is `+` or `-`.
//! Charges are integer expressions in `k`, `l`, `m`, `nq` and `d(..)` (1 on
//! multiples of `n_Q`, else 0). Weights are polynomial expressions in `v`,
//! `X`, `zi`, `zj`, Gauss symbols `g(..)` and the comparison
//! `[a > b ? e1 : e2]` on charge representatives in `1..=n_Q`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::rvertex::{check_rtt, RttBoundary, RttInterior, RTT_ROW_I, RTT_ROW_J};
use crate::scalar::Scalar;
use crate::spin::{rep, Spin};

pub const CORPUS: &str = r#"
case 1a
boundary +k+1 +k+1 + +k +k +
lhs +k+1 +k+1 + : (zi*zj)^(-nq*d(k))*(X-v)
rhs +k+1 +k+1 + : (zi*zj)^(-nq*d(k))*(X-v)

case 1b k!=l
boundary +l+1 +k+1 + +k +l +
lhs +k+1 +l+1 + : (1-v)*zi^(-nq*d(l))*zj^(-nq*d(k))*[k+1 > l+1 ? X : 1]
rhs +k +l + : (1-v)*zi^(-nq*d(k))*zj^(-nq*d(l))*[k > l ? X : 1]

case 1c k!=l
boundary +k+1 +l+1 + +k +l +
lhs +k+1 +l+1 + : g(l-k)*zi^(-nq*d(l))*zj^(-nq*d(a))*(1-X)
rhs +k +l + : g(l-k)*zi^(-nq*d(l))*zj^(-nq*d(k))*(1-X)

case 2
boundary +k +l + - - +

case 3a k!=0
boundary +k+1 - + - +k +
lhs - +k+1 + : 1-v
rhs - +k + : 1-v

case 3b
boundary +1 - + - +0 +
lhs - +1 + : (1-v)*zi^(-nq)
rhs +0 - - : (1-v)*zi^(-nq)*(1-X)
rhs - +0 + : (1-v)*zj^(-nq)

case 4a k!=0
boundary +k+1 - + +k - +
lhs +k+1 - + : v*(1-X)
rhs - +k + : v*(1-X)

case 4b
boundary +1 - + +0 - +
lhs +1 - + : v*zj^(-nq)*(1-X)
lhs - +1 - : (1-v)^2*zj^(-nq)
rhs +0 - - : (1-v)^2*zi^(-nq)*X
rhs - +0 + : v*zj^(-nq)*(1-X)

case 5
boundary - +k+1 + - +k +
lhs - +k+1 + : zi^(-nq*d(k))*(1-X)
rhs +k - + : zi^(-nq*d(k))*(1-X)

case 6a k!=0
boundary - +k+1 + +k - +
lhs +k+1 - + : (1-v)*X
rhs +k - + : (1-v)*X

case 6b
boundary - +1 + +0 - +
lhs +1 - + : (1-v)*zj^(-nq)*X
lhs - +1 - : (1-v)*zj^(-nq)*(1-X)
rhs +0 - + : (1-v)*zi^(-nq)*X

case 7
boundary - - + +k +l +

case 8
boundary - - + - - +
lhs - - + : 1-v*X
rhs - - + : 1-v*X

case 9a k!=0
boundary +1 +k+1 - - +k +
lhs +1 +k+1 + : g(k)*(1-X)
rhs +k - - : g(k)*(1-X)

case 9b k!=0
boundary +k+1 +1 - - +k +
lhs +1 +k+1 + : 1-v
rhs - +k + : 1-v

case 9c
boundary +1 +1 - - +0 +
lhs +1 +1 + : zi^(-nq)*(X-v)
rhs +0 - - : -v*zi^(-nq)*(1-X)
rhs - +0 + : (1-v)*zj^(-nq)

case 10a k!=0
boundary +1 +k+1 - +k - +
lhs +k+1 +1 - : g(k)*(1-v)*X
rhs +k - - : g(k)*(1-v)*X

case 10b k!=0
boundary +k+1 +1 - +k - +
lhs +k+1 +1 - : g(-k)*g(k)*(1-X)
rhs - +k + : v*(1-X)

case 10c
boundary +1 +1 - +0 - +
lhs +1 +1 - : -v*zj^(-nq)*(X-v)
rhs +0 - - : -v*(1-v)*zi^(-nq)*X
rhs - +0 + : v*zj^(-nq)*(1-X)

case 11
boundary +k - - +l +m +

case 12
boundary +1 - - - - +
lhs +1 - + : v*(1-X)
lhs - +1 - : 1-v
rhs - - - : 1-v*X

case 13
boundary - +k - +l +m +

case 14
boundary - +1 - - - +
lhs +1 - + : (1-v)*X
lhs - +1 - : 1-X
rhs - - + : 1-v*X

case 15
boundary - - - - +k +

case 16
boundary - - - +k - +

case 17
boundary +k +l + - +m -

case 18
boundary +k +l + +m - -

case 19a k!=0
boundary +k+1 - + +0 +k -
lhs - +k+1 - : g(k)*(1-v)^2*zj^(-nq)
rhs +0 +k - : g(k)*(1-v)^2*zi^(-nq)*X

case 19b k!=0
boundary +k+1 - + +k +0 -
lhs +k+1 - + : v*(1-v)*zi^(-nq)*(1-X)
rhs +0 +k - : g(k)*g(-k)*(1-v)*zi^(-nq)*(1-X)

case 19c
boundary +1 - + +0 +0 -
lhs - +1 - : -v*(1-v)^2*(zi*zj)^(-nq)
lhs +1 - + : v*(1-v)*(zi*zj)^(-nq)*(1-X)
rhs +0 +0 - : -v*(1-v)*(zi*zj)^(-nq)*(X-v)

case 20
boundary +k - + - - -

case 21a k!=0
boundary - +k+1 + +k +0 -
lhs +k+1 - + : (1-v)^2*zi^(-nq)*X
rhs +k +0 + : (1-v)^2*zj^(-nq)

case 21b k!=0
boundary - +k+1 + +0 +k -
lhs - +k+1 - : g(k)*(1-v)*zj^(-nq)*(1-X)
rhs +k +0 + : g(k)*(1-v)*zj^(-nq)*(1-X)

case 21c
boundary - +1 + +0 +0 -
lhs - +1 - : -v*(1-v)*(zi*zj)^(-nq)*(1-X)
lhs +1 - + : (1-v)^2*(zi*zj)^(-nq)*X
rhs +0 +0 + : (1-v)*(zi*zj)^(-nq)*(X-v)

case 22
boundary - +k + - - -

case 23
boundary - - + - +0 -
lhs - - + : (1-v)*zi^(-nq)*(1-v*X)
rhs - +0 + : (1-v)^2*zj^(-nq)
rhs +0 - - : (1-v)*zi^(-nq)*(1-X)

case 24
boundary - - + +0 - -
lhs - - - : (1-v)*zj^(-nq)*(1-v*X)
rhs - +0 + : v*(1-v)*zj^(-nq)*(1-X)
rhs +0 - - : (1-v)^2*zi^(-nq)*X

case 25a
boundary +k+1 +k+1 - +k +k -
lhs +k+1 +k+1 - : g(k)^2*(zi*zj)^(-nq*d(k))*(X-v)
rhs +k +k - : g(k)^2*(zi*zj)^(-nq*d(k))*(X-v)

case 25b k!=l
boundary +k+1 +l+1 - +l +k -
lhs +l+1 +k+1 - : g(k)*g(l)*(1-v)*zi^(-nq*d(k))*zj^(-nq*d(l))*[l+1 > k+1 ? X : 1]
rhs +l +k - : g(k)*g(l)*(1-v)*zj^(-nq*d(k))*zi^(-nq*d(l))*[l > k ? X : 1]

case 25c k!=l
boundary +k+1 +l+1 - +k +l -
lhs +k+1 +l+1 - : g(k)*g(l)*g(l-k)*zj^(-nq*d(k))*zi^(-nq*d(l))*(1-X)
rhs +l +k - : g(k)*g(l)*g(l-k)*zj^(-nq*d(k))*zi^(-nq*d(l))*(1-X)

case 26
boundary +k +l - - - -

case 27a k!=0
boundary +k+1 - - - +k -
lhs - +k+1 - : g(k)*(1-v)
rhs - +k - : g(k)*(1-v)

case 27b
boundary +1 - - - +0 -
lhs - +1 - : -v*(1-v)*zi^(-nq)
lhs +1 - + : v*(1-v)*zi^(-nq)*(1-X)
rhs - +0 - : -v*(1-v)*zj^(-nq)

case 28
boundary +1 - - +0 - -
lhs +1 - - : -v^2*zj^(-nq)*(1-X)
rhs - +0 - : -v^2*zj^(-nq)*(1-X)

case 29a k!=0
boundary - +k+1 - - +k -
lhs - +k+1 - : g(k)*(1-X)
rhs +k - - : g(k)*(1-X)

case 29b
boundary - +1 - - +a -
lhs - +1 - : -v*zi^(-nq)*(1-X)
lhs +1 - + : (1-v)^2*zi^(-nq)*X
rhs +0 - - : -v*zi^(-nq)*(1-X)
rhs - +0 + : (1-v)^2*zj^(-nq)

case 30a k!=0
boundary - +k+1 - +k - -
lhs +k+1 - - : g(k)*(1-v)*X
rhs +k - - : g(k)*(1-v)*X

case 30b
boundary - +1 - +0 - -
lhs +1 - - : -v*(1-v)*zj^(-nq)*X
rhs +0 - - : -v*(1-v)*zi^(-nq)*X
rhs - +0 + : v*(1-v)*zj^(-nq)*(1-X)

case 31
boundary - - - +k +l -

case 32
boundary - - - - - -
lhs - - - : 1-v*X
rhs - - - : 1-v*X
"#;

/// A line of the printed tables replaced by its corrected form.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Erratum {
    pub case: &'static str,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub note: &'static str,
}

pub const ERRATA: &[Erratum] = &[
    Erratum {
        case: "1a",
        printed: "rhs +k+1 +k+1 + : (zi*zj)^(-nq*d(k))*(X-v)",
        corrected: "rhs +k +k + : (zi*zj)^(-nq*d(k))*(X-v)",
        note: "right-hand interior charges are printed as k+1; the top-row vertex lowers tau's charge k+1 to k",
    },
    Erratum {
        case: "1c",
        printed: "lhs +k+1 +l+1 + : g(l-k)*zi^(-nq*d(l))*zj^(-nq*d(a))*(1-X)",
        corrected: "lhs +k+1 +l+1 + : g(l-k)*zi^(-nq*d(l))*zj^(-nq*d(k))*(1-X)",
        note: "the z_j exponent is printed with the undefined charge a instead of k",
    },
    Erratum {
        case: "1c",
        printed: "rhs +k +l + : g(l-k)*zi^(-nq*d(l))*zj^(-nq*d(k))*(1-X)",
        corrected: "rhs +l +k + : g(l-k)*zi^(-nq*d(l))*zj^(-nq*d(k))*(1-X)",
        note: "right-hand interior charges are printed as (k, l); tau = l+1 and sigma = k+1 give (l, k)",
    },
    Erratum {
        case: "29b",
        printed: "boundary - +1 - - +a -",
        corrected: "boundary - +1 - - +0 -",
        note: "the charge of rho is printed as a; the listed states force 0",
    },
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative power of a non-monomial")]
    BadPower,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[start..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| format!("bad number {t}"))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*^()[]?:>".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum IntExpr {
    Num(i64),
    Var(String),
    Nq,
    Delta(Box<IntExpr>),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    Neg(Box<IntExpr>),
}

#[derive(Clone, Debug)]
enum Expr {
    Num(i64),
    V,
    X,
    Z(usize),
    Gauss(IntExpr),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, IntExpr),
    Greater(IntExpr, IntExpr, Box<Expr>, Box<Expr>),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn new(s: &str) -> Result<Parser, String> {
        Ok(Parser {
            toks: tokenize(s)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected {c:?} at token {}", self.pos))
        }
    }

    fn done(&self) -> Result<(), String> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(format!("trailing input at {t:?}")),
        }
    }

    fn int_sum(&mut self) -> Result<IntExpr, String> {
        let mut acc = self.int_term()?;
        loop {
            if self.eat('+') {
                acc = IntExpr::Add(Box::new(acc), Box::new(self.int_term()?));
            } else if self.eat('-') {
                acc = IntExpr::Sub(Box::new(acc), Box::new(self.int_term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn int_term(&mut self) -> Result<IntExpr, String> {
        let mut acc = self.int_unary()?;
        while self.eat('*') {
            acc = IntExpr::Mul(Box::new(acc), Box::new(self.int_unary()?));
        }
        Ok(acc)
    }

    fn int_unary(&mut self) -> Result<IntExpr, String> {
        if self.eat('-') {
            return Ok(IntExpr::Neg(Box::new(self.int_unary()?)));
        }
        self.int_primary()
    }

    fn int_primary(&mut self) -> Result<IntExpr, String> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(IntExpr::Num(n))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "nq" => Ok(IntExpr::Nq),
                    "d" => {
                        self.expect('(')?;
                        let e = self.int_sum()?;
                        self.expect(')')?;
                        Ok(IntExpr::Delta(Box::new(e)))
                    }
                    _ => Ok(IntExpr::Var(id)),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.int_sum()?;
                self.expect(')')?;
                Ok(e)
            }
            t => Err(format!("unexpected {t:?} in charge expression")),
        }
    }

    fn sum(&mut self) -> Result<Expr, String> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat('^') {
            let e = self.int_primary()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, String> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "v" => Ok(Expr::V),
                    "X" => Ok(Expr::X),
                    "zi" => Ok(Expr::Z(RTT_ROW_I)),
                    "zj" => Ok(Expr::Z(RTT_ROW_J)),
                    "g" => {
                        self.expect('(')?;
                        let e = self.int_sum()?;
                        self.expect(')')?;
                        Ok(Expr::Gauss(e))
                    }
                    _ => Err(format!("unknown symbol {id}")),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let a = self.int_sum()?;
                self.expect('>')?;
                let b = self.int_sum()?;
                self.expect('?')?;
                let yes = self.sum()?;
                self.expect(':')?;
                let no = self.sum()?;
                self.expect(']')?;
                Ok(Expr::Greater(a, b, Box::new(yes), Box::new(no)))
            }
            t => Err(format!("unexpected {t:?} in weight")),
        }
    }
}

type Env = BTreeMap<String, i64>;

impl IntExpr {
    fn eval(&self, env: &Env, nq: u32) -> Result<i64, CorpusError> {
        Ok(match self {
            IntExpr::Num(n) => *n,
            IntExpr::Var(x) => *env
                .get(x)
                .ok_or_else(|| CorpusError::UnknownVariable(x.clone()))?,
            IntExpr::Nq => nq as i64,
            IntExpr::Delta(e) => i64::from(e.eval(env, nq)?.rem_euclid(nq as i64) == 0),
            IntExpr::Add(a, b) => a.eval(env, nq)? + b.eval(env, nq)?,
            IntExpr::Sub(a, b) => a.eval(env, nq)? - b.eval(env, nq)?,
            IntExpr::Mul(a, b) => a.eval(env, nq)? * b.eval(env, nq)?,
            IntExpr::Neg(a) => -a.eval(env, nq)?,
        })
    }

    fn vars(&self, out: &mut Vec<String>) {
        match self {
            IntExpr::Var(x) => out.push(x.clone()),
            IntExpr::Delta(e) | IntExpr::Neg(e) => e.vars(out),
            IntExpr::Add(a, b) | IntExpr::Sub(a, b) | IntExpr::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            IntExpr::Num(_) | IntExpr::Nq => {}
        }
    }
}

impl Expr {
    fn eval(&self, env: &Env, nq: u32) -> Result<Scalar, CorpusError> {
        Ok(match self {
            Expr::Num(n) => Scalar::int(*n),
            Expr::V => Scalar::v(),
            Expr::X => Scalar::root_power(RTT_ROW_I, RTT_ROW_J, nq),
            Expr::Z(i) => Scalar::z_pow(*i, 1),
            Expr::Gauss(a) => Scalar::gauss(a.eval(env, nq)?, nq),
            Expr::Add(a, b) => a.eval(env, nq)? + b.eval(env, nq)?,
            Expr::Sub(a, b) => a.eval(env, nq)? - b.eval(env, nq)?,
            Expr::Mul(a, b) => a.eval(env, nq)? * b.eval(env, nq)?,
            Expr::Neg(a) => -a.eval(env, nq)?,
            Expr::Pow(base, e) => {
                let b = base.eval(env, nq)?;
                let e = e.eval(env, nq)?;
                if e >= 0 {
                    b.pow(e as u32)
                } else {
                    b.inv_monomial().ok_or(CorpusError::BadPower)?.pow(e.unsigned_abs() as u32)
                }
            }
            Expr::Greater(a, b, yes, no) => {
                if rep(a.eval(env, nq)?, nq) > rep(b.eval(env, nq)?, nq) {
                    yes.eval(env, nq)?
                } else {
                    no.eval(env, nq)?
                }
            }
        })
    }

    fn vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Gauss(a) => a.vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Expr::Neg(a) => a.vars(out),
            Expr::Pow(a, e) => {
                a.vars(out);
                e.vars(out);
            }
            Expr::Greater(a, b, yes, no) => {
                a.vars(out);
                b.vars(out);
                yes.vars(out);
                no.vars(out);
            }
            Expr::Num(_) | Expr::V | Expr::X | Expr::Z(_) => {}
        }
    }
}

/// A horizontal spin pattern: `-` or `+` with a charge expression.
#[derive(Clone, Debug)]
enum SpinPattern {
    Minus,
    Plus(IntExpr),
}

impl SpinPattern {
    fn parse(tok: &str) -> Result<SpinPattern, String> {
        match tok.strip_prefix('+') {
            Some("") => Err("horizontal + spin needs a charge".into()),
            Some(rest) => {
                let mut p = Parser::new(rest)?;
                let e = p.int_sum()?;
                p.done()?;
                Ok(SpinPattern::Plus(e))
            }
            None if tok == "-" => Ok(SpinPattern::Minus),
            None => Err(format!("bad spin {tok}")),
        }
    }

    fn eval(&self, env: &Env, nq: u32) -> Result<Spin, CorpusError> {
        Ok(match self {
            SpinPattern::Minus => Spin::Minus,
            SpinPattern::Plus(e) => Spin::plus(e.eval(env, nq)?, nq),
        })
    }
}

fn parse_vertical(tok: &str) -> Result<bool, String> {
    match tok {
        "+" => Ok(true),
        "-" => Ok(false),
        _ => Err(format!("bad vertical spin {tok}")),
    }
}

#[derive(Clone, Debug)]
struct StateRow {
    upper: SpinPattern,
    lower: SpinPattern,
    vertical: bool,
    weight: Expr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Constraint {
    KNonzero,
    KNotL,
}

/// One case of the corpus, parsed.
#[derive(Clone, Debug)]
pub struct AppendixCase {
    pub id: String,
    constraints: Vec<Constraint>,
    boundary: (SpinPattern, SpinPattern, bool, SpinPattern, SpinPattern, bool),
    lhs: Vec<StateRow>,
    rhs: Vec<StateRow>,
}

impl AppendixCase {
    /// Case number without its letter suffix.
    pub fn number(&self) -> u32 {
        self.id
            .trim_end_matches(|c: char| c.is_ascii_alphabetic())
            .parse()
            .unwrap_or(0)
    }

    /// Free charge variables, sorted.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (s, t, _, th, r, _) = &self.boundary;
        for p in [s, t, th, r] {
            if let SpinPattern::Plus(e) = p {
                e.vars(&mut out);
            }
        }
        for row in self.lhs.iter().chain(&self.rhs) {
            for p in [&row.upper, &row.lower] {
                if let SpinPattern::Plus(e) = p {
                    e.vars(&mut out);
                }
            }
            row.weight.vars(&mut out);
        }
        out.sort();
        out.dedup();
        out
    }

    /// All assignments of the free charges to residues `0..nq` allowed by
    /// the case's side conditions.
    pub fn instantiations(&self, nq: u32) -> Vec<BTreeMap<String, i64>> {
        let vars = self.variables();
        let mut out = vec![Env::new()];
        for x in &vars {
            out = out
                .into_iter()
                .flat_map(|env| {
                    (0..nq as i64).map(move |val| {
                        let mut e = env.clone();
                        e.insert(x.clone(), val);
                        e
                    })
                })
                .collect();
        }
        let n = nq as i64;
        out.retain(|env| {
            let get = |x: &str| env.get(x).copied().unwrap_or(0).rem_euclid(n);
            self.constraints.iter().all(|c| match c {
                Constraint::KNonzero => get("k") != 0,
                Constraint::KNotL => get("k") != get("l"),
            })
        });
        out
    }
}

/// Parse a corpus text into cases.
pub fn parse_corpus(text: &str) -> Result<Vec<AppendixCase>, CorpusError> {
    let mut cases: Vec<AppendixCase> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CorpusError::Syntax { line: n + 1, msg };
        let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
        match head {
            "case" => {
                let mut parts = rest.split_whitespace();
                let id = parts.next().ok_or_else(|| err("missing case id".into()))?;
                let mut constraints = Vec::new();
                for c in parts {
                    constraints.push(match c {
                        "k!=0" => Constraint::KNonzero,
                        "k!=l" => Constraint::KNotL,
                        _ => return Err(err(format!("unknown condition {c}"))),
                    });
                }
                cases.push(AppendixCase {
                    id: id.to_string(),
                    constraints,
                    boundary: (
                        SpinPattern::Minus,
                        SpinPattern::Minus,
                        false,
                        SpinPattern::Minus,
                        SpinPattern::Minus,
                        false,
                    ),
                    lhs: Vec::new(),
                    rhs: Vec::new(),
                });
            }
            "boundary" => {
                let case = cases.last_mut().ok_or_else(|| err("boundary before case".into()))?;
                let t: Vec<&str> = rest.split_whitespace().collect();
                if t.len() != 6 {
                    return Err(err("boundary needs six spins".into()));
                }
                case.boundary = (
                    SpinPattern::parse(t[0]).map_err(err)?,
                    SpinPattern::parse(t[1]).map_err(err)?,
                    parse_vertical(t[2]).map_err(err)?,
                    SpinPattern::parse(t[3]).map_err(err)?,
                    SpinPattern::parse(t[4]).map_err(err)?,
                    parse_vertical(t[5]).map_err(err)?,
                );
            }
            "lhs" | "rhs" => {
                let case = cases.last_mut().ok_or_else(|| err("state before case".into()))?;
                let (spins, weight) = rest
                    .split_once(':')
                    .ok_or_else(|| err("missing ':'".into()))?;
                let t: Vec<&str> = spins.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(err("a state needs three spins".into()));
                }
                let mut p = Parser::new(weight).map_err(err)?;
                let w = p.sum().map_err(err)?;
                p.done().map_err(err)?;
                let row = StateRow {
                    upper: SpinPattern::parse(t[0]).map_err(err)?,
                    lower: SpinPattern::parse(t[1]).map_err(err)?,
                    vertical: parse_vertical(t[2]).map_err(err)?,
                    weight: w,
                };
                if head == "lhs" {
                    case.lhs.push(row);
                } else {
                    case.rhs.push(row);
                }
            }
            _ => return Err(err(format!("unknown directive {head}"))),
        }
    }
    Ok(cases)
}

/// The corpus with every erratum applied.
pub fn corrected_corpus() -> String {
    let mut text = CORPUS.to_string();
    for e in ERRATA {
        text = text.replacen(e.printed, e.corrected, 1);
    }
    text
}

/// Outcome of one case at one instantiation of its free charges.
#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub case: String,
    pub instantiation: BTreeMap<String, i64>,
    pub boundary: Option<RttBoundary>,
    pub lhs: String,
    pub rhs: String,
    /// Corrected tables agree state by state with the computed diagrams.
    pub tables_match: bool,
    /// The printed left and right totals agree.
    pub verdict: bool,
    /// For cases with an erratum: whether the uncorrected line disagrees
    /// with the computation at this instantiation.
    pub printed_differs: Option<bool>,
    pub mismatches: Vec<String>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.tables_match && self.verdict
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub nq: u32,
    pub cases: usize,
    pub outcomes: Vec<CaseOutcome>,
    pub errata: Vec<Erratum>,
    pub all_pass: bool,
}

fn fmt_inst(env: &Env) -> String {
    env.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

struct Comparison {
    boundary: RttBoundary,
    lhs: Scalar,
    rhs: Scalar,
    mismatches: Vec<String>,
}

fn compare_case(case: &AppendixCase, env: &Env, nq: u32) -> Result<Comparison, CorpusError> {
    let (s, t, beta, th, r, alpha) = &case.boundary;
    let boundary = RttBoundary {
        sigma: s.eval(env, nq)?,
        tau: t.eval(env, nq)?,
        beta: *beta,
        theta: th.eval(env, nq)?,
        rho: r.eval(env, nq)?,
        alpha: *alpha,
    };
    let computed = check_rtt(boundary, nq);
    let mut mismatches = Vec::new();
    let mut sides = Vec::new();
    for (name, rows, states) in [
        ("lhs", &case.lhs, &computed.lhs_states),
        ("rhs", &case.rhs, &computed.rhs_states),
    ] {
        let mut printed: BTreeMap<RttInterior, Scalar> = BTreeMap::new();
        let mut total = Scalar::zero();
        for row in rows {
            let key = RttInterior {
                upper: row.upper.eval(env, nq)?,
                lower: row.lower.eval(env, nq)?,
                vertical: row.vertical,
            };
            let w = row.weight.eval(env, nq)?.with_nq(nq);
            total += w.clone();
            *printed.entry(key).or_insert_with(Scalar::zero) += w;
        }
        let computed: BTreeMap<RttInterior, Scalar> =
            states.iter().map(|(k, f)| (*k, f.num.clone())).collect();
        for (k, w) in &printed {
            match computed.get(k) {
                None => mismatches.push(format!(
                    "{name}: listed state ({}, {}, {}) is not admissible",
                    k.upper, k.lower, k.vertical as u8
                )),
                Some(c) if !(c.clone() - w.clone()).is_zero() => mismatches.push(format!(
                    "{name}: state ({}, {}, {}) listed {w}, computed {c}",
                    k.upper, k.lower, k.vertical as u8
                )),
                Some(_) => {}
            }
        }
        for (k, c) in &computed {
            if !printed.contains_key(k) {
                mismatches.push(format!(
                    "{name}: admissible state ({}, {}, {}) with weight {c} is missing",
                    k.upper, k.lower, k.vertical as u8
                ));
            }
        }
        sides.push(total.with_nq(nq));
    }
    if !computed.holds {
        mismatches.push(format!(
            "computed sides differ: {} vs {}",
            computed.lhs, computed.rhs
        ));
    }
    let rhs = sides.pop().unwrap_or_else(Scalar::zero);
    let lhs = sides.pop().unwrap_or_else(Scalar::zero);
    Ok(Comparison {
        boundary,
        lhs,
        rhs,
        mismatches,
    })
}

/// Check every case of the corpus at modulus `nq`.
pub fn appendix_regression(nq: u32) -> AppendixReport {
    let printed = parse_corpus(CORPUS).expect("corpus parses");
    let corrected = parse_corpus(&corrected_corpus()).expect("corrected corpus parses");
    let mut outcomes = Vec::new();
    for (case, original) in corrected.iter().zip(&printed) {
        let has_erratum = ERRATA.iter().any(|e| e.case == case.id);
        for env in case.instantiations(nq) {
            let printed_differs = has_erratum.then(|| match compare_case(original, &env, nq) {
                Ok(c) => !c.mismatches.is_empty(),
                Err(_) => true,
            });
            let outcome = match compare_case(case, &env, nq) {
                Ok(c) => {
                    let verdict = (c.lhs.clone() - c.rhs.clone()).is_zero();
                    CaseOutcome {
                        case: case.id.clone(),
                        instantiation: env.clone(),
                        boundary: Some(c.boundary),
                        lhs: c.lhs.to_string(),
                        rhs: c.rhs.to_string(),
                        tables_match: c.mismatches.is_empty(),
                        verdict,
                        printed_differs,
                        mismatches: c.mismatches,
                    }
                }
                Err(e) => CaseOutcome {
                    case: case.id.clone(),
                    instantiation: env.clone(),
                    boundary: None,
                    lhs: String::new(),
                    rhs: String::new(),
                    tables_match: false,
                    verdict: false,
                    printed_differs,
                    mismatches: vec![format!("{} [{}]: {e}", case.id, fmt_inst(&env))],
                },
            };
            outcomes.push(outcome);
        }
    }
    let mut numbers: Vec<u32> = corrected.iter().map(|c| c.number()).collect();
    numbers.dedup();
    let all_pass = outcomes.iter().all(CaseOutcome::passed);
    AppendixReport {
        nq,
        cases: numbers.len(),
        outcomes,
        errata: ERRATA.to_vec(),
        all_pass,
    }
}

impl fmt::Display for AppendixReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.outcomes.iter().filter(|o| !o.passed()).count();
        writeln!(
            f,
            "n_Q = {}: {} cases, {} instantiations, {} failed",
            self.nq,
            self.cases,
            self.outcomes.len(),
            failed
        )?;
        for o in self.outcomes.iter().filter(|o| !o.passed()) {
            writeln!(f, "  case {} [{}]", o.case, fmt_inst(&o.instantiation))?;
            for m in &o.mismatches {
                writeln!(f, "    {m}")?;
            }
        }
        Ok(())
    }
}
