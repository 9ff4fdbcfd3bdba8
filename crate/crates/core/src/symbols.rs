//! Symbol functions: a minimal closed expression grammar over the domain
//! coordinates — rationals in z (per axis), complex constants, and real
//! powers of expressions that keep away from the branch cut — plus the
//! machinery to evaluate them pointwise and to expand them in monomials
//! per axis for exact operator assembly.
//!
//! Expression syntax accepted by [`Symbol::parse`]:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | postfix
//! postfix:= atom ('^' signed-number)?
//! atom   := number | 'i' | 'z' | 'z1'..'z9' | '(' expr ')'
//! ```
//!
//! Real powers use the principal branch; the caller is responsible for
//! keeping the base Möbius-positive (range in the right half-plane) on the
//! domain of interest, as all the stock symbols here do.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{Sesqui, SeriesError, Taylor};

#[derive(Debug, Error, PartialEq)]
pub enum SymbolError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("symbol is not a tensor product over axes")]
    NotTensor,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Expr {
    Const(Complex64),
    /// Coordinate z_k (0-based axis).
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Principal-branch real power.
    Pow(Box<Expr>, f64),
    Conj(Box<Expr>),
}

impl Expr {
    pub fn constant(c: Complex64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(axis: usize) -> Expr {
        Expr::Var(axis)
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(k) => z[*k],
            Expr::Add(a, b) => a.eval(z) + b.eval(z),
            Expr::Sub(a, b) => a.eval(z) - b.eval(z),
            Expr::Mul(a, b) => a.eval(z) * b.eval(z),
            Expr::Div(a, b) => a.eval(z) / b.eval(z),
            Expr::Neg(a) => -a.eval(z),
            Expr::Pow(a, s) => a.eval(z).powf(*s),
            Expr::Conj(a) => a.eval(z).conj(),
        }
    }

    fn max_axis(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(k) => k + 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_axis().max(b.max_axis())
            }
            Expr::Neg(a) | Expr::Conj(a) => a.max_axis(),
            Expr::Pow(a, _) => a.max_axis(),
        }
    }

    /// Expansion in monomials of the single axis `axis` (all other axes must
    /// be absent from the expression).
    fn sesqui(&self, axis: usize, len: usize) -> Result<Sesqui, SymbolError> {
        Ok(match self {
            Expr::Const(c) => Sesqui::constant(*c, len),
            Expr::Var(k) => {
                if *k != axis {
                    return Err(SymbolError::NotTensor);
                }
                Sesqui::analytic(Taylor::variable(len))
            }
            Expr::Add(a, b) => a.sesqui(axis, len)?.add(&b.sesqui(axis, len)?),
            Expr::Sub(a, b) => a.sesqui(axis, len)?.add(&b.sesqui(axis, len)?.neg()),
            Expr::Mul(a, b) => a.sesqui(axis, len)?.mul(&b.sesqui(axis, len)?),
            Expr::Div(a, b) => a
                .sesqui(axis, len)?
                .mul(&b.sesqui(axis, len)?.inverse()?),
            Expr::Neg(a) => a.sesqui(axis, len)?.neg(),
            Expr::Pow(a, s) => a.sesqui(axis, len)?.powf(*s)?,
            Expr::Conj(a) => a.sesqui(axis, len)?.conj(),
        })
    }
}

/// An evaluable symbol on 𝔻, ℋ, 𝔻ⁿ or ℋⁿ: either a single expression in
/// the coordinates or an explicit tensor product of per-axis expressions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Symbol {
    expr: Expr,
    arity: usize,
    /// Per-axis factors when the symbol was built as a tensor product;
    /// factor `k` is a univariate expression in Var(k).
    factors: Option<Vec<Expr>>,
}

impl Symbol {
    pub fn new(expr: Expr, arity: usize) -> Symbol {
        debug_assert!(expr.max_axis() <= arity);
        Symbol {
            expr,
            arity,
            factors: None,
        }
    }

    /// One-variable symbol.
    pub fn univariate(expr: Expr) -> Symbol {
        let factors = Some(vec![expr.clone()]);
        Symbol {
            expr,
            arity: 1,
            factors,
        }
    }

    pub fn constant(c: Complex64, arity: usize) -> Symbol {
        let expr = Expr::Const(c);
        Symbol {
            expr: expr.clone(),
            arity,
            factors: Some(vec![expr; arity]),
        }
    }

    pub fn one(arity: usize) -> Symbol {
        Symbol::constant(Complex64::new(1.0, 0.0), arity)
    }

    /// Tensor product of per-axis expressions; factor `k` must reference
    /// only Var(k) (pass univariate expressions in Var(0..n)).
    pub fn tensor(factors: Vec<Expr>) -> Symbol {
        let arity = factors.len();
        let expr = factors
            .iter()
            .cloned()
            .reduce(|a, b| Expr::Mul(Box::new(a), Box::new(b)))
            .unwrap_or(Expr::Const(Complex64::new(1.0, 0.0)));
        Symbol {
            expr,
            arity,
            factors: Some(factors),
        }
    }

    /// Lifts a univariate symbol to axis `axis` of an n-axis domain
    /// (constant 1 on the other axes).
    pub fn on_axis(uni: &Symbol, axis: usize, arity: usize) -> Symbol {
        assert!(uni.arity == 1 && axis < arity);
        let shifted = relabel(&uni.expr, axis);
        let mut factors = vec![Expr::Const(Complex64::new(1.0, 0.0)); arity];
        factors[axis] = shifted;
        Symbol::tensor(factors)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.arity);
        self.expr.eval(z)
    }

    /// Evaluation for one-variable symbols.
    pub fn eval1(&self, z: Complex64) -> Complex64 {
        self.eval(std::slice::from_ref(&z))
    }

    /// Pointwise product of two symbols of the same arity.
    pub fn product(&self, other: &Symbol) -> Symbol {
        assert_eq!(self.arity, other.arity);
        let expr = Expr::Mul(Box::new(self.expr.clone()), Box::new(other.expr.clone()));
        let factors = match (&self.factors, &other.factors) {
            (Some(a), Some(b)) => Some(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| Expr::Mul(Box::new(x.clone()), Box::new(y.clone())))
                    .collect(),
            ),
            _ => None,
        };
        Symbol {
            expr,
            arity: self.arity,
            factors,
        }
    }

    /// 1/self.
    pub fn reciprocal(&self) -> Symbol {
        let inv = |e: &Expr| Expr::Div(Box::new(Expr::Const(Complex64::new(1.0, 0.0))), Box::new(e.clone()));
        Symbol {
            expr: inv(&self.expr),
            arity: self.arity,
            factors: self.factors.as_ref().map(|fs| fs.iter().map(inv).collect()),
        }
    }

    /// conj(self).
    pub fn conj(&self) -> Symbol {
        let cj = |e: &Expr| Expr::Conj(Box::new(e.clone()));
        Symbol {
            expr: cj(&self.expr),
            arity: self.arity,
            factors: self.factors.as_ref().map(|fs| fs.iter().map(cj).collect()),
        }
    }

    /// The per-axis factors when the symbol is a tensor product.
    pub fn tensor_factors(&self) -> Option<&[Expr]> {
        self.factors.as_deref()
    }

    /// Monomial expansion of axis `k` (requires a tensor-product structure),
    /// truncated at `len` coefficients.
    pub fn axis_sesqui(&self, k: usize, len: usize) -> Result<Sesqui, SymbolError> {
        match &self.factors {
            Some(fs) => fs[k].sesqui(k, len),
            None if self.arity == 1 => self.expr.sesqui(0, len),
            None => Err(SymbolError::NotTensor),
        }
    }

    /// The univariate symbol of axis `k` with the remaining coordinates
    /// frozen at `frozen` (which lists all arity coordinates; entry `k` is
    /// ignored).
    pub fn slice(&self, k: usize, frozen: &[Complex64]) -> Symbol {
        assert_eq!(frozen.len(), self.arity);
        let expr = freeze(&self.expr, k, frozen);
        Symbol::univariate(expr)
    }

    /// Parses an expression over `arity` coordinates.
    pub fn parse(src: &str, arity: usize) -> Result<Symbol, SymbolError> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let expr = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(SymbolError::Parse {
                pos: p.pos,
                msg: "trailing input".into(),
            });
        }
        let used = expr.max_axis();
        if used > arity {
            return Err(SymbolError::Parse {
                pos: 0,
                msg: format!("expression uses z{used} but arity is {arity}"),
            });
        }
        if arity == 1 {
            Ok(Symbol::univariate(expr))
        } else {
            Ok(Symbol::new(expr, arity))
        }
    }
}

/// Replaces Var(0) with Var(axis) in a univariate expression.
fn relabel(e: &Expr, axis: usize) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(*c),
        Expr::Var(_) => Expr::Var(axis),
        Expr::Add(a, b) => Expr::Add(Box::new(relabel(a, axis)), Box::new(relabel(b, axis))),
        Expr::Sub(a, b) => Expr::Sub(Box::new(relabel(a, axis)), Box::new(relabel(b, axis))),
        Expr::Mul(a, b) => Expr::Mul(Box::new(relabel(a, axis)), Box::new(relabel(b, axis))),
        Expr::Div(a, b) => Expr::Div(Box::new(relabel(a, axis)), Box::new(relabel(b, axis))),
        Expr::Neg(a) => Expr::Neg(Box::new(relabel(a, axis))),
        Expr::Pow(a, s) => Expr::Pow(Box::new(relabel(a, axis)), *s),
        Expr::Conj(a) => Expr::Conj(Box::new(relabel(a, axis))),
    }
}

/// Substitutes frozen constants for every coordinate except axis `k`, which
/// becomes Var(0).
fn freeze(e: &Expr, k: usize, frozen: &[Complex64]) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(*c),
        Expr::Var(j) => {
            if *j == k {
                Expr::Var(0)
            } else {
                Expr::Const(frozen[*j])
            }
        }
        Expr::Add(a, b) => Expr::Add(Box::new(freeze(a, k, frozen)), Box::new(freeze(b, k, frozen))),
        Expr::Sub(a, b) => Expr::Sub(Box::new(freeze(a, k, frozen)), Box::new(freeze(b, k, frozen))),
        Expr::Mul(a, b) => Expr::Mul(Box::new(freeze(a, k, frozen)), Box::new(freeze(b, k, frozen))),
        Expr::Div(a, b) => Expr::Div(Box::new(freeze(a, k, frozen)), Box::new(freeze(b, k, frozen))),
        Expr::Neg(a) => Expr::Neg(Box::new(freeze(a, k, frozen))),
        Expr::Pow(a, s) => Expr::Pow(Box::new(freeze(a, k, frozen)), *s),
        Expr::Conj(a) => Expr::Conj(Box::new(freeze(a, k, frozen))),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T, SymbolError> {
        Err(SymbolError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, SymbolError> {
        let mut lhs = self.term()?;
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                b'-' => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, SymbolError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.peek() {
            match op {
                b'*' => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                b'/' => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, SymbolError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Expr, SymbolError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let mut sign = 1.0;
            if self.src.get(self.pos) == Some(&b'-') {
                sign = -1.0;
                self.pos += 1;
            } else if self.src.get(self.pos) == Some(&b'(') {
                // allow parenthesized signed exponent: ^(-0.5)
                self.pos += 1;
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b'-') {
                    sign = -1.0;
                    self.pos += 1;
                }
                let n = self.number()?;
                self.skip_ws();
                if self.src.get(self.pos) != Some(&b')') {
                    return self.err("expected ')' after exponent");
                }
                self.pos += 1;
                return Ok(Expr::Pow(Box::new(base), sign * n));
            }
            let n = self.number()?;
            return Ok(Expr::Pow(Box::new(base), sign * n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SymbolError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Expr::Const(Complex64::new(0.0, 1.0)))
            }
            Some(b'z') => {
                self.pos += 1;
                let mut axis = 0usize;
                if let Some(d) = self.src.get(self.pos).copied() {
                    if d.is_ascii_digit() && d != b'0' {
                        axis = (d - b'1') as usize;
                        self.pos += 1;
                    }
                }
                Ok(Expr::Var(axis))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let n = self.number()?;
                Ok(Expr::Const(Complex64::new(n, 0.0)))
            }
            _ => self.err("expected a number, 'i', 'z', or '('"),
        }
    }

    fn number(&mut self) -> Result<f64, SymbolError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit()
                || self.src[self.pos] == b'.'
                || self.src[self.pos] == b'e'
                || self.src[self.pos] == b'E'
                || (self.pos > start
                    && (self.src[self.pos] == b'-' || self.src[self.pos] == b'+')
                    && matches!(self.src[self.pos - 1], b'e' | b'E')))
        {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or(SymbolError::Parse {
                pos: start,
                msg: "malformed number".into(),
            })
    }
}

// ---------------------------------------------------------------------------
// Stock symbols
// ---------------------------------------------------------------------------

/// The zero-free disc corpus: 1, 2+z, 1/(2+z), (2+z)/(3+z).
pub fn disc_corpus() -> Vec<(String, Symbol)> {
    [
        ("1", "1"),
        ("2+z", "2+z"),
        ("1/(2+z)", "1/(2+z)"),
        ("(2+z)/(3+z)", "(2+z)/(3+z)"),
    ]
    .into_iter()
    .map(|(name, src)| (name.to_string(), Symbol::parse(src, 1).unwrap()))
    .collect()
}

/// The zero-free half-plane corpus: 1 and ((z+i)/i)^{±1/8}.
pub fn halfplane_corpus() -> Vec<(String, Symbol)> {
    [
        ("1", "1"),
        ("((z+i)/i)^0.125", "((z+i)/i)^0.125"),
        ("((z+i)/i)^-0.125", "((z+i)/i)^-0.125"),
    ]
    .into_iter()
    .map(|(name, src)| (name.to_string(), Symbol::parse(src, 1).unwrap()))
    .collect()
}
