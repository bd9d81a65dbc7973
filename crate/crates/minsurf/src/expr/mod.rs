//! Symbolic complex-valued expressions of one or two variables.
//!
//! An [`Expr`] is a finite tree built from constants, named variables, the
//! four arithmetic operations, integer powers, and the standard holomorphic
//! functions exp/log/sin/cos/tan/sqrt/atan (principal branches everywhere,
//! cut along the negative real axis for log and sqrt). Trees are immutable
//! after construction and cheap to share between threads.
//!
//! General powers have no node of their own: `a^b` with non-integer `b` must
//! be written as `exp(b*log(a))`, which keeps branch choices explicit in the
//! user's data.

mod parse;

pub use parse::{parse_expression, parse_expression_vars};

use num_complex::Complex64;

use crate::error::{Error, EvalFailure, Result, Span};

#[derive(Debug, Clone)]
pub enum ExprKind {
    Const(Complex64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power, evaluated by repeated multiplication (reciprocal for
    /// negative exponents); never touches a branch cut.
    PowInt(Box<Expr>, i32),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Tan(Box<Expr>),
    Sqrt(Box<Expr>),
    Atan(Box<Expr>),
}

/// A symbolic expression node with an optional source span.
///
/// Spans survive parsing so evaluation failures can point back into the
/// original text; nodes synthesized by [`Expr::differentiate`] carry none.
#[derive(Debug, Clone)]
pub struct Expr {
    kind: ExprKind,
    span: Option<Span>,
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, span: None }
    }

    pub(crate) fn with_span(kind: ExprKind, span: Span) -> Self {
        Expr {
            kind,
            span: Some(span),
        }
    }

    pub fn kind(&self) -> &ExprKind {
        &self.kind
    }

    pub fn constant(c: Complex64) -> Self {
        Expr::new(ExprKind::Const(c))
    }

    pub fn real(x: f64) -> Self {
        Expr::constant(Complex64::new(x, 0.0))
    }

    pub fn var(name: &str) -> Self {
        Expr::new(ExprKind::Var(name.to_string()))
    }

    /// The single variable named in this tree, if there is exactly one.
    pub fn single_var(&self) -> Option<&str> {
        let mut found: Option<&str> = None;
        let mut ok = true;
        self.visit_vars(&mut |name| match found {
            None => found = Some(name),
            Some(f) if f == name => {}
            Some(_) => ok = false,
        });
        if ok {
            found
        } else {
            None
        }
    }

    /// All distinct variable names, in first-appearance order.
    pub fn variables(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        self.visit_vars(&mut |name| {
            if !names.iter().any(|n| n == name) {
                names.push(name.to_string());
            }
        });
        names
    }

    fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match &self.kind {
            ExprKind::Const(_) => {}
            ExprKind::Var(n) => f(n),
            ExprKind::Neg(a)
            | ExprKind::PowInt(a, _)
            | ExprKind::Exp(a)
            | ExprKind::Log(a)
            | ExprKind::Sin(a)
            | ExprKind::Cos(a)
            | ExprKind::Tan(a)
            | ExprKind::Sqrt(a)
            | ExprKind::Atan(a) => a.visit_vars(f),
            ExprKind::Add(a, b)
            | ExprKind::Sub(a, b)
            | ExprKind::Mul(a, b)
            | ExprKind::Div(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Evaluate with the given variable bindings (IEEE semantics, principal
    /// branches). Division by an exact zero and non-finite intermediates are
    /// reported with the offending node.
    pub fn eval(&self, bindings: &[(&str, Complex64)]) -> Result<Complex64> {
        let v = match &self.kind {
            ExprKind::Const(c) => *c,
            ExprKind::Var(name) => bindings
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| self.eval_error(EvalFailure::UnboundVariable))?,
            ExprKind::Neg(a) => -a.eval(bindings)?,
            ExprKind::Add(a, b) => a.eval(bindings)? + b.eval(bindings)?,
            ExprKind::Sub(a, b) => a.eval(bindings)? - b.eval(bindings)?,
            ExprKind::Mul(a, b) => a.eval(bindings)? * b.eval(bindings)?,
            ExprKind::Div(a, b) => {
                let den = b.eval(bindings)?;
                if den == Complex64::new(0.0, 0.0) {
                    return Err(self.eval_error(EvalFailure::DivisionByZero));
                }
                a.eval(bindings)? / den
            }
            ExprKind::PowInt(a, n) => {
                let base = a.eval(bindings)?;
                if *n < 0 && base == Complex64::new(0.0, 0.0) {
                    return Err(self.eval_error(EvalFailure::DivisionByZero));
                }
                powi(base, *n)
            }
            ExprKind::Exp(a) => a.eval(bindings)?.exp(),
            ExprKind::Log(a) => a.eval(bindings)?.ln(),
            ExprKind::Sin(a) => a.eval(bindings)?.sin(),
            ExprKind::Cos(a) => a.eval(bindings)?.cos(),
            ExprKind::Tan(a) => a.eval(bindings)?.tan(),
            ExprKind::Sqrt(a) => a.eval(bindings)?.sqrt(),
            ExprKind::Atan(a) => a.eval(bindings)?.atan(),
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(self.eval_error(EvalFailure::NonFinite))
        }
    }

    /// Evaluate a one-variable expression.
    pub fn eval1(&self, var: &str, at: Complex64) -> Result<Complex64> {
        self.eval(&[(var, at)])
    }

    /// Evaluate at a real point expecting a real value (graph mode).
    pub fn eval_real(&self, bindings: &[(&str, f64)]) -> Result<f64> {
        let complex_bindings: Vec<(&str, Complex64)> = bindings
            .iter()
            .map(|(n, v)| (*n, Complex64::new(*v, 0.0)))
            .collect();
        let v = self.eval(&complex_bindings)?;
        // Real inputs through real-analytic operations keep an exactly zero
        // imaginary part; anything else means the formula left the reals.
        if v.im.abs() > 1e-12 * (1.0 + v.re.abs()) {
            return Err(self.eval_error(EvalFailure::NonReal));
        }
        Ok(v.re)
    }

    fn eval_error(&self, kind: EvalFailure) -> Error {
        let mut node = self.to_string();
        if node.len() > 48 {
            node.truncate(45);
            node.push_str("...");
        }
        Error::Eval {
            kind,
            node,
            span: self.span,
        }
    }

    /// Structural derivative with respect to `var`. Total on valid trees;
    /// other variables are held constant.
    pub fn differentiate(&self, var: &str) -> Expr {
        match &self.kind {
            ExprKind::Const(_) => Expr::real(0.0),
            ExprKind::Var(n) => {
                if n == var {
                    Expr::real(1.0)
                } else {
                    Expr::real(0.0)
                }
            }
            ExprKind::Neg(a) => neg(a.differentiate(var)),
            ExprKind::Add(a, b) => add(a.differentiate(var), b.differentiate(var)),
            ExprKind::Sub(a, b) => sub(a.differentiate(var), b.differentiate(var)),
            ExprKind::Mul(a, b) => add(
                mul(a.differentiate(var), (**b).clone()),
                mul((**a).clone(), b.differentiate(var)),
            ),
            ExprKind::Div(a, b) => {
                // (a/b)' = (a'b - ab') / b^2
                let num = sub(
                    mul(a.differentiate(var), (**b).clone()),
                    mul((**a).clone(), b.differentiate(var)),
                );
                div(num, powint((**b).clone(), 2))
            }
            ExprKind::PowInt(a, n) => {
                // (a^n)' = n a^(n-1) a'
                if *n == 0 {
                    return Expr::real(0.0);
                }
                mul(
                    mul(Expr::real(*n as f64), powint((**a).clone(), n - 1)),
                    a.differentiate(var),
                )
            }
            ExprKind::Exp(a) => mul(exp((**a).clone()), a.differentiate(var)),
            ExprKind::Log(a) => div(a.differentiate(var), (**a).clone()),
            ExprKind::Sin(a) => mul(cos((**a).clone()), a.differentiate(var)),
            ExprKind::Cos(a) => neg(mul(sin((**a).clone()), a.differentiate(var))),
            ExprKind::Tan(a) => div(a.differentiate(var), powint(cos((**a).clone()), 2)),
            ExprKind::Sqrt(a) => div(
                a.differentiate(var),
                mul(Expr::real(2.0), sqrt((**a).clone())),
            ),
            ExprKind::Atan(a) => div(
                a.differentiate(var),
                add(Expr::real(1.0), powint((**a).clone(), 2)),
            ),
        }
    }

    fn as_const(&self) -> Option<Complex64> {
        match &self.kind {
            ExprKind::Const(c) => Some(*c),
            _ => None,
        }
    }
}

fn powi(z: Complex64, n: i32) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut base = if n < 0 { 1.0 / z } else { z };
    let mut e = n.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        base *= base;
        e >>= 1;
    }
    result
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

// Smart constructors used when building derivative trees: fold constants and
// drop identity elements so repeated differentiation stays compact. Parsed
// trees are never rewritten.

pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::constant(x + y),
        (Some(x), None) if x == ZERO => b,
        (None, Some(y)) if y == ZERO => a,
        _ => Expr::new(ExprKind::Add(Box::new(a), Box::new(b))),
    }
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::constant(x - y),
        (None, Some(y)) if y == ZERO => a,
        (Some(x), None) if x == ZERO => neg(b),
        _ => Expr::new(ExprKind::Sub(Box::new(a), Box::new(b))),
    }
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::constant(x * y),
        (Some(x), None) if x == ZERO => Expr::constant(ZERO),
        (None, Some(y)) if y == ZERO => Expr::constant(ZERO),
        (Some(x), None) if x == ONE => b,
        (None, Some(y)) if y == ONE => a,
        _ => Expr::new(ExprKind::Mul(Box::new(a), Box::new(b))),
    }
}

pub(crate) fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (None, Some(y)) if y == ONE => a,
        (Some(x), None) if x == ZERO => Expr::constant(ZERO),
        _ => Expr::new(ExprKind::Div(Box::new(a), Box::new(b))),
    }
}

pub(crate) fn neg(a: Expr) -> Expr {
    match &a.kind {
        ExprKind::Const(c) => Expr::constant(-c),
        ExprKind::Neg(inner) => (**inner).clone(),
        _ => Expr::new(ExprKind::Neg(Box::new(a))),
    }
}

pub(crate) fn powint(a: Expr, n: i32) -> Expr {
    match n {
        0 => Expr::real(1.0),
        1 => a,
        _ => Expr::new(ExprKind::PowInt(Box::new(a), n)),
    }
}

pub(crate) fn exp(a: Expr) -> Expr {
    Expr::new(ExprKind::Exp(Box::new(a)))
}
pub(crate) fn sin(a: Expr) -> Expr {
    Expr::new(ExprKind::Sin(Box::new(a)))
}
pub(crate) fn cos(a: Expr) -> Expr {
    Expr::new(ExprKind::Cos(Box::new(a)))
}
pub(crate) fn sqrt(a: Expr) -> Expr {
    Expr::new(ExprKind::Sqrt(Box::new(a)))
}

/// Build `(1 - e^2)`, `i (1 + e^2)`, `2 e` style combinations on top of an
/// existing tree; used by the Weierstrass integrand constructors.
pub(crate) fn one_minus_sq(e: Expr) -> Expr {
    sub(Expr::real(1.0), powint(e, 2))
}
pub(crate) fn i_times_one_plus_sq(e: Expr) -> Expr {
    mul(
        Expr::constant(Complex64::new(0.0, 1.0)),
        add(Expr::real(1.0), powint(e, 2)),
    )
}
pub(crate) fn two_times(e: Expr) -> Expr {
    mul(Expr::real(2.0), e)
}

fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        if x.is_sign_negative() {
            "-0".to_string()
        } else {
            "0".to_string()
        }
    } else {
        // 17 significant digits: enough to reproduce the f64 bit pattern.
        format!("{:.16e}", x)
    }
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 && !c.im.is_sign_negative() {
        fmt_real(c.re)
    } else if c.re == 0.0 && !c.re.is_sign_negative() && c.im == 1.0 {
        "i".to_string()
    } else if c.im.is_sign_negative() {
        format!("({}-{}*i)", fmt_real(c.re), fmt_real(-c.im))
    } else {
        format!("({}+{}*i)", fmt_real(c.re), fmt_real(c.im))
    }
}

impl std::fmt::Display for Expr {
    /// Canonical parenthesized infix form; `parse(print(e))` evaluates
    /// bitwise-identically to `e`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            ExprKind::Const(c) => write!(f, "{}", fmt_complex(*c)),
            ExprKind::Var(n) => write!(f, "{n}"),
            ExprKind::Neg(a) => {
                let inner = a.to_string();
                if inner.starts_with('-') {
                    write!(f, "(-({inner}))")
                } else {
                    write!(f, "(-{inner})")
                }
            }
            ExprKind::Add(a, b) => write!(f, "({a} + {b})"),
            ExprKind::Sub(a, b) => write!(f, "({a} - {b})"),
            ExprKind::Mul(a, b) => write!(f, "({a} * {b})"),
            ExprKind::Div(a, b) => write!(f, "({a} / {b})"),
            ExprKind::PowInt(a, n) => write!(f, "({a}^{n})"),
            ExprKind::Exp(a) => write!(f, "exp({a})"),
            ExprKind::Log(a) => write!(f, "log({a})"),
            ExprKind::Sin(a) => write!(f, "sin({a})"),
            ExprKind::Cos(a) => write!(f, "cos({a})"),
            ExprKind::Tan(a) => write!(f, "tan({a})"),
            ExprKind::Sqrt(a) => write!(f, "sqrt({a})"),
            ExprKind::Atan(a) => write!(f, "atan({a})"),
        }
    }
}

/// Central finite difference of a one-variable expression, for testing the
/// symbolic derivative against an independent route.
pub fn central_fd(e: &Expr, var: &str, at: Complex64, h: f64) -> Result<Complex64> {
    let hp = Complex64::new(h, 0.0);
    let a = e.eval1(var, at + hp)?;
    let b = e.eval1(var, at - hp)?;
    Ok((a - b) / (2.0 * h))
}
