//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := unary ('^' integer)?
//! unary  := '-'? atom
//! atom   := number | 'i' | identifier | func '(' expr ')' | '(' expr ')'
//! func   := exp | log | sin | cos | tan | sqrt | atan
//! ```
//!
//! Numbers are decimal with an optional exponent; whitespace is
//! insignificant. Only the declared variable names are accepted as
//! identifiers.

use num_complex::Complex64;

use super::{Expr, ExprKind};
use crate::error::{Error, Result, Span};

const FUNCS: [&str; 7] = ["exp", "log", "sin", "cos", "tan", "sqrt", "atan"];

/// Parse a one-variable expression.
pub fn parse_expression(text: &str, variable_name: &str) -> Result<Expr> {
    parse_expression_vars(text, &[variable_name])
}

/// Parse an expression over the given variable names (graph mode uses two).
pub fn parse_expression_vars(text: &str, variables: &[&str]) -> Result<Expr> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        vars: variables,
        src: text,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    text: &'a [u8],
    src: &'a str,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let start = self.pos;
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                self.skip_ws();
                let rhs = self.term()?;
                lhs = Expr::with_span(
                    ExprKind::Add(Box::new(lhs), Box::new(rhs)),
                    (start, self.pos),
                );
            } else if self.eat(b'-') {
                self.skip_ws();
                let rhs = self.term()?;
                lhs = Expr::with_span(
                    ExprKind::Sub(Box::new(lhs), Box::new(rhs)),
                    (start, self.pos),
                );
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let start = self.pos;
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                let rhs = self.factor()?;
                lhs = Expr::with_span(
                    ExprKind::Mul(Box::new(lhs), Box::new(rhs)),
                    (start, self.pos),
                );
            } else if self.eat(b'/') {
                self.skip_ws();
                let rhs = self.factor()?;
                lhs = Expr::with_span(
                    ExprKind::Div(Box::new(lhs), Box::new(rhs)),
                    (start, self.pos),
                );
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let start = self.pos;
        let base = self.unary()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let n = self.integer()?;
            Ok(Expr::with_span(
                ExprKind::PowInt(Box::new(base), n),
                (start, self.pos),
            ))
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let start = self.pos;
        if self.eat(b'-') {
            self.skip_ws();
            let a = self.atom()?;
            Ok(Expr::with_span(
                ExprKind::Neg(Box::new(a)),
                (start, self.pos),
            ))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.identifier();
                if name == "i" {
                    return Ok(Expr::with_span(
                        ExprKind::Const(Complex64::new(0.0, 1.0)),
                        (start, self.pos),
                    ));
                }
                if FUNCS.contains(&name.as_str()) {
                    return self.func_call(&name, start);
                }
                if self.vars.iter().any(|v| *v == name) {
                    return Ok(Expr::with_span(ExprKind::Var(name), (start, self.pos)));
                }
                Err(Error::UnknownIdentifier {
                    name,
                    offset: start,
                })
            }
            Some(_) => Err(self.syntax("expected number, identifier, or `(`")),
        }
    }

    fn func_call(&mut self, name: &str, start: usize) -> Result<Expr> {
        self.skip_ws();
        if !self.eat(b'(') {
            return Err(Error::ArityMismatch {
                func: name.to_string(),
                offset: self.pos,
                msg: "expected parenthesized argument".to_string(),
            });
        }
        self.skip_ws();
        if self.peek() == Some(b')') {
            return Err(Error::ArityMismatch {
                func: name.to_string(),
                offset: self.pos,
                msg: "takes exactly one argument, got none".to_string(),
            });
        }
        let arg = self.expr()?;
        self.skip_ws();
        if self.peek() == Some(b',') {
            return Err(Error::ArityMismatch {
                func: name.to_string(),
                offset: self.pos,
                msg: "takes exactly one argument".to_string(),
            });
        }
        if !self.eat(b')') {
            return Err(self.syntax("expected `)`"));
        }
        let kind = match name {
            "exp" => ExprKind::Exp(Box::new(arg)),
            "log" => ExprKind::Log(Box::new(arg)),
            "sin" => ExprKind::Sin(Box::new(arg)),
            "cos" => ExprKind::Cos(Box::new(arg)),
            "tan" => ExprKind::Tan(Box::new(arg)),
            "sqrt" => ExprKind::Sqrt(Box::new(arg)),
            "atan" => ExprKind::Atan(Box::new(arg)),
            _ => unreachable!("func table covers all names"),
        };
        Ok(Expr::with_span(kind, (start, self.pos)))
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .map(|c| c.is_ascii_alphanumeric() || c == b'_')
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        self.src[start..self.pos].to_string()
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if self.eat(b'.') {
            while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                self.pos += 1;
            }
        }
        if self.pos == start || &self.src[start..self.pos] == "." {
            return Err(self.syntax("malformed number"));
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            let digits_start = self.pos;
            while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                self.pos += 1;
            }
            if self.pos == digits_start {
                // Not an exponent after all (e.g. a following identifier);
                // numbers and identifiers never abut in the grammar, so this
                // is malformed input.
                self.pos = mark;
                return Err(self.syntax("malformed exponent"));
            }
        }
        let lit = &self.src[start..self.pos];
        let value: f64 = lit
            .parse()
            .map_err(|_| self.syntax("malformed number"))?;
        let span: Span = (start, self.pos);
        Ok(Expr::with_span(
            ExprKind::Const(Complex64::new(value, 0.0)),
            span,
        ))
    }

    fn integer(&mut self) -> Result<i32> {
        let start = self.pos;
        let negative = self.eat(b'-');
        let digits_start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.syntax("expected integer exponent"));
        }
        let lit = &self.src[digits_start..self.pos];
        let mag: i64 = lit.parse().map_err(|_| Error::Syntax {
            offset: start,
            msg: "integer exponent out of range".to_string(),
        })?;
        let signed = if negative { -mag } else { mag };
        i32::try_from(signed).map_err(|_| Error::Syntax {
            offset: start,
            msg: "integer exponent out of range".to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn whitespace_insignificant() {
        let a = parse_expression("1 + 2 * w", "w").unwrap();
        let b = parse_expression("1+2*w", "w").unwrap();
        let p = c(0.4, -1.2);
        assert_eq!(a.eval1("w", p).unwrap(), b.eval1("w", p).unwrap());
    }

    #[test]
    fn precedence_mul_over_add() {
        let e = parse_expression("1+2*3", "w").unwrap();
        assert_eq!(e.eval1("w", c(0.0, 0.0)).unwrap(), c(7.0, 0.0));
    }

    #[test]
    fn pow_binds_to_unary_per_grammar() {
        // factor := unary ('^' integer)?, so -w^2 parses as (-w)^2.
        let e = parse_expression("-2^2", "w").unwrap();
        assert_eq!(e.eval1("w", c(0.0, 0.0)).unwrap(), c(4.0, 0.0));
    }

    #[test]
    fn scientific_numbers() {
        let e = parse_expression("2.5e-1 + 1e2", "w").unwrap();
        assert_eq!(e.eval1("w", c(0.0, 0.0)).unwrap(), c(100.25, 0.0));
    }

    #[test]
    fn syntax_error_reports_offset() {
        match parse_expression("1 + * 2", "w") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_reports_offset() {
        match parse_expression("1 + q", "w") {
            Err(Error::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "q");
                assert_eq!(offset, 4);
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn arity_mismatch_cases() {
        assert!(matches!(
            parse_expression("sin", "w"),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse_expression("sin()", "w"),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse_expression("atan(w, w)", "w"),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn fractional_exponent_rejected() {
        assert!(matches!(
            parse_expression("w^2.5", "w"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn trailing_input_rejected() {
        assert!(matches!(
            parse_expression("w)", "w"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn two_variable_mode() {
        let e = parse_expression_vars("x^2 + y^2", &["x", "y"]).unwrap();
        let v = e.eval(&[("x", c(3.0, 0.0)), ("y", c(4.0, 0.0))]).unwrap();
        assert_eq!(v, c(25.0, 0.0));
        // `y` is unknown in one-variable mode.
        assert!(matches!(
            parse_expression("x^2 + y^2", "x"),
            Err(Error::UnknownIdentifier { .. })
        ));
    }
}
