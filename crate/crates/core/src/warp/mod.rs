//! Warp functions: text expressions mapping an input frequency `f` (Hz) to an
//! output frequency (Hz).
//!
//! ```
//! use specwarp::WarpFunction;
//!
//! let w = WarpFunction::parse("2/3*f").unwrap();
//! assert!((w.evaluate(300.0).unwrap() - 200.0).abs() < 1e-12);
//! ```
//!
//! Supported: the variable `f`, decimal/scientific literals, `+ - * / ^`,
//! unary minus, parentheses, and `min max abs log exp pow clamp`.

mod ast;
mod lexer;
mod parser;

use std::fmt;
use std::str::FromStr;

pub use ast::{BinaryOp, Expr, Function};

use crate::error::{Error, Result};

/// A parsed warp expression. Immutable; cheap to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpFunction {
    source: String,
    expr: Expr,
}

impl WarpFunction {
    pub fn parse(text: &str) -> Result<Self> {
        let expr = parser::parse_expr(text)?;
        Ok(Self {
            source: text.to_owned(),
            expr,
        })
    }

    /// The identity warp, `f`.
    pub fn identity() -> Self {
        Self {
            source: "f".into(),
            expr: Expr::Var,
        }
    }

    pub fn source_text(&self) -> &str {
        &self.source
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Fully parenthesised rendering of the expression tree.
    pub fn canonical(&self) -> String {
        self.expr.to_string()
    }

    /// Evaluate with `f` bound to `f_hz`.
    ///
    /// Division by zero, log of a non-positive value, reversed clamp bounds
    /// and any non-finite intermediate are reported as
    /// [`Error::WarpEvaluation`].
    pub fn evaluate(&self, f_hz: f64) -> Result<f64> {
        if !f_hz.is_finite() {
            return Err(Error::WarpEvaluation {
                f_hz,
                index: None,
                reason: "input frequency is not finite".into(),
            });
        }
        self.expr
            .eval(f_hz)
            .map_err(|reason| Error::WarpEvaluation {
                f_hz,
                index: None,
                reason,
            })
    }
}

impl FromStr for WarpFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for WarpFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval(text: &str, f: f64) -> f64 {
        WarpFunction::parse(text).unwrap().evaluate(f).unwrap()
    }

    #[test]
    fn linear_warp_and_its_inverse() {
        assert!((eval("2/3*f", 300.0) - 200.0).abs() < 1e-12);
        assert!((eval("3/2*f", 200.0) - 300.0).abs() < 1e-12);
        assert!((eval("2/3*f", 480.0) - 320.0).abs() < 1e-12);
        assert!((eval("2/3*f", 21.0) - 14.0).abs() < 1e-12);
    }

    #[test]
    fn identity_returns_input() {
        for f in [-12.5, 0.0, 1.0, 440.0, 7999.9] {
            assert_eq!(eval("f", f), f);
            assert_eq!(WarpFunction::identity().evaluate(f).unwrap(), f);
        }
    }

    #[test]
    fn builtin_functions() {
        assert_eq!(eval("clamp(f, 0, 4000)", 5000.0), 4000.0);
        assert_eq!(eval("clamp(f, 0, 4000)", -5.0), 0.0);
        assert_eq!(eval("min(f, 100)", 300.0), 100.0);
        assert_eq!(eval("max(f, 100)", 300.0), 300.0);
        assert_eq!(eval("abs(f)", -3.0), 3.0);
        assert_eq!(eval("pow(f, 2)", 3.0), 9.0);
        assert!((eval("exp(log(f))", 123.0) - 123.0).abs() < 1e-9);
    }

    #[test]
    fn operator_precedence() {
        assert_eq!(eval("1+2*f", 3.0), 7.0);
        assert_eq!(eval("-f^2", 3.0), -9.0);
        assert_eq!(eval("2^3^2", 0.0), 64.0);
        assert_eq!(eval("2^-1", 0.0), 0.5);
        assert_eq!(eval("10-4-3", 0.0), 3.0);
        assert_eq!(eval("8/4/2", 0.0), 1.0);
        assert_eq!(eval("-2*-f", 4.0), 8.0);
        assert_eq!(eval("(1+2)*f", 2.0), 6.0);
    }

    #[test]
    fn unknown_identifier_is_named() {
        match WarpFunction::parse("2*f+g") {
            Err(Error::UnknownIdentifier { name, position }) => {
                assert_eq!(name, "g");
                assert_eq!(position, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            WarpFunction::parse("sin(f)"),
            Err(Error::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases = [
            ("2*", 2),
            ("(f+1", 4),
            ("f f", 2),
            ("f)", 1),
            ("min(f)", 0),
            ("clamp(f, 1)", 0),
            ("abs f", 4),
            ("", 0),
            ("2**f", 2),
        ];
        for (text, pos) in cases {
            match WarpFunction::parse(text) {
                Err(Error::Syntax { position, .. }) => assert_eq!(position, pos, "{text}"),
                other => panic!("{text}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn domain_errors_carry_the_input() {
        let w = WarpFunction::parse("1/(f-100)").unwrap();
        match w.evaluate(100.0) {
            Err(Error::WarpEvaluation { f_hz, .. }) => assert_eq!(f_hz, 100.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(WarpFunction::parse("log(f)")
            .unwrap()
            .evaluate(0.0)
            .is_err());
        assert!(WarpFunction::parse("log(f)")
            .unwrap()
            .evaluate(-1.0)
            .is_err());
        assert!(WarpFunction::parse("exp(f)")
            .unwrap()
            .evaluate(1e6)
            .is_err());
        assert!(WarpFunction::parse("f^0.5")
            .unwrap()
            .evaluate(-4.0)
            .is_err());
        assert!(WarpFunction::parse("clamp(f, 5, 1)")
            .unwrap()
            .evaluate(3.0)
            .is_err());
        assert!(WarpFunction::parse("f")
            .unwrap()
            .evaluate(f64::NAN)
            .is_err());
    }

    #[test]
    fn evaluation_is_bit_reproducible() {
        let w = WarpFunction::parse("log(f)*3.7/2 + exp(-f/1000)^2").unwrap();
        for f in [1.0, 17.3, 440.0, 3999.0] {
            assert_eq!(
                w.evaluate(f).unwrap().to_bits(),
                w.evaluate(f).unwrap().to_bits()
            );
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![Just(Expr::Var), (0.0f64..1e4).prop_map(Expr::Number)];
        leaf.prop_recursive(5, 48, 3, |inner| {
            let binop = prop_oneof![
                Just(BinaryOp::Add),
                Just(BinaryOp::Sub),
                Just(BinaryOp::Mul),
                Just(BinaryOp::Div),
                Just(BinaryOp::Pow),
            ];
            let func = prop_oneof![
                Just(Function::Min),
                Just(Function::Max),
                Just(Function::Abs),
                Just(Function::Log),
                Just(Function::Exp),
                Just(Function::Pow),
                Just(Function::Clamp),
            ];
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (binop, inner.clone(), inner.clone()).prop_map(|(op, a, b)| Expr::Binary(
                    op,
                    Box::new(a),
                    Box::new(b)
                )),
                (func, prop::collection::vec(inner, 3)).prop_map(|(func, mut args)| {
                    args.truncate(func.arity());
                    Expr::Call(func, args)
                }),
            ]
        })
    }

    fn same_outcome(a: Result<f64>, b: Result<f64>) -> bool {
        match (a, b) {
            (Ok(x), Ok(y)) => x.to_bits() == y.to_bits(),
            (Err(_), Err(_)) => true,
            _ => false,
        }
    }

    proptest! {
        #[test]
        fn canonical_form_round_trips(expr in arb_expr(), fs in prop::collection::vec(-5e3f64..5e3, 20)) {
            let original = WarpFunction { source: String::new(), expr };
            let reparsed = WarpFunction::parse(&original.canonical()).unwrap();
            prop_assert_eq!(reparsed.expr(), original.expr());
            for f in fs {
                prop_assert!(same_outcome(original.evaluate(f), reparsed.evaluate(f)));
            }
        }

        #[test]
        fn precedence_matches_explicit_grouping(f in -1e4f64..1e4) {
            let pairs = [
                ("2/3*f", "(2/3)*f"),
                ("1+2*f", "1+(2*f)"),
                ("f-2/f*3", "f-((2/f)*3)"),
                ("-f^2+1", "(-(f^2))+1"),
                ("f*f-f/4+2", "((f*f)-(f/4))+2"),
            ];
            for (plain, grouped) in pairs {
                let a = WarpFunction::parse(plain).unwrap().evaluate(f);
                let b = WarpFunction::parse(grouped).unwrap().evaluate(f);
                prop_assert!(same_outcome(a, b), "{} vs {}", plain, grouped);
            }
        }

        #[test]
        fn total_over_finite_inputs(f in prop::num::f64::NORMAL | prop::num::f64::ZERO) {
            let w = WarpFunction::parse("min(max(2/3*f, -8000), 8000) + abs(f)*0").unwrap();
            prop_assert!(w.evaluate(f).is_ok());
        }
    }
}
