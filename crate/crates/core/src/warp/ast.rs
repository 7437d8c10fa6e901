use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Min,
    Max,
    Abs,
    Log,
    Exp,
    Pow,
    Clamp,
}

impl Function {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "min" => Function::Min,
            "max" => Function::Max,
            "abs" => Function::Abs,
            "log" => Function::Log,
            "exp" => Function::Exp,
            "pow" => Function::Pow,
            "clamp" => Function::Clamp,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Function::Min => "min",
            Function::Max => "max",
            Function::Abs => "abs",
            Function::Log => "log",
            Function::Exp => "exp",
            Function::Pow => "pow",
            Function::Clamp => "clamp",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Function::Abs | Function::Log | Function::Exp => 1,
            Function::Min | Function::Max | Function::Pow => 2,
            Function::Clamp => 3,
        }
    }
}

/// Expression tree over the single free variable `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var,
    Number(f64),
    Neg(Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Function, Vec<Expr>),
}

impl Expr {
    /// Evaluate with `f` bound to `f_hz`. Errors carry a short reason.
    pub(crate) fn eval(&self, f_hz: f64) -> Result<f64, String> {
        let value = match self {
            Expr::Var => f_hz,
            Expr::Number(v) => *v,
            Expr::Neg(inner) => -inner.eval(f_hz)?,
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.eval(f_hz)?;
                let b = rhs.eval(f_hz)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err("division by zero".into());
                        }
                        a / b
                    }
                    BinaryOp::Pow => a.powf(b),
                }
            }
            Expr::Call(func, args) => {
                let mut vals = [0.0; 3];
                for (slot, arg) in vals.iter_mut().zip(args) {
                    *slot = arg.eval(f_hz)?;
                }
                match func {
                    Function::Min => vals[0].min(vals[1]),
                    Function::Max => vals[0].max(vals[1]),
                    Function::Abs => vals[0].abs(),
                    Function::Log => {
                        if vals[0] <= 0.0 {
                            return Err(format!("log of non-positive value {}", vals[0]));
                        }
                        vals[0].ln()
                    }
                    Function::Exp => vals[0].exp(),
                    Function::Pow => vals[0].powf(vals[1]),
                    Function::Clamp => {
                        let (x, lo, hi) = (vals[0], vals[1], vals[2]);
                        if lo > hi {
                            return Err(format!("clamp bounds reversed ({lo} > {hi})"));
                        }
                        x.clamp(lo, hi)
                    }
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(format!("non-finite intermediate result ({value})"))
        }
    }
}

/// Canonical form: every compound sub-expression is parenthesised, so the
/// printed text re-parses to the same tree regardless of precedence rules.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => f.write_str("f"),
            Expr::Number(v) if *v < 0.0 => write!(f, "(-{:?})", -v),
            Expr::Number(v) => write!(f, "{v:?}"),
            Expr::Neg(inner) => write!(f, "(-{inner})"),
            Expr::Binary(op, lhs, rhs) => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                f.write_str(")")
            }
        }
    }
}
