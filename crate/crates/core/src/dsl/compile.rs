use std::sync::Arc;

use super::ast::{BinOp, Cond, Expr, Func, MapAst, Var};
use super::parser::parse;
use super::DslError;
use crate::maps::{BinaryMap, Interval, MapError, MapKind};

/// Turns a parsed map into an evaluable [`BinaryMap`] on `domain`.
///
/// Undefined operations (division by zero, square root of a negative,
/// logarithm of a non-positive number, non-finite intermediates) are
/// reported by [`BinaryMap::eval`] as evaluation errors at the offending
/// inputs.
pub fn compile(ast: MapAst, domain: Interval) -> BinaryMap {
    let ast = Arc::new(ast);
    BinaryMap::from_rule(
        domain,
        MapKind::DslCompiled,
        Arc::new(move |x, y| {
            eval_map(&ast, x, y).map_err(|reason| MapError::Evaluation {
                x,
                y,
                reason: reason.to_string(),
            })
        }),
    )
}

/// [`parse`] followed by [`compile`].
pub fn compile_source(source: &str, domain: Interval) -> Result<BinaryMap, DslError> {
    Ok(compile(parse(source)?, domain))
}

type EvalResult = Result<f64, &'static str>;

fn eval_map(ast: &MapAst, x: f64, y: f64) -> EvalResult {
    match ast {
        MapAst::Expr { body } => eval(body, x, y),
        MapAst::Piecewise { cases, otherwise } => {
            for case in cases {
                if test(&case.guard, x, y)? {
                    return eval(&case.body, x, y);
                }
            }
            eval(otherwise, x, y)
        }
    }
}

fn test(cond: &Cond, x: f64, y: f64) -> Result<bool, &'static str> {
    Ok(match cond {
        Cond::Cmp { op, left, right } => op.holds(eval(left, x, y)?, eval(right, x, y)?),
        Cond::In {
            var,
            lo,
            lo_closed,
            hi,
            hi_closed,
        } => {
            let v = match var {
                Var::X => x,
                Var::Y => y,
            };
            let (lo, hi) = (eval(lo, x, y)?, eval(hi, x, y)?);
            let above = if *lo_closed { v >= lo } else { v > lo };
            let below = if *hi_closed { v <= hi } else { v < hi };
            above && below
        }
        Cond::And { left, right } => test(left, x, y)? && test(right, x, y)?,
        Cond::Or { left, right } => test(left, x, y)? || test(right, x, y)?,
    })
}

fn eval(e: &Expr, x: f64, y: f64) -> EvalResult {
    let v = match e {
        Expr::Var { var: Var::X } => x,
        Expr::Var { var: Var::Y } => y,
        Expr::Num { value } => *value,
        Expr::Neg { arg } => -eval(arg, x, y)?,
        Expr::Binary { op, left, right } => {
            let (a, b) = (eval(left, x, y)?, eval(right, x, y)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div if b == 0.0 => return Err("division by zero"),
                BinOp::Div => a / b,
                BinOp::Pow => a.powf(b),
            }
        }
        Expr::Call { func, args } => {
            let a = eval(&args[0], x, y)?;
            match func {
                Func::Sqrt if a < 0.0 => return Err("square root of a negative number"),
                Func::Sqrt => a.sqrt(),
                Func::Exp => a.exp(),
                Func::Log if a <= 0.0 => return Err("logarithm of a non-positive number"),
                Func::Log => a.ln(),
                Func::Abs => a.abs(),
                Func::Min => a.min(eval(&args[1], x, y)?),
                Func::Max => a.max(eval(&args[1], x, y)?),
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err("non-finite intermediate value")
    }
}
