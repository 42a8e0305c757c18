use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => ADD,
            BinOp::Mul | BinOp::Div => MUL,
            BinOp::Pow => POW,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Func {
    Sqrt,
    Exp,
    Log,
    Abs,
    Min,
    Max,
}

impl Func {
    pub const ALL: [Func; 6] = [
        Func::Sqrt,
        Func::Exp,
        Func::Log,
        Func::Abs,
        Func::Min,
        Func::Max,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum Expr {
    Var {
        var: Var,
    },
    Num {
        value: f64,
    },
    Neg {
        arg: Box<Expr>,
    },
    Binary {
        op: BinOp,
        left: Box<Expr>,
        right: Box<Expr>,
    },
    Call {
        func: Func,
        args: Vec<Expr>,
    },
}

impl Expr {
    pub fn binary(op: BinOp, left: Expr, right: Expr) -> Expr {
        Expr::Binary {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Var { .. } | Expr::Num { .. } | Expr::Call { .. } => ATOM,
            Expr::Neg { .. } => UNARY,
            Expr::Binary { op, .. } => op.precedence(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CmpOp {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
        }
    }

    pub fn from_symbol(s: &str) -> Option<CmpOp> {
        Some(match s {
            "<" => CmpOp::Lt,
            "<=" => CmpOp::Le,
            ">" => CmpOp::Gt,
            ">=" => CmpOp::Ge,
            "==" | "=" => CmpOp::Eq,
            _ => return None,
        })
    }

    pub fn holds(self, a: f64, b: f64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum Cond {
    Cmp {
        op: CmpOp,
        left: Expr,
        right: Expr,
    },
    /// `var in [lo, hi]` with each end independently open or closed.
    In {
        var: Var,
        lo: Expr,
        lo_closed: bool,
        hi: Expr,
        hi_closed: bool,
    },
    And {
        left: Box<Cond>,
        right: Box<Cond>,
    },
    Or {
        left: Box<Cond>,
        right: Box<Cond>,
    },
}

impl Cond {
    fn precedence(&self) -> u8 {
        match self {
            Cond::Or { .. } => OR,
            Cond::And { .. } => AND,
            Cond::Cmp { .. } | Cond::In { .. } => CMP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub guard: Cond,
    pub body: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum MapAst {
    Expr { body: Expr },
    Piecewise { cases: Vec<Case>, otherwise: Expr },
}

const OR: u8 = 1;
const AND: u8 = 2;
const CMP: u8 = 3;
const ADD: u8 = 4;
const MUL: u8 = 5;
const UNARY: u8 = 6;
const POW: u8 = 7;
const ATOM: u8 = 8;

fn wrapped(f: &mut fmt::Formatter<'_>, parens: bool, inner: &dyn fmt::Display) -> fmt::Result {
    if parens {
        write!(f, "({inner})")
    } else {
        write!(f, "{inner}")
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
        })
    }
}

// Printing inserts only the parentheses the parser needs, so the output
// reparses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var { var } => write!(f, "{var}"),
            Expr::Num { value } => write!(f, "{value}"),
            Expr::Neg { arg } => {
                f.write_str("-")?;
                wrapped(f, arg.precedence() < UNARY, arg)
            }
            Expr::Binary { op, left, right } => {
                let p = op.precedence();
                // `^` is right associative and its left operand cannot be a
                // bare negation
                let (left_parens, right_parens) = if *op == BinOp::Pow {
                    (left.precedence() <= POW, right.precedence() < UNARY)
                } else {
                    (left.precedence() < p, right.precedence() <= p)
                };
                wrapped(f, left_parens, left)?;
                write!(f, " {} ", op.symbol())?;
                wrapped(f, right_parens, right)
            }
            Expr::Call { func, args } => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cond::Cmp { op, left, right } => write!(f, "{left} {} {right}", op.symbol()),
            Cond::In {
                var,
                lo,
                lo_closed,
                hi,
                hi_closed,
            } => write!(
                f,
                "{var} in {}{lo}, {hi}{}",
                if *lo_closed { "[" } else { "(" },
                if *hi_closed { "]" } else { ")" }
            ),
            Cond::And { left, right } | Cond::Or { left, right } => {
                let p = self.precedence();
                let word = if p == AND { "and" } else { "or" };
                wrapped(f, left.precedence() < p, left)?;
                write!(f, " {word} ")?;
                wrapped(f, right.precedence() <= p, right)
            }
        }
    }
}

impl fmt::Display for MapAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapAst::Expr { body } => write!(f, "{body}"),
            MapAst::Piecewise { cases, otherwise } => {
                f.write_str("piecewise { ")?;
                for c in cases {
                    write!(f, "if {}: {}; ", c.guard, c.body)?;
                }
                write!(f, "else: {otherwise} }}")
            }
        }
    }
}
