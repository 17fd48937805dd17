//! Syntax tree for the job language, with a pretty-printer whose output
//! reparses to a structurally identical tree.

use std::fmt;

/// An eta-quotient / series expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// `eta(DELTAz)`: one Dedekind eta factor at argument `delta * z`.
    Eta { delta: u64 },
    /// Reference to a `let` binding.
    Name(String),
    /// Integer scalar.
    Number(u64),
    /// `U P(inner)`: coefficient extraction along multiples of `p`.
    U { p: u64, inner: Box<Expr> },
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// `base ^ exponent`; the exponent may be negative.
    Pow(Box<Expr>, i64),
}

/// Exact rational literal in an `orders` assertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalLit {
    pub numer: i64,
    /// Always at least 1; plain integers carry denominator 1.
    pub denom: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assertion {
    /// `assert modular(NAME)`: the four weight-0 modularity conditions.
    Modular { name: String },
    /// `assert orders(NAME) == [r, r, ...]`: full cusp-order table equality.
    Orders { name: String, expected: Vec<RationalLit> },
    /// `assert congruence NAME base B alpha A upto M`: scan the raw product
    /// series of the named quotient along the progression of the family.
    Congruence { name: String, base: u64, alpha: u32, upto: u64 },
    /// `assert LHS == RHS to N terms`: coefficientwise series equality.
    Identity { lhs: Expr, rhs: Expr, terms: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Let { name: String, expr: Expr, level: u64 },
    Assert(Assertion),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub statements: Vec<Stmt>,
}

// Printing precedence: 1 = product chain, 2 = power operand, 3 = atom.
// A child is parenthesized when its own level is below what its slot needs;
// right operands of * and / need level 2 so that re-parsing (left-
// associative) rebuilds the same tree.
fn write_expr(f: &mut fmt::Formatter<'_>, expr: &Expr, min_level: u8) -> fmt::Result {
    let level = match expr {
        Expr::Mul(..) | Expr::Div(..) => 1,
        Expr::Pow(..) => 2,
        Expr::Eta { .. } | Expr::Name(_) | Expr::Number(_) | Expr::U { .. } => 3,
    };
    if level < min_level {
        write!(f, "(")?;
        write_expr(f, expr, 1)?;
        return write!(f, ")");
    }
    match expr {
        Expr::Eta { delta } => write!(f, "eta({delta}z)"),
        Expr::Name(name) => write!(f, "{name}"),
        Expr::Number(n) => write!(f, "{n}"),
        Expr::U { p, inner } => {
            write!(f, "U{p}(")?;
            write_expr(f, inner, 1)?;
            write!(f, ")")
        }
        Expr::Mul(lhs, rhs) => {
            write_expr(f, lhs, 1)?;
            write!(f, "*")?;
            write_expr(f, rhs, 2)
        }
        Expr::Div(lhs, rhs) => {
            write_expr(f, lhs, 1)?;
            write!(f, "/")?;
            write_expr(f, rhs, 2)
        }
        Expr::Pow(base, exponent) => {
            write_expr(f, base, 3)?;
            write!(f, "^{exponent}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, 1)
    }
}

impl fmt::Display for RationalLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Modular { name } => write!(f, "modular({name})"),
            Assertion::Orders { name, expected } => {
                write!(f, "orders({name}) == [")?;
                for (i, r) in expected.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, "]")
            }
            Assertion::Congruence { name, base, alpha, upto } => {
                write!(f, "congruence {name} base {base} alpha {alpha} upto {upto}")
            }
            Assertion::Identity { lhs, rhs, terms } => {
                write!(f, "{lhs} == {rhs} to {terms} terms")
            }
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Let { name, expr, level } => write!(f, "let {name} = {expr} @ level {level}"),
            Stmt::Assert(a) => write!(f, "assert {a}"),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for stmt in &self.statements {
            writeln!(f, "{stmt}")?;
        }
        Ok(())
    }
}
