//! A small job language for scripting verifications.
//!
//! A job file is a sequence of `let` bindings and `assert` statements:
//!
//! ```text
//! # bind two level-normalized eta-quotients
//! let F = eta(9z)*eta(18z)/(eta(1z)*eta(2z)) @ level 18
//! let A = eta(3z)^4*eta(6z)^4/(eta(1z)^4*eta(2z)^4) @ level 6
//!
//! assert modular(F)
//! assert orders(F) == [-1, -1, 0, 0, 1, 1]
//! assert U3(F) == 3*A to 200 terms
//! ```
//!
//! [`parse_program`] turns source text into a [`Program`] or a positioned
//! [`Diagnostic`]; [`execute_program`] runs it and returns one
//! [`VerificationReport`](crate::report::VerificationReport) per assertion.

mod ast;
mod exec;
mod parser;
mod token;

pub use ast::{Assertion, Expr, Program, RationalLit, Stmt};
pub use exec::execute_program;
pub use parser::{parse_program, MAX_DEPTH};
pub use token::Diagnostic;
