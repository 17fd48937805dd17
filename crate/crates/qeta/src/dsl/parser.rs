//! Recursive-descent parser for the job language.
//!
//! Grammar (whitespace-insensitive, `#` comments to end of line):
//!
//! ```text
//! program   := stmt*
//! stmt      := "let" NAME "=" expr "@" "level" INT
//!            | "assert" assertion
//! assertion := "modular" "(" NAME ")"
//!            | "orders" "(" NAME ")" "==" "[" rational ("," rational)* "]"
//!            | "congruence" NAME "base" INT "alpha" INT "upto" INT
//!            | expr "==" expr "to" INT "terms"
//! expr      := term (("*" | "/") term)*
//! term      := base ("^" ["-"] INT)?
//! base      := "eta" "(" INT "z" ")" | NAME | INT | "(" expr ")"
//!            | "U" INT "(" expr ")"
//! rational  := ["-"] INT ["/" INT]
//! ```
//!
//! The first syntax error aborts the parse with a positioned [`Diagnostic`].
//! Unbound names are a matter for execution, not parsing. Parenthesized
//! expressions may nest at most [`MAX_DEPTH`] levels, which keeps arbitrary
//! inputs from exhausting the stack.

use super::ast::{Assertion, Expr, Program, RationalLit, Stmt};
use super::token::{tokenize, Diagnostic, Token, TokenKind};

/// Maximum nesting depth for parenthesized and `U`-operator expressions.
pub const MAX_DEPTH: usize = 64;

struct Parser {
    tokens: Vec<Token>,
    index: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.index.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let token = self.peek().clone();
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        token
    }

    fn fail(&self, expected: &str) -> Diagnostic {
        let token = self.peek();
        Diagnostic::new(
            token.line,
            token.column,
            format!("expected {expected}, found {}", token.kind.describe()),
            match &token.kind {
                TokenKind::Ident(s) => s.clone(),
                TokenKind::Int(n) => n.to_string(),
                other => other.describe().trim_matches('\'').to_string(),
            },
        )
    }

    fn expect(&mut self, kind: &TokenKind, expected: &str) -> Result<Token, Diagnostic> {
        if &self.peek().kind == kind {
            Ok(self.bump())
        } else {
            Err(self.fail(expected))
        }
    }

    fn expect_int(&mut self, expected: &str) -> Result<u64, Diagnostic> {
        match self.peek().kind {
            TokenKind::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.fail(expected)),
        }
    }

    fn expect_name(&mut self, expected: &str) -> Result<String, Diagnostic> {
        match &self.peek().kind {
            TokenKind::Ident(name) => {
                let name = name.clone();
                self.bump();
                Ok(name)
            }
            _ => Err(self.fail(expected)),
        }
    }

    fn program(&mut self) -> Result<Program, Diagnostic> {
        let mut statements = Vec::new();
        loop {
            match self.peek().kind {
                TokenKind::Eof => break,
                TokenKind::KwLet => statements.push(self.let_stmt()?),
                TokenKind::KwAssert => statements.push(self.assert_stmt()?),
                _ => return Err(self.fail("'let' or 'assert'")),
            }
        }
        Ok(Program { statements })
    }

    fn let_stmt(&mut self) -> Result<Stmt, Diagnostic> {
        self.expect(&TokenKind::KwLet, "'let'")?;
        let name = self.expect_name("a binding name")?;
        self.expect(&TokenKind::Assign, "'='")?;
        let expr = self.expr(0)?;
        self.expect(&TokenKind::At, "'@'")?;
        self.expect(&TokenKind::KwLevel, "'level'")?;
        let level = self.expect_int("a level")?;
        Ok(Stmt::Let { name, expr, level })
    }

    fn assert_stmt(&mut self) -> Result<Stmt, Diagnostic> {
        self.expect(&TokenKind::KwAssert, "'assert'")?;
        let assertion = match self.peek().kind {
            TokenKind::KwModular => {
                self.bump();
                self.expect(&TokenKind::LParen, "'('")?;
                let name = self.expect_name("a binding name")?;
                self.expect(&TokenKind::RParen, "')'")?;
                Assertion::Modular { name }
            }
            TokenKind::KwOrders => {
                self.bump();
                self.expect(&TokenKind::LParen, "'('")?;
                let name = self.expect_name("a binding name")?;
                self.expect(&TokenKind::RParen, "')'")?;
                self.expect(&TokenKind::EqEq, "'=='")?;
                self.expect(&TokenKind::LBracket, "'['")?;
                let mut expected = vec![self.rational()?];
                while self.peek().kind == TokenKind::Comma {
                    self.bump();
                    expected.push(self.rational()?);
                }
                self.expect(&TokenKind::RBracket, "']'")?;
                Assertion::Orders { name, expected }
            }
            TokenKind::KwCongruence => {
                self.bump();
                let name = self.expect_name("a binding name")?;
                self.expect(&TokenKind::KwBase, "'base'")?;
                let base = self.expect_int("a base")?;
                self.expect(&TokenKind::KwAlpha, "'alpha'")?;
                let alpha = self.expect_int("an exponent")?;
                let alpha = u32::try_from(alpha).map_err(|_| self.fail("a small exponent"))?;
                self.expect(&TokenKind::KwUpto, "'upto'")?;
                let upto = self.expect_int("an index bound")?;
                Assertion::Congruence { name, base, alpha, upto }
            }
            _ => {
                let lhs = self.expr(0)?;
                self.expect(&TokenKind::EqEq, "'=='")?;
                let rhs = self.expr(0)?;
                self.expect(&TokenKind::KwTo, "'to'")?;
                let terms = self.expect_int("a term count")?;
                self.expect(&TokenKind::KwTerms, "'terms'")?;
                Assertion::Identity { lhs, rhs, terms }
            }
        };
        Ok(Stmt::Assert(assertion))
    }

    fn rational(&mut self) -> Result<RationalLit, Diagnostic> {
        let negative = if self.peek().kind == TokenKind::Minus {
            self.bump();
            true
        } else {
            false
        };
        let numer = self.expect_int("a rational")?;
        let numer = i64::try_from(numer).map_err(|_| self.fail("a smaller numerator"))?;
        let numer = if negative { -numer } else { numer };
        let denom = if self.peek().kind == TokenKind::Slash {
            self.bump();
            let d = self.expect_int("a denominator")?;
            if d == 0 {
                return Err(self.fail("a nonzero denominator"));
            }
            d
        } else {
            1
        };
        Ok(RationalLit { numer, denom })
    }

    fn expr(&mut self, depth: usize) -> Result<Expr, Diagnostic> {
        let mut lhs = self.term(depth)?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Star => TokenKind::Star,
                TokenKind::Slash => TokenKind::Slash,
                _ => break,
            };
            self.bump();
            let rhs = self.term(depth)?;
            lhs = if op == TokenKind::Star {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self, depth: usize) -> Result<Expr, Diagnostic> {
        let base = self.base(depth)?;
        if self.peek().kind != TokenKind::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if self.peek().kind == TokenKind::Minus {
            self.bump();
            true
        } else {
            false
        };
        let magnitude = self.expect_int("an exponent")?;
        let exponent = i64::try_from(magnitude).map_err(|_| self.fail("a smaller exponent"))?;
        Ok(Expr::Pow(Box::new(base), if negative { -exponent } else { exponent }))
    }

    fn base(&mut self, depth: usize) -> Result<Expr, Diagnostic> {
        if depth >= MAX_DEPTH {
            return Err(self.fail("a shallower expression (nesting limit reached)"));
        }
        match self.peek().kind.clone() {
            TokenKind::KwEta => {
                self.bump();
                self.expect(&TokenKind::LParen, "'('")?;
                let delta = self.expect_int("a divisor")?;
                self.expect(&TokenKind::KwZ, "'z'")?;
                self.expect(&TokenKind::RParen, "')'")?;
                Ok(Expr::Eta { delta })
            }
            TokenKind::KwU => {
                self.bump();
                let p = self.expect_int("an operator order")?;
                self.expect(&TokenKind::LParen, "'('")?;
                let inner = self.expr(depth + 1)?;
                self.expect(&TokenKind::RParen, "')'")?;
                Ok(Expr::U { p, inner: Box::new(inner) })
            }
            TokenKind::Ident(name) => {
                self.bump();
                Ok(Expr::Name(name))
            }
            TokenKind::Int(n) => {
                self.bump();
                Ok(Expr::Number(n))
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.expr(depth + 1)?;
                self.expect(&TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.fail("an expression")),
        }
    }
}

/// Parse a complete job file.
pub fn parse_program(source: &str) -> Result<Program, Diagnostic> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, index: 0 };
    parser.program()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_reference_job() {
        let source = "\
# bindings
let F = eta(9z)*eta(18z)/(eta(1z)*eta(2z)) @ level 18
let A = eta(3z)^4*eta(6z)^4/(eta(1z)^4*eta(2z)^4) @ level 6
assert modular(F)
assert orders(A) == [-1, -1, 1, 1]
assert U3(F) == 3*A to 200 terms
";
        let program = parse_program(source).unwrap();
        assert_eq!(program.statements.len(), 5);
        match &program.statements[0] {
            Stmt::Let { name, level, .. } => {
                assert_eq!(name, "F");
                assert_eq!(*level, 18);
            }
            other => panic!("expected let, got {other:?}"),
        }
        match &program.statements[4] {
            Stmt::Assert(Assertion::Identity { terms, .. }) => assert_eq!(*terms, 200),
            other => panic!("expected identity assertion, got {other:?}"),
        }
    }

    #[test]
    fn parses_congruence_assertion() {
        let program =
            parse_program("assert congruence C base 3 alpha 2 upto 1000").unwrap();
        assert_eq!(
            program.statements[0],
            Stmt::Assert(Assertion::Congruence {
                name: "C".into(),
                base: 3,
                alpha: 2,
                upto: 1000,
            })
        );
    }

    #[test]
    fn parses_rationals_in_orders() {
        let program = parse_program("assert orders(X) == [-1/2, 3, -4]").unwrap();
        match &program.statements[0] {
            Stmt::Assert(Assertion::Orders { expected, .. }) => {
                assert_eq!(
                    expected,
                    &vec![
                        RationalLit { numer: -1, denom: 2 },
                        RationalLit { numer: 3, denom: 1 },
                        RationalLit { numer: -4, denom: 1 },
                    ]
                );
            }
            other => panic!("expected orders assertion, got {other:?}"),
        }
    }

    #[test]
    fn diagnostic_points_at_the_problem() {
        let err = parse_program("let F = eta(9z * @").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.column, 16);
        assert!(err.message.contains("expected ')'"), "{err}");
        assert_eq!(err.token, "*");
    }

    #[test]
    fn negative_exponents_parse() {
        let program = parse_program("let C = eta(1z)^-1*eta(2z)^-1 @ level 2").unwrap();
        match &program.statements[0] {
            Stmt::Let { expr, .. } => {
                assert_eq!(
                    expr,
                    &Expr::Mul(
                        Box::new(Expr::Pow(Box::new(Expr::Eta { delta: 1 }), -1)),
                        Box::new(Expr::Pow(Box::new(Expr::Eta { delta: 2 }), -1)),
                    )
                );
            }
            other => panic!("expected let, got {other:?}"),
        }
    }

    #[test]
    fn nesting_limit_is_enforced() {
        let mut source = String::from("let X = ");
        source.push_str(&"(".repeat(200));
        source.push('1');
        source.push_str(&")".repeat(200));
        source.push_str(" @ level 1");
        let err = parse_program(&source).unwrap_err();
        assert!(err.message.contains("nesting limit"), "{err}");
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let err = parse_program("assert modular(F) extra").unwrap_err();
        assert!(err.message.contains("expected 'let' or 'assert'"), "{err}");
    }

    #[test]
    fn print_parse_round_trip_on_reference_job() {
        let source = "\
let F = eta(9z)*eta(18z)/(eta(1z)*eta(2z)) @ level 18
assert U3(F) == 3*F to 50 terms
assert orders(F) == [-1, -1, 0, 0, 1, 1]
";
        let program = parse_program(source).unwrap();
        let printed = program.to_string();
        let reparsed = parse_program(&printed).unwrap();
        assert_eq!(program, reparsed, "printed form:\n{printed}");
    }
}
