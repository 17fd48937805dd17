//! Executor for parsed job programs.
//!
//! `let` bindings are recorded, not evaluated: every assertion re-evaluates
//! what it needs at its own precision, so a binding is just a named
//! expression with a declared level. Name references resolve to the latest
//! binding that appears strictly earlier in the program, which makes
//! definition cycles impossible and lets later bindings shadow earlier ones.
//!
//! Eta-expressions fold to exact exponent maps whenever they contain no `U`
//! operator, so modularity, order, and congruence assertions never see a
//! truncation. Identity assertions materialize series: a folded subtree
//! expands exactly; a `U p(...)` subtree evaluates its operand with `p`
//! times the precision so the extraction still delivers full coverage.
//!
//! Every assertion yields one [`VerificationReport`]; executor-level
//! problems (unbound names, level mismatches, non-quotient operands) become
//! reports with error status rather than halting the run.

use super::ast::{Assertion, Expr, Program, RationalLit, Stmt};
use crate::congruence::{verify_congruence_family, CongruenceError, CongruenceFamily};
use crate::eta::{certification_report, order_rows, EtaError, EtaQuotient};
use crate::report::{ReportTables, VerificationReport};
use crate::series::{SeriesError, TruncatedSeries};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
enum ExecError {
    #[error("name '{0}' is not bound")]
    Unbound(String),
    #[error("binding '{name}' is at level {bound}, which does not divide level {context}")]
    LevelMismatch { name: String, bound: u64, context: u64 },
    #[error("'{0}' does not denote an eta-quotient (it involves the U operator)")]
    NotAQuotient(String),
    #[error("congruence assertions need an unscaled eta-quotient; '{name}' carries the factor {scalar}")]
    ScaledQuotient { name: String, scalar: String },
    #[error("congruence base must be 3 (cubic family) or 5 (Watson family), got {0}")]
    UnsupportedBase(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot divide by a series with zero constant term")]
    NonUnitDivisor,
    #[error("scalar {0} does not keep the coefficients integral")]
    NonIntegralScalar(String),
    #[error("exponent {0} is too large")]
    ExponentTooLarge(u64),
    #[error(transparent)]
    Eta(#[from] EtaError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
}

/// A binding as written: expression plus declared level, index implicit in
/// the vector position.
struct Binding {
    name: String,
    expr: Expr,
    level: u64,
}

/// An eta-expression folded to exact form: a rational scalar times a product
/// of eta factors given by an exponent map.
#[derive(Clone, Debug)]
struct FoldedQuotient {
    scalar: BigRational,
    exponents: BTreeMap<u64, i64>,
}

impl FoldedQuotient {
    fn number(n: u64) -> Self {
        FoldedQuotient {
            scalar: BigRational::from_integer(BigInt::from(n)),
            exponents: BTreeMap::new(),
        }
    }

    fn mul_assign(&mut self, other: &FoldedQuotient) {
        self.scalar *= &other.scalar;
        for (&delta, &r) in &other.exponents {
            *self.exponents.entry(delta).or_insert(0) += r;
        }
        self.exponents.retain(|_, r| *r != 0);
    }

    fn invert(&self) -> Result<FoldedQuotient, ExecError> {
        if self.scalar.is_zero() {
            return Err(ExecError::DivisionByZero);
        }
        Ok(FoldedQuotient {
            scalar: self.scalar.recip(),
            exponents: self.exponents.iter().map(|(&d, &r)| (d, -r)).collect(),
        })
    }

    fn pow(&self, exponent: i64) -> Result<FoldedQuotient, ExecError> {
        let magnitude = u64::from(exponent.unsigned_abs());
        let exp_i32 = i32::try_from(exponent).map_err(|_| ExecError::ExponentTooLarge(magnitude))?;
        if self.scalar.is_zero() && exponent < 0 {
            return Err(ExecError::DivisionByZero);
        }
        let scalar = if self.scalar.is_zero() && exponent == 0 {
            BigRational::one()
        } else if self.scalar.is_zero() {
            BigRational::zero()
        } else {
            self.scalar.pow(exp_i32)
        };
        Ok(FoldedQuotient {
            scalar,
            exponents: self
                .exponents
                .iter()
                .filter_map(|(&d, &r)| {
                    let scaled = r.checked_mul(exponent)?;
                    (scaled != 0).then_some((d, scaled))
                })
                .collect(),
        })
    }
}

struct Executor {
    bindings: Vec<Binding>,
    default_precision: usize,
}

impl Executor {
    fn new(default_precision: usize) -> Self {
        Executor { bindings: Vec::new(), default_precision: default_precision.max(1) }
    }

    /// Latest binding named `name` that appears strictly before `before`.
    fn resolve(&self, name: &str, before: usize) -> Result<(usize, &Binding), ExecError> {
        self.bindings[..before.min(self.bindings.len())]
            .iter()
            .enumerate()
            .rev()
            .find(|(_, b)| b.name == name)
            .ok_or_else(|| ExecError::Unbound(name.to_string()))
            .map(|(i, b)| (i, b))
    }

    /// Fold an expression to scalar-times-exponent-map form. `context_level`
    /// is the level the result must live at (name references must divide
    /// it); `None` skips level validation, for series work where only the
    /// exponent map matters. `before` bounds name resolution.
    fn fold_quotient(
        &self,
        expr: &Expr,
        context_level: Option<u64>,
        before: usize,
    ) -> Result<FoldedQuotient, ExecError> {
        match expr {
            Expr::Eta { delta } => {
                if let Some(level) = context_level {
                    if *delta == 0 || level % *delta != 0 {
                        return Err(EtaError::NonDivisorDelta { delta: *delta, level }.into());
                    }
                }
                Ok(FoldedQuotient {
                    scalar: BigRational::one(),
                    exponents: BTreeMap::from([(*delta, 1)]),
                })
            }
            Expr::Number(n) => Ok(FoldedQuotient::number(*n)),
            Expr::Name(name) => {
                let (index, binding) = self.resolve(name, before)?;
                if let Some(level) = context_level {
                    if level % binding.level != 0 {
                        return Err(ExecError::LevelMismatch {
                            name: name.clone(),
                            bound: binding.level,
                            context: level,
                        });
                    }
                }
                // fold the referenced expression at its own declared level
                self.fold_quotient(&binding.expr, context_level.map(|_| binding.level), index)
            }
            Expr::U { .. } => Err(ExecError::NotAQuotient(expr.to_string())),
            Expr::Mul(lhs, rhs) => {
                let mut folded = self.fold_quotient(lhs, context_level, before)?;
                folded.mul_assign(&self.fold_quotient(rhs, context_level, before)?);
                Ok(folded)
            }
            Expr::Div(lhs, rhs) => {
                let mut folded = self.fold_quotient(lhs, context_level, before)?;
                folded.mul_assign(&self.fold_quotient(rhs, context_level, before)?.invert()?);
                Ok(folded)
            }
            Expr::Pow(base, exponent) => {
                self.fold_quotient(base, context_level, before)?.pow(*exponent)
            }
        }
    }

    /// Materialize the quotient bound to `name` at its declared level.
    fn quotient_binding(&self, name: &str, before: usize) -> Result<(EtaQuotient, BigRational), ExecError> {
        let (index, binding) = self.resolve(name, before)?;
        let folded = self
            .fold_quotient(&binding.expr, Some(binding.level), index)
            .map_err(|e| match e {
                ExecError::NotAQuotient(_) => ExecError::NotAQuotient(name.to_string()),
                other => other,
            })?;
        let quotient = EtaQuotient::new(binding.level, folded.exponents.iter().map(|(&d, &r)| (d, r)))?;
        Ok((quotient, folded.scalar))
    }

    /// Evaluate an expression as a truncated series with at least `precision`
    /// known coefficients.
    fn eval_series(
        &self,
        expr: &Expr,
        precision: usize,
        before: usize,
    ) -> Result<TruncatedSeries, ExecError> {
        // U-free subtrees expand exactly from their exponent map
        if let Ok(folded) = self.fold_quotient(expr, None, before) {
            return self.expand_folded(&folded, precision);
        }
        match expr {
            Expr::U { p, inner } => {
                if *p < 2 {
                    return Err(SeriesError::UOperatorOrder.into());
                }
                let p = usize::try_from(*p).map_err(|_| ExecError::ExponentTooLarge(u64::MAX))?;
                let inner_precision = p
                    .checked_mul(precision)
                    .and_then(|v| v.checked_add(p))
                    .ok_or(ExecError::ExponentTooLarge(p as u64))?;
                let series = self.eval_series(inner, inner_precision, before)?;
                Ok(series.u_p(p)?)
            }
            Expr::Name(name) => {
                let (index, binding) = self.resolve(name, before)?;
                self.eval_series(&binding.expr, precision, index)
            }
            Expr::Mul(lhs, rhs) => {
                let lhs = self.eval_series(lhs, precision, before)?;
                let rhs = self.eval_series(rhs, precision, before)?;
                Ok(lhs.mul(&rhs)?)
            }
            Expr::Div(lhs, rhs) => {
                let lhs = self.eval_series(lhs, precision, before)?;
                let rhs = self.eval_series(rhs, precision, before)?;
                let inverse = rhs.invert().map_err(|e| match e {
                    SeriesError::NonUnitConstant => ExecError::NonUnitDivisor,
                    other => other.into(),
                })?;
                Ok(lhs.mul(&inverse)?)
            }
            Expr::Pow(base, exponent) => {
                let base = self.eval_series(base, precision, before)?;
                if *exponent < 0 && !matches!(base.valuation(), crate::series::SeriesValuation::Exponent(0)) {
                    return Err(ExecError::NonUnitDivisor);
                }
                Ok(base.pow(*exponent)?)
            }
            // fold_quotient only fails on these via unbound names or division
            // problems, which the arms above re-surface; Eta and Number alone
            // always fold.
            Expr::Eta { .. } | Expr::Number(_) => {
                self.fold_quotient(expr, None, before).and_then(|f| self.expand_folded(&f, precision))
            }
        }
    }

    fn expand_folded(
        &self,
        folded: &FoldedQuotient,
        precision: usize,
    ) -> Result<TruncatedSeries, ExecError> {
        if folded.exponents.is_empty() {
            let scalar = integral_scalar(&folded.scalar)?;
            let constant = TruncatedSeries::one(precision)?;
            return Ok(constant.scalar_mul(&scalar));
        }
        let level = folded.exponents.keys().fold(1u64, |acc, &d| acc.lcm(&d));
        let quotient = EtaQuotient::new(level, folded.exponents.iter().map(|(&d, &r)| (d, r)))?;
        let series = quotient.q_expansion(precision)?;
        if folded.scalar.is_one() {
            return Ok(series);
        }
        Ok(series
            .scalar_mul_rational(folded.scalar.numer(), folded.scalar.denom())
            .map_err(|e| match e {
                SeriesError::NonIntegralScalar => {
                    ExecError::NonIntegralScalar(folded.scalar.to_string())
                }
                other => other.into(),
            })?)
    }

    fn run_assertion(&self, assertion: &Assertion, before: usize) -> VerificationReport {
        let task = assertion.to_string();
        match self.try_assertion(assertion, before) {
            Ok(report) => report,
            Err(err) => VerificationReport::error(task, err.to_string()),
        }
    }

    fn try_assertion(
        &self,
        assertion: &Assertion,
        before: usize,
    ) -> Result<VerificationReport, ExecError> {
        let task = assertion.to_string();
        match assertion {
            Assertion::Modular { name } => {
                let (quotient, _) = self.quotient_binding(name, before)?;
                Ok(certification_report(task, &quotient.certify_modular()))
            }
            Assertion::Orders { name, expected } => {
                let (quotient, _) = self.quotient_binding(name, before)?;
                let table = quotient.order_table()?;
                let tables =
                    ReportTables { orders: Some(order_rows(&table)), ..ReportTables::default() };
                let got = table.orders();
                let want: Vec<BigRational> = expected.iter().map(rational_from_lit).collect();
                let report = if got == want {
                    VerificationReport::pass(task, got.len() as u64)
                } else if got.len() != want.len() {
                    VerificationReport::fail(
                        task,
                        0,
                        want.len() as u64,
                        format!("table has {} entries, expected {}", got.len(), want.len()),
                    )
                } else {
                    let (index, value) = got
                        .iter()
                        .zip(&want)
                        .enumerate()
                        .find(|(_, (g, w))| g != w)
                        .map(|(i, (g, _))| (i, g.to_string()))
                        .expect("tables differ");
                    VerificationReport::fail(task, index as u64, index as u64, value)
                };
                Ok(report.with_tables(tables))
            }
            Assertion::Congruence { name, base, alpha, upto } => {
                let family = match base {
                    3 => CongruenceFamily::cubic(*alpha)?,
                    5 => CongruenceFamily::watson(*alpha)?,
                    other => return Err(ExecError::UnsupportedBase(*other)),
                };
                let (quotient, scalar) = self.quotient_binding(name, before)?;
                if !scalar.is_one() {
                    return Err(ExecError::ScaledQuotient {
                        name: name.clone(),
                        scalar: scalar.to_string(),
                    });
                }
                let index_max = usize::try_from(*upto).unwrap_or(usize::MAX / 2);
                let series = quotient.raw_product_series_mod(index_max + 1, family.divisor)?;
                let inner = verify_congruence_family(&series, &family, index_max)?;
                // keep the job-file task label, preserve the verdict
                Ok(VerificationReport { task, ..inner })
            }
            Assertion::Identity { lhs, rhs, terms } => {
                // a stated count of 0 defers to the run-wide default
                let stated = usize::try_from(*terms).unwrap_or(usize::MAX / 2);
                let terms = if stated == 0 { self.default_precision } else { stated };
                let lhs_series = self.eval_series(lhs, terms, before)?;
                let rhs_series = self.eval_series(rhs, terms, before)?;
                let mut l = lhs_series;
                let mut r = rhs_series;
                // align backends when one side was reduced and the other not
                match (l.modulus(), r.modulus()) {
                    (Some(m), None) => r = r.reduce_mod(m)?,
                    (None, Some(m)) => l = l.reduce_mod(m)?,
                    _ => {}
                }
                let report = match l.first_difference(&r, terms)? {
                    None => VerificationReport::pass(task, terms as u64),
                    Some(index) => {
                        let value = l
                            .coeff(index)
                            .map(|c| c.to_string())
                            .unwrap_or_default();
                        VerificationReport::fail(task, index as u64, index as u64, value)
                    }
                };
                Ok(report)
            }
        }
    }
}

fn integral_scalar(scalar: &BigRational) -> Result<BigInt, ExecError> {
    if !scalar.is_integer() {
        return Err(ExecError::NonIntegralScalar(scalar.to_string()));
    }
    Ok(scalar.to_integer())
}

fn rational_from_lit(lit: &RationalLit) -> BigRational {
    BigRational::new(BigInt::from(lit.numer), BigInt::from(lit.denom))
}

/// Execute a parsed program: record bindings, run assertions in textual
/// order, one report per assertion. Failures and errors do not stop later
/// assertions.
pub fn execute_program(program: &Program, default_precision: usize) -> Vec<VerificationReport> {
    let mut executor = Executor::new(default_precision);
    let mut reports = Vec::new();
    for stmt in &program.statements {
        match stmt {
            Stmt::Let { name, expr, level } => {
                executor.bindings.push(Binding {
                    name: name.clone(),
                    expr: expr.clone(),
                    level: *level,
                });
            }
            Stmt::Assert(assertion) => {
                let before = executor.bindings.len();
                reports.push(executor.run_assertion(assertion, before));
            }
        }
    }
    reports
}
