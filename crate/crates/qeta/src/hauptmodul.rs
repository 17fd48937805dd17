//! Polynomial decomposition in a degree-one generator and rigorous identity
//! verification from cusp-order bounds.
//!
//! On a genus-zero group, a holomorphic modular function with a single simple
//! pole (a hauptmodul `t`) generates the full function field: any function
//! holomorphic away from the pole of `t` is a polynomial in `t`. This module
//! works with the q-expansion side of that picture. Given a series `t` with
//! valuation exactly 1, [`decompose`] peels any series with nonnegative
//! valuation into `c_0 + c_1 t + c_2 t^2 + ...` by matching coefficients from
//! the bottom up; because `t` is unitriangular in the coefficient lattice,
//! integer series decompose with integer coefficients.
//!
//! [`rigorous_pole_bound`] turns a table of cusp-order lower bounds into a
//! finite verification budget: a weight-0 modular function whose divisor is
//! bounded below by the table, and whose q-expansion vanishes past that
//! budget, is identically zero. [`verify_identity_rigorous`] applies this to
//! the difference of two candidate expansions, upgrading a finite coefficient
//! check into an identity of modular functions.
//!
//! [`sigma_from_power_sums`] and [`newton_recurrence_check`] handle the
//! elementary-symmetric-function side: from the first three power sums of a
//! triple, recover the candidate `sigma_1, sigma_2, sigma_3`, then confirm
//! the implied linear recurrence across a whole family of decompositions.

use crate::eta::CuspOrderTable;
use crate::report::{ReportTables, ValuationRow, VerificationReport};
use crate::series::{SeriesError, SeriesValuation, TruncatedSeries};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HauptError {
    #[error("generator must be normalized: valuation 1 with leading coefficient 1")]
    GeneratorNotNormalized,
    #[error("residual does not vanish: first mismatch at exponent {exponent}")]
    ResidualMismatch { exponent: usize },
    #[error("decomposition requires exact (integer-backed) series")]
    ExactRequired,
    #[error("precision {precision} does not exceed the degree bound {degree_bound}")]
    PrecisionBelowDegree { degree_bound: usize, precision: usize },
    #[error("polynomial evaluation produced non-integer coefficients from an integer series")]
    NonIntegralEvaluation,
    #[error("power-sum list must contain at least {needed} polynomials, found {found}")]
    TooFewPolynomials { needed: usize, found: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A polynomial with exact rational coefficients, `coeffs[k]` multiplying
/// `x^k`. Trailing zeros are trimmed; the zero polynomial has no
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HauptPolynomial {
    coeffs: Vec<BigRational>,
}

impl HauptPolynomial {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        HauptPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        HauptPolynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn add(&self, other: &HauptPolynomial) -> HauptPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &HauptPolynomial) -> HauptPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &HauptPolynomial) -> HauptPolynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, factor: &BigRational) -> HauptPolynomial {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }
}

/// Write `series` as a polynomial of degree at most `degree_bound` in
/// `generator`, which must be normalized: valuation exactly 1 with leading
/// coefficient 1, so that `generator^j = q^j + higher`. The coefficients
/// `c_0 .. c_D` are solved by peeling this unitriangular system from `q^0`
/// upward; because the system is unitriangular over the integers, an integer
/// series always yields integer coefficients.
///
/// After peeling, the residual `series - sum c_j generator^j` must vanish
/// through the joint precision of the inputs; the first nonzero exponent
/// otherwise is reported as [`HauptError::ResidualMismatch`]. Both inputs
/// must know strictly more than `degree_bound` coefficients.
pub fn decompose(
    series: &TruncatedSeries,
    generator: &TruncatedSeries,
    degree_bound: usize,
) -> Result<HauptPolynomial, HauptError> {
    let series_ints = series.exact_coeffs().ok_or(HauptError::ExactRequired)?;
    let gen_ints = generator.exact_coeffs().ok_or(HauptError::ExactRequired)?;
    let normalized = matches!(generator.valuation(), SeriesValuation::Exponent(1))
        && gen_ints[1].is_one();
    if !normalized {
        return Err(HauptError::GeneratorNotNormalized);
    }
    let precision = series.precision().min(generator.precision());
    if precision <= degree_bound {
        return Err(HauptError::PrecisionBelowDegree { degree_bound, precision });
    }

    let mut residual: Vec<BigInt> = series_ints[..precision].to_vec();
    let mut coeffs: Vec<BigRational> = Vec::with_capacity(degree_bound + 1);
    // power = generator^k, dense through the joint precision
    let mut power: Vec<BigInt> = vec![BigInt::one()];
    for k in 0..=degree_bound {
        // unitriangular: generator^k = q^k + higher, so c_k is read off directly
        let c = residual[k].clone();
        if !c.is_zero() {
            for (idx, p) in power.iter().enumerate().take(precision) {
                if !p.is_zero() {
                    residual[idx] -= &c * p;
                }
            }
            debug_assert!(residual[k].is_zero());
        }
        coeffs.push(BigRational::from_integer(c));
        if k < degree_bound {
            power = convolve_prefix(&power, &gen_ints[..precision], precision);
        }
    }
    if let Some(exponent) = residual.iter().position(|r| !r.is_zero()) {
        return Err(HauptError::ResidualMismatch { exponent });
    }
    Ok(HauptPolynomial::new(coeffs))
}

fn convolve_prefix(a: &[BigInt], b: &[BigInt], cap: usize) -> Vec<BigInt> {
    let len = (a.len() + b.len() - 1).min(cap);
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// Evaluate `poly` at `argument` (a series), returning an exact series at the
/// argument's precision. The inputs must be exact; if the polynomial has
/// rational coefficients the result must still come out integral, otherwise
/// [`HauptError::NonIntegralEvaluation`] is returned.
pub fn evaluate_poly(
    poly: &HauptPolynomial,
    argument: &TruncatedSeries,
) -> Result<TruncatedSeries, HauptError> {
    let arg_ints = argument.exact_coeffs().ok_or(HauptError::ExactRequired)?;
    let precision = argument.precision();
    // Horner over rationals with a shared denominator: scale by the lcm of
    // the coefficient denominators, accumulate in BigInt, divide at the end.
    let mut lcm = BigInt::one();
    for c in poly.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let scaled: Vec<BigInt> = poly
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut acc = vec![BigInt::zero(); precision];
    for c in scaled.iter().rev() {
        // acc = acc * argument + c
        let mut next = vec![BigInt::zero(); precision];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in arg_ints.iter().enumerate().take(precision - i) {
                if b.is_zero() {
                    continue;
                }
                next[i + j] += a * b;
            }
        }
        next[0] += c;
        acc = next;
    }
    let mut out = Vec::with_capacity(precision);
    for v in acc {
        let (q, r) = v.div_rem(&lcm);
        if !r.is_zero() {
            return Err(HauptError::NonIntegralEvaluation);
        }
        out.push(q);
    }
    Ok(TruncatedSeries::from_coeffs(out)?)
}

/// The number of initial q-expansion coefficients that pin down a weight-0
/// modular function whose cusp orders are bounded below by `bounds`: one plus
/// the total pole budget `sum_cusps multiplicity * max(0, -bound)`, with
/// fractional bounds rounded up to the next integer pole count.
///
/// If such a function vanishes to this order at the cusp of denominator 1,
/// its divisor would have positive degree, which is impossible; so checking
/// this many coefficients of a difference proves an identity.
pub fn rigorous_pole_bound(bounds: &CuspOrderTable) -> usize {
    let mut budget = BigRational::zero();
    for (cusp, order) in bounds.entries() {
        if order.is_negative() {
            let mult = BigRational::from_integer(BigInt::from(cusp.multiplicity));
            budget += mult * (-order.clone());
        }
    }
    let total = budget.ceil().to_integer().to_usize().unwrap_or(usize::MAX);
    1 + total
}

/// Compare two expansions through the verification budget implied by
/// `bounds`. Both series must know at least `rigorous_pole_bound(bounds)`
/// coefficients; agreement through that bound proves the underlying modular
/// functions are equal, so the report's `checked` is the bound itself.
pub fn verify_identity_rigorous(
    task: &str,
    lhs: &TruncatedSeries,
    rhs: &TruncatedSeries,
    bounds: &CuspOrderTable,
) -> Result<VerificationReport, HauptError> {
    let needed = rigorous_pole_bound(bounds);
    let report = match lhs.first_difference(rhs, needed)? {
        None => VerificationReport::pass(task, needed as u64),
        Some(index) => {
            let value = lhs
                .coeff(index)
                .map(|c| c.to_string())
                .unwrap_or_default();
            VerificationReport::fail(task, index as u64, index as u64, value)
        }
    };
    Ok(report)
}

/// Candidate elementary symmetric functions recovered from power sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTriple {
    pub sigma1: HauptPolynomial,
    pub sigma2: HauptPolynomial,
    pub sigma3: HauptPolynomial,
    /// True when all three polynomials have integer coefficients; reported,
    /// not enforced.
    pub integral: bool,
}

/// Recover `sigma_1, sigma_2, sigma_3` from the first three power sums
/// `p_1, p_2, p_3` of an (unknown) triple via the inverse Newton identities:
///
/// `e_1 = p_1`, `e_2 = (e_1 p_1 - p_2) / 2`, `e_3 = (e_2 p_1 - e_1 p_2 + p_3) / 3`.
///
/// All arithmetic is over exact rationals; `integral` records whether the
/// divisions came out integral.
pub fn sigma_from_power_sums(
    p1: &HauptPolynomial,
    p2: &HauptPolynomial,
    p3: &HauptPolynomial,
) -> SigmaTriple {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let e1 = p1.clone();
    let e2 = e1.mul(p1).sub(p2).scale(&half);
    let e3 = e2.mul(p1).sub(&e1.mul(p2)).add(p3).scale(&third);
    let integral = e1.is_integral() && e2.is_integral() && e3.is_integral();
    SigmaTriple { sigma1: e1, sigma2: e2, sigma3: e3, integral }
}

/// Check the linear recurrence
/// `f_i = sigma_1 f_(i-1) - sigma_2 f_(i-2) + sigma_3 f_(i-3)`
/// for `4 <= i <= i_max` over a family of polynomials `polys[i]` indexed from
/// `i = 0` (so `polys` must have length at least `i_max + 1` when
/// `i_max >= 4`). Polynomial arithmetic is exact; the first failing index is
/// reported as a violation with the offending difference's lowest nonzero
/// coefficient. An `i_max <= 3` check passes vacuously with `checked = 0`.
pub fn newton_recurrence_check(
    task: &str,
    sigma: &SigmaTriple,
    polys: &[HauptPolynomial],
    i_max: usize,
) -> Result<VerificationReport, HauptError> {
    if i_max <= 3 {
        return Ok(VerificationReport::pass(task, 0));
    }
    if polys.len() < i_max + 1 {
        return Err(HauptError::TooFewPolynomials { needed: i_max + 1, found: polys.len() });
    }
    let mut checked = 0u64;
    for i in 4..=i_max {
        let predicted = sigma.sigma1.mul(&polys[i - 1])
            .sub(&sigma.sigma2.mul(&polys[i - 2]))
            .add(&sigma.sigma3.mul(&polys[i - 3]));
        let diff = polys[i].sub(&predicted);
        if !diff.is_zero() {
            let (k, value) = diff
                .coeffs()
                .iter()
                .enumerate()
                .find(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.to_string()))
                .expect("nonzero polynomial has a nonzero coefficient");
            return Ok(VerificationReport::fail(task, checked, i as u64, format!("x^{k}: {value}")));
        }
        checked += 1;
    }
    Ok(VerificationReport::pass(task, checked))
}

/// Table of `p`-adic valuations of polynomial coefficients: row `i` holds the
/// minimum valuation over the coefficients of `polys[i]`, or `None` for the
/// zero polynomial (valuation infinite).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationTable {
    pub prime: u64,
    pub rows: Vec<Option<u64>>,
}

impl ValuationTable {
    pub fn report_rows(&self) -> Vec<ValuationRow> {
        self.rows
            .iter()
            .enumerate()
            .map(|(index, v)| ValuationRow { index: index as u64, valuation: *v })
            .collect()
    }
}

fn int_valuation(n: &BigInt, prime: &BigInt) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let mut v = 0u64;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(prime);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        n = q;
    }
}

/// Minimum `prime`-adic valuation of each polynomial's coefficients.
/// Polynomials must be integral; rational coefficients are rejected.
pub fn coefficient_valuations(
    polys: &[HauptPolynomial],
    prime: u64,
) -> Result<ValuationTable, HauptError> {
    let p = BigInt::from(prime);
    let mut rows = Vec::with_capacity(polys.len());
    for poly in polys {
        if !poly.is_integral() {
            return Err(HauptError::NonIntegralEvaluation);
        }
        let min = poly
            .coeffs()
            .iter()
            .filter_map(|c| int_valuation(c.numer(), &p))
            .min();
        rows.push(min);
    }
    Ok(ValuationTable { prime, rows })
}

/// Attach a valuation table to a passing report, for downstream rendering.
pub fn report_with_valuations(report: VerificationReport, table: &ValuationTable) -> VerificationReport {
    report.with_tables(ReportTables {
        valuations: Some(table.report_rows()),
        ..ReportTables::default()
    })
}
