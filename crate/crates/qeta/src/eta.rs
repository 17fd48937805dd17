//! Eta-quotients on Gamma_0(N): certification, cusp orders, expansions.
//!
//! An [`EtaQuotient`] is an exponent map `delta -> r_delta` over divisors of
//! the level N, standing for `prod_{delta | N} eta(delta z)^(r_delta)`. The
//! module certifies modularity for weight-0 quotients, computes the order at
//! every cusp of Gamma_0(N) from the exponent map alone, produces exact
//! q-expansions, and propagates cusp-order lower bounds through the operator
//! `U_3` from level 18 to level 6.
//!
//! Orders at cusps come from the exponent map by a finite rational formula,
//! so they are exact; expansions are series with the fractional prefactor
//! `q^(sum delta r_delta / 24)` made explicit. [`EtaQuotient::q_expansion`]
//! refuses quotients whose prefactor exponent is not a nonnegative integer.

use crate::report::{ConditionRow, OrderRow, ReportTables, VerificationReport};
use crate::series::{eta_product_series, eta_product_series_mod, SeriesError, TruncatedSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EtaError {
    #[error("level must be at least 1")]
    ZeroLevel,
    #[error("delta {delta} does not divide the level {level}")]
    NonDivisorDelta { delta: u64, level: u64 },
    #[error("cusp denominator {denominator} does not divide the level {level}")]
    CuspDenominator { denominator: u64, level: u64 },
    #[error("leading exponent is not an integer")]
    NonIntegralLeadingExponent,
    #[error("leading exponent is negative")]
    NegativeLeadingExponent,
    #[error("precision {precision} does not reach past the leading exponent {leading}")]
    PrecisionBelowLeadingExponent { leading: u64, precision: usize },
    #[error("order table is at level {found}, expected level {expected}")]
    WrongLevel { expected: u64, found: u64 },
    #[error("level {from} does not divide the target level {to}")]
    NotLiftable { from: u64, to: u64 },
    #[error("order tables cover different levels")]
    TableLevelMismatch,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A cusp representative `numerator/denominator` of Gamma_0(N), together with
/// the number of inequivalent cusps sharing this denominator. Cusps with the
/// same denominator have the same order for every eta-quotient, so one
/// representative carries the whole class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cusp {
    pub numerator: u64,
    pub denominator: u64,
    pub multiplicity: u64,
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut pk = 1;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// One representative per cusp denominator `d | level`, ordered by `d`.
/// The representative is `0` for `d = 1` and `1/d` otherwise (the least
/// positive numerator coprime to `d`); `multiplicity` is `phi(gcd(d, N/d))`,
/// the number of inequivalent cusps with that denominator. The multiplicities
/// sum to the cusp count of Gamma_0(N).
pub fn cusp_set(level: u64) -> Result<Vec<Cusp>, EtaError> {
    if level == 0 {
        return Err(EtaError::ZeroLevel);
    }
    Ok(divisors(level)
        .into_iter()
        .map(|d| Cusp {
            numerator: if d == 1 { 0 } else { 1 },
            denominator: d,
            multiplicity: euler_phi(gcd(d, level / d)),
        })
        .collect())
}

/// Orders of one eta-quotient at every cusp of its level, one entry per
/// denominator, ordered by denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspOrderTable {
    level: u64,
    entries: Vec<(Cusp, BigRational)>,
}

impl CuspOrderTable {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn entries(&self) -> &[(Cusp, BigRational)] {
        &self.entries
    }

    pub fn order_at_denominator(&self, denominator: u64) -> Option<&BigRational> {
        self.entries
            .iter()
            .find(|(c, _)| c.denominator == denominator)
            .map(|(_, o)| o)
    }

    /// Orders listed by increasing denominator.
    pub fn orders(&self) -> Vec<BigRational> {
        self.entries.iter().map(|(_, o)| o.clone()).collect()
    }

    /// Sum of `multiplicity * order` over all cusps; zero for any weight-0
    /// quotient (the degree of a function's divisor vanishes).
    pub fn weighted_sum(&self) -> BigRational {
        self.entries
            .iter()
            .map(|(c, o)| BigRational::from_integer(BigInt::from(c.multiplicity)) * o)
            .sum()
    }

    /// Entrywise minimum of two tables at the same level: a valid lower-bound
    /// table for a sum or difference of functions with these bounds.
    pub fn pointwise_min(&self, other: &CuspOrderTable) -> Result<CuspOrderTable, EtaError> {
        if self.level != other.level {
            return Err(EtaError::TableLevelMismatch);
        }
        let entries = self
            .entries
            .iter()
            .map(|(c, o)| {
                let o2 = other
                    .order_at_denominator(c.denominator)
                    .ok_or(EtaError::TableLevelMismatch)?;
                Ok((c.clone(), o.min(o2).clone()))
            })
            .collect::<Result<Vec<_>, EtaError>>()?;
        Ok(CuspOrderTable { level: self.level, entries })
    }

    pub fn from_entries(level: u64, entries: Vec<(Cusp, BigRational)>) -> Self {
        CuspOrderTable { level, entries }
    }
}

/// Outcome of the four modularity conditions for a weight-0 eta-quotient.
/// `product` is `prod delta^(r_delta)` as an exact rational; the quotient is
/// modular on Gamma_0(level) iff all four conditions hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certification {
    /// `(1/2) sum r_delta = 0`.
    pub weight_zero: bool,
    /// `sum delta r_delta = 0 (mod 24)`.
    pub delta_sum_divisible: bool,
    /// `sum (level/delta) r_delta = 0 (mod 24)`.
    pub complement_sum_divisible: bool,
    /// `prod delta^(r_delta)` is the square of a rational.
    pub product_is_square: bool,
    /// The product `prod delta^(r_delta)`, exactly.
    pub product: BigRational,
}

impl Certification {
    pub fn passes(&self) -> bool {
        self.weight_zero
            && self.delta_sum_divisible
            && self.complement_sum_divisible
            && self.product_is_square
    }
}

/// `prod_{delta | level} eta(delta z)^(r_delta)` as an exponent map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl EtaQuotient {
    /// Build a quotient at `level` from `(delta, exponent)` pairs. Every
    /// `delta` must divide the level; repeated deltas accumulate, zero
    /// exponents are dropped.
    pub fn new(level: u64, exponents: impl IntoIterator<Item = (u64, i64)>) -> Result<Self, EtaError> {
        if level == 0 {
            return Err(EtaError::ZeroLevel);
        }
        let mut map: BTreeMap<u64, i64> = BTreeMap::new();
        for (delta, r) in exponents {
            if delta == 0 || level % delta != 0 {
                return Err(EtaError::NonDivisorDelta { delta, level });
            }
            *map.entry(delta).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotient { level, exponents: map })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    pub fn exponent(&self, delta: u64) -> i64 {
        self.exponents.get(&delta).copied().unwrap_or(0)
    }

    /// Modular weight `(1/2) sum r_delta`.
    pub fn weight(&self) -> BigRational {
        let sum: i64 = self.exponents.values().sum();
        BigRational::new(BigInt::from(sum), BigInt::from(2))
    }

    /// Exponent of the `q`-prefactor: `(1/24) sum delta r_delta`. This is the
    /// order of the quotient at the cusp of denominator `level`.
    pub fn leading_exponent(&self) -> BigRational {
        let sum: i128 = self
            .exponents
            .iter()
            .map(|(&d, &r)| d as i128 * r as i128)
            .sum();
        BigRational::new(BigInt::from(sum), BigInt::from(24))
    }

    /// Evaluate the four weight-0 modularity conditions.
    pub fn certify_modular(&self) -> Certification {
        let weight_sum: i64 = self.exponents.values().sum();
        let delta_sum: i128 = self
            .exponents
            .iter()
            .map(|(&d, &r)| d as i128 * r as i128)
            .sum();
        let complement_sum: i128 = self
            .exponents
            .iter()
            .map(|(&d, &r)| (self.level / d) as i128 * r as i128)
            .sum();

        // prime-exponent parity of prod delta^(r_delta)
        let mut prime_exponents: BTreeMap<u64, i64> = BTreeMap::new();
        let mut product = BigRational::one();
        for (&delta, &r) in &self.exponents {
            let mut n = delta;
            let mut p = 2u64;
            while p * p <= n {
                while n % p == 0 {
                    *prime_exponents.entry(p).or_insert(0) += r;
                    n /= p;
                }
                p += 1;
            }
            if n > 1 {
                *prime_exponents.entry(n).or_insert(0) += r;
            }
            let factor = BigRational::from_integer(BigInt::from(delta));
            let powed = power_rational(&factor, r);
            product *= powed;
        }
        Certification {
            weight_zero: weight_sum == 0,
            delta_sum_divisible: delta_sum.rem_euclid(24) == 0,
            complement_sum_divisible: complement_sum.rem_euclid(24) == 0,
            product_is_square: prime_exponents.values().all(|e| e % 2 == 0),
            product,
        }
    }

    /// Order of vanishing at the cusp `c/d` of Gamma_0(level):
    /// `(level/24) * sum_delta gcd(d, delta)^2 r_delta / (gcd(d, level/d) d delta)`.
    /// Depends only on the denominator `d`, never on the numerator.
    pub fn ligozat_order(&self, cusp: &Cusp) -> Result<BigRational, EtaError> {
        let d = cusp.denominator;
        if d == 0 || self.level % d != 0 {
            return Err(EtaError::CuspDenominator { denominator: d, level: self.level });
        }
        let mut sum = BigRational::zero();
        for (&delta, &r) in &self.exponents {
            let g = gcd(d, delta);
            let numer = BigInt::from(g as i128 * g as i128 * r as i128);
            let denom = BigInt::from(gcd(d, self.level / d) as i128 * d as i128 * delta as i128);
            sum += BigRational::new(numer, denom);
        }
        Ok(sum * BigRational::new(BigInt::from(self.level), BigInt::from(24)))
    }

    /// Orders at every cusp of the level, one entry per denominator.
    pub fn order_table(&self) -> Result<CuspOrderTable, EtaError> {
        let entries = cusp_set(self.level)?
            .into_iter()
            .map(|c| {
                let o = self.ligozat_order(&c)?;
                Ok((c, o))
            })
            .collect::<Result<Vec<_>, EtaError>>()?;
        Ok(CuspOrderTable { level: self.level, entries })
    }

    /// The same exponent map viewed at a multiple of the current level. The
    /// q-expansion is unchanged; cusp order tables are recomputed at the new
    /// level.
    pub fn lift_level(&self, new_level: u64) -> Result<EtaQuotient, EtaError> {
        if new_level == 0 || new_level % self.level != 0 {
            return Err(EtaError::NotLiftable { from: self.level, to: new_level });
        }
        Ok(EtaQuotient { level: new_level, exponents: self.exponents.clone() })
    }

    /// Expansion of the bare product `prod (1 - q^(delta n))^(r_delta)`,
    /// without the `q^(sum delta r / 24)` prefactor.
    pub fn raw_product_series(&self, precision: usize) -> Result<TruncatedSeries, EtaError> {
        self.raw_product_impl(precision, None)
    }

    /// [`EtaQuotient::raw_product_series`] on the residue backend.
    pub fn raw_product_series_mod(
        &self,
        precision: usize,
        modulus: u64,
    ) -> Result<TruncatedSeries, EtaError> {
        self.raw_product_impl(precision, Some(modulus))
    }

    fn raw_product_impl(
        &self,
        precision: usize,
        modulus: Option<u64>,
    ) -> Result<TruncatedSeries, EtaError> {
        let mut acc = match modulus {
            None => TruncatedSeries::one(precision)?,
            Some(m) => TruncatedSeries::one(precision)?.reduce_mod(m)?,
        };
        for (&delta, &r) in &self.exponents {
            let factor = match modulus {
                None => eta_product_series(delta as usize, r, precision)?,
                Some(m) => eta_product_series_mod(delta as usize, r, precision, m)?,
            };
            acc = acc.mul(&factor)?;
        }
        Ok(acc)
    }

    /// Exact q-expansion `q^L * prod (1 - q^(delta n))^(r_delta)` where `L`
    /// is the leading exponent, which must be a nonnegative integer. The
    /// result knows the coefficients of `q^0 .. q^(precision-1)`.
    pub fn q_expansion(&self, precision: usize) -> Result<TruncatedSeries, EtaError> {
        let lead = self.expansion_shift(precision)?;
        let product = self.raw_product_series(precision - lead)?;
        Ok(product.shifted(lead))
    }

    /// [`Self::q_expansion`] over the fixed-modulus backend.
    pub fn q_expansion_mod(
        &self,
        precision: usize,
        modulus: u64,
    ) -> Result<TruncatedSeries, EtaError> {
        let lead = self.expansion_shift(precision)?;
        let product = self.raw_product_series_mod(precision - lead, modulus)?;
        Ok(product.shifted(lead))
    }

    fn expansion_shift(&self, precision: usize) -> Result<usize, EtaError> {
        let lead = self.leading_exponent();
        if !lead.is_integer() {
            return Err(EtaError::NonIntegralLeadingExponent);
        }
        if lead.is_negative() {
            return Err(EtaError::NegativeLeadingExponent);
        }
        let lead = lead.to_integer().to_u64().expect("integral nonnegative leading exponent");
        if precision as u64 <= lead {
            return Err(EtaError::PrecisionBelowLeadingExponent { leading: lead, precision });
        }
        Ok(lead as usize)
    }
}

fn power_rational(base: &BigRational, exponent: i64) -> BigRational {
    base.pow(i32::try_from(exponent).expect("eta exponent fits in i32"))
}

/// Lower bounds for cusp orders of `U_3(f)` at level 6, from the orders of
/// `f` at level 18:
///
/// * at `0`:   `min(ord at 0, ord at 1/3)`
/// * at `1/2`: `min(ord at 1/2, ord at 1/6)`
/// * at `1/3`: `ceil((1/3) ord at 1/9)`
/// * at `1/6`: `ceil((1/3) ord at 1/18)`
///
/// The thirds are rounded up because cusp orders of modular functions are
/// integers, so the fractional bound can be tightened for free.
pub fn u3_order_bounds(table: &CuspOrderTable) -> Result<CuspOrderTable, EtaError> {
    if table.level() != 18 {
        return Err(EtaError::WrongLevel { expected: 18, found: table.level() });
    }
    let at = |d: u64| -> &BigRational {
        table.order_at_denominator(d).expect("level-18 table has all six denominators")
    };
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let bounds = [
        (1u64, at(1).min(at(3)).clone()),
        (2u64, at(2).min(at(6)).clone()),
        (3u64, (at(9) * &third).ceil()),
        (6u64, (at(18) * &third).ceil()),
    ];
    let entries = cusp_set(6)?
        .into_iter()
        .map(|c| {
            let (_, b) = bounds
                .iter()
                .find(|(d, _)| *d == c.denominator)
                .expect("level-6 denominators are 1, 2, 3, 6");
            (c, b.clone())
        })
        .collect();
    Ok(CuspOrderTable { level: 6, entries })
}

/// Render a certification as a four-row report: pass when all conditions
/// hold, otherwise a failure naming the first violated condition. The
/// product `prod delta^r` rides along as the report constant.
pub fn certification_report(task: impl Into<String>, cert: &Certification) -> VerificationReport {
    let conditions = vec![
        ConditionRow { name: "weight is zero".into(), holds: cert.weight_zero },
        ConditionRow {
            name: "sum of delta * r is divisible by 24".into(),
            holds: cert.delta_sum_divisible,
        },
        ConditionRow {
            name: "sum of (level/delta) * r is divisible by 24".into(),
            holds: cert.complement_sum_divisible,
        },
        ConditionRow {
            name: "product of delta^r is a rational square".into(),
            holds: cert.product_is_square,
        },
    ];
    let tables = ReportTables {
        conditions: Some(conditions.clone()),
        constant: Some(cert.product.to_string()),
        ..ReportTables::default()
    };
    let report = if cert.passes() {
        VerificationReport::pass(task, 4)
    } else {
        let (index, row) = conditions
            .iter()
            .enumerate()
            .find(|(_, row)| !row.holds)
            .expect("some condition failed");
        VerificationReport::fail(task, index as u64, index as u64, row.name.clone())
    };
    report.with_tables(tables)
}

/// Flatten a cusp-order table into report rows, one per cusp.
pub fn order_rows(table: &CuspOrderTable) -> Vec<OrderRow> {
    table
        .entries()
        .iter()
        .map(|(cusp, order)| OrderRow {
            denominator: cusp.denominator,
            multiplicity: cusp.multiplicity,
            order: order.to_string(),
        })
        .collect()
}
