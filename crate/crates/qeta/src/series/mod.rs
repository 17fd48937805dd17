//! Truncated formal power series with exact integer coefficients.
//!
//! A [`TruncatedSeries`] stores the first `precision` coefficients of a series
//! in `q`. Coefficients are arbitrary-precision integers by default; attaching
//! a modulus via [`TruncatedSeries::reduce_mod`] switches the value to a
//! residue backend over a machine-word modulus. Arithmetic never mixes the two
//! implicitly: binary operations require both operands exact or both reduced
//! mod the same `m`.
//!
//! Precision bookkeeping is pessimistic and explicit: binary operations return
//! the minimum operand precision, [`TruncatedSeries::dilate`] multiplies
//! precision, and [`TruncatedSeries::u_p`] keeps exactly the coefficients it
//! can know.

mod kernel;

use kernel::{invert_unit, mul_trunc, CoeffOps, ExactOps, ResidueOps};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("operands carry different moduli")]
    ModulusMismatch,
    #[error("constant term is not a unit in the coefficient ring")]
    NonUnitConstant,
    #[error("dilation factor must be at least 1")]
    ZeroDilation,
    #[error("u_p requires p >= 2")]
    UOperatorOrder,
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("modulus {requested} does not divide the attached modulus {attached}")]
    IncompatibleModulus { requested: u64, attached: u64 },
    #[error("requested precision {requested} exceeds available precision {available}")]
    InsufficientPrecision { requested: usize, available: usize },
    #[error("scalar multiplication left non-integral coefficients")]
    NonIntegralScalar,
}

/// Smallest exponent with nonzero coefficient, if one is visible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesValuation {
    /// First exponent whose coefficient is nonzero.
    Exponent(usize),
    /// Every known coefficient vanishes; the series is 0 through its precision.
    ZeroThroughPrecision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Exact(Vec<BigInt>),
    Residue { modulus: u64, coeffs: Vec<u64> },
}

/// A formal power series known through finitely many coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    repr: Repr,
}

fn reduce_to_residue(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits the modulus word")
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn mod_inverse_word(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (m as i128, (a % m) as i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_t.rem_euclid(m as i128) as u64)
}

impl TruncatedSeries {
    /// Series with the given exact coefficients; `coeffs[n]` is the
    /// coefficient of `q^n`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::ZeroPrecision);
        }
        Ok(TruncatedSeries { repr: Repr::Exact(coeffs) })
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(coeffs: &[i64]) -> Result<Self, SeriesError> {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Residue-backend series; coefficients are reduced into `0..modulus`.
    pub fn from_residues(modulus: u64, coeffs: Vec<u64>) -> Result<Self, SeriesError> {
        if modulus == 0 {
            return Err(SeriesError::ZeroModulus);
        }
        if coeffs.is_empty() {
            return Err(SeriesError::ZeroPrecision);
        }
        let coeffs = coeffs.into_iter().map(|c| c % modulus).collect();
        Ok(TruncatedSeries { repr: Repr::Residue { modulus, coeffs } })
    }

    pub fn zero(precision: usize) -> Result<Self, SeriesError> {
        if precision == 0 {
            return Err(SeriesError::ZeroPrecision);
        }
        Self::from_coeffs(vec![BigInt::zero(); precision])
    }

    pub fn one(precision: usize) -> Result<Self, SeriesError> {
        Self::monomial(BigInt::one(), 0, precision)
    }

    /// `coeff * q^exponent` known through `precision` terms.
    pub fn monomial(coeff: BigInt, exponent: usize, precision: usize) -> Result<Self, SeriesError> {
        if precision == 0 || exponent >= precision {
            return Err(SeriesError::ZeroPrecision);
        }
        let mut v = vec![BigInt::zero(); precision];
        v[exponent] = coeff;
        Self::from_coeffs(v)
    }

    /// Count of known coefficients: exponents `0..precision()` are known.
    pub fn precision(&self) -> usize {
        match &self.repr {
            Repr::Exact(v) => v.len(),
            Repr::Residue { coeffs, .. } => coeffs.len(),
        }
    }

    /// Attached modulus, or `None` for exact integer coefficients.
    pub fn modulus(&self) -> Option<u64> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Residue { modulus, .. } => Some(*modulus),
        }
    }

    /// Coefficient of `q^n`, or `None` when `n` is beyond the precision.
    /// Residue-backend coefficients come back as their canonical residue.
    pub fn coeff(&self, n: usize) -> Option<BigInt> {
        match &self.repr {
            Repr::Exact(v) => v.get(n).cloned(),
            Repr::Residue { coeffs, .. } => coeffs.get(n).map(|&c| BigInt::from(c)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Exact(v) => v.iter().all(|c| c.is_zero()),
            Repr::Residue { coeffs, .. } => coeffs.iter().all(|&c| c == 0),
        }
    }

    pub fn valuation(&self) -> SeriesValuation {
        let first = match &self.repr {
            Repr::Exact(v) => v.iter().position(|c| !c.is_zero()),
            Repr::Residue { coeffs, .. } => coeffs.iter().position(|&c| c != 0),
        };
        match first {
            Some(n) => SeriesValuation::Exponent(n),
            None => SeriesValuation::ZeroThroughPrecision,
        }
    }

    fn check_compatible(&self, rhs: &Self) -> Result<(), SeriesError> {
        match (&self.repr, &rhs.repr) {
            (Repr::Exact(_), Repr::Exact(_)) => Ok(()),
            (Repr::Residue { modulus: a, .. }, Repr::Residue { modulus: b, .. }) if a == b => Ok(()),
            _ => Err(SeriesError::ModulusMismatch),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(rhs)?;
        let n = self.precision().min(rhs.precision());
        match (&self.repr, &rhs.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => {
                let v = (0..n).map(|k| &a[k] + &b[k]).collect();
                Ok(TruncatedSeries { repr: Repr::Exact(v) })
            }
            (Repr::Residue { modulus, coeffs: a }, Repr::Residue { coeffs: b, .. }) => {
                let ops = ResidueOps { modulus: *modulus };
                let v = (0..n).map(|k| ops.add(a[k], &b[k])).collect();
                Ok(TruncatedSeries { repr: Repr::Residue { modulus: *modulus, coeffs: v } })
            }
            _ => unreachable!("compatibility checked above"),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Exact(v) => TruncatedSeries { repr: Repr::Exact(v.iter().map(|c| -c).collect()) },
            Repr::Residue { modulus, coeffs } => {
                let ops = ResidueOps { modulus: *modulus };
                let v = coeffs.iter().map(|&c| ops.sub(0, &c)).collect();
                TruncatedSeries { repr: Repr::Residue { modulus: *modulus, coeffs: v } }
            }
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(rhs)?;
        let n = self.precision().min(rhs.precision());
        match (&self.repr, &rhs.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => {
                Ok(TruncatedSeries { repr: Repr::Exact(mul_trunc(&ExactOps, a, b, n)) })
            }
            (Repr::Residue { modulus, coeffs: a }, Repr::Residue { coeffs: b, .. }) => {
                let coeffs = mul_trunc(&ResidueOps { modulus: *modulus }, a, b, n);
                Ok(TruncatedSeries { repr: Repr::Residue { modulus: *modulus, coeffs } })
            }
            _ => unreachable!("compatibility checked above"),
        }
    }

    /// Multiplicative inverse; requires the constant term to be a unit
    /// (`+/-1` exactly, or invertible modulo the attached modulus).
    pub fn invert(&self) -> Result<Self, SeriesError> {
        match &self.repr {
            Repr::Exact(v) => {
                let c0 = &v[0];
                if !(c0 == &BigInt::one() || c0 == &(-BigInt::one())) {
                    return Err(SeriesError::NonUnitConstant);
                }
                Ok(TruncatedSeries { repr: Repr::Exact(invert_unit(&ExactOps, v, c0.clone())) })
            }
            Repr::Residue { modulus, coeffs } => {
                let inv0 = mod_inverse_word(coeffs[0], *modulus).ok_or(SeriesError::NonUnitConstant)?;
                let out = invert_unit(&ResidueOps { modulus: *modulus }, coeffs, inv0);
                Ok(TruncatedSeries { repr: Repr::Residue { modulus: *modulus, coeffs: out } })
            }
        }
    }

    /// `self^exponent` by repeated squaring; negative exponents invert first,
    /// so they require a unit constant term. `f^0` is 1 at `f`'s precision.
    pub fn pow(&self, exponent: i64) -> Result<Self, SeriesError> {
        let n = self.precision();
        if exponent == 0 {
            return Self::one(n).map(|one| match &self.repr {
                Repr::Exact(_) => one,
                Repr::Residue { modulus, .. } => one.reduce_mod(*modulus).expect("modulus is valid"),
            });
        }
        let mut base = if exponent < 0 { self.invert()? } else { self.clone() };
        let mut e = exponent.unsigned_abs();
        let mut acc: Option<TruncatedSeries> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(r) => r.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.expect("exponent was nonzero"))
    }

    /// Substitute `q -> q^m`. Precision becomes `m * precision()`: every
    /// exponent that is not a multiple of `m` is known to be zero.
    pub fn dilate(&self, m: usize) -> Result<Self, SeriesError> {
        if m == 0 {
            return Err(SeriesError::ZeroDilation);
        }
        let n = self.precision();
        match &self.repr {
            Repr::Exact(v) => {
                let mut out = vec![BigInt::zero(); n * m];
                for (i, c) in v.iter().enumerate() {
                    out[i * m] = c.clone();
                }
                Ok(TruncatedSeries { repr: Repr::Exact(out) })
            }
            Repr::Residue { modulus, coeffs } => {
                let mut out = vec![0u64; n * m];
                for (i, &c) in coeffs.iter().enumerate() {
                    out[i * m] = c;
                }
                Ok(TruncatedSeries { repr: Repr::Residue { modulus: *modulus, coeffs: out } })
            }
        }
    }

    /// The operator `U_p`: coefficient of `q^n` in the result is the
    /// coefficient of `q^(p n)` in `self`. Only coefficients actually known
    /// are emitted, so the precision is `floor((precision()-1)/p) + 1`.
    pub fn u_p(&self, p: usize) -> Result<Self, SeriesError> {
        if p < 2 {
            return Err(SeriesError::UOperatorOrder);
        }
        let n = (self.precision() - 1) / p + 1;
        match &self.repr {
            Repr::Exact(v) => {
                let out = (0..n).map(|k| v[k * p].clone()).collect();
                Ok(TruncatedSeries { repr: Repr::Exact(out) })
            }
            Repr::Residue { modulus, coeffs } => {
                let out = (0..n).map(|k| coeffs[k * p]).collect();
                Ok(TruncatedSeries { repr: Repr::Residue { modulus: *modulus, coeffs: out } })
            }
        }
    }

    /// Reduce coefficients modulo `m`, switching to (or narrowing) the
    /// residue backend. An attached modulus must be divisible by `m`.
    pub fn reduce_mod(&self, m: u64) -> Result<Self, SeriesError> {
        if m == 0 {
            return Err(SeriesError::ZeroModulus);
        }
        match &self.repr {
            Repr::Exact(v) => {
                let coeffs = v.iter().map(|c| reduce_to_residue(c, m)).collect();
                Ok(TruncatedSeries { repr: Repr::Residue { modulus: m, coeffs } })
            }
            Repr::Residue { modulus, coeffs } => {
                if modulus % m != 0 {
                    return Err(SeriesError::IncompatibleModulus { requested: m, attached: *modulus });
                }
                let coeffs = coeffs.iter().map(|&c| c % m).collect();
                Ok(TruncatedSeries { repr: Repr::Residue { modulus: m, coeffs } })
            }
        }
    }

    /// Forget coefficients beyond `precision` (which must not exceed the
    /// available precision).
    pub fn truncated(&self, precision: usize) -> Result<Self, SeriesError> {
        if precision == 0 {
            return Err(SeriesError::ZeroPrecision);
        }
        if precision > self.precision() {
            return Err(SeriesError::InsufficientPrecision {
                requested: precision,
                available: self.precision(),
            });
        }
        let mut out = self.clone();
        match &mut out.repr {
            Repr::Exact(v) => v.truncate(precision),
            Repr::Residue { coeffs, .. } => coeffs.truncate(precision),
        }
        Ok(out)
    }

    /// Multiply by `q^k`. The low `k` coefficients are exactly zero, so the
    /// precision grows to `precision() + k`.
    pub fn shifted(&self, k: usize) -> Self {
        let mut out = self.clone();
        match &mut out.repr {
            Repr::Exact(v) => {
                let mut nv = vec![BigInt::zero(); k];
                nv.append(v);
                *v = nv;
            }
            Repr::Residue { coeffs, .. } => {
                let mut nv = vec![0u64; k];
                nv.append(coeffs);
                *coeffs = nv;
            }
        }
        out
    }

    /// Multiply every coefficient by the integer `c`.
    pub fn scalar_mul(&self, c: &BigInt) -> Self {
        match &self.repr {
            Repr::Exact(v) => {
                TruncatedSeries { repr: Repr::Exact(v.iter().map(|x| x * c).collect()) }
            }
            Repr::Residue { modulus, coeffs } => {
                let ops = ResidueOps { modulus: *modulus };
                let cr = reduce_to_residue(c, *modulus);
                let v = coeffs.iter().map(|x| ops.mul(x, &cr)).collect();
                TruncatedSeries { repr: Repr::Residue { modulus: *modulus, coeffs: v } }
            }
        }
    }

    /// Multiply by the rational `num/den`; every scaled coefficient must stay
    /// integral. Exact backend only.
    pub fn scalar_mul_rational(&self, num: &BigInt, den: &BigInt) -> Result<Self, SeriesError> {
        match &self.repr {
            Repr::Exact(v) => {
                let mut out = Vec::with_capacity(v.len());
                for x in v {
                    let scaled = x * num;
                    let (quot, rem) = scaled.div_rem(den);
                    if !rem.is_zero() {
                        return Err(SeriesError::NonIntegralScalar);
                    }
                    out.push(quot);
                }
                Ok(TruncatedSeries { repr: Repr::Exact(out) })
            }
            Repr::Residue { .. } => Err(SeriesError::NonIntegralScalar),
        }
    }

    /// First exponent `< through` where the two series differ, or `None` if
    /// they agree on all of `0..through`. Both must know `through` terms.
    pub fn first_difference(&self, rhs: &Self, through: usize) -> Result<Option<usize>, SeriesError> {
        self.check_compatible(rhs)?;
        let avail = self.precision().min(rhs.precision());
        if through > avail {
            return Err(SeriesError::InsufficientPrecision { requested: through, available: avail });
        }
        match (&self.repr, &rhs.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => Ok((0..through).find(|&k| a[k] != b[k])),
            (Repr::Residue { coeffs: a, .. }, Repr::Residue { coeffs: b, .. }) => {
                Ok((0..through).find(|&k| a[k] != b[k]))
            }
            _ => unreachable!("compatibility checked above"),
        }
    }

    pub(crate) fn exact_coeffs(&self) -> Option<&[BigInt]> {
        match &self.repr {
            Repr::Exact(v) => Some(v),
            Repr::Residue { .. } => None,
        }
    }
}

/// `prod_{n >= 1} (1 - q^n)` through `precision` terms: the pentagonal-number
/// expansion `sum_k (-1)^k q^(k(3k-1)/2)` over both signs of `k`.
fn euler_factor(precision: usize, modulus: Option<u64>) -> TruncatedSeries {
    match modulus {
        None => {
            let mut v = vec![BigInt::zero(); precision];
            v[0] = BigInt::one();
            let mut k = 1usize;
            loop {
                let a = k * (3 * k - 1) / 2;
                let b = k * (3 * k + 1) / 2;
                if a >= precision && b >= precision {
                    break;
                }
                let sign = if k % 2 == 1 { -BigInt::one() } else { BigInt::one() };
                if a < precision {
                    v[a] = sign.clone();
                }
                if b < precision {
                    v[b] = sign;
                }
                k += 1;
            }
            TruncatedSeries { repr: Repr::Exact(v) }
        }
        Some(m) => {
            let ops = ResidueOps { modulus: m };
            let mut v = vec![0u64; precision];
            v[0] = 1 % m;
            let minus_one = ops.sub(0, &(1 % m));
            let mut k = 1usize;
            loop {
                let a = k * (3 * k - 1) / 2;
                let b = k * (3 * k + 1) / 2;
                if a >= precision && b >= precision {
                    break;
                }
                let sign = if k % 2 == 1 { minus_one } else { 1 % m };
                if a < precision {
                    v[a] = sign;
                }
                if b < precision {
                    v[b] = sign;
                }
                k += 1;
            }
            TruncatedSeries { repr: Repr::Residue { modulus: m, coeffs: v } }
        }
    }
}

fn eta_product_impl(
    delta: usize,
    exponent: i64,
    precision: usize,
    modulus: Option<u64>,
) -> Result<TruncatedSeries, SeriesError> {
    if precision == 0 {
        return Err(SeriesError::ZeroPrecision);
    }
    if delta == 0 {
        return Err(SeriesError::ZeroDilation);
    }
    if let Some(0) = modulus {
        return Err(SeriesError::ZeroModulus);
    }
    let base_prec = precision.div_ceil(delta);
    let base = euler_factor(base_prec, modulus);
    let powered = match exponent {
        0 => base.pow(0)?,
        e if e > 0 => base.pow(e)?,
        // inverting first keeps the repeated squaring on dense operands,
        // where the subquadratic kernel applies
        e => base.invert()?.pow(-e)?,
    };
    powered.dilate(delta)?.truncated(precision)
}

/// `prod_{n >= 1} (1 - q^(delta n))^exponent` through `precision` terms,
/// with no fractional-power prefactor. Exponent `+/-1` stays on the sparse
/// pentagonal route; other exponents use repeated squaring.
pub fn eta_product_series(
    delta: usize,
    exponent: i64,
    precision: usize,
) -> Result<TruncatedSeries, SeriesError> {
    eta_product_impl(delta, exponent, precision, None)
}

/// [`eta_product_series`] on the residue backend: coefficients mod `modulus`.
pub fn eta_product_series_mod(
    delta: usize,
    exponent: i64,
    precision: usize,
    modulus: u64,
) -> Result<TruncatedSeries, SeriesError> {
    eta_product_impl(delta, exponent, precision, Some(modulus))
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote_term = false;
        for n in 0..self.precision() {
            let c = self.coeff(n).expect("within precision");
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote_term {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            match n {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag.is_one() {
                        write!(f, "q")?;
                    } else {
                        write!(f, "{mag}*q")?;
                    }
                    if n > 1 {
                        write!(f, "^{n}")?;
                    }
                }
            }
            wrote_term = true;
        }
        if wrote_term {
            write!(f, " + O(q^{})", self.precision())?;
        } else {
            write!(f, "O(q^{})", self.precision())?;
        }
        if let Some(m) = self.modulus() {
            write!(f, " (mod {m})")?;
        }
        Ok(())
    }
}
