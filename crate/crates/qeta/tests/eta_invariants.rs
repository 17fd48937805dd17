//! Randomized structural invariants of certified eta-quotients.
//!
//! Exponent vectors drawn as 24 times a zero-sum integer vector satisfy all
//! four modularity conditions by construction, which gives an endless supply
//! of certified quotients to probe: their cusp orders must sum to zero
//! against multiplicities (a weight-0 function has a degree-0 divisor), the
//! order at the denominator-N cusp must equal the leading exponent, and the
//! q-expansion must vanish to exactly that order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use qeta::{EtaError, EtaQuotient, SeriesValuation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// A random eta-quotient whose exponents are 24 times a zero-sum vector:
/// certified by construction.
fn random_certified(level: u64, rng: &mut ChaCha8Rng) -> EtaQuotient {
    let divs = divisors(level);
    loop {
        let mut exponents: Vec<(u64, i64)> = Vec::new();
        let mut total = 0i64;
        for &d in &divs[..divs.len() - 1] {
            let v = rng.gen_range(-3i64..=3);
            total += v;
            exponents.push((d, 24 * v));
        }
        exponents.push((*divs.last().unwrap(), -24 * total));
        let quotient = EtaQuotient::new(level, exponents).expect("divisors of the level");
        if !quotient.exponents().is_empty() {
            return quotient;
        }
    }
}

fn check_invariants(quotient: &EtaQuotient) {
    let cert = quotient.certify_modular();
    assert!(cert.passes(), "construction guarantees certification: {:?}", quotient.exponents());

    let table = quotient.order_table().expect("certified quotient has an order table");
    assert!(
        table.weighted_sum().is_zero(),
        "orders weighted by multiplicities must sum to zero, got {} for {:?}",
        table.weighted_sum(),
        quotient.exponents()
    );

    let lead = quotient.leading_exponent();
    let at_infinity = table
        .order_at_denominator(quotient.level())
        .expect("the denominator-N cusp is always present");
    assert_eq!(&lead, at_infinity, "leading exponent must be the order at denominator N");

    // expansions vanish to exactly the leading order, when one exists
    assert!(lead.is_integer());
    let lead_int = lead.to_integer();
    if lead_int >= BigInt::zero() {
        let shift: usize = u64::try_from(lead_int).expect("small lead") as usize;
        let series = quotient.q_expansion(shift + 10).expect("integral nonnegative lead");
        assert_eq!(series.valuation(), SeriesValuation::Exponent(shift));
    } else {
        assert!(matches!(
            quotient.q_expansion(10),
            Err(EtaError::NegativeLeadingExponent)
        ));
    }
}

#[test]
fn randomized_certified_quotients_hold_the_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260822);
    for level in [6u64, 12, 18, 36] {
        for _ in 0..20 {
            check_invariants(&random_certified(level, &mut rng));
        }
    }
}

#[test]
fn products_of_certified_quotients_stay_certified() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for level in [6u64, 12, 18, 36] {
        for _ in 0..5 {
            let a = random_certified(level, &mut rng);
            let b = random_certified(level, &mut rng);
            let merged: Vec<(u64, i64)> = a
                .exponents()
                .iter()
                .map(|(&d, &r)| (d, r))
                .chain(b.exponents().iter().map(|(&d, &r)| (d, r)))
                .collect();
            let product = EtaQuotient::new(level, merged).unwrap();
            if product.exponents().is_empty() {
                continue; // b happened to be the inverse of a
            }
            check_invariants(&product);
        }
    }
}

#[test]
fn lifts_preserve_certification_and_the_degree_zero_divisor() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let base = random_certified(6, &mut rng);
        for target in [12u64, 18, 36] {
            let lifted = base.lift_level(target).expect("6 divides the target");
            check_invariants(&lifted);
        }
    }
}

#[test]
fn named_atoms_tie_leading_exponent_to_the_infinity_cusp() {
    let f = EtaQuotient::new(18, [(9, 1), (18, 1), (1, -1), (2, -1)]).unwrap();
    let a = EtaQuotient::new(6, [(3, 4), (6, 4), (1, -4), (2, -4)]).unwrap();
    let one = BigRational::from_integer(BigInt::from(1));
    for (quotient, level) in [(f, 18u64), (a, 6u64)] {
        assert_eq!(quotient.leading_exponent(), one);
        let table = quotient.order_table().unwrap();
        assert_eq!(table.order_at_denominator(level), Some(&one));
        assert!(table.weighted_sum().is_zero());
    }
}
