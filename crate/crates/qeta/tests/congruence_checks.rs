//! Partition series against brute-force enumeration, and backend agreement.

use qeta::{
    cubic_partition_series, partition_series, verify_congruence_family, verify_theorem_1_1,
    CongruenceFamily,
};

/// Unbounded-knapsack enumeration: number of multisets drawn from `parts`
/// summing to each n. Listing a part twice gives it two colors.
fn count_by_parts(parts: &[usize], n_max: usize) -> Vec<u64> {
    let mut ways = vec![0u64; n_max + 1];
    ways[0] = 1;
    for &part in parts {
        for n in part..=n_max {
            ways[n] += ways[n - part];
        }
    }
    ways
}

#[test]
fn partition_counts_match_enumeration_through_25() {
    let parts: Vec<usize> = (1..=25).collect();
    let expected = count_by_parts(&parts, 25);
    let series = partition_series(26, None).unwrap();
    for (n, want) in expected.iter().enumerate() {
        assert_eq!(
            series.coeff(n).unwrap(),
            (*want).into(),
            "p({n}) disagrees with enumeration"
        );
    }
}

#[test]
fn cubic_counts_match_enumeration_through_25() {
    // all parts once, even parts a second time (the second color)
    let parts: Vec<usize> = (1..=25).chain((1..=12).map(|k| 2 * k)).collect();
    let expected = count_by_parts(&parts, 25);
    let series = cubic_partition_series(26, None).unwrap();
    for (n, want) in expected.iter().enumerate() {
        assert_eq!(
            series.coeff(n).unwrap(),
            (*want).into(),
            "a({n}) disagrees with enumeration"
        );
    }
}

#[test]
fn residue_backend_matches_reduced_exact_series() {
    let depth = 2000;
    let exact_p = partition_series(depth, None).unwrap();
    let exact_c = cubic_partition_series(depth, None).unwrap();
    for modulus in [2u64, 3, 5, 25, 27, 243, 2187] {
        let reduced_p = exact_p.reduce_mod(modulus).unwrap();
        let direct_p = partition_series(depth, Some(modulus)).unwrap();
        assert_eq!(reduced_p.first_difference(&direct_p, depth).unwrap(), None);

        let reduced_c = exact_c.reduce_mod(modulus).unwrap();
        let direct_c = cubic_partition_series(depth, Some(modulus)).unwrap();
        assert_eq!(reduced_c.first_difference(&direct_c, depth).unwrap(), None);
    }
}

/// The identity proves divisibility by 3 on the progression 3n + 2; the
/// direct scan must therefore agree with the identity check.
#[test]
fn identity_and_direct_scan_agree_at_depth_one() {
    let identity = verify_theorem_1_1(200).unwrap();
    assert!(identity.passed(), "{identity}");

    let family = CongruenceFamily::cubic(1).unwrap();
    let series = cubic_partition_series(602, None).unwrap();
    let scan = verify_congruence_family(&series, &family, 601).unwrap();
    assert!(scan.passed(), "{scan}");
    assert_eq!(scan.checked, 200);
}
