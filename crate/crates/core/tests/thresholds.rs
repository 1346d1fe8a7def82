//! Stable counting thresholds, pinned against a plain `u128` scan.

use cupform_core::obstruction::{min_sufficient_m, threshold_check, CountingCase};
use cupform_core::FormKind;

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn space_dim(kind: FormKind, n: u128, q: u128) -> u128 {
    match kind {
        FormKind::Skew => binom(n, q),
        FormKind::Symmetric if n == 0 => 0,
        FormKind::Symmetric => binom(n + q - 1, q),
    }
}

fn both_hold(kind: FormKind, q: u128, m: u128) -> bool {
    let total = space_dim(kind, m, q);
    let (m1, m2) = (m / 54, m / 18);
    let one = m * m + total - space_dim(kind, m1, q) < total;
    let two = m * m + m2 + (m - m2) * m2 + total - space_dim(kind, m2, q) < total;
    one && two
}

/// `(first m where both hold, one past the last m where they fail)` on `1..=limit`.
fn scan(kind: FormKind, q: u128, limit: u128) -> (u64, u64) {
    let mut first = None;
    let mut last_fail = 0;
    for m in 1..=limit {
        if both_hold(kind, q, m) {
            first.get_or_insert(m);
        } else {
            last_fail = m;
        }
    }
    let first = first.expect("threshold inside scan range");
    (first as u64, last_fail as u64 + 1)
}

#[test]
fn quintic_thresholds() {
    assert_eq!(scan(FormKind::Skew, 5, 20_000), (3996, 4050));
    assert_eq!(min_sufficient_m(FormKind::Skew, 5).unwrap(), 4050);
    assert_eq!(scan(FormKind::Symmetric, 5, 20_000), (3672, 3672));
    assert_eq!(min_sufficient_m(FormKind::Symmetric, 5).unwrap(), 3672);
}

#[test]
fn cubic_thresholds_are_not_monotone() {
    let (first, stable) = scan(FormKind::Skew, 3, 1_500_000);
    assert_eq!((first, stable), (944_946, 945_054));
    assert_eq!(min_sufficient_m(FormKind::Skew, 3).unwrap(), stable);
    // sporadic satisfaction below the stable threshold
    let at = |m| threshold_check(FormKind::Skew, 3, m, CountingCase::One).unwrap().satisfied;
    assert!(at(first) && !at(stable - 1));

    let (first, stable) = scan(FormKind::Symmetric, 3, 1_500_000);
    assert_eq!((first, stable), (944_622, 944_730));
    assert_eq!(min_sufficient_m(FormKind::Symmetric, 3).unwrap(), stable);
}

#[test]
fn big_integer_matches_scan_near_thresholds() {
    for kind in [FormKind::Skew, FormKind::Symmetric] {
        for m in (3600..4100).chain(944_600..944_620) {
            let q = if m < 10_000 { 5 } else { 3 };
            let one = threshold_check(kind, q, m, CountingCase::One).unwrap().satisfied;
            let two = threshold_check(kind, q, m, CountingCase::Two).unwrap().satisfied;
            assert_eq!(one && two, both_hold(kind, q as u128, m as u128), "{kind} q={q} m={m}");
        }
    }
}
