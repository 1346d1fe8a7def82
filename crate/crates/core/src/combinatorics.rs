use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Exact binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `C(n, k)` as a machine integer, panicking on overflow.
pub fn binomial_usize(n: usize, k: usize) -> usize {
    let b = binomial(n as u64, k as u64);
    usize::try_from(&b).expect("binomial coefficient overflows usize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(4, 3), BigUint::from(4u32));
        assert_eq!(binomial(18, 3), BigUint::from(816u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial_usize(10, 5), 252);
    }

    #[test]
    fn pascal_rule() {
        for n in 1..40u64 {
            for k in 1..=n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }
}
