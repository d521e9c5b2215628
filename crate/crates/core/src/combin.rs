//! Binomials and lexicographic ranking of weak compositions into four parts.

use crate::error::{LmpeError, Result};
use crate::prob::M;

/// Exact `C(n, k)`; saturates at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `log2 C(n, k)` by summing logs; accurate for any `n` that fits in memory
/// of a loop over `min(k, n - k)`.
pub fn log2_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).log2() - ((i + 1) as f64).log2())
        .sum()
}

/// Number of weak compositions of `sum` into `parts` parts.
pub fn compositions(sum: u64, parts: u64) -> u64 {
    if parts == 0 {
        return u64::from(sum == 0);
    }
    binomial(sum + parts - 1, parts - 1)
}

/// Lexicographic rank of a weak composition of its own sum.
pub fn quotient_rank(a: &[u32; M]) -> u64 {
    let mut remaining: u64 = a.iter().map(|&v| v as u64).sum();
    let mut rank = 0;
    for (i, &v) in a.iter().enumerate().take(M - 1) {
        let rest_parts = (M - 1 - i) as u64;
        for smaller in 0..v as u64 {
            rank += compositions(remaining - smaller, rest_parts);
        }
        remaining -= v as u64;
    }
    rank
}

/// Inverse of [`quotient_rank`] for compositions of `target_sum`.
pub fn quotient_unrank(mut index: u64, target_sum: u32) -> Result<[u32; M]> {
    let total = compositions(target_sum as u64, M as u64);
    if index >= total {
        return Err(LmpeError::InvalidParameter(format!(
            "quotient index {index} out of range for sum {target_sum} ({total} compositions)"
        )));
    }
    let mut out = [0u32; M];
    let mut remaining = target_sum as u64;
    for (i, slot) in out.iter_mut().enumerate().take(M - 1) {
        let rest_parts = (M - 1 - i) as u64;
        let mut v = 0;
        loop {
            let block = compositions(remaining - v, rest_parts);
            if index < block {
                break;
            }
            index -= block;
            v += 1;
        }
        *slot = v as u32;
        remaining -= v;
    }
    out[M - 1] = remaining as u32;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(15, 3), 455);
        assert_eq!(binomial(22, 3), 1540);
        assert_eq!(binomial(3, 5), 0);
        assert!((log2_binomial(28, 1) - 28f64.log2()).abs() < 1e-12);
        assert!((log2_binomial(100, 10) - (binomial(100, 10) as f64).log2()).abs() < 1e-6);
    }

    #[test]
    fn unrank_first_and_count() {
        assert_eq!(quotient_unrank(0, 2).unwrap(), [0, 0, 0, 2]);
        assert_eq!(compositions(2, 4), 10);
        assert_eq!(quotient_unrank(9, 2).unwrap(), [2, 0, 0, 0]);
        assert!(quotient_unrank(10, 2).is_err());
    }

    #[test]
    fn rank_unrank_exhaustive() {
        for s in 0..=6u32 {
            let total = compositions(s as u64, 4);
            let mut prev = None;
            for i in 0..total {
                let a = quotient_unrank(i, s).unwrap();
                assert_eq!(a.iter().sum::<u32>(), s);
                assert_eq!(quotient_rank(&a), i);
                if let Some(p) = prev {
                    assert!(p < a);
                }
                prev = Some(a);
            }
        }
    }
}
