//! Closed-form code-size bounds, quotient counting, rate formulas and
//! redundancy estimates. Everything that can overflow is evaluated in the
//! log2 domain.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combin::{binomial, log2_binomial};
use crate::error::{invalid, LmpeError, Result};

/// Smallest error-ball size, attained at a boundary symbol such as
/// `(0,0,0,k)`: `Σ_{i=0..l} C(i+2,2)`.
pub fn e_min(l: u32) -> u64 {
    (0..=l as u64).map(|i| binomial(i + 2, 2)).sum()
}

/// Error-ball size at an interior symbol:
/// `(10l³ + 15l² + 11l + 3) / 3`.
pub fn e_count(l: u32) -> u64 {
    let l = l as u64;
    (10 * l * l * l + 15 * l * l + 11 * l + 3) / 3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    Relaxed,
    Exact,
}

impl FromStr for BoundVariant {
    type Err = LmpeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relaxed" => Ok(BoundVariant::Relaxed),
            "exact" => Ok(BoundVariant::Exact),
            other => invalid(format!("unknown bound variant `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub log2_code_size_bound: f64,
    pub rate: f64,
    pub variant: BoundVariant,
    /// For the Gilbert-Varshamov bound: whether `n > (2t)² 3.02^(2t) / l³`.
    pub gv_condition_met: Option<bool>,
}

fn log2_alphabet(k: u32) -> f64 {
    log2_binomial(k as u64 + 3, 3)
}

fn report(n: usize, k: u32, log2_denominator: f64, variant: BoundVariant) -> BoundReport {
    let total = n as f64 * log2_alphabet(k);
    let bits = total - log2_denominator;
    let rate = if total > 0.0 { (bits / total).clamp(0.0, 1.0) } else { 1.0 };
    BoundReport {
        log2_code_size_bound: bits,
        rate,
        variant,
        gv_condition_met: None,
    }
}

fn log2_sum_exp2(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp2()).sum::<f64>().log2()
}

/// Sphere-packing upper bound on the code size.
///
/// `Relaxed` divides by `C(n,t) (l³/6)^t`; `Exact` divides by
/// `Σ_{t'≤t} C(n,t') E_min(l)^t'`.
pub fn sphere_packing(n: usize, k: u32, t: usize, l: u32, variant: BoundVariant) -> Result<BoundReport> {
    if k < 4 * l {
        return invalid(format!("sphere-packing bound needs k >= 4l, got k = {k}, l = {l}"));
    }
    if t > n {
        return invalid(format!("t = {t} exceeds n = {n}"));
    }
    let denom = if t == 0 || l == 0 {
        0.0
    } else {
        match variant {
            BoundVariant::Relaxed => {
                log2_binomial(n as u64, t as u64) - t as f64 * 6f64.log2()
                    + 3.0 * t as f64 * (l as f64).log2()
            }
            BoundVariant::Exact => {
                let e = (e_min(l) as f64).log2();
                let terms: Vec<f64> = (0..=t)
                    .map(|tp| log2_binomial(n as u64, tp as u64) + tp as f64 * e)
                    .collect();
                log2_sum_exp2(&terms)
            }
        }
    };
    Ok(report(n, k, denom.max(0.0), variant))
}

/// Whether `n > (2t)² 3.02^(2t) / l³`.
pub fn gv_condition(n: usize, t: usize, l: u32) -> bool {
    if l == 0 {
        return t == 0;
    }
    let d = 2.0 * t as f64;
    n as f64 > d * d * 3.02f64.powf(d) / (l as f64).powi(3)
}

/// Gilbert-Varshamov lower bound on the code size, dividing by
/// `2t C(n,2t) (10/3)^(2t) l^(6t)`.
pub fn gv_bound(n: usize, k: u32, t: usize, l: u32) -> Result<BoundReport> {
    if 2 * t > n {
        return invalid(format!("2t = {} exceeds n = {n}", 2 * t));
    }
    let denom = if t == 0 || l == 0 {
        0.0
    } else {
        let d = 2.0 * t as f64;
        d.log2()
            + log2_binomial(n as u64, 2 * t as u64)
            + d * (10.0f64 / 3.0).log2()
            + 6.0 * t as f64 * (l as f64).log2()
    };
    let mut out = report(n, k, denom, BoundVariant::Relaxed);
    out.gv_condition_met = Some(gv_condition(n, t, l));
    Ok(out)
}

/// Log2 of the three error-volume terms for `i` erroneous symbols out of a
/// geodesic radius `d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeTerms {
    pub i: usize,
    pub log2_lower: f64,
    pub log2_volume: f64,
    pub log2_upper: f64,
}

/// `V(i)`, `L(i)` and `U(i)` for `i = 1..=d`.
pub fn ball_volume_terms(n: usize, l: u32, d: usize) -> Result<Vec<VolumeTerms>> {
    if d == 0 || l == 0 {
        return invalid("ball volume terms need d >= 1 and l >= 1");
    }
    // sums[i][s]: Σ over compositions of s into i positive parts of Π c³
    let mut sums = vec![vec![0f64; d + 1]; d + 1];
    sums[0][0] = 1.0;
    for i in 1..=d {
        for s in i..=d {
            sums[i][s] = (1..=s - i + 1)
                .map(|c| sums[i - 1][s - c] * (c as f64).powi(3))
                .sum();
        }
    }
    let log_l = (l as f64).log2();
    let log_ten_thirds = (10.0f64 / 3.0).log2();
    Ok((1..=d.min(n))
        .map(|i| {
            let common = log2_binomial(n as u64, i as u64) + i as f64 * log_ten_thirds;
            let comps = log2_binomial(d as u64 - 1, i as u64 - 1);
            VolumeTerms {
                i,
                log2_lower: common + comps + 3.0 * ((d - i + 1) as f64).log2() + 3.0 * i as f64 * log_l,
                log2_volume: common + sums[i][d].log2() + 3.0 * i as f64 * log_l,
                log2_upper: common + comps + 3.0 * i as f64 * (d as f64 * l as f64 / i as f64).log2(),
            }
        })
        .collect())
}

/// Lower bound on `V(i+1)/V(i)` from `L(i+1)/U(i)`, in log2.
pub fn log2_volume_ratio_bound(n: usize, l: u32, d: usize, i: usize) -> f64 {
    let (nf, lf, df, fi) = (n as f64, l as f64, d as f64, i as f64);
    (10.0f64 / 3.0).log2() + (nf - fi).log2() - (fi * (fi + 1.0)).log2()
        + 4.0 * (df - fi).log2()
        + 3.0 * lf.log2()
        + 3.0 * fi * (fi / df).log2()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuotientCase {
    I,
    II,
}

impl fmt::Display for QuotientCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuotientCase::I => "I",
            QuotientCase::II => "II",
        })
    }
}

/// How many quotient vectors parity symbols can carry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientCount {
    /// `⌊k / (2l+1)⌋`.
    pub s: u32,
    pub case: QuotientCase,
    /// Smallest quotient sum a parity symbol can be forced to.
    pub s_min: u32,
    /// `Σ_{j=s_min..s} C(j+3,3)`.
    pub total: u64,
    /// `C(j+3,3)` for `j = s_min..=s`.
    pub per_sum: Vec<u64>,
}

impl QuotientCount {
    /// Worst-case number of parity quotient messages, `C(s_min+3,3)`.
    pub fn min_messages(&self) -> u64 {
        binomial(self.s_min as u64 + 3, 3)
    }
}

pub fn quotient_counts(k: u32, l: u32) -> QuotientCount {
    let d = 2 * l + 1;
    let s = k / d;
    let case = if 6 * l + 3 + k % d <= 8 * l {
        QuotientCase::I
    } else {
        QuotientCase::II
    };
    let s_min = match case {
        QuotientCase::I => s.saturating_sub(3),
        QuotientCase::II => s.saturating_sub(2),
    };
    let per_sum: Vec<u64> = (s_min..=s).map(|j| binomial(j as u64 + 3, 3)).collect();
    QuotientCount {
        s,
        case,
        s_min,
        total: per_sum.iter().sum(),
        per_sum,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateVariant {
    Exact,
    Approx,
}

/// Rate of a non-systematic code with `m` information symbols out of `n`,
/// where each parity symbol still carries `C(s_min+3,3)` quotient messages.
pub fn rate_nonsystematic(n: usize, m: usize, k: u32, l: u32, variant: RateVariant) -> Result<f64> {
    if m > n || n == 0 {
        return invalid(format!("need 0 < n and m <= n, got n = {n}, m = {m}"));
    }
    let (nf, mf) = (n as f64, m as f64);
    Ok(match variant {
        RateVariant::Exact => {
            let full = log2_alphabet(k);
            let s_min = quotient_counts(k, l).s_min;
            let parity = log2_binomial(s_min as u64 + 3, 3);
            (mf * full + (nf - mf) * parity) / (nf * full)
        }
        RateVariant::Approx => {
            let ratio = ((2 * l + 1) as f64).log2() / (k as f64).log2();
            mf / nf + (1.0 - ratio) * (1.0 - mf / nf)
        }
    })
}

/// `m / (m + ⌈(n-m)/g⌉)`: `n - m` field parities packed `g` per column.
pub fn rate_systematic(n: usize, m: usize, g: usize) -> Result<f64> {
    if m > n || g == 0 || n == 0 {
        return invalid(format!("need m <= n and g >= 1, got n = {n}, m = {m}, g = {g}"));
    }
    let r = (n - m).div_ceil(g);
    Ok(m as f64 / (m + r) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RedundancyMethod {
    NaiveHamming,
    HammingRemainder,
    ImprovedHamming,
    HammingReduced,
    BchRemainder,
    BchReduced,
}

impl RedundancyMethod {
    pub const ALL: [RedundancyMethod; 6] = [
        RedundancyMethod::NaiveHamming,
        RedundancyMethod::HammingRemainder,
        RedundancyMethod::ImprovedHamming,
        RedundancyMethod::HammingReduced,
        RedundancyMethod::BchRemainder,
        RedundancyMethod::BchReduced,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RedundancyMethod::NaiveHamming => "naive_hamming",
            RedundancyMethod::HammingRemainder => "hamming_remainder",
            RedundancyMethod::ImprovedHamming => "improved_hamming",
            RedundancyMethod::HammingReduced => "hamming_reduced",
            RedundancyMethod::BchRemainder => "bch_remainder",
            RedundancyMethod::BchReduced => "bch_reduced",
        }
    }
}

impl FromStr for RedundancyMethod {
    type Err = LmpeError;

    fn from_str(s: &str) -> Result<Self> {
        RedundancyMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| LmpeError::InvalidParameter(format!("unknown method `{s}`")))
    }
}

/// Redundancy in bits of each construction for large `k / l`.
pub fn redundancy_bits(method: RedundancyMethod, n: usize, k: u32, l: u32, t: usize) -> Result<f64> {
    use RedundancyMethod::*;
    let nf = n as f64;
    let d = (2 * l + 1) as f64;
    if matches!(method, NaiveHamming | HammingRemainder | ImprovedHamming | HammingReduced) && t != 1 {
        return invalid(format!("{} corrects exactly one error, got t = {t}", method.name()));
    }
    if method == BchReduced && l > 4 {
        return invalid("reduced classes need l <= 4");
    }
    Ok(match method {
        NaiveHamming => ((binomial(k as u64 + 3, 3) as f64 - 1.0) * nf + 1.0).log2(),
        HammingRemainder => ((d.powi(3) - 1.0) * nf + 1.0).log2(),
        ImprovedHamming => ((d.powi(3) - 1.0) / 2.0 * nf + 1.0).log2(),
        HammingReduced => ((d * d - 1.0) * nf + 1.0).log2() + d.log2(),
        BchRemainder => 2.0 * t as f64 * (nf + 1.0).log2(),
        BchReduced => 3.0 * t as f64 * (nf + 1.0).log2(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_counts() {
        assert_eq!([e_min(0), e_min(1), e_min(2)], [1, 4, 10]);
        assert_eq!([e_count(0), e_count(1), e_count(2)], [1, 13, 55]);
    }

    #[test]
    fn example_one_bounds() {
        let spb = sphere_packing(28, 12, 1, 1, BoundVariant::Relaxed).unwrap();
        assert!((spb.rate - 0.991).abs() < 1e-3);
        let exact = sphere_packing(28, 12, 1, 1, BoundVariant::Exact).unwrap();
        assert!(exact.rate <= 1.0 && exact.rate > 0.9);
        assert_eq!(sphere_packing(28, 12, 0, 1, BoundVariant::Relaxed).unwrap().rate, 1.0);
        assert!(sphere_packing(28, 3, 1, 1, BoundVariant::Relaxed).is_err());
        let gv = gv_bound(28, 12, 1, 1).unwrap();
        assert!(gv.rate < spb.rate);
        assert_eq!(gv_bound(28, 12, 0, 1).unwrap().rate, 1.0);
    }

    #[test]
    fn large_parameter_gaps() {
        for (l, target) in [(10, 1.95), (20, 2.23)] {
            let spb = sphere_packing(1023, 100, 15, l, BoundVariant::Relaxed).unwrap();
            let gv = gv_bound(1023, 100, 15, l).unwrap();
            let gap = 100.0 * (spb.rate - gv.rate);
            assert!((gap - target).abs() <= 0.5, "l = {l}: gap {gap}");
        }
    }

    #[test]
    fn volume_terms_ordering() {
        let terms = ball_volume_terms(1023, 10, 6).unwrap();
        assert_eq!(terms.len(), 6);
        for t in &terms {
            assert!(t.log2_lower <= t.log2_volume + 1e-9);
            assert!(t.log2_volume <= t.log2_upper + 1e-9);
        }
        let last = terms.last().unwrap();
        assert!((last.log2_lower - last.log2_volume).abs() < 1e-9);
        assert!((last.log2_upper - last.log2_volume).abs() < 1e-9);
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_counts(12, 1);
        assert_eq!((q.s, q.case, q.s_min, q.min_messages()), (4, QuotientCase::II, 2, 10));
        let q = quotient_counts(19, 1);
        assert_eq!((q.s, q.case, q.s_min), (6, QuotientCase::II, 4));
        let q = quotient_counts(28, 2);
        assert_eq!((q.s, q.case, q.s_min), (5, QuotientCase::II, 3));
        let q = quotient_counts(100, 2);
        assert_eq!((q.s, q.case, q.s_min), (20, QuotientCase::I, 17));
    }

    #[test]
    fn rate_examples() {
        let r = rate_nonsystematic(31, 16, 19, 1, RateVariant::Exact).unwrap();
        assert!((r - 0.750).abs() <= 1e-3);
        let r = rate_nonsystematic(63, 51, 28, 2, RateVariant::Exact).unwrap();
        assert!((r - 0.877).abs() < 5e-4);
        assert_eq!(rate_nonsystematic(10, 10, 12, 1, RateVariant::Exact).unwrap(), 1.0);
        assert!((rate_systematic(31, 16, 2).unwrap() - 16.0 / 24.0).abs() < 1e-12);
        assert!((rate_systematic(63, 51, 3).unwrap() - 51.0 / 55.0).abs() < 1e-12);
        assert_eq!(rate_systematic(9, 9, 2).unwrap(), 1.0);
    }

    #[test]
    fn redundancy_examples() {
        let h = redundancy_bits(RedundancyMethod::HammingRemainder, 28, 12, 1, 1).unwrap();
        assert!((h - (26.0 * 28.0 + 1.0f64).log2()).abs() < 1e-12);
        let i = redundancy_bits(RedundancyMethod::ImprovedHamming, 56, 12, 1, 1).unwrap();
        assert!((i - (13.0 * 56.0 + 1.0f64).log2()).abs() < 1e-12);
        assert!(redundancy_bits(RedundancyMethod::ImprovedHamming, 56, 12, 1, 2).is_err());
        let b = redundancy_bits(RedundancyMethod::BchReduced, 80, 12, 1, 2).unwrap();
        assert!((b - 6.0 * 81f64.log2()).abs() < 1e-12);
    }
}
