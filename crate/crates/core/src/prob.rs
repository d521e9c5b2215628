//! Probability vectors, limited-magnitude errors and error balls.
//!
//! A symbol is four non-negative integers summing to the resolution `k`. An
//! `l`-limited-magnitude error moves at most `l` units of probability mass
//! from some entries to others; equivalently it sums to zero and has l1-norm
//! at most `2l`. Error balls are enumerated lexicographically on the delta
//! tuple so every consumer sees the same order.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combin::binomial;
use crate::error::{invalid, LmpeError, Result};

/// Number of nucleotides per composite symbol.
pub const M: usize = 4;

/// Default cap on the number of words a geodesic search may visit.
pub const GEODESIC_GUARD: usize = 2_000_000;

/// One composite-DNA symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProbVec([u32; M]);

impl ProbVec {
    /// Checks that `values` sum to `k`.
    pub fn new(values: [u32; M], k: u32) -> Result<Self> {
        if values.iter().sum::<u32>() != k {
            return Err(LmpeError::InvalidSymbol {
                values: values.iter().map(|&v| v as i64).collect(),
                k,
            });
        }
        Ok(ProbVec(values))
    }

    /// Takes the resolution from the sum of `values`.
    pub const fn from_values(values: [u32; M]) -> Self {
        ProbVec(values)
    }

    pub fn values(&self) -> [u32; M] {
        self.0
    }

    pub fn k(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `self + e` if that is still a symbol of the same resolution.
    pub fn apply(&self, e: &SymbolError) -> Option<ProbVec> {
        if e.0.iter().sum::<i32>() != 0 {
            return None;
        }
        let mut out = [0u32; M];
        for j in 0..M {
            let v = self.0[j] as i64 + e.0[j] as i64;
            if v < 0 {
                return None;
            }
            out[j] = v as u32;
        }
        Some(ProbVec(out))
    }

    /// `other - self`.
    pub fn delta_to(&self, other: &ProbVec) -> SymbolError {
        let mut d = [0i32; M];
        for j in 0..M {
            d[j] = other.0[j] as i32 - self.0[j] as i32;
        }
        SymbolError(d)
    }
}

impl fmt::Display for ProbVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a},{b},{c},{d}")
    }
}

impl FromStr for ProbVec {
    type Err = LmpeError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != M {
            return invalid(format!("symbol `{s}` must have {M} values"));
        }
        let mut values = [0u32; M];
        for (slot, part) in values.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| LmpeError::InvalidParameter(format!("bad value `{part}` in `{s}`")))?;
        }
        Ok(ProbVec(values))
    }
}

/// Per-symbol difference between a received and a transmitted symbol.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolError([i32; M]);

impl SymbolError {
    pub const ZERO: SymbolError = SymbolError([0; M]);

    pub const fn new(deltas: [i32; M]) -> Self {
        SymbolError(deltas)
    }

    pub fn deltas(&self) -> [i32; M] {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; M]
    }

    /// Total upward movement, `Σ_{e_j > 0} e_j`.
    pub fn magnitude(&self) -> u32 {
        self.0.iter().filter(|&&e| e > 0).map(|&e| e as u32).sum()
    }

    pub fn negated(&self) -> SymbolError {
        SymbolError(self.0.map(|e| -e))
    }
}

/// True iff `e` sums to zero and its l1-norm is at most `2l`.
pub fn lmpe_is_valid(e: &SymbolError, l: u32) -> bool {
    let sum: i64 = e.0.iter().map(|&v| v as i64).sum();
    let l1: i64 = e.0.iter().map(|&v| (v as i64).abs()).sum();
    sum == 0 && l1 <= 2 * l as i64
}

/// Every valid `l`-limited error `e` with `x + e` a symbol, zero included,
/// in lexicographic order of the delta tuple.
pub fn symbol_error_ball(x: &ProbVec, l: u32) -> Vec<SymbolError> {
    let l = l as i32;
    let v = x.0.map(|c| c as i32);
    let k = x.k() as i32;
    let range = |j: usize| (-l).max(-v[j])..=l.min(k - v[j]);
    let mut out = Vec::new();
    for e0 in range(0) {
        for e1 in range(1) {
            for e2 in range(2) {
                let e3 = -(e0 + e1 + e2);
                if e3 < -v[3] || e3 > k - v[3] {
                    continue;
                }
                let l1 = e0.abs() + e1.abs() + e2.abs() + e3.abs();
                if l1 <= 2 * l {
                    out.push(SymbolError([e0, e1, e2, e3]));
                }
            }
        }
    }
    out
}

/// Symbols reachable from `x` by one `l`-limited error, `x` itself included.
pub fn symbol_neighbors(x: &ProbVec, l: u32) -> Vec<ProbVec> {
    symbol_error_ball(x, l)
        .iter()
        .filter_map(|e| x.apply(e))
        .collect()
}

/// All symbols of resolution `k` in lexicographic order.
pub fn alphabet(k: u32) -> Vec<ProbVec> {
    let mut out = Vec::with_capacity(alphabet_size(k) as usize);
    for a in 0..=k {
        for b in 0..=k - a {
            for c in 0..=k - a - b {
                out.push(ProbVec([a, b, c, k - a - b - c]));
            }
        }
    }
    out
}

/// `C(k + 3, 3)`.
pub fn alphabet_size(k: u32) -> u64 {
    binomial(k as u64 + 3, 3)
}

/// A word of `n` symbols sharing one resolution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    k: u32,
    symbols: Vec<ProbVec>,
}

impl Word {
    pub fn new(k: u32, symbols: Vec<ProbVec>) -> Result<Self> {
        for s in &symbols {
            if s.k() != k {
                return Err(LmpeError::InvalidSymbol {
                    values: s.0.iter().map(|&v| v as i64).collect(),
                    k,
                });
            }
        }
        Ok(Word { k, symbols })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[ProbVec] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<ProbVec> {
        self.symbols
    }

    /// Adds a per-symbol error; fails if any symbol leaves the alphabet.
    pub fn apply(&self, errors: &[SymbolError]) -> Result<Word> {
        if errors.len() != self.symbols.len() {
            return invalid(format!(
                "error word has {} symbols, word has {}",
                errors.len(),
                self.symbols.len()
            ));
        }
        let symbols = self
            .symbols
            .iter()
            .zip(errors)
            .map(|(s, e)| {
                s.apply(e).ok_or_else(|| LmpeError::InvalidSymbol {
                    values: (0..M).map(|j| s.0[j] as i64 + e.0[j] as i64).collect(),
                    k: self.k,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { k: self.k, symbols })
    }

    /// Parses one line of the codeword format, e.g. `3,3,3,3;2,4,3,3`.
    /// The resolution is taken from the first symbol unless given.
    pub fn parse(line: &str, k: Option<u32>) -> Result<Word> {
        let symbols = line
            .trim()
            .split(';')
            .map(|s| s.parse::<ProbVec>())
            .collect::<Result<Vec<_>>>()?;
        let k = match (k, symbols.first()) {
            (Some(k), _) => k,
            (None, Some(s)) => s.k(),
            (None, None) => return invalid("empty word"),
        };
        Word::new(k, symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Reads a codeword file: one word per line, blank lines and `#` comments
/// skipped. Every word must have resolution `k`.
pub fn parse_words(text: &str, k: Option<u32>) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let word = Word::parse(line, k).map_err(|e| LmpeError::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(word);
    }
    Ok(out)
}

/// Number of guard units a ball-size computation may use.
pub const BALL_SIZE_GUARD: u64 = 1_000_000_000;

/// Exact number of words reachable from `x` by an `(l, t)` error.
pub fn word_error_ball_size(x: &Word, l: u32, t: usize) -> Result<BigUint> {
    let n = x.len();
    let t = t.min(n);
    if (n as u64).saturating_mul(t as u64 + 1) > BALL_SIZE_GUARD {
        return Err(LmpeError::GuardExceeded(format!("n = {n}, t = {t}")));
    }
    // coeffs[j] = number of ways to corrupt exactly j of the symbols seen so far
    let mut coeffs = vec![BigUint::from(0u32); t + 1];
    coeffs[0] = BigUint::from(1u32);
    for s in x.symbols() {
        let nonzero = BigUint::from(symbol_error_ball(s, l).len() as u64 - 1);
        for j in (1..=t).rev() {
            let add = &coeffs[j - 1] * &nonzero;
            coeffs[j] += add;
        }
    }
    Ok(coeffs.into_iter().sum())
}

fn word_neighbors(w: &[ProbVec], l: u32) -> impl Iterator<Item = Vec<ProbVec>> + '_ {
    (0..w.len()).flat_map(move |i| {
        symbol_error_ball(&w[i], l)
            .into_iter()
            .filter(|e| !e.is_zero())
            .map(move |e| {
                let mut next = w.to_vec();
                next[i] = w[i].apply(&e).expect("ball entries are valid");
                next
            })
    })
}

/// Minimum number of single-symbol `l`-limited steps from `x` to `y`, or
/// `None` when `y` cannot be reached.
pub fn geodesic_distance(x: &Word, y: &Word, l: u32, guard: usize) -> Result<Option<usize>> {
    if x.len() != y.len() || x.k() != y.k() {
        return invalid("geodesic distance needs words of equal length and resolution");
    }
    if x == y {
        return Ok(Some(0));
    }
    let target = y.symbols();
    let mut dist: HashMap<Vec<ProbVec>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(x.symbols.clone(), 0);
    queue.push_back(x.symbols.clone());
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        for next in word_neighbors(&w, l) {
            if dist.contains_key(&next) {
                continue;
            }
            if next == target {
                return Ok(Some(d + 1));
            }
            dist.insert(next.clone(), d + 1);
            if dist.len() > guard {
                return Err(LmpeError::GuardExceeded(format!(
                    "geodesic search visited more than {guard} words"
                )));
            }
            queue.push_back(next);
        }
    }
    Ok(None)
}

/// All words within geodesic distance `radius` of `x`.
pub fn geodesic_ball(x: &Word, l: u32, radius: usize, guard: usize) -> Result<Vec<Word>> {
    let mut seen: Vec<Vec<ProbVec>> = vec![x.symbols.clone()];
    let mut frontier = seen.clone();
    for _ in 0..radius {
        let mut next: Vec<Vec<ProbVec>> = frontier.iter().flat_map(|w| word_neighbors(w, l)).collect();
        next.sort_unstable();
        next.dedup();
        next.retain(|w| seen.binary_search(w).is_err());
        if next.is_empty() {
            break;
        }
        if seen.len() + next.len() > guard {
            return Err(LmpeError::GuardExceeded(format!(
                "geodesic ball exceeds {guard} words"
            )));
        }
        seen.extend(next.iter().cloned());
        seen.sort_unstable();
        frontier = next;
    }
    Ok(seen.into_iter().map(|symbols| Word { k: x.k, symbols }).collect())
}

/// Draws an `(l, t)` error for `x`: a uniform count `t' ∈ [0, t]`, a uniform
/// set of `t'` positions, and a uniform nonzero valid error at each.
pub fn sample_lmpe<R: Rng + ?Sized>(x: &Word, l: u32, t: usize, rng: &mut R) -> Vec<SymbolError> {
    let count = rng.gen_range(0..=t.min(x.len()));
    sample_lmpe_exact(x, l, count, rng)
}

/// Like [`sample_lmpe`] but corrupts exactly `min(t, n)` positions (fewer
/// only where a symbol admits no nonzero error).
pub fn sample_lmpe_exact<R: Rng + ?Sized>(
    x: &Word,
    l: u32,
    t: usize,
    rng: &mut R,
) -> Vec<SymbolError> {
    let n = x.len();
    let mut errors = vec![SymbolError::ZERO; n];
    if n == 0 || l == 0 {
        return errors;
    }
    for pos in index::sample(rng, n, t.min(n)) {
        let ball: Vec<SymbolError> = symbol_error_ball(&x.symbols[pos], l)
            .into_iter()
            .filter(|e| !e.is_zero())
            .collect();
        if !ball.is_empty() {
            errors[pos] = ball[rng.gen_range(0..ball.len())];
        }
    }
    errors
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pv(v: [u32; 4]) -> ProbVec {
        ProbVec::from_values(v)
    }

    #[test]
    fn validity_examples() {
        assert!(lmpe_is_valid(&SymbolError::new([1, -1, 0, 0]), 1));
        assert!(lmpe_is_valid(&SymbolError::new([-2, 0, 1, 1]), 2));
        assert!(!lmpe_is_valid(&SymbolError::new([1, 2, 0, -3]), 2));
        assert!(!lmpe_is_valid(&SymbolError::new([1, 0, 0, 0]), 5));
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(symbol_error_ball(&pv([0, 0, 0, 12]), 1).len(), 4);
        assert_eq!(symbol_error_ball(&pv([3, 3, 3, 3]), 1).len(), 13);
        assert_eq!(symbol_error_ball(&pv([5, 1, 4, 2]), 0), vec![SymbolError::ZERO]);
    }

    #[test]
    fn ball_is_lexicographic() {
        let ball = symbol_error_ball(&pv([3, 3, 3, 3]), 2);
        assert!(ball.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn word_ball_sizes() {
        let w = Word::new(12, vec![pv([0, 0, 0, 12])]).unwrap();
        assert_eq!(word_error_ball_size(&w, 1, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(word_error_ball_size(&w, 1, 0).unwrap(), BigUint::from(1u32));
        let w2 = Word::new(12, vec![pv([0, 0, 0, 12]), pv([3, 3, 3, 3])]).unwrap();
        assert_eq!(word_error_ball_size(&w2, 1, 1).unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn geodesic_examples() {
        let x = Word::new(12, vec![pv([3, 3, 3, 3])]).unwrap();
        let y = Word::new(12, vec![pv([5, 1, 3, 3])]).unwrap();
        let z = Word::new(12, vec![pv([4, 2, 3, 3])]).unwrap();
        assert_eq!(geodesic_distance(&x, &x, 1, GEODESIC_GUARD).unwrap(), Some(0));
        assert_eq!(geodesic_distance(&x, &z, 1, GEODESIC_GUARD).unwrap(), Some(1));
        assert_eq!(geodesic_distance(&x, &y, 1, GEODESIC_GUARD).unwrap(), Some(2));
        assert_eq!(geodesic_distance(&x, &y, 0, GEODESIC_GUARD).unwrap(), None);
        assert!(matches!(
            geodesic_distance(&x, &y, 1, 3),
            Err(LmpeError::GuardExceeded(_))
        ));
    }

    #[test]
    fn parse_and_format() {
        let w = Word::parse("3,3,3,3;2,4,3,3", None).unwrap();
        assert_eq!(w.to_string(), "3,3,3,3;2,4,3,3");
        assert!(Word::parse("3,3,3,3;2,4,3,4", None).is_err());
        assert!(Word::parse("3,3,3;2,4,3,3", None).is_err());
        assert!(Word::parse("3,3,3,x", None).is_err());
        let err = parse_words("# c\n3,3,3,3\n\n1,1,1,1\n", Some(12)).unwrap_err();
        assert!(matches!(err, LmpeError::Parse { line: 4, .. }));
    }

    #[test]
    fn sampler_zero_and_determinism() {
        let x = Word::new(12, vec![pv([3, 3, 3, 3]); 10]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_lmpe(&x, 1, 0, &mut rng).iter().all(|e| e.is_zero()));
        let a = sample_lmpe(&x, 2, 3, &mut ChaCha8Rng::seed_from_u64(42));
        let b = sample_lmpe(&x, 2, 3, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
        let exact = sample_lmpe_exact(&x, 1, 4, &mut rng);
        assert_eq!(exact.iter().filter(|e| !e.is_zero()).count(), 4);
    }
}
