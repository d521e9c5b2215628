//! Gray mappings: injections from every length-`g` word over GF(q) into the
//! symbols of resolution `k`, such that two mapped symbols one `2l`-limited
//! error apart carry words at Hamming distance exactly one.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bounds::e_count;
use crate::classify::{split, Remainder};
use crate::combin::{binomial, quotient_rank};
use crate::error::{invalid, LmpeError, Result};
use crate::field::FieldElement;
use crate::prob::{alphabet, symbol_error_ball, ProbVec};

/// A Gray mapping. Codewords are stored as base-`q` indices, digit 0 most
/// significant, so index order is lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayMapping {
    k: u32,
    l: u32,
    q: u32,
    g: u32,
    /// `vectors[c]` is the image of codeword index `c`.
    vectors: Vec<ProbVec>,
    lookup: HashMap<ProbVec, u64>,
}

/// Search order knobs. The default is the canonical policy: lexicographic
/// seeds, lexicographic codeword choice, no remainder restriction.
#[derive(Clone, Debug, Default)]
pub struct GrayPolicy {
    /// Only symbols whose remainder vector (divisor `2l+1`) is listed may be
    /// mapped.
    pub allowed_remainders: Option<HashSet<Remainder>>,
    /// Magnitude of the error ball explored around each mapped symbol and
    /// checked for the distance-one condition. `None` means `2l`. Smaller
    /// values give mappings that [`gray_validate`] rejects.
    pub neighbor_magnitude: Option<u32>,
}

fn codeword_count(q: u32, g: u32) -> Result<u64> {
    (q as u64)
        .checked_pow(g)
        .filter(|&c| c <= 1 << 32)
        .ok_or_else(|| LmpeError::InvalidParameter(format!("{q}^{g} codewords is too many")))
}

impl GrayMapping {
    /// Builds a mapping from images listed by codeword index; the result is
    /// not validated.
    pub fn from_vectors(k: u32, l: u32, q: u32, g: u32, vectors: Vec<ProbVec>) -> Result<Self> {
        let total = codeword_count(q, g)?;
        if vectors.len() as u64 != total {
            return invalid(format!("expected {total} images, got {}", vectors.len()));
        }
        let mut lookup = HashMap::with_capacity(vectors.len());
        for (c, v) in vectors.iter().enumerate() {
            ProbVec::new(v.values(), k)?;
            if lookup.insert(*v, c as u64).is_some() {
                return invalid(format!("symbol {v} is mapped twice"));
            }
        }
        Ok(GrayMapping {
            k,
            l,
            q,
            g,
            vectors,
            lookup,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn index_to_digits(&self, mut index: u64) -> Vec<FieldElement> {
        let mut digits = vec![FieldElement::ZERO; self.g as usize];
        for d in digits.iter_mut().rev() {
            *d = FieldElement::from_raw((index % self.q as u64) as u32);
            index /= self.q as u64;
        }
        digits
    }

    pub fn digits_to_index(&self, digits: &[FieldElement]) -> Result<u64> {
        if digits.len() != self.g as usize || digits.iter().any(|d| d.value() >= self.q) {
            return invalid(format!("expected {} digits below {}", self.g, self.q));
        }
        Ok(digits
            .iter()
            .fold(0u64, |acc, d| acc * self.q as u64 + d.value() as u64))
    }

    /// Image of a codeword.
    pub fn vector_of(&self, digits: &[FieldElement]) -> Result<ProbVec> {
        Ok(self.vectors[self.digits_to_index(digits)? as usize])
    }

    /// Codeword of a mapped symbol.
    pub fn digits_of(&self, x: &ProbVec) -> Option<Vec<FieldElement>> {
        self.lookup.get(x).map(|&c| self.index_to_digits(c))
    }

    pub fn is_mapped(&self, x: &ProbVec) -> bool {
        self.lookup.contains_key(x)
    }

    /// `(codeword, symbol)` pairs by codeword.
    pub fn pairs(&self) -> impl Iterator<Item = (Vec<FieldElement>, ProbVec)> + '_ {
        self.vectors
            .iter()
            .enumerate()
            .map(|(c, v)| (self.index_to_digits(c as u64), *v))
    }

    /// One line per pair: `d1,d2 -> x1,x2,x3,x4`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# k={} l={} q={} g={}", self.k, self.l, self.q, self.g);
        for (digits, v) in self.pairs() {
            let d: Vec<String> = digits.iter().map(|x| x.value().to_string()).collect();
            let _ = writeln!(out, "{} -> {v}", d.join(","));
        }
        out
    }

    /// Parses [`GrayMapping::to_text`] output.
    pub fn from_text(text: &str, k: u32, l: u32, q: u32, g: u32) -> Result<Self> {
        let total = codeword_count(q, g)? as usize;
        let mut vectors: Vec<Option<ProbVec>> = vec![None; total];
        let shell = GrayMapping {
            k,
            l,
            q,
            g,
            vectors: Vec::new(),
            lookup: HashMap::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |msg: String| LmpeError::Parse { line: i + 1, msg };
            let (left, right) = line
                .split_once("->")
                .ok_or_else(|| parse_err("expected `digits -> symbol`".into()))?;
            let digits = left
                .split(',')
                .map(|d| d.trim().parse::<u32>().map(FieldElement::from_raw))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| parse_err(e.to_string()))?;
            let index = shell
                .digits_to_index(&digits)
                .map_err(|e| parse_err(e.to_string()))?;
            let v: ProbVec = right.trim().parse().map_err(|e: LmpeError| parse_err(e.to_string()))?;
            vectors[index as usize] = Some(v);
        }
        let vectors = vectors
            .into_iter()
            .enumerate()
            .map(|(c, v)| {
                v.ok_or_else(|| LmpeError::Parse {
                    line: 0,
                    msg: format!("codeword index {c} has no image"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GrayMapping::from_vectors(k, l, q, g, vectors)
    }

    /// Fraction of the alphabet used, `q^g / C(k+3,3)`.
    pub fn efficiency(&self) -> Efficiency {
        gray_efficiency(self.q, self.g, self.k)
    }
}

fn hamming_distance(q: u32, g: u32, mut a: u64, mut b: u64) -> u32 {
    let mut d = 0;
    for _ in 0..g {
        if a % q as u64 != b % q as u64 {
            d += 1;
        }
        a /= q as u64;
        b /= q as u64;
    }
    d
}

/// Codewords at Hamming distance one from `c`, ascending.
fn distance_one(q: u32, g: u32, c: u64) -> Vec<u64> {
    let q = q as u64;
    let mut out = Vec::with_capacity((g as u64 * (q - 1)) as usize);
    let mut place = 1u64;
    for _ in 0..g {
        let digit = c / place % q;
        for v in 0..q {
            if v != digit {
                out.push(c - digit * place + v * place);
            }
        }
        place *= q;
    }
    out.sort_unstable();
    out
}

/// Symbols one `magnitude`-limited error away from `x`, excluding `x`.
fn neighbor_indices(x: &ProbVec, magnitude: u32) -> Vec<usize> {
    symbol_error_ball(x, magnitude)
        .iter()
        .filter(|e| !e.is_zero())
        .filter_map(|e| x.apply(e))
        .map(|y| quotient_rank(&y.values()) as usize)
        .collect()
}

/// Greedy breadth-first search for a Gray mapping.
///
/// Mapped symbols are processed in the order they were added; every symbol
/// in the `2l`-ball of the current one is visited once and mapped to the
/// smallest unused codeword at distance one from all its mapped neighbors,
/// if any. When the queue runs dry a new seed (first unvisited symbol, first
/// unused codeword) is added.
pub fn gray_search(k: u32, l: u32, q: u32, g: u32, policy: &GrayPolicy) -> Result<GrayMapping> {
    let total = codeword_count(q, g)?;
    let size = binomial(k as u64 + 3, 3);
    if total > size {
        return invalid(format!(
            "{q}^{g} = {total} codewords exceed the {size} symbols of resolution {k}"
        ));
    }
    if g == 0 {
        return invalid("Gray codewords need g >= 1");
    }
    let radius = policy.neighbor_magnitude.unwrap_or(2 * l);
    let symbols = alphabet(k);
    let allowed: Vec<bool> = match &policy.allowed_remainders {
        Some(set) => symbols.iter().map(|x| set.contains(&split(x, l).remainder)).collect(),
        None => vec![true; symbols.len()],
    };
    let mut visited = vec![false; symbols.len()];
    let mut code_of: Vec<Option<u64>> = vec![None; symbols.len()];
    let mut used = vec![false; total as usize];
    let mut order: Vec<usize> = Vec::with_capacity(total as usize);
    let mut visited_count = 0usize;
    let mut next_seed = 0usize;
    let mut next_free = 0u64;
    let mut i = 0usize;

    let mut first_free = |used: &[bool]| {
        while next_free < total && used[next_free as usize] {
            next_free += 1;
        }
        next_free
    };

    while (order.len() as u64) < total {
        if i == order.len() {
            while next_seed < symbols.len() && (visited[next_seed] || !allowed[next_seed]) {
                if !visited[next_seed] {
                    visited[next_seed] = true;
                    visited_count += 1;
                }
                next_seed += 1;
            }
            if next_seed == symbols.len() {
                break;
            }
            let c = first_free(&used);
            used[c as usize] = true;
            code_of[next_seed] = Some(c);
            visited[next_seed] = true;
            visited_count += 1;
            order.push(next_seed);
        }
        let a = order[i];
        for b in neighbor_indices(&symbols[a], radius) {
            if visited[b] {
                continue;
            }
            visited[b] = true;
            visited_count += 1;
            if !allowed[b] {
                continue;
            }
            let mapped: Vec<u64> = neighbor_indices(&symbols[b], radius)
                .into_iter()
                .filter_map(|n| code_of[n])
                .collect();
            let choice = match mapped.first() {
                None => Some(first_free(&used)).filter(|&c| c < total),
                Some(&anchor) => distance_one(q, g, anchor).into_iter().find(|&c| {
                    !used[c as usize] && mapped.iter().all(|&m| hamming_distance(q, g, c, m) == 1)
                }),
            };
            if let Some(c) = choice {
                used[c as usize] = true;
                code_of[b] = Some(c);
                order.push(b);
                if order.len() as u64 == total {
                    break;
                }
            }
        }
        if visited_count == symbols.len() && (order.len() as u64) < total && i + 1 >= order.len() {
            break;
        }
        i += 1;
    }
    if (order.len() as u64) < total {
        return Err(LmpeError::SearchFailed(format!(
            "Gray search for k={k}, l={l}, q={q}, g={g} mapped only {} of {total} codewords",
            order.len()
        )));
    }
    let mut vectors = vec![ProbVec::from_values([0; 4]); total as usize];
    for (s, c) in code_of.iter().enumerate() {
        if let Some(c) = c {
            vectors[*c as usize] = symbols[s];
        }
    }
    GrayMapping::from_vectors(k, l, q, g, vectors)
}

/// Checks size, injectivity, resolution, and the distance-one condition
/// between every pair of mapped `2l`-neighbors.
pub fn gray_validate(m: &GrayMapping) -> bool {
    let Ok(total) = codeword_count(m.q, m.g) else {
        return false;
    };
    if m.vectors.len() as u64 != total || m.lookup.len() != m.vectors.len() {
        return false;
    }
    m.vectors.iter().enumerate().all(|(c, x)| {
        x.k() == m.k
            && m.lookup.get(x) == Some(&(c as u64))
            && symbol_error_ball(x, 2 * m.l)
                .iter()
                .filter(|e| !e.is_zero())
                .filter_map(|e| x.apply(e))
                .filter_map(|y| m.lookup.get(&y))
                .all(|&d| hamming_distance(m.q, m.g, c as u64, d) == 1)
    })
}

/// Lifts a mapping to resolution `k2 > k` by adding `k2 - k` to the last
/// entry of every image.
pub fn gray_extend(m: &GrayMapping, k2: u32) -> Result<GrayMapping> {
    if k2 <= m.k {
        return invalid(format!("target resolution {k2} must exceed {}", m.k));
    }
    let shift = k2 - m.k;
    let vectors = m
        .vectors
        .iter()
        .map(|x| {
            let mut v = x.values();
            v[3] += shift;
            ProbVec::from_values(v)
        })
        .collect();
    GrayMapping::from_vectors(k2, m.l, m.q, m.g, vectors)
}

/// Smallest `k` with `C(k+3,3) >= q^g · E(2l)`; the greedy search cannot
/// fail from there on.
pub fn gray_existence_k(l: u32, q: u32, g: u32) -> Result<u32> {
    let need = (codeword_count(q, g)? as u128) * e_count(2 * l) as u128;
    let mut k = 0u32;
    while (binomial(k as u64 + 3, 3) as u128) < need {
        k += 1;
    }
    Ok(k)
}

/// An exact ratio `numerator / denominator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Efficiency {
    pub numerator: u128,
    pub denominator: u128,
}

impl Efficiency {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

/// `q^g / C(k+3,3)`, unreduced.
pub fn gray_efficiency(q: u32, g: u32, k: u32) -> Efficiency {
    Efficiency {
        numerator: (q as u128).pow(g),
        denominator: binomial(k as u64 + 3, 3) as u128,
    }
}
