//! Symbol classification: quotient/remainder split under the divisor `2l+1`,
//! maps between remainder vectors and field elements, and the reduced
//! classes generated by a critical vector.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, LmpeError, Result};
use crate::field::{Field, FieldElement};
use crate::prob::{symbol_error_ball, ProbVec, M};

/// A remainder vector, each entry in `[0, 2l]`.
pub type Remainder = [u32; M];

/// Quotient and remainder of a symbol under division by `2l+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RemainderDecomposition {
    pub quotient: [u32; M],
    pub remainder: Remainder,
}

pub fn divisor(l: u32) -> u32 {
    2 * l + 1
}

/// Componentwise Euclidean division by `2l+1`.
pub fn split(x: &ProbVec, l: u32) -> RemainderDecomposition {
    let d = divisor(l);
    let v = x.values();
    RemainderDecomposition {
        quotient: v.map(|c| c / d),
        remainder: v.map(|c| c % d),
    }
}

/// Inverse of [`split`]; the result must have resolution `k`.
pub fn combine(dec: &RemainderDecomposition, l: u32, k: u32) -> Result<ProbVec> {
    let d = divisor(l);
    if dec.remainder.iter().any(|&b| b >= d) {
        return invalid(format!("remainder {:?} has entries >= {d}", dec.remainder));
    }
    let mut values = [0u32; M];
    for j in 0..M {
        values[j] = d * dec.quotient[j] + dec.remainder[j];
    }
    ProbVec::new(values, k)
}

/// All remainder vectors with entry sum `≡ k (mod 2l+1)`, lexicographic.
pub fn remainder_vectors(l: u32, k: u32) -> Vec<Remainder> {
    let d = divisor(l);
    let mut out = Vec::with_capacity((d * d * d) as usize);
    for b0 in 0..d {
        for b1 in 0..d {
            for b2 in 0..d {
                let b3 = (k % d + 3 * d - b0 - b1 - b2) % d;
                out.push([b0, b1, b2, b3]);
            }
        }
    }
    out
}

fn check_remainder(b: &Remainder, l: u32, k: u32) -> Result<()> {
    let d = divisor(l);
    if b.iter().any(|&v| v >= d) {
        return invalid(format!("remainder {b:?} has entries >= {d}"));
    }
    if b.iter().sum::<u32>() % d != k % d {
        return invalid(format!("remainder {b:?} does not sum to {k} mod {d}"));
    }
    Ok(())
}

/// How remainder vectors are assigned to field elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassMapKind {
    /// The fixed 27-entry table for `l = 1`, `k ≡ 0 (mod 3)`.
    TableOne,
    /// Remainder vectors in lexicographic order against integers `0..q`.
    Lexicographic,
    /// `(b1, b2, b3, ·)` read as the polynomial `b1 α² + b2 α + b3` of
    /// GF((2l+1)³); additive, so remainder differences map to field
    /// differences.
    Polynomial,
}

/// `(remainder, element)` pairs of the fixed `l = 1` table.
pub const TABLE_ONE: [(Remainder, u32); 27] = [
    ([0, 0, 0, 0], 0),
    ([1, 1, 1, 0], 1),
    ([2, 2, 2, 0], 2),
    ([0, 1, 1, 1], 3),
    ([1, 2, 2, 1], 4),
    ([2, 0, 0, 1], 5),
    ([0, 2, 2, 2], 6),
    ([1, 0, 0, 2], 7),
    ([2, 1, 1, 2], 8),
    ([0, 0, 1, 2], 9),
    ([1, 1, 2, 2], 10),
    ([2, 2, 0, 2], 11),
    ([0, 0, 2, 1], 12),
    ([1, 1, 0, 1], 13),
    ([2, 2, 1, 1], 14),
    ([0, 2, 1, 0], 15),
    ([1, 0, 2, 0], 16),
    ([2, 1, 0, 0], 17),
    ([0, 1, 0, 2], 18),
    ([1, 2, 1, 2], 19),
    ([2, 0, 2, 2], 20),
    ([0, 2, 0, 1], 21),
    ([1, 0, 1, 1], 22),
    ([2, 1, 2, 1], 23),
    ([0, 1, 2, 0], 24),
    ([1, 2, 0, 0], 25),
    ([2, 0, 1, 0], 26),
];

/// Injective map from (a subset of) remainder vectors into GF(q).
#[derive(Clone, Debug)]
pub struct RemainderClassMap {
    l: u32,
    k: u32,
    q: u32,
    kind: ClassMapKind,
    forward: HashMap<Remainder, FieldElement>,
    backward: Vec<Option<Remainder>>,
}

impl RemainderClassMap {
    fn from_pairs(
        l: u32,
        k: u32,
        q: u32,
        kind: ClassMapKind,
        pairs: impl IntoIterator<Item = (Remainder, FieldElement)>,
    ) -> Result<Self> {
        let mut forward = HashMap::new();
        let mut backward = vec![None; q as usize];
        for (b, e) in pairs {
            check_remainder(&b, l, k)?;
            if e.value() >= q || backward[e.value() as usize].is_some() {
                return invalid(format!("element {e} assigned twice or out of range"));
            }
            if forward.insert(b, e).is_some() {
                return invalid(format!("remainder {b:?} assigned twice"));
            }
            backward[e.value() as usize] = Some(b);
        }
        Ok(RemainderClassMap {
            l,
            k,
            q,
            kind,
            forward,
            backward,
        })
    }

    /// The fixed `l = 1` table, restricted to elements below `q`.
    pub fn table_one(k: u32, q: u32) -> Result<Self> {
        if !k.is_multiple_of(3) || q > 27 {
            return invalid("the fixed table needs l = 1, k ≡ 0 (mod 3) and q <= 27");
        }
        let pairs = TABLE_ONE
            .iter()
            .filter(|(_, e)| *e < q)
            .map(|&(b, e)| (b, FieldElement::from_raw(e)));
        Self::from_pairs(1, k, q, ClassMapKind::TableOne, pairs)
    }

    /// The first `q` remainder vectors in lexicographic order get `0..q`.
    pub fn lexicographic(l: u32, k: u32, q: u32) -> Result<Self> {
        let all = remainder_vectors(l, k);
        if q as usize > all.len() {
            return invalid(format!(
                "field of order {q} exceeds the {} remainder classes",
                all.len()
            ));
        }
        let pairs = all
            .into_iter()
            .take(q as usize)
            .enumerate()
            .map(|(i, b)| (b, FieldElement::from_raw(i as u32)));
        Self::from_pairs(l, k, q, ClassMapKind::Lexicographic, pairs)
    }

    /// Additive embedding into GF((2l+1)³); needs `2l+1` prime.
    pub fn polynomial(l: u32, k: u32, field: &Field) -> Result<Self> {
        let d = divisor(l);
        if field.p() != d || field.m() != 3 {
            return invalid(format!(
                "polynomial class map needs GF({d}^3), got GF({}^{})",
                field.p(),
                field.m()
            ));
        }
        let pairs = remainder_vectors(l, k)
            .into_iter()
            .map(|b| {
                let e = field.from_poly(&b[..3]).expect("entries below p");
                (b, e)
            })
            .collect::<Vec<_>>();
        Self::from_pairs(l, k, field.q(), ClassMapKind::Polynomial, pairs)
    }

    pub fn new(kind: ClassMapKind, l: u32, k: u32, field: &Field) -> Result<Self> {
        match kind {
            ClassMapKind::TableOne => {
                if l != 1 {
                    return invalid("the fixed table is defined for l = 1 only");
                }
                Self::table_one(k, field.q())
            }
            ClassMapKind::Lexicographic => Self::lexicographic(l, k, field.q()),
            ClassMapKind::Polynomial => Self::polynomial(l, k, field),
        }
    }

    /// The fixed table for `l = 1, k ≡ 0 (mod 3), q = 27`, lexicographic
    /// otherwise.
    pub fn canonical(l: u32, k: u32, q: u32) -> Result<Self> {
        if l == 1 && k.is_multiple_of(3) && q == 27 {
            Self::table_one(k, q)
        } else {
            Self::lexicographic(l, k, q)
        }
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn kind(&self) -> ClassMapKind {
        self.kind
    }

    /// Number of mapped remainder vectors.
    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn get(&self, b: &Remainder) -> Option<FieldElement> {
        self.forward.get(b).copied()
    }

    pub fn remainder_of(&self, e: FieldElement) -> Option<Remainder> {
        self.backward.get(e.value() as usize).copied().flatten()
    }

    /// Mapped `(element, remainder)` pairs by element.
    pub fn entries(&self) -> impl Iterator<Item = (FieldElement, Remainder)> + '_ {
        self.backward
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.map(|b| (FieldElement::from_raw(i as u32), b)))
    }
}

/// Field element of `b`, or `None` when `b` lies outside the mapped subset
/// (decoders treat that as an erasure).
pub fn class_index(b: &Remainder, map: &RemainderClassMap) -> Result<Option<FieldElement>> {
    check_remainder(b, map.l, map.k)?;
    Ok(map.get(b))
}

/// The unique symbol within one `l`-limited error of `y` whose remainder is
/// `b`.
pub fn second_layer_recover(y: &ProbVec, b: &Remainder, l: u32) -> Result<ProbVec> {
    symbol_error_ball(y, l)
        .iter()
        .filter_map(|e| y.apply(e))
        .find(|x| split(x, l).remainder == *b)
        .ok_or_else(|| {
            LmpeError::DecodeFailure(format!(
                "no symbol with remainder {b:?} within magnitude {l} of {y}"
            ))
        })
}

/// Whether a remainder-domain difference `d` can be produced by an
/// `l`-limited error: small entries (upward moves) and wrapped large
/// entries (downward moves) balance and total at most `l`.
pub fn is_remainder_error_pattern(d: &Remainder, l: u32) -> bool {
    let modulus = divisor(l);
    if d.iter().any(|&v| v >= modulus) {
        return false;
    }
    let up: u32 = d.iter().filter(|&&v| v <= l).sum();
    let down: u32 = d.iter().filter(|&&v| v > l).map(|&v| modulus - v).sum();
    up == down && up <= l
}

/// Nonzero remainder error patterns, lexicographic.
pub fn remainder_error_patterns(l: u32) -> Vec<Remainder> {
    remainder_vectors(l, 0)
        .into_iter()
        .filter(|d| *d != [0; M] && is_remainder_error_pattern(d, l))
        .collect()
}

fn scale(b: &Remainder, i: u32, modulus: u32) -> Remainder {
    b.map(|v| v * i % modulus)
}

fn add_mod(a: &Remainder, b: &Remainder, modulus: u32) -> Remainder {
    let mut out = [0; M];
    for j in 0..M {
        out[j] = (a[j] + b[j]) % modulus;
    }
    out
}

fn sub_mod(a: &Remainder, b: &Remainder, modulus: u32) -> Remainder {
    let mut out = [0; M];
    for j in 0..M {
        out[j] = (a[j] + modulus - b[j]) % modulus;
    }
    out
}

pub fn is_critical(b: &Remainder, l: u32) -> bool {
    let d = divisor(l);
    b[0] == 1
        && b.iter().all(|&v| v < d)
        && b.iter().sum::<u32>() % d == 0
        && (1..d).all(|i| !is_remainder_error_pattern(&scale(b, i, d), l))
}

/// Every critical vector for magnitude `l`, lexicographic.
pub fn find_critical_vectors(l: u32) -> Vec<Remainder> {
    if l == 0 {
        return Vec::new();
    }
    remainder_vectors(l, 0)
        .into_iter()
        .filter(|b| is_critical(b, l))
        .collect()
}

/// `(2l+1)²` classes of `2l+1` remainder vectors each. Column `i` of a row
/// is its column-0 vector plus `i` times the critical vector, so the first
/// entry of every column-`i` vector is `i`.
#[derive(Clone, Debug)]
pub struct ReducedClassTable {
    l: u32,
    k: u32,
    critical: Remainder,
    rows: Vec<Vec<Remainder>>,
    index: HashMap<Remainder, (usize, usize)>,
}

impl ReducedClassTable {
    /// Wraps arbitrary rows without checking them; see
    /// [`validate_classification`].
    pub fn from_rows(l: u32, k: u32, critical: Remainder, rows: Vec<Vec<Remainder>>) -> Self {
        let mut index = HashMap::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                index.entry(*b).or_insert((r, c));
            }
        }
        ReducedClassTable {
            l,
            k,
            critical,
            rows,
            index,
        }
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn critical(&self) -> Remainder {
        self.critical
    }

    pub fn rows(&self) -> &[Vec<Remainder>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<Remainder> {
        self.rows.get(row)?.get(col).copied()
    }

    /// `(class, column)` of a remainder vector.
    pub fn locate(&self, b: &Remainder) -> Option<(usize, usize)> {
        self.index.get(b).copied()
    }
}

/// Builds the reduced classification generated by `critical`.
pub fn build_reduced_table(l: u32, k: u32, critical: Remainder) -> Result<ReducedClassTable> {
    if !is_critical(&critical, l) {
        return invalid(format!("{critical:?} is not a critical vector for l = {l}"));
    }
    let d = divisor(l);
    let mut column0: Vec<Remainder> = Vec::with_capacity((d * d) as usize);
    for b1 in 0..d {
        for b2 in 0..d {
            let b3 = (k % d + 2 * d - b1 - b2) % d;
            column0.push([0, b1, b2, b3]);
        }
    }
    column0.sort();
    let rows = column0
        .iter()
        .map(|c| {
            (0..d)
                .map(|i| add_mod(c, &scale(&critical, i, d), d))
                .collect()
        })
        .collect();
    Ok(ReducedClassTable::from_rows(l, k, critical, rows))
}

/// Exhaustive check of both conditions: every remainder vector of the
/// table's residue appears in exactly one cell, and no two vectors of a row
/// differ by a remainder error pattern.
pub fn validate_classification(table: &ReducedClassTable, l: u32) -> bool {
    let d = divisor(l);
    let mut seen: HashMap<Remainder, usize> = HashMap::new();
    for row in &table.rows {
        for b in row {
            if b.iter().any(|&v| v >= d) {
                return false;
            }
            *seen.entry(*b).or_default() += 1;
        }
    }
    let expected = remainder_vectors(l, table.k);
    if seen.len() != expected.len()
        || seen.values().any(|&c| c != 1)
        || expected.iter().any(|b| !seen.contains_key(b))
    {
        return false;
    }
    table.rows.iter().all(|row| {
        row.iter().enumerate().all(|(i, a)| {
            row[i + 1..]
                .iter()
                .all(|b| !is_remainder_error_pattern(&sub_mod(a, b, d), l))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: [u32; 4]) -> ProbVec {
        ProbVec::from_values(v)
    }

    #[test]
    fn split_examples() {
        let s = split(&pv([2, 4, 3, 3]), 1);
        assert_eq!(s.quotient, [0, 1, 1, 1]);
        assert_eq!(s.remainder, [2, 1, 0, 0]);
        let s = split(&pv([3, 3, 3, 3]), 1);
        assert_eq!(s.quotient, [1, 1, 1, 1]);
        assert_eq!(s.remainder, [0; 4]);
        let s = split(&pv([0, 0, 0, 17]), 2);
        assert_eq!(s.quotient, [0, 0, 0, 3]);
        assert_eq!(s.remainder, [0, 0, 0, 2]);
    }

    #[test]
    fn combine_examples() {
        let d = RemainderDecomposition {
            quotient: [0, 1, 1, 1],
            remainder: [2, 1, 0, 0],
        };
        assert_eq!(combine(&d, 1, 12).unwrap(), pv([2, 4, 3, 3]));
        let bad = RemainderDecomposition {
            quotient: [0; 4],
            remainder: [0, 0, 1, 2],
        };
        assert!(combine(&bad, 1, 12).is_err());
    }

    #[test]
    fn table_one_lookups() {
        let map = RemainderClassMap::table_one(12, 27).unwrap();
        assert_eq!(map.len(), 27);
        assert_eq!(class_index(&[0, 0, 0, 0], &map).unwrap().unwrap().value(), 0);
        assert_eq!(class_index(&[2, 1, 0, 0], &map).unwrap().unwrap().value(), 17);
        assert_eq!(class_index(&[1, 1, 1, 0], &map).unwrap().unwrap().value(), 1);
        assert!(class_index(&[1, 1, 1, 1], &map).is_err());
        assert!(class_index(&[3, 0, 0, 0], &map).is_err());
        let small = RemainderClassMap::table_one(12, 25).unwrap();
        assert_eq!(class_index(&[2, 0, 1, 0], &small).unwrap(), None);
    }

    #[test]
    fn recover_examples() {
        assert_eq!(
            second_layer_recover(&pv([2, 4, 3, 3]), &[0; 4], 1).unwrap(),
            pv([3, 3, 3, 3])
        );
        assert_eq!(
            second_layer_recover(&pv([2, 4, 3, 3]), &[2, 1, 0, 0], 1).unwrap(),
            pv([2, 4, 3, 3])
        );
        assert!(second_layer_recover(&pv([2, 4, 3, 3]), &[0, 2, 1, 0], 1).is_err());
    }

    #[test]
    fn error_pattern_examples() {
        assert!(is_remainder_error_pattern(&[0, 0, 1, 2], 1));
        assert!(!is_remainder_error_pattern(&[1, 1, 1, 0], 1));
        assert!(is_remainder_error_pattern(&[0; 4], 1));
        assert_eq!(remainder_error_patterns(1).len(), 12);
    }

    #[test]
    fn critical_vectors_examples() {
        assert!(find_critical_vectors(1).contains(&[1, 1, 1, 0]));
        assert!(find_critical_vectors(4).contains(&[1, 4, 6, 7]));
        assert!(find_critical_vectors(5).is_empty());
    }

    #[test]
    fn reduced_table_examples() {
        let t = build_reduced_table(1, 12, [1, 1, 1, 0]).unwrap();
        assert_eq!((t.num_rows(), t.num_cols()), (9, 3));
        assert_eq!(t.rows()[0], vec![[0, 0, 0, 0], [1, 1, 1, 0], [2, 2, 2, 0]]);
        assert!(validate_classification(&t, 1));
        let t14 = build_reduced_table(1, 14, [1, 1, 1, 0]).unwrap();
        assert_eq!(t14.cell(1, 0), Some([0, 0, 1, 1]));
        assert!(validate_classification(&t14, 1));
        assert!(build_reduced_table(1, 12, [1, 0, 2, 0]).is_err());
    }

    #[test]
    fn validation_catches_defects() {
        let t = build_reduced_table(1, 12, [1, 1, 1, 0]).unwrap();
        let mut rows = t.rows().to_vec();
        rows[1][0] = [0, 0, 0, 0];
        assert!(!validate_classification(
            &ReducedClassTable::from_rows(1, 12, [1, 1, 1, 0], rows),
            1
        ));
        // swap so that (0,0,0,0) and (0,0,1,2) share a row, keeping an exact cover
        let mut rows = t.rows().to_vec();
        let (r, c) = t.locate(&[0, 0, 1, 2]).unwrap();
        let moved = rows[0][1];
        rows[0][1] = [0, 0, 1, 2];
        rows[r][c] = moved;
        assert!(!validate_classification(
            &ReducedClassTable::from_rows(1, 12, [1, 1, 1, 0], rows),
            1
        ));
    }
}
