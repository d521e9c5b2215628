//! Arithmetic over small Galois fields GF(p^m).
//!
//! Elements are exchanged in the *integer representation*: the zero element is
//! `0` and the power `α^j` of the primitive element is `j + 1`, so the integers
//! `1..q` enumerate the multiplicative group in power order. Internally each
//! element also has a vector form, the coefficients of its polynomial
//! representation packed base `p` (digit `i` is the coefficient of `α^i`).
//!
//! Polynomials handed in or out as coefficient lists are written with the
//! highest degree first and the constant term last, so `x^3 + 2x + 1` is
//! `[1, 0, 2, 1]` and the element `α + 2` is `[0, 1, 2]`.
//!
//! The default primitive polynomial for each `(p, m)` is the first primitive
//! polynomial in lexicographic order of its non-leading coefficients. For
//! GF(27) that is `x^3 + 2x + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, LmpeError, Result};

/// Largest field order accepted.
pub const MAX_ORDER: u32 = 1 << 16;

/// Fields at most this large get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

/// A field element in integer representation (`0` is zero, `j + 1` is `α^j`).
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw integer without checking it against a field order.
    pub const fn from_raw(value: u32) -> Self {
        FieldElement(value)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An immutable GF(p^m) with exp/log tables.
#[derive(Clone)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    poly: Vec<u32>,
    /// `exp_vec[j]` is the vector form of `α^j`.
    exp_vec: Vec<u32>,
    /// `log_vec[v]` is `j` with `α^j = v`; unused at `v = 0`.
    log_vec: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("primitive_poly", &self.poly)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.poly == other.poly
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, m)` with `q = p^m`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Largest prime power not exceeding `q`.
pub fn largest_prime_power_at_most(q: u32) -> Option<u32> {
    (2..=q).rev().find(|&c| prime_power(c).is_some())
}

impl Field {
    /// Builds GF(p^m). `primitive_poly` lists the `m + 1` coefficients of a
    /// monic polynomial, constant term last; `None` selects the default.
    pub fn new(p: u32, m: u32, primitive_poly: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p) {
            return invalid(format!("characteristic {p} is not prime"));
        }
        if m == 0 {
            return invalid("extension degree must be at least 1");
        }
        let q = (p as u64).pow(m);
        if q > MAX_ORDER as u64 {
            return invalid(format!("field order {p}^{m} exceeds {MAX_ORDER}"));
        }
        let q = q as u32;
        match primitive_poly {
            Some(coeffs) => {
                if coeffs.len() != m as usize + 1 || coeffs[0] != 1 {
                    return invalid(format!(
                        "primitive polynomial must be monic of degree {m}: {coeffs:?}"
                    ));
                }
                if coeffs.iter().any(|&c| c >= p) {
                    return invalid(format!("coefficients must lie in [0, {p}): {coeffs:?}"));
                }
                Self::try_build(p, m, q, coeffs).ok_or_else(|| {
                    LmpeError::InvalidParameter(format!(
                        "polynomial {coeffs:?} is not primitive over GF({p})"
                    ))
                })
            }
            None => {
                let mut coeffs = vec![0u32; m as usize + 1];
                coeffs[0] = 1;
                for tail in 0..q {
                    let mut t = tail;
                    for slot in coeffs[1..].iter_mut().rev() {
                        *slot = t % p;
                        t /= p;
                    }
                    if coeffs[m as usize] == 0 {
                        continue;
                    }
                    if let Some(field) = Self::try_build(p, m, q, &coeffs) {
                        return Ok(field);
                    }
                }
                invalid(format!("no primitive polynomial found for GF({p}^{m})"))
            }
        }
    }

    /// GF(q) with the default polynomial.
    pub fn with_order(q: u32) -> Result<Field> {
        let (p, m) = prime_power(q)
            .ok_or_else(|| LmpeError::InvalidParameter(format!("{q} is not a prime power")))?;
        Field::new(p, m, None)
    }

    fn try_build(p: u32, m: u32, q: u32, coeffs: &[u32]) -> Option<Field> {
        // x^m = -(a_{m-1} x^{m-1} + ... + a_0); `reduce[i]` is the digit
        // contributed to x^i when the top coefficient overflows.
        let reduce: Vec<u32> = (0..m as usize)
            .map(|i| (p - coeffs[m as usize - i]) % p)
            .collect();
        let top = p.pow(m - 1);
        let order = q as usize - 1;
        let mut exp_vec = Vec::with_capacity(order);
        let mut log_vec = vec![u32::MAX; q as usize];
        let mut v = 1u32;
        for j in 0..order {
            if log_vec[v as usize] != u32::MAX {
                return None;
            }
            exp_vec.push(v);
            log_vec[v as usize] = j as u32;
            // multiply by x
            let hi = v / top;
            let shifted = (v % top) * p;
            v = if hi == 0 {
                shifted
            } else {
                let mut out = 0;
                let mut place = 1;
                let mut s = shifted;
                for r in &reduce {
                    let digit = (s % p + hi * r) % p;
                    out += digit * place;
                    s /= p;
                    place *= p;
                }
                out
            };
            if v == 0 {
                return None;
            }
        }
        if v != 1 {
            return None;
        }
        let mut field = Field {
            p,
            m,
            q,
            poly: coeffs.to_vec(),
            exp_vec,
            log_vec,
            add_table: None,
        };
        if q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    let s = field.add_slow(FieldElement(a), FieldElement(b));
                    table[(a * q + b) as usize] = s.0 as u16;
                }
            }
            field.add_table = Some(table);
        }
        Some(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Primitive polynomial coefficients, constant term last.
    pub fn primitive_poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The primitive element `α`.
    pub fn alpha(&self) -> FieldElement {
        self.exp(1)
    }

    /// Validates an integer-representation value.
    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value < self.q {
            Ok(FieldElement(value))
        } else {
            invalid(format!("{value} is not an element of GF({})", self.q))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(FieldElement)
    }

    fn to_vec(&self, a: FieldElement) -> u32 {
        if a.0 == 0 {
            0
        } else {
            self.exp_vec[a.0 as usize - 1]
        }
    }

    fn from_vec(&self, v: u32) -> FieldElement {
        if v == 0 {
            FieldElement(0)
        } else {
            FieldElement(self.log_vec[v as usize] + 1)
        }
    }

    fn add_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (va, vb) = (self.to_vec(a), self.to_vec(b));
        if self.p == 2 {
            return self.from_vec(va ^ vb);
        }
        let (mut x, mut y, mut out, mut place) = (va, vb, 0, 1);
        for _ in 0..self.m {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        self.from_vec(out)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add_table {
            Some(t) => FieldElement(t[(a.0 * self.q + b.0) as usize] as u32),
            None => self.add_slow(a, b),
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        // -1 = α^((q-1)/2) for odd characteristic
        self.mul(a, self.exp(((self.q - 1) / 2) as i64))
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let order = self.q - 1;
        FieldElement((a.0 - 1 + b.0 - 1) % order + 1)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(LmpeError::DivisionByZero);
        }
        let order = self.q - 1;
        Ok(FieldElement((order - (a.0 - 1)) % order + 1))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer exponent; `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: i64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        self.exp((a.0 as i64 - 1) * e)
    }

    /// `α^j`, with `j` reduced modulo `q - 1`.
    pub fn exp(&self, j: i64) -> FieldElement {
        let order = (self.q - 1) as i64;
        FieldElement(j.rem_euclid(order) as u32 + 1)
    }

    /// Exponent `j` in `[0, q - 1)` with `α^j = a`.
    pub fn log(&self, a: FieldElement) -> Result<u32> {
        if a.0 == 0 {
            Err(LmpeError::LogOfZero)
        } else {
            Ok(a.0 - 1)
        }
    }

    /// The element of the prime subfield equal to `c · 1`.
    pub fn from_prime(&self, c: u32) -> FieldElement {
        self.from_vec(c % self.p)
    }

    /// Polynomial representation, `m` coefficients with the constant last.
    pub fn to_poly(&self, a: FieldElement) -> Vec<u32> {
        let mut v = self.to_vec(a);
        let mut out = vec![0u32; self.m as usize];
        for slot in out.iter_mut().rev() {
            *slot = v % self.p;
            v /= self.p;
        }
        out
    }

    /// Inverse of [`Field::to_poly`].
    pub fn from_poly(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.m as usize || coeffs.iter().any(|&c| c >= self.p) {
            return invalid(format!(
                "expected {} coefficients in [0, {}), got {coeffs:?}",
                self.m, self.p
            ));
        }
        let v = coeffs.iter().fold(0u32, |acc, &c| acc * self.p + c);
        Ok(self.from_vec(v))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElement) -> Result<u32> {
        let j = self.log(a)?;
        let n = self.q - 1;
        Ok(n / gcd(n, j))
    }

    /// Sum of a slice.
    pub fn sum<I: IntoIterator<Item = FieldElement>>(&self, items: I) -> FieldElement {
        items
            .into_iter()
            .fold(FieldElement::ZERO, |acc, x| self.add(acc, x))
    }
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Renders a polynomial representation as text, e.g. `α^2+2α`.
pub fn format_poly(coeffs: &[u32]) -> String {
    let deg = coeffs.len();
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let power = deg - 1 - i;
        let coef = if c == 1 && power > 0 {
            String::new()
        } else {
            c.to_string()
        };
        terms.push(match power {
            0 => coef,
            1 => format!("{coef}α"),
            _ => format!("{coef}α^{power}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf27() -> Field {
        Field::new(3, 3, None).unwrap()
    }

    #[test]
    fn default_gf27_polynomial() {
        assert_eq!(gf27().primitive_poly(), &[1, 0, 2, 1]);
    }

    #[test]
    fn gf27_alpha_cubed() {
        let f = gf27();
        let a3 = f.exp(3);
        assert_eq!(a3.value(), 4);
        assert_eq!(f.to_poly(a3), vec![0, 1, 2]);
        assert_eq!(f.log(FieldElement(4)).unwrap(), 3);
    }

    #[test]
    fn gf27_alpha_13_is_two() {
        let f = gf27();
        let a13 = f.exp(13);
        assert_eq!(a13.value(), 14);
        assert_eq!(f.to_poly(a13), vec![0, 0, 2]);
        assert_eq!(f.from_prime(2), a13);
    }

    #[test]
    fn gf27_log_26() {
        let f = gf27();
        assert_eq!(f.log(FieldElement(26)).unwrap(), 25);
        assert_eq!(f.exp(0), FieldElement::ONE);
    }

    #[test]
    fn gf27_mul_by_exponents() {
        let f = gf27();
        assert_eq!(f.mul(FieldElement(13), FieldElement(14)), FieldElement(26));
    }

    #[test]
    fn prime_field_gf3() {
        let f = Field::new(3, 1, None).unwrap();
        assert_eq!(f.q(), 3);
        let two = f.from_prime(2);
        assert_eq!(f.add(two, two), f.one());
        assert_eq!(f.elements().count(), 3);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Field::new(4, 1, None).is_err());
        assert!(Field::new(3, 0, None).is_err());
        // x^3 + x + 1 is reducible over GF(3) (root 1)
        assert!(Field::new(3, 3, Some(&[1, 0, 1, 1])).is_err());
        // x^2 + 1 is irreducible over GF(3) but not primitive
        assert!(Field::new(3, 2, Some(&[1, 0, 1])).is_err());
        assert!(Field::new(3, 3, Some(&[1, 0, 2])).is_err());
        let f = gf27();
        assert!(matches!(
            f.div(f.one(), f.zero()),
            Err(LmpeError::DivisionByZero)
        ));
        assert!(matches!(f.log(f.zero()), Err(LmpeError::LogOfZero)));
        assert!(f.element(27).is_err());
    }

    #[test]
    fn binary_fields() {
        let f = Field::new(2, 3, None).unwrap();
        assert_eq!(f.primitive_poly(), &[1, 0, 1, 1]);
        for a in f.elements() {
            assert_eq!(f.add(a, a), f.zero());
        }
    }

    fn check_axioms(f: &Field) {
        let els: Vec<_> = f.elements().collect();
        for &x in &els {
            assert_eq!(f.add(x, f.zero()), x);
            assert_eq!(f.add(x, f.neg(x)), f.zero());
            if !x.is_zero() {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
            }
        }
        for &x in &els {
            for &y in &els {
                assert_eq!(f.add(x, y), f.add(y, x));
                assert_eq!(f.sub(f.add(x, y), y), x);
            }
        }
        let step = if f.q() > 30 { 7 } else { 1 };
        for &x in els.iter().step_by(step) {
            for &y in els.iter().step_by(step) {
                for &z in &els {
                    assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    assert_eq!(
                        f.mul(x, f.add(y, z)),
                        f.add(f.mul(x, y), f.mul(x, z))
                    );
                    assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                }
            }
        }
        assert_eq!(f.order(f.alpha()).unwrap(), f.q() - 1);
    }

    #[test]
    fn axioms_small_fields() {
        for (p, m) in [(2, 1), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2), (3, 4)] {
            check_axioms(&Field::new(p, m, None).unwrap());
        }
    }

    #[test]
    fn large_field_without_add_table() {
        let f = Field::new(5, 6, None).unwrap();
        assert!(f.add_table.is_none());
        let a = f.exp(123);
        let b = f.exp(4567);
        assert_eq!(f.sub(f.add(a, b), b), a);
        assert_eq!(f.order(f.alpha()).unwrap(), 15624);
    }

    #[test]
    fn poly_round_trip() {
        let f = gf27();
        for a in f.elements() {
            assert_eq!(f.from_poly(&f.to_poly(a)).unwrap(), a);
        }
        assert_eq!(format_poly(&[2, 1, 0]), "2α^2+α");
        assert_eq!(format_poly(&[0, 0, 1]), "1");
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(largest_prime_power_at_most(3375), Some(3373));
        assert_eq!(largest_prime_power_at_most(26), Some(25));
    }
}
