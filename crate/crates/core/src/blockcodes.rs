//! Linear block codes over GF(q): Hamming, narrow-sense BCH with
//! errors-and-erasures decoding, and the improved Hamming code that corrects
//! one error drawn from a fixed error set.
//!
//! Every code keeps its parity-check matrix in systematic form `H = [A | I]`,
//! information positions first and parity positions last, so a codeword is
//! the information word followed by `-A·u`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{invalid, LmpeError, Result};
use crate::field::{gcd, Field, FieldElement};

/// Which family a [`BlockCode`] belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeKind {
    Hamming {
        r: usize,
    },
    /// Narrow-sense BCH with roots `β^1..β^(δ-1)` in GF(q^w).
    Bch {
        w: u32,
        delta: usize,
    },
    ImprovedHamming {
        r: usize,
        errors: Vec<FieldElement>,
        scalars: Vec<FieldElement>,
    },
}

/// Result of a successful decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub codeword: Vec<FieldElement>,
    /// Non-erased positions whose value was changed.
    pub corrected: Vec<usize>,
    pub erasures: usize,
}

#[derive(Clone, Debug)]
struct BchDecoder {
    ext: Field,
    /// Image of each small-field element (by integer value) in GF(q^w).
    embed: Vec<FieldElement>,
    restrict: HashMap<FieldElement, FieldElement>,
}

#[derive(Clone, Debug)]
pub struct BlockCode {
    field: Field,
    kind: CodeKind,
    full_n: usize,
    shortened: usize,
    r: usize,
    /// Columns of the full-length parity-check matrix.
    columns: Vec<Vec<FieldElement>>,
    /// Syndrome to `(position, error value)` for single-error decoding.
    syndromes: HashMap<Vec<FieldElement>, (usize, FieldElement)>,
    bch: Option<BchDecoder>,
}

/// Vectors of GF(q)^r whose first nonzero entry is one, lexicographic.
fn normalized_vectors(q: u32, r: usize) -> Vec<Vec<FieldElement>> {
    let mut out = Vec::new();
    for lead in 0..r {
        let tail = r - lead - 1;
        let count = (q as u64).pow(tail as u32);
        for idx in 0..count {
            let mut v = vec![FieldElement::ZERO; r];
            v[lead] = FieldElement::ONE;
            let mut x = idx;
            for slot in v[lead + 1..].iter_mut().rev() {
                *slot = FieldElement::from_raw((x % q as u64) as u32);
                x /= q as u64;
            }
            out.push(v);
        }
    }
    out
}

fn unit(r: usize, j: usize) -> Vec<FieldElement> {
    let mut v = vec![FieldElement::ZERO; r];
    v[j] = FieldElement::ONE;
    v
}

fn is_unit(v: &[FieldElement]) -> bool {
    v.iter().filter(|x| !x.is_zero()).count() == 1 && v.contains(&FieldElement::ONE)
}

fn scale_vec(field: &Field, a: FieldElement, v: &[FieldElement]) -> Vec<FieldElement> {
    v.iter().map(|&x| field.mul(a, x)).collect()
}

/// Evaluates `poly` (ascending coefficients) at `x`.
fn poly_eval(field: &Field, poly: &[FieldElement], x: FieldElement) -> FieldElement {
    poly.iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
}

fn poly_mul(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    out
}

fn trim(poly: &mut Vec<FieldElement>) {
    while poly.len() > 1 && poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
}

fn degree(poly: &[FieldElement]) -> usize {
    poly.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

/// Solves `M x = b` when the solution is unique; `m` is given by columns.
fn solve_unique(
    field: &Field,
    columns: &[Vec<FieldElement>],
    rhs: &[FieldElement],
) -> Option<Vec<FieldElement>> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut a: Vec<Vec<FieldElement>> = (0..rows)
        .map(|i| {
            let mut row: Vec<FieldElement> = columns.iter().map(|c| c[i]).collect();
            row.push(rhs[i]);
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for c in 0..cols {
        let found = (pivot_row..rows).find(|&i| !a[i][c].is_zero())?;
        a.swap(pivot_row, found);
        let inv = field.inv(a[pivot_row][c]).ok()?;
        for x in a[pivot_row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows {
            if i != pivot_row && !a[i][c].is_zero() {
                let f = a[i][c];
                for j in 0..=cols {
                    let v = field.mul(f, a[pivot_row][j]);
                    a[i][j] = field.sub(a[i][j], v);
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if a[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&p| a[p][cols]).collect())
}

impl BlockCode {
    fn from_columns(field: &Field, kind: CodeKind, columns: Vec<Vec<FieldElement>>, r: usize) -> Self {
        BlockCode {
            field: field.clone(),
            kind,
            full_n: columns.len(),
            shortened: 0,
            r,
            columns,
            syndromes: HashMap::new(),
            bch: None,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn kind(&self) -> &CodeKind {
        &self.kind
    }

    /// Code length after shortening.
    pub fn n(&self) -> usize {
        self.full_n - self.shortened
    }

    /// Information length after shortening.
    pub fn kdim(&self) -> usize {
        self.full_n - self.r - self.shortened
    }

    /// Number of parity symbols.
    pub fn redundancy(&self) -> usize {
        self.r
    }

    pub fn full_length(&self) -> usize {
        self.full_n
    }

    pub fn shortened_by(&self) -> usize {
        self.shortened
    }

    /// Designed (or guaranteed) minimum distance.
    pub fn designed_distance(&self) -> usize {
        match &self.kind {
            CodeKind::Hamming { .. } | CodeKind::ImprovedHamming { .. } => 3,
            CodeKind::Bch { delta, .. } => *delta,
        }
    }

    /// Drops the first `s` information positions (fixed to zero).
    pub fn shorten(&self, s: usize) -> Result<BlockCode> {
        if s > self.kdim() {
            return invalid(format!(
                "cannot shorten by {s}: only {} information symbols",
                self.kdim()
            ));
        }
        let mut code = self.clone();
        code.shortened += s;
        Ok(code)
    }

    /// Shortens to exactly `kdim` information symbols.
    pub fn shorten_to(&self, kdim: usize) -> Result<BlockCode> {
        if kdim > self.kdim() {
            return invalid(format!(
                "code has only {} information symbols, {kdim} requested",
                self.kdim()
            ));
        }
        self.shorten(self.kdim() - kdim)
    }

    /// `r × n` parity-check matrix (after shortening).
    pub fn parity_check(&self) -> Vec<Vec<FieldElement>> {
        (0..self.r)
            .map(|j| self.columns[self.shortened..].iter().map(|c| c[j]).collect())
            .collect()
    }

    /// Parity-check matrix as integer-representation CSV.
    pub fn parity_check_csv(&self) -> String {
        let mut out = String::new();
        for row in self.parity_check() {
            let cells: Vec<String> = row.iter().map(|e| e.value().to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn check_word(&self, word: &[FieldElement], expected: usize) -> Result<()> {
        if word.len() != expected {
            return invalid(format!("expected {expected} symbols, got {}", word.len()));
        }
        if let Some(bad) = word.iter().find(|e| e.value() >= self.field.q()) {
            return invalid(format!("{bad} is not an element of GF({})", self.field.q()));
        }
        Ok(())
    }

    /// Systematic encoding: the information symbols followed by the parities.
    pub fn encode(&self, info: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.check_word(info, self.kdim())?;
        let f = &self.field;
        let mut parity = vec![FieldElement::ZERO; self.r];
        for (u, col) in info.iter().zip(&self.columns[self.shortened..]) {
            if u.is_zero() {
                continue;
            }
            for (p, &h) in parity.iter_mut().zip(col) {
                *p = f.sub(*p, f.mul(*u, h));
            }
        }
        let mut out = info.to_vec();
        out.extend(parity);
        Ok(out)
    }

    /// `H · word` for a word of the shortened length.
    pub fn syndrome(&self, word: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.check_word(word, self.n())?;
        Ok(self.syndrome_of(word, self.shortened))
    }

    fn syndrome_of(&self, word: &[FieldElement], offset: usize) -> Vec<FieldElement> {
        let f = &self.field;
        let mut s = vec![FieldElement::ZERO; self.r];
        for (y, col) in word.iter().zip(&self.columns[offset..]) {
            if y.is_zero() {
                continue;
            }
            for (acc, &h) in s.iter_mut().zip(col) {
                *acc = f.add(*acc, f.mul(*y, h));
            }
        }
        s
    }

    pub fn is_codeword(&self, word: &[FieldElement]) -> Result<bool> {
        Ok(self.syndrome(word)?.iter().all(|s| s.is_zero()))
    }

    /// Corrects errors and fills erasures. Guaranteed when
    /// `2·errors + erasures` is below the designed distance; patterns outside
    /// that are either corrected or reported as a failure.
    pub fn decode(&self, received: &[FieldElement], erasures: &[usize]) -> Result<Decoded> {
        self.check_word(received, self.n())?;
        let mut erased = erasures.to_vec();
        erased.sort_unstable();
        erased.dedup();
        if let Some(&bad) = erased.iter().find(|&&e| e >= self.n()) {
            return invalid(format!("erasure position {bad} outside length {}", self.n()));
        }
        let s = self.shortened;
        let mut full = vec![FieldElement::ZERO; s];
        full.extend_from_slice(received);
        for &e in &erased {
            full[s + e] = FieldElement::ZERO;
        }
        let full_erased: Vec<usize> = erased.iter().map(|&e| e + s).collect();
        match &self.kind {
            CodeKind::Bch { .. } => self.decode_bch(&mut full, &full_erased)?,
            _ => self.decode_single(&mut full, &full_erased)?,
        }
        if full[..s].iter().any(|x| !x.is_zero()) {
            return Err(LmpeError::DecodeFailure(
                "correction fell in the shortened region".into(),
            ));
        }
        if !self.syndrome_of(&full, 0).iter().all(|x| x.is_zero()) {
            return Err(LmpeError::DecodeFailure("residual syndrome is nonzero".into()));
        }
        let codeword = full.split_off(s);
        let corrected = (0..self.n())
            .filter(|i| erased.binary_search(i).is_err() && codeword[*i] != received[*i])
            .collect();
        Ok(Decoded {
            codeword,
            corrected,
            erasures: erased.len(),
        })
    }

    fn decode_single(&self, full: &mut [FieldElement], erased: &[usize]) -> Result<()> {
        let f = &self.field;
        let syn = self.syndrome_of(full, 0);
        if !erased.is_empty() {
            let cols: Vec<Vec<FieldElement>> =
                erased.iter().map(|&e| self.columns[e].clone()).collect();
            let rhs: Vec<FieldElement> = syn.iter().map(|&x| f.neg(x)).collect();
            let values = solve_unique(f, &cols, &rhs).ok_or_else(|| {
                LmpeError::DecodeFailure(format!("{} erasures cannot be resolved", erased.len()))
            })?;
            for (&e, v) in erased.iter().zip(values) {
                full[e] = v;
            }
            return Ok(());
        }
        if syn.iter().all(|x| x.is_zero()) {
            return Ok(());
        }
        let found = match self.kind {
            // Hamming columns are normalized: scale the syndrome to a leading one
            CodeKind::Hamming { .. } => {
                let lead = *syn.iter().find(|x| !x.is_zero()).expect("nonzero syndrome");
                let inv = f.inv(lead)?;
                self.syndromes
                    .get(&scale_vec(f, inv, &syn))
                    .map(|&(pos, _)| (pos, lead))
            }
            _ => self.syndromes.get(&syn).copied(),
        };
        let (pos, value) =
            found.ok_or_else(|| LmpeError::DecodeFailure("syndrome matches no correctable error".into()))?;
        full[pos] = f.sub(full[pos], value);
        Ok(())
    }

    fn decode_bch(&self, full: &mut [FieldElement], erased: &[usize]) -> Result<()> {
        let CodeKind::Bch { delta, .. } = self.kind else {
            unreachable!()
        };
        let dec = self.bch.as_ref().expect("bch decoder data");
        let ext = &dec.ext;
        let n = self.full_n;
        let two_t = delta - 1;
        let rho = erased.len();
        if rho > two_t {
            return Err(LmpeError::DecodeFailure(format!(
                "{rho} erasures exceed the {two_t} the code can fill"
            )));
        }
        // locator of position i is β^(n-1-i)
        let locator = |i: usize| ext.exp((n - 1 - i) as i64);
        let mut syn = vec![FieldElement::ZERO; two_t];
        for (i, &y) in full.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let y = dec.embed[y.value() as usize];
            let x = locator(i);
            let mut xp = x;
            for s in syn.iter_mut() {
                *s = ext.add(*s, ext.mul(y, xp));
                xp = ext.mul(xp, x);
            }
        }
        if rho == 0 && syn.iter().all(|s| s.is_zero()) {
            return Ok(());
        }
        // erasure locator Γ(x) = Π (1 - X_e x)
        let mut gamma = vec![FieldElement::ONE];
        for &e in erased {
            gamma = poly_mul(ext, &gamma, &[FieldElement::ONE, ext.neg(locator(e))]);
        }
        let mut lambda = gamma.clone();
        let mut b = gamma;
        let mut l = rho;
        for r in (rho + 1)..=two_t {
            let mut delta_r = FieldElement::ZERO;
            for (j, &c) in lambda.iter().enumerate() {
                if j < r {
                    delta_r = ext.add(delta_r, ext.mul(c, syn[r - j - 1]));
                }
            }
            let mut xb = vec![FieldElement::ZERO];
            xb.extend_from_slice(&b);
            if delta_r.is_zero() {
                b = xb;
                continue;
            }
            let mut t = lambda.clone();
            t.resize(t.len().max(xb.len()), FieldElement::ZERO);
            for (ti, &v) in t.iter_mut().zip(&xb) {
                *ti = ext.sub(*ti, ext.mul(delta_r, v));
            }
            if 2 * l < r + rho {
                let inv = ext.inv(delta_r)?;
                b = lambda.iter().map(|&c| ext.mul(inv, c)).collect();
                l = r + rho - l;
            } else {
                b = xb;
            }
            lambda = t;
        }
        trim(&mut lambda);
        let deg = degree(&lambda);
        if deg < rho || 2 * (deg - rho) + rho > two_t {
            return Err(LmpeError::DecodeFailure(format!(
                "locator degree {deg} exceeds the correction radius"
            )));
        }
        let roots: Vec<usize> = (0..n)
            .filter(|&i| {
                let xinv = ext.inv(locator(i)).expect("nonzero");
                poly_eval(ext, &lambda, xinv).is_zero()
            })
            .collect();
        if roots.len() != deg {
            return Err(LmpeError::DecodeFailure(format!(
                "locator of degree {deg} has {} roots in range",
                roots.len()
            )));
        }
        let s_poly: Vec<FieldElement> = syn.clone();
        let mut omega = poly_mul(ext, &s_poly, &lambda);
        omega.truncate(two_t);
        let derivative: Vec<FieldElement> = lambda
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| {
                let times = ext.from_prime((j as u32) % ext.p());
                ext.mul(times, c)
            })
            .collect();
        for i in roots {
            let xinv = ext.inv(locator(i))?;
            let num = poly_eval(ext, &omega, xinv);
            let den = poly_eval(ext, &derivative, xinv);
            if den.is_zero() {
                return Err(LmpeError::DecodeFailure("repeated locator root".into()));
            }
            let e = ext.neg(ext.div(num, den)?);
            let small = *dec.restrict.get(&e).ok_or_else(|| {
                LmpeError::DecodeFailure("error value outside the symbol field".into())
            })?;
            full[i] = self.field.sub(full[i], small);
        }
        Ok(())
    }
}

/// Hamming code with `r` parity symbols, `n = (q^r - 1)/(q - 1)`.
pub fn hamming_make(field: &Field, r: usize) -> Result<BlockCode> {
    if r < 2 {
        return invalid("Hamming codes need r >= 2");
    }
    let q = field.q();
    let total = ((q as u64).pow(r as u32) - 1) / (q as u64 - 1);
    if total > 1 << 20 {
        return invalid(format!("Hamming length {total} is too large"));
    }
    let mut columns: Vec<Vec<FieldElement>> = normalized_vectors(q, r)
        .into_iter()
        .filter(|v| !is_unit(v))
        .collect();
    columns.extend((0..r).map(|j| unit(r, j)));
    let mut code = BlockCode::from_columns(field, CodeKind::Hamming { r }, columns, r);
    code.syndromes = single_error_table(field, &code.columns, &[FieldElement::ONE]);
    Ok(code)
}

fn single_error_table(
    field: &Field,
    columns: &[Vec<FieldElement>],
    errors: &[FieldElement],
) -> HashMap<Vec<FieldElement>, (usize, FieldElement)> {
    let mut table = HashMap::new();
    for (pos, col) in columns.iter().enumerate() {
        for &e in errors {
            table.entry(scale_vec(field, e, col)).or_insert((pos, e));
        }
    }
    table
}

/// Narrow-sense BCH over `field` of length `q^w - 1` correcting `t` errors.
pub fn bch_make(field: &Field, w: u32, t: usize) -> Result<BlockCode> {
    let n = (field.q() as u64).checked_pow(w).map(|x| x - 1);
    if let Some(n) = n {
        if 2 * w as u64 * t as u64 >= n {
            return invalid(format!("2wt = {} must be below n = {n}", 2 * w as usize * t));
        }
    }
    bch_make_designed(field, w, 2 * t + 1)
}

/// Narrow-sense BCH with designed distance `delta`.
pub fn bch_make_designed(field: &Field, w: u32, delta: usize) -> Result<BlockCode> {
    if w == 0 || delta == 0 {
        return invalid("BCH needs w >= 1 and designed distance >= 1");
    }
    let ext = Field::new(field.p(), field.m() * w, None)?;
    let q = field.q() as u64;
    let big_q = ext.q() as u64;
    let n = (big_q - 1) as usize;
    if delta > n {
        return invalid(format!("designed distance {delta} exceeds length {n}"));
    }
    // embedding of GF(q) into GF(q^w): α ↦ γ^j for a conjugate root γ^j of
    // the small field's primitive polynomial
    let step = ((big_q - 1) / (q - 1)) as i64;
    let poly = field.primitive_poly();
    let order = (q - 1) as u32;
    let j = (1..=order)
        .filter(|&j| gcd(j, order) == 1)
        .find(|&j| {
            let x = ext.exp(step * j as i64);
            poly.iter()
                .fold(FieldElement::ZERO, |acc, &c| ext.add(ext.mul(acc, x), ext.from_prime(c)))
                .is_zero()
        })
        .ok_or_else(|| LmpeError::InvalidParameter("no subfield embedding found".into()))?;
    let mut embed = vec![FieldElement::ZERO; q as usize];
    let mut restrict = HashMap::new();
    restrict.insert(FieldElement::ZERO, FieldElement::ZERO);
    for i in 0..(q - 1) {
        let big = ext.exp(step * j as i64 * i as i64);
        embed[i as usize + 1] = big;
        restrict.insert(big, FieldElement::from_raw(i as u32 + 1));
    }
    // union of cyclotomic cosets of 1..delta-1
    let mut roots = vec![false; n];
    for s in 1..delta {
        let mut x = s % n;
        while !roots[x] {
            roots[x] = true;
            x = (x as u64 * q % n as u64) as usize;
        }
    }
    let mut g_ext = vec![FieldElement::ONE];
    for (u, _) in roots.iter().enumerate().filter(|(_, &b)| b) {
        g_ext = poly_mul(&ext, &g_ext, &[ext.neg(ext.exp(u as i64)), FieldElement::ONE]);
    }
    let g: Vec<FieldElement> = g_ext
        .iter()
        .map(|c| {
            restrict.get(c).copied().ok_or_else(|| {
                LmpeError::InvalidParameter("generator has coefficients outside GF(q)".into())
            })
        })
        .collect::<Result<_>>()?;
    let r = g.len() - 1;
    if r >= n {
        return invalid(format!("BCH with designed distance {delta} has no information symbols"));
    }
    // column of degree d: coefficients of x^d mod g, row j holds x^(r-1-j)
    let mut rem_by_degree = Vec::with_capacity(n);
    let mut cur = vec![FieldElement::ZERO; r];
    if r > 0 {
        cur[0] = FieldElement::ONE;
    }
    for _ in 0..n {
        rem_by_degree.push(cur.clone());
        if r == 0 {
            continue;
        }
        // multiply by x and reduce with the monic g
        let top = cur[r - 1];
        for i in (1..r).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = FieldElement::ZERO;
        if !top.is_zero() {
            for (i, c) in cur.iter_mut().enumerate() {
                *c = field.sub(*c, field.mul(top, g[i]));
            }
        }
    }
    let columns = (0..n)
        .map(|pos| {
            let asc = &rem_by_degree[n - 1 - pos];
            (0..r).map(|j| asc[r - 1 - j]).collect()
        })
        .collect();
    let mut code = BlockCode::from_columns(field, CodeKind::Bch { w, delta }, columns, r);
    code.bch = Some(BchDecoder {
        ext,
        embed,
        restrict,
    });
    Ok(code)
}

/// Greedy scalar scan: `α^e` for increasing `e` joins `ℐ` when
/// `i·e1 ≠ j·e2` for all `e1, e2` in the error set and all accepted `j`.
pub fn improved_scalars(field: &Field, errors: &[FieldElement]) -> Vec<FieldElement> {
    let mut accepted: Vec<FieldElement> = Vec::new();
    let mut used: std::collections::HashSet<FieldElement> = std::collections::HashSet::new();
    for e in 0..(field.q() - 1) {
        let i = field.exp(e as i64);
        let products: Vec<FieldElement> = errors.iter().map(|&x| field.mul(i, x)).collect();
        if products.iter().all(|p| !used.contains(p)) {
            used.extend(products);
            accepted.push(i);
        }
    }
    accepted
}

/// Improved Hamming code: the columns `i·h` for every normalized `h` and
/// every scalar `i` of [`improved_scalars`].
pub fn improved_hamming_make(field: &Field, r: usize, errors: &[FieldElement]) -> Result<BlockCode> {
    if r < 2 {
        return invalid("improved Hamming codes need r >= 2");
    }
    if errors.is_empty() || errors.iter().any(|e| e.is_zero() || e.value() >= field.q()) {
        return invalid("the error set must hold nonzero field elements");
    }
    let mut errs = errors.to_vec();
    errs.sort_unstable();
    errs.dedup();
    let scalars = improved_scalars(field, &errs);
    let base = normalized_vectors(field.q(), r);
    let total = scalars.len() as u64 * base.len() as u64;
    if total > 1 << 20 {
        return invalid(format!("improved Hamming length {total} is too large"));
    }
    let mut columns = Vec::with_capacity(total as usize);
    for &i in &scalars {
        for h in &base {
            if i == FieldElement::ONE && is_unit(h) {
                continue;
            }
            columns.push(scale_vec(field, i, h));
        }
    }
    columns.extend((0..r).map(|j| unit(r, j)));
    let kind = CodeKind::ImprovedHamming {
        r,
        errors: errs.clone(),
        scalars,
    };
    let mut code = BlockCode::from_columns(field, kind, columns, r);
    code.syndromes = single_error_table(field, &code.columns, &errs);
    Ok(code)
}

/// Number of nonzero remainder error patterns for magnitude `l`.
pub fn error_pattern_count(l: u32) -> u64 {
    let l = l as u64;
    (10 * l * l * l + 15 * l * l + 11 * l) / 3
}

/// Largest number of scalar classes an improved Hamming code over GF(q)
/// can use.
pub fn i_max(l: u32, q: u32) -> u64 {
    let e = error_pattern_count(l);
    if e == 0 {
        return 0;
    }
    (q as u64 - 1) / e
}

/// The error set `{α^(I_max·j)}` that lets the greedy scan accept
/// `I_max` scalars.
pub fn optimal_error_set(field: &Field, l: u32) -> Result<Vec<FieldElement>> {
    let step = i_max(l, field.q());
    if step == 0 {
        return invalid(format!(
            "GF({}) is too small for the {} error patterns of magnitude {l}",
            field.q(),
            error_pattern_count(l)
        ));
    }
    Ok((0..error_pattern_count(l))
        .map(|j| field.exp((step * j) as i64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: u32) -> FieldElement {
        FieldElement::from_raw(v)
    }

    fn table_five() -> Vec<FieldElement> {
        [1, 2, 3, 4, 5, 13, 14, 15, 16, 17, 18, 26].map(fe).to_vec()
    }

    #[test]
    fn hamming_dimensions() {
        let f27 = Field::with_order(27).unwrap();
        let c = hamming_make(&f27, 2).unwrap();
        assert_eq!((c.n(), c.kdim()), (28, 26));
        let c = hamming_make(&Field::with_order(9).unwrap(), 2).unwrap();
        assert_eq!((c.n(), c.kdim()), (10, 8));
        let c = hamming_make(&Field::with_order(2).unwrap(), 3).unwrap();
        assert_eq!((c.n(), c.kdim()), (7, 4));
        assert!(hamming_make(&f27, 1).is_err());
    }

    #[test]
    fn hamming_corrects_every_single_error() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = Field::with_order(q).unwrap();
            let c = hamming_make(&f, 2).unwrap();
            let info: Vec<FieldElement> = (0..c.kdim()).map(|i| fe(i as u32 % q)).collect();
            let cw = c.encode(&info).unwrap();
            assert!(c.is_codeword(&cw).unwrap());
            for pos in 0..c.n() {
                for e in f.nonzero_elements() {
                    let mut y = cw.clone();
                    y[pos] = f.add(y[pos], e);
                    let d = c.decode(&y, &[]).unwrap();
                    assert_eq!(d.codeword, cw);
                    assert_eq!(d.corrected, vec![pos]);
                }
            }
        }
    }

    #[test]
    fn hamming_fills_two_erasures() {
        let f = Field::with_order(27).unwrap();
        let c = hamming_make(&f, 2).unwrap();
        let info: Vec<FieldElement> = (0..26).map(|i| fe(i as u32)).collect();
        let cw = c.encode(&info).unwrap();
        let mut y = cw.clone();
        y[3] = fe(9);
        y[27] = fe(1);
        let d = c.decode(&y, &[3, 27]).unwrap();
        assert_eq!(d.codeword, cw);
        assert_eq!(d.erasures, 2);
        assert!(c.decode(&y, &[1, 3, 27]).is_err());
    }

    #[test]
    fn bch_small_code_parameters() {
        let f3 = Field::with_order(3).unwrap();
        let c = bch_make(&f3, 2, 1).unwrap();
        assert_eq!(c.n(), 8);
        assert!(c.redundancy() <= 4);
        let f27 = Field::with_order(27).unwrap();
        let rs = bch_make(&f27, 1, 1).unwrap();
        assert_eq!((rs.n(), rs.redundancy()), (26, 2));
        let id = bch_make(&f27, 1, 0).unwrap();
        assert_eq!(id.redundancy(), 0);
        assert!(bch_make(&f3, 1, 1).is_err());
    }

    #[test]
    fn bch_minimum_distance_exhaustive() {
        let f3 = Field::with_order(3).unwrap();
        let c = bch_make(&f3, 2, 1).unwrap();
        let k = c.kdim();
        let mut min_weight = usize::MAX;
        for idx in 1..3u32.pow(k as u32) {
            let mut x = idx;
            let info: Vec<FieldElement> = (0..k)
                .map(|_| {
                    let d = x % 3;
                    x /= 3;
                    fe(d)
                })
                .collect();
            let cw = c.encode(&info).unwrap();
            min_weight = min_weight.min(cw.iter().filter(|v| !v.is_zero()).count());
        }
        assert!(min_weight >= 3);
    }

    #[test]
    fn bch_single_errors_exhaustive() {
        let f3 = Field::with_order(3).unwrap();
        let c = bch_make(&f3, 2, 1).unwrap();
        let info: Vec<FieldElement> = (0..c.kdim()).map(|i| fe((i as u32 * 2 + 1) % 3)).collect();
        let cw = c.encode(&info).unwrap();
        for pos in 0..8 {
            for e in f3.nonzero_elements() {
                let mut y = cw.clone();
                y[pos] = f3.add(y[pos], e);
                assert_eq!(c.decode(&y, &[]).unwrap().codeword, cw);
            }
        }
    }

    #[test]
    fn bch_errors_and_erasures() {
        let f27 = Field::with_order(27).unwrap();
        let c = bch_make_designed(&f27, 2, 9).unwrap().shorten_to(16).unwrap();
        assert_eq!((c.n(), c.redundancy()), (32, 16));
        let info: Vec<FieldElement> = (0..16).map(|i| fe((i * 5 + 3) % 27)).collect();
        let cw = c.encode(&info).unwrap();
        let mut y = cw.clone();
        y[0] = f27.add(y[0], fe(4));
        y[7] = f27.add(y[7], fe(20));
        y[20] = f27.add(y[20], fe(1));
        y[31] = fe(0);
        y[12] = fe(5);
        let d = c.decode(&y, &[31, 12]).unwrap();
        assert_eq!(d.codeword, cw);
        let mut corrected = d.corrected.clone();
        corrected.sort();
        assert_eq!(corrected, vec![0, 7, 20]);
    }

    #[test]
    fn improved_hamming_from_error_table() {
        let f = Field::with_order(27).unwrap();
        let c = improved_hamming_make(&f, 2, &table_five()).unwrap();
        assert_eq!(c.n(), 56);
        match c.kind() {
            CodeKind::ImprovedHamming { scalars, .. } => assert_eq!(scalars, &vec![fe(1), fe(7)]),
            _ => unreachable!(),
        }
        let c3 = improved_hamming_make(&f, 3, &table_five()).unwrap();
        assert_eq!(c3.n(), 1514);
        let all: Vec<FieldElement> = f.nonzero_elements().collect();
        let plain = improved_hamming_make(&f, 2, &all).unwrap();
        assert_eq!(plain.n(), 28);
    }

    #[test]
    fn improved_hamming_syndromes_distinct() {
        let f = Field::with_order(27).unwrap();
        let c = improved_hamming_make(&f, 2, &table_five()).unwrap();
        let h = c.parity_check();
        let mut seen = std::collections::HashSet::new();
        for pos in 0..c.n() {
            for e in table_five() {
                let s: Vec<FieldElement> = h.iter().map(|row| f.mul(e, row[pos])).collect();
                assert!(s.iter().any(|x| !x.is_zero()));
                assert!(seen.insert(s));
            }
        }
    }

    #[test]
    fn imax_values() {
        assert_eq!(i_max(1, 27), 2);
        assert_eq!(i_max(2, 125), 2);
        assert_eq!(i_max(1, 13), 1);
        let f = Field::with_order(27).unwrap();
        let set = optimal_error_set(&f, 1).unwrap();
        let c = improved_hamming_make(&f, 2, &set).unwrap();
        assert_eq!(c.n(), 56);
    }

    #[test]
    fn csv_export_shape() {
        let f = Field::with_order(3).unwrap();
        let c = hamming_make(&f, 2).unwrap();
        let csv = c.parity_check_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().all(|l| l.split(',').count() == 4));
        assert_eq!(csv.lines().next().unwrap(), "1,1,1,0");
    }
}
