//! Complete LMPE codecs. Every symbol is split into a quotient and a
//! remainder under `2l+1`; the remainders (or classes derived from them) are
//! protected by a block code, and corrected classes plus the received
//! symbols pin down the transmitted symbols.
//!
//! Four variants are supported:
//!
//! * `remainder`: remainder vectors mapped into GF(q), protected by a Hamming
//!   or BCH code.
//! * `reduced`: `(2l+1)²` reduced classes over GF((2l+1)²) in the first
//!   layer, the first remainder entry over GF(2l+1) with distance `t+1` in
//!   the second.
//! * `improved_hamming`: the additive class map into GF((2l+1)³) with an
//!   improved Hamming code that only corrects remainder error patterns.
//! * `systematic`: information symbols are sent verbatim and the field
//!   parities travel in Gray-mapped columns of `g` digits.
//!
//! Non-systematic layouts put information symbols first and parity symbols
//! last. A parity symbol's remainder is fixed by the code; its quotient
//! carries one of `C(s_min+3,3)` messages.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blockcodes::{bch_make, bch_make_designed, hamming_make, improved_hamming_make, BlockCode};
use crate::bounds::{quotient_counts, rate_nonsystematic, RateVariant};
use crate::classify::{
    build_reduced_table, combine, divisor, find_critical_vectors, remainder_error_patterns,
    second_layer_recover, split, validate_classification, ClassMapKind, ReducedClassTable,
    Remainder, RemainderClassMap, RemainderDecomposition,
};
use crate::combin::{binomial, quotient_rank, quotient_unrank};
use crate::error::{invalid, LmpeError, Result};
use crate::field::{largest_prime_power_at_most, prime_power, Field, FieldElement};
use crate::gray::{gray_search, GrayMapping, GrayPolicy};
use crate::prob::{symbol_error_ball, ProbVec, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Remainder,
    Reduced,
    ImprovedHamming,
    Systematic,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Remainder => "remainder",
            Variant::Reduced => "reduced",
            Variant::ImprovedHamming => "improved_hamming",
            Variant::Systematic => "systematic",
        })
    }
}

fn default_t() -> usize {
    1
}

/// Code parameters, as read from a JSON spec file.
///
/// Unset fields take per-variant defaults: `q` the largest prime power up
/// to `(2l+1)³`, Hamming `r = 2` when `t = 1` and BCH `w = 2` otherwise,
/// `g = 2`, the first critical vector, the canonical class map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub variant: Variant,
    pub k: u32,
    pub l: u32,
    #[serde(default = "default_t")]
    pub t: usize,
    /// First-layer field order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    /// BCH extension degree; the code length is `q^w - 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<u32>,
    /// Hamming redundancy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Number of transmitted symbols; codes are shortened to fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Systematic: information columns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Systematic: digits per parity column.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<u32>,
    /// Systematic: error-correcting capability of the field BCH code.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design_t: Option<usize>,
    /// Reduced: generating critical vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical: Option<Remainder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_map: Option<ClassMapKind>,
    /// Default seed for simulations run against this code.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CodeSpec {
    pub fn new(variant: Variant, k: u32, l: u32, t: usize) -> Self {
        CodeSpec {
            variant,
            k,
            l,
            t,
            q: None,
            w: None,
            r: None,
            n: None,
            m: None,
            g: None,
            design_t: None,
            critical: None,
            class_map: None,
            seed: None,
        }
    }

    /// The `(28, 26)` Hamming-based code at `k = 12, l = 1` with the fixed
    /// remainder table.
    pub fn example_one() -> Self {
        CodeSpec {
            q: Some(27),
            r: Some(2),
            class_map: Some(ClassMapKind::TableOne),
            ..CodeSpec::new(Variant::Remainder, 12, 1, 1)
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

/// What a codeword carries: free information symbols, plus one quotient
/// index per parity symbol for the non-systematic variants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Message {
    pub info_symbols: Vec<ProbVec>,
    pub parity_quotients: Vec<u64>,
}

impl fmt::Display for Message {
    /// `x1,x2,x3,x4;... | i1,i2,...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let info: Vec<String> = self.info_symbols.iter().map(|s| s.to_string()).collect();
        let parity: Vec<String> = self.parity_quotients.iter().map(|i| i.to_string()).collect();
        write!(f, "{} | {}", info.join(";"), parity.join(","))
    }
}

impl FromStr for Message {
    type Err = LmpeError;

    fn from_str(s: &str) -> Result<Self> {
        let (info, parity) = s
            .split_once('|')
            .ok_or_else(|| LmpeError::InvalidParameter("message needs `symbols | indices`".into()))?;
        let info_symbols = info
            .trim()
            .split(';')
            .filter(|x| !x.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<ProbVec>>>()?;
        let parity_quotients = parity
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| {
                x.parse::<u64>()
                    .map_err(|e| LmpeError::InvalidParameter(format!("quotient index `{x}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Message {
            info_symbols,
            parity_quotients,
        })
    }
}

/// Reads one message per non-blank, non-`#` line.
pub fn parse_messages(text: &str) -> Result<Vec<Message>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.parse().map_err(|e: LmpeError| LmpeError::Parse {
                line: i + 1,
                msg: e.to_string(),
            })
        })
        .collect()
}

/// Outcome of [`LmpeCode::decode`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeReport {
    pub message: Message,
    pub codeword: Word,
    /// Symbol positions changed by the decoder.
    pub corrected: Vec<usize>,
    /// Field positions handed to the block decoder as erasures.
    pub erasures: usize,
}

/// Parameters of a built code, for display.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub variant: Variant,
    pub k: u32,
    pub l: u32,
    pub t: usize,
    pub q: u32,
    pub n: usize,
    pub info_symbols: usize,
    pub parity_symbols: usize,
    /// Length and redundancy of the first-layer field code.
    pub field_length: usize,
    pub field_redundancy: usize,
    pub shortened_by: usize,
    pub s_min: u32,
    pub quotient_messages: u64,
    pub rate: f64,
}

#[derive(Clone, Debug)]
enum Engine {
    Classes {
        map: RemainderClassMap,
        code: BlockCode,
    },
    Reduced {
        table: ReducedClassTable,
        rows: BlockCode,
        cols: BlockCode,
    },
    Systematic {
        map: RemainderClassMap,
        code: BlockCode,
        gray: GrayMapping,
        g: usize,
    },
}

/// A fully configured codec.
#[derive(Clone, Debug)]
pub struct LmpeCode {
    spec: CodeSpec,
    n: usize,
    parity: usize,
    s_min: u32,
    quotient_messages: u64,
    rate: f64,
    engine: Engine,
}

fn field_of_order(q: u32) -> Result<Field> {
    if prime_power(q).is_none() {
        return invalid(format!("{q} is not a prime power"));
    }
    Field::with_order(q)
}

fn fit_length(code: BlockCode, n: Option<usize>) -> Result<BlockCode> {
    match n {
        None => Ok(code),
        Some(n) if n > code.n() => invalid(format!("length {n} exceeds the code length {}", code.n())),
        Some(n) if n <= code.redundancy() => invalid(format!(
            "length {n} leaves no information symbols next to {} parities",
            code.redundancy()
        )),
        Some(n) => code.shorten(code.n() - n),
    }
}

impl LmpeCode {
    /// Builds a code, running the Gray search when the variant needs one.
    pub fn build(spec: &CodeSpec) -> Result<LmpeCode> {
        Self::build_inner(spec, None)
    }

    /// Builds a systematic code around a given Gray mapping.
    pub fn build_with_gray(spec: &CodeSpec, gray: GrayMapping) -> Result<LmpeCode> {
        if spec.variant != Variant::Systematic {
            return invalid("only systematic codes use a Gray mapping");
        }
        Self::build_inner(spec, Some(gray))
    }

    fn build_inner(spec: &CodeSpec, gray: Option<GrayMapping>) -> Result<LmpeCode> {
        let (k, l, t) = (spec.k, spec.l, spec.t);
        if l == 0 || t == 0 {
            return invalid("need l >= 1 and t >= 1");
        }
        if k < 6 * l {
            return invalid(format!("resolution {k} is below 6l = {}", 6 * l));
        }
        let d = divisor(l);
        let counts = quotient_counts(k, l);
        let (engine, n, parity) = match spec.variant {
            Variant::Remainder => {
                let q = spec.q.or_else(|| largest_prime_power_at_most(d * d * d)).unwrap_or(d * d * d);
                if q > d * d * d {
                    return invalid(format!("field order {q} exceeds the {} remainder classes", d * d * d));
                }
                let field = field_of_order(q)?;
                let map = match spec.class_map {
                    Some(kind) => RemainderClassMap::new(kind, l, k, &field)?,
                    None => RemainderClassMap::canonical(l, k, q)?,
                };
                let code = match (spec.r, spec.w) {
                    (Some(_), Some(_)) => return invalid("give either r (Hamming) or w (BCH)"),
                    (Some(_), None) if t != 1 => return invalid("Hamming codes correct t = 1 only"),
                    (Some(r), None) => hamming_make(&field, r)?,
                    (None, None) if t == 1 => hamming_make(&field, 2)?,
                    (None, w) => bch_make(&field, w.unwrap_or(2), t)?,
                };
                let code = fit_length(code, spec.n)?;
                let (n, parity) = (code.n(), code.redundancy());
                (Engine::Classes { map, code }, n, parity)
            }
            Variant::ImprovedHamming => {
                if t != 1 {
                    return invalid("improved Hamming codes correct t = 1 only");
                }
                if prime_power(d).is_none_or(|(_, e)| e != 1) {
                    return invalid(format!("the additive class map needs 2l+1 = {d} prime"));
                }
                if spec.q.is_some_and(|q| q != d * d * d) {
                    return invalid(format!("improved Hamming codes work over GF({})", d * d * d));
                }
                let field = Field::new(d, 3, None)?;
                let map = RemainderClassMap::polynomial(l, k, &field)?;
                let errors = remainder_error_patterns(l)
                    .iter()
                    .map(|p| field.from_poly(&p[..3]))
                    .collect::<Result<Vec<_>>>()?;
                let code = improved_hamming_make(&field, spec.r.unwrap_or(2), &errors)?;
                let code = fit_length(code, spec.n)?;
                let (n, parity) = (code.n(), code.redundancy());
                (Engine::Classes { map, code }, n, parity)
            }
            Variant::Reduced => {
                if l > 4 {
                    return invalid("reduced classes need l <= 4");
                }
                let critical = match spec.critical {
                    Some(c) => c,
                    None => *find_critical_vectors(l)
                        .first()
                        .ok_or_else(|| LmpeError::SearchFailed(format!("no critical vector for l = {l}")))?,
                };
                let table = build_reduced_table(l, k, critical)?;
                if !validate_classification(&table, l) {
                    return invalid(format!("{critical:?} does not give a valid classification"));
                }
                let w = spec.w.unwrap_or(2);
                let rows = bch_make(&field_of_order(d * d)?, w, t)?;
                let cols = bch_make_designed(&field_of_order(d)?, 2 * w, t + 1)?;
                let rows = fit_length(rows, spec.n)?;
                let cols = fit_length(cols, Some(rows.n()))?;
                if cols.redundancy() > rows.redundancy() {
                    return invalid(format!(
                        "second layer needs {} parities, more than the {} of the first",
                        cols.redundancy(),
                        rows.redundancy()
                    ));
                }
                let (n, parity) = (rows.n(), rows.redundancy());
                (Engine::Reduced { table, rows, cols }, n, parity)
            }
            Variant::Systematic => {
                let q = spec.q.or_else(|| largest_prime_power_at_most(d * d * d)).unwrap_or(d * d * d);
                if q > d * d * d {
                    return invalid(format!("field order {q} exceeds the {} remainder classes", d * d * d));
                }
                let g = spec.g.unwrap_or(2);
                if g == 0 {
                    return invalid("need g >= 1");
                }
                let m = spec
                    .m
                    .ok_or_else(|| LmpeError::InvalidParameter("systematic codes need m".into()))?;
                let field = field_of_order(q)?;
                let map = match spec.class_map {
                    Some(kind) => RemainderClassMap::new(kind, l, k, &field)?,
                    None => RemainderClassMap::canonical(l, k, q)?,
                };
                let per_column = (g as usize).max(2);
                let design_t = spec.design_t.unwrap_or((per_column * t).div_ceil(2));
                let code = bch_make(&field, spec.w.unwrap_or(2), design_t)?.shorten_to(m)?;
                if code.designed_distance() < per_column * t + 1 {
                    return invalid(format!(
                        "designed distance {} cannot absorb {t} corrupted columns of {g} digits",
                        code.designed_distance()
                    ));
                }
                let columns = code.redundancy().div_ceil(g as usize);
                if let Some(n) = spec.n.filter(|&n| n != m + columns) {
                    return invalid(format!("length {n} does not match {m} + {columns} columns"));
                }
                let gray = match gray {
                    Some(gm) => {
                        if (gm.k(), gm.l(), gm.q(), gm.g()) != (k, l, q, g) {
                            return invalid("Gray mapping parameters do not match the code");
                        }
                        gm
                    }
                    None => {
                        let mut policy = GrayPolicy::default();
                        if map.len() < (d * d * d) as usize {
                            policy.allowed_remainders = Some(map.entries().map(|(_, b)| b).collect());
                        }
                        gray_search(k, l, q, g, &policy)?
                    }
                };
                let engine = Engine::Systematic {
                    map,
                    code,
                    gray,
                    g: g as usize,
                };
                (engine, m + columns, columns)
            }
        };
        let rate = match spec.variant {
            Variant::Systematic => (n - parity) as f64 / n as f64,
            _ => rate_nonsystematic(n, n - parity, k, l, RateVariant::Exact)?,
        };
        Ok(LmpeCode {
            spec: spec.clone(),
            n,
            parity,
            s_min: counts.s_min,
            quotient_messages: binomial(counts.s_min as u64 + 3, 3),
            rate,
            engine,
        })
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn variant(&self) -> Variant {
        self.spec.variant
    }

    pub fn k(&self) -> u32 {
        self.spec.k
    }

    pub fn l(&self) -> u32 {
        self.spec.l
    }

    pub fn t(&self) -> usize {
        self.spec.t
    }

    /// Number of transmitted symbols.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Information symbols occupy positions `0..info_len()`.
    pub fn info_len(&self) -> usize {
        self.n - self.parity
    }

    /// Parity symbols occupy the last `parity_len()` positions.
    pub fn parity_len(&self) -> usize {
        self.parity
    }

    /// Number of quotient indices a message carries.
    pub fn quotient_len(&self) -> usize {
        match self.engine {
            Engine::Systematic { .. } => 0,
            _ => self.parity,
        }
    }

    pub fn s_min(&self) -> u32 {
        self.s_min
    }

    /// Messages per parity quotient, `C(s_min+3,3)`.
    pub fn quotient_messages(&self) -> u64 {
        self.quotient_messages
    }

    /// Exact rate: `log2` of the message count over `n·log2 C(k+3,3)` for
    /// non-systematic codes, information columns over all columns for the
    /// systematic one.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// The first-layer field code.
    pub fn field_code(&self) -> &BlockCode {
        match &self.engine {
            Engine::Classes { code, .. } | Engine::Systematic { code, .. } => code,
            Engine::Reduced { rows, .. } => rows,
        }
    }

    /// The second-layer code of the reduced variant.
    pub fn column_code(&self) -> Option<&BlockCode> {
        match &self.engine {
            Engine::Reduced { cols, .. } => Some(cols),
            _ => None,
        }
    }

    pub fn class_map(&self) -> Option<&RemainderClassMap> {
        match &self.engine {
            Engine::Classes { map, .. } | Engine::Systematic { map, .. } => Some(map),
            Engine::Reduced { .. } => None,
        }
    }

    pub fn reduced_table(&self) -> Option<&ReducedClassTable> {
        match &self.engine {
            Engine::Reduced { table, .. } => Some(table),
            _ => None,
        }
    }

    pub fn gray_mapping(&self) -> Option<&GrayMapping> {
        match &self.engine {
            Engine::Systematic { gray, .. } => Some(gray),
            _ => None,
        }
    }

    pub fn summary(&self) -> CodeSummary {
        let code = self.field_code();
        CodeSummary {
            variant: self.spec.variant,
            k: self.spec.k,
            l: self.spec.l,
            t: self.spec.t,
            q: code.field().q(),
            n: self.n,
            info_symbols: self.info_len(),
            parity_symbols: self.parity,
            field_length: code.n(),
            field_redundancy: code.redundancy(),
            shortened_by: code.shortened_by(),
            s_min: self.s_min,
            quotient_messages: self.quotient_messages,
            rate: self.rate,
        }
    }

    /// Whether `x` may appear in an information position.
    pub fn accepts_info_symbol(&self, x: &ProbVec) -> bool {
        x.k() == self.spec.k
            && match &self.engine {
                Engine::Classes { map, .. } | Engine::Systematic { map, .. } => {
                    map.get(&split(x, self.spec.l).remainder).is_some()
                }
                Engine::Reduced { .. } => true,
            }
    }

    /// A uniformly random valid message.
    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> Message {
        let size = binomial(self.spec.k as u64 + 3, 3);
        let info_symbols = (0..self.info_len())
            .map(|_| loop {
                let v = quotient_unrank(rng.gen_range(0..size), self.spec.k).expect("index in range");
                let x = ProbVec::from_values(v);
                if self.accepts_info_symbol(&x) {
                    break x;
                }
            })
            .collect();
        let parity_quotients = (0..self.quotient_len())
            .map(|_| rng.gen_range(0..self.quotient_messages))
            .collect();
        Message {
            info_symbols,
            parity_quotients,
        }
    }

    fn check_message(&self, msg: &Message) -> Result<()> {
        if msg.info_symbols.len() != self.info_len() || msg.parity_quotients.len() != self.quotient_len() {
            return invalid(format!(
                "message has {} symbols and {} quotient indices, code expects {} and {}",
                msg.info_symbols.len(),
                msg.parity_quotients.len(),
                self.info_len(),
                self.quotient_len()
            ));
        }
        for (i, x) in msg.info_symbols.iter().enumerate() {
            if x.k() != self.spec.k {
                return invalid(format!("information symbol {i} has resolution {}", x.k()));
            }
            if !self.accepts_info_symbol(x) {
                return invalid(format!("information symbol {i} ({x}) has an unmapped remainder"));
            }
        }
        if let Some(&bad) = msg.parity_quotients.iter().find(|&&i| i >= self.quotient_messages) {
            return invalid(format!(
                "quotient index {bad} is not below {}",
                self.quotient_messages
            ));
        }
        Ok(())
    }

    /// Parity symbol with remainder `b` whose quotient has rank `index`.
    fn parity_symbol(&self, b: Remainder, index: u64) -> Result<ProbVec> {
        let (k, l) = (self.spec.k, self.spec.l);
        let total: u32 = b.iter().sum();
        let sum = k
            .checked_sub(total)
            .ok_or_else(|| LmpeError::InvalidParameter(format!("remainder {b:?} exceeds resolution {k}")))?
            / divisor(l);
        let quotient = quotient_unrank(index, sum)?;
        combine(
            &RemainderDecomposition {
                quotient,
                remainder: b,
            },
            l,
            k,
        )
    }

    pub fn encode(&self, msg: &Message) -> Result<Word> {
        self.check_message(msg)?;
        let l = self.spec.l;
        let info = self.info_len();
        let mut symbols = msg.info_symbols.clone();
        match &self.engine {
            Engine::Classes { map, code } => {
                let classes: Vec<FieldElement> = msg
                    .info_symbols
                    .iter()
                    .map(|x| map.get(&split(x, l).remainder).expect("checked"))
                    .collect();
                let cw = code.encode(&classes)?;
                for (j, c) in cw[info..].iter().enumerate() {
                    let b = map.remainder_of(*c).ok_or_else(|| {
                        LmpeError::InvalidParameter(format!("parity element {c} has no remainder"))
                    })?;
                    symbols.push(self.parity_symbol(b, msg.parity_quotients[j])?);
                }
            }
            Engine::Reduced { table, rows, cols } => {
                let cells: Vec<(usize, usize)> = msg
                    .info_symbols
                    .iter()
                    .map(|x| table.locate(&split(x, l).remainder).expect("table covers all remainders"))
                    .collect();
                let row_word: Vec<FieldElement> =
                    cells.iter().map(|c| FieldElement::from_raw(c.0 as u32)).collect();
                let mut col_word: Vec<FieldElement> =
                    cells.iter().map(|c| FieldElement::from_raw(c.1 as u32)).collect();
                col_word.resize(cols.kdim(), FieldElement::ZERO);
                let row_cw = rows.encode(&row_word)?;
                let col_cw = cols.encode(&col_word)?;
                for j in 0..self.parity {
                    let pos = info + j;
                    let b = table
                        .cell(row_cw[pos].value() as usize, col_cw[pos].value() as usize)
                        .expect("field elements index the table");
                    symbols.push(self.parity_symbol(b, msg.parity_quotients[j])?);
                }
            }
            Engine::Systematic { map, code, gray, g } => {
                let classes: Vec<FieldElement> = msg
                    .info_symbols
                    .iter()
                    .map(|x| map.get(&split(x, l).remainder).expect("checked"))
                    .collect();
                let mut parities = code.encode(&classes)?.split_off(info);
                parities.resize(self.parity * g, FieldElement::ZERO);
                for column in parities.chunks(*g) {
                    symbols.push(gray.vector_of(column)?);
                }
            }
        }
        Word::new(self.spec.k, symbols)
    }

    pub fn decode(&self, received: &Word) -> Result<DecodeReport> {
        if received.len() != self.n || received.k() != self.spec.k {
            return invalid(format!(
                "expected {} symbols of resolution {}, got {} of resolution {}",
                self.n,
                self.spec.k,
                received.len(),
                received.k()
            ));
        }
        let l = self.spec.l;
        let y = received.symbols();
        let info = self.info_len();
        let mut symbols = y.to_vec();
        let erasures;
        match &self.engine {
            Engine::Classes { map, code } => {
                let mut erased = Vec::new();
                let classes: Vec<FieldElement> = y
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        map.get(&split(x, l).remainder).unwrap_or_else(|| {
                            erased.push(i);
                            FieldElement::ZERO
                        })
                    })
                    .collect();
                let dec = code.decode(&classes, &erased)?;
                for i in dec.corrected.iter().chain(&erased) {
                    let b = map.remainder_of(dec.codeword[*i]).ok_or_else(|| {
                        LmpeError::DecodeFailure(format!("decoded element at {i} has no remainder"))
                    })?;
                    symbols[*i] = second_layer_recover(&y[*i], &b, l)?;
                }
                erasures = dec.erasures;
            }
            Engine::Reduced { table, rows, cols } => {
                let cells: Vec<(usize, usize)> = y
                    .iter()
                    .map(|x| table.locate(&split(x, l).remainder).expect("table covers all remainders"))
                    .collect();
                let row_word: Vec<FieldElement> =
                    cells.iter().map(|c| FieldElement::from_raw(c.0 as u32)).collect();
                let col_word: Vec<FieldElement> =
                    cells.iter().map(|c| FieldElement::from_raw(c.1 as u32)).collect();
                let row_dec = rows.decode(&row_word, &[])?;
                let col_dec = cols.decode(&col_word, &row_dec.corrected)?;
                let mut fixed = row_dec.corrected.clone();
                fixed.extend(&col_dec.corrected);
                fixed.sort_unstable();
                fixed.dedup();
                for i in fixed {
                    let b = table
                        .cell(
                            row_dec.codeword[i].value() as usize,
                            col_dec.codeword[i].value() as usize,
                        )
                        .ok_or_else(|| LmpeError::DecodeFailure(format!("no class cell for position {i}")))?;
                    symbols[i] = second_layer_recover(&y[i], &b, l)?;
                }
                erasures = col_dec.erasures;
            }
            Engine::Systematic { map, code, gray, g } => {
                let redundancy = code.redundancy();
                let mut erased = Vec::new();
                let mut digits: Vec<FieldElement> = y[..info]
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        map.get(&split(x, l).remainder).unwrap_or_else(|| {
                            erased.push(i);
                            FieldElement::ZERO
                        })
                    })
                    .collect();
                for (c, x) in y[info..].iter().enumerate() {
                    let column = gray_digits_near(gray, x, l);
                    for j in 0..*g {
                        let pos = c * g + j;
                        if pos >= redundancy {
                            break;
                        }
                        match &column {
                            Some(d) => digits.push(d[j]),
                            None => {
                                erased.push(info + pos);
                                digits.push(FieldElement::ZERO);
                            }
                        }
                    }
                }
                let dec = code.decode(&digits, &erased)?;
                for &i in dec.corrected.iter().chain(&erased).filter(|&&i| i < info) {
                    let b = map.remainder_of(dec.codeword[i]).ok_or_else(|| {
                        LmpeError::DecodeFailure(format!("decoded element at {i} has no remainder"))
                    })?;
                    symbols[i] = second_layer_recover(&y[i], &b, l)?;
                }
                let mut parities = dec.codeword[info..].to_vec();
                parities.resize(self.parity * g, FieldElement::ZERO);
                for (c, column) in parities.chunks(*g).enumerate() {
                    symbols[info + c] = gray.vector_of(column)?;
                }
                erasures = dec.erasures;
            }
        }
        let corrected = (0..self.n).filter(|&i| symbols[i] != y[i]).collect();
        let mut parity_quotients = Vec::with_capacity(self.quotient_len());
        if self.quotient_len() > 0 {
            for (j, x) in symbols[info..].iter().enumerate() {
                let index = quotient_rank(&split(x, l).quotient);
                if index >= self.quotient_messages {
                    return Err(LmpeError::DecodeFailure(format!(
                        "parity symbol {j} carries quotient index {index}, beyond {}",
                        self.quotient_messages
                    )));
                }
                parity_quotients.push(index);
            }
        }
        let message = Message {
            info_symbols: symbols[..info].to_vec(),
            parity_quotients,
        };
        Ok(DecodeReport {
            message,
            codeword: Word::new(self.spec.k, symbols)?,
            corrected,
            erasures,
        })
    }
}

/// Digits of `x`, or of the first mapped symbol within one `l`-limited
/// error of it.
fn gray_digits_near(gray: &GrayMapping, x: &ProbVec, l: u32) -> Option<Vec<FieldElement>> {
    gray.digits_of(x).or_else(|| {
        symbol_error_ball(x, l)
            .iter()
            .filter_map(|e| x.apply(e))
            .find_map(|z| gray.digits_of(&z))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{SymbolError, Word};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pv(v: [u32; 4]) -> ProbVec {
        ProbVec::from_values(v)
    }

    #[test]
    fn example_one_parameters() {
        let code = LmpeCode::build(&CodeSpec::example_one()).unwrap();
        assert_eq!(code.n(), 28);
        assert_eq!(code.info_len(), 26);
        assert_eq!(code.quotient_messages(), 10);
        assert!((code.rate() - 0.955).abs() < 1e-3);
    }

    #[test]
    fn zero_class_message_has_zero_parities() {
        let code = LmpeCode::build(&CodeSpec::example_one()).unwrap();
        let msg = Message {
            info_symbols: vec![pv([3, 3, 3, 3]); 26],
            parity_quotients: vec![0, 9],
        };
        let word = code.encode(&msg).unwrap();
        for x in &word.symbols()[26..] {
            assert_eq!(split(x, 1).remainder, [0, 0, 0, 0]);
        }
        assert_eq!(word.symbols()[26], pv([0, 0, 0, 12]));
        let report = code.decode(&word).unwrap();
        assert_eq!(report.message, msg);
        assert!(report.corrected.is_empty());
    }

    #[test]
    fn quotient_index_range_enforced() {
        let code = LmpeCode::build(&CodeSpec::example_one()).unwrap();
        let msg = Message {
            info_symbols: vec![pv([3, 3, 3, 3]); 26],
            parity_quotients: vec![10, 0],
        };
        assert!(code.encode(&msg).is_err());
    }

    #[test]
    fn message_text_round_trip() {
        let msg = Message {
            info_symbols: vec![pv([1, 2, 3, 6]), pv([0, 0, 0, 12])],
            parity_quotients: vec![3, 4],
        };
        let text = msg.to_string();
        assert_eq!(text, "1,2,3,6;0,0,0,12 | 3,4");
        assert_eq!(text.parse::<Message>().unwrap(), msg);
        let sys: Message = "1,2,3,6 | ".parse().unwrap();
        assert!(sys.parity_quotients.is_empty());
    }

    fn single_error_sweep(code: &LmpeCode, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg = code.random_message(&mut rng);
        let word = code.encode(&msg).unwrap();
        for pos in 0..code.n() {
            for e in symbol_error_ball(&word.symbols()[pos], code.l()) {
                if e.is_zero() {
                    continue;
                }
                let mut errors = vec![SymbolError::ZERO; code.n()];
                errors[pos] = e;
                let bad = word.apply(&errors).unwrap();
                let report = code.decode(&bad).unwrap();
                assert_eq!(report.message, msg, "position {pos}, error {e:?}");
                assert_eq!(report.codeword, word);
            }
        }
    }

    #[test]
    fn remainder_code_single_errors() {
        let code = LmpeCode::build(&CodeSpec::example_one()).unwrap();
        single_error_sweep(&code, 1);
    }

    #[test]
    fn improved_hamming_length() {
        let code = LmpeCode::build(&CodeSpec::new(Variant::ImprovedHamming, 12, 1, 1)).unwrap();
        assert_eq!(code.n(), 56);
        assert_eq!(code.parity_len(), 2);
        single_error_sweep(&code, 2);
    }

    #[test]
    fn reduced_code_single_errors() {
        let spec = CodeSpec {
            n: Some(10),
            ..CodeSpec::new(Variant::Reduced, 12, 1, 1)
        };
        let code = LmpeCode::build(&spec).unwrap();
        assert_eq!(code.n(), 10);
        assert_eq!(code.parity_len(), 4);
        assert_eq!(code.column_code().unwrap().redundancy(), 4);
        single_error_sweep(&code, 3);
    }

    #[test]
    fn bch_remainder_code_two_errors() {
        let spec = CodeSpec {
            n: Some(20),
            ..CodeSpec::new(Variant::Remainder, 12, 1, 2)
        };
        let code = LmpeCode::build(&spec).unwrap();
        assert_eq!(code.parity_len(), 8);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let msg = code.random_message(&mut rng);
            let word = code.encode(&msg).unwrap();
            let e = crate::prob::sample_lmpe_exact(&word, 1, 2, &mut rng);
            let report = code.decode(&word.apply(&e).unwrap()).unwrap();
            assert_eq!(report.message, msg);
        }
    }

    #[test]
    fn small_field_erasure() {
        let spec = CodeSpec {
            q: Some(25),
            ..CodeSpec::new(Variant::Remainder, 12, 1, 1)
        };
        let code = LmpeCode::build(&spec).unwrap();
        let map = code.class_map().unwrap();
        assert_eq!(map.len(), 25);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let msg = code.random_message(&mut rng);
        let word = code.encode(&msg).unwrap();
        let hit = (0..code.n())
            .find_map(|pos| {
                let x = word.symbols()[pos];
                symbol_error_ball(&x, 1)
                    .into_iter()
                    .find(|e| x.apply(e).is_some_and(|z| map.get(&split(&z, 1).remainder).is_none()))
                    .map(|e| (pos, e))
            })
            .expect("some error reaches an unmapped remainder");
        let mut errors = vec![SymbolError::ZERO; code.n()];
        errors[hit.0] = hit.1;
        let report = code.decode(&word.apply(&errors).unwrap()).unwrap();
        assert_eq!(report.erasures, 1);
        assert_eq!(report.message, msg);
    }

    #[test]
    fn systematic_small() {
        let spec = CodeSpec {
            q: Some(9),
            m: Some(6),
            g: Some(1),
            class_map: Some(ClassMapKind::Lexicographic),
            ..CodeSpec::new(Variant::Systematic, 12, 1, 1)
        };
        let code = LmpeCode::build(&spec).unwrap();
        assert_eq!(code.quotient_len(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..300 {
            let msg = code.random_message(&mut rng);
            let word = code.encode(&msg).unwrap();
            assert_eq!(&word.symbols()[..6], &msg.info_symbols[..]);
            let e = crate::prob::sample_lmpe(&word, 1, 1, &mut rng);
            let report = code.decode(&word.apply(&e).unwrap()).unwrap();
            assert_eq!(report.message, msg);
            assert_eq!(report.codeword, word);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = CodeSpec::example_one();
        let json = spec.to_json();
        assert!(json.contains("\"variant\": \"remainder\""));
        assert_eq!(CodeSpec::from_json(&json).unwrap(), spec);
        assert!(CodeSpec::from_json(r#"{"variant":"remainder","k":12,"l":1,"bogus":1}"#).is_err());
        let minimal = CodeSpec::from_json(r#"{"variant":"reduced","k":12,"l":1,"n":10}"#).unwrap();
        assert_eq!(minimal.t, 1);
    }

    #[test]
    fn field_order_falls_back_to_prime_power() {
        // 15^3 = 3375 is not a prime power; the largest below it is 3373
        let spec = CodeSpec {
            n: Some(12),
            ..CodeSpec::new(Variant::Remainder, 42, 7, 1)
        };
        let code = LmpeCode::build(&spec).unwrap();
        assert_eq!(code.summary().q, 3373);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let msg = code.random_message(&mut rng);
        assert_eq!(code.decode(&code.encode(&msg).unwrap()).unwrap().message, msg);
    }

    #[test]
    fn build_rejects_bad_parameters() {
        assert!(LmpeCode::build(&CodeSpec::new(Variant::Remainder, 5, 1, 1)).is_err());
        assert!(LmpeCode::build(&CodeSpec::new(Variant::ImprovedHamming, 12, 1, 2)).is_err());
        assert!(LmpeCode::build(&CodeSpec::new(Variant::Reduced, 40, 5, 1)).is_err());
        assert!(LmpeCode::build(&CodeSpec::new(Variant::Systematic, 19, 1, 1)).is_err());
        let short = Word::new(12, vec![pv([3, 3, 3, 3])]).unwrap();
        let code = LmpeCode::build(&CodeSpec::example_one()).unwrap();
        assert!(code.decode(&short).is_err());
    }
}
