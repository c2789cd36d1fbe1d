//! Infinite unary languages as strictly increasing streams of word lengths.
//!
//! A word `a^k` is represented by `k` alone; words are never materialized.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::construction::{factorial, DeltaIndex, Params};
use crate::error::{Error, Result};
use crate::rational::RationalBound;

/// One emitted length, with its index when the set is built from Δ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub index: Option<DeltaIndex>,
    pub length: BigUint,
}

/// A unary language viewed as the increasing stream of its lengths.
///
/// Each value is a single-consumer cursor. `contains` never disturbs the
/// cursor; it works from a fresh copy of the starting state.
pub trait LengthSet: Iterator<Item = Element> {
    fn contains(&self, length: &BigUint) -> bool;

    /// Human-readable provenance, e.g. `pi(alpha=1, beta=2)`.
    fn descriptor(&self) -> String;
}

impl<S: LengthSet + ?Sized> LengthSet for Box<S> {
    fn contains(&self, length: &BigUint) -> bool {
        (**self).contains(length)
    }

    fn descriptor(&self) -> String {
        (**self).descriptor()
    }
}

/// Π restricted to indices with `n >= min_n`.
#[derive(Debug, Clone)]
pub struct PiSet {
    params: Params,
    min_n: u64,
    cursor: PiCursor,
}

#[derive(Debug, Clone)]
struct PiCursor {
    n: u64,
    j: u64,
    level: u64,
    n_factorial: BigUint,
    value: BigUint,
    last: Option<BigUint>,
}

impl PiCursor {
    fn start(params: &Params, min_n: u64) -> Self {
        let n = if params.admits(min_n) {
            min_n
        } else {
            params.next_admissible(min_n)
        };
        let n_factorial = factorial(n);
        Self {
            n,
            j: 0,
            level: params.level(n),
            value: n_factorial.clone(),
            n_factorial,
            last: None,
        }
    }

    fn advance(&mut self, params: &Params) {
        if self.j < self.level {
            let (value, rem) =
                (&self.value * params.beta()).div_rem(&BigUint::from(params.alpha()));
            assert!(
                rem.is_zero(),
                "integrity violation: phi({}, {}) is not an integer for {params}",
                self.j + 1,
                self.n
            );
            self.value = value;
            self.j += 1;
        } else {
            let next = params.next_admissible(self.n);
            for k in self.n + 1..=next {
                self.n_factorial *= k;
            }
            self.n = next;
            self.j = 0;
            self.level = params.level(next);
            self.value = self.n_factorial.clone();
        }
    }
}

impl PiSet {
    /// All of Π.
    pub fn new(params: Params) -> Self {
        Self::from_min_n(params, 1)
    }

    /// Π̄: the elements of Π with `n > n0`, where `n0` is the
    /// [`Params::corollary_n0`] threshold for `c`, and with `n` past the last
    /// inadmissible value.
    ///
    /// The second cut matters: the step from `(L(n), n)` stays within a
    /// factor `c` only if `n + 1` is admissible. For `(2, 3)` and `c = 2`,
    /// `n0 = 4` alone would keep `n = 11`, whose successor `13!` is about
    /// 20 times larger because `n = 12` has no index.
    pub fn pi_bar(params: Params, c: &RationalBound) -> Result<Self> {
        let n0 = params.corollary_n0(c)?;
        let min_n = n0.saturating_add(1).max(params.dense_from());
        Ok(Self::from_min_n(params, min_n))
    }

    pub fn from_min_n(params: Params, min_n: u64) -> Self {
        let min_n = min_n.max(1);
        Self {
            params,
            min_n,
            cursor: PiCursor::start(&params, min_n),
        }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn min_n(&self) -> u64 {
        self.min_n
    }

    /// The finitely many elements of Π left out of this set (`n < min_n`).
    pub fn omitted(&self) -> Vec<Element> {
        PiSet::new(self.params)
            .take_while(|e| e.index.is_some_and(|i| i.n < self.min_n))
            .collect()
    }
}

impl Iterator for PiSet {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let cursor = &mut self.cursor;
        let element = Element {
            index: Some(DeltaIndex::new(cursor.j, cursor.n)),
            length: cursor.value.clone(),
        };
        if let Some(last) = &cursor.last {
            assert!(
                *last < element.length,
                "integrity violation: length {} at {} does not exceed its predecessor",
                element.length,
                element.index.unwrap()
            );
        }
        cursor.last = Some(element.length.clone());
        cursor.advance(&self.params);
        Some(element)
    }
}

impl LengthSet for PiSet {
    fn contains(&self, length: &BigUint) -> bool {
        PiSet::from_min_n(self.params, self.min_n)
            .map(|e| e.length)
            .find(|l| l >= length)
            .is_some_and(|l| &l == length)
    }

    fn descriptor(&self) -> String {
        if self.min_n == 1 {
            format!("pi({})", self.params)
        } else {
            format!("pi({}, n >= {})", self.params, self.min_n)
        }
    }
}

/// `{ a^(n!) : n >= 1 }`.
#[derive(Debug, Clone)]
pub struct FactorialSet {
    n: u64,
    value: BigUint,
}

impl FactorialSet {
    pub fn new() -> Self {
        Self {
            n: 1,
            value: BigUint::one(),
        }
    }
}

impl Default for FactorialSet {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for FactorialSet {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let element = Element {
            index: None,
            length: self.value.clone(),
        };
        self.n += 1;
        self.value *= self.n;
        Some(element)
    }
}

impl LengthSet for FactorialSet {
    fn contains(&self, length: &BigUint) -> bool {
        // 1 = 1! is listed once even though 0! = 1! = 1
        FactorialSet::new()
            .map(|e| e.length)
            .find(|l| l >= length)
            .is_some_and(|l| &l == length)
    }

    fn descriptor(&self) -> String {
        "factorial".into()
    }
}

/// `{ a^(q + i r) : i >= 1 }`. Note that `q` itself is not a member.
#[derive(Debug, Clone)]
pub struct ApSet {
    q: BigUint,
    r: BigUint,
    next: BigUint,
}

impl ApSet {
    pub fn new(q: u64, r: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::OutOfRange {
                what: "period r",
                min: 1,
            });
        }
        Ok(Self {
            q: q.into(),
            r: r.into(),
            next: BigUint::from(q) + r,
        })
    }
}

impl Iterator for ApSet {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let length = self.next.clone();
        self.next += &self.r;
        Some(Element {
            index: None,
            length,
        })
    }
}

impl LengthSet for ApSet {
    fn contains(&self, length: &BigUint) -> bool {
        length > &self.q && ((length - &self.q) % &self.r).is_zero()
    }

    fn descriptor(&self) -> String {
        format!("ap(q={}, r={})", self.q, self.r)
    }
}

/// A finite length set read from a text file: one decimal integer per line,
/// strictly increasing, no blank lines.
#[derive(Debug, Clone)]
pub struct FileSet {
    source: String,
    lengths: Vec<BigUint>,
    pos: usize,
}

impl FileSet {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
            .map_err(|(line, reason)| Error::LengthFile {
                path: path.to_path_buf(),
                line,
                reason,
            })
            .map(|lengths| Self {
                source: path.display().to_string(),
                lengths,
                pos: 0,
            })
    }

    /// Returns the 1-based line number and reason on failure.
    fn parse(text: &str) -> std::result::Result<Vec<BigUint>, (usize, String)> {
        let mut lengths: Vec<BigUint> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let value: BigUint = line.parse().map_err(|_| {
                (
                    line_no,
                    format!("not a non-negative decimal integer: {line:?}"),
                )
            })?;
            if let Some(prev) = lengths.last() {
                if *prev == value {
                    return Err((line_no, format!("duplicate length {value}")));
                }
                if *prev > value {
                    return Err((line_no, format!("{value} is smaller than previous {prev}")));
                }
            }
            lengths.push(value);
        }
        Ok(lengths)
    }
}

impl Iterator for FileSet {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let length = self.lengths.get(self.pos)?.clone();
        self.pos += 1;
        Some(Element {
            index: None,
            length,
        })
    }
}

impl LengthSet for FileSet {
    fn contains(&self, length: &BigUint) -> bool {
        self.lengths.binary_search(length).is_ok()
    }

    fn descriptor(&self) -> String {
        format!("file({})", self.source)
    }
}

pub fn make_pi(params: Params) -> PiSet {
    PiSet::new(params)
}

pub fn make_pi_bar(params: Params, c: &RationalBound) -> Result<PiSet> {
    PiSet::pi_bar(params, c)
}

pub fn make_factorial() -> FactorialSet {
    FactorialSet::new()
}

pub fn make_ap(q: u64, r: u64) -> Result<ApSet> {
    ApSet::new(q, r)
}

pub fn make_file_set(path: impl AsRef<Path>) -> Result<FileSet> {
    FileSet::open(path)
}

/// JSON Lines export record; `n` and `j` are null outside Π.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub n: Option<u64>,
    pub j: Option<u64>,
    pub length: String,
}

impl From<&Element> for Record {
    fn from(e: &Element) -> Self {
        Self {
            n: e.index.map(|i| i.n),
            j: e.index.map(|i| i.j),
            length: e.length.to_string(),
        }
    }
}

/// Writes each element as one JSON object per line.
pub fn write_jsonl<W: Write>(
    elements: impl IntoIterator<Item = Element>,
    mut out: W,
) -> Result<()> {
    for e in elements {
        serde_json::to_writer(&mut out, &Record::from(&e))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
