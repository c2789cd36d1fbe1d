//! One-letter DFAs in tail + cycle (lasso) normal form.
//!
//! Reading `a^len` from the start state walks `len` steps along the lasso:
//! positions `0..tail.len()` are visited once, then the walk loops around the
//! cycle forever. Only acceptance flags are kept, so two automata with equal
//! flag sequences are equal.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lengths::ApSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DfaSource")]
pub struct UnaryDfa {
    tail: Vec<bool>,
    cycle: Vec<bool>,
}

/// Either accepted JSON shape: normal form or a transition table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DfaSource {
    Normal {
        tail: Vec<bool>,
        cycle: Vec<bool>,
    },
    Table {
        transitions: Vec<usize>,
        start: usize,
        accepting: Vec<usize>,
    },
}

impl TryFrom<DfaSource> for UnaryDfa {
    type Error = Error;

    fn try_from(source: DfaSource) -> Result<Self> {
        source.normalize()
    }
}

impl DfaSource {
    pub fn normalize(&self) -> Result<UnaryDfa> {
        match self {
            DfaSource::Normal { tail, cycle } => UnaryDfa::new(tail.clone(), cycle.clone()),
            DfaSource::Table {
                transitions,
                start,
                accepting,
            } => UnaryDfa::from_table(transitions, *start, accepting),
        }
    }
}

/// `{ q + i r : i >= 1 }`, one accepting cycle position of a lasso.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Reg1Component {
    pub q: u64,
    pub r: u64,
}

impl Reg1Component {
    pub fn contains(&self, len: u64) -> bool {
        len > self.q && (len - self.q).is_multiple_of(self.r)
    }

    pub fn language(&self) -> ApSet {
        ApSet::new(self.q, self.r).expect("component period is positive")
    }
}

/// The language of a lasso split into REG(1) pieces plus finitely many
/// leftover lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub components: Vec<Reg1Component>,
    pub exceptional: Vec<u64>,
}

impl Decomposition {
    pub fn contains(&self, len: u64) -> bool {
        self.exceptional.binary_search(&len).is_ok()
            || self.components.iter().any(|c| c.contains(len))
    }
}

impl UnaryDfa {
    pub fn new(tail: Vec<bool>, cycle: Vec<bool>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidDfa(
                "cycle must have at least one position".into(),
            ));
        }
        Ok(Self { tail, cycle })
    }

    /// Lasso extraction from a transition table: `transitions[s]` is the
    /// successor of state `s` on the single letter.
    pub fn from_table(transitions: &[usize], start: usize, accepting: &[usize]) -> Result<Self> {
        let m = transitions.len();
        if m == 0 {
            return Err(Error::InvalidDfa("no states".into()));
        }
        if start >= m {
            return Err(Error::InvalidDfa(format!(
                "start state {start} out of range 0..{m}"
            )));
        }
        if let Some((s, &t)) = transitions.iter().enumerate().find(|(_, &t)| t >= m) {
            return Err(Error::InvalidDfa(format!(
                "state {s} has transition to missing state {t}"
            )));
        }
        if let Some(&s) = accepting.iter().find(|&&s| s >= m) {
            return Err(Error::InvalidDfa(format!(
                "accepting state {s} out of range 0..{m}"
            )));
        }
        let mut accept = vec![false; m];
        for &s in accepting {
            accept[s] = true;
        }

        let mut first_seen = vec![usize::MAX; m];
        let mut walk = Vec::new();
        let mut state = start;
        while first_seen[state] == usize::MAX {
            first_seen[state] = walk.len();
            walk.push(state);
            state = transitions[state];
        }
        let loop_start = first_seen[state];
        let flags: Vec<bool> = walk.iter().map(|&s| accept[s]).collect();
        Self::new(flags[..loop_start].to_vec(), flags[loop_start..].to_vec())
    }

    /// The machine accepting exactly `{ q + i r : i >= 1 }`.
    pub fn progression(q: u64, r: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::OutOfRange {
                what: "period r",
                min: 1,
            });
        }
        let q = usize::try_from(q).map_err(|_| Error::InvalidDfa("q too large".into()))?;
        let r = usize::try_from(r).map_err(|_| Error::InvalidDfa("r too large".into()))?;
        let mut cycle = vec![false; r];
        cycle[r - 1] = true;
        Self::new(vec![false; q + 1], cycle)
    }

    pub fn tail(&self) -> &[bool] {
        &self.tail
    }

    pub fn cycle(&self) -> &[bool] {
        &self.cycle
    }

    pub fn tail_len(&self) -> usize {
        self.tail.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// Whether `a^len` is accepted; cost is linear in the digit count of `len`.
    pub fn accepts(&self, len: &BigUint) -> bool {
        let q = self.tail.len();
        match len.to_usize() {
            Some(l) if l < q => self.tail[l],
            _ => {
                let offset = (len - BigUint::from(q)) % BigUint::from(self.cycle.len());
                self.cycle[offset.to_usize().expect("offset below cycle length")]
            }
        }
    }

    pub fn accepts_u64(&self, len: u64) -> bool {
        let q = self.tail.len() as u64;
        if len < q {
            self.tail[len as usize]
        } else {
            self.cycle[((len - q) % self.cycle.len() as u64) as usize]
        }
    }

    /// Acceptance of long lengths that are multiples of the cycle length.
    pub fn accepts_zero_residue(&self) -> bool {
        let r = self.cycle.len();
        self.cycle[(r - self.tail.len() % r) % r]
    }

    pub fn has_infinite_language(&self) -> bool {
        self.cycle.iter().any(|&b| b)
    }

    /// Flips every acceptance flag.
    pub fn complement(&self) -> Self {
        Self {
            tail: self.tail.iter().map(|b| !b).collect(),
            cycle: self.cycle.iter().map(|b| !b).collect(),
        }
    }

    /// Splits the language into one component per accepting cycle position.
    ///
    /// For the position first reached at length `s`, the component is
    /// `(s - r, r)` so that `{ q + i r : i >= 1 }` starts exactly at `s`. When
    /// `s < r` that would make `q` negative; the component becomes `(s, r)`
    /// and `s` moves to the exceptional set. Accepting tail positions are
    /// always exceptional.
    pub fn decompose_reg1(&self) -> Decomposition {
        let q_tail = self.tail.len() as u64;
        let r = self.cycle.len() as u64;
        let mut exceptional: Vec<u64> = (0..q_tail).filter(|&l| self.tail[l as usize]).collect();
        let mut components = Vec::new();
        for (offset, _) in self.cycle.iter().enumerate().filter(|(_, &b)| b) {
            let s = q_tail + offset as u64;
            if s >= r {
                components.push(Reg1Component { q: s - r, r });
            } else {
                components.push(Reg1Component { q: s, r });
                exceptional.push(s);
            }
        }
        exceptional.sort_unstable();
        Decomposition {
            components,
            exceptional,
        }
    }
}
