//! Growth, divisibility and ratio checks over Π, and the certified verdict
//! that no unary regular language dissects it.
//!
//! The verdict rests on residue stabilization: once `n - alpha * L(n) > r`,
//! the factors `alpha * L(n) + 2 ..= n` of `ω(n)` contain `r` consecutive
//! integers, so `r | ω(n) | φ(j, n)`. Past the threshold every length of Π
//! sits on the same cycle position of an `r`-cycle automaton, and one of
//! `Π ∩ R`, `Π \ R` is finite.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::automata::UnaryDfa;
use crate::construction::{DeltaIndex, Params};
use crate::decimal;
use crate::error::{Error, Result};
use crate::lengths::{LengthSet, PiSet};
use crate::rational::RationalBound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthMode {
    /// `|u| < |v| <= c + |u|`
    Constant,
    /// `|u| < |v| <= c |u|`
    Geometric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthWitness {
    /// Zero-based position of `length` in the stream.
    pub index: usize,
    #[serde(with = "decimal")]
    pub length: BigUint,
    #[serde(with = "decimal")]
    pub successor_length: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub mode: GrowthMode,
    pub c: RationalBound,
    /// Consecutive pairs examined, including a violating one.
    pub checked_count: usize,
    pub ok: bool,
    pub witness: Option<GrowthWitness>,
}

/// Checks each consecutive pair among the first `k` lengths of `set` and
/// stops at the first pair that is not increasing or exceeds the bound.
/// The bound itself (`ℓ' = c ℓ`, `ℓ' = c + ℓ`) passes.
pub fn check_growth<S: LengthSet + ?Sized>(
    set: &mut S,
    mode: GrowthMode,
    c: &RationalBound,
    k: usize,
) -> Result<GrowthReport> {
    if k < 2 {
        return Err(Error::OutOfRange {
            what: "count k",
            min: 2,
        });
    }
    match mode {
        GrowthMode::Geometric if !c.exceeds_one() => {
            return Err(Error::ConstantTooSmall {
                c: c.to_string(),
                bound: "1".into(),
            })
        }
        GrowthMode::Constant if c < &RationalBound::from_integer(1) => {
            return Err(Error::ConstantTooSmall {
                c: c.to_string(),
                bound: "or equal 1".into(),
            })
        }
        _ => {}
    }

    let mut report = GrowthReport {
        mode,
        c: c.clone(),
        checked_count: 0,
        ok: true,
        witness: None,
    };
    let mut prev = match set.next() {
        Some(e) => e.length,
        None => return Ok(report),
    };
    for (index, element) in set.take(k - 1).enumerate() {
        let next = element.length;
        report.checked_count += 1;
        let within = match mode {
            GrowthMode::Geometric => c.bounds_scaled(&prev, &next),
            GrowthMode::Constant => c.bounds_difference(&prev, &next),
        };
        if prev >= next || !within {
            report.ok = false;
            report.witness = Some(GrowthWitness {
                index,
                length: prev,
                successor_length: next,
            });
            break;
        }
        prev = next;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    pub params: Params,
    pub n_max: u64,
    pub checked: usize,
    pub ok: bool,
    pub counterexample: Option<DeltaIndex>,
}

/// Verifies `ω(n) | φ(j, n)` for every index with `n <= n_max`.
pub fn check_divisibility(params: Params, n_max: u64) -> Result<DivisibilityReport> {
    if n_max == 0 {
        return Err(Error::OutOfRange {
            what: "n_max",
            min: 1,
        });
    }
    let mut report = DivisibilityReport {
        params,
        n_max,
        checked: 0,
        ok: true,
        counterexample: None,
    };
    let mut omega_cache: Option<(u64, BigUint)> = None;
    for idx in params.indices_up_to(n_max) {
        let omega = match &omega_cache {
            Some((n, w)) if *n == idx.n => w.clone(),
            _ => {
                let w = params.omega(idx.n)?;
                omega_cache = Some((idx.n, w.clone()));
                w
            }
        };
        let phi = params.phi(idx)?;
        report.checked += 1;
        if !phi.is_multiple_of(&omega) {
            report.ok = false;
            report.counterexample = Some(idx);
            break;
        }
    }
    Ok(report)
}

/// A successor step that skipped at least one `n` with no admissible index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapStep {
    pub from: DeltaIndex,
    pub to: DeltaIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioViolationKind {
    NotIncreasing,
    WithinNotExact,
    CrossBelowLower,
    CrossAboveUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioViolation {
    pub from: DeltaIndex,
    pub to: DeltaIndex,
    pub kind: RatioViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReport {
    pub params: Params,
    pub steps: usize,
    /// Steps `(j, n) -> (j + 1, n)`; ratio must be exactly `beta / alpha`.
    pub within_n: usize,
    /// Steps `(L(n), n) -> (0, n + 1)`; ratio must lie in
    /// `[(n + 1) / n, (n + 1) beta / (n alpha)]`.
    pub cross_n: usize,
    /// Cross steps whose ratio hit the lower bound `(n + 1) / n` exactly.
    pub lower_equalities: Vec<DeltaIndex>,
    /// Steps that jumped over inadmissible `n`; only monotonicity is checked.
    pub gaps: Vec<GapStep>,
    pub ok: bool,
    pub violation: Option<RatioViolation>,
}

/// Walks `k` successor steps from `(0, 1)` comparing consecutive lengths
/// against the closeness bounds, all as exact cross-multiplications.
pub fn check_ratio_bounds(params: Params, k: usize) -> Result<RatioReport> {
    if k < 2 {
        return Err(Error::OutOfRange {
            what: "count k",
            min: 2,
        });
    }
    let mut report = RatioReport {
        params,
        steps: 0,
        within_n: 0,
        cross_n: 0,
        lower_equalities: Vec::new(),
        gaps: Vec::new(),
        ok: true,
        violation: None,
    };
    let (alpha, beta) = (params.alpha(), params.beta());
    let mut from = params.first_index();
    let mut from_len = params.phi(from)?;
    for _ in 0..k {
        let to = params.delta_successor(from)?;
        let to_len = params.phi(to)?;
        report.steps += 1;

        let kind = if to_len <= from_len {
            Some(RatioViolationKind::NotIncreasing)
        } else if to.n == from.n {
            report.within_n += 1;
            (&to_len * alpha != &from_len * beta).then_some(RatioViolationKind::WithinNotExact)
        } else if to.n == from.n + 1 {
            report.cross_n += 1;
            let n = from.n;
            let scaled_to = &to_len * n;
            let scaled_from = &from_len * (n + 1);
            if scaled_to == scaled_from {
                report.lower_equalities.push(from);
            }
            if scaled_to < scaled_from {
                Some(RatioViolationKind::CrossBelowLower)
            } else if scaled_to * alpha > scaled_from * beta {
                Some(RatioViolationKind::CrossAboveUpper)
            } else {
                None
            }
        } else {
            report.gaps.push(GapStep { from, to });
            None
        };
        if let Some(kind) = kind {
            report.ok = false;
            report.violation = Some(RatioViolation { from, to, kind });
            break;
        }
        from = to;
        from_len = to_len;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiniteSide {
    /// `Π ∩ R` is finite.
    Intersection,
    /// `Π \ R` is finite.
    Difference,
}

impl FiniteSide {
    pub fn flipped(self) -> Self {
        match self {
            FiniteSide::Intersection => FiniteSide::Difference,
            FiniteSide::Difference => FiniteSide::Intersection,
        }
    }

    /// Whether a length with the given acceptance lies on this side.
    pub fn holds(self, accepted: bool) -> bool {
        match self {
            FiniteSide::Intersection => accepted,
            FiniteSide::Difference => !accepted,
        }
    }
}

/// The only outcome this analysis can reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    NotDissecting,
}

/// Certified outcome for Π against one automaton. Serializes as the
/// certificate JSON, with fields in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissectionVerdict {
    pub params: Params,
    pub dfa: UnaryDfa,
    #[serde(rename = "r")]
    pub r_cycle: u64,
    pub threshold_n0: u64,
    /// Residue mod `r` of every length with `n >= threshold_n0`.
    #[serde(skip)]
    pub stable_residue: u64,
    pub finite_side: FiniteSide,
    #[serde(with = "decimal::vec")]
    pub exceptional_lengths: Vec<BigUint>,
    pub conclusion: Conclusion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<bool>,
}

/// Elements of Π that may still sit on either side: those with
/// `n < threshold` or with length inside the tail. Everything after is
/// pinned to cycle residue 0.
fn unstable_prefix(
    params: Params,
    threshold: u64,
    q_tail: usize,
) -> impl Iterator<Item = crate::lengths::Element> {
    let q_tail = BigUint::from(q_tail);
    PiSet::new(params).take_while(move |e| {
        e.index.expect("pi elements carry indices").n < threshold || e.length < q_tail
    })
}

pub fn dissect_verdict(params: Params, dfa: &UnaryDfa) -> DissectionVerdict {
    let r = dfa.cycle_len() as u64;
    let threshold = params
        .stabilization_threshold(r)
        .expect("cycle length is positive");
    let finite_side = if dfa.accepts_zero_residue() {
        FiniteSide::Difference
    } else {
        FiniteSide::Intersection
    };

    let mut exceptional = Vec::new();
    let mut stream = PiSet::new(params);
    let q_tail = BigUint::from(dfa.tail_len());
    let boundary = loop {
        let e = stream.next().expect("pi is infinite");
        if e.index.expect("pi elements carry indices").n >= threshold && e.length >= q_tail {
            break e;
        }
        if finite_side.holds(dfa.accepts(&e.length)) {
            exceptional.push(e.length);
        }
    };
    // Every length from here on is a multiple of r; anything else would
    // contradict ω(n) | φ(j, n) and r | ω(n).
    if !boundary.length.is_multiple_of(&BigUint::from(r)) {
        unreachable!(
            "residue stabilization failed at {} for {params}, r = {r}",
            boundary.index.unwrap()
        );
    }

    DissectionVerdict {
        params,
        dfa: dfa.clone(),
        r_cycle: r,
        threshold_n0: threshold,
        stable_residue: 0,
        finite_side,
        exceptional_lengths: exceptional,
        conclusion: Conclusion::NotDissecting,
        cross_check: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EmpiricalCounts {
    pub in_count: usize,
    pub out_count: usize,
    pub last_in_index: Option<usize>,
    pub last_out_index: Option<usize>,
}

/// Classifies the first `k` elements of `set` by acceptance. A side whose
/// last index stops moving is the observable trace of non-dissection.
pub fn empirical_counts<S: LengthSet + ?Sized>(
    set: &mut S,
    dfa: &UnaryDfa,
    k: usize,
) -> EmpiricalCounts {
    let mut counts = EmpiricalCounts::default();
    for (i, e) in set.take(k).enumerate() {
        if dfa.accepts(&e.length) {
            counts.in_count += 1;
            counts.last_in_index = Some(i);
        } else {
            counts.out_count += 1;
            counts.last_out_index = Some(i);
        }
    }
    counts
}

/// Compares the verdict with the first `k` elements of Π: the finite side
/// must receive exactly the exceptional lengths, no more and no fewer.
///
/// Fails with [`Error::KTooSmall`] unless the `k`-th element is already
/// past the threshold and past the tail.
pub fn cross_check(params: Params, dfa: &UnaryDfa, k: usize) -> Result<bool> {
    let verdict = dissect_verdict(params, dfa);
    cross_check_verdict(&verdict, k)
}

pub fn cross_check_verdict(verdict: &DissectionVerdict, k: usize) -> Result<bool> {
    let prefix: Vec<_> = PiSet::new(verdict.params).take(k).collect();
    let q_tail = verdict.dfa.tail_len();
    let last = prefix.last().ok_or(Error::OutOfRange {
        what: "count k",
        min: 1,
    })?;
    let last_n = last.index.expect("pi elements carry indices").n;
    if last_n < verdict.threshold_n0 || last.length < BigUint::from(q_tail) {
        return Err(Error::KTooSmall {
            k,
            n: last_n,
            threshold: verdict.threshold_n0,
            q_tail,
        });
    }
    let observed: Vec<&BigUint> = prefix
        .iter()
        .map(|e| &e.length)
        .filter(|l| verdict.finite_side.holds(verdict.dfa.accepts(l)))
        .collect();
    Ok(observed.len() == verdict.exceptional_lengths.len()
        && observed
            .iter()
            .zip(&verdict.exceptional_lengths)
            .all(|(a, b)| *a == b))
}

/// Re-derives every claim of a certificate from its own fields.
///
/// Checks the threshold's sufficient condition, the residue-0 acceptance
/// behind `finite_side`, the exceptional list against a fresh enumeration of
/// Π, and that the first lengths past the threshold are multiples of `r`.
pub fn verify_certificate(cert: &DissectionVerdict) -> std::result::Result<(), String> {
    let params = cert.params;
    let r = cert.r_cycle;
    if r != cert.dfa.cycle_len() as u64 {
        return Err(format!(
            "r = {r} but the automaton's cycle has length {}",
            cert.dfa.cycle_len()
        ));
    }
    let n0 = cert.threshold_n0;
    if n0 <= params.monotonicity_guard() {
        return Err(format!(
            "threshold {n0} does not exceed the guard {}",
            params.monotonicity_guard()
        ));
    }
    let level = params.floor_log_ratio(n0).map_err(|e| e.to_string())?;
    if u128::from(n0) < u128::from(r) + u128::from(params.alpha()) * u128::from(level + 1) {
        return Err(format!("margin at threshold {n0} is below r = {r}"));
    }
    let expected_side = if cert.dfa.accepts_zero_residue() {
        FiniteSide::Difference
    } else {
        FiniteSide::Intersection
    };
    if cert.finite_side != expected_side {
        return Err(format!(
            "finite side should be {expected_side:?}, certificate says {:?}",
            cert.finite_side
        ));
    }
    let recomputed: Vec<BigUint> = unstable_prefix(params, n0, cert.dfa.tail_len())
        .map(|e| e.length)
        .filter(|l| cert.finite_side.holds(cert.dfa.accepts(l)))
        .collect();
    if recomputed != cert.exceptional_lengths {
        return Err("exceptional lengths do not match the enumeration of Π".into());
    }
    let past: Vec<_> = PiSet::from_min_n(params, n0).take(64).collect();
    if let Some(e) = past
        .iter()
        .find(|e| !e.length.is_multiple_of(&BigUint::from(r)))
    {
        return Err(format!(
            "length at {} is not a multiple of r",
            e.index.unwrap()
        ));
    }
    if cert.conclusion != Conclusion::NotDissecting {
        return Err("unexpected conclusion".into());
    }
    if cert.stable_residue != 0 {
        return Err("stable residue must be 0".into());
    }
    Ok(())
}
