//! Exact construction and verification of a geometrically growing unary
//! language that no regular language dissects.
//!
//! Words over the one-letter alphabet `{a}` are handled through their
//! lengths only. The language Π consists of the lengths
//! `φ(j, n) = (beta/alpha)^j * n!` over the index set Δ; see
//! [`construction`] for the index set, [`lengths`] for the streams,
//! [`automata`] for one-letter DFAs and [`analysis`] for the checks and the
//! non-dissection certificate.

pub mod analysis;
pub mod automata;
pub mod construction;
mod decimal;
pub mod error;
pub mod lengths;
pub mod rational;

pub use analysis::{
    check_divisibility, check_growth, check_ratio_bounds, cross_check, dissect_verdict,
    empirical_counts, verify_certificate, Conclusion, DissectionVerdict, DivisibilityReport,
    EmpiricalCounts, FiniteSide, GrowthMode, GrowthReport, RatioReport,
};
pub use automata::{Decomposition, DfaSource, Reg1Component, UnaryDfa};
pub use construction::{factorial, DeltaIndex, Params};
pub use error::{Error, Result};
pub use lengths::{
    make_ap, make_factorial, make_file_set, make_pi, make_pi_bar, ApSet, Element, FactorialSet,
    FileSet, LengthSet, PiSet, Record,
};
pub use num_bigint::BigUint;
pub use rational::RationalBound;
