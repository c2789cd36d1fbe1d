//! The index set Δ, the length formula φ and its divisor ω, computed with
//! exact integer arithmetic only.
//!
//! Throughout, `L(n)` denotes the floor of the logarithm of `n` in base
//! `beta / alpha`, i.e. the largest `k` with `beta^k <= n * alpha^k`. It stands
//! in for `⌊ln n / (ln beta - ln alpha)⌋`; the two agree because
//! `(beta/alpha)^k <= n` iff `k <= ln n / ln(beta/alpha)`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::RationalBound;

/// The pair `(alpha, beta)` with `1 <= alpha < beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Params {
    alpha: u64,
    beta: u64,
}

#[derive(Deserialize)]
struct RawParams {
    alpha: u64,
    beta: u64,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.alpha, raw.beta)
    }
}

/// An index `(j, n)`. Ordered lexicographically by `(n, j)`, which is also
/// the numeric order of the corresponding lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeltaIndex {
    pub n: u64,
    pub j: u64,
}

impl DeltaIndex {
    pub const fn new(j: u64, n: u64) -> Self {
        Self { n, j }
    }
}

impl fmt::Display for DeltaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.j, self.n)
    }
}

/// `1 * 2 * ... * n`.
pub fn factorial(n: u64) -> BigUint {
    product_range(2, n)
}

/// Product of the integers `lo..=hi`; 1 when the range is empty.
fn product_range(lo: u64, hi: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in lo.max(1)..=hi {
        acc *= k;
    }
    acc
}

impl Params {
    pub fn new(alpha: u64, beta: u64) -> Result<Self> {
        if alpha == 0 || beta <= alpha {
            return Err(Error::InvalidParams { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// Picks `(alpha, beta) = (m, m + 1)` with `m = ⌊q / (p - q)⌋ + 1`, so that
    /// `1 < beta/alpha < c` for `c = p/q`.
    pub fn suggest(c: &RationalBound) -> Result<Self> {
        if !c.exceeds_one() {
            return Err(Error::ConstantTooSmall {
                c: c.to_string(),
                bound: "1".into(),
            });
        }
        let p = c.numerator();
        let q = c.denominator();
        let m = q / (p - q) + 1u32;
        let alpha = m
            .to_u64()
            .filter(|&m| m < u64::MAX)
            .ok_or(Error::ConstantTooSmall {
                c: c.to_string(),
                bound: "1 by a margin representable in 64-bit parameters".into(),
            })?;
        Self::new(alpha, alpha + 1)
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    /// `beta / alpha` as an exact rational.
    pub fn ratio(&self) -> RationalBound {
        RationalBound::new(self.beta, self.alpha).expect("alpha is positive")
    }

    /// `L(n)`: the largest `k >= 0` with `beta^k <= n * alpha^k`.
    pub fn floor_log_ratio(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(self.level(n))
    }

    /// `L(n)` for `n >= 1`.
    pub(crate) fn level(&self, n: u64) -> u64 {
        debug_assert!(n >= 1);
        let alpha = BigUint::from(self.alpha);
        let beta = BigUint::from(self.beta);
        let n_big = BigUint::from(n);
        let holds = |k: u64| {
            let k = u32::try_from(k).expect("exponent fits in u32");
            beta.pow(k) <= &n_big * alpha.pow(k)
        };
        // Exponential search for an upper bracket, then bisect.
        let mut lo = 0u64;
        let mut hi = 1u64;
        while holds(hi) {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if holds(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// `n > alpha * L(n)`: whether `n` admits any index at all.
    pub fn admits(&self, n: u64) -> bool {
        n >= 1 && self.admits_level(n, self.level(n))
    }

    fn admits_level(&self, n: u64, level: u64) -> bool {
        u128::from(n) > u128::from(self.alpha) * u128::from(level)
    }

    pub fn in_delta(&self, idx: DeltaIndex) -> bool {
        if idx.n == 0 {
            return false;
        }
        let level = self.level(idx.n);
        self.admits_level(idx.n, level) && idx.j <= level
    }

    fn require_delta(&self, idx: DeltaIndex) -> Result<u64> {
        if idx.n == 0 {
            return Err(Error::NotInDelta { j: idx.j, n: idx.n });
        }
        let level = self.level(idx.n);
        if self.admits_level(idx.n, level) && idx.j <= level {
            Ok(level)
        } else {
            Err(Error::NotInDelta { j: idx.j, n: idx.n })
        }
    }

    /// The least element of Δ, which is always `(0, 1)`.
    pub fn first_index(&self) -> DeltaIndex {
        DeltaIndex::new(0, 1)
    }

    /// `φ(j, n) = beta^j * n! / alpha^j`.
    ///
    /// The division is checked to be exact.
    pub fn phi(&self, idx: DeltaIndex) -> Result<BigUint> {
        self.require_delta(idx)?;
        let j = u32::try_from(idx.j).expect("j <= L(n) fits in u32");
        let numerator = BigUint::from(self.beta).pow(j) * factorial(idx.n);
        let denominator = BigUint::from(self.alpha).pow(j);
        let (quotient, remainder) = numerator.div_rem(&denominator);
        if !remainder.is_zero() {
            return Err(Error::Integrity(format!(
                "phi{idx} is not an integer for alpha={}, beta={}",
                self.alpha, self.beta
            )));
        }
        Ok(quotient)
    }

    /// `ω(n) = n! / (alpha * L(n) + 1)!`, the product of
    /// `alpha * L(n) + 2 ..= n`.
    pub fn omega(&self, n: u64) -> Result<BigUint> {
        let level = self.floor_log_ratio(n)?;
        if !self.admits_level(n, level) {
            return Err(Error::OmegaUndefined {
                n,
                bound: self.alpha * level,
            });
        }
        Ok(product_range(self.alpha * level + 2, n))
    }

    /// The next element of Δ after `idx` in `(n, j)` order.
    ///
    /// Moves to `(j + 1, n)` while `j < L(n)`; otherwise scans upward for the
    /// next admissible `n`, which need not be `n + 1`.
    pub fn delta_successor(&self, idx: DeltaIndex) -> Result<DeltaIndex> {
        let level = self.require_delta(idx)?;
        if idx.j < level {
            return Ok(DeltaIndex::new(idx.j + 1, idx.n));
        }
        Ok(DeltaIndex::new(0, self.next_admissible(idx.n)))
    }

    /// Smallest admissible `m > n`.
    pub(crate) fn next_admissible(&self, n: u64) -> u64 {
        // n - alpha * L(n) is unbounded, so this terminates.
        (n + 1..).find(|&m| self.admits(m)).expect("unbounded scan")
    }

    /// Smallest `n0 >= 1` with `(n0 + 1) * beta / (n0 * alpha) < c`.
    ///
    /// Because `(n + 1) / n` decreases, the inequality then holds for every
    /// `n >= n0`.
    pub fn corollary_n0(&self, c: &RationalBound) -> Result<u64> {
        let alpha = num_bigint::BigInt::from(self.alpha);
        let beta = num_bigint::BigInt::from(self.beta);
        let slack = &alpha * c.numerator() - &beta * c.denominator();
        if slack <= num_bigint::BigInt::zero() {
            return Err(Error::ConstantTooSmall {
                c: c.to_string(),
                bound: self.ratio().to_string(),
            });
        }
        // (n+1) beta den < n alpha num  <=>  n * slack > beta * den
        let n0 = (beta * c.denominator()) / slack + 1u32;
        Ok(n0.to_u64().unwrap_or(u64::MAX))
    }

    /// A threshold `N` such that `n - alpha * L(n) > r` for every `n >= N`.
    ///
    /// `N` is the least `n` with `n - alpha * (L(n) + 1) >= r` and
    /// `n > ⌈alpha * beta / (beta - alpha)⌉`. Past that guard the real
    /// function `x - alpha * ln x / ln(beta/alpha)` is increasing, and the
    /// integer margin at `N` is strictly below it, so the bound propagates to
    /// every larger `n`. Not necessarily minimal.
    pub fn stabilization_threshold(&self, r: u64) -> Result<u64> {
        if r == 0 {
            return Err(Error::OutOfRange {
                what: "cycle length r",
                min: 1,
            });
        }
        let guard = self.monotonicity_guard();
        let alpha = u128::from(self.alpha);
        let n = (guard + 1..)
            .find(|&n| {
                let level = u128::from(self.level(n));
                u128::from(n) >= u128::from(r) + alpha * (level + 1)
            })
            .expect("margin is unbounded");
        Ok(n)
    }

    /// Smallest `m` such that every `n >= m` is admissible.
    ///
    /// Past the point where `n - alpha * (L(n) + 1) >= 0` (and the
    /// monotonicity guard) every `n` is admissible; below it the last hole is
    /// found by direct scan.
    pub fn dense_from(&self) -> u64 {
        let alpha = u128::from(self.alpha);
        let safe = (self.monotonicity_guard() + 1..)
            .find(|&n| u128::from(n) >= alpha * (u128::from(self.level(n)) + 1))
            .expect("margin is unbounded");
        (1..safe)
            .rev()
            .find(|&n| !self.admits(n))
            .map_or(1, |hole| hole + 1)
    }

    /// `⌈alpha * beta / (beta - alpha)⌉`.
    pub fn monotonicity_guard(&self) -> u64 {
        let num = u128::from(self.alpha) * u128::from(self.beta);
        let den = u128::from(self.beta - self.alpha);
        u64::try_from(num.div_ceil(den)).expect("guard fits in u64")
    }

    /// All indices with `n <= n_max`, in order.
    pub fn indices_up_to(&self, n_max: u64) -> impl Iterator<Item = DeltaIndex> + '_ {
        (1..=n_max).flat_map(move |n| {
            let level = self.level(n);
            let top = if self.admits_level(n, level) {
                Some(level)
            } else {
                None
            };
            top.into_iter()
                .flat_map(move |level| (0..=level).map(move |j| DeltaIndex::new(j, n)))
        })
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={}, beta={}", self.alpha, self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: u64, beta: u64) -> Params {
        Params::new(alpha, beta).unwrap()
    }

    fn idx(j: u64, n: u64) -> DeltaIndex {
        DeltaIndex::new(j, n)
    }

    /// Linear scan: raise k until beta^(k+1) > n alpha^(k+1).
    fn level_oracle(alpha: u64, beta: u64, n: u64) -> u64 {
        let (mut bk, mut ak) = (BigUint::from(beta), BigUint::from(alpha));
        let mut k = 0;
        while bk <= &ak * n {
            k += 1;
            bk *= beta;
            ak *= alpha;
        }
        k
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(0, 2).is_err());
        assert!(Params::new(2, 2).is_err());
        assert!(Params::new(2, 1).is_err());
        assert!(Params::new(1, 2).is_ok());
        let err = serde_json::from_str::<Params>(r#"{"alpha":3,"beta":2}"#);
        assert!(err.is_err());
        let ok: Params = serde_json::from_str(r#"{"alpha":2,"beta":3}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&ok).unwrap(),
            r#"{"alpha":2,"beta":3}"#
        );
    }

    #[test]
    fn floor_log_ratio_examples() {
        assert_eq!(p(1, 2).floor_log_ratio(1).unwrap(), 0);
        assert_eq!(p(1, 2).floor_log_ratio(1024).unwrap(), 10);
        assert_eq!(p(1, 2).floor_log_ratio(1023).unwrap(), 9);
        assert_eq!(p(2, 3).floor_log_ratio(14).unwrap(), 6);
        assert!(matches!(
            p(1, 2).floor_log_ratio(0),
            Err(Error::ZeroArgument)
        ));
    }

    #[test]
    fn floor_log_ratio_matches_linear_scan() {
        for (a, b) in [(1, 2), (2, 3), (3, 4), (2, 5), (101, 102), (7, 100)] {
            for n in 1..3000 {
                assert_eq!(p(a, b).level(n), level_oracle(a, b, n), "({a},{b}) n={n}");
            }
        }
        // exact powers are where floats would go wrong
        assert_eq!(
            p(2, 3).level(3u64.pow(20) / 2u64.pow(10)),
            level_oracle(2, 3, 3u64.pow(20) / 2u64.pow(10))
        );
        assert_eq!(p(1, 3).level(3u64.pow(39)), 39);
        assert_eq!(p(1, 3).level(3u64.pow(39) - 1), 38);
    }

    #[test]
    fn in_delta_examples() {
        assert!(p(1, 2).in_delta(idx(3, 8)));
        assert!(!p(1, 2).in_delta(idx(4, 8)));
        assert!(!p(2, 3).in_delta(idx(1, 6)));
        assert!(p(1, 2).in_delta(idx(0, 1)));
        assert!(!p(1, 2).in_delta(idx(0, 0)));
        // (0, 1) is admitted for every parameter pair
        assert!(p(2, 3).in_delta(idx(0, 1)));
        assert!(!p(2, 3).in_delta(idx(0, 12)));
        assert!(p(2, 3).in_delta(idx(6, 13)));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(p(1, 2).phi(idx(0, 1)).unwrap(), BigUint::from(1u32));
        assert_eq!(p(1, 2).phi(idx(2, 4)).unwrap(), BigUint::from(96u32));
        assert_eq!(
            p(2, 3).phi(idx(1, 14)).unwrap(),
            BigUint::from(130_767_436_800u64)
        );
        assert!(matches!(
            p(1, 2).phi(idx(3, 4)),
            Err(Error::NotInDelta { j: 3, n: 4 })
        ));
    }

    #[test]
    fn omega_examples() {
        assert_eq!(p(1, 2).omega(1).unwrap(), BigUint::from(1u32));
        assert_eq!(p(1, 2).omega(4).unwrap(), BigUint::from(4u32));
        assert_eq!(p(1, 2).omega(5).unwrap(), BigUint::from(20u32));
        assert!(matches!(
            p(2, 3).omega(6),
            Err(Error::OmegaUndefined { n: 6, bound: 8 })
        ));
        assert!(p(1, 2).omega(0).is_err());
    }

    #[test]
    fn omega_is_factorial_quotient() {
        let params = p(2, 3);
        for n in (1..40).filter(|&n| params.admits(n)) {
            let l = params.level(n);
            assert_eq!(
                params.omega(n).unwrap() * factorial(2 * l + 1),
                factorial(n)
            );
        }
    }

    #[test]
    fn successor_examples() {
        assert_eq!(p(1, 2).delta_successor(idx(1, 4)).unwrap(), idx(2, 4));
        assert_eq!(p(1, 2).delta_successor(idx(2, 4)).unwrap(), idx(0, 5));
        assert_eq!(p(2, 3).delta_successor(idx(6, 14)).unwrap(), idx(0, 15));
        // gaps: n = 2..=10 and n = 12 are not admissible for (2, 3)
        assert_eq!(p(2, 3).delta_successor(idx(0, 1)).unwrap(), idx(0, 11));
        assert_eq!(p(2, 3).delta_successor(idx(5, 11)).unwrap(), idx(0, 13));
        assert!(p(2, 3).delta_successor(idx(0, 12)).is_err());
    }

    #[test]
    fn growth_n0_examples() {
        let n0 = |a, b, c: &str| p(a, b).corollary_n0(&c.parse().unwrap()).unwrap();
        assert_eq!(n0(2, 3, "2/1"), 4);
        assert_eq!(n0(1, 2, "3/1"), 3);
        assert_eq!(n0(1, 2, "5/2"), 5);
        assert!(p(1, 2).corollary_n0(&"2".parse().unwrap()).is_err());
        assert!(p(2, 3).corollary_n0(&"3/2".parse().unwrap()).is_err());
    }

    #[test]
    fn growth_n0_is_minimal() {
        for (a, b) in [(1, 2), (2, 3), (3, 4), (2, 5)] {
            for c in ["3/1", "5/2", "2/1", "7/4", "11/2", "101/40"] {
                let c: RationalBound = c.parse().unwrap();
                let Ok(n0) = p(a, b).corollary_n0(&c) else {
                    continue;
                };
                let holds = |n: u64| {
                    num_bigint::BigInt::from((n + 1) * b) * c.denominator()
                        < num_bigint::BigInt::from(n * a) * c.numerator()
                };
                assert!(holds(n0));
                assert!(n0 == 1 || !holds(n0 - 1));
                assert!((n0..n0 + 200).all(holds));
            }
        }
    }

    #[test]
    fn stabilization_threshold_examples() {
        let n2 = p(1, 2).stabilization_threshold(2).unwrap();
        assert!(n2 <= 6);
        assert_eq!(n2, 5);
        let n5 = p(1, 2).stabilization_threshold(5).unwrap();
        assert!(n5 <= 10);
        assert_eq!(n5, 9);
        assert!(p(1, 2).stabilization_threshold(0).is_err());
    }

    #[test]
    fn stabilization_threshold_is_sound() {
        for (a, b) in [(1, 2), (2, 3), (3, 4), (2, 5), (5, 6)] {
            let params = p(a, b);
            for r in 1..=12 {
                let big_n = params.stabilization_threshold(r).unwrap();
                for n in big_n..big_n + 10_000 {
                    assert!(
                        n - a * level_oracle(a, b, n) > r,
                        "({a},{b}) r={r} N={big_n} fails at n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn dense_from_matches_scan() {
        for (a, b, expected) in [(1, 2, 1), (2, 5, 1), (2, 3, 13), (3, 4, 37), (5, 6, 131)] {
            let params = p(a, b);
            assert_eq!(params.dense_from(), expected, "({a},{b})");
            assert!((expected..expected + 5000).all(|n| n > a * level_oracle(a, b, n)));
        }
    }

    #[test]
    fn suggest_examples() {
        let s = |c: &str| Params::suggest(&c.parse().unwrap()).unwrap();
        assert_eq!(s("3/2"), p(3, 4));
        assert_eq!(s("2/1"), p(2, 3));
        assert_eq!(s("101/100"), p(101, 102));
        assert_eq!(s("5/2"), p(1, 2));
        assert!(Params::suggest(&"1/1".parse().unwrap()).is_err());
        assert!(Params::suggest(&"1/2".parse().unwrap()).is_err());
    }

    #[test]
    fn indices_up_to_counts() {
        // n = 1: 1, n = 2: 2, n = 3: 2, n = 4: 3
        assert_eq!(p(1, 2).indices_up_to(4).count(), 8);
        let all: Vec<_> = p(2, 3).indices_up_to(13).collect();
        assert_eq!(all.first(), Some(&idx(0, 1)));
        assert_eq!(all[1], idx(0, 11));
        assert_eq!(all.len(), 1 + 6 + 7);
    }
}
