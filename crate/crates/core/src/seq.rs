//! `{*,0}`-sequences and their cyclic shifting structure.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    /// The radial circle of the pair carries the dot.
    Star,
    /// The radial circle of the pair carries the 0-framing.
    Zero,
}

impl Symbol {
    pub fn flipped(self) -> Symbol {
        match self {
            Symbol::Star => Symbol::Zero,
            Symbol::Zero => Symbol::Star,
        }
    }

    fn as_char(self) -> char {
        match self {
            Symbol::Star => '*',
            Symbol::Zero => '0',
        }
    }
}

/// A nonempty cyclic word in `{*, 0}`. Indices are taken mod the length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarZeroSequence(Vec<Symbol>);

/// Result of the cork-order calculation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorkOrder {
    Order(usize),
    NotACork,
}

impl StarZeroSequence {
    pub fn new(entries: Vec<Symbol>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::BadParameter("a {*,0}-sequence needs length >= 1".into()));
        }
        Ok(StarZeroSequence(entries))
    }

    /// `(*, 0, ..., 0)` of length `n`.
    pub fn star_then_zeros(n: usize) -> Result<Self> {
        let mut v = vec![Symbol::Zero; n];
        if let Some(first) = v.first_mut() {
            *first = Symbol::Star;
        }
        Self::new(v)
    }

    /// `(0, *, ..., *)` of length `n`.
    pub fn zero_then_stars(n: usize) -> Result<Self> {
        let mut v = vec![Symbol::Star; n];
        if let Some(first) = v.first_mut() {
            *first = Symbol::Zero;
        }
        Self::new(v)
    }

    /// `(0, *, 0, *, ...)` of length `2n`.
    pub fn alternating(n: usize) -> Result<Self> {
        Self::new((0..2 * n).map(|k| if k % 2 == 0 { Symbol::Zero } else { Symbol::Star }).collect())
    }

    /// Every sequence of length `n`, in lexicographic order with `*` < `0`.
    pub fn all(n: usize) -> Vec<StarZeroSequence> {
        assert!(n >= 1 && n < usize::BITS as usize);
        (0..1usize << n)
            .map(|mask| {
                StarZeroSequence(
                    (0..n)
                        .map(|k| if mask >> (n - 1 - k) & 1 == 0 { Symbol::Star } else { Symbol::Zero })
                        .collect(),
                )
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.0
    }

    /// Entry at `i` with `i` read mod the length.
    pub fn get(&self, i: i64) -> Symbol {
        self.0[self.reduce(i)]
    }

    pub fn reduce(&self, i: i64) -> usize {
        i.rem_euclid(self.len() as i64) as usize
    }

    /// `S_i`: entry `j` of the result is entry `j - i` of `self`.
    pub fn shift(&self, i: i64) -> StarZeroSequence {
        let n = self.len();
        let r = self.reduce(i);
        StarZeroSequence((0..n).map(|j| self.0[(j + n - r) % n]).collect())
    }

    /// Least `p > 0` with `S_p(x) = x`; always a divisor of the length.
    pub fn period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .filter(|p| n % p == 0)
            .find(|&p| (0..n).all(|j| self.0[j] == self.0[(j + p) % n]))
            .unwrap_or(n)
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&s| s == self.0[0])
    }

    /// The period when it exceeds 1; constant sequences are not corks.
    pub fn cork_order(&self) -> CorkOrder {
        match self.period() {
            1 => CorkOrder::NotACork,
            p => CorkOrder::Order(p),
        }
    }

    pub fn star_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == Symbol::Star).count()
    }

    pub fn flipped_at(&self, i: i64) -> StarZeroSequence {
        let mut v = self.0.clone();
        let k = self.reduce(i);
        v[k] = v[k].flipped();
        StarZeroSequence(v)
    }

    /// Removes entry `i`; `None` when that would leave an empty sequence.
    pub fn deleted_at(&self, i: usize) -> Option<StarZeroSequence> {
        if self.len() <= 1 || i >= self.len() {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(i);
        Some(StarZeroSequence(v))
    }
}

impl fmt::Display for StarZeroSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

impl FromStr for StarZeroSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '*' => Ok(Symbol::Star),
                '0' => Ok(Symbol::Zero),
                other => Err(Error::BadParameter(format!("invalid sequence symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

impl Serialize for StarZeroSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for StarZeroSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(s: &str) -> StarZeroSequence {
        s.parse().unwrap()
    }

    // Independent oracle: rotate a list one step at a time.
    fn rotate_right_naive(x: &[Symbol], steps: usize) -> Vec<Symbol> {
        let mut v = x.to_vec();
        for _ in 0..steps {
            let last = v.pop().unwrap();
            v.insert(0, last);
        }
        v
    }

    fn period_naive(x: &[Symbol]) -> usize {
        (1..=x.len()).find(|&p| rotate_right_naive(x, p) == x).unwrap()
    }

    #[test]
    fn shift_examples() {
        assert_eq!(seq("*00").shift(0), seq("*00"));
        assert_eq!(seq("*0*0").shift(2), seq("*0*0"));
        assert_eq!(seq("*00").shift(1), seq("0*0"));
        assert_eq!(
            seq("*00").shift(1).entries(),
            rotate_right_naive(seq("*00").entries(), 1).as_slice()
        );
        assert_eq!(seq("*00").shift(-1), seq("00*"));
    }

    #[test]
    fn period_examples() {
        assert_eq!(seq("000").period(), 1);
        assert_eq!(seq("*0*0").period(), 2);
        assert_eq!(seq("*0000").period(), 5);
        assert_eq!(period_naive(seq("*0000").entries()), 5);
    }

    #[test]
    fn cork_order_examples() {
        for n in 2..=8 {
            assert_eq!(StarZeroSequence::star_then_zeros(n).unwrap().cork_order(), CorkOrder::Order(n));
        }
        assert_eq!(seq("**").cork_order(), CorkOrder::NotACork);
        assert_eq!(seq("*0*0").cork_order(), CorkOrder::Order(2));
    }

    #[test]
    fn empty_and_bad_symbols_rejected() {
        assert!("".parse::<StarZeroSequence>().is_err());
        assert!("*1".parse::<StarZeroSequence>().is_err());
    }

    #[test]
    fn period_divides_length_exhaustive() {
        for n in 1..=12 {
            for x in StarZeroSequence::all(n) {
                let p = x.period();
                assert_eq!(n % p, 0, "{x}");
                assert_eq!(p, period_naive(x.entries()), "{x}");
                assert_eq!(x.shift(p as i64), x);
                for q in 1..p {
                    assert_ne!(x.shift(q as i64), x);
                }
            }
        }
    }

    #[test]
    fn family_sequences() {
        assert_eq!(StarZeroSequence::alternating(2).unwrap(), seq("0*0*"));
        assert_eq!(StarZeroSequence::zero_then_stars(3).unwrap(), seq("0**"));
        assert_eq!(StarZeroSequence::zero_then_stars(3).unwrap().period(), 3);
    }

    fn arb_seq() -> impl Strategy<Value = StarZeroSequence> {
        prop::collection::vec(prop_oneof![Just(Symbol::Star), Just(Symbol::Zero)], 1..16)
            .prop_map(|v| StarZeroSequence::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn shifts_compose(x in arb_seq(), i in -40i64..40, j in -40i64..40) {
            prop_assert_eq!(x.shift(i).shift(j), x.shift(i + j));
        }

        #[test]
        fn shift_matches_naive_rotation(x in arb_seq(), i in 0usize..40) {
            let naive = rotate_right_naive(x.entries(), i % x.len());
            let shifted = x.shift(i as i64);
            prop_assert_eq!(shifted.entries(), naive.as_slice());
        }
    }
}
