//! Words in the free group on named generators.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: String,
    /// +1 or -1.
    pub sign: i8,
}

impl Letter {
    pub fn new(gen: impl Into<String>, sign: i8) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        Letter { gen: gen.into(), sign }
    }

    pub fn inverse(&self) -> Letter {
        Letter { gen: self.gen.clone(), sign: -self.sign }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.sign == -other.sign
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        write!(f, "{}", self.gen)
    }
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let (gen, sign) = match s.strip_prefix('-') {
            Some(rest) => (rest, -1),
            None => (s.strip_prefix('+').unwrap_or(&s), 1),
        };
        if gen.is_empty() {
            return Err(serde::de::Error::custom("empty generator name"));
        }
        Ok(Letter::new(gen, sign))
    }
}

/// A based word, kept freely reduced by every constructor.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut w = Word(Vec::new());
        for l in letters {
            w.push(l);
        }
        w
    }

    /// A word from signed generator literals such as `["a", "-b"]`.
    pub fn parse(letters: &[&str]) -> Word {
        Word::from_letters(letters.iter().map(|s| {
            serde_json::from_value::<Letter>(serde_json::Value::String(s.to_string()))
                .expect("valid letter literal")
        }))
    }

    pub fn gen(g: &str, sign: i8) -> Word {
        Word(vec![Letter::new(g, sign)])
    }

    /// Wraps letters without reducing; used by tests that need raw input.
    pub fn unreduced(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    fn push(&mut self, l: Letter) {
        if self.0.last().is_some_and(|last| last.cancels(&l)) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Free reduction (stack based).
    pub fn reduced(&self) -> Word {
        Word::from_letters(self.0.iter().cloned())
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverse).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        Word::from_letters(std::iter::repeat_n(base.0.iter(), e.unsigned_abs() as usize).flatten().cloned())
    }

    /// Inserts `w` at letter position `pos` (0 = front).
    pub fn insert_at(&self, pos: usize, w: &Word) -> Word {
        let pos = pos.min(self.len());
        Word::from_letters(self.0[..pos].iter().chain(w.0.iter()).chain(self.0[pos..].iter()).cloned())
    }

    pub fn exponent_sum(&self, gen: &str) -> i64 {
        self.0.iter().filter(|l| l.gen == gen).map(|l| l.sign as i64).sum()
    }

    /// Nonzero exponent sums per generator.
    pub fn exponent_sums(&self) -> BTreeMap<String, i64> {
        let mut m = BTreeMap::new();
        for l in &self.0 {
            *m.entry(l.gen.clone()).or_insert(0) += l.sign as i64;
        }
        m.retain(|_, v| *v != 0);
        m
    }

    pub fn contains(&self, gen: &str) -> bool {
        self.0.iter().any(|l| l.gen == gen)
    }

    pub fn generators(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|l| l.gen.as_str())
    }

    /// `Some((g, ±1))` when the word is a single letter.
    pub fn single_letter(&self) -> Option<(&str, i8)> {
        match self.0.as_slice() {
            [l] => Some((l.gen.as_str(), l.sign)),
            _ => None,
        }
    }

    /// Image under the homomorphism killing `gen`.
    pub fn delete_generator(&self, gen: &str) -> Word {
        Word::from_letters(self.0.iter().filter(|l| l.gen != gen).cloned())
    }

    /// Substitutes each occurrence of `gen` by `replacement` (its inverse
    /// for negative letters).
    pub fn substitute(&self, gen: &str, replacement: &Word) -> Word {
        let inv = replacement.inverse();
        let mut out = Word::empty();
        for l in &self.0 {
            if l.gen == gen {
                let r = if l.sign > 0 { replacement } else { &inv };
                r.0.iter().cloned().for_each(|x| out.push(x));
            } else {
                out.push(l.clone());
            }
        }
        out
    }

    /// Applies a generator relabeling `g -> (g', s)` with `s = ±1`.
    pub fn relabel<F>(&self, f: F) -> Word
    where
        F: Fn(&str) -> (String, i8),
    {
        Word::from_letters(self.0.iter().map(|l| {
            let (g, s) = f(&l.gen);
            Letter::new(g, l.sign * s)
        }))
    }

    /// Conjugates away matching first/last letters.
    pub fn cyclically_reduced(&self) -> Word {
        let w = self.reduced();
        let mut lo = 0;
        let mut hi = w.0.len();
        while hi - lo >= 2 && w.0[lo].cancels(&w.0[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        Word(w.0[lo..hi].to_vec())
    }

    pub fn rotated(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        Word(self.0[k..].iter().chain(self.0[..k].iter()).cloned().collect())
    }

    /// Normal form up to cyclic permutation and inversion: the least
    /// rotation of the cyclic reduction or of its inverse.
    pub fn cyclic_normal_form(&self) -> Word {
        let c = self.cyclically_reduced();
        let inv = c.inverse();
        (0..c.len().max(1))
            .flat_map(|k| [c.rotated(k), inv.rotated(k)])
            .min()
            .unwrap_or_default()
    }

    /// Every cyclic rotation of `self` and of its inverse, cyclically reduced,
    /// paired with the orientation used (+1 or -1).
    pub fn cyclic_variants(&self) -> Vec<(Word, i8)> {
        let c = self.cyclically_reduced();
        let inv = c.inverse();
        let n = c.len().max(1);
        let mut out: Vec<(Word, i8)> = Vec::with_capacity(2 * n);
        for k in 0..n {
            out.push((c.rotated(k), 1));
        }
        for k in 0..n {
            out.push((inv.rotated(k), -1));
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            if l.sign < 0 {
                write!(f, "{}⁻¹", l.gen)?;
            } else {
                write!(f, "{}", l.gen)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Word::from_letters(Vec::<Letter>::deserialize(d)?))
    }
}
