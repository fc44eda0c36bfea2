//! Words over `g1, g2, h1, h2` and their inverses.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const GEN_NAMES: [&str; 4] = ["g1", "g2", "h1", "h2"];

/// A letter encoded as `2 * generator + inverse_bit`, so letters sort as
/// `g1 < g1^-1 < g2 < g2^-1 < h1 < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(pub u8);

impl Letter {
    pub const G1: Letter = Letter(0);
    pub const G2: Letter = Letter(2);
    pub const H1: Letter = Letter(4);
    pub const H2: Letter = Letter(6);
    pub const COUNT: usize = 8;

    pub fn new(generator: usize, exponent: i8) -> Letter {
        Letter((2 * generator) as u8 + u8::from(exponent < 0))
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn exponent(self) -> i8 {
        if self.0 & 1 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = GEN_NAMES[self.generator()];
        if self.exponent() < 0 {
            write!(f, "{name}^-1")
        } else {
            f.write_str(name)
        }
    }
}

/// A freely reduced word. Serialized in the literal syntax `g1 g2^-1 h1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<Letter>);

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = WordParseError;

    fn try_from(s: String) -> Result<Word, WordParseError> {
        s.parse()
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn generator(g: usize) -> Word {
        Word(vec![Letter::new(g, 1)])
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word(out)
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

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// `self^-1 · other`.
    pub fn ldiv(&self, other: &Word) -> Word {
        self.inverse().mul(other)
    }

    pub fn conjugate(&self, by: &Word) -> Word {
        by.mul(self).mul(&by.inverse())
    }

    /// Strips inverse pairs from the two ends; returns the core and the
    /// conjugator `c` with `self = c · core · c^-1`.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let w = &self.0;
        let mut i = 0;
        while i < w.len() / 2 && w[i] == w[w.len() - 1 - i].inverse() {
            i += 1;
        }
        (Word(w[i..w.len() - i].to_vec()), Word(w[..i].to_vec()))
    }

    pub fn cyclically_reduced(&self) -> Word {
        self.cyclic_core().0
    }

    /// Cyclic rotation starting at position `k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return Word::identity();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word::from_letters(v)
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Exponent sum per generator.
    pub fn abelianize(&self) -> [i64; 4] {
        let mut v = [0i64; 4];
        for l in &self.0 {
            v[l.generator()] += i64::from(l.exponent());
        }
        v
    }

    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }

    /// Canonical representative of the cyclic class of `self` and its
    /// inverse, used to deduplicate relators.
    pub fn cyclic_canonical(&self) -> Word {
        let core = self.cyclically_reduced();
        let inv = core.inverse();
        let mut best = core.clone();
        for w in [&core, &inv] {
            for k in 0..w.len() {
                let r = Word({
                    let mut v = w.0[k..].to_vec();
                    v.extend_from_slice(&w.0[..k]);
                    v
                });
                if r.0 < best.0 {
                    best = r;
                }
            }
        }
        best
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad word literal `{0}`")]
pub struct WordParseError(pub String);

impl FromStr for Word {
    type Err = WordParseError;

    /// Parses `g1 g2^-1 h1`; `1` or an empty string is the identity.
    fn from_str(s: &str) -> Result<Word, WordParseError> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, "-1")) => (n, -1),
                Some((n, "1")) => (n, 1),
                Some(_) => return Err(WordParseError(tok.to_string())),
                None => (tok, 1),
            };
            let g = GEN_NAMES
                .iter()
                .position(|&n| n == name)
                .ok_or_else(|| WordParseError(tok.to_string()))?;
            letters.push(Letter::new(g, exp));
        }
        Ok(Word::from_letters(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let w: Word = "g1 g2^-1 h1".parse().unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.to_string(), "g1 g2^-1 h1");
        assert_eq!("1".parse::<Word>().unwrap(), Word::identity());
        assert!("g3".parse::<Word>().is_err());
        assert!("g1^2".parse::<Word>().is_err());
    }

    #[test]
    fn products_reduce() {
        let w: Word = "g1 h1".parse().unwrap();
        assert!(w.mul(&w.inverse()).is_empty());
        assert_eq!("g1 g1^-1 h2".parse::<Word>().unwrap().to_string(), "h2");
    }

    #[test]
    fn cyclic_core_and_canonical() {
        let w: Word = "h1 g1 g2 h1^-1".parse().unwrap();
        let (core, c) = w.cyclic_core();
        assert_eq!(core.to_string(), "g1 g2");
        assert_eq!(core.conjugate(&c), w);
        let r: Word = "g2 g1".parse().unwrap();
        let s: Word = "g1^-1 g2^-1".parse().unwrap();
        assert_eq!(r.cyclic_canonical(), s.cyclic_canonical());
    }

    #[test]
    fn shortlex_orders_by_length_first() {
        let a: Word = "h2".parse().unwrap();
        let b: Word = "g1 g1".parse().unwrap();
        assert_eq!(a.shortlex_cmp(&b), Ordering::Less);
        let c: Word = "g1^-1".parse().unwrap();
        assert_eq!(Word::generator(0).shortlex_cmp(&c), Ordering::Less);
    }
}
