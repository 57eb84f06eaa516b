//! Reduced words in a free group of rank at most 26.
//!
//! Letters are encoded as `2 * generator + inverse_bit`, so the inverse of a
//! letter is obtained by flipping the low bit. The textual form uses `a..z`
//! for generators and `A..Z` for their inverses (`"abA"` is `a b a^-1`).

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};

/// Largest supported rank; one lowercase character per generator.
pub const MAX_RANK: usize = 26;

/// A generator or the inverse of a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        assert!(generator < MAX_RANK, "generator index {generator} out of range");
        Letter((generator as u8) << 1 | inverse as u8)
    }

    /// Letter with the given code (`2 * generator + inverse_bit`).
    pub fn from_code(code: usize) -> Self {
        assert!(code < 2 * MAX_RANK);
        Letter(code as u8)
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.generator() as u8) as char
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Letter::new(c as usize - 'a' as usize, false)),
            'A'..='Z' => Some(Letter::new(c as usize - 'A' as usize, true)),
            _ => None,
        }
    }

    /// All `2 * rank` letters in code order `a, A, b, B, ...`.
    pub fn alphabet(rank: usize) -> impl Iterator<Item = Letter> + Clone {
        (0..2 * rank).map(Letter::from_code)
    }
}

/// A freely reduced word. The empty word is the identity and the tree basepoint.
///
/// Ordering is lexicographic on letter codes; use [`Word::shortlex_cmp`] when
/// length should dominate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// Reduces `letters`, rejecting letters outside the alphabet of rank `rank`.
    pub fn reduce_in(rank: usize, letters: &[Letter]) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.generator() >= rank) {
            return invalid(format!("letter {} outside the alphabet of rank {rank}", l.to_char()));
        }
        Ok(Word::reduce(letters.iter().copied()))
    }

    /// Parses the compact textual form and reduces it.
    ///
    /// The lone string `"e"` (and the empty string) denote the identity, so the
    /// fifth generator cannot be written on its own.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match Letter::from_char(c) {
                Some(l) => letters.push(l),
                None => return invalid(format!("character {c:?} is not a letter")),
            }
        }
        Ok(Word::reduce(letters))
    }

    /// Parses and checks that every letter belongs to the alphabet of rank `rank`.
    pub fn parse_in(rank: usize, s: &str) -> Result<Self> {
        let w = Word::parse(s)?;
        if !w.fits_rank(rank) {
            return invalid(format!("word {s:?} uses generators beyond rank {rank}"));
        }
        Ok(w)
    }

    pub fn fits_rank(&self, rank: usize) -> bool {
        self.letters.iter().all(|l| l.generator() < rank)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Product `self * other`, freely reduced.
    pub fn mul(&self, other: &Word) -> Word {
        let cancel = self
            .letters
            .iter()
            .rev()
            .zip(other.letters.iter())
            .take_while(|(a, b)| **a == b.inverse())
            .count();
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * cancel);
        letters.extend_from_slice(&self.letters[..self.len() - cancel]);
        letters.extend_from_slice(&other.letters[cancel..]);
        Word { letters }
    }

    /// Appends one letter, cancelling if needed.
    pub fn push(&self, l: Letter) -> Word {
        let mut letters = self.letters.clone();
        if letters.last() == Some(&l.inverse()) {
            letters.pop();
        } else {
            letters.push(l);
        }
        Word { letters }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `g * self * g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word {
            letters: self.letters[..n.min(self.len())].to_vec(),
        }
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word {
            letters: self.letters[n.min(self.len())..].to_vec(),
        }
    }

    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.letters
            .iter()
            .zip(other.letters.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len() <= other.len() && other.letters[..self.len()] == self.letters[..]
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self = u c u^-1` with `c` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (Word, Word) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        (
            Word { letters: self.letters[..k].to_vec() },
            Word { letters: self.letters[k..n - k].to_vec() },
        )
    }

    /// Shortest `r` with `self = r^m`; `self` must be nonempty.
    pub fn primitive_root(&self) -> (Word, usize) {
        let n = self.len();
        for p in 1..=n {
            if n % p == 0 && (p..n).all(|i| self.letters[i] == self.letters[i - p]) {
                return (Word { letters: self.letters[..p].to_vec() }, n / p);
            }
        }
        (self.clone(), 1)
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate_left(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::identity();
        }
        let mut letters = self.letters.clone();
        letters.rotate_left(k % self.len());
        Word { letters }
    }

    /// Length first, then lexicographic on letter codes.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }

    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        Word { letters }
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word { letters: vec![l] }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Word {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(w("aAb"), w("b"));
        assert_eq!(Word::reduce([]), Word::identity());
        assert_eq!(w("abBa"), w("aa"));
        assert_eq!(w("aa").len(), 2);
    }

    #[test]
    fn letter_outside_alphabet_is_rejected() {
        let c = Letter::new(2, false);
        assert!(Word::reduce_in(2, &[c]).is_err());
        assert!(Word::parse_in(2, "abc").is_err());
        assert!(Word::parse("a1").is_err());
    }

    #[test]
    fn identity_renders_as_e() {
        assert_eq!(Word::identity().to_string(), "e");
        assert_eq!(w("e"), Word::identity());
        assert_eq!(w("abA").to_string(), "abA");
    }

    #[test]
    fn cyclic_decomposition_and_root() {
        let (u, c) = w("abA").cyclic_decomposition();
        assert_eq!((u, c), (w("a"), w("b")));
        let (u, c) = w("ab").cyclic_decomposition();
        assert_eq!((u, c), (Word::identity(), w("ab")));
        assert_eq!(w("ababab").primitive_root(), (w("ab"), 3));
        assert_eq!(w("aab").primitive_root(), (w("aab"), 1));
        assert!(w("abA").conjugate_by(&w("A")) == w("b"));
    }

    #[test]
    fn shortlex_prefers_length() {
        assert_eq!(w("b").shortlex_cmp(&w("aa")), Ordering::Less);
        assert_eq!(w("a").shortlex_cmp(&w("A")), Ordering::Less);
    }

    #[test]
    fn serde_uses_compact_strings() {
        let s = serde_json::to_string(&w("abA")).unwrap();
        assert_eq!(s, "\"abA\"");
        let back: Word = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w("abA"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn raw_letters() -> impl Strategy<Value = Vec<Letter>> {
            prop::collection::vec((0usize..3, any::<bool>()), 0..24)
                .prop_map(|v| v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
        }

        proptest! {
            #[test]
            fn reduce_is_idempotent(raw in raw_letters()) {
                let once = Word::reduce(raw);
                let twice = Word::reduce(once.letters().iter().copied());
                prop_assert_eq!(once, twice);
            }

            #[test]
            fn group_laws(a in raw_letters(), b in raw_letters()) {
                let (a, b) = (Word::reduce(a), Word::reduce(b));
                prop_assert!(a.mul(&a.inverse()).is_empty());
                prop_assert_eq!(a.mul(&b).inverse(), b.inverse().mul(&a.inverse()));
                let (u, c) = a.cyclic_decomposition();
                prop_assert!(c.is_cyclically_reduced());
                prop_assert_eq!(u.mul(&c).mul(&u.inverse()), a);
            }
        }
    }
}
