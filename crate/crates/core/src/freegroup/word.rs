use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of free generators `x_1, ..., x_n`.
///
/// Ranks are limited to 26 so that every generator has a single-letter text
/// form (`a`..`z`, inverses `A`..`Z`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub const MAX_RANK: usize = 26;

    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > Self::MAX_RANK {
            return Err(Error::InvalidRank(rank));
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(self) -> usize {
        self.rank
    }

    /// Size of the symmetric generating set `{x_i, x_i^-1}`.
    pub fn letter_count(self) -> usize {
        2 * self.rank
    }

    /// All `2n` letters in enumeration order: `a, A, b, B, ...`.
    pub fn letters(self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.letter_count() as u32).map(Letter)
    }

    pub fn check(self, other: Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.rank,
                right: other.rank,
            })
        }
    }
}

/// A generator or its inverse, packed as `2 * generator + inverted`.
///
/// The derived order is lexicographic on `(generator, sign)` with `+ < -`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    /// `generator` is zero-based.
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter(2 * generator as u32 + inverse as u32)
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

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
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word over an [`Alphabet`].
///
/// Every constructor reduces its input, so a `Word` never contains a letter
/// adjacent to its own inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    pub fn letter(alphabet: Alphabet, letter: Letter) -> Result<Self> {
        Self::from_letters(alphabet, [letter])
    }

    /// Reduces a raw sequence of signed, one-based generator indices:
    /// `k` stands for `x_k` and `-k` for its inverse.
    pub fn reduce(raw: &[i32], alphabet: Alphabet) -> Result<Self> {
        let mut letters = Vec::with_capacity(raw.len());
        for &s in raw {
            let index = s.unsigned_abs() as usize;
            if index == 0 || index > alphabet.rank() {
                return Err(Error::IndexOutOfRange {
                    index,
                    rank: alphabet.rank(),
                });
            }
            letters.push(Letter::new(index - 1, s < 0));
        }
        Self::from_letters(alphabet, letters)
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(alphabet: Alphabet, raw: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if l.generator() >= alphabet.rank() {
                return Err(Error::IndexOutOfRange {
                    index: l.generator() + 1,
                    rank: alphabet.rank(),
                });
            }
            push_reduced(&mut letters, l);
        }
        Ok(Word { alphabet, letters })
    }

    /// Caller guarantees the letters are reduced and within range.
    pub(crate) fn from_reduced_unchecked(alphabet: Alphabet, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        Word { alphabet, letters }
    }

    /// Parses the text form: `a`..`z` for generators, `A`..`Z` for inverses,
    /// `1` for the identity. Whitespace is ignored; the result is reduced.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let trimmed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if trimmed == "1" || trimmed.is_empty() {
            return Ok(Self::identity(alphabet));
        }
        let mut letters = Vec::with_capacity(trimmed.len());
        for c in trimmed.chars() {
            let l = Letter::from_char(c).ok_or_else(|| Error::Parse {
                text: text.to_string(),
                reason: format!("unexpected character {c:?}"),
            })?;
            if l.generator() >= alphabet.rank() {
                return Err(Error::Parse {
                    text: text.to_string(),
                    reason: format!("letter {c:?} outside rank {}", alphabet.rank()),
                });
            }
            letters.push(l);
        }
        Self::from_letters(alphabet, letters)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

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
            alphabet: self.alphabet,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.alphabet.check(other.alphabet)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word {
            alphabet: self.alphabet,
            letters,
        }
    }

    /// `self^k` for `k >= 0`; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.alphabet);
        for _ in 0..k.unsigned_abs() {
            out = out.mul_unchecked(&base);
        }
        out
    }

    /// `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Word) -> Result<Word> {
        Ok(g.inverse().multiply(self)?.mul_unchecked(g))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self = conjugator * core * conjugator^-1` with `core`
    /// cyclically reduced and `conjugator` as short as possible.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        let conjugator = Word::from_reduced_unchecked(self.alphabet, self.letters[..k].to_vec());
        let core = Word::from_reduced_unchecked(self.alphabet, self.letters[k..n - k].to_vec());
        (core, conjugator)
    }

    /// Rotation `w[k..] w[..k]`. Only meaningful for cyclically reduced words,
    /// where every rotation is again reduced.
    pub fn cyclic_shift(&self, k: usize) -> Word {
        debug_assert!(self.is_cyclically_reduced());
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut letters = Vec::with_capacity(self.letters.len());
        letters.extend_from_slice(&self.letters[k..]);
        letters.extend_from_slice(&self.letters[..k]);
        Word::from_reduced_unchecked(self.alphabet, letters)
    }

    /// Contiguous subword `w[start..end]`; subwords of reduced words are reduced.
    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word::from_reduced_unchecked(self.alphabet, self.letters[start..end].to_vec())
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.alphabet.rank()];
        for l in &self.letters {
            sums[l.generator()] += if l.is_inverse() { -1 } else { 1 };
        }
        sums
    }

    /// True for positive words: no inverse letters.
    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| !l.is_inverse())
    }
}

pub(crate) fn push_reduced(letters: &mut Vec<Letter>, l: Letter) {
    if letters.last() == Some(&l.inverse()) {
        letters.pop();
    } else {
        letters.push(l);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Shortlex: shorter words first, then lexicographic by letter.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alphabet
            .cmp(&other.alphabet)
            .then(self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Parses a list of words separated by commas, semicolons or whitespace.
pub fn parse_word_list(alphabet: Alphabet, text: &str) -> Result<Vec<Word>> {
    text.split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| Word::parse(alphabet, s))
        .collect()
}

/// Parses a file body with one word per line; `#` starts a comment.
pub fn parse_word_lines(alphabet: Alphabet, text: &str) -> Result<Vec<Word>> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(|line| Word::parse(alphabet, line))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(f2(), s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(Word::reduce(&[1, -1], f2()).unwrap().is_empty());
        assert!(Word::reduce(&[1, 2, -2, -1], f2()).unwrap().is_empty());
        let commutator = Word::reduce(&[1, 2, -1, -2], f2()).unwrap();
        assert_eq!(commutator.to_string(), "abAB");
        assert_eq!(commutator.len(), 4);
    }

    #[test]
    fn reduce_rejects_out_of_range() {
        assert_eq!(
            Word::reduce(&[3], f2()),
            Err(Error::IndexOutOfRange { index: 3, rank: 2 })
        );
        assert!(Word::reduce(&[0], f2()).is_err());
        assert!(Word::parse(f2(), "ac").is_err());
        assert!(Word::parse(f2(), "a-b").is_err());
    }

    #[test]
    fn identity_text_form() {
        assert_eq!(Word::identity(f2()).to_string(), "1");
        assert!(w("1").is_empty());
        assert_eq!(w("a b B A"), Word::identity(f2()));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, conj) = w("abA").cyclic_reduce();
        assert_eq!((core.to_string(), conj.to_string()), ("b".into(), "a".into()));
        let (core, conj) = w("ab").cyclic_reduce();
        assert_eq!((core.to_string(), conj.to_string()), ("ab".into(), "1".into()));
        // A b a B a: strip (A, a) then (b, B).
        let (core, conj) = w("AbaBa").cyclic_reduce();
        assert_eq!((core.to_string(), conj.to_string()), ("a".into(), "Ab".into()));
    }

    #[test]
    fn multiply_examples() {
        assert!(w("a").multiply(&w("A")).unwrap().is_empty());
        assert_eq!(w("ab").multiply(&w("Ba")).unwrap(), w("aa"));
        assert_eq!(w("aba").multiply(&w("Aba")).unwrap(), w("abba"));
        let f3 = Alphabet::new(3).unwrap();
        assert!(matches!(
            w("a").multiply(&Word::parse(f3, "c").unwrap()),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn letter_order_is_plus_before_minus() {
        let order: String = f2().letters().map(|l| l.to_char()).collect();
        assert_eq!(order, "aAbB");
    }

    #[test]
    fn parse_lists() {
        let ws = parse_word_list(f2(), "aa, ab;b  bA").unwrap();
        assert_eq!(ws.len(), 4);
        let ws = parse_word_lines(f2(), "# gens\naa\n\nab # second\n").unwrap();
        assert_eq!(ws, vec![w("aa"), w("ab")]);
    }

    #[test]
    fn pow_and_conjugate() {
        assert_eq!(w("ab").pow(3).to_string(), "ababab");
        assert_eq!(w("ab").pow(-1), w("BA"));
        assert_eq!(w("b").conjugate_by(&w("A")).unwrap(), w("abA"));
    }
}
