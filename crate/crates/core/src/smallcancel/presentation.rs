use std::fmt;

use crate::error::{Error, Result};
use crate::freegroup::{parse_word_lines, Alphabet, Letter, Word};

/// `<x_1, ..., x_n | r_1, ..., r_m>` with cyclically reduced, nonempty,
/// pairwise inequivalent relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

/// Least rotation of `w` and of `w^-1`, whichever is smaller; equal for
/// relators that agree up to cyclic shift and inversion.
pub(crate) fn cyclic_class_key(w: &Word) -> Vec<Letter> {
    fn least_rotation(ls: &[Letter]) -> Vec<Letter> {
        let n = ls.len();
        let rot = |k: usize| (0..n).map(move |i| ls[(k + i) % n]);
        let best = (1..n).fold(0, |best, k| if rot(k).lt(rot(best)) { k } else { best });
        rot(best).collect()
    }
    let fwd = least_rotation(w.letters());
    let inv = least_rotation(w.inverse().letters());
    fwd.min(inv)
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        Self::validate(alphabet, &relators)?;
        let keys: Vec<Vec<Letter>> = relators.iter().map(cyclic_class_key).collect();
        for i in 0..keys.len() {
            for j in 0..i {
                if keys[i] == keys[j] {
                    return Err(Error::DuplicateRelator { first: j, second: i });
                }
            }
        }
        Ok(Presentation { alphabet, relators })
    }

    /// Like [`Presentation::new`] but silently drops relators equivalent to an
    /// earlier one.
    pub fn new_deduplicated(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        Self::validate(alphabet, &relators)?;
        let mut seen = std::collections::HashSet::new();
        let relators = relators
            .into_iter()
            .filter(|r| seen.insert(cyclic_class_key(r)))
            .collect();
        Ok(Presentation { alphabet, relators })
    }

    fn validate(alphabet: Alphabet, relators: &[Word]) -> Result<()> {
        for (index, r) in relators.iter().enumerate() {
            alphabet.check(r.alphabet())?;
            if r.is_empty() {
                return Err(Error::EmptyWord);
            }
            if !r.is_cyclically_reduced() {
                return Err(Error::NotCyclicallyReduced { index });
            }
        }
        Ok(())
    }

    /// Parses `rank n` followed by one relator per line; `#` comments and
    /// blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse {
            text: text.to_string(),
            reason: "missing `rank n` header".into(),
        })?;
        let rank = header
            .strip_prefix("rank")
            .and_then(|r| r.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Parse {
                text: header.to_string(),
                reason: "expected `rank n`".into(),
            })?;
        let alphabet = Alphabet::new(rank)?;
        let body: Vec<&str> = lines.collect();
        let relators = parse_word_lines(alphabet, &body.join("\n"))?;
        Self::new(alphabet, relators)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank {}", self.alphabet.rank())?;
        for r in &self.relators {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
