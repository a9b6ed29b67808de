use serde::Serialize;

use crate::error::Result;
use crate::freegroup::{Letter, Word};

use super::pieces::{report_from_index, PieceReport, SymmetrizedIndex, SymmetrizedWord};
use super::presentation::Presentation;

/// A subword `w[position .. position + length]` that is a prefix of the
/// symmetrized relator `relator` and longer than half of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreendlingerWitness {
    pub relator: SymmetrizedWord,
    pub relator_length: usize,
    pub position: usize,
    pub length: usize,
    pub subword: Word,
    /// The shorter complement `u^-1` that replaces the subword.
    pub replacement: Word,
}

#[derive(Debug, Clone, Serialize)]
pub struct DehnOutcome {
    pub word: Word,
    pub steps: usize,
    /// False when the presentation is not C'(1/6): an irreducible nonempty
    /// result then does not prove the input nontrivial.
    pub guaranteed: bool,
}

impl DehnOutcome {
    pub fn is_trivial(&self) -> bool {
        self.word.is_empty()
    }
}

/// Dehn's algorithm over a fixed presentation. Building the reducer sorts
/// the symmetrized relators once; each reduction then uses binary search.
#[derive(Debug, Clone)]
pub struct DehnReducer {
    presentation: Presentation,
    index: SymmetrizedIndex,
    report: PieceReport,
}

impl DehnReducer {
    pub fn new(p: &Presentation) -> Self {
        let index = SymmetrizedIndex::new(p);
        let report = report_from_index(p, &index);
        DehnReducer {
            presentation: p.clone(),
            index,
            report,
        }
    }

    pub fn piece_report(&self) -> &PieceReport {
        &self.report
    }

    pub fn is_c16(&self) -> bool {
        self.report.c16
    }

    /// Longest qualifying match starting exactly at `query[0]`.
    fn best_at(&self, query: &[Letter]) -> Option<(usize, usize)> {
        let ix = &self.index;
        if ix.len() == 0 || 2 * query.len() <= ix.min_len {
            return None;
        }
        let pos = ix.lower_bound(query);
        // Entries sharing a prefix of length > min_len / 2 with the query
        // form a contiguous block around `pos`.
        let mut best: Option<(usize, usize)> = None;
        let mut consider = |i: usize, l: usize| {
            if 2 * l > ix.word_len(i) && best.is_none_or(|(bl, bi)| l > bl || (l == bl && i < bi)) {
                best = Some((l, i));
            }
        };
        let mut i = pos;
        while i > 0 {
            let l = ix.lcp_query(i - 1, query);
            if 2 * l <= ix.min_len {
                break;
            }
            consider(i - 1, l);
            i -= 1;
        }
        let mut i = pos;
        while i < ix.len() {
            let l = ix.lcp_query(i, query);
            if 2 * l <= ix.min_len {
                break;
            }
            consider(i, l);
            i += 1;
        }
        best
    }

    /// Leftmost position, then longest subword, that is more than half of a
    /// symmetrized relator.
    pub fn greendlinger_witness(&self, w: &Word) -> Result<Option<GreendlingerWitness>> {
        self.presentation.alphabet().check(w.alphabet())?;
        let ls = w.letters();
        for position in 0..ls.len() {
            if let Some((length, entry)) = self.best_at(&ls[position..]) {
                let full = self.index.letters(entry);
                let alphabet = w.alphabet();
                let rest = Word::from_reduced_unchecked(alphabet, full[length..].to_vec());
                return Ok(Some(GreendlingerWitness {
                    relator: self.index.describe(entry),
                    relator_length: full.len(),
                    position,
                    length,
                    subword: w.subword(position, position + length),
                    replacement: rest.inverse(),
                }));
            }
        }
        Ok(None)
    }

    /// Applies Dehn steps until no subword is more than half a relator.
    pub fn reduce(&self, w: &Word) -> Result<DehnOutcome> {
        let mut cur = w.clone();
        let mut steps = 0;
        while let Some(step) = self.greendlinger_witness(&cur)? {
            let before = cur.len();
            cur = cur
                .subword(0, step.position)
                .mul_unchecked(&step.replacement)
                .mul_unchecked(&cur.subword(step.position + step.length, cur.len()));
            debug_assert!(cur.len() < before);
            steps += 1;
        }
        Ok(DehnOutcome {
            word: cur,
            steps,
            guaranteed: self.report.c16,
        })
    }
}

pub fn dehn_reduce(p: &Presentation, w: &Word) -> Result<DehnOutcome> {
    DehnReducer::new(p).reduce(w)
}

pub fn greendlinger_witness(p: &Presentation, w: &Word) -> Result<Option<GreendlingerWitness>> {
    DehnReducer::new(p).greendlinger_witness(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Alphabet;

    fn alpha(n: usize) -> Alphabet {
        Alphabet::new(n).unwrap()
    }

    fn w(n: usize, s: &str) -> Word {
        Word::parse(alpha(n), s).unwrap()
    }

    /// Linear scan over every materialized symmetrized word.
    fn scan_witness(p: &Presentation, word: &Word) -> Option<(usize, usize)> {
        let sym = super::super::symmetrize(p);
        let ls = word.letters();
        for pos in 0..ls.len() {
            let best = sym
                .iter()
                .map(|s| {
                    let l = s.letters().iter().zip(&ls[pos..]).take_while(|(a, b)| a == b).count();
                    (l, s.len())
                })
                .filter(|&(l, n)| 2 * l > n)
                .map(|(l, _)| l)
                .max();
            if let Some(l) = best {
                return Some((pos, l));
            }
        }
        None
    }

    #[test]
    fn witness_examples() {
        let p = Presentation::new(alpha(2), vec![w(2, "aaaaaa")]).unwrap();
        let wit = greendlinger_witness(&p, &w(2, "aaaa")).unwrap().unwrap();
        assert_eq!(wit.subword, w(2, "aaaa"));
        assert_eq!(wit.replacement, w(2, "AA"));
        assert!(greendlinger_witness(&p, &w(2, "bb")).unwrap().is_none());
        assert_eq!(dehn_reduce(&p, &w(2, "baaaab")).unwrap().word, w(2, "bAAb"));
    }

    #[test]
    fn relator_reduces_to_identity() {
        let p = Presentation::new(alpha(2), vec![w(2, "aabaaabbbAbb"), w(2, "abbbAAAbaB")]).unwrap();
        for r in p.relators() {
            let out = dehn_reduce(&p, r).unwrap();
            assert!(out.is_trivial());
            assert!(out.steps >= 1);
        }
    }

    #[test]
    fn witness_matches_linear_scan() {
        let p = Presentation::new(alpha(2), vec![w(2, "aabaaabbbAbb"), w(2, "abbbAAAbaB")]).unwrap();
        let red = DehnReducer::new(&p);
        for t in 1..=7 {
            for word in crate::freegroup::enumerate_cyclically_reduced(alpha(2), t) {
                let fast = red.greendlinger_witness(&word).unwrap().map(|x| (x.position, x.length));
                assert_eq!(fast, scan_witness(&p, &word), "{word}");
            }
        }
    }

    #[test]
    fn non_c16_is_flagged() {
        let p = Presentation::new(alpha(2), vec![w(2, "abAB")]).unwrap();
        let out = dehn_reduce(&p, &w(2, "abAB")).unwrap();
        assert!(!out.guaranteed);
        assert!(out.is_trivial());
    }
}
