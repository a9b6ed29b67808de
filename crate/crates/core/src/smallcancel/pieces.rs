use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::slice::ParallelSliceMut;
use serde::Serialize;

use crate::freegroup::{Letter, Word};

use super::presentation::Presentation;

/// One element of the symmetrized relator set: a rotation of a relator or of
/// its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SymmetrizedWord {
    pub relator: usize,
    pub inverted: bool,
    pub shift: usize,
}

/// All rotations of all relators and their inverses, deduplicated and sorted
/// lexicographically. Entries reference their cyclic word instead of storing
/// letters, so memory stays linear in total relator length.
#[derive(Debug, Clone)]
pub(crate) struct SymmetrizedIndex {
    cycles: Vec<Vec<Letter>>,
    /// `(cycle, shift)`; cycle `2j` is relator `j`, cycle `2j + 1` its inverse.
    entries: Vec<(u32, u32)>,
    pub(crate) min_len: usize,
}

impl SymmetrizedIndex {
    pub(crate) fn new(p: &Presentation) -> Self {
        let mut cycles = Vec::with_capacity(2 * p.relators().len());
        for r in p.relators() {
            cycles.push(r.letters().to_vec());
            cycles.push(r.inverse().letters().to_vec());
        }
        let mut entries: Vec<(u32, u32)> = cycles
            .iter()
            .enumerate()
            .flat_map(|(c, ls)| (0..ls.len() as u32).map(move |s| (c as u32, s)))
            .collect();
        let min_len = cycles.iter().map(Vec::len).min().unwrap_or(0);
        let mut index = SymmetrizedIndex {
            cycles,
            entries: Vec::new(),
            min_len,
        };
        entries.par_sort_unstable_by(|&a, &b| index.compare(a, b).then(a.cmp(&b)));
        entries.dedup_by(|b, a| index.compare(*a, *b) == Ordering::Equal);
        index.entries = entries;
        index
    }

    pub(crate) fn len(&self) -> usize {
        self.entries.len()
    }

    fn cycle_len(&self, e: (u32, u32)) -> usize {
        self.cycles[e.0 as usize].len()
    }

    fn letter(&self, e: (u32, u32), i: usize) -> Letter {
        let c = &self.cycles[e.0 as usize];
        c[(e.1 as usize + i) % c.len()]
    }

    pub(crate) fn word_len(&self, i: usize) -> usize {
        self.cycle_len(self.entries[i])
    }

    pub(crate) fn describe(&self, i: usize) -> SymmetrizedWord {
        let (c, s) = self.entries[i];
        SymmetrizedWord {
            relator: c as usize / 2,
            inverted: c % 2 == 1,
            shift: s as usize,
        }
    }

    pub(crate) fn letters(&self, i: usize) -> Vec<Letter> {
        let e = self.entries[i];
        (0..self.cycle_len(e)).map(|k| self.letter(e, k)).collect()
    }

    fn lcp_entries(&self, a: (u32, u32), b: (u32, u32)) -> usize {
        let n = self.cycle_len(a).min(self.cycle_len(b));
        (0..n).take_while(|&k| self.letter(a, k) == self.letter(b, k)).count()
    }

    fn compare(&self, a: (u32, u32), b: (u32, u32)) -> Ordering {
        let k = self.lcp_entries(a, b);
        let (la, lb) = (self.cycle_len(a), self.cycle_len(b));
        if k < la.min(lb) {
            self.letter(a, k).cmp(&self.letter(b, k))
        } else {
            la.cmp(&lb)
        }
    }

    pub(crate) fn lcp(&self, i: usize, j: usize) -> usize {
        self.lcp_entries(self.entries[i], self.entries[j])
    }

    /// Common prefix length of entry `i` with `query`.
    pub(crate) fn lcp_query(&self, i: usize, query: &[Letter]) -> usize {
        let e = self.entries[i];
        let n = self.cycle_len(e).min(query.len());
        (0..n).take_while(|&k| self.letter(e, k) == query[k]).count()
    }

    /// First entry not less than `query` in the sorted order.
    pub(crate) fn lower_bound(&self, query: &[Letter]) -> usize {
        self.entries.partition_point(|&e| {
            let n = self.cycle_len(e).min(query.len());
            for k in 0..n {
                let l = self.letter(e, k);
                if l != query[k] {
                    return l < query[k];
                }
            }
            self.cycle_len(e) < query.len()
        })
    }
}

/// Every cyclic shift of every relator and of its inverse, deduplicated.
pub fn symmetrize(p: &Presentation) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for r in p.relators() {
        for w in [r.clone(), r.inverse()] {
            for k in 0..w.len() {
                out.insert(w.cyclic_shift(k));
            }
        }
    }
    out
}

/// Longest piece found, with the two symmetrized words it is a prefix of.
#[derive(Debug, Clone, Serialize)]
pub struct PieceWitness {
    pub piece: Word,
    pub first: SymmetrizedWord,
    pub second: SymmetrizedWord,
}

/// Result of the C'(1/6) check.
#[derive(Debug, Clone, Serialize)]
pub struct PieceReport {
    pub relator_lengths: Vec<usize>,
    /// Longest piece that is a prefix of some symmetrized word of each relator.
    pub longest_piece: Vec<usize>,
    /// Every piece of every relator is strictly shorter than `|r| / 6`.
    pub c16: bool,
    /// Relators whose longest piece is exactly `|r| / 6`.
    pub boundary: Vec<usize>,
    /// The piece with the largest `|piece| / |r|`.
    pub witness: Option<PieceWitness>,
}

impl PieceReport {
    pub fn max_piece(&self) -> usize {
        self.longest_piece.iter().copied().max().unwrap_or(0)
    }
}

/// Longest common prefix of distinct symmetrized words, computed per relator
/// from neighbours in sorted order.
pub fn check_c16(p: &Presentation) -> PieceReport {
    let index = SymmetrizedIndex::new(p);
    report_from_index(p, &index)
}

pub(crate) fn report_from_index(p: &Presentation, index: &SymmetrizedIndex) -> PieceReport {
    let m = p.relators().len();
    let relator_lengths: Vec<usize> = p.relators().iter().map(Word::len).collect();
    let mut longest = vec![0usize; m];
    // (piece length, relator length, entry, partner)
    let mut worst: Option<(usize, usize, usize, usize)> = None;
    for i in 0..index.len() {
        let mut best = (0usize, i);
        if i > 0 {
            best = best.max((index.lcp(i, i - 1), i - 1));
        }
        if i + 1 < index.len() {
            let right = index.lcp(i, i + 1);
            if right > best.0 {
                best = (right, i + 1);
            }
        }
        let rel = index.describe(i).relator;
        longest[rel] = longest[rel].max(best.0);
        if best.0 == 0 {
            continue;
        }
        let rl = relator_lengths[rel];
        let better = match worst {
            None => true,
            // compare best.0 / rl against w.0 / w.1
            Some(w) => best.0 * w.1 > w.0 * rl,
        };
        if better {
            worst = Some((best.0, rl, i, best.1));
        }
    }
    let c16 = (0..m).all(|j| 6 * longest[j] < relator_lengths[j]);
    let boundary = (0..m).filter(|&j| 6 * longest[j] == relator_lengths[j]).collect();
    let witness = worst.map(|(len, _, i, j)| {
        let letters = index.letters(i)[..len].to_vec();
        PieceWitness {
            piece: Word::from_reduced_unchecked(p.alphabet(), letters),
            first: index.describe(i),
            second: index.describe(j),
        }
    });
    PieceReport {
        relator_lengths,
        longest_piece: longest,
        c16,
        boundary,
        witness,
    }
}
