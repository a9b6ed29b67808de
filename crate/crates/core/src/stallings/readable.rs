use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::Word;

use super::graph::CoreGraph;

/// Longest cyclic subword of `r` that labels a path in a core graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReadableSubword {
    /// Letters readable.
    pub length: usize,
    /// `|r|`.
    pub total: usize,
    /// Position in `r` where the best subword starts (cyclically).
    pub start: usize,
}

impl ReadableSubword {
    pub fn fraction(&self) -> Ratio<usize> {
        Ratio::new(self.length, self.total)
    }

    /// `length >= total / 2`, i.e. the subword is at least half of `r`.
    pub fn at_least_half(&self) -> bool {
        2 * self.length >= self.total
    }
}

/// Longest subword of any cyclic shift of `r` that labels a reduced path in
/// `graph` starting at any vertex.
///
/// Folded graphs are deterministic and co-deterministic, so the set of
/// live start vertices only shrinks as letters are read.
pub fn longest_readable(graph: &CoreGraph, r: &Word) -> Result<ReadableSubword> {
    graph.alphabet().check(r.alphabet())?;
    if r.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !r.is_cyclically_reduced() {
        return Err(Error::InvalidParameter(format!("{r} is not cyclically reduced")));
    }
    let letters = r.letters();
    let n = letters.len();
    let mut best = ReadableSubword {
        length: 0,
        total: n,
        start: 0,
    };
    let mut live: Vec<usize> = Vec::with_capacity(graph.vertex_count());
    for start in 0..n {
        live.clear();
        live.extend(0..graph.vertex_count());
        let mut len = 0;
        while len < n && !live.is_empty() {
            let l = letters[(start + len) % n];
            live.retain_mut(|v| match graph.target(*v, l) {
                Some(t) => {
                    *v = t;
                    true
                }
                None => false,
            });
            if !live.is_empty() {
                len += 1;
            }
        }
        if len > best.length {
            best.length = len;
            best.start = start;
            if len == n {
                break;
            }
        }
    }
    Ok(best)
}

pub fn longest_readable_fraction(graph: &CoreGraph, r: &Word) -> Result<Ratio<usize>> {
    longest_readable(graph, r).map(|s| s.fraction())
}
