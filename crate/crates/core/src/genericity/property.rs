use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::{parse_word_list, Alphabet, Word};
use crate::smallcancel::{check_c16, Presentation};
use crate::stallings::{conjugates_avoid, is_malnormal, longest_readable, CoreGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Property {
    /// `<x_1..x_n | r_1..r_m>` is C'(1/6).
    #[serde(rename = "C16")]
    C16,
    /// `r_1..r_m` freely generate a subgroup of rank `m`.
    #[serde(rename = "RANK_M")]
    RankM,
    /// `<r_1..r_m>` is malnormal in `F_n`.
    #[serde(rename = "MALNORMAL_IN_F", alias = "MALNORMAL")]
    MalnormalInF,
    /// `<r_1..r_m>` meets every conjugate of every `H_i` trivially.
    #[serde(rename = "AVOID_CONJUGATES")]
    AvoidConjugates,
    /// No cyclic shift of any `r_k` has a subword of at least half its length
    /// readable in the core graph of any `H_i`.
    #[serde(rename = "HALF_READABLE_FREE")]
    HalfReadableFree,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::C16,
        Property::RankM,
        Property::MalnormalInF,
        Property::AvoidConjugates,
        Property::HalfReadableFree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::C16 => "C16",
            Property::RankM => "RANK_M",
            Property::MalnormalInF => "MALNORMAL_IN_F",
            Property::AvoidConjugates => "AVOID_CONJUGATES",
            Property::HalfReadableFree => "HALF_READABLE_FREE",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        if upper == "MALNORMAL" {
            return Ok(Property::MalnormalInF);
        }
        Property::ALL
            .into_iter()
            .find(|p| p.name() == upper)
            .ok_or_else(|| Error::Parse {
                text: s.to_string(),
                reason: "unknown property".into(),
            })
    }
}

/// Verdict of one property on one tuple. `certified` is false only when a
/// failure witness did not pass its own re-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub property: Property,
    pub holds: bool,
    pub certified: bool,
}

/// Properties and fixed subgroups, prepared once for many tuples.
#[derive(Debug, Clone)]
pub struct Evaluator {
    alphabet: Alphabet,
    m: usize,
    props: Vec<Property>,
    subgroups: Vec<CoreGraph>,
}

impl Evaluator {
    /// Rejects finite-index subgroups, which can never be avoided by a
    /// nontrivial tuple.
    pub fn new(alphabet: Alphabet, m: usize, props: Vec<Property>, subgroups: Vec<Vec<Word>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("tuple size m must be at least 1".into()));
        }
        if props.is_empty() {
            return Err(Error::InvalidParameter("no properties selected".into()));
        }
        let subgroups = subgroups
            .iter()
            .enumerate()
            .map(|(index, gens)| {
                let g = CoreGraph::fold(alphabet, gens)?;
                match g.finite_index() {
                    Some(finite_index) => Err(Error::FiniteIndexSubgroup { index, finite_index }),
                    None => Ok(g),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluator {
            alphabet,
            m,
            props,
            subgroups,
        })
    }

    /// Subgroups given as generator text, one list per subgroup.
    pub fn from_text(alphabet: Alphabet, m: usize, props: Vec<Property>, subgroups: &[Vec<String>]) -> Result<Self> {
        let parsed = subgroups
            .iter()
            .map(|gens| {
                gens.iter()
                    .map(|g| parse_word_list(alphabet, g))
                    .collect::<Result<Vec<_>>>()
                    .map(|v| v.concat())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, m, props, parsed)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn props(&self) -> &[Property] {
        &self.props
    }

    pub fn subgroups(&self) -> &[CoreGraph] {
        &self.subgroups
    }

    /// Every selected property, evaluated independently, in selection order.
    pub fn evaluate(&self, words: &[Word]) -> Result<Vec<Verdict>> {
        if words.len() != self.m {
            return Err(Error::InvalidParameter(format!(
                "expected {} words, got {}",
                self.m,
                words.len()
            )));
        }
        for (index, w) in words.iter().enumerate() {
            self.alphabet.check(w.alphabet())?;
            if w.is_empty() {
                return Err(Error::EmptyWord);
            }
            if !w.is_cyclically_reduced() {
                return Err(Error::NotCyclicallyReduced { index });
            }
        }
        let graph = CoreGraph::fold(self.alphabet, words)?;
        self.props
            .iter()
            .map(|&property| {
                let (holds, certified) = match property {
                    Property::RankM => (graph.rank() == self.m, true),
                    Property::MalnormalInF => {
                        let cert = is_malnormal(&graph);
                        (cert.malnormal, cert.malnormal || cert.verify(&graph))
                    }
                    Property::AvoidConjugates => match conjugates_avoid(&graph, &self.subgroups)? {
                        None => (true, true),
                        Some(w) => (false, w.verify(&graph, &self.subgroups)),
                    },
                    Property::C16 => {
                        let p = Presentation::new_deduplicated(self.alphabet, words.to_vec())?;
                        (check_c16(&p).c16, true)
                    }
                    Property::HalfReadableFree => {
                        let mut free = true;
                        'outer: for g in &self.subgroups {
                            for r in words {
                                if longest_readable(g, r)?.at_least_half() {
                                    free = false;
                                    break 'outer;
                                }
                            }
                        }
                        (free, true)
                    }
                };
                Ok(Verdict {
                    property,
                    holds,
                    certified,
                })
            })
            .collect()
    }
}

/// One-off evaluation of `words` against `props` and fixed subgroups.
pub fn evaluate_tuple(words: &[Word], props: &[Property], subgroups: &[Vec<Word>]) -> Result<Vec<Verdict>> {
    let alphabet = words.first().ok_or(Error::EmptyWord)?.alphabet();
    Evaluator::new(alphabet, words.len(), props.to_vec(), subgroups.to_vec())?.evaluate(words)
}
