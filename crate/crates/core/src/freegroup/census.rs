//! Enumeration, counting and uniform sampling of cyclically reduced words.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::word::{Alphabet, Letter, Word};

/// Number of reduced words of length exactly `t`: `2n (2n-1)^(t-1)`.
pub fn count_reduced(alphabet: Alphabet, t: usize) -> Option<u128> {
    if t == 0 {
        return Some(1);
    }
    let n = alphabet.rank() as u128;
    (2 * n - 1)
        .checked_pow(t as u32 - 1)
        .and_then(|p| p.checked_mul(2 * n))
}

/// Number of cyclically reduced words of length exactly `t >= 1`:
/// `(2n-1)^t + 1 + (n-1)(1 + (-1)^t)`.
pub fn count_cyclically_reduced(alphabet: Alphabet, t: usize) -> Option<u128> {
    if t == 0 {
        return Some(1);
    }
    let n = alphabet.rank() as u128;
    let parity = if t % 2 == 0 { 2 * (n - 1) } else { 0 };
    (2 * n - 1)
        .checked_pow(t as u32)
        .and_then(|p| p.checked_add(1 + parity))
}

/// Iterator over every cyclically reduced word of length exactly `t`, in
/// lexicographic order of letters (`a < A < b < B < ...`).
#[derive(Debug, Clone)]
pub struct CyclicallyReducedWords {
    alphabet: Alphabet,
    current: Option<Vec<Letter>>,
}

impl CyclicallyReducedWords {
    pub fn new(alphabet: Alphabet, t: usize) -> Self {
        assert!(t >= 1, "length must be positive");
        let mut first = Vec::with_capacity(t);
        for i in 0..t {
            let prev = if i == 0 { None } else { Some(first[i - 1]) };
            first.push(smallest_after(alphabet, prev, 0).expect("rank >= 1"));
        }
        let mut it = CyclicallyReducedWords {
            alphabet,
            current: Some(first),
        };
        it.skip_non_cyclic();
        it
    }

    fn skip_non_cyclic(&mut self) {
        while let Some(cur) = &self.current {
            if cur[0] != cur[cur.len() - 1].inverse() {
                return;
            }
            self.advance();
        }
    }

    /// Steps to the next reduced word in lexicographic order.
    fn advance(&mut self) {
        let Some(cur) = self.current.as_mut() else {
            return;
        };
        let t = cur.len();
        let mut i = t;
        while i > 0 {
            i -= 1;
            let prev = if i == 0 { None } else { Some(cur[i - 1]) };
            if let Some(next) = smallest_after(self.alphabet, prev, cur[i].code() + 1) {
                cur[i] = next;
                for j in i + 1..t {
                    cur[j] = smallest_after(self.alphabet, Some(cur[j - 1]), 0).expect("rank >= 1");
                }
                return;
            }
        }
        self.current = None;
    }
}

/// Smallest letter with code `>= from` that does not cancel against `prev`.
fn smallest_after(alphabet: Alphabet, prev: Option<Letter>, from: usize) -> Option<Letter> {
    (from..alphabet.letter_count())
        .map(Letter::from_code)
        .find(|&l| prev != Some(l.inverse()))
}

impl Iterator for CyclicallyReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let out = self.current.clone()?;
        self.advance();
        self.skip_non_cyclic();
        Some(Word::from_reduced_unchecked(self.alphabet, out))
    }
}

pub fn enumerate_cyclically_reduced(alphabet: Alphabet, t: usize) -> CyclicallyReducedWords {
    CyclicallyReducedWords::new(alphabet, t)
}

/// Independent ChaCha stream for `(seed, t, index)`; the same triple always
/// yields the same generator regardless of evaluation order.
pub(crate) fn stream_rng(seed: u64, t: usize, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(t as u64)));
    rng.set_stream(index);
    rng
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Draws a uniformly random cyclically reduced word of length exactly `t`.
///
/// A reduced word is grown letter by letter (first letter uniform over `2n`,
/// then uniform over the `2n-1` non-cancelling letters) and rejected when its
/// last letter inverts its first. The result is a pure function of
/// `(seed, index)`.
pub fn sample_cyclically_reduced(alphabet: Alphabet, t: usize, seed: u64, index: u64) -> Word {
    assert!(t >= 1, "length must be positive");
    let mut rng = stream_rng(seed, t, index);
    sample_with(alphabet, t, &mut rng)
}

fn sample_with<R: Rng>(alphabet: Alphabet, t: usize, rng: &mut R) -> Word {
    let k = alphabet.letter_count();
    let mut letters = Vec::with_capacity(t);
    loop {
        letters.clear();
        letters.push(Letter::from_code(rng.gen_range(0..k)));
        for _ in 1..t {
            let prev = *letters.last().unwrap();
            // Skip over the single cancelling letter.
            let mut code = rng.gen_range(0..k - 1);
            if code >= prev.inverse().code() {
                code += 1;
            }
            letters.push(Letter::from_code(code));
        }
        if t == 1 || letters[0] != letters[t - 1].inverse() {
            return Word::from_reduced_unchecked(alphabet, letters);
        }
    }
}

/// Uniform over cyclically reduced words of length `1..=t`.
pub fn sample_cyclically_reduced_upto(alphabet: Alphabet, t: usize, seed: u64, index: u64) -> Word {
    assert!(t >= 1, "length must be positive");
    // Offset the stream key so this mode never shares draws with exact length t.
    let mut rng = stream_rng(seed ^ 0x5555_5555_5555_5555, t, index);
    let exact: Option<Vec<u128>> = (1..=t)
        .map(|len| count_cyclically_reduced(alphabet, len))
        .collect();
    let len = match exact.and_then(|c| c.iter().try_fold(0u128, |a, &b| a.checked_add(b)).map(|s| (c, s))) {
        Some((counts, total)) => {
            let mut x = rng.gen_range(0..total);
            let mut len = t;
            for (i, &c) in counts.iter().enumerate() {
                if x < c {
                    len = i + 1;
                    break;
                }
                x -= c;
            }
            len
        }
        None => {
            let weights: Vec<f64> = (1..=t)
                .map(|len| ((2 * alphabet.rank() - 1) as f64).powi(len as i32))
                .collect();
            WeightedIndex::new(&weights).expect("positive weights").sample(&mut rng) + 1
        }
    };
    sample_with(alphabet, len, &mut rng)
}
