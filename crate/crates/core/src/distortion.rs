//! The substitution `a ↦ a b a b^2 ⋯ a b^K`, `b ↦ b a b a^2 ⋯ b a^K` and the
//! HNN extension `F* = <a, b, t | t a t^-1 = φ(a), t b t^-1 = φ(b)>` in which
//! `F = <a, b>` is exponentially distorted.
//!
//! Both images are positive words, so iterating `φ` never cancels and
//! `|φ^n(x)|` is the column sum of `M^n e_x` for the letter-count matrix `M`.
//! In `F*` the element `φ^n(a) = t^n a t^-n` has length at most `2n + 1`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, Endomorphism, Letter, Word};
use crate::smallcancel::{check_c16, Presentation};
use crate::stallings::CoreGraph;

#[derive(Debug, Clone)]
pub struct SubstitutionSystem {
    pub k: u64,
    pub phi: Endomorphism,
    /// `counts[g][h]`: occurrences of generator `g` in `φ(h)`.
    pub counts: [[u64; 2]; 2],
}

/// Builds `φ_K`. The stable letter of the HNN extension is the third
/// generator, written `c` in word text.
pub fn build_phi(k: u64) -> Result<SubstitutionSystem> {
    if k < 1 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    let f2 = Alphabet::new(2)?;
    let image = |head: usize, tail: usize| {
        let mut letters = Vec::new();
        for j in 1..=k {
            letters.push(Letter::new(head, false));
            letters.extend(std::iter::repeat_n(Letter::new(tail, false), j as usize));
        }
        Word::from_letters(f2, letters)
    };
    let phi = Endomorphism::new(f2, vec![image(0, 1)?, image(1, 0)?])?;
    let mut counts = [[0u64; 2]; 2];
    for (h, img) in phi.images().iter().enumerate() {
        for l in img.letters() {
            counts[l.generator()][h] += 1;
        }
    }
    Ok(SubstitutionSystem { k, phi, counts })
}

impl SubstitutionSystem {
    /// `|φ(a)| = |φ(b)| = K + K(K+1)/2`.
    pub fn image_length(&self) -> u64 {
        self.k + self.k * (self.k + 1) / 2
    }

    /// Exact `|φ^n(x)|` for `x = a` (`start = 0`) or `x = b` (`start = 1`).
    pub fn iterate_length(&self, start: usize, n: u32) -> BigUint {
        // v holds the letter counts of φ^i(x).
        let mut v = [BigUint::zero(), BigUint::zero()];
        v[start] = BigUint::one();
        for _ in 0..n {
            let m = &self.counts;
            v = [
                &v[0] * m[0][0] + &v[1] * m[0][1],
                &v[0] * m[1][0] + &v[1] * m[1][1],
            ];
        }
        &v[0] + &v[1]
    }

    /// `φ^n(x)` written out; only feasible for small `K` and `n`.
    pub fn iterate_word(&self, start: usize, n: u32) -> Word {
        let mut w = Word::letter(self.phi.alphabet(), Letter::new(start, false)).expect("rank 2");
        for _ in 0..n {
            w = self.phi.apply(&w).expect("same alphabet");
        }
        w
    }
}

pub fn iterate_length(sys: &SubstitutionSystem, start: usize, n: u32) -> BigUint {
    sys.iterate_length(start, n)
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionRow {
    pub n: u32,
    /// `|φ^n(a)|`, the length of `t^n a t^-n` read in `F`.
    #[serde(serialize_with = "as_decimal")]
    pub length: BigUint,
    /// `K^n`.
    #[serde(serialize_with = "as_decimal")]
    pub bound: BigUint,
    pub ratio: f64,
    /// Upper bound `2n + 1` on the length of the same element in `F*`.
    pub fstar_length: u64,
}

fn as_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    match (a.to_f64(), b.to_f64()) {
        (Some(x), Some(y)) if y.is_finite() && x.is_finite() => x / y,
        _ => {
            // scale both down to f64 range
            let shift = a.bits().max(b.bits()).saturating_sub(1000);
            let x = (a >> shift).to_f64().unwrap_or(f64::INFINITY);
            let y = (b >> shift).to_f64().unwrap_or(f64::INFINITY);
            x / y
        }
    }
}

/// Rows `n = 1..=n_max`; fails if any `|φ^n(a)| < K^n`.
pub fn distortion_profile(k: u64, n_max: u32) -> Result<Vec<DistortionRow>> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let sys = build_phi(k)?;
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let length = sys.iterate_length(0, n);
        let bound = BigUint::from(k).pow(n);
        if length < bound {
            return Err(Error::BoundViolated { n });
        }
        rows.push(DistortionRow {
            n,
            ratio: ratio(&length, &bound),
            length,
            bound,
            fstar_length: 2 * n as u64 + 1,
        });
    }
    Ok(rows)
}

/// `<a, b, t | t a t^-1 φ(a)^-1, t b t^-1 φ(b)^-1>` over rank 3.
pub fn hnn_presentation(k: u64) -> Result<Presentation> {
    let sys = build_phi(k)?;
    let f3 = Alphabet::new(3)?;
    let t = Letter::new(2, false);
    let relators = (0..2)
        .map(|g| {
            let mut letters = vec![t, Letter::new(g, false), t.inverse()];
            letters.extend(sys.phi.image(g).inverse().letters().iter().copied());
            Word::from_letters(f3, letters)
        })
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(f3, relators)
}

/// `φ` is injective iff its images generate a free subgroup of rank 2.
pub fn images_generate_full_rank(phi: &Endomorphism) -> bool {
    let g = CoreGraph::fold(phi.alphabet(), phi.images()).expect("same alphabet");
    g.rank() == phi.alphabet().rank()
}

pub fn phi_injective_check(k: u64) -> Result<bool> {
    Ok(images_generate_full_rank(&build_phi(k)?.phi))
}

/// Smallest `K` in `1..=k_max` whose HNN presentation is C'(1/6).
pub fn minimal_c16_k(k_max: u64) -> Result<Option<u64>> {
    for k in 1..=k_max {
        if check_c16(&hnn_presentation(k)?).c16 {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_substitutions() {
        let s1 = build_phi(1).unwrap();
        assert_eq!(s1.phi.image(0).to_string(), "ab");
        assert_eq!(s1.phi.image(1).to_string(), "ba");
        assert_eq!(s1.counts, [[1, 1], [1, 1]]);

        let s2 = build_phi(2).unwrap();
        assert_eq!(s2.phi.image(0).to_string(), "ababb");
        assert_eq!(s2.phi.image(1).to_string(), "babaa");
        assert_eq!(s2.counts, [[2, 3], [3, 2]]);

        let s100 = build_phi(100).unwrap();
        assert_eq!(s100.phi.image(0).len(), 5150);
        assert_eq!(s100.image_length(), 5150);
        assert_eq!(s100.counts, [[100, 5050], [5050, 100]]);
        assert!(build_phi(0).is_err());
    }

    #[test]
    fn column_sums_are_image_lengths() {
        for k in 1..=20 {
            let s = build_phi(k).unwrap();
            assert!(s.phi.images().iter().all(Word::is_positive));
            for h in 0..2 {
                assert_eq!(s.counts[0][h] + s.counts[1][h], s.phi.image(h).len() as u64);
            }
        }
    }

    #[test]
    fn iterate_examples() {
        let s100 = build_phi(100).unwrap();
        assert_eq!(s100.iterate_length(0, 0), BigUint::from(1u32));
        assert_eq!(s100.iterate_length(0, 1), BigUint::from(5150u32));
        assert_eq!(build_phi(1).unwrap().iterate_length(0, 3), BigUint::from(8u32));
        // M^2 = [[13, 12], [12, 13]]
        assert_eq!(build_phi(2).unwrap().iterate_length(0, 2), BigUint::from(25u32));
    }

    #[test]
    fn matrix_and_word_methods_agree() {
        for k in 1..=5 {
            let s = build_phi(k).unwrap();
            for n in 0..=4 {
                for start in 0..2 {
                    let exact = s.iterate_word(start, n).len();
                    assert_eq!(s.iterate_length(start, n), BigUint::from(exact), "K={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn lengths_grow_and_are_symmetric() {
        for k in 1..=12 {
            let s = build_phi(k).unwrap();
            for n in 0..8 {
                assert!(s.iterate_length(0, n + 1) > s.iterate_length(0, n));
                assert_eq!(s.iterate_length(0, n), s.iterate_length(1, n));
                assert!(s.iterate_length(0, n) >= BigUint::from(k).pow(n));
            }
        }
    }

    #[test]
    fn profile_rows() {
        let rows = distortion_profile(1, 3).unwrap();
        assert_eq!(rows[2].length, BigUint::from(8u32));
        assert_eq!(rows[2].bound, BigUint::from(1u32));
        let rows = distortion_profile(2, 2).unwrap();
        assert_eq!(rows[1].length, BigUint::from(25u32));
        assert_eq!(rows[1].bound, BigUint::from(4u32));
        let rows = distortion_profile(100, 3).unwrap();
        assert!(rows[2].length >= BigUint::from(1_000_000u32));
        assert!(rows.iter().all(|r| r.ratio >= 1.0));
        assert_eq!(rows[2].fstar_length, 7);
        assert!(distortion_profile(5, 0).is_err());
    }

    #[test]
    fn hnn_relators() {
        let p = hnn_presentation(1).unwrap();
        let texts: Vec<String> = p.relators().iter().map(|r| r.to_string()).collect();
        assert_eq!(texts, vec!["caCBA", "cbCAB"]);
        let p = hnn_presentation(100).unwrap();
        assert!(p.relators().iter().all(|r| r.len() == 5153 && r.is_cyclically_reduced()));
    }

    #[test]
    fn injectivity() {
        assert!(phi_injective_check(1).unwrap());
        assert!(phi_injective_check(2).unwrap());
        assert!(phi_injective_check(7).unwrap());
        let f2 = Alphabet::new(2).unwrap();
        let ab = Word::parse(f2, "ab").unwrap();
        let degenerate = Endomorphism::new(f2, vec![ab.clone(), ab]).unwrap();
        assert!(!images_generate_full_rank(&degenerate));
    }
}
