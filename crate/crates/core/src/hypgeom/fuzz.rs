use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::freegroup::{Alphabet, Letter, Word};

use super::path::{audit_geodesic_inequality, check_hypotheses, fellow_travel_length, is_quasigeodesic, PiecewisePath};
use super::space::TreeSpace;

/// Endpoints `p_0, …, p_{2n+1}` of a tree path satisfying the quasigeodesic
/// hypotheses at `δ = 0` with constant `c`.
#[derive(Debug, Clone)]
pub struct FuzzCase {
    pub points: Vec<Word>,
    pub c: usize,
}

/// Appends a reduced label of length `len` that first retraces up to
/// `backtrack` letters of `prev` and then leaves it.
fn next_label<R: Rng>(rng: &mut R, alphabet: Alphabet, prev: &[Letter], len: usize, backtrack: usize) -> Vec<Letter> {
    let b = backtrack.min(len).min(prev.len());
    let mut out: Vec<Letter> = prev.iter().rev().take(b).map(|l| l.inverse()).collect();
    let all: Vec<Letter> = alphabet.letters().collect();
    while out.len() < len {
        let banned_reduce = out.last().map(|l| l.inverse());
        // stepping back along prev would lengthen the backtrack
        let banned_retrace = if out.len() == b && prev.len() > b {
            Some(prev[prev.len() - b - 1].inverse())
        } else {
            None
        };
        let choices: Vec<Letter> = all
            .iter()
            .copied()
            .filter(|&l| Some(l) != banned_reduce && Some(l) != banned_retrace)
            .collect();
        out.push(*choices.choose(rng).expect("rank >= 2"));
    }
    out
}

/// Draws random tree paths with `1..=4` τ's, short σ's and backtracking of
/// fewer than `c_target` edges at each junction. The constant is then set to
/// `c = 1 + ` the largest fellow-travel length among the pairs the hypotheses
/// compare, rejecting draws with `c > c_target`. Every `τ` has length above
/// `12 c_target`, hence above `2(6c + 2δ)`.
pub fn fuzz_tree_path<R: Rng>(rng: &mut R, alphabet: Alphabet, c_target: usize) -> FuzzCase {
    assert!(alphabet.rank() >= 2 && c_target >= 1);
    let space = TreeSpace::new(alphabet);
    loop {
        let n = rng.gen_range(1..=4);
        let mut points = vec![Word::identity(alphabet)];
        let mut prev: Vec<Letter> = Vec::new();
        for j in 0..2 * n + 1 {
            let len = if j % 2 == 1 {
                rng.gen_range(12 * c_target + 1..=12 * c_target + 12)
            } else {
                rng.gen_range(0..=6)
            };
            let backtrack = rng.gen_range(0..c_target);
            let label = next_label(rng, alphabet, &prev, len, backtrack);
            let step = Word::from_letters(alphabet, label.iter().copied()).expect("same alphabet");
            let here = points.last().expect("nonempty").multiply(&step).expect("same alphabet");
            points.push(here);
            if !label.is_empty() {
                prev = label;
            }
        }
        let path = PiecewisePath::from_points(&space, &points, 0, 0).expect("valid path");
        let tau_pairs = (1..n).map(|i| fellow_travel_length(&space, path.tau(i), path.tau(i + 1), 0));
        let sigma_pairs = (1..=n).flat_map(|i| {
            [
                fellow_travel_length(&space, path.sigma(i), path.tau(i), 0),
                fellow_travel_length(&space, path.sigma(i + 1), path.tau(i), 0),
            ]
        });
        let c = 1 + tau_pairs.chain(sigma_pairs).max().unwrap_or(0);
        if c > c_target {
            continue;
        }
        let path = PiecewisePath::from_points(&space, &points, c, 0).expect("valid path");
        debug_assert!(check_hypotheses(&path).all_hold());
        return FuzzCase { points, c };
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzBucket {
    pub c_target: usize,
    pub paths: usize,
    pub quasigeodesic_failures: usize,
    /// Largest additive constant needed at the given λ.
    pub max_min_eps: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub cases: usize,
    pub seed: u64,
    pub lambda: f64,
    pub eps: f64,
    pub hypothesis_failures: usize,
    pub audit_violations: usize,
    pub quasigeodesic_failures: usize,
    pub by_c: Vec<FuzzBucket>,
}

impl FuzzSummary {
    pub fn audit_holds(&self) -> bool {
        self.hypothesis_failures == 0 && self.audit_violations == 0
    }
}

/// Runs `cases` fuzzed tree paths, case `i` with `c_target = 1 + i % 4` drawn
/// from its own ChaCha stream, through the hypotheses, the audit and the
/// `(λ, ε)` check.
pub fn fuzz_suite(alphabet: Alphabet, cases: usize, seed: u64, lambda: f64, eps: f64) -> Result<FuzzSummary> {
    let space = TreeSpace::new(alphabet);
    let mut by_c: Vec<FuzzBucket> = (1..=4)
        .map(|c_target| FuzzBucket {
            c_target,
            paths: 0,
            quasigeodesic_failures: 0,
            max_min_eps: 0.0,
        })
        .collect();
    let (mut hypothesis_failures, mut audit_violations) = (0, 0);
    for i in 0..cases {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let bucket = &mut by_c[i % 4];
        let case = fuzz_tree_path(&mut rng, alphabet, bucket.c_target);
        let path = PiecewisePath::from_points(&space, &case.points, case.c, 0)?;
        bucket.paths += 1;
        if !check_hypotheses(&path).all_hold() {
            hypothesis_failures += 1;
            continue;
        }
        audit_violations += audit_geodesic_inequality(&path)?.violations;
        let q = is_quasigeodesic(&path, lambda, eps);
        if !q.holds {
            bucket.quasigeodesic_failures += 1;
        }
        bucket.max_min_eps = bucket.max_min_eps.max(q.min_eps);
    }
    Ok(FuzzSummary {
        cases,
        seed,
        lambda,
        eps,
        hypothesis_failures,
        audit_violations,
        quasigeodesic_failures: by_c.iter().map(|b| b.quasigeodesic_failures).sum(),
        by_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeom::path::{audit_geodesic_inequality, is_quasigeodesic};
    use crate::hypgeom::space::MetricSpace;

    #[test]
    fn labels_are_reduced_with_exact_backtrack() {
        let f2 = Alphabet::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let prev = Word::parse(f2, "abbaB").unwrap();
        for b in 0..4 {
            for _ in 0..50 {
                let label = next_label(&mut rng, f2, prev.letters(), 8, b);
                let w = Word::from_letters(f2, label.iter().copied()).unwrap();
                assert_eq!(w.len(), 8);
                let joined = prev.multiply(&w).unwrap();
                assert_eq!(joined.len(), prev.len() + 8 - 2 * b);
            }
        }
    }

    #[test]
    fn fuzzed_paths_satisfy_hypotheses_and_conclusions() {
        let f2 = Alphabet::new(2).unwrap();
        let space = TreeSpace::new(f2);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for i in 0..60 {
            let case = fuzz_tree_path(&mut rng, f2, 1 + i % 4);
            assert!((1..=4).contains(&case.c));
            let path = PiecewisePath::from_points(&space, &case.points, case.c, 0).unwrap();
            assert!(check_hypotheses(&path).all_hold());
            assert!(audit_geodesic_inequality(&path).unwrap().holds());
            // c >= 2 means some junction retraces an edge, and a retraced
            // edge already has arclength 2 over distance 0
            let q = is_quasigeodesic(&path, 2.0, 0.0);
            assert_eq!(q.holds, case.c == 1, "{case:?}");
            if !q.holds {
                assert_eq!(q.worst.unwrap().distance, 0);
            }
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let f2 = Alphabet::new(2).unwrap();
        let a = fuzz_suite(f2, 12, 5, 2.0, 0.0).unwrap();
        let b = fuzz_suite(f2, 12, 5, 2.0, 0.0).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.audit_holds());
        assert_eq!(a.by_c.iter().map(|b| b.paths).sum::<usize>(), 12);
        assert_eq!(a.by_c[0].quasigeodesic_failures, 0);
    }

    #[test]
    fn breakpoints_are_two_quasigeodesic() {
        let f2 = Alphabet::new(2).unwrap();
        let space = TreeSpace::new(f2);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for i in 0..100 {
            let case = fuzz_tree_path(&mut rng, f2, 1 + i % 4);
            let p = &case.points;
            for a in 0..p.len() {
                let mut arc = 0;
                for b in a + 1..p.len() {
                    arc += space.distance(&p[b - 1], &p[b]);
                    assert!(arc <= 2 * space.distance(&p[a], &p[b]));
                }
            }
        }
    }
}
