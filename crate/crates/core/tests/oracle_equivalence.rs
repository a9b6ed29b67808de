mod oracles;

use grouplab::distortion::{build_phi, hnn_presentation, iterate_length};
use grouplab::freegroup::enumerate_cyclically_reduced;
use grouplab::genericity::{run_experiment, ExperimentConfig, Mode, Property};
use grouplab::smallcancel::check_c16;
use grouplab::stallings::{intersect, is_malnormal, longest_readable};
use grouplab::{Alphabet, CoreGraph, Presentation, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oracles::*;

fn word(alphabet: Alphabet, w: &[i32]) -> Word {
    Word::parse(alphabet, &to_text(w)).unwrap()
}

fn random_subgroup(rng: &mut ChaCha8Rng, rank: usize) -> Vec<Raw> {
    let count = rng.gen_range(1..=3);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=6);
            random_reduced(rng, rank, len)
        })
        .collect()
}

#[test]
fn membership_agrees_with_bouquet_oracle() {
    let f2 = Alphabet::new(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let probes = all_reduced(2, 6);
    for _ in 0..60 {
        let gens = random_subgroup(&mut rng, 2);
        let graph = CoreGraph::fold(f2, &gens.iter().map(|g| word(f2, g)).collect::<Vec<_>>()).unwrap();
        let oracle = BouquetOracle::new(&gens);
        for p in &probes {
            assert_eq!(graph.contains(&word(f2, p)).unwrap(), oracle.contains(p), "{gens:?} {p:?}");
        }
        // every ball element is a member
        for b in ball(&gens, 3) {
            assert!(graph.contains(&word(f2, &b)).unwrap());
        }
    }
}

#[test]
fn basis_regenerates_the_subgroup() {
    let f3 = Alphabet::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..80 {
        let gens = random_subgroup(&mut rng, 3);
        let graph = CoreGraph::fold(f3, &gens.iter().map(|g| word(f3, g)).collect::<Vec<_>>()).unwrap();
        let basis: Vec<Raw> = graph.basis().iter().map(|w| from_text(&w.to_string())).collect();
        assert_eq!(basis.len(), graph.rank());
        let from_basis = BouquetOracle::new(&basis);
        let from_gens = BouquetOracle::new(&gens);
        for g in &gens {
            assert!(from_basis.contains(g));
        }
        for b in &basis {
            assert!(from_gens.contains(b));
        }
    }
}

#[test]
fn intersection_agrees_with_oracle_on_probes() {
    let f2 = Alphabet::new(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let probes = all_reduced(2, 7);
    for _ in 0..40 {
        let (h, k) = (random_subgroup(&mut rng, 2), random_subgroup(&mut rng, 2));
        let fold = |gens: &[Raw]| CoreGraph::fold(f2, &gens.iter().map(|g| word(f2, g)).collect::<Vec<_>>()).unwrap();
        let meet = intersect(&fold(&h), &fold(&k)).unwrap();
        let (oh, ok) = (BouquetOracle::new(&h), BouquetOracle::new(&k));
        for p in &probes {
            assert_eq!(meet.contains(&word(f2, p)).unwrap(), oh.contains(p) && ok.contains(p));
        }
    }
}

#[test]
fn malnormal_cyclic_subgroups_are_exactly_the_non_powers() {
    let f2 = Alphabet::new(2).unwrap();
    for t in 1..=8 {
        let words = cyclically_reduced(2, t);
        assert_eq!(words.len(), enumerate_cyclically_reduced(f2, t).count());
        for w in words {
            let g = CoreGraph::fold(f2, &[word(f2, &w)]).unwrap();
            let cert = is_malnormal(&g);
            assert_eq!(cert.malnormal, !is_proper_power(&w), "{}", to_text(&w));
            if !cert.malnormal {
                let oracle = BouquetOracle::new(std::slice::from_ref(&w));
                let c = from_text(&cert.conjugator.unwrap().to_string());
                let e = from_text(&cert.element.unwrap().to_string());
                assert!(!c.is_empty() && !oracle.contains(&c));
                assert!(!e.is_empty() && oracle.contains(&e));
                assert!(oracle.contains(&product(&[&inverse(&c), &e, &c])));
            }
        }
    }
}

#[test]
fn experiment_failures_match_proper_power_census() {
    let config = ExperimentConfig {
        rank: 2,
        m: 1,
        ts: vec![1, 2, 3, 4, 5, 6, 7, 8],
        mode: Mode::Exhaustive { cumulative: false },
        props: vec![Property::MalnormalInF],
        subgroups: Vec::new(),
        budget: 1_000_000,
    };
    let report = run_experiment(&config, Some(2)).unwrap();
    for row in &report.rows {
        let words = cyclically_reduced(2, row.t);
        assert_eq!(row.total, words.len() as u64);
        let powers = words.iter().filter(|w| is_proper_power(w)).count() as u64;
        assert_eq!(row.failures, vec![powers], "t = {}", row.t);
        assert_eq!(row.uncertified, 0);
    }
}

#[test]
fn pieces_agree_with_pairwise_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for k in 1..=6 {
        let p = hnn_presentation(k).unwrap();
        let rels: Vec<Raw> = p.relators().iter().map(|r| from_text(&r.to_string())).collect();
        assert_eq!(check_c16(&p).longest_piece, longest_pieces(&rels), "K = {k}");
    }
    let f2 = Alphabet::new(2).unwrap();
    let mut checked = 0;
    while checked < 150 {
        let count = rng.gen_range(1..=3);
        let rels: Vec<Raw> = (0..count)
            .map(|_| {
                let t = rng.gen_range(2..=9);
                loop {
                    let w = random_reduced(&mut rng, 2, t);
                    if w[0] != -w[t - 1] {
                        break w;
                    }
                }
            })
            .collect();
        let Ok(p) = Presentation::new(f2, rels.iter().map(|r| word(f2, r)).collect()) else {
            continue;
        };
        let report = check_c16(&p);
        let expected = longest_pieces(&rels);
        assert_eq!(report.longest_piece, expected, "{rels:?}");
        let c16 = rels.iter().zip(&expected).all(|(r, &piece)| 6 * piece < r.len());
        assert_eq!(report.c16, c16);
        checked += 1;
    }
}

#[test]
fn readable_runs_in_a_cyclic_subgroup() {
    let f2 = Alphabet::new(2).unwrap();
    let g = CoreGraph::fold(f2, &[Word::parse(f2, "a").unwrap()]).unwrap();
    for t in 1..=7 {
        for w in cyclically_reduced(2, t) {
            let got = longest_readable(&g, &word(f2, &w)).unwrap();
            let run = longest_cyclic_run(&w, 1).max(longest_cyclic_run(&w, -1));
            assert_eq!(got.length, run, "{}", to_text(&w));
        }
    }
}

#[test]
fn iterated_lengths_match_expansion_and_counts() {
    for k in 1..=5usize {
        let sys = build_phi(k as u64).unwrap();
        let images = [phi_image(k, 0), phi_image(k, 1)];
        assert_eq!(from_text(&sys.phi.image(0).to_string()), images[0]);
        let mut w: Raw = vec![1];
        for n in 0..=4u32 {
            let exact = iterate_length(&sys, 0, n);
            assert_eq!(exact.to_string(), w.len().to_string());
            assert_eq!(exact.to_string(), iterated_length(k, n).to_string());
            w = apply(&images, &w);
        }
    }
    assert_eq!(iterated_length(100, 1), 5150);
}
