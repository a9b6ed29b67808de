//! Brute-force oracles that share nothing with the library but the word
//! text format. Letters are nonzero `i32`: `g + 1` for generator `g` and
//! `-(g + 1)` for its inverse.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::Rng;

pub type Raw = Vec<i32>;

pub fn from_text(s: &str) -> Raw {
    s.chars()
        .filter(|&c| c != '1')
        .map(|c| {
            if c.is_ascii_lowercase() {
                c as i32 - 'a' as i32 + 1
            } else {
                -(c as i32 - 'A' as i32 + 1)
            }
        })
        .collect()
}

pub fn to_text(w: &[i32]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&l| {
            if l > 0 {
                (b'a' + (l - 1) as u8) as char
            } else {
                (b'A' + (-l - 1) as u8) as char
            }
        })
        .collect()
}

pub fn reduce(w: &[i32]) -> Raw {
    let mut out: Raw = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn inverse(w: &[i32]) -> Raw {
    w.iter().rev().map(|&l| -l).collect()
}

pub fn product(parts: &[&[i32]]) -> Raw {
    reduce(&parts.concat())
}

pub fn random_reduced<R: Rng>(rng: &mut R, rank: usize, len: usize) -> Raw {
    let mut w = Raw::new();
    while w.len() < len {
        let g = rng.gen_range(1..=rank as i32);
        let l = if rng.gen_bool(0.5) { g } else { -g };
        if w.last() != Some(&-l) {
            w.push(l);
        }
    }
    w
}

/// Reduced words of length `0..=max_len` over `rank` generators.
pub fn all_reduced(rank: usize, max_len: usize) -> Vec<Raw> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|g| [g, -g]).collect();
    let mut layer = vec![Raw::new()];
    let mut out = layer.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Reduced products of at most `k` generators or their inverses.
pub fn ball(gens: &[Raw], k: usize) -> HashSet<Raw> {
    let mut steps: Vec<Raw> = gens.to_vec();
    steps.extend(gens.iter().map(|g| inverse(g)));
    let mut seen: HashSet<Raw> = HashSet::from([Raw::new()]);
    let mut frontier = vec![Raw::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &frontier {
            for s in &steps {
                let v = product(&[w, s]);
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Exact membership in `<gens>` without folding: the bouquet of generator
/// loops, with the pairs of vertices joined by a path whose label cancels to
/// the empty word saturated first (a Dyck closure), then a product of
/// relations along the letters of `w`.
pub struct BouquetOracle {
    n: usize,
    /// `edges[v]` lists `(letter, target)`, inverse edges included.
    edges: Vec<Vec<(i32, usize)>>,
    null: Vec<Vec<bool>>,
}

impl BouquetOracle {
    pub fn new(gens: &[Raw]) -> Self {
        let mut edges: Vec<Vec<(i32, usize)>> = vec![Vec::new()];
        for g in gens.iter().filter(|g| !g.is_empty()) {
            let mut at = 0;
            for (i, &l) in g.iter().enumerate() {
                let to = if i + 1 == g.len() {
                    0
                } else {
                    edges.push(Vec::new());
                    edges.len() - 1
                };
                edges[at].push((l, to));
                edges[to].push((-l, at));
                at = to;
            }
        }
        let n = edges.len();
        let mut null = vec![vec![false; n]; n];
        for (v, row) in null.iter_mut().enumerate() {
            row[v] = true;
        }
        loop {
            let mut changed = false;
            // u -l-> x ~ y -(-l)-> v gives u ~ v
            for u in 0..n {
                for &(l, x) in &edges[u] {
                    for y in 0..n {
                        if !null[x][y] {
                            continue;
                        }
                        for &(m, v) in &edges[y] {
                            if m == -l && !null[u][v] {
                                null[u][v] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
            for u in 0..n {
                for x in 0..n {
                    if !null[u][x] {
                        continue;
                    }
                    for v in 0..n {
                        if null[x][v] && !null[u][v] {
                            null[u][v] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        BouquetOracle { n, edges, null }
    }

    pub fn contains(&self, w: &[i32]) -> bool {
        let w = reduce(w);
        let mut here: Vec<bool> = self.null[0].clone();
        for &l in &w {
            let mut next = vec![false; self.n];
            for u in (0..self.n).filter(|&u| here[u]) {
                for &(m, x) in &self.edges[u] {
                    if m == l {
                        for v in 0..self.n {
                            next[v] |= self.null[x][v];
                        }
                    }
                }
            }
            here = next;
        }
        here[0]
    }
}

/// `w` is `u^k` for some `k >= 2`, found by scanning the divisors of `|w|`.
pub fn is_proper_power(w: &[i32]) -> bool {
    let t = w.len();
    (1..t).filter(|d| t % d == 0).any(|d| (d..t).all(|i| w[i] == w[i - d]))
}

/// Cyclically reduced words of length exactly `t`, filtered from all reduced
/// words.
pub fn cyclically_reduced(rank: usize, t: usize) -> Vec<Raw> {
    all_reduced(rank, t)
        .into_iter()
        .filter(|w| w.len() == t && (t < 2 || w[0] != -w[t - 1]))
        .collect()
}

pub fn rotations(w: &[i32]) -> Vec<Raw> {
    (0..w.len()).map(|k| [&w[k..], &w[..k]].concat()).collect()
}

/// Longest piece of each relator: the longest common prefix of two distinct
/// words among all rotations of the relators and their inverses, by direct
/// pairwise comparison.
pub fn longest_pieces(relators: &[Raw]) -> Vec<usize> {
    let mut sym: BTreeSet<(Raw, usize)> = BTreeSet::new();
    for (i, r) in relators.iter().enumerate() {
        for s in rotations(r).into_iter().chain(rotations(&inverse(r))) {
            sym.insert((s, i));
        }
    }
    let sym: Vec<(Raw, usize)> = sym.into_iter().collect();
    let mut best = vec![0; relators.len()];
    for (x, i) in &sym {
        for (y, _) in &sym {
            if x != y {
                let lcp = x.iter().zip(y).take_while(|(p, q)| p == q).count();
                best[*i] = best[*i].max(lcp);
            }
        }
    }
    best
}

/// Image of `w` under the endomorphism sending generator `g` to `images[g]`.
pub fn apply(images: &[Raw], w: &[i32]) -> Raw {
    let mut out = Raw::new();
    for &l in w {
        let img = &images[(l.unsigned_abs() - 1) as usize];
        if l > 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(inverse(img));
        }
    }
    reduce(&out)
}

/// Every rotation of every relator and of its inverse.
pub fn symmetrized(relators: &[Raw]) -> Vec<Raw> {
    relators
        .iter()
        .flat_map(|r| rotations(r).into_iter().chain(rotations(&inverse(r))))
        .collect()
}

/// Some subword of `w` longer than half of a symmetrized relator is a prefix
/// of it.
pub fn has_long_relator_subword(symmetrized: &[Raw], w: &[i32]) -> bool {
    symmetrized.iter().any(|s| {
        (0..w.len()).any(|start| {
            let common = w[start..].iter().zip(s).take_while(|(p, q)| p == q).count();
            2 * common > s.len()
        })
    })
}

/// Longest cyclic run of a single letter, the readable part of a word in the
/// core graph of `<a>` (or of any one generator).
pub fn longest_cyclic_run(w: &[i32], letter: i32) -> usize {
    if w.iter().all(|&l| l == letter) {
        return w.len();
    }
    let doubled = [w, w].concat();
    let mut best = 0;
    let mut run = 0;
    for &l in &doubled {
        run = if l == letter { run + 1 } else { 0 };
        best = best.max(run);
    }
    best
}

/// `x ↦ x y x y² ⋯ x y^K` with `(x, y) = (a, b)` or `(b, a)`.
pub fn phi_image(k: usize, generator: usize) -> Raw {
    let (x, y) = if generator == 0 { (1, 2) } else { (2, 1) };
    (1..=k).flat_map(|j| std::iter::once(x).chain(std::iter::repeat_n(y, j))).collect()
}

/// `|φⁿ(a)|` from letter counts: a positive word never cancels, so each
/// letter contributes the length of its image.
pub fn iterated_length(k: usize, n: u32) -> u128 {
    let per = |g: usize| {
        let img = phi_image(k, g);
        let a = img.iter().filter(|&&l| l == 1).count() as u128;
        (a, img.len() as u128 - a)
    };
    let ((aa, ba), (ab, bb)) = (per(0), per(1));
    let (mut na, mut nb) = (1u128, 0u128);
    for _ in 0..n {
        (na, nb) = (na * aa + nb * ab, na * ba + nb * bb);
    }
    na + nb
}
