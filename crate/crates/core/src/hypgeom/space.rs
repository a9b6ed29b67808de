use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, Word};

/// A geodesic metric graph; points are vertices and paths are vertex lists
/// with consecutive entries adjacent.
pub trait MetricSpace {
    type Point: Clone + PartialEq + fmt::Debug;

    fn contains(&self, p: &Self::Point) -> bool;

    fn distance(&self, u: &Self::Point, v: &Self::Point) -> usize;

    /// Vertices of the chosen geodesic from `u` to `v`, both ends included.
    fn geodesic(&self, u: &Self::Point, v: &Self::Point) -> Result<Vec<Self::Point>>;

    /// Smallest `δ` for which every geodesic triangle is `δ`-thin.
    fn hyperbolicity(&self) -> usize;

    fn adjacent(&self, u: &Self::Point, v: &Self::Point) -> bool {
        self.distance(u, v) == 1
    }

    fn distance_to_segment(&self, x: &Self::Point, seg: &[Self::Point]) -> usize {
        seg.iter().map(|p| self.distance(x, p)).min().unwrap_or(usize::MAX)
    }

    /// `d(path[s], path[t])` for `t = s..path.len()`.
    fn distances_along(&self, path: &[Self::Point], s: usize) -> Vec<usize> {
        path[s..].iter().map(|p| self.distance(&path[s], p)).collect()
    }
}

/// The Cayley tree of a free group; vertices are reduced words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSpace {
    alphabet: Alphabet,
}

impl TreeSpace {
    pub fn new(alphabet: Alphabet) -> Self {
        TreeSpace { alphabet }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn check(&self, p: &Word) -> Result<()> {
        self.alphabet.check(p.alphabet())
    }
}

fn common_prefix(u: &Word, v: &Word) -> usize {
    u.letters().iter().zip(v.letters()).take_while(|(a, b)| a == b).count()
}

impl MetricSpace for TreeSpace {
    type Point = Word;

    fn contains(&self, p: &Word) -> bool {
        p.alphabet() == self.alphabet
    }

    fn distance(&self, u: &Word, v: &Word) -> usize {
        u.len() + v.len() - 2 * common_prefix(u, v)
    }

    fn geodesic(&self, u: &Word, v: &Word) -> Result<Vec<Word>> {
        self.check(u)?;
        self.check(v)?;
        let x = u.inverse().multiply(v)?;
        let mut out = Vec::with_capacity(x.len() + 1);
        out.push(u.clone());
        let mut cur = u.clone();
        for &l in x.letters() {
            cur = cur.mul_unchecked(&Word::from_reduced_unchecked(self.alphabet, vec![l]));
            out.push(cur.clone());
        }
        Ok(out)
    }

    fn hyperbolicity(&self) -> usize {
        0
    }

    /// In a tree the distance to a geodesic `[p, q]` is the Gromov product
    /// `(p | q)_x`.
    fn distance_to_segment(&self, x: &Word, seg: &[Word]) -> usize {
        match (seg.first(), seg.last()) {
            (Some(p), Some(q)) => {
                (self.distance(x, p) + self.distance(x, q) - self.distance(p, q)) / 2
            }
            _ => usize::MAX,
        }
    }

    fn distances_along(&self, path: &[Word], s: usize) -> Vec<usize> {
        // maintain path[s]^-1 path[t] as a stack of letters
        let mut stack = Vec::new();
        let mut out = Vec::with_capacity(path.len() - s);
        out.push(0);
        for t in s + 1..path.len() {
            let (prev, next) = (&path[t - 1], &path[t]);
            let step = if next.len() > prev.len() {
                next.last().expect("nonempty")
            } else {
                prev.last().expect("nonempty").inverse()
            };
            if stack.last() == Some(&step.inverse()) {
                stack.pop();
            } else {
                stack.push(step);
            }
            out.push(stack.len());
        }
        out
    }
}

/// A connected undirected finite graph with all-pairs distances.
#[derive(Debug, Clone)]
pub struct FiniteGraphSpace {
    neighbours: Vec<Vec<usize>>,
    dist: Vec<u32>,
    delta: OnceLock<DeltaReport>,
}

/// A geodesic triangle attaining the thinness constant: `p` on the side
/// towards `y` and `q` on the side towards `z`, both at distance `s` from the
/// corner, lie at distance `delta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaWitness {
    pub corner: usize,
    pub side_y: Vec<usize>,
    pub side_z: Vec<usize>,
    pub s: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub delta: usize,
    pub witness: Option<DeltaWitness>,
}

impl FiniteGraphSpace {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidParameter("graph has no vertices".into()));
        }
        let mut neighbours = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) outside 0..{vertex_count}"
                )));
            }
            if u != v {
                neighbours[u].push(v);
                neighbours[v].push(u);
            }
        }
        for ns in &mut neighbours {
            ns.sort_unstable();
            ns.dedup();
        }
        let n = vertex_count;
        let mut dist = vec![u32::MAX; n * n];
        let mut queue = VecDeque::new();
        for src in 0..n {
            dist[src * n + src] = 0;
            queue.push_back(src);
            while let Some(u) = queue.pop_front() {
                let du = dist[src * n + u];
                for &v in &neighbours[u] {
                    if dist[src * n + v] == u32::MAX {
                        dist[src * n + v] = du + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        if dist.contains(&u32::MAX) {
            return Err(Error::InvalidParameter("graph is not connected".into()));
        }
        Ok(FiniteGraphSpace {
            neighbours,
            dist,
            delta: OnceLock::new(),
        })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbours.len()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    fn d(&self, u: usize, v: usize) -> usize {
        self.dist[u * self.vertex_count() + v] as usize
    }

    fn check(&self, p: usize) -> Result<()> {
        if p < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: p,
                rank: self.vertex_count(),
            })
        }
    }

    /// Every geodesic from `u` to `v`, in lexicographic order of vertex lists.
    pub fn all_geodesics(&self, u: usize, v: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![u];
        self.extend_geodesics(v, &mut stack, &mut out);
        out
    }

    fn extend_geodesics(&self, v: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let cur = *stack.last().expect("nonempty");
        if cur == v {
            out.push(stack.clone());
            return;
        }
        let left = self.d(cur, v);
        for &w in &self.neighbours[cur] {
            if self.d(w, v) + 1 == left {
                stack.push(w);
                self.extend_geodesics(v, stack, out);
                stack.pop();
            }
        }
    }

    /// Exhaustive thinness constant. A pair of points in one fibre of the
    /// tripod map sits on the two sides leaving a common corner `x`, at the
    /// same distance `s <= (y | z)_x` from it; the third side plays no role,
    /// so it suffices to range over corners and pairs of geodesics leaving
    /// them.
    pub fn delta_report(&self) -> &DeltaReport {
        self.delta.get_or_init(|| {
            let n = self.vertex_count();
            let geods: Vec<Vec<Vec<usize>>> = (0..n * n)
                .map(|i| self.all_geodesics(i / n, i % n))
                .collect();
            let mut best = DeltaReport {
                delta: 0,
                witness: None,
            };
            for x in 0..n {
                for y in 0..n {
                    for z in y..n {
                        let gromov = (self.d(x, y) + self.d(x, z) - self.d(y, z)) / 2;
                        for gy in &geods[x * n + y] {
                            for gz in &geods[x * n + z] {
                                for s in 0..=gromov {
                                    let d = self.d(gy[s], gz[s]);
                                    if d > best.delta || best.witness.is_none() {
                                        best = DeltaReport {
                                            delta: d,
                                            witness: Some(DeltaWitness {
                                                corner: x,
                                                side_y: gy.clone(),
                                                side_z: gz.clone(),
                                                s,
                                            }),
                                        };
                                    }
                                }
                            }
                        }
                    }
                }
            }
            best
        })
    }
}

impl MetricSpace for FiniteGraphSpace {
    type Point = usize;

    fn contains(&self, p: &usize) -> bool {
        *p < self.vertex_count()
    }

    fn distance(&self, u: &usize, v: &usize) -> usize {
        self.d(*u, *v)
    }

    /// Steps to the smallest-index neighbour that is one closer to `v`.
    fn geodesic(&self, u: &usize, v: &usize) -> Result<Vec<usize>> {
        self.check(*u)?;
        self.check(*v)?;
        let mut out = vec![*u];
        let mut cur = *u;
        while cur != *v {
            let left = self.d(cur, *v);
            cur = *self.neighbours[cur]
                .iter()
                .find(|&&w| self.d(w, *v) + 1 == left)
                .expect("connected");
            out.push(cur);
        }
        Ok(out)
    }

    fn hyperbolicity(&self) -> usize {
        self.delta_report().delta
    }
}
