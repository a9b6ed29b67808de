use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::freegroup::{Alphabet, Letter, Word};

const NONE: u32 = u32::MAX;

/// Folded, basepointed, labeled graph of a finitely generated subgroup of
/// `F_n` (its Stallings core graph).
///
/// The graph is stored in canonical form: vertices are numbered in
/// breadth-first order from the basepoint (vertex 0), exploring letters in
/// the order `a, A, b, B, ...`. Two core graphs are therefore equal exactly
/// when they are isomorphic as labeled based graphs, i.e. when they describe
/// the same subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoreGraph {
    alphabet: Alphabet,
    /// `next[v * 2n + letter]`: target of reading `letter` at `v`.
    next: Vec<u32>,
}

impl CoreGraph {
    /// The trivial subgroup: one vertex, no edges.
    pub fn trivial(alphabet: Alphabet) -> Self {
        CoreGraph {
            alphabet,
            next: vec![NONE; alphabet.letter_count()],
        }
    }

    /// Folds the wedge of the generator loops. Identity generators are ignored.
    pub fn fold(alphabet: Alphabet, generators: &[Word]) -> Result<Self> {
        let mut folder = Folder::new(alphabet);
        let base = folder.add_vertex();
        for g in generators {
            alphabet.check(g.alphabet())?;
            let letters = g.letters();
            if letters.is_empty() {
                continue;
            }
            let mut cur = base;
            for (i, &l) in letters.iter().enumerate() {
                let to = if i + 1 == letters.len() {
                    base
                } else {
                    folder.add_vertex()
                };
                folder.add_edge(cur, l, to);
                cur = to;
            }
        }
        Ok(folder.finish(base))
    }

    /// Folds an arbitrary labeled graph and returns the core of the component
    /// containing `basepoint`. Edges are `(from, letter, to)`.
    pub fn from_edges(
        alphabet: Alphabet,
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, Letter, usize)>,
        basepoint: usize,
    ) -> Self {
        let mut folder = Folder::new(alphabet);
        for _ in 0..vertex_count {
            folder.add_vertex();
        }
        for (u, l, v) in edges {
            folder.add_edge(u as u32, l, v as u32);
        }
        folder.finish(basepoint as u32)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.next.len() / self.alphabet.letter_count()
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    /// Number of (positively oriented) edges.
    pub fn edge_count(&self) -> usize {
        let k = self.alphabet.letter_count();
        self.next
            .iter()
            .enumerate()
            .filter(|&(i, &t)| t != NONE && i % k % 2 == 0)
            .count()
    }

    /// First Betti number `|E| - |V| + 1`, the free rank of the subgroup.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.edge_count() == 0
    }

    pub fn target(&self, v: usize, l: Letter) -> Option<usize> {
        let t = self.next[v * self.alphabet.letter_count() + l.code()];
        (t != NONE).then_some(t as usize)
    }

    pub fn degree(&self, v: usize) -> usize {
        let k = self.alphabet.letter_count();
        self.next[v * k..(v + 1) * k].iter().filter(|&&t| t != NONE).count()
    }

    /// Follows `letters` from `start`; `None` if the path leaves the graph.
    pub fn read_from(&self, start: usize, letters: &[Letter]) -> Option<usize> {
        letters.iter().try_fold(start, |v, &l| self.target(v, l))
    }

    /// Whether `w` lies in the subgroup: `w` labels a loop at the basepoint.
    pub fn contains(&self, w: &Word) -> Result<bool> {
        self.alphabet.check(w.alphabet())?;
        Ok(self.read_from(0, w.letters()) == Some(0))
    }

    /// Index in `F_n` if the graph is a full cover (every vertex has every
    /// letter defined), otherwise `None` for infinite index.
    pub fn finite_index(&self) -> Option<usize> {
        self.next.iter().all(|&t| t != NONE).then(|| self.vertex_count())
    }

    /// Positive edges `(from, generator, to)` in canonical order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let k = self.alphabet.letter_count();
        let mut out = Vec::new();
        for v in 0..self.vertex_count() {
            for g in 0..self.alphabet.rank() {
                let t = self.next[v * k + 2 * g];
                if t != NONE {
                    out.push((v, g, t as usize));
                }
            }
        }
        out
    }

    /// Label of the breadth-first spanning-tree path from the basepoint to
    /// every vertex (shortlex-minimal among paths to that vertex).
    pub fn tree_paths(&self) -> Vec<Word> {
        self.spanning_tree().0
    }

    /// Tree path labels plus, per vertex, the tree edge `(parent, letter)`
    /// it was discovered through.
    fn spanning_tree(&self) -> (Vec<Word>, Vec<Option<(usize, Letter)>>) {
        let n = self.vertex_count();
        let mut paths: Vec<Option<Vec<Letter>>> = vec![None; n];
        let mut parent = vec![None; n];
        paths[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for l in self.alphabet.letters() {
                if let Some(t) = self.target(v, l) {
                    if paths[t].is_none() {
                        let mut p = paths[v].clone().unwrap();
                        p.push(l);
                        paths[t] = Some(p);
                        parent[t] = Some((v, l));
                        queue.push_back(t);
                    }
                }
            }
        }
        let words = paths
            .into_iter()
            .map(|p| Word::from_reduced_unchecked(self.alphabet, p.expect("connected")))
            .collect();
        (words, parent)
    }

    /// A free basis read off the non-tree edges of the spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        let (paths, parent) = self.spanning_tree();
        let mut out = Vec::new();
        for (u, g, v) in self.edges() {
            let l = Letter::new(g, false);
            let on_tree = parent[v] == Some((u, l)) || parent[u] == Some((v, l.inverse()));
            if !on_tree {
                let mut letters = paths[u].letters().to_vec();
                letters.push(l);
                let w = Word::from_letters(self.alphabet, letters).expect("in range");
                out.push(w.mul_unchecked(&paths[v].inverse()));
            }
        }
        out
    }

    /// Graphviz rendering: edges labeled by generator, basepoint double-circled.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph core {\n  rankdir=LR;\n");
        for v in 0..self.vertex_count() {
            let shape = if v == 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  {v} [shape={shape}];");
        }
        for (u, g, v) in self.edges() {
            let _ = writeln!(s, "  {u} -> {v} [label=\"{}\"];", Letter::new(g, false));
        }
        s.push_str("}\n");
        s
    }

    pub fn summary(&self) -> GraphSummary {
        GraphSummary {
            rank_of_alphabet: self.alphabet.rank(),
            vertices: self.vertex_count(),
            edges: self
                .edges()
                .into_iter()
                .map(|(u, g, v)| (u, Letter::new(g, false).to_string(), v))
                .collect(),
            basepoint: 0,
            subgroup_rank: self.rank(),
            finite_index: self.finite_index(),
            basis: self.basis(),
        }
    }
}

/// Serializable description of a [`CoreGraph`].
#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub rank_of_alphabet: usize,
    pub vertices: usize,
    pub edges: Vec<(usize, String, usize)>,
    pub basepoint: usize,
    pub subgroup_rank: usize,
    pub finite_index: Option<usize>,
    pub basis: Vec<Word>,
}

/// Incremental folding with union-find over vertices.
struct Folder {
    alphabet: Alphabet,
    adj: Vec<Vec<u32>>,
    parent: Vec<u32>,
    size: Vec<u32>,
    pending: Vec<(u32, u32)>,
}

impl Folder {
    fn new(alphabet: Alphabet) -> Self {
        Folder {
            alphabet,
            adj: Vec::new(),
            parent: Vec::new(),
            size: Vec::new(),
            pending: Vec::new(),
        }
    }

    fn add_vertex(&mut self) -> u32 {
        let id = self.adj.len() as u32;
        self.adj.push(vec![NONE; self.alphabet.letter_count()]);
        self.parent.push(id);
        self.size.push(1);
        id
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let p = self.parent[v as usize];
            self.parent[v as usize] = self.parent[p as usize];
            v = p;
        }
        v
    }

    fn set(&mut self, u: u32, code: usize, v: u32) {
        let cur = self.adj[u as usize][code];
        if cur == NONE {
            self.adj[u as usize][code] = v;
        } else if self.find(cur) != self.find(v) {
            self.pending.push((cur, v));
        }
    }

    fn add_edge(&mut self, u: u32, l: Letter, v: u32) {
        let u = self.find(u);
        let v = self.find(v);
        self.set(u, l.code(), v);
        self.set(v, l.inverse().code(), u);
        self.drain();
    }

    fn drain(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (mut a, mut b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            if self.size[a as usize] < self.size[b as usize] {
                std::mem::swap(&mut a, &mut b);
            }
            self.parent[b as usize] = a;
            self.size[a as usize] += self.size[b as usize];
            let moved = std::mem::take(&mut self.adj[b as usize]);
            for (code, t) in moved.into_iter().enumerate() {
                if t != NONE {
                    self.set(a, code, t);
                }
            }
        }
    }

    /// Prunes hanging trees away from the basepoint and relabels canonically.
    fn finish(mut self, base: u32) -> CoreGraph {
        let k = self.alphabet.letter_count();
        let n = self.adj.len();
        let base = self.find(base) as usize;
        // Resolve every live entry to its representative.
        let mut table = vec![NONE; n * k];
        let mut alive = vec![false; n];
        for v in 0..n {
            if self.parent[v] as usize != v {
                continue;
            }
            alive[v] = true;
            for code in 0..k {
                let t = self.adj[v][code];
                if t != NONE {
                    table[v * k + code] = self.find(t);
                }
            }
        }
        let mut degree: Vec<usize> = (0..n)
            .map(|v| table[v * k..(v + 1) * k].iter().filter(|&&t| t != NONE).count())
            .collect();
        let mut stack: Vec<usize> = (0..n)
            .filter(|&v| alive[v] && v != base && degree[v] <= 1)
            .collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for code in 0..k {
                let t = table[v * k + code];
                if t == NONE {
                    continue;
                }
                table[v * k + code] = NONE;
                let t = t as usize;
                table[t * k + (code ^ 1)] = NONE;
                degree[t] -= 1;
                if t != base && alive[t] && degree[t] <= 1 {
                    stack.push(t);
                }
            }
        }
        // Breadth-first relabeling from the basepoint.
        let mut label = vec![NONE; n];
        let mut order = vec![base];
        label[base] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for code in 0..k {
                let t = table[v * k + code];
                if t != NONE && label[t as usize] == NONE {
                    label[t as usize] = order.len() as u32;
                    order.push(t as usize);
                }
            }
        }
        let mut next = vec![NONE; order.len() * k];
        for (new, &old) in order.iter().enumerate() {
            for code in 0..k {
                let t = table[old * k + code];
                if t != NONE {
                    next[new * k + code] = label[t as usize];
                }
            }
        }
        CoreGraph {
            alphabet: self.alphabet,
            next,
        }
    }
}
