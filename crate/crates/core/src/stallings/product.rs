use serde::Serialize;

use crate::error::Result;
use crate::freegroup::{Letter, Word};

use super::graph::CoreGraph;

/// A cycle-carrying connected component of the fiber product `H ×_F K`.
///
/// Loops at `vertex = (h, k)` spell `u_h^-1 H u_h ∩ u_k^-1 K u_k`, where
/// `u_h`, `u_k` are spanning-tree paths. Conjugating back gives the
/// intersection `H ∩ f K f^-1` with `f = u_h u_k^-1`.
#[derive(Debug, Clone, Serialize)]
pub struct ProductComponent {
    pub vertex: (usize, usize),
    /// `f` with `element ∈ H` and `f^-1 · element · f ∈ K`.
    pub conjugator: Word,
    /// A nontrivial element of `H ∩ f K f^-1`.
    pub element: Word,
    /// Free basis of `H ∩ f K f^-1`.
    pub intersection_basis: Vec<Word>,
    /// Whether the component contains the pair of basepoints.
    pub contains_basepoints: bool,
    #[serde(skip)]
    pub loops: CoreGraph,
}

impl ProductComponent {
    pub fn intersection(&self) -> CoreGraph {
        CoreGraph::fold(self.loops.alphabet(), &self.intersection_basis).expect("same alphabet")
    }
}

struct Product<'a> {
    h: &'a CoreGraph,
    k: &'a CoreGraph,
    kn: usize,
}

impl<'a> Product<'a> {
    fn new(h: &'a CoreGraph, k: &'a CoreGraph) -> Result<Self> {
        h.alphabet().check(k.alphabet())?;
        Ok(Product {
            h,
            k,
            kn: k.vertex_count(),
        })
    }

    fn size(&self) -> usize {
        self.h.vertex_count() * self.kn
    }

    fn split(&self, p: usize) -> (usize, usize) {
        (p / self.kn, p % self.kn)
    }

    fn target(&self, p: usize, l: Letter) -> Option<usize> {
        let (a, b) = self.split(p);
        let ta = self.h.target(a, l)?;
        let tb = self.k.target(b, l)?;
        Some(ta * self.kn + tb)
    }

    /// Connected components as lists of product vertices, each in BFS order.
    fn components(&self, only_from: Option<usize>) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let starts: Box<dyn Iterator<Item = usize>> = match only_from {
            Some(s) => Box::new(std::iter::once(s)),
            None => Box::new(0..n),
        };
        for s in starts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head];
                head += 1;
                for l in self.h.alphabet().letters() {
                    if let Some(t) = self.target(v, l) {
                        if !seen[t] {
                            seen[t] = true;
                            comp.push(t);
                        }
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    fn positive_edges(&self, comp: &[usize]) -> Vec<(usize, Letter, usize)> {
        let mut edges = Vec::new();
        for &v in comp {
            for g in 0..self.h.alphabet().rank() {
                let l = Letter::new(g, false);
                if let Some(t) = self.target(v, l) {
                    edges.push((v, l, t));
                }
            }
        }
        edges
    }
}

fn shortlex_key(w: &Word) -> (usize, Vec<Letter>) {
    (w.len(), w.letters().to_vec())
}

fn nontrivial_components(h: &CoreGraph, k: &CoreGraph, only_base: bool) -> Result<Vec<ProductComponent>> {
    let prod = Product::new(h, k)?;
    let alphabet = h.alphabet();
    let hp = h.tree_paths();
    let kp = k.tree_paths();
    let mut out = Vec::new();
    for comp in prod.components(only_base.then_some(0)) {
        let edges = prod.positive_edges(&comp);
        if edges.len() < comp.len() {
            continue; // tree component: trivial intersection
        }
        // Pick the vertex whose conjugator is shortlex-least.
        let (vertex, conjugator) = comp
            .iter()
            .map(|&p| {
                let (a, b) = prod.split(p);
                (p, hp[a].mul_unchecked(&kp[b].inverse()))
            })
            .min_by(|x, y| shortlex_key(&x.1).cmp(&shortlex_key(&y.1)).then(x.0.cmp(&y.0)))
            .expect("nonempty component");
        let index: std::collections::HashMap<usize, usize> =
            comp.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let local_edges: Vec<(usize, Letter, usize)> =
            edges.iter().map(|&(u, l, v)| (index[&u], l, index[&v])).collect();
        let loops = CoreGraph::from_edges(alphabet, comp.len(), local_edges, index[&vertex]);
        let (a, _) = prod.split(vertex);
        let uh = &hp[a];
        let conj_back = |w: &Word| uh.mul_unchecked(w).mul_unchecked(&uh.inverse());
        let loop_basis = loops.basis();
        debug_assert!(!loop_basis.is_empty());
        let intersection_basis: Vec<Word> = loop_basis.iter().map(conj_back).collect();
        let element = intersection_basis[0].clone();
        out.push(ProductComponent {
            vertex: prod.split(vertex),
            conjugator,
            element,
            intersection_basis,
            contains_basepoints: comp.contains(&0),
            loops,
        });
    }
    Ok(out)
}

/// All components of `H ×_F K` that carry a cycle, one per conjugacy class
/// of nontrivial intersections `H ∩ f K f^-1`.
pub fn product_components(h: &CoreGraph, k: &CoreGraph) -> Result<Vec<ProductComponent>> {
    nontrivial_components(h, k, false)
}

/// Core graph of `H ∩ K`: the based component of the fiber product.
pub fn intersect(h: &CoreGraph, k: &CoreGraph) -> Result<CoreGraph> {
    let prod = Product::new(h, k)?;
    let comp = prod.components(Some(0)).remove(0);
    let index: std::collections::HashMap<usize, usize> =
        comp.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let edges: Vec<(usize, Letter, usize)> = prod
        .positive_edges(&comp)
        .into_iter()
        .map(|(u, l, v)| (index[&u], l, index[&v]))
        .collect();
    Ok(CoreGraph::from_edges(h.alphabet(), comp.len(), edges, 0))
}

/// Outcome of a malnormality test.
///
/// When `malnormal` is false the witness satisfies `conjugator ∉ H`,
/// `element ∈ H`, `conjugator^-1 · element · conjugator ∈ H` and
/// `element ≠ 1`.
#[derive(Debug, Clone, Serialize)]
pub struct MalnormalityCertificate {
    pub malnormal: bool,
    pub conjugator: Option<Word>,
    pub element: Option<Word>,
}

impl MalnormalityCertificate {
    /// Re-checks the witness against `h` using only membership.
    pub fn verify(&self, h: &CoreGraph) -> bool {
        match (self.malnormal, &self.conjugator, &self.element) {
            (true, None, None) => true,
            (false, Some(g), Some(e)) => {
                !e.is_empty()
                    && h.contains(e).unwrap_or(false)
                    && !h.contains(g).unwrap_or(true)
                    && e.conjugate_by(g).map(|c| h.contains(&c).unwrap_or(false)).unwrap_or(false)
            }
            _ => false,
        }
    }
}

/// `H` is malnormal iff the only cycle-carrying component of `H ×_F H` is the
/// diagonal one.
pub fn is_malnormal(h: &CoreGraph) -> MalnormalityCertificate {
    let comps = nontrivial_components(h, h, false).expect("same alphabet");
    let witness = comps
        .into_iter()
        .filter(|c| !c.contains_basepoints)
        .min_by(|x, y| shortlex_key(&x.conjugator).cmp(&shortlex_key(&y.conjugator)));
    let cert = match witness {
        None => MalnormalityCertificate {
            malnormal: true,
            conjugator: None,
            element: None,
        },
        Some(c) => MalnormalityCertificate {
            malnormal: false,
            conjugator: Some(c.conjugator),
            element: Some(c.element),
        },
    };
    debug_assert!(cert.verify(h));
    cert
}

/// Failure witness for [`conjugates_avoid`]: `element ∈ M` and
/// `conjugator^-1 · element · conjugator ∈ H_index`.
#[derive(Debug, Clone, Serialize)]
pub struct AvoidWitness {
    pub index: usize,
    pub conjugator: Word,
    pub element: Word,
}

impl AvoidWitness {
    pub fn verify(&self, m: &CoreGraph, hs: &[CoreGraph]) -> bool {
        let Some(h) = hs.get(self.index) else {
            return false;
        };
        !self.element.is_empty()
            && m.contains(&self.element).unwrap_or(false)
            && self
                .element
                .conjugate_by(&self.conjugator)
                .map(|c| h.contains(&c).unwrap_or(false))
                .unwrap_or(false)
    }
}

/// Checks `M ∩ f H_i f^-1 = 1` for every `i` and every `f ∈ F_n`.
/// Returns the first failing `i` with its shortlex-least conjugator.
pub fn conjugates_avoid(m: &CoreGraph, hs: &[CoreGraph]) -> Result<Option<AvoidWitness>> {
    for (index, h) in hs.iter().enumerate() {
        let comps = nontrivial_components(m, h, false)?;
        if let Some(c) = comps
            .into_iter()
            .min_by(|x, y| shortlex_key(&x.conjugator).cmp(&shortlex_key(&y.conjugator)))
        {
            return Ok(Some(AvoidWitness {
                index,
                conjugator: c.conjugator,
                element: c.element,
            }));
        }
    }
    Ok(None)
}
