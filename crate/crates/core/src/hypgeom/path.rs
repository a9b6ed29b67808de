use serde::Serialize;

use crate::error::{Error, Result};

use super::space::MetricSpace;

/// `σ_1 τ_1 σ_2 τ_2 ⋯ σ_n τ_n σ_{n+1}`, each piece a geodesic given by its
/// vertices. A `σ` may be a single vertex.
#[derive(Debug, Clone)]
pub struct PiecewisePath<'a, S: MetricSpace> {
    space: &'a S,
    sigmas: Vec<Vec<S::Point>>,
    taus: Vec<Vec<S::Point>>,
    pub c: usize,
    pub delta: usize,
}

impl<'a, S: MetricSpace> PiecewisePath<'a, S> {
    /// `segments` alternates `σ_1, τ_1, …, σ_{n+1}`.
    pub fn new(space: &'a S, segments: Vec<Vec<S::Point>>, c: usize, delta: usize) -> Result<Self> {
        if segments.len() < 3 || segments.len() % 2 == 0 {
            return Err(Error::InvalidPath(format!(
                "expected 2n + 1 segments with n >= 1, got {}",
                segments.len()
            )));
        }
        for (i, seg) in segments.iter().enumerate() {
            let (first, last) = match (seg.first(), seg.last()) {
                (Some(f), Some(l)) => (f, l),
                _ => return Err(Error::InvalidPath(format!("segment {i} has no vertices"))),
            };
            if let Some(p) = seg.iter().find(|p| !space.contains(p)) {
                return Err(Error::InvalidPath(format!("segment {i}: {p:?} is not a point of the space")));
            }
            if seg.windows(2).any(|e| !space.adjacent(&e[0], &e[1])) {
                return Err(Error::InvalidPath(format!("segment {i} is not an edge path")));
            }
            if space.distance(first, last) + 1 != seg.len() {
                return Err(Error::InvalidPath(format!("segment {i} is not a geodesic")));
            }
            if i > 0 && segments[i - 1].last() != Some(first) {
                return Err(Error::InvalidPath(format!("segment {i} does not start where segment {} ends", i - 1)));
            }
        }
        let space_delta = space.hyperbolicity();
        if delta < space_delta {
            return Err(Error::InvalidParameter(format!(
                "delta = {delta} is below the thinness constant {space_delta} of the space"
            )));
        }
        let (mut sigmas, mut taus) = (Vec::new(), Vec::new());
        for (i, seg) in segments.into_iter().enumerate() {
            if i % 2 == 0 {
                sigmas.push(seg);
            } else {
                taus.push(seg);
            }
        }
        Ok(PiecewisePath {
            space,
            sigmas,
            taus,
            c,
            delta,
        })
    }

    /// Joins consecutive points `p_0, …, p_{2n+1}` by the space's geodesics.
    pub fn from_points(space: &'a S, points: &[S::Point], c: usize, delta: usize) -> Result<Self> {
        if points.len() < 4 || points.len() % 2 == 1 {
            return Err(Error::InvalidPath(format!(
                "expected 2n + 2 points with n >= 1, got {}",
                points.len()
            )));
        }
        let segments = points
            .windows(2)
            .map(|p| space.geodesic(&p[0], &p[1]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, segments, c, delta)
    }

    pub fn space(&self) -> &'a S {
        self.space
    }

    /// Number of `τ` segments.
    pub fn n(&self) -> usize {
        self.taus.len()
    }

    /// `σ_i` for `i` in `1..=n+1`.
    pub fn sigma(&self, i: usize) -> &[S::Point] {
        &self.sigmas[i - 1]
    }

    /// `τ_i` for `i` in `1..=n`.
    pub fn tau(&self, i: usize) -> &[S::Point] {
        &self.taus[i - 1]
    }

    /// All vertices of the concatenated path, junctions counted once.
    pub fn vertices(&self) -> Vec<S::Point> {
        let mut out = vec![self.sigmas[0][0].clone()];
        for i in 0..self.taus.len() {
            out.extend_from_slice(&self.sigmas[i][1..]);
            out.extend_from_slice(&self.taus[i][1..]);
        }
        out.extend_from_slice(&self.sigmas[self.taus.len()][1..]);
        out
    }

    /// `2(6c + 2δ)`.
    pub fn threshold(&self) -> usize {
        2 * (6 * self.c + 2 * self.delta)
    }
}

fn seg_len<P>(seg: &[P]) -> usize {
    seg.len() - 1
}

/// Longest run of consecutive vertices of `a` within `eps` of `b`, in edges.
fn longest_close_run<S: MetricSpace>(space: &S, a: &[S::Point], b: &[S::Point], eps: usize) -> Option<usize> {
    let mut best = None;
    let mut run = 0usize;
    for x in a {
        if space.distance_to_segment(x, b) <= eps {
            run += 1;
            best = best.max(Some(run - 1));
        } else {
            run = 0;
        }
    }
    best
}

/// Largest `L` such that a length-`L` subsegment of each segment lies in the
/// closed `eps`-neighbourhood of the other. Segments that are nowhere
/// `eps`-close report 0.
pub fn fellow_travel_length<S: MetricSpace>(
    space: &S,
    seg1: &[S::Point],
    seg2: &[S::Point],
    eps: usize,
) -> usize {
    match (
        longest_close_run(space, seg1, seg2, eps),
        longest_close_run(space, seg2, seg1, eps),
    ) {
        (Some(a), Some(b)) => a.min(b),
        _ => 0,
    }
}

/// Length of the longest terminal subsegments of `a` and `b` (which may end
/// at different points) that each lie within `eps` of the other.
pub fn terminal_fellow_travel<S: MetricSpace>(space: &S, a: &[S::Point], b: &[S::Point], eps: usize) -> usize {
    let max = seg_len(a).min(seg_len(b));
    (0..=max)
        .rev()
        .find(|&l| {
            let ta = &a[a.len() - 1 - l..];
            let tb = &b[b.len() - 1 - l..];
            ta.iter().all(|x| space.distance_to_segment(x, tb) <= eps)
                && tb.iter().all(|x| space.distance_to_segment(x, ta) <= eps)
        })
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub holds: bool,
    /// Smallest offending `τ` index (1-based).
    pub first_violation: Option<usize>,
}

impl Condition {
    fn from_violations(mut bad: impl Iterator<Item = usize>) -> Self {
        let first_violation = bad.next();
        Condition {
            holds: first_violation.is_none(),
            first_violation,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub c: usize,
    pub delta: usize,
    /// `2(6c + 2δ)`.
    pub threshold: usize,
    pub tau_lengths: Vec<usize>,
    /// `|τ_i| > threshold` for every `i`.
    pub long_taus: Condition,
    /// The same, only for `1 < i < n`.
    pub long_taus_interior: Condition,
    /// Fellow-travel lengths of `(τ_i, τ_{i+1})` at `3δ`.
    pub tau_fellow: Vec<usize>,
    /// `(τ_i, τ_{i+1})` fellow travel less than `c`.
    pub taus_separated: Condition,
    /// Fellow-travel lengths of `(σ_i, τ_i)` and `(σ_{i+1}, τ_i)` at `2δ`.
    pub sigma_fellow: Vec<(usize, usize)>,
    pub sigmas_separated: Condition,
}

impl HypothesisReport {
    pub fn all_hold(&self) -> bool {
        self.long_taus.holds && self.taus_separated.holds && self.sigmas_separated.holds
    }
}

pub fn check_hypotheses<S: MetricSpace>(path: &PiecewisePath<'_, S>) -> HypothesisReport {
    let space = path.space;
    let n = path.n();
    let (c, delta) = (path.c, path.delta);
    let threshold = path.threshold();
    let tau_lengths: Vec<usize> = (1..=n).map(|i| seg_len(path.tau(i))).collect();
    let tau_fellow: Vec<usize> = (1..n)
        .map(|i| fellow_travel_length(space, path.tau(i), path.tau(i + 1), 3 * delta))
        .collect();
    let sigma_fellow: Vec<(usize, usize)> = (1..=n)
        .map(|i| {
            (
                fellow_travel_length(space, path.sigma(i), path.tau(i), 2 * delta),
                fellow_travel_length(space, path.sigma(i + 1), path.tau(i), 2 * delta),
            )
        })
        .collect();
    HypothesisReport {
        c,
        delta,
        threshold,
        long_taus: Condition::from_violations((1..=n).filter(|&i| tau_lengths[i - 1] <= threshold)),
        long_taus_interior: Condition::from_violations(
            (2..n).filter(|&i| tau_lengths[i - 1] <= threshold),
        ),
        taus_separated: Condition::from_violations((1..n).filter(|&i| tau_fellow[i - 1] >= c)),
        sigmas_separated: Condition::from_violations(
            (1..=n).filter(|&i| sigma_fellow[i - 1].0 >= c || sigma_fellow[i - 1].1 >= c),
        ),
        tau_lengths,
        tau_fellow,
        sigma_fellow,
    }
}

/// `|γ_{k+1}| ≥ |γ_k| + |σ_{k+1}| + |τ_{k+1}| − (6c + 2δ)`.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityRow {
    pub k: usize,
    pub gamma_k: usize,
    pub sigma_next: usize,
    pub tau_next: usize,
    pub gamma_next: usize,
    pub margin: i64,
}

/// Terminal subpaths of `γ_k` and `τ_k` fellow travel at `δ` for at least
/// `|τ_k| − 2c`.
#[derive(Debug, Clone, Serialize)]
pub struct TerminalRow {
    pub k: usize,
    pub tau_k: usize,
    pub fellow: usize,
    pub required: i64,
    pub margin: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    /// `|γ_k|` for `k = 1..=n`; `γ_k` joins the start of `τ_1` to the end
    /// of `τ_k`.
    pub gamma_lengths: Vec<usize>,
    pub inequality: Vec<InequalityRow>,
    pub terminal: Vec<TerminalRow>,
    pub violations: usize,
}

impl AuditReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Measures both conclusions along `τ_1 σ_2 τ_2 ⋯`. Refuses paths that fail
/// the hypotheses.
pub fn audit_geodesic_inequality<S: MetricSpace>(path: &PiecewisePath<'_, S>) -> Result<AuditReport> {
    let hyp = check_hypotheses(path);
    if !hyp.all_hold() {
        return Err(Error::HypothesisViolation(describe_failure(&hyp)));
    }
    let space = path.space;
    let n = path.n();
    let (c, delta) = (path.c as i64, path.delta);
    let start = &path.tau(1)[0];
    let gammas = (1..=n)
        .map(|k| space.geodesic(start, path.tau(k).last().expect("nonempty")))
        .collect::<Result<Vec<_>>>()?;
    let gamma_lengths: Vec<usize> = gammas.iter().map(|g| seg_len(g)).collect();
    let inequality: Vec<InequalityRow> = (1..n)
        .map(|k| {
            let sigma_next = seg_len(path.sigma(k + 1));
            let tau_next = seg_len(path.tau(k + 1));
            let bound = (gamma_lengths[k - 1] + sigma_next + tau_next) as i64 - (6 * c + 2 * delta as i64);
            InequalityRow {
                k,
                gamma_k: gamma_lengths[k - 1],
                sigma_next,
                tau_next,
                gamma_next: gamma_lengths[k],
                margin: gamma_lengths[k] as i64 - bound,
            }
        })
        .collect();
    let terminal: Vec<TerminalRow> = (1..=n)
        .map(|k| {
            let tau_k = seg_len(path.tau(k));
            let fellow = terminal_fellow_travel(space, &gammas[k - 1], path.tau(k), delta);
            let required = tau_k as i64 - 2 * c;
            TerminalRow {
                k,
                tau_k,
                fellow,
                required,
                margin: fellow as i64 - required,
            }
        })
        .collect();
    let violations = inequality.iter().filter(|r| r.margin < 0).count()
        + terminal.iter().filter(|r| r.margin < 0).count();
    Ok(AuditReport {
        gamma_lengths,
        inequality,
        terminal,
        violations,
    })
}

fn describe_failure(h: &HypothesisReport) -> String {
    let mut parts = Vec::new();
    if let Some(i) = h.long_taus.first_violation {
        parts.push(format!("|tau_{i}| = {} <= {}", h.tau_lengths[i - 1], h.threshold));
    }
    if let Some(i) = h.taus_separated.first_violation {
        parts.push(format!(
            "tau_{i} and tau_{} fellow travel for {} >= c = {}",
            i + 1,
            h.tau_fellow[i - 1],
            h.c
        ));
    }
    if let Some(i) = h.sigmas_separated.first_violation {
        let (a, b) = h.sigma_fellow[i - 1];
        parts.push(format!("sigmas next to tau_{i} fellow travel for ({a}, {b}), c = {}", h.c));
    }
    parts.join("; ")
}

/// The subpath with the largest ratio of arclength to endpoint distance,
/// given by vertex positions along the whole path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subpath {
    pub start: usize,
    pub end: usize,
    pub arclength: usize,
    pub distance: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiReport {
    pub lambda: f64,
    pub eps: f64,
    pub holds: bool,
    pub violations: usize,
    /// Smallest `ε` for which the path is `(λ, ε)`-quasigeodesic.
    pub min_eps: f64,
    pub worst: Option<Subpath>,
}

/// Checks `t − s ≤ λ d(α(s), α(t)) + ε` for every pair of vertex positions.
pub fn is_quasigeodesic<S: MetricSpace>(path: &PiecewisePath<'_, S>, lambda: f64, eps: f64) -> QuasiReport {
    check_quasigeodesic(path.space, &path.vertices(), lambda, eps)
}

pub fn check_quasigeodesic<S: MetricSpace>(space: &S, vertices: &[S::Point], lambda: f64, eps: f64) -> QuasiReport {
    let mut violations = 0;
    let mut min_eps = 0f64;
    let mut worst: Option<Subpath> = None;
    for s in 0..vertices.len() {
        let dists = space.distances_along(vertices, s);
        for (offset, &d) in dists.iter().enumerate().skip(1) {
            let excess = offset as f64 - lambda * d as f64;
            min_eps = min_eps.max(excess);
            if excess > eps {
                violations += 1;
            }
            // larger arclength / distance, with distance 0 as infinity
            let better = match &worst {
                None => true,
                Some(w) => {
                    let lhs = offset * w.distance;
                    let rhs = w.arclength * d;
                    lhs > rhs || (lhs == rhs && offset > w.arclength)
                }
            };
            if better {
                worst = Some(Subpath {
                    start: s,
                    end: s + offset,
                    arclength: offset,
                    distance: d,
                });
            }
        }
    }
    QuasiReport {
        lambda,
        eps,
        holds: violations == 0,
        violations,
        min_eps,
        worst,
    }
}
