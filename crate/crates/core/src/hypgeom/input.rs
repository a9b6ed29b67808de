use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, Word};

use super::path::{
    audit_geodesic_inequality, check_hypotheses, is_quasigeodesic, AuditReport, HypothesisReport, PiecewisePath,
    QuasiReport,
};
use super::space::{FiniteGraphSpace, MetricSpace, TreeSpace};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceSpec {
    Tree { rank: usize },
    Graph { vertices: usize, edges: Vec<(usize, usize)> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Vertex(usize),
    Word(String),
}

/// A path given by the endpoints `p_0, …, p_{2n+1}` of its segments: words
/// for a tree, vertex ids for a graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathSpec {
    pub space: SpaceSpec,
    pub points: Vec<PointSpec>,
    pub c: usize,
    #[serde(default)]
    pub delta: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathAnalysis {
    pub space_delta: usize,
    pub vertices: usize,
    pub hypotheses: HypothesisReport,
    /// Absent when the hypotheses fail.
    pub audit: Option<AuditReport>,
    pub quasigeodesic: QuasiReport,
}

impl PathSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            text: text.chars().take(80).collect(),
            reason: e.to_string(),
        })
    }
}

fn run<S: MetricSpace>(space: &S, points: &[S::Point], spec: &PathSpec, lambda: f64, eps: f64) -> Result<PathAnalysis> {
    let path = PiecewisePath::from_points(space, points, spec.c, spec.delta)?;
    let hypotheses = check_hypotheses(&path);
    let audit = if hypotheses.all_hold() {
        Some(audit_geodesic_inequality(&path)?)
    } else {
        None
    };
    Ok(PathAnalysis {
        space_delta: space.hyperbolicity(),
        vertices: path.vertices().len(),
        hypotheses,
        audit,
        quasigeodesic: is_quasigeodesic(&path, lambda, eps),
    })
}

/// Builds the space and path described by `spec`, then runs the hypothesis
/// check, the audit (when the hypotheses hold) and the `(λ, ε)` check.
pub fn analyze(spec: &PathSpec, lambda: f64, eps: f64) -> Result<PathAnalysis> {
    match &spec.space {
        SpaceSpec::Tree { rank } => {
            let alphabet = Alphabet::new(*rank)?;
            let points = spec
                .points
                .iter()
                .map(|p| match p {
                    PointSpec::Word(s) => Word::parse(alphabet, s),
                    PointSpec::Vertex(v) => Word::parse(alphabet, &v.to_string()),
                })
                .collect::<Result<Vec<_>>>()?;
            run(&TreeSpace::new(alphabet), &points, spec, lambda, eps)
        }
        SpaceSpec::Graph { vertices, edges } => {
            let space = FiniteGraphSpace::new(*vertices, edges)?;
            let points = spec
                .points
                .iter()
                .map(|p| match p {
                    PointSpec::Vertex(v) => Ok(*v),
                    PointSpec::Word(s) => Err(Error::InvalidPath(format!("graph points are vertex ids, got {s:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            run(&space, &points, spec, lambda, eps)
        }
    }
}
