//! Foam graphs: a dual graph with `d⁰_λ` extra outgoing tails at chosen vertices for each
//! Frobenius eigenvalue `λ`, and the per-eigenvalue embeddings into graded pieces.

#![forbid(unsafe_code)]

use std::collections::BTreeSet;

use graph_core::{append_tails, saturate_valence, DirectedGraph, EdgeId, TailConvention, VertexId};
use operator_algebra::{embed_generators, CohomologyEmbedding, Generator, OperatorError};
use schottky::DualGraphData;
use serde::{Deserialize, Serialize};
use num_traits::Zero;
use shift_dynamics::FiltrationSpace;
use spectral_zeta::{format_complex, parse_complex, verify_local_factor_with_traces, EulerFactorSpec, EulerMode, FoamLambda, LocalFactorReport, PmTraces, ZetaError, C};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FoamError {
    #[error("vertex {vertex} does not exist (graph has {count})")]
    InvalidVertex { vertex: VertexId, count: usize },
    #[error("eigenvalue {index} lists {got} loops for d_gamma = {want}")]
    LoopCount { index: usize, got: usize, want: usize },
    #[error("Σ d_gamma = {total} exceeds the Betti number {betti}")]
    TooManyLoops { total: usize, betti: usize },
    #[error("loop {0:?} is not an admissible closed walk")]
    BadLoop(Vec<EdgeId>),
    #[error("loop word {0:?} is used by more than one eigenvalue")]
    SharedWord(Vec<EdgeId>),
    #[error("loops have different lengths {0:?}")]
    UnequalLengths(Vec<usize>),
    #[error("tail depth {depth} is too short for level {level}")]
    ShortTail { depth: usize, level: usize },
    #[error("dim(Gr ∩ 𝒱) for eigenvalue {index} is {got:?}, expected {want}")]
    Dimension { index: usize, got: Vec<usize>, want: usize },
    #[error("invalid FoamSpec document: {0}")]
    Document(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaData {
    /// `q^α = λ`.
    pub alpha: C,
    pub d_gamma: usize,
    pub d_zero: usize,
    /// `x_λ`; vertex 0 when absent.
    pub vertex: Option<VertexId>,
    pub loops: Vec<Vec<EdgeId>>,
}

impl LambdaData {
    pub fn d(&self) -> usize {
        self.d_gamma + self.d_zero
    }
}

#[derive(Debug, Clone)]
pub struct FoamSpec {
    pub graph: DirectedGraph,
    pub lambdas: Vec<LambdaData>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LambdaDoc {
    pub alpha: String,
    pub d_gamma: usize,
    pub d_zero: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<VertexId>,
    #[serde(default)]
    pub loops: Vec<Vec<EdgeId>>,
}

impl LambdaData {
    pub fn from_doc(d: &LambdaDoc) -> Result<Self, FoamError> {
        let alpha = parse_complex(&d.alpha).map_err(|e| FoamError::Document(e.to_string()))?;
        Ok(LambdaData { alpha, d_gamma: d.d_gamma, d_zero: d.d_zero, vertex: d.vertex, loops: d.loops.clone() })
    }

    pub fn to_doc(&self) -> LambdaDoc {
        LambdaDoc { alpha: format_complex(self.alpha), d_gamma: self.d_gamma, d_zero: self.d_zero, vertex: self.vertex, loops: self.loops.clone() }
    }
}

/// Reads a JSON array of eigenvalue entries.
pub fn parse_lambdas(json: &str) -> Result<Vec<LambdaData>, FoamError> {
    let docs: Vec<LambdaDoc> = serde_json::from_str(json).map_err(|e| FoamError::Document(e.to_string()))?;
    docs.iter().map(LambdaData::from_doc).collect()
}

impl FoamSpec {
    pub fn new(graph: DirectedGraph, lambdas: Vec<LambdaData>) -> Result<Self, FoamError> {
        let spec = FoamSpec { graph, lambdas };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_dual(d: &DualGraphData, lambdas: Vec<LambdaData>) -> Result<Self, FoamError> {
        Self::new(d.graph.clone(), lambdas)
    }

    pub fn validate(&self) -> Result<(), FoamError> {
        let g = &self.graph;
        let mut seen = BTreeSet::new();
        for (i, l) in self.lambdas.iter().enumerate() {
            let x = l.vertex.unwrap_or(0);
            if x >= g.vertex_count() {
                return Err(FoamError::InvalidVertex { vertex: x, count: g.vertex_count() });
            }
            if l.loops.len() != l.d_gamma {
                return Err(FoamError::LoopCount { index: i, got: l.loops.len(), want: l.d_gamma });
            }
            for w in &l.loops {
                let closed = !w.is_empty() && w.iter().all(|&e| e < g.edge_count()) && g.rng(w[w.len() - 1]) == g.src(w[0]);
                if !closed || !g.is_admissible_word(&[w.as_slice(), &w[..1]].concat(), graph_core::Alphabet::Walks) {
                    return Err(FoamError::BadLoop(w.clone()));
                }
                if !seen.insert(w.clone()) {
                    return Err(FoamError::SharedWord(w.clone()));
                }
            }
        }
        let total: usize = self.lambdas.iter().map(|l| l.d_gamma).sum();
        if total > g.betti_number() {
            return Err(FoamError::TooManyLoops { total, betti: g.betti_number() });
        }
        Ok(())
    }

    /// Common loop length `ℓ`, 1 when no eigenvalue carries loops.
    pub fn loop_length(&self) -> Result<usize, FoamError> {
        let lens: Vec<usize> = self.lambdas.iter().flat_map(|l| l.loops.iter().map(Vec::len)).collect();
        match lens.first() {
            None => Ok(1),
            Some(&l) if lens.iter().all(|&x| x == l) => Ok(l),
            _ => Err(FoamError::UnequalLengths(lens)),
        }
    }

    pub fn euler_spec(&self, q: u64) -> EulerFactorSpec {
        EulerFactorSpec { q, mode: EulerMode::Foam(self.lambdas.iter().map(|l| FoamLambda { alpha: l.alpha, d: l.d() as u32 }).collect()) }
    }
}

#[derive(Debug, Clone)]
pub struct FoamGraph {
    pub graph: DirectedGraph,
    /// Vertex count before any tail was added; edges below `2·base_positive` are original.
    pub base_vertices: usize,
    pub base_positive: usize,
    /// Per eigenvalue, the tail paths starting with their new edge `w⁰_{i,λ}`.
    pub tails: Vec<Vec<Vec<EdgeId>>>,
    pub depth: usize,
    pub convention: TailConvention,
}

impl FoamGraph {
    pub fn is_new_edge(&self, e: EdgeId) -> bool {
        e >= 2 * self.base_positive
    }

    /// Gives every non-frontier vertex of degree below `valence` extra one-edge branches
    /// closed by loops. A bare tail vertex has degree two, which forces the walk and puts
    /// the tail cylinders in the lower filtration; the branches restore the choice a
    /// regular tree has there. Existing ids are kept.
    pub fn saturated(&self, valence: usize) -> FoamGraph {
        FoamGraph { graph: saturate_valence(&self.graph, valence, 1, TailConvention::TerminalLoop), ..self.clone() }
    }

    /// New edges `w⁰_{i,λ}` for eigenvalue `k`.
    pub fn attachments(&self, k: usize) -> Vec<EdgeId> {
        self.tails[k].iter().map(|t| t[0]).collect()
    }
}

/// Appends tails to the sinks of the dual graph, then `d⁰_λ` fresh tails of `depth`
/// edges at each `x_λ`.
///
/// With [`TailConvention::Frontier`] every tail ends at a flagged frontier vertex and the
/// Betti number is unchanged; [`TailConvention::TerminalLoop`] closes each end with a loop
/// so the result carries a subshift.
pub fn build_foam_graph(spec: &FoamSpec, depth: usize, convention: TailConvention) -> Result<FoamGraph, FoamError> {
    spec.validate()?;
    let base_vertices = spec.graph.vertex_count();
    let base_positive = spec.graph.positive_count();
    let mut g = if spec.graph.sinks().is_empty() { spec.graph.clone() } else { append_tails(&spec.graph, depth, convention).graph };
    let mut tails = Vec::with_capacity(spec.lambdas.len());
    for l in &spec.lambdas {
        let x = l.vertex.unwrap_or(0);
        let mut per = Vec::with_capacity(l.d_zero);
        for _ in 0..l.d_zero {
            let mut at = x;
            let mut path = Vec::with_capacity(depth);
            for _ in 0..depth.max(1) {
                let t = g.add_vertex();
                path.push(g.add_edge(at, t));
                at = t;
            }
            g.set_frontier(at, true);
            if convention == TailConvention::TerminalLoop {
                g.add_edge(at, at);
            }
            per.push(path);
        }
        tails.push(per);
    }
    Ok(FoamGraph { graph: g, base_vertices, base_positive, tails, depth: depth.max(1), convention })
}

#[derive(Debug, Clone)]
pub struct FoamEmbedding {
    pub alpha: C,
    pub d: usize,
    pub embedding: CohomologyEmbedding,
}

impl FoamEmbedding {
    /// Constant trace tables `d_λ` after checking `dim(Gr_{Nℓ} ∩ 𝒱_λ) = d_λ` at every level.
    pub fn traces(&self) -> PmTraces {
        PmTraces::constant(self.d as f64)
    }
}

/// Per-eigenvalue embeddings: loop cylinders for `Φ^Γ` and tail cylinders for `Φ⁰`,
/// all projected into `Gr_{Nℓ}`.
pub fn foam_embeddings(spec: &FoamSpec, fg: &FoamGraph, f: &FiltrationSpace, n_max: usize) -> Result<Vec<FoamEmbedding>, FoamError> {
    let ell = spec.loop_length()?;
    if n_max * ell + 1 > fg.depth && fg.tails.iter().any(|t| !t.is_empty()) {
        return Err(FoamError::ShortTail { depth: fg.depth, level: n_max * ell });
    }
    let mut out = Vec::with_capacity(spec.lambdas.len());
    for (k, l) in spec.lambdas.iter().enumerate() {
        let gens: Vec<Generator> = l.loops.iter().cloned().map(Generator::Loop).chain(fg.tails[k].iter().cloned().map(Generator::Path)).collect();
        if gens.is_empty() {
            continue;
        }
        let embedding = embed_generators(f, &gens, ell, n_max)?;
        if embedding.intersections.iter().any(|&x| x != l.d()) {
            return Err(FoamError::Dimension { index: k, got: embedding.intersections.clone(), want: l.d() });
        }
        out.push(FoamEmbedding { alpha: l.alpha, d: l.d(), embedding });
    }
    Ok(out)
}

/// Whether the spans `𝒱_λ` are pairwise orthogonal at the common top level.
pub fn mutually_orthogonal(f: &FiltrationSpace, embs: &[FoamEmbedding]) -> bool {
    embs.iter().enumerate().all(|(i, a)| {
        embs[i + 1..].iter().all(|b| {
            let top = a.embedding.top.max(b.embedding.top);
            a.embedding.basis.iter().all(|x| {
                let x = f.lift_to(a.embedding.top, top, x);
                b.embedding.basis.iter().all(|y| Zero::is_zero(&f.inner(top, &x, &f.lift_to(b.embedding.top, top, y))))
            })
        })
    })
}

/// `∏_λ det_{∞,π(𝒱_λ),iD}(s)` against `∏_λ (1 − λq^{−s})^{d_λ}` on a grid.
pub fn foam_local_factor(spec: &FoamSpec, embs: &[FoamEmbedding], q: u64, grid: &[C]) -> Result<LocalFactorReport, FoamError> {
    let ell = spec.loop_length()?;
    let kept: Vec<&LambdaData> = spec.lambdas.iter().filter(|l| l.d() > 0).collect();
    let euler = EulerFactorSpec { q, mode: EulerMode::Foam(kept.iter().map(|l| FoamLambda { alpha: l.alpha, d: l.d() as u32 }).collect()) };
    let traces: Vec<PmTraces> = embs.iter().map(FoamEmbedding::traces).collect();
    Ok(verify_local_factor_with_traces(&euler, ell, &traces, grid)?)
}
