//! Schottky groups acting on the Bruhat–Tits tree and their quotient graphs.

#![forbid(unsafe_code)]

mod equalize;
mod quotient;
mod tree;

pub use equalize::{delta_gamma_heuristic, equalize_loop_lengths, EqualizeReport};
pub use quotient::{quotient_dual_graph, Ambient, DualGraphData, QuotientOptions};
pub use tree::{axis_vertices, bridge, build_schottky_tree, reduction_graph, SchottkyTree};

use bruhat_tits::{valuation, Mat2, PadicContext, TreeError};
use graph_core::GraphError;

#[derive(Debug, thiserror::Error)]
pub enum SchottkyError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("need at least one generator")]
    NoGenerators,
    #[error("word {0} is not hyperbolic")]
    NotHyperbolic(String),
    #[error("no axis vertex of the element inside the patch; use a larger radius")]
    AxisOutsidePatch,
    #[error("identification radius not certified: {0}")]
    Uncertified(String),
    #[error("action is not free: {0}")]
    NotFree(String),
    #[error("equalization budget exhausted after {steps} steps, lengths {lengths:?}")]
    BudgetExhausted { steps: usize, lengths: Vec<usize> },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperbolicType {
    pub hyperbolic: bool,
    pub translation_length: u64,
}

/// Hyperbolic iff `2·v(tr) < v(det)`; the translation length is then `v(det) − 2·v(tr)`.
pub fn hyperbolic_type(m: &Mat2, p: u64) -> Result<HyperbolicType, SchottkyError> {
    let vdet = valuation(&m.det(), p).ok_or(TreeError::Singular)?;
    let hyp = |vtr: i64| HyperbolicType { hyperbolic: true, translation_length: (vdet - 2 * vtr) as u64 };
    Ok(match valuation(&m.trace(), p) {
        Some(vtr) if 2 * vtr < vdet => hyp(vtr),
        _ => HyperbolicType { hyperbolic: false, translation_length: 0 },
    })
}

/// Letters are `±(i+1)` for generator `i` and its inverse.
pub type Word = Vec<i32>;

pub fn word_string(w: &[i32]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&l| if l > 0 { format!("g{}", l - 1) } else { format!("g{}^-1", -l - 1) })
        .collect::<Vec<_>>()
        .join("·")
}

#[derive(Debug, Clone)]
pub struct SchottkyGroup {
    pub ctx: PadicContext,
    pub generators: Vec<Mat2>,
    pub word_bound: usize,
    inverses: Vec<Mat2>,
}

impl SchottkyGroup {
    /// Checks that every reduced word of length `1..=word_bound` is hyperbolic.
    pub fn new(ctx: PadicContext, generators: Vec<Mat2>, word_bound: usize) -> Result<Self, SchottkyError> {
        if generators.is_empty() {
            return Err(SchottkyError::NoGenerators);
        }
        let inverses = generators.iter().map(|g| g.inverse()).collect::<Result<Vec<_>, _>>()?;
        let group = SchottkyGroup { ctx, generators, word_bound, inverses };
        for (w, m) in group.reduced_words(word_bound.max(1)) {
            if !hyperbolic_type(&m, ctx.p)?.hyperbolic {
                return Err(SchottkyError::NotHyperbolic(word_string(&w)));
            }
        }
        Ok(group)
    }

    pub fn genus(&self) -> usize {
        self.generators.len()
    }

    pub fn letter(&self, l: i32) -> &Mat2 {
        let i = (l.unsigned_abs() - 1) as usize;
        if l > 0 {
            &self.generators[i]
        } else {
            &self.inverses[i]
        }
    }

    pub fn letters(&self) -> Vec<i32> {
        (1..=self.genus() as i32).flat_map(|i| [i, -i]).collect()
    }

    pub fn evaluate(&self, w: &[i32]) -> Mat2 {
        w.iter().fold(Mat2::identity(), |acc, &l| &acc * self.letter(l))
    }

    /// All nonempty reduced words up to `max_len` with their matrices, by length then letter order.
    pub fn reduced_words(&self, max_len: usize) -> Vec<(Word, Mat2)> {
        let mut out = Vec::new();
        let mut layer: Vec<(Word, Mat2)> = vec![(Vec::new(), Mat2::identity())];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, m) in &layer {
                for l in self.letters() {
                    if w.last() == Some(&-l) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push((w2, m * self.letter(l)));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn translation_lengths(&self) -> Vec<u64> {
        self.generators
            .iter()
            .map(|g| hyperbolic_type(g, self.ctx.p).map(|h| h.translation_length).unwrap_or(0))
            .collect()
    }
}
