//! Small graphs and Schottky groups shared by the subcommands and the acceptance suite.

use bruhat_tits::{Mat2, PadicContext};
use graph_core::{saturate_valence, DirectedGraph, TailConvention};
use schottky::{build_schottky_tree, equalize_loop_lengths, quotient_dual_graph, reduction_graph, DualGraphData, QuotientOptions, SchottkyGroup};

use crate::CliError;

/// Two vertices joined by three edges, oriented so every edge has a successor.
pub fn theta() -> DirectedGraph {
    DirectedGraph::from_positive(2, &[(1, 0), (0, 1), (1, 0)]).expect("static graph")
}

pub fn single_loop() -> DirectedGraph {
    DirectedGraph::from_positive(1, &[(0, 0)]).expect("static graph")
}

/// Two loops joined by a pair of opposite edges.
pub fn dumbbell() -> DirectedGraph {
    DirectedGraph::from_positive(2, &[(0, 0), (1, 1), (0, 1), (1, 0)]).expect("static graph")
}

/// Two loops joined by one edge.
pub fn barbell() -> DirectedGraph {
    DirectedGraph::from_positive(2, &[(0, 0), (1, 1), (0, 1)]).expect("static graph")
}

/// Complete graph on four vertices, positively oriented without sinks.
pub fn k4() -> DirectedGraph {
    DirectedGraph::from_positive(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]).expect("static graph")
}

pub fn builtin(name: &str) -> Option<DirectedGraph> {
    match name {
        "theta" => Some(theta()),
        "loop" => Some(single_loop()),
        "dumbbell" => Some(dumbbell()),
        "barbell" => Some(barbell()),
        "k4" => Some(k4()),
        _ => None,
    }
}

pub const BUILTINS: &[&str] = &["theta", "loop", "dumbbell", "barbell", "k4"];

/// Genus one at p = 2: the reduction graph of `diag(2,1)` with looped tails.
pub fn genus_one_reduction() -> Result<DualGraphData, CliError> {
    let ctx = PadicContext::prime(2)?;
    let g = SchottkyGroup::new(ctx, vec![Mat2::from_ints(2, 0, 0, 1)], 4)?;
    let core = build_schottky_tree(&g, 3, 4, None)?;
    let red = reduction_graph(&core, 1)?;
    let opts = QuotientOptions { tail_convention: TailConvention::TerminalLoop, tail_depth: 2, ..Default::default() };
    Ok(quotient_dual_graph(&g, &red, &opts)?)
}

/// Genus two at p = 2: `diag(2,1)` and a conjugate of `diag(4,1)` with disjoint axes.
pub fn genus_two_group() -> Result<SchottkyGroup, CliError> {
    let h = Mat2::from_ints(1, 3, 1, 1);
    let second = &(&h * &Mat2::from_ints(4, 0, 0, 1)) * &h.inverse()?;
    Ok(SchottkyGroup::new(PadicContext::prime(2)?, vec![Mat2::from_ints(2, 0, 0, 1), second], 4)?)
}

pub fn genus_two_quotient() -> Result<DualGraphData, CliError> {
    let g = genus_two_group()?;
    let t = build_schottky_tree(&g, 3, 4, None)?;
    Ok(quotient_dual_graph(&g, &t, &QuotientOptions::default())?)
}

/// The genus-two quotient with equal loop lengths, and its valence-3 saturation.
pub fn genus_two_equalized() -> Result<(DualGraphData, DirectedGraph), CliError> {
    let (e, _) = equalize_loop_lengths(&genus_two_quotient()?, 8)?;
    let sat = saturate_valence(&e.graph, 3, 2, TailConvention::TerminalLoop);
    Ok((e, sat))
}
