//! Graphviz export.

use std::fmt::Write;

use super::{InducedChain, ProductDtmc, Tag, Turn};
use crate::captl::Requirement;
use crate::mdp::Mdp;

fn prob(p: f64) -> String {
    format!("{p:.6}").trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Product chain as a digraph. Turn-two states are drawn as double circles,
/// context edges are labelled `w:<id>` and τ edges are dashed.
pub fn product_to_dot(mdp: &Mdp, req: &Requirement, product: &ProductDtmc) -> String {
    let mut out = String::from("digraph product {\n  rankdir=LR;\n");
    for (v, ps) in product.states.iter().enumerate() {
        let shape = match ps.turn {
            Turn::Two => "doublecircle",
            Turn::One => "circle",
        };
        let turn = if ps.turn == Turn::One { 1 } else { 2 };
        let _ =
            writeln!(out, "  v{v} [shape={shape}, label=\"{}, {}, {turn}\"];", mdp.display_name(ps.state), req.objectives[ps.objective].id);
    }
    for (v, edges) in product.edges.iter().enumerate() {
        for e in edges {
            let attrs = match e.tag {
                Tag::Action(a) => format!("label=\"{} {}\"", mdp.action_name(a), prob(e.prob)),
                Tag::Context(wi) => format!("label=\"w:{}\"", req.contexts[wi].id),
                Tag::Tau => "label=\"τ\", style=dashed".to_string(),
                Tag::Idle => "label=\"idle\", style=dotted".to_string(),
            };
            let _ = writeln!(out, "  v{v} -> v{} [{attrs}];", e.to);
        }
    }
    out.push_str("}\n");
    out
}

/// Chain induced by a protocol as a digraph over (objective, state) pairs.
pub fn induced_to_dot(mdp: &Mdp, req: &Requirement, induced: &InducedChain) -> String {
    let mut out = String::from("digraph induced {\n  rankdir=LR;\n");
    for (i, &(qi, s)) in induced.pairs.iter().enumerate() {
        let _ = writeln!(out, "  p{i} [label=\"{}, {}\"];", req.objectives[qi].id, mdp.display_name(s));
    }
    for (i, row) in induced.chain.rows.iter().enumerate() {
        for &(j, p) in row {
            let _ = writeln!(out, "  p{i} -> p{j} [label=\"{}\"];", prob(p));
        }
    }
    out.push_str("}\n");
    out
}
