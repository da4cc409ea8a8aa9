//! Graphviz export of the state-space digraph.

use std::fmt::Write;

use crate::exact::format_rational;
use crate::network::Prn;

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// One node per state and one edge per (state, function), labeled
/// `name: probability`. Parallel edges are kept.
pub fn export_dot(prn: &Prn) -> String {
    let mut out = String::from("digraph prn {\n");
    for s in prn.space().states() {
        let _ = writeln!(out, "  \"{}\";", escape(&s.to_string()));
    }
    let g = prn.state_digraph();
    for arc in &g.arcs {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}: {}\"];",
            escape(&g.space.state(arc.from).to_string()),
            escape(&g.space.state(arc.to).to_string()),
            escape(&arc.function),
            format_rational(&arc.probability)
        );
    }
    out.push_str("}\n");
    out
}
