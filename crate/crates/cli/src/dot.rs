//! Graphviz export. Output depends only on the graph, so equal graphs give
//! identical text.

use std::fmt::Write;

use mdag_core::{Mdag, NodeId, Pos};

pub fn export_dot(g: &Mdag) -> String {
    let mut out = String::from("digraph mdag {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n");
    for u in g.nodes() {
        let label = match (u, g.key(u)) {
            (NodeId::SINK, _) => "t".to_string(),
            (_, Some(q)) => {
                let [l, m, t, b] = [q.x_end, q.y_end, q.top, q.bottom].map(signed);
                let name = if u == NodeId::SOURCE { "s " } else { "" };
                format!("{name}⟨{l},{m},{t},{b}⟩")
            }
            (_, None) => String::new(),
        };
        writeln!(out, "  n{} [label=\"{}\"];", u.index(), label).unwrap();
    }
    for (u, e) in g.edges() {
        let label = escape(&e.label);
        writeln!(out, "  n{} -> n{} [label=\"{}\"];", u.index(), e.to.index(), label).unwrap();
    }
    out.push_str("}\n");
    out
}

fn signed(p: Pos) -> String {
    if p.is_inf() {
        "inf".to_string()
    } else {
        p.to_signed().to_string()
    }
}

// escape_ascii writes \" and \\, which DOT accepts inside quotes
fn escape(label: &[u8]) -> String {
    label.escape_ascii().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdag_core::{build_mdag, compact_mdag};

    #[test]
    fn fig1_has_four_nodes_and_six_labeled_edges() {
        let dot = export_dot(&compact_mdag(build_mdag(b"TCACAGAGA", b"ACCCGTAGG")));
        assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 4);
        let mut labels: Vec<&str> = dot
            .lines()
            .filter(|l| l.contains("->"))
            .map(|l| l.split("label=\"").nth(1).unwrap().trim_end_matches("\"];"))
            .collect();
        labels.sort();
        assert_eq!(labels, ["AC", "AG", "CC", "G$", "GAG$", "TAG"]);
        assert!(dot.contains("n0 [label=\"s ⟨-1,-1,inf,inf⟩\"]"));
    }

    #[test]
    fn disjoint_alphabets_give_a_single_terminator_edge() {
        let dot = export_dot(&compact_mdag(build_mdag(b"AB", b"CD")));
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
        assert_eq!(edges, ["  n0 -> n1 [label=\"$\"];"]);
    }

    #[test]
    fn output_is_stable() {
        let a = export_dot(&compact_mdag(build_mdag(b"TCACAG", b"GTACTA")));
        let b = export_dot(&compact_mdag(build_mdag(b"TCACAG", b"GTACTA")));
        assert_eq!(a, b);
    }

    #[test]
    fn quotes_and_control_bytes_are_escaped() {
        assert_eq!(escape(b"a\"b\\\n"), r#"a\"b\\\n"#);
    }
}
