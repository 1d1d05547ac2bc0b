//! Graphviz DOT export. Output depends only on the input, so equal inputs
//! give byte-identical text.

use std::fmt::Write;

use crate::complex::CubeComplex;
use crate::contact::ContactGraph;
use crate::graph::CubeGraph;
use crate::separation::strongly_separated;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#393b79", "#637939",
];

fn colour(j: u32) -> &'static str {
    PALETTE[j as usize % PALETTE.len()]
}

/// Plain graph, uncoloured. Useful for inputs that failed validation.
pub fn graph_dot(g: &CubeGraph) -> String {
    let mut s = String::from("graph cube {\n");
    for v in 0..g.vertex_count() {
        writeln!(s, "  {v};").unwrap();
    }
    for &(u, v) in g.edges() {
        writeln!(s, "  {u} -- {v};").unwrap();
    }
    s.push_str("}\n");
    s
}

/// The 1-skeleton with edges coloured and labelled by hyperplane. With
/// `selection`, only vertices in it and edges between them are drawn.
pub fn complex_dot(cx: &CubeComplex, selection: Option<&[u32]>) -> String {
    let n = cx.vertex_count();
    let mut keep = vec![selection.is_none(); n];
    for &v in selection.unwrap_or(&[]) {
        if (v as usize) < n {
            keep[v as usize] = true;
        }
    }
    let mut s = String::from("graph cube {\n");
    if keep.iter().any(|&k| k) {
        s.push_str("  node [shape=circle];\n");
    }
    for v in (0..n).filter(|&v| keep[v]) {
        writeln!(s, "  {v};").unwrap();
    }
    for (e, &(u, v)) in cx.graph().edges().iter().enumerate() {
        if keep[u as usize] && keep[v as usize] {
            let j = cx.edge_class(e as u32);
            writeln!(s, "  {u} -- {v} [color=\"{}\", label=\"J{j}\"];", colour(j)).unwrap();
        }
    }
    s.push_str("}\n");
    s
}

/// Contact graph; edges between strongly separated (touching but not
/// crossing, and crossed by no common hyperplane) pairs are dashed.
pub fn contact_dot(cx: &CubeComplex, cg: &ContactGraph) -> String {
    let h = cg.node_count() as u32;
    let mut s = String::from("graph contact {\n");
    for j in 0..h {
        writeln!(s, "  J{j} [color=\"{}\"];", colour(j)).unwrap();
    }
    for &(a, b) in cg.edges() {
        if strongly_separated(cx, a, b) {
            writeln!(s, "  J{a} -- J{b} [style=dashed, label=\"strongly separated\"];").unwrap();
        } else {
            writeln!(s, "  J{a} -- J{b};").unwrap();
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::contact_graph;
    use crate::generate;

    #[test]
    fn q3_skeleton() {
        let cx = CubeComplex::new(generate::cube(3)).unwrap();
        let d = complex_dot(&cx, None);
        assert_eq!(d.lines().filter(|l| l.contains("--")).count(), 12);
        assert_eq!(d.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("--")).count(), 9);
        let colours: std::collections::BTreeSet<&str> =
            d.lines().filter_map(|l| l.split("color=\"").nth(1)).map(|c| &c[..7]).collect();
        assert_eq!(colours.len(), 3);
        assert_eq!(d, complex_dot(&cx, None));
    }

    #[test]
    fn empty_selection_is_header_only() {
        let cx = CubeComplex::new(generate::cube(2)).unwrap();
        assert_eq!(complex_dot(&cx, Some(&[])), "graph cube {\n}\n");
    }

    #[test]
    fn p5_contact_path() {
        let cx = CubeComplex::new(generate::path(5)).unwrap();
        let d = contact_dot(&cx, &contact_graph(&cx));
        assert_eq!(d.lines().filter(|l| l.contains("--")).count(), 3);
        // in a tree every touching pair is strongly separated
        assert_eq!(d.matches("dashed").count(), 3);
        let q2 = CubeComplex::new(generate::cube(2)).unwrap();
        assert_eq!(contact_dot(&q2, &contact_graph(&q2)).matches("dashed").count(), 0);
    }
}
