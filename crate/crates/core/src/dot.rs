//! Graphviz DOT text for a multigraph. Parallel arcs are repeated edge
//! statements and loops are `ni -> ni;`. Output is byte-stable.

use std::fmt::Write;

use crate::matrix::ArcMatrix;

pub fn emit_dot(a: &ArcMatrix) -> String {
    let mut s = String::from("digraph class {\n");
    for i in 1..=a.p() {
        writeln!(s, "  n{i};").unwrap();
    }
    for (i, row) in a.rows().enumerate() {
        for (j, &k) in row.iter().enumerate() {
            for _ in 0..k {
                writeln!(s, "  n{} -> n{};", i + 1, j + 1).unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(dot: &str) -> Vec<&str> {
        dot.lines().map(str::trim).filter(|l| l.contains("->")).collect()
    }

    #[test]
    fn single_loop_pair() {
        let dot = emit_dot(&ArcMatrix::from_rows(&[[2]]).unwrap());
        assert_eq!(edges(&dot), ["n1 -> n1;", "n1 -> n1;"]);
        assert_eq!(dot, "digraph class {\n  n1;\n  n1 -> n1;\n  n1 -> n1;\n}\n");
    }

    #[test]
    fn null_graph_is_blank() {
        assert_eq!(emit_dot(&ArcMatrix::empty()), "digraph class {\n}\n");
    }

    #[test]
    fn full_two_node() {
        let dot = emit_dot(&ArcMatrix::from_rows(&[[1, 1], [1, 1]]).unwrap());
        assert_eq!(edges(&dot), ["n1 -> n1;", "n1 -> n2;", "n2 -> n1;", "n2 -> n2;"]);
    }
}
