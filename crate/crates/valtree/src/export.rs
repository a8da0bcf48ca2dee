//! Deterministic ASCII, Graphviz DOT and JSON renderings of a tree.

use std::io::{self, Write};

use valtree_core::padic::Valuation;
use valtree_core::valtree::{NodeLabel, TreeNode, ValuationTree};

pub const TREE_SCHEMA: &str = "padic-valtree/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Dot,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "ascii" => Some(Format::Ascii),
            "dot" => Some(Format::Dot),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

pub fn export(tree: &ValuationTree, format: Format, out: &mut (impl Write + ?Sized)) -> io::Result<()> {
    match format {
        Format::Ascii => write_ascii(tree, out),
        Format::Dot => write_dot(tree, out),
        Format::Json => write_json(tree, out),
    }
}

pub fn to_string(tree: &ValuationTree, format: Format) -> String {
    let mut buf = Vec::new();
    export(tree, format, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("exporters emit UTF-8")
}

fn annotations(node: &TreeNode) -> &'static str {
    match (node.depth_capped, node.exact_zero && node.label.is_star()) {
        (true, true) => " [capped, exact zero]",
        (true, false) => " [capped]",
        (false, true) => " [exact zero]",
        (false, false) => "",
    }
}

/// One line per node, children indented two spaces below their parent.
pub fn write_ascii(tree: &ValuationTree, out: &mut (impl Write + ?Sized)) -> io::Result<()> {
    writeln!(
        out,
        "{} (p = {}, depth {}, {})",
        tree.polynomial(),
        tree.p(),
        tree.max_depth(),
        tree.mode().as_str()
    )?;
    fn walk(node: &TreeNode, out: &mut (impl Write + ?Sized)) -> io::Result<()> {
        let indent = "  ".repeat(node.level() as usize);
        writeln!(out, "{indent}{}: {}{}", node.class, node.label, annotations(node))?;
        node.children.iter().try_for_each(|c| walk(c, out))
    }
    walk(tree.root(), out)
}

pub fn write_dot(tree: &ValuationTree, out: &mut (impl Write + ?Sized)) -> io::Result<()> {
    writeln!(out, "digraph valtree {{")?;
    writeln!(out, "  label=\"{} (p = {})\";", tree.polynomial(), tree.p())?;
    writeln!(out, "  node [shape=circle];")?;
    for node in tree.nodes() {
        let id = node.class.node_id();
        let style = if node.label.is_star() {
            ""
        } else {
            ", style=filled, fillcolor=lightblue"
        };
        writeln!(out, "  {id} [label=\"{}\"{style}];", node.label)?;
        for child in &node.children {
            writeln!(out, "  {id} -> {};", child.class.node_id())?;
        }
    }
    writeln!(out, "}}")
}

fn json_label(label: NodeLabel) -> String {
    match label {
        NodeLabel::Star => "\"star\"".into(),
        NodeLabel::Terminal(Valuation::Finite(v)) => format!("{{\"terminal\":{v}}}"),
        NodeLabel::Terminal(Valuation::Infinity) => "{\"terminal\":\"infinity\"}".into(),
    }
}

/// Compact JSON following the `padic-valtree/1` schema, streamed node by
/// node so large trees never materialize as a document in memory.
pub fn write_json(tree: &ValuationTree, out: &mut (impl Write + ?Sized)) -> io::Result<()> {
    write!(
        out,
        "{{\"schema\":\"{TREE_SCHEMA}\",\"p\":{},\"polynomial\":\"{}\",\"arity\":{},\"depth\":{},\"mode\":\"{}\",\"root\":",
        tree.p(),
        tree.polynomial(),
        tree.arity().vars(),
        tree.max_depth(),
        tree.mode().as_str()
    )?;
    fn node_json(node: &TreeNode, out: &mut (impl Write + ?Sized)) -> io::Result<()> {
        write!(out, "{{\"level\":{}", node.level())?;
        if node.level() > 0 {
            let rep: Vec<String> = node.class.rep().iter().map(|r| r.to_string()).collect();
            write!(out, ",\"rep\":[{}]", rep.join(","))?;
        }
        write!(
            out,
            ",\"label\":{},\"depth_capped\":{},\"children\":[",
            json_label(node.label),
            node.depth_capped
        )?;
        for (i, child) in node.children.iter().enumerate() {
            if i > 0 {
                out.write_all(b",")?;
            }
            node_json(child, out)?;
        }
        out.write_all(b"]}")
    }
    node_json(tree.root(), out)?;
    writeln!(out, "}}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use valtree_core::padic::Prime;
    use valtree_core::polynomial::parse_poly;
    use valtree_core::valtree::{build_tree, LabelingMode};

    fn tree(text: &str, depth: u32, mode: LabelingMode) -> ValuationTree {
        build_tree(&parse_poly(text).unwrap(), Prime::TWO, depth, mode).unwrap()
    }

    #[test]
    fn ascii_of_univariate_example() {
        let t = tree("n^2+5", 2, LabelingMode::Constancy);
        let text = to_string(&t, Format::Ascii);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1..], ["root: *", "  0 mod 2^1: 0", "  1 mod 2^1: 1"]);
    }

    #[test]
    fn json_is_valid_and_stable() {
        let t = tree("x^2+y^2+x*y+x+y+1", 2, LabelingMode::Congruence);
        let a = to_string(&t, Format::Json);
        assert_eq!(a, to_string(&t, Format::Json));
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], TREE_SCHEMA);
        assert_eq!(v["arity"], 2);
        assert!(v["root"].get("rep").is_none());
        assert_eq!(v["root"]["children"][3]["label"], "star");
        assert_eq!(v["root"]["children"][3]["children"][0]["label"]["terminal"], 1);
        assert_eq!(v["root"]["children"][3]["rep"], serde_json::json!([1, 1]));
    }

    #[test]
    fn dot_lists_every_node_and_edge() {
        let t = tree("x^2+y^2", 4, LabelingMode::Congruence);
        let dot = to_string(&t, Format::Dot);
        assert!(dot.starts_with("digraph valtree {"));
        assert_eq!(dot.matches(" -> ").count(), t.node_count() - 1);
        assert!(dot.contains("n0_0_0 [label=\"*\"];"));
        assert!(dot.contains("n1_1_1 [label=\"*\"];"));
        assert!(dot.contains("n0_0_0 -> n1_0_1;"));
    }
}
