use std::collections::BTreeMap;
use std::fmt::Write;

use super::{EdgeClass, RelayGraph};

fn face_label(face: &[String]) -> String {
    format!("{{{}}}", face.join(","))
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n"))
}

/// Graphviz rendering: one node per inhabited face, edges styled solid
/// (full), dashed (multiple) or dotted (cross-branch). Successor faces that
/// host nothing are drawn as dashed placeholders.
pub fn to_dot(g: &RelayGraph) -> String {
    let mut out = String::from("digraph relay {\n  rankdir=TB;\n  node [shape=box];\n");
    let mut ids: BTreeMap<Vec<String>, String> = BTreeMap::new();
    for (i, n) in g.nodes.iter().enumerate() {
        let id = format!("n{i}");
        let eqs: Vec<String> = n.equilibria.iter().map(|e| format!("{} ({:?})", e.label, e.las)).collect();
        let label = format!("{}\n{}", eqs.join("\n"), face_label(&n.face));
        let _ = writeln!(out, "  {id} [label={}];", quote(&label));
        ids.insert(n.face.clone(), id);
    }
    let mut ghosts = 0;
    for e in &g.edges {
        if !ids.contains_key(&e.lower) {
            let id = format!("g{ghosts}");
            ghosts += 1;
            let _ = writeln!(out, "  {id} [label={}, style=dashed];", quote(&face_label(&e.lower)));
            ids.insert(e.lower.clone(), id);
        }
    }
    for e in &g.edges {
        let style = match e.class {
            EdgeClass::Full => "solid",
            EdgeClass::Multiple => "dashed",
            EdgeClass::CrossBranch => "dotted",
        };
        let value = e.invasion_value.as_deref().map(|v| format!(" R={v}")).unwrap_or_default();
        let label = format!("{}{} {:?}", face_label(&e.sigma), value, e.verdict);
        let _ = writeln!(out, "  {} -> {} [label={}, style={style}];", ids[&e.upper], ids[&e.lower], quote(&label));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_model;
    use crate::relay::relay_graph;

    #[test]
    fn dot_is_deterministic() {
        let m = builtin_model("osn_omega0").unwrap();
        let a = to_dot(&relay_graph(&m).unwrap());
        let b = to_dot(&relay_graph(&m).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("digraph relay {"));
        assert!(a.contains("style=solid") || a.contains("style=dashed"));
    }
}
