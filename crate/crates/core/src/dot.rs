//! Graphviz DOT rendering.
//!
//! Interface positions become plain nodes `i0, i1, ...` and `o0, o1, ...`,
//! wires become small circles `w0, w1, ...` labeled by sort, and boxes become
//! record nodes `b0, b1, ...` with ports `in0, ...` and `out0, ...`.

use std::fmt::Write;

use crate::diagram::Diagram;

fn escape_record(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '{' | '}' | '|' | '<' | '>' | '"' | '\\' | ' ') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn escape_quoted(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn dot_export(d: &Diagram) -> String {
    let g = d.graph();
    let mut s = String::new();
    let _ = writeln!(s, "digraph diagram {{");
    let _ = writeln!(s, "  rankdir=LR;");
    for (i, _) in d.dom().iter().enumerate() {
        let _ = writeln!(s, "  i{i} [shape=plain, label=\"{i}\"];");
    }
    for (j, _) in d.cod().iter().enumerate() {
        let _ = writeln!(s, "  o{j} [shape=plain, label=\"{j}\"];");
    }
    for (w, wire) in g.wires.iter().enumerate() {
        let _ = writeln!(
            s,
            "  w{w} [shape=circle, width=0.25, fixedsize=true, label=\"{}\"];",
            escape_quoted(&wire.sort)
        );
    }
    for (b, hb) in g.boxes.iter().enumerate() {
        let ports = |prefix: &str, n: usize| {
            (0..n)
                .map(|k| format!("<{prefix}{k}> {prefix}{k}"))
                .collect::<Vec<_>>()
                .join("|")
        };
        let _ = writeln!(
            s,
            "  b{b} [shape=record, label=\"{{{{{}}}|{}|{{{}}}}}\"];",
            ports("in", hb.inputs.len()),
            escape_quoted(&escape_record(&hb.label)),
            ports("out", hb.outputs.len()),
        );
    }
    for (i, &w) in d.p().iter().enumerate() {
        let _ = writeln!(s, "  i{i} -> w{w};");
    }
    for (b, hb) in g.boxes.iter().enumerate() {
        for (k, &w) in hb.inputs.iter().enumerate() {
            let _ = writeln!(s, "  w{w} -> b{b}:in{k};");
        }
        for (k, &w) in hb.outputs.iter().enumerate() {
            let _ = writeln!(s, "  b{b}:out{k} -> w{w};");
        }
    }
    for (j, &w) in d.q().iter().enumerate() {
        let _ = writeln!(s, "  w{w} -> o{j};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::samples;

    #[test]
    fn identity_has_two_edges() {
        let d = Diagram::identity(Arc::new(samples::sample_signature()), &["A"]).unwrap();
        let out = dot_export(&d);
        assert_eq!(out.matches(" -> ").count(), 2);
        assert_eq!(out.matches("shape=circle").count(), 1);
        assert_eq!(out.matches("shape=plain").count(), 2);
    }

    #[test]
    fn generator_ports() {
        let d = Diagram::generator(Arc::new(samples::sample_signature()), "f").unwrap();
        let out = dot_export(&d);
        assert_eq!(out.matches("shape=record").count(), 1);
        assert_eq!(out.matches("shape=circle").count(), 4);
        for port in ["b0:in0", "b0:in1", "b0:in2", "b0:out0"] {
            assert!(out.contains(port), "{port}");
        }
        assert_eq!(out, dot_export(&d));
    }
}
