//! Small signatures and diagrams used by tests, benchmarks, and the CLI.

use std::sync::Arc;

use crate::diagram::Diagram;
use crate::error::DiagramError;
use crate::hypergraph::{HyperBox, LabeledHypergraph, Wire};
use crate::signature::{BoxSignature, Signature};

/// Sorts `A`, `B`, `X`; boxes `p: () -> X B`, `f: A A B -> A`,
/// `g1, g2: X -> ()`.
pub fn sample_signature() -> Signature {
    Signature::build(
        &["A", "B", "X"],
        vec![
            BoxSignature::new("p", &[], &["X", "B"]),
            BoxSignature::new("f", &["A", "A", "B"], &["A"]),
            BoxSignature::new("g1", &["X"], &[]),
            BoxSignature::new("g2", &["X"], &[]),
        ],
    )
    .expect("sample signature is well formed")
}

/// One sort `A`; `h: A -> A` and a source `s: () -> A`.
pub fn chain_signature() -> Signature {
    Signature::build(
        &["A"],
        vec![BoxSignature::new("h", &["A"], &["A"]), BoxSignature::new("s", &[], &["A"])],
    )
    .expect("chain signature is well formed")
}

/// One sort `A`; a root `r: () -> A` and two mechanisms `h1, h2: A -> A`.
pub fn fork_signature() -> Signature {
    Signature::build(
        &["A"],
        vec![
            BoxSignature::new("r", &[], &["A"]),
            BoxSignature::new("h1", &["A"], &["A"]),
            BoxSignature::new("h2", &["A"], &["A"]),
        ],
    )
    .expect("fork signature is well formed")
}

/// A box given by id, label, and the ids of its input and output wires.
pub type BoxById<'a> = (&'a str, &'a str, &'a [&'a str], &'a [&'a str]);

/// Builds a diagram from wire and box ids. The interface words are read off
/// the wires the legs point to. Only index ranges are checked, so invalid
/// diagrams can be built too.
pub fn from_ids(
    signature: Arc<Signature>,
    wires: &[(&str, &str)],
    boxes: &[BoxById<'_>],
    p: &[&str],
    q: &[&str],
) -> Result<Diagram, DiagramError> {
    let pos = |id: &str| -> Result<usize, DiagramError> {
        wires
            .iter()
            .position(|(w, _)| *w == id)
            .ok_or_else(|| DiagramError::InvalidPiece(format!("no wire with id `{id}`")))
    };
    let positions = |ids: &[&str]| ids.iter().map(|id| pos(id)).collect::<Result<Vec<_>, _>>();
    let graph = LabeledHypergraph::new(
        wires
            .iter()
            .map(|(id, sort)| Wire {
                id: id.to_string(),
                sort: sort.to_string(),
            })
            .collect(),
        boxes
            .iter()
            .map(|(id, label, ins, outs)| {
                Ok(HyperBox {
                    id: id.to_string(),
                    label: label.to_string(),
                    inputs: positions(ins)?,
                    outputs: positions(outs)?,
                })
            })
            .collect::<Result<_, DiagramError>>()?,
    );
    let p = positions(p)?;
    let q = positions(q)?;
    let word = |xs: &[usize]| xs.iter().map(|&w| wires[w].1.to_string()).collect();
    Diagram::from_parts(signature, word(&p), word(&q), graph, p, q)
}

const NETWORK_WIRES: [(&str, &str); 8] = [
    ("in1", "A"),
    ("in2", "X"),
    ("in3", "A"),
    ("in4", "B"),
    ("p.x", "X"),
    ("p.b", "B"),
    ("f1.out", "A"),
    ("f2.out", "A"),
];

const NETWORK_BOXES: [BoxById<'static>; 4] = [
    ("p", "p", &[], &["p.x", "p.b"]),
    ("f1", "f", &["in1", "in3", "p.b"], &["f1.out"]),
    ("f2", "f", &["f1.out", "in1", "in4"], &["f2.out"]),
    ("g2", "g2", &["p.x"], &[]),
];

/// `A X A B -> A A`: two `f` boxes in series fed partly by a `p` box, the
/// first input also feeding the second `f`, the `X` input discarded, and
/// the final result copied to both outputs.
pub fn two_f_network() -> Diagram {
    from_ids(
        Arc::new(sample_signature()),
        &NETWORK_WIRES,
        &NETWORK_BOXES,
        &["in1", "in2", "in3", "in4"],
        &["f2.out", "f2.out"],
    )
    .expect("fixture ids resolve")
}

/// The bloom of [`two_f_network`]: the same apex with every wire exposed
/// exactly once on the right.
pub fn network_bloom() -> Diagram {
    from_ids(
        Arc::new(sample_signature()),
        &NETWORK_WIRES,
        &NETWORK_BOXES,
        &["in1", "in2", "in3", "in4"],
        &["in1", "in2", "in3", "f1.out", "f2.out", "p.x", "p.b", "in4"],
    )
    .expect("fixture ids resolve")
}

/// The circuitry that turns [`network_bloom`] back into [`two_f_network`].
pub fn network_circuitry() -> Diagram {
    Diagram::wiring(
        Arc::new(sample_signature()),
        &["A", "X", "A", "A", "A", "X", "B", "B"],
        &[4, 4],
    )
    .expect("sorts are declared")
}

/// Like [`two_f_network`] but each `f` consumes the other's output, so the
/// apex has a cycle. Every other condition holds.
pub fn causal_loop() -> Diagram {
    from_ids(
        Arc::new(sample_signature()),
        &[
            ("in1", "A"),
            ("in2", "A"),
            ("in3", "B"),
            ("p.x", "X"),
            ("p.b", "B"),
            ("f1.out", "A"),
            ("f2.out", "A"),
        ],
        &[
            ("f1", "f", &["f2.out", "in2", "p.b"], &["f1.out"]),
            ("f2", "f", &["f1.out", "in1", "in3"], &["f2.out"]),
            ("p", "p", &[], &["p.x", "p.b"]),
            ("g2", "g2", &["p.x"], &[]),
        ],
        &["in1", "in2", "in3"],
        &["f2.out", "f2.out"],
    )
    .expect("fixture ids resolve")
}

/// A wire that is both an input of the diagram and the output of a box.
pub fn shared_wire() -> Diagram {
    from_ids(
        Arc::new(sample_signature()),
        &[
            ("w", "A"),
            ("in2", "A"),
            ("in3", "B"),
            ("p.x", "X"),
            ("p.b", "B"),
            ("f2.out", "A"),
        ],
        &[
            ("f1", "f", &["w", "in2", "p.b"], &["w"]),
            ("f2", "f", &["w", "w", "in3"], &["f2.out"]),
            ("p", "p", &[], &["p.x", "p.b"]),
            ("g2", "g2", &["p.x"], &[]),
        ],
        &["w", "in2", "in3"],
        &["f2.out", "f2.out"],
    )
    .expect("fixture ids resolve")
}

/// A normalized diagram with injective outputs `A X A B -> A A A`, exposing
/// the first input and the outputs of both `f` boxes.
pub fn causal_example() -> Diagram {
    from_ids(
        Arc::new(sample_signature()),
        &NETWORK_WIRES,
        &NETWORK_BOXES[..3],
        &["in1", "in2", "in3", "in4"],
        &["in1", "f2.out", "f1.out"],
    )
    .expect("fixture ids resolve")
}

/// `() -> A A A`: a root variable and two children that each read it.
pub fn fork_model() -> Diagram {
    from_ids(
        Arc::new(fork_signature()),
        &[("x", "A"), ("y", "A"), ("z", "A")],
        &[("r", "r", &[], &["x"]), ("h1", "h1", &["x"], &["y"]), ("h2", "h2", &["x"], &["z"])],
        &[],
        &["x", "y", "z"],
    )
    .expect("fixture ids resolve")
}

/// `() -> A A A`: a chain `x -> y -> z` of mechanisms.
pub fn chain_model() -> Diagram {
    from_ids(
        Arc::new(fork_signature()),
        &[("x", "A"), ("y", "A"), ("z", "A")],
        &[("r", "r", &[], &["x"]), ("h1", "h1", &["x"], &["y"]), ("h2", "h2", &["y"], &["z"])],
        &[],
        &["x", "y", "z"],
    )
    .expect("fixture ids resolve")
}
