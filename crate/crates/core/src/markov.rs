//! Normalization by removing eliminable boxes, and composition in the free
//! Markov category.

use crate::diagram::{compose, Diagram};
use crate::error::DiagramError;

/// Boxes whose every output wire is unread: no output position and no box
/// input points at it. Boxes without outputs always qualify.
pub fn eliminable_boxes(d: &Diagram) -> Vec<usize> {
    let consumers = d.graph().consumer_counts();
    let fibers = d.q_fibers();
    (0..d.box_count())
        .filter(|&b| {
            d.graph().boxes[b]
                .outputs
                .iter()
                .all(|&w| consumers[w] == 0 && fibers[w].is_empty())
        })
        .collect()
}

/// Ids of [`eliminable_boxes`].
pub fn eliminable_box_ids(d: &Diagram) -> Vec<String> {
    eliminable_boxes(d)
        .into_iter()
        .map(|b| d.graph().boxes[b].id.clone())
        .collect()
}

pub fn is_normalized(d: &Diagram) -> bool {
    eliminable_boxes(d).is_empty()
}

/// Removes eliminable boxes and their output wires until none remain.
pub fn normalize(d: &Diagram) -> Diagram {
    normalize_by(d, |candidates| candidates[0])
}

/// Like [`normalize`], removing one box at a time and letting `choose` pick
/// which of the currently eliminable boxes (given as positions in `d`, never
/// empty) goes next.
pub fn normalize_by<F>(d: &Diagram, mut choose: F) -> Diagram
where
    F: FnMut(&[usize]) -> usize,
{
    let g = d.graph();
    let mut removed = vec![false; g.boxes.len()];
    let mut dead_wire = vec![false; g.wires.len()];
    let mut consumers = g.consumer_counts();
    let fibers = d.q_fibers();
    let mut producers: Vec<Vec<usize>> = vec![Vec::new(); g.wires.len()];
    for (b, hb) in g.boxes.iter().enumerate() {
        for &w in &hb.outputs {
            producers[w].push(b);
        }
    }
    let eliminable = |b: usize, consumers: &[usize]| {
        g.boxes[b]
            .outputs
            .iter()
            .all(|&w| consumers[w] == 0 && fibers[w].is_empty())
    };
    let mut worklist: Vec<usize> = (0..g.boxes.len()).filter(|&b| eliminable(b, &consumers)).collect();
    while !worklist.is_empty() {
        let b = choose(&worklist);
        worklist.retain(|&x| x != b);
        removed[b] = true;
        for &w in &g.boxes[b].outputs {
            dead_wire[w] = true;
        }
        for &w in &g.boxes[b].inputs {
            consumers[w] -= 1;
            if consumers[w] == 0 {
                for &pb in &producers[w] {
                    if !removed[pb] && !worklist.contains(&pb) && eliminable(pb, &consumers) {
                        worklist.push(pb);
                    }
                }
            }
        }
    }
    if !removed.contains(&true) {
        return d.clone();
    }
    let (graph, remap) = g.without(&removed, &dead_wire);
    let legs = |xs: &[usize]| xs.iter().map(|&w| remap[w].expect("interface wires survive")).collect();
    d.with_graph_and_legs(graph, legs(d.p()), legs(d.q()), d.cod().to_vec())
}

/// `normalize(first ; second)`.
pub fn markov_compose(first: &Diagram, second: &Diagram) -> Result<Diagram, DiagramError> {
    Ok(normalize(&compose(first, second)?))
}
