//! Finite directed hypergraphs with ordered box incidences.
//!
//! Wires and boxes are stored in ordered vectors and referenced by position.
//! Every wire and box also carries an opaque string id, used for interchange
//! and diagnostics. All traversals follow storage order so results are
//! deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::CycleError;

/// A wire labeled by a sort of the signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Wire {
    pub id: String,
    pub sort: String,
}

/// A box occurrence labeled by a signature box, with ordered input and output
/// wires given as indices into the wire list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HyperBox {
    pub id: String,
    pub label: String,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

/// A finite hypergraph together with its labeling over a signature.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LabeledHypergraph {
    pub wires: Vec<Wire>,
    pub boxes: Vec<HyperBox>,
}

/// Multiplicities of wires among the inputs and outputs of each box, keyed by
/// `(box index, wire index)`. Absent keys mean zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IncidenceCounts {
    pub in_count: BTreeMap<(usize, usize), usize>,
    pub out_count: BTreeMap<(usize, usize), usize>,
}

impl IncidenceCounts {
    pub fn inputs(&self, b: usize, w: usize) -> usize {
        self.in_count.get(&(b, w)).copied().unwrap_or(0)
    }

    pub fn outputs(&self, b: usize, w: usize) -> usize {
        self.out_count.get(&(b, w)).copied().unwrap_or(0)
    }
}

impl LabeledHypergraph {
    pub fn new(wires: Vec<Wire>, boxes: Vec<HyperBox>) -> Self {
        LabeledHypergraph { wires, boxes }
    }

    /// The discrete hypergraph with one wire per sort of `word`, ids `w0, w1, ...`.
    pub fn discrete<S: AsRef<str>>(word: &[S]) -> Self {
        LabeledHypergraph {
            wires: word
                .iter()
                .enumerate()
                .map(|(i, s)| Wire {
                    id: format!("w{i}"),
                    sort: s.as_ref().to_string(),
                })
                .collect(),
            boxes: Vec::new(),
        }
    }

    pub fn wire_count(&self) -> usize {
        self.wires.len()
    }

    pub fn box_count(&self) -> usize {
        self.boxes.len()
    }

    pub fn wire_position(&self, id: &str) -> Option<usize> {
        self.wires.iter().position(|w| w.id == id)
    }

    pub fn box_position(&self, id: &str) -> Option<usize> {
        self.boxes.iter().position(|b| b.id == id)
    }

    pub fn incidence_counts(&self) -> IncidenceCounts {
        let mut counts = IncidenceCounts::default();
        for (b, hb) in self.boxes.iter().enumerate() {
            for &w in &hb.inputs {
                *counts.in_count.entry((b, w)).or_insert(0) += 1;
            }
            for &w in &hb.outputs {
                *counts.out_count.entry((b, w)).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Total number of box input ports attached to each wire.
    pub fn consumer_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.wires.len()];
        for hb in &self.boxes {
            for &w in &hb.inputs {
                counts[w] += 1;
            }
        }
        counts
    }

    /// Total number of box output ports attached to each wire.
    pub fn producer_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.wires.len()];
        for hb in &self.boxes {
            for &w in &hb.outputs {
                counts[w] += 1;
            }
        }
        counts
    }

    /// For every box, the boxes it depends on: `b` depends on `b'` when some
    /// output wire of `b'` is an input wire of `b`. Sorted and deduplicated.
    fn dependencies(&self) -> Vec<Vec<usize>> {
        let mut producers: Vec<Vec<usize>> = vec![Vec::new(); self.wires.len()];
        for (b, hb) in self.boxes.iter().enumerate() {
            for &w in &hb.outputs {
                producers[w].push(b);
            }
        }
        self.boxes
            .iter()
            .map(|hb| {
                let mut deps: Vec<usize> = hb
                    .inputs
                    .iter()
                    .flat_map(|&w| producers[w].iter().copied())
                    .collect();
                deps.sort_unstable();
                deps.dedup();
                deps
            })
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_box_order().is_ok()
    }

    /// Boxes ordered so that producers precede consumers. Among boxes that
    /// are ready at the same time, the one stored first goes first.
    pub fn topological_box_order(&self) -> Result<Vec<usize>, CycleError> {
        let deps = self.dependencies();
        let n = self.boxes.len();
        let mut pending: Vec<usize> = deps.iter().map(Vec::len).collect();
        let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (b, ds) in deps.iter().enumerate() {
            for &d in ds {
                dependents[d].push(b);
            }
        }
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&b| pending[b] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(b) = ready.pop_first() {
            order.push(b);
            for &d in &dependents[b] {
                pending[d] -= 1;
                if pending[d] == 0 {
                    ready.insert(d);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            let stuck = (0..n)
                .filter(|b| !order.contains(b))
                .map(|b| self.boxes[b].id.clone())
                .collect();
            Err(CycleError { boxes: stuck })
        }
    }

    /// The wires of some cycle, if one exists. Used for diagnostics.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let deps = self.dependencies();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.boxes.len()];
        let mut stack: Vec<usize> = Vec::new();
        fn visit(
            b: usize,
            deps: &[Vec<usize>],
            state: &mut [u8],
            stack: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            state[b] = 1;
            stack.push(b);
            for &d in &deps[b] {
                if state[d] == 1 {
                    let start = stack.iter().position(|&x| x == d).unwrap();
                    return Some(stack[start..].to_vec());
                }
                if state[d] == 0 {
                    if let Some(c) = visit(d, deps, state, stack) {
                        return Some(c);
                    }
                }
            }
            stack.pop();
            state[b] = 2;
            None
        }
        for b in 0..self.boxes.len() {
            if state[b] == 0 {
                if let Some(boxes) = visit(b, &deps, &mut state, &mut stack) {
                    // boxes[i] depends on boxes[i + 1]; pick a wire for each link.
                    let mut wires = Vec::new();
                    for i in 0..boxes.len() {
                        let consumer = &self.boxes[boxes[i]];
                        let producer = &self.boxes[boxes[(i + 1) % boxes.len()]];
                        if let Some(&w) = consumer
                            .inputs
                            .iter()
                            .find(|w| producer.outputs.contains(w))
                        {
                            wires.push(w);
                        }
                    }
                    wires.reverse();
                    return Some(wires);
                }
            }
        }
        None
    }

    /// Removes the given boxes and wires. Returns the new graph and the map
    /// from old wire positions to new ones. Boxes that are kept must not
    /// reference removed wires.
    pub(crate) fn without(&self, boxes: &[bool], wires: &[bool]) -> (Self, Vec<Option<usize>>) {
        let mut remap = vec![None; self.wires.len()];
        let mut kept = Vec::new();
        for (i, w) in self.wires.iter().enumerate() {
            if !wires[i] {
                remap[i] = Some(kept.len());
                kept.push(w.clone());
            }
        }
        let new_boxes = self
            .boxes
            .iter()
            .enumerate()
            .filter(|(i, _)| !boxes[*i])
            .map(|(_, hb)| HyperBox {
                id: hb.id.clone(),
                label: hb.label.clone(),
                inputs: hb.inputs.iter().map(|&w| remap[w].expect("kept box uses removed wire")).collect(),
                outputs: hb.outputs.iter().map(|&w| remap[w].expect("kept box uses removed wire")).collect(),
            })
            .collect();
        (LabeledHypergraph::new(kept, new_boxes), remap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wire(id: &str) -> Wire {
        Wire {
            id: id.into(),
            sort: "A".into(),
        }
    }

    fn hb(id: &str, inputs: &[usize], outputs: &[usize]) -> HyperBox {
        HyperBox {
            id: id.into(),
            label: "h".into(),
            inputs: inputs.to_vec(),
            outputs: outputs.to_vec(),
        }
    }

    #[test]
    fn incidence_counts_multiplicities() {
        assert_eq!(LabeledHypergraph::default().incidence_counts(), IncidenceCounts::default());
        let g = LabeledHypergraph::new(vec![wire("w"), wire("v"), wire("u")], vec![hb("b", &[0, 0, 1], &[2])]);
        let c = g.incidence_counts();
        assert_eq!(c.inputs(0, 0), 2);
        assert_eq!(c.inputs(0, 1), 1);
        assert_eq!(c.inputs(0, 2), 0);
        assert_eq!(c.outputs(0, 2), 1);
    }

    #[test]
    fn acyclicity() {
        let g = LabeledHypergraph::new(vec![wire("w")], vec![]);
        assert!(g.is_acyclic());
        let loop_ = LabeledHypergraph::new(vec![wire("w")], vec![hb("b", &[0], &[0])]);
        assert!(!loop_.is_acyclic());
        assert_eq!(loop_.find_cycle(), Some(vec![0]));
        assert!(matches!(loop_.topological_box_order(), Err(CycleError { .. })));
    }

    #[test]
    fn topological_order_is_stable() {
        assert_eq!(LabeledHypergraph::default().topological_box_order().unwrap(), Vec::<usize>::new());
        // h consumes what s produces, even though h is stored first.
        let g = LabeledHypergraph::new(vec![wire("w"), wire("v")], vec![hb("h", &[0], &[1]), hb("s", &[], &[0])]);
        assert_eq!(g.topological_box_order().unwrap(), vec![1, 0]);
        let indep = LabeledHypergraph::new(vec![wire("w"), wire("v")], vec![hb("a", &[], &[0]), hb("b", &[], &[1])]);
        assert_eq!(indep.topological_box_order().unwrap(), vec![0, 1]);
    }

    #[test]
    fn two_box_cycle_is_reported() {
        let g = LabeledHypergraph::new(vec![wire("w"), wire("v")], vec![hb("a", &[0], &[1]), hb("b", &[1], &[0])]);
        let cycle = g.find_cycle().unwrap();
        assert_eq!(cycle.len(), 2);
    }
}
