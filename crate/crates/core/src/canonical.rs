//! Canonical labeling of diagrams, so that isomorphism of cospans over the
//! signature becomes equality of encodings.
//!
//! Wires and boxes are colored, the coloring is refined along the incidence
//! structure until stable, and any cell that is still not a singleton is
//! split by individualizing each of its members in turn. Every discrete
//! coloring obtained this way induces a relabeled diagram; the least one
//! wins. The search tree depends only on the isomorphism class, so the
//! result does too.

use serde_json::json;

use crate::diagram::Diagram;
use crate::error::DiagramError;
use crate::hypergraph::LabeledHypergraph;

/// A diagram relabeled into canonical order, with canonical ids
/// `w0, w1, ...` and `b0, b1, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub diagram: Diagram,
    /// Original wire position to canonical position.
    pub wire_map: Vec<usize>,
    /// Original box position to canonical position.
    pub box_map: Vec<usize>,
    encoding: String,
}

impl CanonicalForm {
    /// Deterministic text encoding; equal iff the diagrams are isomorphic.
    pub fn encoding(&self) -> &str {
        &self.encoding
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.encoding.as_bytes()
    }
}

pub fn canonical_form(d: &Diagram) -> CanonicalForm {
    let shape = Shape::new(d);
    let mut best: Option<(Code, Coloring)> = None;
    shape.search(shape.initial(), &mut best);
    let (_, coloring) = best.expect("search always reaches a leaf");
    let wire_map: Vec<usize> = coloring.wires.iter().map(|&c| c as usize).collect();
    let box_map: Vec<usize> = coloring.boxes.iter().map(|&c| c as usize).collect();
    let diagram = d.reindexed(&wire_map, &box_map).with_positional_ids();
    let encoding = encode(&diagram);
    CanonicalForm {
        diagram,
        wire_map,
        box_map,
        encoding,
    }
}

/// Whether two diagrams are isomorphic as cospans over the same signature.
pub fn iso_equal(a: &Diagram, b: &Diagram) -> Result<bool, DiagramError> {
    if !a.same_signature(b) {
        return Err(DiagramError::SignatureMismatch);
    }
    if a.dom() != b.dom()
        || a.cod() != b.cod()
        || a.wire_count() != b.wire_count()
        || a.box_count() != b.box_count()
    {
        return Ok(false);
    }
    Ok(canonical_form(a).encoding == canonical_form(b).encoding)
}

fn encode(d: &Diagram) -> String {
    let g = d.graph();
    let boxes: Vec<_> = g
        .boxes
        .iter()
        .map(|b| json!([b.label, b.inputs, b.outputs]))
        .collect();
    let wires: Vec<&str> = g.wires.iter().map(|w| w.sort.as_str()).collect();
    json!({
        "dom": d.dom(),
        "cod": d.cod(),
        "wires": wires,
        "boxes": boxes,
        "p": d.p(),
        "q": d.q(),
    })
    .to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Coloring {
    wires: Vec<u32>,
    boxes: Vec<u32>,
}

impl Coloring {
    fn cells(&self) -> (usize, usize) {
        (distinct(&self.wires), distinct(&self.boxes))
    }
}

fn distinct(xs: &[u32]) -> usize {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Replaces keys by their rank among the distinct keys.
fn rank(keys: &[Vec<u64>]) -> Vec<u32> {
    let mut sorted: Vec<&Vec<u64>> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).expect("key present") as u32)
        .collect()
}

/// The relabeled diagram a discrete coloring induces, as a comparable value.
#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Code {
    wires: Vec<usize>,
    boxes: Vec<(usize, Vec<u32>, Vec<u32>)>,
    p: Vec<u32>,
    q: Vec<u32>,
}

/// Incidence data extracted once per diagram.
struct Shape<'a> {
    graph: &'a LabeledHypergraph,
    p: &'a [usize],
    q: &'a [usize],
    wire_sort: Vec<usize>,
    box_label: Vec<usize>,
    producers: Vec<Vec<(usize, usize)>>,
    consumers: Vec<Vec<(usize, usize)>>,
}

impl<'a> Shape<'a> {
    fn new(d: &'a Diagram) -> Self {
        let g = d.graph();
        let sig = d.signature();
        let unknown_sort = sig.sorts().len();
        let unknown_box = sig.boxes().len();
        let mut producers = vec![Vec::new(); g.wires.len()];
        let mut consumers = vec![Vec::new(); g.wires.len()];
        for (b, hb) in g.boxes.iter().enumerate() {
            for (i, &w) in hb.inputs.iter().enumerate() {
                consumers[w].push((b, i));
            }
            for (j, &w) in hb.outputs.iter().enumerate() {
                producers[w].push((b, j));
            }
        }
        Shape {
            graph: g,
            p: d.p(),
            q: d.q(),
            wire_sort: g
                .wires
                .iter()
                .map(|w| sig.sort_index(&w.sort).unwrap_or(unknown_sort))
                .collect(),
            box_label: g
                .boxes
                .iter()
                .map(|b| sig.box_index(&b.label).unwrap_or(unknown_box))
                .collect(),
            producers,
            consumers,
        }
    }

    fn initial(&self) -> Coloring {
        let n = self.graph.wires.len();
        let mut keys: Vec<Vec<u64>> = (0..n).map(|w| vec![self.wire_sort[w] as u64]).collect();
        // Interface attachments anchor wires: record input and output
        // positions, each list prefixed by its length.
        let mut p_pos = vec![Vec::new(); n];
        for (i, &w) in self.p.iter().enumerate() {
            p_pos[w].push(i as u64);
        }
        let mut q_pos = vec![Vec::new(); n];
        for (j, &w) in self.q.iter().enumerate() {
            q_pos[w].push(j as u64);
        }
        for w in 0..n {
            keys[w].push(p_pos[w].len() as u64);
            keys[w].extend(&p_pos[w]);
            keys[w].push(q_pos[w].len() as u64);
            keys[w].extend(&q_pos[w]);
        }
        let box_keys: Vec<Vec<u64>> = self.box_label.iter().map(|&l| vec![l as u64]).collect();
        Coloring {
            wires: rank(&keys),
            boxes: rank(&box_keys),
        }
    }

    fn refine(&self, mut c: Coloring) -> Coloring {
        let mut cells = c.cells();
        loop {
            let box_keys: Vec<Vec<u64>> = self
                .graph
                .boxes
                .iter()
                .enumerate()
                .map(|(b, hb)| {
                    let mut k = vec![c.boxes[b] as u64];
                    k.extend(hb.inputs.iter().map(|&w| c.wires[w] as u64));
                    k.extend(hb.outputs.iter().map(|&w| c.wires[w] as u64));
                    k
                })
                .collect();
            let wire_keys: Vec<Vec<u64>> = (0..self.graph.wires.len())
                .map(|w| {
                    let mut k = vec![c.wires[w] as u64];
                    let mut prod: Vec<(u64, u64)> = self.producers[w]
                        .iter()
                        .map(|&(b, j)| (c.boxes[b] as u64, j as u64))
                        .collect();
                    prod.sort_unstable();
                    let mut cons: Vec<(u64, u64)> = self.consumers[w]
                        .iter()
                        .map(|&(b, i)| (c.boxes[b] as u64, i as u64))
                        .collect();
                    cons.sort_unstable();
                    k.push(prod.len() as u64);
                    k.extend(prod.iter().flat_map(|&(a, b)| [a, b]));
                    k.push(cons.len() as u64);
                    k.extend(cons.iter().flat_map(|&(a, b)| [a, b]));
                    k
                })
                .collect();
            c = Coloring {
                wires: rank(&wire_keys),
                boxes: rank(&box_keys),
            };
            let next = c.cells();
            if next == cells {
                return c;
            }
            cells = next;
        }
    }

    fn search(&self, c: Coloring, best: &mut Option<(Code, Coloring)>) {
        let c = self.refine(c);
        match target_cell(&c) {
            None => {
                let code = self.code(&c);
                if best.as_ref().is_none_or(|(b, _)| code < *b) {
                    *best = Some((code, c));
                }
            }
            Some((on_boxes, color)) => {
                let colors = if on_boxes { &c.boxes } else { &c.wires };
                let members: Vec<usize> = (0..colors.len()).filter(|&x| colors[x] == color).collect();
                for v in members {
                    self.search(individualize(&c, on_boxes, v), best);
                }
            }
        }
    }

    fn code(&self, c: &Coloring) -> Code {
        let mut wires = vec![0; c.wires.len()];
        for (w, &col) in c.wires.iter().enumerate() {
            wires[col as usize] = self.wire_sort[w];
        }
        let mut boxes = vec![(0, Vec::new(), Vec::new()); c.boxes.len()];
        for (b, hb) in self.graph.boxes.iter().enumerate() {
            boxes[c.boxes[b] as usize] = (
                self.box_label[b],
                hb.inputs.iter().map(|&w| c.wires[w]).collect(),
                hb.outputs.iter().map(|&w| c.wires[w]).collect(),
            );
        }
        Code {
            wires,
            boxes,
            p: self.p.iter().map(|&w| c.wires[w]).collect(),
            q: self.q.iter().map(|&w| c.wires[w]).collect(),
        }
    }
}

/// The first non-singleton cell: boxes before wires, smallest color first.
fn target_cell(c: &Coloring) -> Option<(bool, u32)> {
    fn first_shared(colors: &[u32]) -> Option<u32> {
        let mut counts = vec![0usize; colors.len()];
        for &x in colors {
            counts[x as usize] += 1;
        }
        counts.iter().position(|&n| n > 1).map(|x| x as u32)
    }
    first_shared(&c.boxes)
        .map(|x| (true, x))
        .or_else(|| first_shared(&c.wires).map(|x| (false, x)))
}

fn individualize(c: &Coloring, on_boxes: bool, v: usize) -> Coloring {
    let colors = if on_boxes { &c.boxes } else { &c.wires };
    let target = colors[v];
    let keys: Vec<Vec<u64>> = colors
        .iter()
        .enumerate()
        .map(|(x, &col)| vec![col as u64, u64::from(col == target && x != v)])
        .collect();
    let split = rank(&keys);
    if on_boxes {
        Coloring {
            wires: c.wires.clone(),
            boxes: split,
        }
    } else {
        Coloring {
            wires: split,
            boxes: c.boxes.clone(),
        }
    }
}
