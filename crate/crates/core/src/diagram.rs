//! String diagrams as left-monogamous acyclic cospans `m -> G <- n` of
//! labeled hypergraphs.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{DiagramError, Leg, Violation};
use crate::hypergraph::{HyperBox, LabeledHypergraph, Wire};
use crate::signature::Signature;

/// A cospan of labeled hypergraphs over a signature.
///
/// `p` attaches the input interface positions to apex wires and `q` does the
/// same for output positions. `dom` and `cod` are the sort words of the two
/// interfaces. A `Diagram` always has in-range indices; whether it satisfies
/// the string-diagram conditions is reported by [`Diagram::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    signature: Arc<Signature>,
    dom: Vec<String>,
    cod: Vec<String>,
    graph: LabeledHypergraph,
    p: Vec<usize>,
    q: Vec<usize>,
}

/// The structural diagrams that exist over every signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structural {
    Identity(Vec<String>),
    /// Output position `j` carries input position `perm[j]`.
    Permutation(Vec<String>, Vec<usize>),
    Copy(Vec<String>),
    Discard(Vec<String>),
    Generator(String),
}

impl Diagram {
    /// Assembles a diagram from its parts, checking only that every wire
    /// index is in range.
    pub fn from_parts(
        signature: Arc<Signature>,
        dom: Vec<String>,
        cod: Vec<String>,
        graph: LabeledHypergraph,
        p: Vec<usize>,
        q: Vec<usize>,
    ) -> Result<Self, DiagramError> {
        let n = graph.wires.len();
        let mut bad = Vec::new();
        for (leg, xs) in [(Leg::Input, &p), (Leg::Output, &q)] {
            for (i, &w) in xs.iter().enumerate() {
                if w >= n {
                    bad.push(Violation::UnknownWire {
                        context: format!("leg {leg} position {i}"),
                        wire: format!("#{w}"),
                    });
                }
            }
        }
        for hb in &graph.boxes {
            for &w in hb.inputs.iter().chain(&hb.outputs) {
                if w >= n {
                    bad.push(Violation::UnknownWire {
                        context: format!("box `{}`", hb.id),
                        wire: format!("#{w}"),
                    });
                }
            }
        }
        if !bad.is_empty() {
            return Err(DiagramError::Invalid(bad));
        }
        Ok(Diagram {
            signature,
            dom,
            cod,
            graph,
            p,
            q,
        })
    }

    /// Like [`Diagram::from_parts`] but also rejects diagrams that fail
    /// [`Diagram::validate`].
    pub fn new(
        signature: Arc<Signature>,
        dom: Vec<String>,
        cod: Vec<String>,
        graph: LabeledHypergraph,
        p: Vec<usize>,
        q: Vec<usize>,
    ) -> Result<Self, DiagramError> {
        let d = Diagram::from_parts(signature, dom, cod, graph, p, q)?;
        let violations = d.validate();
        if violations.is_empty() {
            Ok(d)
        } else {
            Err(DiagramError::Invalid(violations))
        }
    }

    pub(crate) fn from_parts_unchecked(
        signature: Arc<Signature>,
        dom: Vec<String>,
        cod: Vec<String>,
        graph: LabeledHypergraph,
        p: Vec<usize>,
        q: Vec<usize>,
    ) -> Self {
        debug_assert!(p.iter().chain(&q).all(|&w| w < graph.wires.len()));
        Diagram {
            signature,
            dom,
            cod,
            graph,
            p,
            q,
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn dom(&self) -> &[String] {
        &self.dom
    }

    pub fn cod(&self) -> &[String] {
        &self.cod
    }

    pub fn graph(&self) -> &LabeledHypergraph {
        &self.graph
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }

    pub fn q(&self) -> &[usize] {
        &self.q
    }

    pub fn wire_count(&self) -> usize {
        self.graph.wires.len()
    }

    pub fn box_count(&self) -> usize {
        self.graph.boxes.len()
    }

    pub fn same_signature(&self, other: &Diagram) -> bool {
        Arc::ptr_eq(&self.signature, &other.signature) || self.signature == other.signature
    }

    /// For every wire, the output positions that `q` sends to it.
    pub fn q_fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.wire_count()];
        for (j, &w) in self.q.iter().enumerate() {
            fibers[w].push(j);
        }
        fibers
    }

    /// For every wire, the input position that `p` sends to it, if any.
    /// Assumes `p` is injective.
    pub fn p_inverse(&self) -> Vec<Option<usize>> {
        let mut inv = vec![None; self.wire_count()];
        for (i, &w) in self.p.iter().enumerate() {
            inv[w] = Some(i);
        }
        inv
    }

    /// Every violated string-diagram condition, in a fixed order. Empty iff
    /// the cospan is a valid string diagram.
    pub fn validate(&self) -> Vec<Violation> {
        let sig = &self.signature;
        let g = &self.graph;
        let mut out = Vec::new();

        let mut seen = HashSet::new();
        for w in &g.wires {
            if !seen.insert(w.id.as_str()) {
                out.push(Violation::DuplicateWireId(w.id.clone()));
            }
        }
        let mut seen = HashSet::new();
        for b in &g.boxes {
            if !seen.insert(b.id.as_str()) {
                out.push(Violation::DuplicateBoxId(b.id.clone()));
            }
        }
        for w in &g.wires {
            if !sig.has_sort(&w.sort) {
                out.push(Violation::UnknownSort {
                    wire: w.id.clone(),
                    sort: w.sort.clone(),
                });
            }
        }

        for b in &g.boxes {
            let Some(bs) = sig.box_signature(&b.label) else {
                out.push(Violation::UnknownBox {
                    box_id: b.id.clone(),
                    label: b.label.clone(),
                });
                continue;
            };
            if bs.inputs.len() != b.inputs.len() || bs.outputs.len() != b.outputs.len() {
                out.push(Violation::ArityMismatch {
                    box_id: b.id.clone(),
                    expected_inputs: bs.inputs.len(),
                    expected_outputs: bs.outputs.len(),
                    found_inputs: b.inputs.len(),
                    found_outputs: b.outputs.len(),
                });
                continue;
            }
            let ports = b
                .inputs
                .iter()
                .zip(&bs.inputs)
                .enumerate()
                .map(|(i, x)| (format!("in{i}"), x))
                .chain(
                    b.outputs
                        .iter()
                        .zip(&bs.outputs)
                        .enumerate()
                        .map(|(i, x)| (format!("out{i}"), x)),
                );
            for (port, (&w, expected)) in ports {
                if g.wires[w].sort != *expected {
                    out.push(Violation::PortSortMismatch {
                        box_id: b.id.clone(),
                        port,
                        expected: expected.clone(),
                        found: g.wires[w].sort.clone(),
                    });
                }
            }
        }

        for (leg, word, xs) in [(Leg::Input, &self.dom, &self.p), (Leg::Output, &self.cod, &self.q)] {
            if word.len() != xs.len() {
                out.push(Violation::LegLengthMismatch {
                    leg,
                    expected: word.len(),
                    found: xs.len(),
                });
            }
            for (position, (&w, expected)) in xs.iter().zip(word.iter()).enumerate() {
                if g.wires[w].sort != *expected {
                    out.push(Violation::LegSortMismatch {
                        leg,
                        position,
                        expected: expected.clone(),
                        found: g.wires[w].sort.clone(),
                    });
                }
            }
        }

        let mut sources = g.producer_counts();
        for &w in &self.p {
            sources[w] += 1;
        }
        for (w, &n) in sources.iter().enumerate() {
            if n != 1 {
                out.push(Violation::LeftMonogamy {
                    wire: g.wires[w].id.clone(),
                    sources: n,
                });
            }
        }

        if let Some(cycle) = g.find_cycle() {
            out.push(Violation::Acyclicity {
                wires: cycle.iter().map(|&w| g.wires[w].id.clone()).collect(),
            });
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    // ---- structural diagrams ----

    /// The empty diagram `0 -> 0`, the monoidal unit's identity.
    pub fn empty(signature: Arc<Signature>) -> Self {
        Diagram::from_parts_unchecked(signature, vec![], vec![], LabeledHypergraph::default(), vec![], vec![])
    }

    pub fn structural(signature: Arc<Signature>, kind: Structural) -> Result<Self, DiagramError> {
        match kind {
            Structural::Identity(w) => Diagram::identity(signature, &w),
            Structural::Permutation(w, perm) => Diagram::permutation(signature, &w, &perm),
            Structural::Copy(w) => Diagram::copy(signature, &w),
            Structural::Discard(w) => Diagram::discard(signature, &w),
            Structural::Generator(b) => Diagram::generator(signature, &b),
        }
    }

    /// The pure-circuitry diagram with one wire per domain position, whose
    /// output position `j` reads domain position `map[j]`.
    pub fn wiring<S: AsRef<str>>(
        signature: Arc<Signature>,
        dom: &[S],
        map: &[usize],
    ) -> Result<Self, DiagramError> {
        signature.check_word(dom)?;
        if let Some(&bad) = map.iter().find(|&&i| i >= dom.len()) {
            return Err(DiagramError::InvalidPiece(format!(
                "wiring reads position {bad} of a word of length {}",
                dom.len()
            )));
        }
        let dom: Vec<String> = dom.iter().map(|s| s.as_ref().to_string()).collect();
        let cod = map.iter().map(|&i| dom[i].clone()).collect();
        let graph = LabeledHypergraph::discrete(&dom);
        let p = (0..dom.len()).collect();
        Ok(Diagram::from_parts_unchecked(signature, dom, cod, graph, p, map.to_vec()))
    }

    pub fn identity<S: AsRef<str>>(signature: Arc<Signature>, word: &[S]) -> Result<Self, DiagramError> {
        let map: Vec<usize> = (0..word.len()).collect();
        Diagram::wiring(signature, word, &map)
    }

    pub fn permutation<S: AsRef<str>>(
        signature: Arc<Signature>,
        word: &[S],
        perm: &[usize],
    ) -> Result<Self, DiagramError> {
        let mut seen = vec![false; word.len()];
        let ok = perm.len() == word.len()
            && perm.iter().all(|&i| i < word.len() && !std::mem::replace(&mut seen[i], true));
        if !ok {
            return Err(DiagramError::BadPermutation(perm.to_vec()));
        }
        Diagram::wiring(signature, word, perm)
    }

    /// Exchanges the blocks `left` and `right`.
    pub fn swap<S: AsRef<str>>(
        signature: Arc<Signature>,
        left: &[S],
        right: &[S],
    ) -> Result<Self, DiagramError> {
        let (m, n) = (left.len(), right.len());
        let word: Vec<&str> = left.iter().chain(right).map(|s| s.as_ref()).collect();
        let perm: Vec<usize> = (m..m + n).chain(0..m).collect();
        Diagram::permutation(signature, &word, &perm)
    }

    /// `n -> n + n` with right leg `<id, id>`.
    pub fn copy<S: AsRef<str>>(signature: Arc<Signature>, word: &[S]) -> Result<Self, DiagramError> {
        let map: Vec<usize> = (0..word.len()).chain(0..word.len()).collect();
        Diagram::wiring(signature, word, &map)
    }

    /// `n -> 0`.
    pub fn discard<S: AsRef<str>>(signature: Arc<Signature>, word: &[S]) -> Result<Self, DiagramError> {
        Diagram::wiring(signature, word, &[])
    }

    /// The diagram containing just one generating box, with its input and
    /// output wires attached to the interfaces in order.
    pub fn generator(signature: Arc<Signature>, name: &str) -> Result<Self, DiagramError> {
        let bs = signature
            .box_signature(name)
            .ok_or_else(|| DiagramError::UnknownBox(name.to_string()))?
            .clone();
        let (k, l) = (bs.arity(), bs.coarity());
        let wires = bs
            .inputs
            .iter()
            .chain(&bs.outputs)
            .enumerate()
            .map(|(i, s)| Wire {
                id: format!("w{i}"),
                sort: s.clone(),
            })
            .collect();
        let hb = HyperBox {
            id: "b0".into(),
            label: name.to_string(),
            inputs: (0..k).collect(),
            outputs: (k..k + l).collect(),
        };
        Ok(Diagram::from_parts_unchecked(
            signature,
            bs.inputs.clone(),
            bs.outputs.clone(),
            LabeledHypergraph::new(wires, vec![hb]),
            (0..k).collect(),
            (k..k + l).collect(),
        ))
    }

    // ---- composition ----

    /// Sequential composition `self ; second` by pushout.
    pub fn then(&self, second: &Diagram) -> Result<Diagram, DiagramError> {
        compose(self, second)
    }

    pub fn tensor(&self, other: &Diagram) -> Result<Diagram, DiagramError> {
        tensor(self, other)
    }

    /// Replaces every wire and box id with `w0, w1, ...` and `b0, b1, ...`
    /// in storage order.
    pub fn with_positional_ids(&self) -> Diagram {
        let mut d = self.clone();
        for (i, w) in d.graph.wires.iter_mut().enumerate() {
            w.id = format!("w{i}");
        }
        for (i, b) in d.graph.boxes.iter_mut().enumerate() {
            b.id = format!("b{i}");
        }
        d
    }

    /// Reorders storage: wire `i` moves to `wire_order[i]`, box `b` to
    /// `box_order[b]`. Ids are carried along.
    pub fn reindexed(&self, wire_order: &[usize], box_order: &[usize]) -> Diagram {
        let g = &self.graph;
        let mut wires = vec![None; g.wires.len()];
        for (i, w) in g.wires.iter().enumerate() {
            wires[wire_order[i]] = Some(w.clone());
        }
        let mut boxes = vec![None; g.boxes.len()];
        for (b, hb) in g.boxes.iter().enumerate() {
            boxes[box_order[b]] = Some(HyperBox {
                id: hb.id.clone(),
                label: hb.label.clone(),
                inputs: hb.inputs.iter().map(|&w| wire_order[w]).collect(),
                outputs: hb.outputs.iter().map(|&w| wire_order[w]).collect(),
            });
        }
        Diagram::from_parts_unchecked(
            self.signature.clone(),
            self.dom.clone(),
            self.cod.clone(),
            LabeledHypergraph::new(
                wires.into_iter().map(|w| w.expect("wire order is a bijection")).collect(),
                boxes.into_iter().map(|b| b.expect("box order is a bijection")).collect(),
            ),
            self.p.iter().map(|&w| wire_order[w]).collect(),
            self.q.iter().map(|&w| wire_order[w]).collect(),
        )
    }

    pub(crate) fn with_graph_and_legs(&self, graph: LabeledHypergraph, p: Vec<usize>, q: Vec<usize>, cod: Vec<String>) -> Diagram {
        Diagram::from_parts_unchecked(self.signature.clone(), self.dom.clone(), cod, graph, p, q)
    }

    /// The same apex with a new right leg; the codomain is read off the wires.
    pub(crate) fn with_q(&self, q: Vec<usize>) -> Diagram {
        let cod = q.iter().map(|&w| self.graph.wires[w].sort.clone()).collect();
        self.with_graph_and_legs(self.graph.clone(), self.p.clone(), q, cod)
    }
}

/// Hands out ids that are not yet in use, keeping a preferred id when free.
struct FreshIds {
    used: HashSet<String>,
    prefix: &'static str,
    next: usize,
}

impl FreshIds {
    fn new<'a>(prefix: &'static str, ids: impl Iterator<Item = &'a str>) -> Self {
        FreshIds {
            used: ids.map(str::to_string).collect(),
            prefix,
            next: 0,
        }
    }

    fn take(&mut self, preferred: &str) -> String {
        if self.used.insert(preferred.to_string()) {
            return preferred.to_string();
        }
        loop {
            let id = format!("{}{}", self.prefix, self.next);
            self.next += 1;
            if self.used.insert(id.clone()) {
                return id;
            }
        }
    }
}

/// Appends the apex of `right` to `left`'s apex. Wires of `right` listed in
/// `glue` are identified with the given wires of `left` instead of copied.
/// Returns the merged graph and the position of every `right` wire in it.
fn merge_apexes(
    left: &LabeledHypergraph,
    right: &LabeledHypergraph,
    glue: &[(usize, usize)],
) -> (LabeledHypergraph, Vec<usize>) {
    let mut wires = left.wires.clone();
    let mut wire_ids = FreshIds::new("w", left.wires.iter().map(|w| w.id.as_str()));
    let mut map = vec![usize::MAX; right.wires.len()];
    for &(r, l) in glue {
        map[r] = l;
    }
    for (r, w) in right.wires.iter().enumerate() {
        if map[r] == usize::MAX {
            map[r] = wires.len();
            wires.push(Wire {
                id: wire_ids.take(&w.id),
                sort: w.sort.clone(),
            });
        }
    }
    let mut boxes = left.boxes.clone();
    let mut box_ids = FreshIds::new("b", left.boxes.iter().map(|b| b.id.as_str()));
    for hb in &right.boxes {
        boxes.push(HyperBox {
            id: box_ids.take(&hb.id),
            label: hb.label.clone(),
            inputs: hb.inputs.iter().map(|&w| map[w]).collect(),
            outputs: hb.outputs.iter().map(|&w| map[w]).collect(),
        });
    }
    (LabeledHypergraph::new(wires, boxes), map)
}

/// Pushout composition of `first: l -> m` and `second: m -> n`.
///
/// The apex is `first`'s apex followed by the wires and boxes of `second`,
/// where each wire in the image of `second`'s left leg is glued to the wire
/// `first`'s right leg attaches at the same position. Ids of `first` are
/// kept; ids of `second` are kept unless they collide.
pub fn compose(first: &Diagram, second: &Diagram) -> Result<Diagram, DiagramError> {
    if !first.same_signature(second) {
        return Err(DiagramError::SignatureMismatch);
    }
    if first.cod != second.dom {
        return Err(DiagramError::DomainMismatch {
            left: first.cod.clone(),
            right: second.dom.clone(),
        });
    }
    let glue: Vec<(usize, usize)> = second.p.iter().zip(&first.q).map(|(&r, &l)| (r, l)).collect();
    let (graph, map) = merge_apexes(&first.graph, &second.graph, &glue);
    Ok(Diagram::from_parts_unchecked(
        first.signature.clone(),
        first.dom.clone(),
        second.cod.clone(),
        graph,
        first.p.clone(),
        second.q.iter().map(|&w| map[w]).collect(),
    ))
}

/// Parallel composition: disjoint union of apexes, concatenated legs.
pub fn tensor(a: &Diagram, b: &Diagram) -> Result<Diagram, DiagramError> {
    if !a.same_signature(b) {
        return Err(DiagramError::SignatureMismatch);
    }
    let (graph, map) = merge_apexes(&a.graph, &b.graph, &[]);
    let cat = |x: &[String], y: &[String]| x.iter().chain(y).cloned().collect::<Vec<_>>();
    Ok(Diagram::from_parts_unchecked(
        a.signature.clone(),
        cat(&a.dom, &b.dom),
        cat(&a.cod, &b.cod),
        graph,
        a.p.iter().copied().chain(b.p.iter().map(|&w| map[w])).collect(),
        a.q.iter().copied().chain(b.q.iter().map(|&w| map[w])).collect(),
    ))
}

/// Tensor of a whole list, left to right. The empty list gives the empty
/// diagram.
pub fn tensor_all(signature: &Arc<Signature>, parts: &[Diagram]) -> Result<Diagram, DiagramError> {
    parts
        .iter()
        .try_fold(Diagram::empty(signature.clone()), |acc, d| tensor(&acc, d))
}
