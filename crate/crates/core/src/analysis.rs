//! Complexity, pieces, and piece-stripping decompositions.
//!
//! A diagram that is not a permutation always has a *piece*: a final wire
//! that is discarded, a final wire that reaches two output positions, or a
//! box whose outputs all go straight to distinct output positions. Stripping
//! a piece writes the diagram as `rest ; tail` where `rest` has complexity
//! one less and `tail` is a single discard, copy, or box surrounded by
//! identities and permutations. Repeating this ends in a permutation.

use std::fmt;

use crate::diagram::{compose, tensor, Diagram};
use crate::error::DiagramError;

/// Box count plus, over all wires, how far the number of consumers (box
/// inputs and output positions) is from one.
pub fn complexity(d: &Diagram) -> usize {
    let consumers = d.graph().consumer_counts();
    let fibers = d.q_fibers();
    d.box_count()
        + consumers
            .iter()
            .zip(&fibers)
            .map(|(&c, f)| (c + f.len()).abs_diff(1))
            .sum::<usize>()
}

/// No boxes and both legs bijective.
pub fn is_permutation(d: &Diagram) -> bool {
    d.box_count() == 0 && is_bijection(d.p(), d.wire_count()) && is_bijection(d.q(), d.wire_count())
}

pub(crate) fn is_bijection(xs: &[usize], n: usize) -> bool {
    if xs.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    xs.iter().all(|&w| !std::mem::replace(&mut seen[w], true))
}

/// For a permutation diagram, output position `j` carries input position
/// `perm[j]`.
pub fn permutation_of(d: &Diagram) -> Option<Vec<usize>> {
    if !is_permutation(d) {
        return None;
    }
    let inv = d.p_inverse();
    d.q().iter().map(|&w| inv[w]).collect()
}

/// A strippable trailing fragment. Indices refer to the diagram's storage
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    /// A final wire no output position reads.
    FinalDiscard { wire: usize },
    /// A final wire read by output positions `first < second`.
    FinalCopy { wire: usize, first: usize, second: usize },
    /// A box whose output wires are final and each read exactly once.
    FinalBox { box_index: usize },
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::FinalDiscard { wire } => write!(f, "final discard of wire #{wire}"),
            Piece::FinalCopy { wire, first, second } => {
                write!(f, "final copy of wire #{wire} to outputs {first},{second}")
            }
            Piece::FinalBox { box_index } => write!(f, "final box #{box_index}"),
        }
    }
}

/// The single structural or generating morphism in a tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gamma {
    Discard(String),
    Copy(String),
    Box(String),
}

/// `tail = before ; (id_prefix ⊗ gamma) ; after`, with both permutations in
/// the "output `j` reads input `perm[j]`" convention. `before` acts on the
/// codomain of `rest`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailFactors {
    pub before: Vec<usize>,
    pub prefix: Vec<String>,
    pub gamma: Gamma,
    pub after: Vec<usize>,
}

/// The result of stripping one piece: `diagram ≅ rest ; tail`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strip {
    pub piece: Piece,
    pub rest: Diagram,
    pub tail: Diagram,
    pub factors: TailFactors,
}

/// Every piece of `d`, grouped by kind (discards, copies, boxes) and in
/// storage order within each kind.
pub fn all_pieces(d: &Diagram) -> Vec<Piece> {
    let consumers = d.graph().consumer_counts();
    let fibers = d.q_fibers();
    let mut discards = Vec::new();
    let mut copies = Vec::new();
    for w in 0..d.wire_count() {
        if consumers[w] != 0 {
            continue;
        }
        let fiber = &fibers[w];
        if fiber.is_empty() {
            discards.push(Piece::FinalDiscard { wire: w });
        }
        for (a, &first) in fiber.iter().enumerate() {
            for &second in &fiber[a + 1..] {
                copies.push(Piece::FinalCopy { wire: w, first, second });
            }
        }
    }
    let boxes = (0..d.box_count())
        .filter(|&b| is_final_box(d, b, &consumers, &fibers))
        .map(|b| Piece::FinalBox { box_index: b });
    discards.into_iter().chain(copies).chain(boxes).collect()
}

fn is_final_box(d: &Diagram, b: usize, consumers: &[usize], fibers: &[Vec<usize>]) -> bool {
    d.graph().boxes[b]
        .outputs
        .iter()
        .all(|&w| consumers[w] == 0 && fibers[w].len() == 1)
}

/// The piece chosen by the fixed priority: discards, then copies (least
/// position pair), then boxes; lower storage index first within a kind.
/// `None` exactly when `d` is a permutation.
pub fn find_piece(d: &Diagram) -> Option<Piece> {
    // all_pieces already lists candidates in priority order
    all_pieces(d).into_iter().next()
}

pub fn is_valid_piece(d: &Diagram, piece: &Piece) -> bool {
    let consumers = d.graph().consumer_counts();
    let fibers = d.q_fibers();
    match *piece {
        Piece::FinalDiscard { wire } => wire < d.wire_count() && consumers[wire] == 0 && fibers[wire].is_empty(),
        Piece::FinalCopy { wire, first, second } => {
            wire < d.wire_count()
                && consumers[wire] == 0
                && first < second
                && second < d.q().len()
                && d.q()[first] == wire
                && d.q()[second] == wire
        }
        Piece::FinalBox { box_index } => box_index < d.box_count() && is_final_box(d, box_index, &consumers, &fibers),
    }
}

/// Writes `d` as `rest ; tail` by removing `piece`.
pub fn strip_piece(d: &Diagram, piece: &Piece) -> Result<Strip, DiagramError> {
    if !is_valid_piece(d, piece) {
        return Err(DiagramError::InvalidPiece(piece.to_string()));
    }
    let sort_of = |w: usize| d.graph().wires[w].sort.clone();
    let n = d.q().len();
    let (rest, factors) = match *piece {
        Piece::FinalDiscard { wire } => {
            let mut q = d.q().to_vec();
            q.push(wire);
            let rest = d.with_q(q);
            let factors = TailFactors {
                before: (0..=n).collect(),
                prefix: d.cod().to_vec(),
                gamma: Gamma::Discard(sort_of(wire)),
                after: (0..n).collect(),
            };
            (rest, factors)
        }
        Piece::FinalCopy { wire, first, second } => {
            let mut q = d.q().to_vec();
            q.remove(second);
            let rest = d.with_q(q);
            // move `first` to the end, copy it, then spread the two copies
            // back to positions `first` and `second`
            let before: Vec<usize> = (0..n - 1).filter(|&k| k != first).chain([first]).collect();
            let prefix = before[..n - 2].iter().map(|&k| rest.cod()[k].clone()).collect();
            let after = (0..n)
                .map(|k| match k {
                    k if k == first => n - 2,
                    k if k == second => n - 1,
                    k => k - usize::from(k > first) - usize::from(k > second),
                })
                .collect();
            let factors = TailFactors {
                before,
                prefix,
                gamma: Gamma::Copy(sort_of(wire)),
                after,
            };
            (rest, factors)
        }
        Piece::FinalBox { box_index } => {
            let g = d.graph();
            let hb = &g.boxes[box_index];
            let fibers = d.q_fibers();
            let targets: Vec<usize> = hb.outputs.iter().map(|&w| fibers[w][0]).collect();
            let mut drop_boxes = vec![false; g.boxes.len()];
            drop_boxes[box_index] = true;
            let mut drop_wires = vec![false; g.wires.len()];
            for &w in &hb.outputs {
                drop_wires[w] = true;
            }
            let (graph, remap) = g.without(&drop_boxes, &drop_wires);
            let kept: Vec<usize> = (0..n).filter(|k| !targets.contains(k)).collect();
            let q: Vec<usize> = kept
                .iter()
                .map(|&k| d.q()[k])
                .chain(hb.inputs.iter().copied())
                .map(|w| remap[w].expect("kept wire"))
                .collect();
            let cod = q.iter().map(|&w| graph.wires[w].sort.clone()).collect();
            let p = d.p().iter().map(|&w| remap[w].expect("input wire is kept")).collect();
            let rest = d.with_graph_and_legs(graph, p, q, cod);
            let l = targets.len();
            let after = (0..n)
                .map(|k| match targets.iter().position(|&t| t == k) {
                    Some(r) => n - l + r,
                    None => k - targets.iter().filter(|&&t| t < k).count(),
                })
                .collect();
            let factors = TailFactors {
                before: (0..rest.cod().len()).collect(),
                prefix: kept.iter().map(|&k| d.cod()[k].clone()).collect(),
                gamma: Gamma::Box(hb.label.clone()),
                after,
            };
            (rest, factors)
        }
    };
    let tail = tail_diagram(&rest, &factors)?;
    Ok(Strip {
        piece: *piece,
        rest,
        tail,
        factors,
    })
}

/// Builds `before ; (id ⊗ gamma) ; after` as a diagram.
fn tail_diagram(rest: &Diagram, f: &TailFactors) -> Result<Diagram, DiagramError> {
    let sig = rest.signature().clone();
    let before = Diagram::permutation(sig.clone(), rest.cod(), &f.before)?;
    let gamma = match &f.gamma {
        Gamma::Discard(s) => Diagram::discard(sig.clone(), &[s])?,
        Gamma::Copy(s) => Diagram::copy(sig.clone(), &[s])?,
        Gamma::Box(name) => Diagram::generator(sig.clone(), name)?,
    };
    let middle = tensor(&Diagram::identity(sig.clone(), &f.prefix)?, &gamma)?;
    let after = Diagram::permutation(sig, middle.cod(), &f.after)?;
    compose(&compose(&before, &middle)?, &after)
}

/// A full decomposition `d ≅ base ; steps[0].tail ; steps[1].tail ; ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Innermost step first, i.e. in the order the tails are applied.
    pub steps: Vec<Strip>,
    pub base: Diagram,
}

impl Decomposition {
    /// Composes the base with every tail, in order.
    pub fn recompose(&self) -> Result<Diagram, DiagramError> {
        self.steps
            .iter()
            .try_fold(self.base.clone(), |acc, s| compose(&acc, &s.tail))
    }
}

/// Strips pieces chosen by [`find_piece`] until a permutation remains.
pub fn decompose(d: &Diagram) -> Decomposition {
    decompose_with(d, |_, pieces| pieces[0])
}

/// Like [`decompose`], letting `choose` pick among all valid pieces at each
/// step (the slice is never empty).
pub fn decompose_with<F>(d: &Diagram, mut choose: F) -> Decomposition
where
    F: FnMut(&Diagram, &[Piece]) -> Piece,
{
    let mut steps = Vec::new();
    let mut current = d.clone();
    loop {
        let pieces = all_pieces(&current);
        if pieces.is_empty() {
            break;
        }
        let piece = choose(&current, &pieces);
        let strip = strip_piece(&current, &piece).expect("chosen piece is valid");
        current = strip.rest.clone();
        steps.push(strip);
    }
    steps.reverse();
    Decomposition { steps, base: current }
}
