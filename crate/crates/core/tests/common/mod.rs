//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's canonical labeling, decomposition, or evaluator.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use gsd_core::analysis::{all_pieces, strip_piece, Decomposition, Strip};
use gsd_core::eval::{decode, encode, states, Kernel};
use gsd_core::{BoxSignature, Diagram, HyperBox, Interpretation, LabeledHypergraph, Signature, Wire};

pub const TOL: f64 = 1e-9;

/// Sorts `A`, `B`; boxes `m: A -> B`, `n: B -> A`, `j: A A -> B`, `k: () -> A`.
pub fn two_sort_signature() -> Signature {
    Signature::build(
        &["A", "B"],
        vec![
            BoxSignature::new("m", &["A"], &["B"]),
            BoxSignature::new("n", &["B"], &["A"]),
            BoxSignature::new("j", &["A", "A"], &["B"]),
            BoxSignature::new("k", &[], &["A"]),
        ],
    )
    .unwrap()
}

/// A signature with a root, a binary mechanism, and a fork, over carriers
/// of different sizes.
pub fn causal_signature() -> Signature {
    Signature::build(
        &["A", "B"],
        vec![
            BoxSignature::new("r", &[], &["A"]),
            BoxSignature::new("u", &["A"], &["B"]),
            BoxSignature::new("v", &["A", "B"], &["A"]),
            BoxSignature::new("w", &["B"], &["A", "B"]),
        ],
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// isomorphism by exhaustive search

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Tries every pair of wire and box bijections.
pub fn brute_force_iso(a: &Diagram, b: &Diagram) -> bool {
    if a.dom() != b.dom()
        || a.cod() != b.cod()
        || a.wire_count() != b.wire_count()
        || a.box_count() != b.box_count()
    {
        return false;
    }
    let (ga, gb) = (a.graph(), b.graph());
    let box_perms = permutations(a.box_count());
    for sigma in permutations(a.wire_count()) {
        if (0..sigma.len()).any(|w| ga.wires[w].sort != gb.wires[sigma[w]].sort) {
            continue;
        }
        let maps = |xs: &[usize], ys: &[usize]| xs.len() == ys.len() && xs.iter().zip(ys).all(|(&x, &y)| sigma[x] == y);
        if !maps(a.p(), b.p()) || !maps(a.q(), b.q()) {
            continue;
        }
        for tau in &box_perms {
            let ok = ga.boxes.iter().enumerate().all(|(i, hb)| {
                let other = &gb.boxes[tau[i]];
                hb.label == other.label && maps(&hb.inputs, &other.inputs) && maps(&hb.outputs, &other.outputs)
            });
            if ok {
                return true;
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// cycles by walking alternating wire/box paths

/// Whether some wire reaches itself through a box it feeds and a box output.
pub fn brute_force_has_cycle(g: &LabeledHypergraph) -> bool {
    let n = g.wires.len();
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        while let Some(w) = stack.pop() {
            for hb in &g.boxes {
                if hb.inputs.contains(&w) {
                    for &o in &hb.outputs {
                        if o == start {
                            return true;
                        }
                        if !seen[o] {
                            seen[o] = true;
                            stack.push(o);
                        }
                    }
                }
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// exhaustive enumeration

/// Every diagram over `sig` with domain length at most `max_dom`, at most
/// `max_boxes` boxes added in a producers-first order, at most `max_wires`
/// wires, and codomain length at most `max_cod`. Box inputs range over all
/// earlier wires, so every isomorphism class within the bounds occurs.
pub fn enumerate_diagrams(sig: &Arc<Signature>, max_dom: usize, max_boxes: usize, max_wires: usize, max_cod: usize) -> Vec<Diagram> {
    let mut out = Vec::new();
    for dom in words(sig.sorts(), max_dom) {
        let wires: Vec<Wire> = dom
            .iter()
            .enumerate()
            .map(|(i, s)| Wire {
                id: format!("w{i}"),
                sort: s.clone(),
            })
            .collect();
        grow(sig, &dom, wires, Vec::new(), max_boxes, max_wires, max_cod, &mut out);
    }
    out
}

fn words(sorts: &[String], max: usize) -> Vec<Vec<String>> {
    let mut all = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<String>| {
                sorts.iter().map(move |s| {
                    let mut x = w.clone();
                    x.push(s.clone());
                    x
                })
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut x = t.clone();
                    x.push(i);
                    x
                })
            })
            .collect();
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn grow(
    sig: &Arc<Signature>,
    dom: &[String],
    wires: Vec<Wire>,
    boxes: Vec<HyperBox>,
    boxes_left: usize,
    max_wires: usize,
    max_cod: usize,
    out: &mut Vec<Diagram>,
) {
    // close off with every codomain
    for len in 0..=max_cod {
        for q in tuples(wires.len(), len) {
            let cod = q.iter().map(|&w| wires[w].sort.clone()).collect();
            let d = Diagram::new(
                sig.clone(),
                dom.to_vec(),
                cod,
                LabeledHypergraph::new(wires.clone(), boxes.clone()),
                (0..dom.len()).collect(),
                q,
            )
            .expect("enumerated diagrams are valid");
            out.push(d);
        }
    }
    if boxes_left == 0 {
        return;
    }
    for bs in sig.boxes() {
        if wires.len() + bs.outputs.len() > max_wires {
            continue;
        }
        for ins in tuples(wires.len(), bs.inputs.len()) {
            if ins.iter().zip(&bs.inputs).any(|(&w, s)| wires[w].sort != *s) {
                continue;
            }
            let mut w2 = wires.clone();
            let outs: Vec<usize> = bs
                .outputs
                .iter()
                .map(|s| {
                    w2.push(Wire {
                        id: format!("w{}", w2.len()),
                        sort: s.clone(),
                    });
                    w2.len() - 1
                })
                .collect();
            let mut b2 = boxes.clone();
            b2.push(HyperBox {
                id: format!("b{}", b2.len()),
                label: bs.name.clone(),
                inputs: ins,
                outputs: outs,
            });
            grow(sig, dom, w2, b2, boxes_left - 1, max_wires, max_cod, out);
        }
    }
}

/// All cospans `m -> k <- n` over the one-sort, box-free signature with
/// apex size `k <= max_apex`, valid or not.
pub fn all_boxless_cospans(sig: &Arc<Signature>, m: usize, n: usize, max_apex: usize) -> Vec<Diagram> {
    let sort = sig.sorts()[0].clone();
    let mut out = Vec::new();
    for k in 0..=max_apex {
        let wires: Vec<Wire> = (0..k)
            .map(|i| Wire {
                id: format!("w{i}"),
                sort: sort.clone(),
            })
            .collect();
        for p in tuples(k, m) {
            for q in tuples(k, n) {
                out.push(
                    Diagram::from_parts(
                        sig.clone(),
                        vec![sort.clone(); m],
                        vec![sort.clone(); n],
                        LabeledHypergraph::new(wires.clone(), vec![]),
                        p.clone(),
                        q,
                    )
                    .unwrap(),
                );
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// numeric oracles

/// Plain triple-loop product `b · a` of row-major matrices.
pub fn matmul(b: &[Vec<f64>], a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, m, p) = (b.len(), a.len(), a[0].len());
    let mut c = vec![vec![0.0; p]; n];
    for i in 0..n {
        for j in 0..p {
            for k in 0..m {
                c[i][j] += b[i][k] * a[k][j];
            }
        }
    }
    c
}

pub fn max_abs(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| {
            assert_eq!(x.len(), y.len());
            x.iter().zip(y).map(|(u, v)| (u - v).abs())
        })
        .fold(0.0, f64::max)
}

/// Evaluates by summing, over every assignment of states to wires that
/// agrees with the input, the product of the box entries. Rows are output
/// joint states, columns input joint states.
#[allow(clippy::needless_range_loop)]
pub fn state_sum(interp: &Interpretation, d: &Diagram) -> Vec<Vec<f64>> {
    let g = d.graph();
    let size = |s: &str| interp.sort_sizes()[s];
    let wire_shape: Vec<usize> = g.wires.iter().map(|w| size(&w.sort)).collect();
    let dom_shape: Vec<usize> = d.dom().iter().map(|s| size(s)).collect();
    let cod_shape: Vec<usize> = d.cod().iter().map(|s| size(s)).collect();
    let mut out = vec![vec![0.0; states(&dom_shape)]; states(&cod_shape)];
    let mut ws = vec![0; wire_shape.len()];
    let mut ins = vec![0; dom_shape.len()];
    for col in 0..states(&dom_shape) {
        decode(&dom_shape, col, &mut ins);
        for a in 0..states(&wire_shape) {
            decode(&wire_shape, a, &mut ws);
            if d.p().iter().zip(&ins).any(|(&w, &x)| ws[w] != x) {
                continue;
            }
            let mut weight = 1.0;
            for hb in &g.boxes {
                let k = &interp.box_values()[&hb.label];
                let r = encode(k.cod(), hb.outputs.iter().map(|&w| ws[w]));
                let c = encode(k.dom(), hb.inputs.iter().map(|&w| ws[w]));
                weight *= k.get(r, c);
                if weight == 0.0 {
                    break;
                }
            }
            let row = encode(&cod_shape, d.q().iter().map(|&w| ws[w]));
            out[row][col] += weight;
        }
    }
    out
}

/// Every decomposition reachable by some sequence of piece choices.
pub fn all_decompositions(d: &Diagram) -> Vec<Decomposition> {
    fn rec(d: &Diagram, stack: &mut Vec<Strip>, out: &mut Vec<Decomposition>) {
        let pieces = all_pieces(d);
        if pieces.is_empty() {
            let mut steps = stack.clone();
            steps.reverse();
            out.push(Decomposition { steps, base: d.clone() });
            return;
        }
        for piece in pieces {
            let s = strip_piece(d, &piece).unwrap();
            let rest = s.rest.clone();
            stack.push(s);
            rec(&rest, stack, out);
            stack.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, &mut Vec::new(), &mut out);
    out
}

/// Checks `P(a, b, c) P(c) = P(a, c) P(b, c)` for every input column, where
/// the joint has output factors in ascending position order and `a`, `b`, `c`
/// are sets of factor indices. Returns the largest violation.
pub fn factorization_gap(joint: &Kernel, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
    let shape = joint.cod().to_vec();
    let sub = |idx: &[usize]| idx.iter().map(|&i| shape[i]).collect::<Vec<_>>();
    let (sa, sb, sc) = (sub(a), sub(b), sub(c));
    let mut worst: f64 = 0.0;
    let mut digits = vec![0; shape.len()];
    for col in 0..joint.cols() {
        let mut pabc = vec![vec![vec![0.0; states(&sc)]; states(&sb)]; states(&sa)];
        for row in 0..joint.rows() {
            decode(&shape, row, &mut digits);
            let ia = encode(&sa, a.iter().map(|&i| digits[i]));
            let ib = encode(&sb, b.iter().map(|&i| digits[i]));
            let ic = encode(&sc, c.iter().map(|&i| digits[i]));
            pabc[ia][ib][ic] += joint.get(row, col);
        }
        for ic in 0..states(&sc) {
            let pc: f64 = pabc.iter().flat_map(|x| x.iter().map(|y| y[ic])).sum();
            for ia in 0..states(&sa) {
                let pac: f64 = pabc[ia].iter().map(|y| y[ic]).sum();
                for ib in 0..states(&sb) {
                    let pbc: f64 = pabc.iter().map(|x| x[ib][ic]).sum();
                    worst = worst.max((pabc[ia][ib][ic] * pc - pac * pbc).abs());
                }
            }
        }
    }
    worst
}

pub fn sizes(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
    pairs.iter().map(|(s, n)| (s.to_string(), *n)).collect()
}
