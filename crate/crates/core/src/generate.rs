//! Seeded random diagrams and interpretations for tests and benchmarks.
//!
//! Every generator takes an explicit RNG. [`rng_from_env`] seeds one from
//! the `GSD_SEED` environment variable when it is set.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::Diagram;
use crate::eval::{states, Interpretation};
use crate::hypergraph::{HyperBox, LabeledHypergraph, Wire};
use crate::markov::normalize;
use crate::signature::Signature;

pub type GenRng = ChaCha8Rng;

pub const SEED_VAR: &str = "GSD_SEED";

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The seed from `GSD_SEED`, or `default` when unset or unparsable.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub fn rng_from_env(default: u64) -> GenRng {
    rng(seed_from_env(default))
}

/// Size limits for random diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub max_dom: usize,
    pub max_boxes: usize,
    pub max_cod: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_dom: 3,
            max_boxes: 4,
            max_cod: 4,
        }
    }
}

fn random_word(rng: &mut GenRng, sig: &Signature, max: usize) -> Vec<String> {
    if sig.sorts().is_empty() {
        return Vec::new();
    }
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| sig.sorts().choose(rng).expect("nonempty").clone()).collect()
}

/// A valid diagram with a random domain.
pub fn random_diagram(rng: &mut GenRng, sig: &Arc<Signature>, params: GenParams) -> Diagram {
    let dom = random_word(rng, sig, params.max_dom);
    build(rng, sig, dom, params, true)
}

/// A valid diagram with the given domain.
pub fn random_diagram_from<S: AsRef<str>>(rng: &mut GenRng, sig: &Arc<Signature>, dom: &[S], params: GenParams) -> Diagram {
    let dom = dom.iter().map(|s| s.as_ref().to_string()).collect();
    build(rng, sig, dom, params, false)
}

/// A valid diagram with the given domain and codomain. Output positions
/// whose sort no wire carries get a wire produced by a box when one exists.
/// Returns `None` if some codomain sort cannot be reached.
pub fn random_diagram_between<S: AsRef<str>>(
    rng: &mut GenRng,
    sig: &Arc<Signature>,
    dom: &[S],
    cod: &[S],
    params: GenParams,
) -> Option<Diagram> {
    for _ in 0..64 {
        let d = random_diagram_from(rng, sig, dom, GenParams { max_cod: 0, ..params });
        let g = d.graph();
        let q: Option<Vec<usize>> = cod
            .iter()
            .map(|s| {
                let candidates: Vec<usize> = (0..g.wires.len()).filter(|&w| g.wires[w].sort == s.as_ref()).collect();
                candidates.choose(rng).copied()
            })
            .collect();
        if let Some(q) = q {
            let cod = q.iter().map(|&w| g.wires[w].sort.clone()).collect();
            return Some(Diagram::new(sig.clone(), d.dom().to_vec(), cod, g.clone(), d.p().to_vec(), q).expect("valid by construction"));
        }
    }
    None
}

fn build(rng: &mut GenRng, sig: &Arc<Signature>, mut dom: Vec<String>, params: GenParams, grow_dom: bool) -> Diagram {
    let mut wires: Vec<Wire> = dom
        .iter()
        .enumerate()
        .map(|(i, s)| Wire {
            id: format!("w{i}"),
            sort: s.clone(),
        })
        .collect();
    let mut p: Vec<usize> = (0..wires.len()).collect();
    let mut boxes = Vec::new();
    let target = if sig.boxes().is_empty() { 0 } else { rng.gen_range(0..=params.max_boxes) };
    let mut attempts = 0;
    while boxes.len() < target && attempts < 8 * (target + 1) {
        attempts += 1;
        let bs = sig.boxes().choose(rng).expect("nonempty").clone();
        let mut inputs = Vec::with_capacity(bs.inputs.len());
        let mut ok = true;
        for s in &bs.inputs {
            let candidates: Vec<usize> = (0..wires.len()).filter(|&w| wires[w].sort == *s).collect();
            // sometimes open a fresh input even when a wire exists
            let fresh = grow_dom && (candidates.is_empty() || rng.gen_bool(0.2));
            if fresh {
                p.push(wires.len());
                dom.push(s.clone());
                wires.push(Wire {
                    id: format!("w{}", wires.len()),
                    sort: s.clone(),
                });
                inputs.push(wires.len() - 1);
            } else if let Some(&w) = candidates.choose(rng) {
                inputs.push(w);
            } else {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let outputs = bs
            .outputs
            .iter()
            .map(|s| {
                wires.push(Wire {
                    id: format!("w{}", wires.len()),
                    sort: s.clone(),
                });
                wires.len() - 1
            })
            .collect();
        boxes.push(HyperBox {
            id: format!("b{}", boxes.len()),
            label: bs.name.clone(),
            inputs,
            outputs,
        });
    }
    let n_cod = if wires.is_empty() { 0 } else { rng.gen_range(0..=params.max_cod) };
    let q: Vec<usize> = (0..n_cod).map(|_| rng.gen_range(0..wires.len())).collect();
    let cod = q.iter().map(|&w| wires[w].sort.clone()).collect();
    let d = Diagram::from_parts(sig.clone(), dom, cod, LabeledHypergraph::new(wires, boxes), p, q)
        .expect("indices in range");
    debug_assert!(d.is_valid(), "{:?}", d.validate());
    scramble(rng, &d)
}

/// An isomorphic copy with shuffled storage order and fresh ids.
pub fn scramble(rng: &mut GenRng, d: &Diagram) -> Diagram {
    let mut wire_order: Vec<usize> = (0..d.wire_count()).collect();
    wire_order.shuffle(rng);
    let mut box_order: Vec<usize> = (0..d.box_count()).collect();
    box_order.shuffle(rng);
    let tag: u32 = rng.gen_range(0..1000);
    let mut r = d.reindexed(&wire_order, &box_order).with_positional_ids();
    r = rename(&r, &format!("x{tag}_"));
    r
}

fn rename(d: &Diagram, prefix: &str) -> Diagram {
    let mut g = d.graph().clone();
    for w in &mut g.wires {
        w.id = format!("{prefix}{}", w.id);
    }
    for b in &mut g.boxes {
        b.id = format!("{prefix}{}", b.id);
    }
    Diagram::from_parts(d.signature().clone(), d.dom().to_vec(), d.cod().to_vec(), g, d.p().to_vec(), d.q().to_vec())
        .expect("same indices")
}

/// A normalized diagram whose outputs are distinct wires.
pub fn random_causal_model(rng: &mut GenRng, sig: &Arc<Signature>, params: GenParams) -> Diagram {
    let d = random_diagram(rng, sig, GenParams { max_cod: 0, ..params });
    let mut all: Vec<usize> = (0..d.wire_count()).collect();
    all.shuffle(rng);
    let n = rng.gen_range(0..=params.max_cod.min(all.len()));
    let q: Vec<usize> = all[..n].to_vec();
    let cod = q.iter().map(|&w| d.graph().wires[w].sort.clone()).collect();
    let d = Diagram::new(sig.clone(), d.dom().to_vec(), cod, d.graph().clone(), d.p().to_vec(), q).expect("valid by construction");
    normalize(&d)
}

/// What kind of matrices to draw for boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Stochastic,
    Substochastic,
    Function,
}

/// Random box values over the given carrier sizes.
pub fn random_interpretation(
    rng: &mut GenRng,
    sig: &Arc<Signature>,
    sort_sizes: &BTreeMap<String, usize>,
    kind: MatrixKind,
) -> Interpretation {
    let mut matrices = BTreeMap::new();
    for bs in sig.boxes() {
        let size = |w: &[String]| states(&w.iter().map(|s| sort_sizes[s]).collect::<Vec<_>>());
        let (rows, cols) = (size(&bs.outputs), size(&bs.inputs));
        // drawn column by column, stored row-major
        let mut columns = vec![vec![0.0; rows]; cols];
        for col in &mut columns {
            match kind {
                MatrixKind::Function => col[rng.gen_range(0..rows)] = 1.0,
                MatrixKind::Stochastic | MatrixKind::Substochastic => {
                    let raw: Vec<f64> = (0..rows).map(|_| rng.gen_range(0.05..1.0)).collect();
                    let total: f64 = raw.iter().sum();
                    let mass = if kind == MatrixKind::Stochastic { 1.0 } else { rng.gen_range(0.2..1.0) };
                    for (slot, x) in col.iter_mut().zip(raw) {
                        *slot = mass * x / total;
                    }
                }
            }
        }
        let m: Vec<Vec<f64>> = (0..rows).map(|r| columns.iter().map(|col| col[r]).collect()).collect();
        matrices.insert(bs.name.clone(), m);
    }
    Interpretation::new(sig.clone(), sort_sizes.clone(), matrices).expect("shapes match by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::iso_equal;
    use crate::samples;

    #[test]
    fn generated_diagrams_are_valid() {
        let sig = Arc::new(samples::sample_signature());
        let mut r = rng(7);
        for _ in 0..200 {
            let d = random_diagram(&mut r, &sig, GenParams::default());
            assert!(d.is_valid(), "{:?}", d.validate());
            let e = random_diagram_from(&mut r, &sig, d.cod(), GenParams::default());
            assert_eq!(e.dom(), d.cod());
            assert!(e.is_valid());
        }
    }

    #[test]
    fn scramble_is_iso() {
        let mut r = rng(3);
        let d = samples::two_f_network();
        let s = scramble(&mut r, &d);
        assert!(iso_equal(&d, &s).unwrap());
    }

    #[test]
    fn same_seed_same_output() {
        let sig = Arc::new(samples::sample_signature());
        let a = random_diagram(&mut rng(11), &sig, GenParams::default());
        let b = random_diagram(&mut rng(11), &sig, GenParams::default());
        assert_eq!(a, b);
    }

    #[test]
    fn causal_models_have_injective_outputs() {
        let sig = Arc::new(samples::fork_signature());
        let mut r = rng(5);
        for _ in 0..50 {
            let d = random_causal_model(&mut r, &sig, GenParams::default());
            assert!(crate::causal::as_causal_model(&d).is_ok());
        }
    }
}
