//! Pure blooms, pure circuitry, and the factorization of every diagram into
//! a pure bloom followed by pure circuitry.

use std::sync::Arc;

use crate::analysis::is_bijection;
use crate::canonical::canonical_form;
use crate::diagram::{compose, Diagram};
use crate::error::DiagramError;

/// The right leg is a bijection onto the wires.
pub fn is_pure_bloom(d: &Diagram) -> bool {
    is_bijection(d.q(), d.wire_count())
}

/// No boxes. For valid diagrams the left leg is then a bijection.
pub fn is_pure_circuitry(d: &Diagram) -> bool {
    d.box_count() == 0
}

/// `diagram ≅ bloom ; circuitry`, where the middle word lists the apex wires
/// in `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub bloom: Diagram,
    pub circuitry: Diagram,
    /// Apex wire exposed at each middle position.
    pub order: Vec<usize>,
}

impl Factorization {
    pub fn recompose(&self) -> Result<Diagram, DiagramError> {
        compose(&self.bloom, &self.circuitry)
    }
}

/// Factorizes with the middle word in canonical wire order, so the result
/// depends only on the isomorphism class of `d`.
pub fn bloom_circuitry_factorize(d: &Diagram) -> Factorization {
    let wire_map = canonical_form(d).wire_map;
    let mut order = vec![0; wire_map.len()];
    for (w, &c) in wire_map.iter().enumerate() {
        order[c] = w;
    }
    factorize_with_order(d, &order).expect("canonical order is a permutation")
}

/// Factorizes with middle position `k` exposing apex wire `order[k]`.
pub fn factorize_with_order(d: &Diagram, order: &[usize]) -> Result<Factorization, DiagramError> {
    if !is_bijection(order, d.wire_count()) {
        return Err(DiagramError::BadPermutation(order.to_vec()));
    }
    let mut position = vec![0; order.len()];
    for (k, &w) in order.iter().enumerate() {
        position[w] = k;
    }
    let bloom = d.with_q(order.to_vec());
    let map: Vec<usize> = d.q().iter().map(|&w| position[w]).collect();
    let circuitry = Diagram::wiring(d.signature().clone(), bloom.cod(), &map)?;
    Ok(Factorization {
        bloom,
        circuitry,
        order: order.to_vec(),
    })
}

/// The permutation `pi` (output `j` reads input `pi[j]`) of the middle word
/// with `first.bloom ; pi = second.bloom` and `pi ; second.circuitry =
/// first.circuitry`, for two factorizations of the same diagram. `None` if
/// the factorizations are not over the same apex.
pub fn connecting_permutation(first: &Factorization, second: &Factorization) -> Option<Vec<usize>> {
    if first.bloom.graph() != second.bloom.graph() || first.order.len() != second.order.len() {
        return None;
    }
    let mut position = vec![0; first.order.len()];
    for (k, &w) in first.order.iter().enumerate() {
        position[w] = k;
    }
    let pi: Vec<usize> = second.order.iter().map(|&w| position[w]).collect();
    let circuitry_ok = second
        .circuitry
        .q()
        .iter()
        .zip(first.circuitry.q())
        .all(|(&j2, &j1)| pi[j2] == j1);
    circuitry_ok.then_some(pi)
}

/// A two-sided inverse of `d` under composition, if one exists. Only
/// permutation diagrams are invertible; the inverse is searched among the
/// permutations of the codomain.
pub fn find_inverse(d: &Diagram) -> Option<Diagram> {
    if d.dom().len() != d.cod().len() || d.box_count() != 0 {
        return None;
    }
    let sig: &Arc<_> = d.signature();
    let id_dom = Diagram::identity(sig.clone(), d.dom()).ok()?;
    let id_cod = Diagram::identity(sig.clone(), d.cod()).ok()?;
    let n = d.cod().len();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if let Ok(candidate) = Diagram::permutation(sig.clone(), d.cod(), &perm) {
            if candidate.cod() == d.dom() {
                let left = compose(d, &candidate).ok()?;
                let right = compose(&candidate, d).ok()?;
                if crate::canonical::iso_equal(&left, &id_dom).ok()?
                    && crate::canonical::iso_equal(&right, &id_cod).ok()?
                {
                    return Some(candidate);
                }
            }
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

/// Advances to the next permutation in lexicographic order.
pub(crate) fn next_permutation(xs: &mut [usize]) -> bool {
    let n = xs.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| xs[i] < xs[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| xs[j] > xs[i]).expect("a larger element exists");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}
