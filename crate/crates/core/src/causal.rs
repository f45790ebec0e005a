//! Generalized causal models: normalized diagrams whose outputs are pairwise
//! distinct wires, with marginalization and a graphical conditional
//! independence test.

use std::collections::BTreeMap;

use crate::diagram::Diagram;
use crate::error::CausalError;
use crate::markov::{markov_compose, normalize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalModel {
    diagram: Diagram,
    names: BTreeMap<String, usize>,
}

/// Normalizes `d` and checks that no two output positions share a wire.
pub fn as_causal_model(d: &Diagram) -> Result<CausalModel, CausalError> {
    let diagram = normalize(d);
    let mut first_seen = vec![None; diagram.wire_count()];
    for (j, &w) in diagram.q().iter().enumerate() {
        if let Some(i) = first_seen[w] {
            return Err(CausalError::NonInjectiveOutputs(i, j));
        }
        first_seen[w] = Some(j);
    }
    Ok(CausalModel {
        diagram,
        names: BTreeMap::new(),
    })
}

impl CausalModel {
    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn output_count(&self) -> usize {
        self.diagram.cod().len()
    }

    pub fn names(&self) -> &BTreeMap<String, usize> {
        &self.names
    }

    /// Names the output positions in order.
    pub fn with_names<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self, CausalError> {
        if names.len() > self.output_count() {
            return Err(CausalError::BadPosition(self.output_count()));
        }
        let mut map = BTreeMap::new();
        for (j, n) in names.iter().enumerate() {
            if map.insert(n.as_ref().to_string(), j).is_some() {
                return Err(CausalError::DuplicateName(n.as_ref().to_string()));
            }
        }
        self.names = map;
        Ok(self)
    }

    /// Output position of a named variable.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }

    fn check_positions(&self, positions: &[usize]) -> Result<(), CausalError> {
        match positions.iter().find(|&&j| j >= self.output_count()) {
            Some(&j) => Err(CausalError::BadPosition(j)),
            None => Ok(()),
        }
    }
}

/// Keeps the given output positions, in ascending order, discarding the
/// rest and renormalizing.
pub fn marginalize(m: &CausalModel, keep: &[usize]) -> Result<CausalModel, CausalError> {
    m.check_positions(keep)?;
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let d = &m.diagram;
    let projection = Diagram::wiring(d.signature().clone(), d.cod(), &kept)?;
    let diagram = markov_compose(d, &projection)?;
    let names = m
        .names
        .iter()
        .filter_map(|(n, j)| kept.binary_search(j).ok().map(|k| (n.clone(), k)))
        .collect();
    Ok(CausalModel { diagram, names })
}

/// Whether outputs `a` and `b` end up in different connected components
/// once the model is marginalized to `a ∪ b ∪ c` and the wires of `c` are
/// deleted. Boxes, wires, and input interfaces are the nodes.
pub fn conditional_independence(m: &CausalModel, a: &[usize], b: &[usize], c: &[usize]) -> Result<bool, CausalError> {
    for set in [a, b, c] {
        m.check_positions(set)?;
    }
    let mut owner = vec![None; m.output_count()];
    for (k, set) in [a, b, c].into_iter().enumerate() {
        for &j in set {
            match owner[j] {
                Some(other) if other != k => return Err(CausalError::OverlappingSets(j)),
                _ => owner[j] = Some(k),
            }
        }
    }
    let all: Vec<usize> = (0..m.output_count()).filter(|&j| owner[j].is_some()).collect();
    let marginal = marginalize(m, &all)?;
    let d = marginal.diagram();
    // position in the marginal of an original output position
    let moved = |j: usize| all.binary_search(&j).expect("kept position");
    let mut deleted = vec![false; d.wire_count()];
    for &j in c {
        deleted[d.q()[moved(j)]] = true;
    }

    let (nw, nb) = (d.wire_count(), d.box_count());
    let mut uf = UnionFind::new(nw + nb + d.dom().len());
    for (bi, hb) in d.graph().boxes.iter().enumerate() {
        for &w in hb.inputs.iter().chain(&hb.outputs) {
            if !deleted[w] {
                uf.union(nw + bi, w);
            }
        }
    }
    for (i, &w) in d.p().iter().enumerate() {
        if !deleted[w] {
            uf.union(nw + nb + i, w);
        }
    }
    let roots = |set: &[usize], uf: &mut UnionFind| -> Vec<usize> {
        set.iter().map(|&j| uf.find(d.q()[moved(j)])).collect()
    };
    let ra = roots(a, &mut uf);
    let rb = roots(b, &mut uf);
    Ok(ra.iter().all(|r| !rb.contains(r)))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            y = std::mem::replace(&mut self.parent[y], r);
        }
        r
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.parent[rx.max(ry)] = rx.min(ry);
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::canonical::iso_equal;
    use crate::diagram::tensor;
    use crate::samples;

    #[test]
    fn validity() {
        let s = Arc::new(samples::sample_signature());
        assert!(as_causal_model(&Diagram::identity(s.clone(), &["A"]).unwrap()).is_ok());
        assert_eq!(
            as_causal_model(&Diagram::copy(s, &["A"]).unwrap()),
            Err(CausalError::NonInjectiveOutputs(0, 1))
        );
        assert!(as_causal_model(&samples::causal_example()).is_ok());
        assert!(matches!(
            as_causal_model(&samples::two_f_network()),
            Err(CausalError::NonInjectiveOutputs(0, 1))
        ));
    }

    #[test]
    fn marginals() {
        let m = as_causal_model(&samples::fork_model()).unwrap();
        let all = marginalize(&m, &[2, 0, 1]).unwrap();
        assert!(iso_equal(all.diagram(), m.diagram()).unwrap());
        let none = marginalize(&m, &[]).unwrap();
        assert!(iso_equal(none.diagram(), &Diagram::empty(m.diagram().signature().clone())).unwrap());
        // dropping one child removes only that child's mechanism
        let two = marginalize(&m, &[1, 2]).unwrap();
        let labels: Vec<&str> = two.diagram().graph().boxes.iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, ["r", "h1", "h2"]);
        let one = marginalize(&m, &[1]).unwrap();
        let labels: Vec<&str> = one.diagram().graph().boxes.iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, ["r", "h1"]);
        assert_eq!(marginalize(&m, &[3]), Err(CausalError::BadPosition(3)));
    }

    #[test]
    fn fork_independence() {
        let m = as_causal_model(&samples::fork_model()).unwrap();
        assert!(conditional_independence(&m, &[1], &[2], &[0]).unwrap());
        assert!(!conditional_independence(&m, &[1], &[2], &[]).unwrap());
        assert_eq!(
            conditional_independence(&m, &[1], &[1], &[0]),
            Err(CausalError::OverlappingSets(1))
        );
    }

    #[test]
    fn independent_states() {
        let s = Arc::new(samples::chain_signature());
        let src = Diagram::generator(s, "s").unwrap();
        let m = as_causal_model(&tensor(&src, &src).unwrap()).unwrap();
        assert!(conditional_independence(&m, &[0], &[1], &[]).unwrap());
    }

    #[test]
    fn names() {
        let m = as_causal_model(&samples::fork_model())
            .unwrap()
            .with_names(&["x", "y", "z"])
            .unwrap();
        assert_eq!(m.position("z"), Some(2));
        let marg = marginalize(&m, &[2]).unwrap();
        assert_eq!(marg.position("z"), Some(0));
        assert_eq!(marg.position("y"), None);
        assert!(matches!(
            as_causal_model(&samples::fork_model()).unwrap().with_names(&["x", "x"]),
            Err(CausalError::DuplicateName(_))
        ));
    }
}
