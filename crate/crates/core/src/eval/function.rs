//! Functions between finite sets of joint states.

use super::kernel::{decode, encode, states, Kernel};
use crate::error::EvalError;

/// Sends input joint state `i` to output joint state `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunction {
    dom: Vec<usize>,
    cod: Vec<usize>,
    map: Vec<usize>,
}

impl FinFunction {
    pub fn new(dom: Vec<usize>, cod: Vec<usize>, map: Vec<usize>) -> Result<Self, EvalError> {
        let n = states(&cod);
        if map.len() != states(&dom) || map.iter().any(|&x| x >= n) {
            return Err(EvalError::ShapeMismatch {
                expected: dom,
                expected_cod: cod,
                found: vec![map.len()],
                found_cod: vec![map.iter().max().map_or(0, |m| m + 1)],
            });
        }
        Ok(FinFunction { dom, cod, map })
    }

    /// Reads a 0/1 matrix with exactly one 1 per column.
    pub fn from_kernel(k: &Kernel) -> Result<Self, String> {
        let mut map = Vec::with_capacity(k.cols());
        for c in 0..k.cols() {
            let mut hit = None;
            for r in 0..k.rows() {
                let x = k.get(r, c);
                if x == 1.0 {
                    if hit.is_some() {
                        return Err(format!("column {c} has more than one 1"));
                    }
                    hit = Some(r);
                } else if x != 0.0 {
                    return Err(format!("entry ({r}, {c}) is {x}, expected 0 or 1"));
                }
            }
            map.push(hit.ok_or_else(|| format!("column {c} has no 1"))?);
        }
        Ok(FinFunction {
            dom: k.dom().to_vec(),
            cod: k.cod().to_vec(),
            map,
        })
    }

    pub fn to_kernel(&self) -> Kernel {
        let mut k = Kernel::zeros(self.dom.clone(), self.cod.clone());
        for (c, &r) in self.map.iter().enumerate() {
            k.set(r, c, 1.0);
        }
        k
    }

    pub fn wiring(shape: &[usize], wires: &[usize]) -> Self {
        let cod: Vec<usize> = wires.iter().map(|&i| shape[i]).collect();
        let mut digits = vec![0; shape.len()];
        let map = (0..states(shape))
            .map(|i| {
                decode(shape, i, &mut digits);
                encode(&cod, wires.iter().map(|&w| digits[w]))
            })
            .collect();
        FinFunction {
            dom: shape.to_vec(),
            cod,
            map,
        }
    }

    pub fn dom(&self) -> &[usize] {
        &self.dom
    }

    pub fn cod(&self) -> &[usize] {
        &self.cod
    }

    pub fn apply(&self, state: usize) -> usize {
        self.map[state]
    }

    pub fn then(&self, second: &FinFunction) -> Result<FinFunction, EvalError> {
        if self.cod != second.dom {
            return Err(EvalError::ShapeMismatch {
                expected: self.cod.clone(),
                expected_cod: vec![],
                found: second.dom.clone(),
                found_cod: vec![],
            });
        }
        Ok(FinFunction {
            dom: self.dom.clone(),
            cod: second.cod.clone(),
            map: self.map.iter().map(|&x| second.map[x]).collect(),
        })
    }

    pub fn tensor(&self, other: &FinFunction) -> FinFunction {
        let cat = |x: &[usize], y: &[usize]| x.iter().chain(y).copied().collect::<Vec<_>>();
        let n2 = states(&other.cod);
        let map = self
            .map
            .iter()
            .flat_map(|&a| other.map.iter().map(move |&b| a * n2 + b))
            .collect();
        FinFunction {
            dom: cat(&self.dom, &other.dom),
            cod: cat(&self.cod, &other.cod),
            map,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_kernel_operations() {
        let f = FinFunction::new(vec![3], vec![2], vec![1, 0, 1]).unwrap();
        let g = FinFunction::wiring(&[2, 3], &[1, 0]);
        let fk = f.to_kernel();
        assert_eq!(FinFunction::from_kernel(&fk).unwrap(), f);
        assert_eq!(g.to_kernel(), Kernel::wiring(&[2, 3], &[1, 0]));
        let t = f.tensor(&f);
        assert_eq!(t.to_kernel(), fk.tensor(&fk));
        let c = g.then(&f.tensor(&FinFunction::wiring(&[2], &[0]))).unwrap();
        assert_eq!(c.to_kernel(), g.to_kernel().then(&fk.tensor(&Kernel::identity(&[2]))).unwrap());
    }

    #[test]
    fn rejects_non_functions() {
        let k = Kernel::from_rows(vec![2], vec![2], &[vec![0.5, 0.0], vec![0.5, 1.0]]).unwrap();
        assert!(FinFunction::from_kernel(&k).is_err());
        assert!(FinFunction::new(vec![2], vec![2], vec![0, 2]).is_err());
    }
}
