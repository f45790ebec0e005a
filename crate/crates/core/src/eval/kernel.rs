//! Dense column-stochastic matrices over joint states.
//!
//! A kernel from shape `[d1, ..., dk]` to `[c1, ..., cl]` has one column per
//! input joint state and one row per output joint state. Joint states are
//! numbered in mixed radix with the leftmost factor most significant.

use crate::error::EvalError;

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    dom: Vec<usize>,
    cod: Vec<usize>,
    /// Row-major, `rows * cols` entries.
    data: Vec<f64>,
}

/// Number of joint states of a shape.
pub fn states(shape: &[usize]) -> usize {
    shape.iter().product()
}

/// Digits of joint state `index` in the mixed radix `shape`.
pub fn decode(shape: &[usize], mut index: usize, out: &mut [usize]) {
    for (k, &n) in shape.iter().enumerate().rev() {
        out[k] = index % n;
        index /= n;
    }
}

pub fn encode(shape: &[usize], digits: impl IntoIterator<Item = usize>) -> usize {
    shape.iter().zip(digits).fold(0, |acc, (&n, d)| acc * n + d)
}

impl Kernel {
    /// From rows of entries; row `r` is output joint state `r`.
    pub fn from_rows(dom: Vec<usize>, cod: Vec<usize>, rows: &[Vec<f64>]) -> Result<Self, EvalError> {
        let (r, c) = (states(&cod), states(&dom));
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            return Err(EvalError::ShapeMismatch {
                expected: dom,
                expected_cod: cod,
                found: vec![rows.first().map_or(0, Vec::len)],
                found_cod: vec![rows.len()],
            });
        }
        Ok(Kernel {
            dom,
            cod,
            data: rows.concat(),
        })
    }

    pub fn zeros(dom: Vec<usize>, cod: Vec<usize>) -> Self {
        let n = states(&dom) * states(&cod);
        Kernel {
            dom,
            cod,
            data: vec![0.0; n],
        }
    }

    /// The deterministic kernel whose output digit `j` copies input digit
    /// `map[j]`. Covers identities, permutations, copies, and discards.
    pub fn wiring(shape: &[usize], map: &[usize]) -> Self {
        let cod: Vec<usize> = map.iter().map(|&i| shape[i]).collect();
        let mut k = Kernel::zeros(shape.to_vec(), cod);
        let mut digits = vec![0; shape.len()];
        for col in 0..k.cols() {
            decode(shape, col, &mut digits);
            let row = encode(&k.cod, map.iter().map(|&i| digits[i]));
            k.set(row, col, 1.0);
        }
        k
    }

    pub fn identity(shape: &[usize]) -> Self {
        Kernel::wiring(shape, &(0..shape.len()).collect::<Vec<_>>())
    }

    pub fn dom(&self) -> &[usize] {
        &self.dom
    }

    pub fn cod(&self) -> &[usize] {
        &self.cod
    }

    pub fn rows(&self) -> usize {
        states(&self.cod)
    }

    pub fn cols(&self) -> usize {
        states(&self.dom)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        let c = self.cols();
        self.data[row * c + col] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols().max(1)).map(<[f64]>::to_vec).take(self.rows()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols()];
        for row in self.data.chunks(self.cols().max(1)).take(self.rows()) {
            for (s, x) in sums.iter_mut().zip(row) {
                *s += x;
            }
        }
        sums
    }

    /// Largest entrywise difference, or `None` when the shapes differ.
    pub fn max_abs_diff(&self, other: &Kernel) -> Option<f64> {
        if self.dom != other.dom || self.cod != other.cod {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }

    /// `self ; second`, i.e. the matrix product `second · self`.
    pub fn then(&self, second: &Kernel) -> Result<Kernel, EvalError> {
        if self.cod != second.dom {
            return Err(EvalError::ShapeMismatch {
                expected: self.cod.clone(),
                expected_cod: vec![],
                found: second.dom.clone(),
                found_cod: vec![],
            });
        }
        let (n, m, p) = (second.rows(), self.rows(), self.cols());
        let mut out = Kernel::zeros(self.dom.clone(), second.cod.clone());
        for i in 0..n {
            for k in 0..m {
                let a = second.data[i * m + k];
                if a == 0.0 {
                    continue;
                }
                let src = &self.data[k * p..(k + 1) * p];
                let dst = &mut out.data[i * p..(i + 1) * p];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; the left factor's states are more significant.
    pub fn tensor(&self, other: &Kernel) -> Kernel {
        let cat = |x: &[usize], y: &[usize]| x.iter().chain(y).copied().collect::<Vec<_>>();
        let mut out = Kernel::zeros(cat(&self.dom, &other.dom), cat(&self.cod, &other.cod));
        let (r2, c2) = (other.rows(), other.cols());
        let cols = out.cols();
        for r1 in 0..self.rows() {
            for c1 in 0..self.cols() {
                let a = self.get(r1, c1);
                if a == 0.0 {
                    continue;
                }
                for r in 0..r2 {
                    let row = (r1 * r2 + r) * cols + c1 * c2;
                    for c in 0..c2 {
                        out.data[row + c] = a * other.get(r, c);
                    }
                }
            }
        }
        out
    }

    /// `self ; wiring(cod, map)` without building the wiring matrix.
    pub fn then_wiring(&self, map: &[usize]) -> Kernel {
        let cod: Vec<usize> = map.iter().map(|&i| self.cod[i]).collect();
        let mut out = Kernel::zeros(self.dom.clone(), cod);
        let p = self.cols();
        let mut digits = vec![0; self.cod.len()];
        for r in 0..self.rows() {
            decode(&self.cod, r, &mut digits);
            let target = encode(&out.cod, map.iter().map(|&i| digits[i]));
            let src = &self.data[r * p..(r + 1) * p];
            let dst = &mut out.data[target * p..(target + 1) * p];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s;
            }
        }
        out
    }

    /// `self ; (id ⊗ gamma)` where the identity covers the first `prefix`
    /// factors of the codomain.
    pub fn then_whiskered(&self, prefix: usize, gamma: &Kernel) -> Result<Kernel, EvalError> {
        if self.cod.len() < prefix || self.cod[prefix..] != gamma.dom[..] {
            return Err(EvalError::ShapeMismatch {
                expected: self.cod.get(prefix..).unwrap_or_default().to_vec(),
                expected_cod: vec![],
                found: gamma.dom.clone(),
                found_cod: gamma.cod.clone(),
            });
        }
        let cod: Vec<usize> = self.cod[..prefix].iter().chain(&gamma.cod).copied().collect();
        let mut out = Kernel::zeros(self.dom.clone(), cod);
        let p = self.cols();
        let (gi, go) = (gamma.cols(), gamma.rows());
        for a in 0..states(&self.cod[..prefix]) {
            for o in 0..go {
                let dst_row = a * go + o;
                for i in 0..gi {
                    let g = gamma.get(o, i);
                    if g == 0.0 {
                        continue;
                    }
                    let src_row = a * gi + i;
                    for c in 0..p {
                        out.data[dst_row * p + c] += g * self.data[src_row * p + c];
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copy_on_two_states() {
        let k = Kernel::wiring(&[2], &[0, 0]);
        assert_eq!(k.to_rows(), vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]]);
        let d = Kernel::wiring(&[3], &[]);
        assert_eq!(d.to_rows(), vec![vec![1.0, 1.0, 1.0]]);
    }

    #[test]
    fn product_order() {
        let h = Kernel::from_rows(vec![2], vec![2], &[vec![0.9, 0.2], vec![0.1, 0.8]]).unwrap();
        let hh = h.then(&h).unwrap();
        let expect = [[0.83, 0.34], [0.17, 0.66]];
        for (r, row) in expect.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                assert!((hh.get(r, c) - x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fast_paths_agree_with_dense_products() {
        let h = Kernel::from_rows(vec![2], vec![3], &[vec![0.5, 0.2], vec![0.25, 0.3], vec![0.25, 0.5]]).unwrap();
        let v = Kernel::identity(&[2, 2]).tensor(&h);
        let map = [2, 0, 2];
        let dense = v.then(&Kernel::wiring(v.cod(), &map)).unwrap();
        assert_eq!(v.then_wiring(&map).max_abs_diff(&dense), Some(0.0));
        let g = Kernel::from_rows(vec![3], vec![2], &[vec![1.0, 0.0, 0.5], vec![0.0, 1.0, 0.5]]).unwrap();
        let dense = v.then(&Kernel::identity(&[2, 2]).tensor(&g)).unwrap();
        assert!(v.then_whiskered(2, &g).unwrap().max_abs_diff(&dense).unwrap() < 1e-15);
    }

    #[test]
    fn mixed_radix() {
        let mut d = [0; 3];
        decode(&[2, 3, 2], 7, &mut d);
        assert_eq!(d, [1, 0, 1]);
        assert_eq!(encode(&[2, 3, 2], d), 7);
    }
}
