//! Evaluation of diagrams in concrete gs-monoidal categories.
//!
//! An [`Interpretation`] assigns a finite carrier to every sort and a matrix
//! to every box. A diagram is evaluated by decomposing it into pieces and
//! folding the matching backend operations over the decomposition, starting
//! from the permutation at its base.

mod function;
mod kernel;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use function::FinFunction;
pub use kernel::{decode, encode, states, Kernel};

use crate::analysis::{decompose, decompose_with, permutation_of, Decomposition, Gamma, Piece};
use crate::canonical::canonical_form;
use crate::diagram::Diagram;
use crate::error::{DiagramError, EvalError};
use crate::signature::Signature;

/// Default tolerance for backend equalities.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Carrier sizes for sorts and matrices for boxes. Shapes are checked on
/// construction; backend axioms are checked when a backend reads the values.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation {
    signature: Arc<Signature>,
    sort_sizes: BTreeMap<String, usize>,
    boxes: BTreeMap<String, Kernel>,
}

impl Interpretation {
    pub fn new(
        signature: Arc<Signature>,
        sort_sizes: BTreeMap<String, usize>,
        matrices: BTreeMap<String, Vec<Vec<f64>>>,
    ) -> Result<Self, EvalError> {
        for (sort, &n) in &sort_sizes {
            if !signature.has_sort(sort) {
                return Err(DiagramError::UnknownSort(sort.clone()).into());
            }
            if n == 0 {
                return Err(EvalError::MissingSortSize(sort.clone()));
            }
        }
        let mut interp = Interpretation {
            signature,
            sort_sizes,
            boxes: BTreeMap::new(),
        };
        for (name, rows) in matrices {
            let bs = interp
                .signature
                .box_signature(&name)
                .ok_or_else(|| DiagramError::UnknownBox(name.clone()))?;
            let dom = interp.shape(&bs.inputs)?;
            let cod = interp.shape(&bs.outputs)?;
            let k = Kernel::from_rows(dom.clone(), cod.clone(), &rows).map_err(|_| EvalError::ShapeMismatch {
                expected: dom,
                expected_cod: cod,
                found: vec![rows.first().map_or(0, Vec::len)],
                found_cod: vec![rows.len()],
            })?;
            interp.boxes.insert(name, k);
        }
        Ok(interp)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn sort_sizes(&self) -> &BTreeMap<String, usize> {
        &self.sort_sizes
    }

    pub fn box_values(&self) -> &BTreeMap<String, Kernel> {
        &self.boxes
    }

    pub fn box_value(&self, name: &str) -> Result<&Kernel, EvalError> {
        self.boxes.get(name).ok_or_else(|| EvalError::MissingBox(name.to_string()))
    }

    /// Carrier sizes of a sort word.
    pub fn shape<S: AsRef<str>>(&self, word: &[S]) -> Result<Vec<usize>, EvalError> {
        word.iter()
            .map(|s| {
                self.sort_sizes
                    .get(s.as_ref())
                    .copied()
                    .ok_or_else(|| EvalError::MissingSortSize(s.as_ref().to_string()))
            })
            .collect()
    }
}

/// A strict gs-monoidal target category whose objects are words of carrier
/// sizes.
pub trait TargetCategory {
    type Morphism: Clone + fmt::Debug;

    fn name(&self) -> &'static str;

    /// The backend's value for a box, after checking the backend's axioms.
    fn box_value(&self, interp: &Interpretation, name: &str) -> Result<Self::Morphism, EvalError>;

    /// Output factor `j` copies input factor `map[j]`.
    fn wiring(&self, shape: &[usize], map: &[usize]) -> Self::Morphism;

    fn compose(&self, first: &Self::Morphism, second: &Self::Morphism) -> Result<Self::Morphism, EvalError>;

    fn tensor(&self, a: &Self::Morphism, b: &Self::Morphism) -> Self::Morphism;

    fn dom(&self, m: &Self::Morphism) -> Vec<usize>;

    fn cod(&self, m: &Self::Morphism) -> Vec<usize>;

    fn to_kernel(&self, m: &Self::Morphism) -> Kernel;

    fn identity(&self, shape: &[usize]) -> Self::Morphism {
        self.wiring(shape, &(0..shape.len()).collect::<Vec<_>>())
    }

    fn permutation(&self, shape: &[usize], perm: &[usize]) -> Self::Morphism {
        self.wiring(shape, perm)
    }

    fn copy(&self, shape: &[usize]) -> Self::Morphism {
        let n = shape.len();
        self.wiring(shape, &(0..n).chain(0..n).collect::<Vec<_>>())
    }

    fn discard(&self, shape: &[usize]) -> Self::Morphism {
        self.wiring(shape, &[])
    }

    /// Max-abs distance, `None` if the shapes differ.
    fn distance(&self, a: &Self::Morphism, b: &Self::Morphism) -> Option<f64> {
        self.to_kernel(a).max_abs_diff(&self.to_kernel(b))
    }

    /// `m ; wiring(cod m, map)`.
    fn then_wiring(&self, m: &Self::Morphism, map: &[usize]) -> Result<Self::Morphism, EvalError> {
        self.compose(m, &self.wiring(&self.cod(m), map))
    }

    /// `m ; (id ⊗ gamma)` with the identity on the first `prefix` factors.
    fn then_whiskered(&self, m: &Self::Morphism, prefix: usize, gamma: &Self::Morphism) -> Result<Self::Morphism, EvalError> {
        let cod = self.cod(m);
        let id = self.identity(&cod[..prefix.min(cod.len())]);
        self.compose(m, &self.tensor(&id, gamma))
    }
}

/// Column-stochastic matrices: a Markov category.
#[derive(Debug, Clone, Copy, Default)]
pub struct Stochastic;

/// Matrices with nonnegative entries and column sums at most one. Discarding
/// is not natural here, so this is gs-monoidal but not Markov.
#[derive(Debug, Clone, Copy, Default)]
pub struct Substochastic;

/// Functions between finite sets: a cartesian, hence Markov, category.
#[derive(Debug, Clone, Copy, Default)]
pub struct Functions;

fn check_kernel(name: &str, k: &Kernel, exact_mass: bool) -> Result<(), EvalError> {
    let violation = |reason: String| EvalError::BackendAxiomViolation {
        box_name: name.to_string(),
        reason,
    };
    for r in 0..k.rows() {
        for c in 0..k.cols() {
            let x = k.get(r, c);
            if !x.is_finite() || x < -DEFAULT_TOLERANCE {
                return Err(violation(format!("entry ({r}, {c}) is {x}")));
            }
        }
    }
    for (c, s) in k.column_sums().into_iter().enumerate() {
        if exact_mass && (s - 1.0).abs() > DEFAULT_TOLERANCE {
            return Err(violation(format!("column {c} sums to {s}, expected 1")));
        }
        if !exact_mass && s > 1.0 + DEFAULT_TOLERANCE {
            return Err(violation(format!("column {c} sums to {s}, expected at most 1")));
        }
    }
    Ok(())
}

macro_rules! kernel_backend {
    ($ty:ty, $name:literal, $exact:expr) => {
        impl TargetCategory for $ty {
            type Morphism = Kernel;

            fn name(&self) -> &'static str {
                $name
            }

            fn box_value(&self, interp: &Interpretation, name: &str) -> Result<Kernel, EvalError> {
                let k = interp.box_value(name)?;
                check_kernel(name, k, $exact)?;
                Ok(k.clone())
            }

            fn wiring(&self, shape: &[usize], map: &[usize]) -> Kernel {
                Kernel::wiring(shape, map)
            }

            fn compose(&self, first: &Kernel, second: &Kernel) -> Result<Kernel, EvalError> {
                first.then(second)
            }

            fn tensor(&self, a: &Kernel, b: &Kernel) -> Kernel {
                a.tensor(b)
            }

            fn dom(&self, m: &Kernel) -> Vec<usize> {
                m.dom().to_vec()
            }

            fn cod(&self, m: &Kernel) -> Vec<usize> {
                m.cod().to_vec()
            }

            fn to_kernel(&self, m: &Kernel) -> Kernel {
                m.clone()
            }

            fn then_wiring(&self, m: &Kernel, map: &[usize]) -> Result<Kernel, EvalError> {
                Ok(m.then_wiring(map))
            }

            fn then_whiskered(&self, m: &Kernel, prefix: usize, gamma: &Kernel) -> Result<Kernel, EvalError> {
                m.then_whiskered(prefix, gamma)
            }
        }
    };
}

kernel_backend!(Stochastic, "stochastic", true);
kernel_backend!(Substochastic, "substochastic", false);

impl TargetCategory for Functions {
    type Morphism = FinFunction;

    fn name(&self) -> &'static str {
        "function"
    }

    fn box_value(&self, interp: &Interpretation, name: &str) -> Result<FinFunction, EvalError> {
        FinFunction::from_kernel(interp.box_value(name)?).map_err(|reason| EvalError::BackendAxiomViolation {
            box_name: name.to_string(),
            reason,
        })
    }

    fn wiring(&self, shape: &[usize], map: &[usize]) -> FinFunction {
        FinFunction::wiring(shape, map)
    }

    fn compose(&self, first: &FinFunction, second: &FinFunction) -> Result<FinFunction, EvalError> {
        first.then(second)
    }

    fn tensor(&self, a: &FinFunction, b: &FinFunction) -> FinFunction {
        a.tensor(b)
    }

    fn dom(&self, m: &FinFunction) -> Vec<usize> {
        m.dom().to_vec()
    }

    fn cod(&self, m: &FinFunction) -> Vec<usize> {
        m.cod().to_vec()
    }

    fn to_kernel(&self, m: &FinFunction) -> Kernel {
        m.to_kernel()
    }

    fn distance(&self, a: &FinFunction, b: &FinFunction) -> Option<f64> {
        (a.dom() == b.dom() && a.cod() == b.cod()).then(|| if a == b { 0.0 } else { 1.0 })
    }
}

/// Value of `d` under the unique structure-preserving functor extending
/// `interp`. The diagram is canonicalized first, so isomorphic diagrams get
/// bit-identical results.
pub fn evaluate<T: TargetCategory>(backend: &T, interp: &Interpretation, d: &Diagram) -> Result<T::Morphism, EvalError> {
    check_signature(interp, d)?;
    let canonical = canonical_form(d).diagram;
    evaluate_decomposition(backend, interp, &decompose(&canonical))
}

/// Like [`evaluate`], but evaluates `d` as stored and lets `choose` pick the
/// piece stripped at each step.
pub fn evaluate_with<T, F>(backend: &T, interp: &Interpretation, d: &Diagram, choose: F) -> Result<T::Morphism, EvalError>
where
    T: TargetCategory,
    F: FnMut(&Diagram, &[Piece]) -> Piece,
{
    check_signature(interp, d)?;
    evaluate_decomposition(backend, interp, &decompose_with(d, choose))
}

/// Folds backend operations over a decomposition.
pub fn evaluate_decomposition<T: TargetCategory>(
    backend: &T,
    interp: &Interpretation,
    dec: &Decomposition,
) -> Result<T::Morphism, EvalError> {
    let base = &dec.base;
    let perm = permutation_of(base).ok_or_else(|| DiagramError::InvalidPiece("decomposition base is not a permutation".into()))?;
    let mut value = backend.permutation(&interp.shape(base.dom())?, &perm);
    for step in &dec.steps {
        let f = &step.factors;
        if !is_identity(&f.before) {
            value = backend.then_wiring(&value, &f.before)?;
        }
        let gamma = match &f.gamma {
            Gamma::Discard(s) => backend.discard(&interp.shape(&[s])?),
            Gamma::Copy(s) => backend.copy(&interp.shape(&[s])?),
            Gamma::Box(name) => backend.box_value(interp, name)?,
        };
        value = backend.then_whiskered(&value, f.prefix.len(), &gamma)?;
        if !is_identity(&f.after) {
            value = backend.then_wiring(&value, &f.after)?;
        }
    }
    Ok(value)
}

fn is_identity(perm: &[usize]) -> bool {
    perm.iter().enumerate().all(|(i, &j)| i == j)
}

fn check_signature(interp: &Interpretation, d: &Diagram) -> Result<(), EvalError> {
    if Arc::ptr_eq(interp.signature(), d.signature()) || **interp.signature() == **d.signature() {
        Ok(())
    } else {
        Err(EvalError::SignatureMismatch)
    }
}

/// Whether `m` is within `tol` of the value of `d`.
pub fn check_compatibility<T: TargetCategory>(
    backend: &T,
    interp: &Interpretation,
    d: &Diagram,
    m: &Kernel,
    tol: f64,
) -> Result<bool, EvalError> {
    let dom = interp.shape(d.dom())?;
    let cod = interp.shape(d.cod())?;
    if m.dom() != dom || m.cod() != cod {
        return Err(EvalError::ShapeMismatch {
            expected: dom,
            expected_cod: cod,
            found: m.dom().to_vec(),
            found_cod: m.cod().to_vec(),
        });
    }
    let value = backend.to_kernel(&evaluate(backend, interp, d)?);
    Ok(value.max_abs_diff(m).is_some_and(|e| e <= tol))
}
