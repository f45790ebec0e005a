//! Free gs-monoidal and Markov categories over a monoidal signature, with
//! morphisms represented as cospans of labeled hypergraphs.

pub mod analysis;
pub mod canonical;
pub mod causal;
pub mod diagram;
pub mod dot;
pub mod error;
pub mod eval;
pub mod factorization;
pub mod generate;
pub mod hypergraph;
pub mod io;
pub mod markov;
pub mod samples;
pub mod signature;

pub use analysis::{complexity, decompose, find_piece, is_permutation, strip_piece, Piece};
pub use canonical::{canonical_form, iso_equal, CanonicalForm};
pub use causal::{as_causal_model, conditional_independence, marginalize, CausalModel};
pub use diagram::{compose, tensor, Diagram, Structural};
pub use error::{CausalError, DiagramError, EvalError, FormatError, Violation};
pub use eval::{evaluate, Interpretation, Kernel, TargetCategory};
pub use factorization::{bloom_circuitry_factorize, is_pure_bloom, is_pure_circuitry, Factorization};
pub use hypergraph::{HyperBox, LabeledHypergraph, Wire};
pub use io::{parse, serialize, DocumentBundle};
pub use markov::{markov_compose, normalize};
pub use signature::{BoxSignature, Signature};
