//! First-passage laws for the sum of two dependent spectrally positive Lévy
//! processes whose jumps are coupled by a Lévy copula.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`copulas`]: Lévy copulas and their partial derivatives,
//! * [`margins`]: one-sided marginal tail integrals,
//! * [`decompose`]: tails of the single-jump and common-jump components,
//! * [`firstpassage`]: ruin, cause and space laws for the drift-minus-subordinator
//!   model, and the triple law for pure compound Poisson sums,
//! * [`rwalk`]: the random-walk quintuple law with distributional copulas,
//! * [`montecarlo`]: an event-driven path simulator used as an oracle.
#![no_std]
// Whenever std is linked (tests, or a std crate in the same build), its
// inherent float methods shadow `num_traits::Float`.
#![allow(unused_imports)]
// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod copulas;
pub mod decompose;
mod error;
pub mod firstpassage;
pub mod lattice;
pub mod margins;
pub mod montecarlo;
pub mod quad;
pub mod roots;
pub mod rwalk;

pub use error::{Error, Result};
