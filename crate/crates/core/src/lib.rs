//! Closed subsets of the one-sided full shift `A^ℕ`, presented by finite
//! labeled graphs, and the operations relating them: decimation,
//! interleaving, interleaving closure, factorization spectra, shift
//! stability and entropy. The [`oracle`] module recomputes every operation
//! on explicit finite prefix tables.

mod automaton;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod factorize;
pub mod oracle;
pub mod presentation;
pub mod stability;
pub mod transform;
pub mod word;

pub use error::{Error, Result};
pub use presentation::{AsCanonical, CanonicalForm, Limits, Presentation};
pub use word::{Alphabet, EventuallyPeriodicWord, Symbol};
