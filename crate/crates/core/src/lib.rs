//! Construction and verification of mutually unbiased bases with free
//! parameters.
//!
//! Start from a fixed set of bases ([`catalog`]), find the column pairs of its
//! Gram matrix whose conjugated entrywise product is real
//! ([`gerengine::find_ger_pairs`]), and turn each into a phase slot
//! ([`gerengine::inject`]). [`verifier`] checks the resulting families,
//! [`entangle`] looks at three-qubit entanglement along them and
//! [`circuits`] expresses the injected phases as gate sequences.

pub mod catalog;
pub mod circuits;
pub mod entangle;
pub mod error;
pub mod gerengine;
pub mod matcore;
pub mod presets;
pub mod verifier;

pub use catalog::MubSet;
pub use error::{Error, Result};
pub use gerengine::{GerPair, GramMatrix, ParamFamily};
pub use matcore::{ComplexMatrix, Tolerance, C64};
