//! Quivers of higher relation extensions of string tree algebras.
//!
//! The pipeline parses a bound quiver ([`StringPresentation`]), builds
//! minimal resolutions of uniserial and injective modules as binary trees
//! ([`resolution`]), reads `Ext^i(I(c), P(z))` and the top of the higher
//! relation bimodule off those trees ([`ext`]), and assembles the extended
//! quiver ([`extension`]). The [`oracle`] recomputes the same numbers with
//! exact linear algebra over a prime field.

pub mod error;
pub mod ext;
pub mod extension;
pub mod fixtures;
pub mod gentle;
pub mod linalg;
pub mod modules;
pub mod oracle;
pub mod presentation;
pub mod random;
pub mod resolution;
pub mod selftest;

pub use error::{Error, Result};
pub use ext::{new_arrows, ExtEngine, ExtSupport, ExtWitness, NewArrow, WitnessKind};
pub use extension::{build_extension, ExtendedPresentation, ExtensionMode};
pub use gentle::{gentle_new_arrows, maximal_overlappings, Overlapping};
pub use modules::{Interval, Representation, Walk};
pub use oracle::{oracle_new_arrow_multiset, BimoduleTop, Oracle};
pub use presentation::{
    Arrow, ArrowId, AxiomCheck, Path, PresentationBuilder, StringPresentation, ValidationReport,
    Vertex, Violation,
};
pub use random::{gen_random_string_tree, RandomSpec};
pub use resolution::{Resolution, ResolutionTree, Side};
