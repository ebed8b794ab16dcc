//! Residual finiteness of free groups, computed at desk scale.
//!
//! The crate builds commutator law words, checks them exhaustively over every
//! group of small order, computes the detection function `k(w)` and the
//! divisibility function `D(w)` exactly, and verifies the structural bounds on
//! transitive groups with cyclic point stabilizers.

pub mod bench;
pub mod catalog;
pub mod cli;
pub mod detect;
pub mod enumerate;
pub mod group;
pub mod iso;
pub mod law;
pub mod matrix;
pub mod parse;
pub mod perm;
pub mod record;
pub mod small;
pub mod stallings;
pub mod word;
pub mod wordgen;

pub use catalog::{CatalogEntry, CatalogError, GroupCatalog};
pub use detect::{abelian_k, evaluate, is_law, k_w, psl2_witness, shortest_law, DetectError, Detection, LawOutcome};
pub use group::{FiniteGroup, GroupError, TransitiveAction};
pub use law::{commutator_word, law_word, power_law, LawError, LawRecipe};
pub use parse::{parse, parse_word, ParseError, WordExpr};
pub use perm::Perm;
pub use word::{Letter, Word, WordError};
