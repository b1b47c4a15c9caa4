//! Mode algebras and their vacuum Fock modules.

mod algebra;
mod document;
mod module;
mod state;
mod syntax;

pub use algebra::{
    BracketRule, BracketTerm, BracketValue, Central, GenId, GeneratorSpec, LatticeData, ModeAlgebra, ModePoly, Parity,
};
pub use document::{AlgebraDocument, BracketDoc, CentralDoc, GeneratorDoc, LatticeDoc, TermDoc};
pub use module::{Fock, WordItem, DEFAULT_ZERO_WEIGHT_CAP};
pub use state::{Mode, Monomial, State};
