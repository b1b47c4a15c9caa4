//! Exact computations in vertex (super)algebras.
//!
//! ```
//! use vertex_core::ope::singular_part;
//! use vertex_core::presets;
//!
//! let heis = presets::preset("heisenberg").unwrap();
//! let b = heis.parse("b(-1)|0>").unwrap();
//! let sp = singular_part(heis.va(), &b, &b);
//! assert_eq!(sp.render(heis.va()), "2: |0>");
//! ```
//!
//! The guide in `book/` walks through each module; its snippets run as
//! doc-tests of this crate.

pub mod characters;
pub mod coords;
pub mod correlators;
pub mod error;
pub mod fields;
pub mod fock;
pub mod half;
pub mod linalg;
pub mod ope;
pub mod presets;
pub mod scalars;

pub use error::{Error, Result};
pub use half::Half;
pub use scalars::{ParamPoint, Rational, Scalar};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/ope.md")]
    mod ope {}
    #[doc = include_str!("../../../book/src/axioms.md")]
    mod axioms {}
    #[doc = include_str!("../../../book/src/conformal.md")]
    mod conformal {}
    #[doc = include_str!("../../../book/src/coordinates.md")]
    mod coordinates {}
    #[doc = include_str!("../../../book/src/correlators.md")]
    mod correlators {}
    #[doc = include_str!("../../../book/src/characters.md")]
    mod characters {}
}
