//! Index and nullity of non-harmonic biharmonic maps `φ = i∘ψ` into spheres,
//! computed from exact closed-form quadratic forms and cross-checked by a
//! numerical oracle.

pub mod acceptance;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod quadforms;
pub mod rational;
pub mod report;
pub mod spectra;
pub mod surd;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/spectra.md")]
mod book_spectra {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/quadratic-forms.md")]
mod book_quadratic_forms {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/classification.md")]
mod book_classification {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/oracle.md")]
mod book_oracle {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/acceptance.md")]
mod book_acceptance {}
