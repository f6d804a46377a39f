//! The user guide, chapter by chapter.
//!
//! Each module here carries one chapter of the rendered book under
//! `book/` as its documentation, so every code block in the book is
//! compiled and run as a doc test. If a chapter drifts from the library,
//! `cargo test` fails; the book cannot silently rot.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/spectra.md")]
pub mod spectra {}

#[doc = include_str!("../../../book/src/shooting.md")]
pub mod shooting {}

#[doc = include_str!("../../../book/src/hermiticity.md")]
pub mod hermiticity {}

#[doc = include_str!("../../../book/src/singularity.md")]
pub mod singularity {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/validation.md")]
pub mod validation {}
