//! Compiles every code snippet of the guide in `book/` as a doc-test, so
//! `cargo test --doc` keeps the prose and the library in lockstep. The
//! chapters are pulled in verbatim; one module per chapter keeps test
//! failures attributable to the page they came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exact-numbers.md")]
pub mod exact_numbers {}

#[doc = include_str!("../../../book/src/characters.md")]
pub mod characters {}

#[doc = include_str!("../../../book/src/walls.md")]
pub mod walls {}

#[doc = include_str!("../../../book/src/kuznetsov.md")]
pub mod kuznetsov {}

#[doc = include_str!("../../../book/src/scanning.md")]
pub mod scanning {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
