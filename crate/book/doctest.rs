// mdbook cannot run listings that depend on a workspace crate, so each
// chapter is pulled in as module docs and `cargo test --doc` runs them.

#[doc = include_str!("src/intro.md")]
pub mod intro {}
#[doc = include_str!("src/embeddings.md")]
pub mod embeddings {}
#[doc = include_str!("src/generators.md")]
pub mod generators {}
#[doc = include_str!("src/structure.md")]
pub mod structure {}
#[doc = include_str!("src/census.md")]
pub mod census {}
#[doc = include_str!("src/formulas.md")]
pub mod formulas {}
#[doc = include_str!("src/verification.md")]
pub mod verification {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
