//! Doc-test harness for the guide under `book/`.
//!
//! mdbook renders the chapters but cannot execute their examples, so each
//! module here pulls one chapter in verbatim and lets `cargo test --doc` run
//! every fenced block. A chapter edit that breaks an example fails the build
//! rather than the reader.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/free-words.md")]
pub mod free_words {}

#[doc = include_str!("../../../book/src/finite-groups.md")]
pub mod finite_groups {}

#[doc = include_str!("../../../book/src/building-laws.md")]
pub mod building_laws {}

#[doc = include_str!("../../../book/src/family-pipelines.md")]
pub mod family_pipelines {}

#[doc = include_str!("../../../book/src/quotient-oracle.md")]
pub mod quotient_oracle {}

#[doc = include_str!("../../../book/src/random-walks.md")]
pub mod random_walks {}

#[doc = include_str!("../../../book/src/certificates.md")]
pub mod certificates {}
