//! Construction and verification of short group laws in the free group F2.
//!
//! A law for a group G is a non-trivial reduced word w(x, y) that evaluates
//! to the identity for every pair of elements of G. This crate provides:
//!
//! - free-group word algebra ([`word`]),
//! - concrete finite groups: permutation and projective matrix backends
//!   ([`group`], [`field`], [`perm`], [`matrix`], [`catalog`]),
//! - law combinators with certified length bounds ([`laws`]),
//! - randomized construction pipelines for families of groups ([`pipeline`])
//!   and an exhaustive/sampled verification engine ([`verify`]),
//! - statistical diagnostics for the random-walk machinery ([`stochastics`]),
//! - a residual-finiteness oracle built on coset enumeration ([`cosets`]),
//! - reproducible certificates and a command-line front end
//!   ([`certificate`], [`cli`]).

pub mod rng;
pub mod word;
pub mod field;
pub mod perm;
pub mod matrix;
pub mod group;
pub mod catalog;
pub mod laws;
pub mod verify;
pub mod pipeline;
pub mod rfgrowth;
pub mod stochastics;
pub mod certificate;
pub mod cli;
