//! Lattice-to-set reduction for DR-submodular maximization.
//!
//! A bounded integer lattice `[0, B_1] x ... x [0, B_n]` is lifted to a set
//! ground set by writing every bound as a subset-sum-complete multiset of
//! parts ([`decomposition`]). A DR-submodular lattice function then becomes an
//! ordinary submodular set function ([`reduction`]) whose size grows only with
//! `log B`, and which can be handed to standard discrete ([`solvers`]) or
//! fractional ([`continuous`]) submodular maximization algorithms.

pub mod continuous;
pub mod decomposition;
pub mod error;
pub mod instance;
pub mod lattice_fn;
pub mod reduction;
pub mod solvers;

pub use error::{Error, ErrorKind, Result};
