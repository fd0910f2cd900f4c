//! Straight-line graph drawing on the flat Klein bottle.
//!
//! Given a simple 3-connected non-planar graph with a general (signed)
//! rotation system describing a Klein-bottle embedding, this crate produces a
//! crossing-free straight-line drawing on the flat Klein bottle. It also
//! canonicalizes rotation systems under switch-equivalence, exhaustively
//! enumerates the distinct unlabelled Klein-bottle embeddings of small
//! graphs, and regenerates the 13-entry K5/K3,3 base-embedding database the
//! drawing pipeline extends.

pub mod drawing;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod io;
pub mod kuratowski;
pub mod omega;
mod perm;
mod planar;
pub mod rotation;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::Error;
