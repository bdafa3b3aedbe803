//! Multiple-time Schnorr-style signatures over prime-order groups.
//!
//! Three schemes share one group abstraction and one pair of full-domain
//! hashes:
//!
//! * [`schnorr`]: the classical scheme, one exponentiation per signature.
//! * [`eta`]: K-time signatures from a hash chain of ephemeral scalars.
//! * [`semecs`]: K-time signatures whose signer does no group arithmetic at
//!   all, with recovery of the first `L` message octets.
//!
//! K-time signers are stateful. Every signature consumes one index, and the
//! advanced counter is handed to a [`StateSink`] before the signature is
//! released; [`keystore::StateFile`] is the on-disk implementation.

pub mod bench;
pub mod energy;
pub mod error;
pub mod eta;
pub mod fdh;
pub mod group;
pub mod keystore;
pub mod schnorr;
pub mod semecs;
pub mod state;
pub mod suite;

pub use error::{Error, Result};
pub use fdh::DigestAlg;
pub use group::{Group, GroupId, OpCounts, Ristretto255, ToyGroup};
pub use state::{InMemory, StateSink};
pub use suite::Suite;
