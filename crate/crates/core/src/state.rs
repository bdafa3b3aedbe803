//! Hook through which K-time signers make counter advancement durable.
//!
//! Signers call [`StateSink::commit`] with the index they are about to
//! consume and the state that follows it. A signature is released only after
//! the sink returns `Ok`. If it fails, the in-memory signer still treats the
//! index as spent, so an index can be lost but never reused.

use crate::error::Result;

pub trait StateSink<S> {
    /// Durably records `next`, provided the stored counter still equals
    /// `expected_index`.
    fn commit(&mut self, expected_index: u64, next: &S) -> Result<()>;
}

/// Keeps state in memory only. For tests, benchmarks, and callers that
/// persist state themselves.
#[derive(Clone, Copy, Debug, Default)]
pub struct InMemory;

impl<S> StateSink<S> for InMemory {
    fn commit(&mut self, _expected_index: u64, _next: &S) -> Result<()> {
        Ok(())
    }
}

impl<S, T: StateSink<S> + ?Sized> StateSink<S> for &mut T {
    fn commit(&mut self, expected_index: u64, next: &S) -> Result<()> {
        (**self).commit(expected_index, next)
    }
}
