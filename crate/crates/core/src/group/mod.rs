//! Prime-order group abstraction.
//!
//! Every scheme in this crate is written against [`Group`], which bundles the
//! element arithmetic (exponentiation written multiplicatively, `α^k`), the
//! scalar field `Z_q`, and fixed-length big-endian encodings for both.
//!
//! Two backends exist:
//!
//! * [`ToyGroup`]: a Schnorr subgroup of `Z_p*` with word-sized moduli. The
//!   canonical instance is `p = 23, q = 11, α = 2`. Small enough that the
//!   discrete log can be brute forced, which the tests rely on.
//! * [`Ristretto255`]: the prime-order Ristretto group over Curve25519, with
//!   `|q| = 253` bits and 32-octet encodings for both scalars and elements.
//!
//! Each backend carries an [`OpCounter`] that records every exponentiation
//! it performs.

mod counter;
mod ristretto;
pub(crate) mod toy;

use std::fmt::Debug;

use rand_core::{CryptoRng, RngCore};

use crate::error::Result;

pub use counter::{OpCounter, OpCounts};
pub use ristretto::Ristretto255;
pub use toy::ToyGroup;

/// Wire identifier of a group backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum GroupId {
    Toy = 0x01,
    Production = 0x02,
}

impl GroupId {
    pub fn from_octet(b: u8) -> Option<Self> {
        match b {
            0x01 => Some(GroupId::Toy),
            0x02 => Some(GroupId::Production),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupId::Toy => "toy",
            GroupId::Production => "prod",
        }
    }
}

/// A cyclic group of prime order `q` with a distinguished generator `α`.
/// Equality compares parameters only, never operation counts.
pub trait Group: Clone + Debug + Eq + Send + Sync {
    type Scalar: Copy + Eq + Debug + Send + Sync;
    type Element: Copy + Eq + Debug + Send + Sync;

    const ID: GroupId;

    /// Bit length of `q`.
    fn order_bits(&self) -> u32;

    /// Octets in a canonical scalar encoding, `ceil(bitlen(q) / 8)`.
    fn scalar_len(&self) -> usize {
        (self.order_bits() as usize).div_ceil(8)
    }

    /// Octets in a canonical element encoding.
    fn element_len(&self) -> usize;

    fn counter(&self) -> &OpCounter;

    // ---- scalars ----

    fn scalar_from_u64(&self, v: u64) -> Self::Scalar;
    fn scalar_add(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn scalar_sub(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn scalar_mul(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    /// Multiplicative inverse, `None` for zero.
    fn scalar_invert(&self, a: &Self::Scalar) -> Option<Self::Scalar>;
    fn scalar_is_zero(&self, a: &Self::Scalar) -> bool;

    /// `(r - e·y) mod q`.
    fn scalar_sub_mul(&self, r: &Self::Scalar, e: &Self::Scalar, y: &Self::Scalar) -> Self::Scalar {
        self.scalar_sub(r, &self.scalar_mul(e, y))
    }

    /// Interprets `bytes` as a big-endian integer and reduces it mod `q`.
    /// Callers supply at least `2·bitlen(q)` bits to keep the bias negligible.
    fn scalar_reduce_be(&self, bytes: &[u8]) -> Self::Scalar;

    fn encode_scalar(&self, s: &Self::Scalar) -> Vec<u8>;
    fn decode_scalar(&self, bytes: &[u8]) -> Result<Self::Scalar>;

    /// Uniform scalar in `[1, q-1]`.
    fn random_scalar<R: RngCore + CryptoRng + ?Sized>(&self, rng: &mut R) -> Result<Self::Scalar>;

    // ---- elements ----

    fn generator(&self) -> Self::Element;
    fn identity(&self) -> Self::Element;

    /// `base^k`. Counted as one exponentiation.
    fn exp(&self, base: &Self::Element, k: &Self::Scalar) -> Self::Element;

    /// `α^k`. Counted as one exponentiation; backends may use a fixed-base table.
    fn exp_generator(&self, k: &Self::Scalar) -> Self::Element {
        self.exp(&self.generator(), k)
    }

    /// `y^e · α^s`, evaluated in a single interleaved pass.
    /// Counted as one double exponentiation.
    fn double_exp(&self, y: &Self::Element, e: &Self::Scalar, s: &Self::Scalar) -> Self::Element;

    /// Group operation. Counted as one multiplication.
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn encode_element(&self, x: &Self::Element) -> Vec<u8>;
    fn decode_element(&self, bytes: &[u8]) -> Result<Self::Element>;

    // ---- parameter serialization (key files) ----

    fn encode_params(&self) -> Vec<u8>;
    /// Parses parameters from the front of `bytes`, returning the group and
    /// the number of octets consumed.
    fn decode_params(bytes: &[u8]) -> Result<(Self, usize)>;
}

/// XOR of two equal-length octet strings.
pub(crate) fn xor_into(acc: &mut [u8], other: &[u8]) {
    debug_assert_eq!(acc.len(), other.len());
    for (a, b) in acc.iter_mut().zip(other) {
        *a ^= b;
    }
}
