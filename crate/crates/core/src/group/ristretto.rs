//! Production backend: the Ristretto group over Curve25519.
//!
//! Prime order `q = 2^252 + 27742317777372353535851937790883648493`, so
//! scalars and compressed elements are both 32 octets. Scalar arithmetic is
//! delegated to `curve25519-dalek`, which is constant time. Encodings here are
//! big-endian like everywhere else in the crate, i.e. byte-reversed relative
//! to dalek's native little-endian scalars.

use curve25519_dalek::constants::{RISTRETTO_BASEPOINT_POINT, RISTRETTO_BASEPOINT_TABLE};
use curve25519_dalek::ristretto::{CompressedRistretto, RistrettoPoint};
use curve25519_dalek::scalar::Scalar;
use curve25519_dalek::traits::Identity;
use rand_core::{CryptoRng, RngCore};
use subtle::ConstantTimeEq;

use super::{Group, GroupId, OpCounter};
use crate::error::{Error, Result};

const LEN: usize = 32;

#[derive(Clone, Debug, Default)]
pub struct Ristretto255 {
    counter: OpCounter,
}

impl PartialEq for Ristretto255 {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Ristretto255 {}

impl Ristretto255 {
    pub fn new() -> Self {
        Self::default()
    }
}

fn reduce_wide_be(bytes: &[u8; 64]) -> Scalar {
    let mut le = *bytes;
    le.reverse();
    Scalar::from_bytes_mod_order_wide(&le)
}

impl Group for Ristretto255 {
    type Scalar = Scalar;
    type Element = RistrettoPoint;

    const ID: GroupId = GroupId::Production;

    fn order_bits(&self) -> u32 {
        253
    }

    fn element_len(&self) -> usize {
        LEN
    }

    fn counter(&self) -> &OpCounter {
        &self.counter
    }

    fn scalar_from_u64(&self, v: u64) -> Scalar {
        Scalar::from(v)
    }

    fn scalar_add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }

    fn scalar_sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a - b
    }

    fn scalar_mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }

    fn scalar_invert(&self, a: &Scalar) -> Option<Scalar> {
        (!self.scalar_is_zero(a)).then(|| a.invert())
    }

    fn scalar_is_zero(&self, a: &Scalar) -> bool {
        bool::from(a.ct_eq(&Scalar::ZERO))
    }

    fn scalar_reduce_be(&self, bytes: &[u8]) -> Scalar {
        if bytes.len() <= 64 {
            let mut wide = [0u8; 64];
            wide[64 - bytes.len()..].copy_from_slice(bytes);
            return reduce_wide_be(&wide);
        }
        // Horner over 32-octet limbs for oversized inputs.
        let mut shift = [0u8; 64];
        shift[31] = 1; // 2^256, big-endian
        let radix = reduce_wide_be(&shift);
        let head = bytes.len() % LEN;
        let (first, rest) = bytes.split_at(if head == 0 { LEN } else { head });
        let mut acc = self.scalar_reduce_be(first);
        for limb in rest.chunks(LEN) {
            acc = acc * radix + self.scalar_reduce_be(limb);
        }
        acc
    }

    fn encode_scalar(&self, s: &Scalar) -> Vec<u8> {
        let mut out = s.to_bytes();
        out.reverse();
        out.to_vec()
    }

    fn decode_scalar(&self, bytes: &[u8]) -> Result<Scalar> {
        let mut le: [u8; LEN] =
            bytes.try_into().map_err(|_| Error::malformed(format!("expected {LEN} octets, got {}", bytes.len())))?;
        le.reverse();
        Option::from(Scalar::from_canonical_bytes(le)).ok_or_else(|| Error::malformed("scalar is not below q"))
    }

    fn random_scalar<R: RngCore + CryptoRng + ?Sized>(&self, rng: &mut R) -> Result<Scalar> {
        loop {
            let mut wide = [0u8; 64];
            rng.try_fill_bytes(&mut wide)?;
            let s = reduce_wide_be(&wide);
            if !self.scalar_is_zero(&s) {
                return Ok(s);
            }
        }
    }

    fn generator(&self) -> RistrettoPoint {
        RISTRETTO_BASEPOINT_POINT
    }

    fn identity(&self) -> RistrettoPoint {
        RistrettoPoint::identity()
    }

    fn exp(&self, base: &RistrettoPoint, k: &Scalar) -> RistrettoPoint {
        self.counter.count_exp();
        base * k
    }

    fn exp_generator(&self, k: &Scalar) -> RistrettoPoint {
        self.counter.count_exp();
        RISTRETTO_BASEPOINT_TABLE * k
    }

    fn double_exp(&self, y: &RistrettoPoint, e: &Scalar, s: &Scalar) -> RistrettoPoint {
        self.counter.count_double_exp();
        // Inputs are public on the verifier side, so the variable-time
        // interleaved routine is acceptable.
        RistrettoPoint::vartime_double_scalar_mul_basepoint(e, y, s)
    }

    fn mul(&self, a: &RistrettoPoint, b: &RistrettoPoint) -> RistrettoPoint {
        self.counter.count_mul();
        a + b
    }

    fn encode_element(&self, x: &RistrettoPoint) -> Vec<u8> {
        x.compress().to_bytes().to_vec()
    }

    fn decode_element(&self, bytes: &[u8]) -> Result<RistrettoPoint> {
        let compressed = CompressedRistretto::from_slice(bytes)
            .map_err(|_| Error::malformed(format!("expected {LEN} octets, got {}", bytes.len())))?;
        compressed.decompress().ok_or_else(|| Error::malformed("not a canonical ristretto encoding"))
    }

    fn encode_params(&self) -> Vec<u8> {
        Vec::new()
    }

    fn decode_params(_bytes: &[u8]) -> Result<(Self, usize)> {
        Ok((Ristretto255::new(), 0))
    }
}
