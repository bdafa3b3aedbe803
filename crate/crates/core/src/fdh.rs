//! Full-domain hashes `H0, H1 : {0,1}* → Z_q*`.
//!
//! Expand-then-reduce: the digest is run in counter mode over
//! `domain ‖ msg ‖ 0xFF^retry ‖ ctr32` until `2·bitlen(q)` bits are
//! available, the result is reduced mod `q`, and a zero output is re-derived
//! with one more `0xFF` appended to the message.

use blake2::Blake2s256;
use sha2::{Digest, Sha256};

use crate::group::Group;

/// Selects between the two independent hash functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum HashId {
    H0 = 0x00,
    H1 = 0x01,
}

/// Underlying 256-bit digest.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum DigestAlg {
    #[default]
    Blake2s256 = 0x01,
    Sha256 = 0x02,
}

impl DigestAlg {
    pub fn from_octet(b: u8) -> Option<Self> {
        match b {
            0x01 => Some(DigestAlg::Blake2s256),
            0x02 => Some(DigestAlg::Sha256),
            _ => None,
        }
    }

    /// Fills `out` with `D(parts ‖ ctr32)` for `ctr = 0, 1, …`.
    fn expand(self, parts: &[&[u8]], out: &mut [u8]) {
        match self {
            DigestAlg::Blake2s256 => expand::<Blake2s256>(parts, out),
            DigestAlg::Sha256 => expand::<Sha256>(parts, out),
        }
    }
}

fn expand<D: Digest + Clone>(parts: &[&[u8]], out: &mut [u8]) {
    let mut prefix = D::new();
    for p in parts {
        prefix.update(p);
    }
    for (ctr, chunk) in out.chunks_mut(32).enumerate() {
        let block = prefix.clone().chain_update((ctr as u32).to_be_bytes()).finalize();
        chunk.copy_from_slice(&block[..chunk.len()]);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FdhParams {
    pub hash_id: HashId,
    pub digest: DigestAlg,
}

impl FdhParams {
    pub fn h0(digest: DigestAlg) -> Self {
        FdhParams { hash_id: HashId::H0, digest }
    }

    pub fn h1(digest: DigestAlg) -> Self {
        FdhParams { hash_id: HashId::H1, digest }
    }
}

/// Hashes `msg` onto `[1, q-1]`.
pub fn fdh_eval<G: Group>(group: &G, params: FdhParams, msg: &[u8]) -> G::Scalar {
    fdh_eval_parts(group, params, &[msg])
}

/// Same as [`fdh_eval`], over the concatenation of `parts`.
pub fn fdh_eval_parts<G: Group>(group: &G, params: FdhParams, parts: &[&[u8]]) -> G::Scalar {
    let wide_len = (2 * group.order_bits() as usize).div_ceil(8);
    let domain = [params.hash_id as u8];
    let mut retry_pad = Vec::new();
    let mut wide = vec![0u8; wide_len];
    loop {
        let mut input: Vec<&[u8]> = Vec::with_capacity(parts.len() + 2);
        input.push(&domain);
        input.extend_from_slice(parts);
        input.push(&retry_pad);
        params.digest.expand(&input, &mut wide);
        let s = group.scalar_reduce_be(&wide);
        if !group.scalar_is_zero(&s) {
            return s;
        }
        retry_pad.push(0xFF);
    }
}

/// `encode(fdh_eval(msg))`, exactly `scalar_len` octets. Used as an XOR mask
/// and as a token digest.
pub fn fdh_eval_encoded<G: Group>(group: &G, params: FdhParams, msg: &[u8]) -> Vec<u8> {
    group.encode_scalar(&fdh_eval(group, params, msg))
}

/// Plain BLAKE2s-256, used for key-file integrity tags.
pub(crate) fn integrity_digest(bytes: &[u8]) -> [u8; 32] {
    Blake2s256::digest(bytes).into()
}
