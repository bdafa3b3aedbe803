//! SEMECS: K-time signatures whose signer does no group arithmetic.
//!
//! Key generation fixes every ephemeral key in advance from the private
//! scalar `y` and publishes two tokens per index:
//!
//! ```text
//! r_j = H0(y ‖ j)        z_j = H1(y ‖ j)        R_j = α^{r_j}
//! γ_j = z_j ⊕ H0(R_j)    β_j = H1(R_j)
//! ```
//!
//! Signing index `j` re-derives `r_j` and `z_j`, masks the first `L` octets
//! of the message with `z_j`, and needs only hashes plus one multiplication
//! and one subtraction mod `q`:
//!
//! ```text
//! c   = M̄ ⊕ z_j
//! e   = H0(c ‖ M̃ ‖ padded)
//! s   = r_j - e·y
//! ```
//!
//! The verifier recomputes `R' = Y^e · α^s`, checks `H1(R') = β_j`, and only
//! then unmasks `M̄ = γ_j ⊕ H0(R') ⊕ c`.
//!
//! All hash inputs use big-endian encodings: `y` as `L` octets, `j` as 8
//! octets, `R` as the group's element encoding.

mod envelope;
mod message;

use subtle::ConstantTimeEq;

pub use envelope::{SignedEnvelope, INDEXED_HEADER_LEN, UNINDEXED_HEADER_LEN, VERSION_INDEXED, VERSION_UNINDEXED};
pub use message::{join_message, split_message, SplitMessage};

use crate::error::{Error, Result};
use crate::eta::persist_failure;
use crate::group::{xor_into, Group};
use crate::keystore::build_search_index;
use crate::state::StateSink;
use crate::suite::Suite;
use rand_core::{CryptoRng, RngCore};

/// Fresh-secret attempts before [`semecs_keygen`] gives up on colliding tokens.
pub const KEYGEN_ATTEMPTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemecsSigningState<G: Group> {
    pub(crate) secret: G::Scalar,
    pub(crate) index: u64,
    pub(crate) capacity: u64,
}

impl<G: Group> SemecsSigningState<G> {
    pub(crate) fn from_parts(secret: G::Scalar, index: u64, capacity: u64) -> Self {
        SemecsSigningState { secret, index, capacity }
    }

    /// Next index to be used.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn remaining(&self) -> u64 {
        self.capacity - self.index
    }

    /// Serialized private key: `encode(y)`.
    pub fn secret_bytes(&self, group: &G) -> Vec<u8> {
        group.encode_scalar(&self.secret)
    }

    /// Moves the counter back so an index can be signed twice.
    /// Exists solely to demonstrate key extraction.
    #[cfg(any(test, feature = "test-seams"))]
    pub fn rewind_to(&mut self, index: u64) {
        self.index = index;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemecsPublicKey<G: Group> {
    pub public: G::Element,
    scalar_len: usize,
    /// `γ_0 ‖ γ_1 ‖ …`, `L` octets each.
    gammas: Vec<u8>,
    /// `β_0 ‖ β_1 ‖ …`, `L` octets each.
    betas: Vec<u8>,
    /// Indices ordered by ascending `β`; absent when two `β` collide.
    search_index: Option<Vec<u32>>,
}

impl<G: Group> SemecsPublicKey<G> {
    /// Assembles a key from flat token arrays, building the search index when
    /// the `β` values are distinct.
    pub fn from_tokens(public: G::Element, scalar_len: usize, gammas: Vec<u8>, betas: Vec<u8>) -> Result<Self> {
        if scalar_len == 0 || gammas.len() != betas.len() || !gammas.len().is_multiple_of(scalar_len) || gammas.is_empty() {
            return Err(Error::malformed("token arrays do not match the scalar length"));
        }
        let search_index = build_search_index(&betas, scalar_len).ok();
        Ok(SemecsPublicKey { public, scalar_len, gammas, betas, search_index })
    }

    pub fn capacity(&self) -> u64 {
        (self.betas.len() / self.scalar_len) as u64
    }

    pub fn scalar_len(&self) -> usize {
        self.scalar_len
    }

    pub fn gamma(&self, j: usize) -> &[u8] {
        &self.gammas[j * self.scalar_len..(j + 1) * self.scalar_len]
    }

    pub fn beta(&self, j: usize) -> &[u8] {
        &self.betas[j * self.scalar_len..(j + 1) * self.scalar_len]
    }

    pub fn search_index(&self) -> Option<&[u32]> {
        self.search_index.as_deref()
    }

    /// `Y ‖ γ_0 ‖ β_0 ‖ … ‖ γ_{K-1} ‖ β_{K-1}`.
    pub fn payload_bytes(&self, group: &G) -> Vec<u8> {
        let k = self.capacity() as usize;
        let mut out = Vec::with_capacity(group.element_len() + 2 * k * self.scalar_len);
        out.extend_from_slice(&group.encode_element(&self.public));
        for j in 0..k {
            out.extend_from_slice(self.gamma(j));
            out.extend_from_slice(self.beta(j));
        }
        out
    }

    /// Inverse of [`payload_bytes`](Self::payload_bytes) for `capacity` tokens.
    pub fn from_payload(group: &G, capacity: u64, bytes: &[u8]) -> Result<Self> {
        let l = group.scalar_len();
        let el = group.element_len();
        let k = usize::try_from(capacity).map_err(|_| Error::malformed("capacity overflows memory"))?;
        let expected = k
            .checked_mul(2 * l)
            .and_then(|t| t.checked_add(el))
            .ok_or_else(|| Error::malformed("capacity overflows memory"))?;
        if k == 0 || bytes.len() != expected {
            return Err(Error::malformed(format!("public key payload must be {expected} octets")));
        }
        let public = group.decode_element(&bytes[..el])?;
        let mut gammas = Vec::with_capacity(k * l);
        let mut betas = Vec::with_capacity(k * l);
        for pair in bytes[el..].chunks_exact(2 * l) {
            gammas.extend_from_slice(&pair[..l]);
            betas.extend_from_slice(&pair[l..]);
        }
        Self::from_tokens(public, l, gammas, betas)
    }
}

fn derivation_input<G: Group>(group: &G, secret: &G::Scalar, j: u64) -> Vec<u8> {
    let mut input = group.encode_scalar(secret);
    input.extend_from_slice(&j.to_be_bytes());
    input
}

/// Deterministic key generation from a chosen private scalar.
///
/// Never fails on colliding `β` values; such a key verifies by index but has
/// no search index.
pub fn semecs_keygen_from_secret<G: Group>(
    suite: &Suite<G>,
    secret: G::Scalar,
    capacity: u64,
) -> Result<(SemecsSigningState<G>, SemecsPublicKey<G>)> {
    if capacity == 0 {
        return Err(Error::ZeroCapacity);
    }
    if capacity > u32::MAX as u64 + 1 {
        return Err(Error::InvalidParams(format!("capacity {capacity} exceeds the 4-octet index")));
    }
    let g = &suite.group;
    let l = g.scalar_len();
    let public = g.exp_generator(&secret);
    let mut gammas = Vec::with_capacity(capacity as usize * l);
    let mut betas = Vec::with_capacity(capacity as usize * l);
    for j in 0..capacity {
        let input = derivation_input(g, &secret, j);
        let r = suite.h0(&[&input]);
        let z = suite.h1_enc(&[&input]);
        let commitment = g.encode_element(&g.exp_generator(&r));
        let mut gamma = z;
        xor_into(&mut gamma, &suite.h0_enc(&[&commitment]));
        gammas.extend_from_slice(&gamma);
        betas.extend_from_slice(&suite.h1_enc(&[&commitment]));
    }
    let pk = SemecsPublicKey::from_tokens(public, l, gammas, betas)?;
    Ok((SemecsSigningState { secret, index: 0, capacity }, pk))
}

/// Random key generation. Redraws `y` when two `β` values collide, failing
/// with [`Error::DuplicateBeta`] after [`KEYGEN_ATTEMPTS`] tries.
pub fn semecs_keygen<G: Group, R: RngCore + CryptoRng + ?Sized>(
    suite: &Suite<G>,
    capacity: u64,
    rng: &mut R,
) -> Result<(SemecsSigningState<G>, SemecsPublicKey<G>)> {
    let mut last = None;
    for _ in 0..KEYGEN_ATTEMPTS {
        let y = suite.group.random_scalar(rng)?;
        let (state, pk) = semecs_keygen_from_secret(suite, y, capacity)?;
        match build_search_index(&pk.betas, pk.scalar_len) {
            Ok(_) => return Ok((state, pk)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn challenge<G: Group>(suite: &Suite<G>, c: &[u8], m_tilde: &[u8], padded: bool) -> G::Scalar {
    suite.h0(&[c, m_tilde, &[padded as u8]])
}

/// Signs the next index. The counter is committed through `sink` before the
/// envelope is produced; on commit failure the index is spent and nothing is
/// released.
pub fn semecs_sign<G: Group, S: StateSink<SemecsSigningState<G>>>(
    suite: &Suite<G>,
    state: &mut SemecsSigningState<G>,
    msg: &[u8],
    mut sink: S,
) -> Result<SignedEnvelope> {
    let j = state.index;
    if j >= state.capacity {
        return Err(Error::KeyExhausted { capacity: state.capacity });
    }
    let split = split_message(msg, suite.scalar_len())?;
    let next = SemecsSigningState { index: j + 1, ..state.clone() };
    let committed = sink.commit(j, &next);
    state.index = j + 1;
    committed.map_err(persist_failure)?;
    Ok(sign_at(suite, &state.secret, j, split))
}

fn sign_at<G: Group>(suite: &Suite<G>, secret: &G::Scalar, j: u64, split: SplitMessage) -> SignedEnvelope {
    let g = &suite.group;
    let input = derivation_input(g, secret, j);
    let r = suite.h0(&[&input]);
    let mut c = split.head;
    xor_into(&mut c, &suite.h1_enc(&[&input]));
    let e = challenge(suite, &c, &split.tail, split.padded);
    let s = g.scalar_sub_mul(&r, &e, secret);
    SignedEnvelope { index: Some(j as u32), padded: split.padded, s: g.encode_scalar(&s), c, m_tilde: split.tail }
}

/// Recomputes `(e, s)` from an envelope.
pub fn semecs_transcript<G: Group>(suite: &Suite<G>, env: &SignedEnvelope) -> Result<(G::Scalar, G::Scalar)> {
    let l = suite.scalar_len();
    if env.c.len() != l {
        return Err(Error::malformed("c must be exactly scalar_len octets"));
    }
    let s = suite.group.decode_scalar(&env.s)?;
    Ok((challenge(suite, &env.c, &env.m_tilde, env.padded), s))
}

/// Encoded `R' = Y^e · α^s`, or `None` if the envelope is malformed.
fn recompute_commitment<G: Group>(suite: &Suite<G>, pk: &SemecsPublicKey<G>, env: &SignedEnvelope) -> Option<Vec<u8>> {
    if env.padded && !env.m_tilde.is_empty() {
        return None;
    }
    let (e, s) = semecs_transcript(suite, env).ok()?;
    let g = &suite.group;
    Some(g.encode_element(&g.double_exp(&pk.public, &e, &s)))
}

/// Token check and message recovery for a known index.
fn open<G: Group>(
    suite: &Suite<G>,
    pk: &SemecsPublicKey<G>,
    j: usize,
    commitment: &[u8],
    env: &SignedEnvelope,
) -> Option<Vec<u8>> {
    let digest = suite.h1_enc(&[commitment]);
    if !bool::from(digest.ct_eq(pk.beta(j))) {
        return None;
    }
    let mut head = pk.gamma(j).to_vec();
    xor_into(&mut head, &suite.h0_enc(&[commitment]));
    xor_into(&mut head, &env.c);
    join_message(&head, &env.m_tilde, env.padded)
}

/// Verifies against the token named by the envelope's index and returns the
/// recovered message.
pub fn semecs_verify_indexed<G: Group>(
    suite: &Suite<G>,
    pk: &SemecsPublicKey<G>,
    env: &SignedEnvelope,
) -> Option<Vec<u8>> {
    let j = env.index? as u64;
    if j >= pk.capacity() {
        return None;
    }
    let commitment = recompute_commitment(suite, pk, env)?;
    open(suite, pk, j as usize, &commitment, env)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Index found and recovered message, on success.
    pub verified: Option<(u32, Vec<u8>)>,
    /// Number of `β` comparisons the binary search made.
    pub comparisons: u32,
}

/// Verifies without trusting the envelope's index: the recomputed `H1(R')` is
/// binary-searched among the sorted `β` values.
pub fn semecs_verify_search<G: Group>(
    suite: &Suite<G>,
    pk: &SemecsPublicKey<G>,
    env: &SignedEnvelope,
) -> SearchOutcome {
    let miss = |comparisons| SearchOutcome { verified: None, comparisons };
    let Some(order) = pk.search_index() else {
        return miss(0);
    };
    let Some(commitment) = recompute_commitment(suite, pk, env) else {
        return miss(0);
    };
    let target = suite.h1_enc(&[&commitment]);

    let mut comparisons = 0;
    let (mut lo, mut hi) = (0usize, order.len());
    let mut found = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let j = order[mid] as usize;
        comparisons += 1;
        match pk.beta(j).cmp(target.as_slice()) {
            std::cmp::Ordering::Less => lo = mid + 1,
            std::cmp::Ordering::Greater => hi = mid,
            std::cmp::Ordering::Equal => {
                found = Some(j);
                break;
            }
        }
    }
    let Some(j) = found else {
        return miss(comparisons);
    };
    SearchOutcome { verified: open(suite, pk, j, &commitment, env).map(|m| (j as u32, m)), comparisons }
}

/// Solves `r ≡ s + e·y ≡ s* + e*·y (mod q)` for `y` given two transcripts
/// that verified against the same token. Shows why an index must never be
/// used twice.
pub fn extract_private_key<G: Group>(
    group: &G,
    public: &G::Element,
    first: (G::Scalar, G::Scalar),
    second: (G::Scalar, G::Scalar),
) -> Result<G::Scalar> {
    let (e, s) = first;
    let (e_star, s_star) = second;
    let inv = group.scalar_invert(&group.scalar_sub(&e, &e_star)).ok_or(Error::NotExtractable)?;
    let y = group.scalar_mul(&group.scalar_sub(&s_star, &s), &inv);
    if group.exp_generator(&y) != *public {
        return Err(Error::NotExtractable);
    }
    Ok(y)
}
