//! ETA: K-time Schnorr variant with a hash-chained ephemeral scalar.
//!
//! The verifier holds `v_j = H1(R_j)` for every index; the signer holds only
//! `(y, r_j)` and steps the chain `r_{j+1} = H0(r_j)` after each signature,
//! erasing the previous link. Each signature carries a fresh 128-bit `x_j`
//! in place of the commitment:
//!
//! ```text
//! e_j = H0(M ‖ j ‖ x_j)        (j as 8 octets, big-endian)
//! s_j = r_j - e_j·y mod q
//! ```

use rand_core::{CryptoRng, RngCore};
use subtle::ConstantTimeEq;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::state::StateSink;
use crate::suite::Suite;

/// Octets of per-signature randomness (κ = 128).
pub const NONCE_LEN: usize = 16;
/// Octets used for the index on the wire.
pub const INDEX_LEN: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaSigningState<G: Group> {
    pub(crate) secret: G::Scalar,
    pub(crate) chain: G::Scalar,
    pub(crate) index: u64,
    pub(crate) capacity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaPublicKey<G: Group> {
    pub public: G::Element,
    /// `v_j`, each `scalar_len` octets.
    pub tokens: Vec<Vec<u8>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaSignature<G: Group> {
    pub s: G::Scalar,
    pub x: [u8; NONCE_LEN],
    pub index: u32,
}

impl<G: Group> EtaSigningState<G> {
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn remaining(&self) -> u64 {
        self.capacity - self.index
    }

    pub(crate) fn from_parts(secret: G::Scalar, chain: G::Scalar, index: u64, capacity: u64) -> Self {
        EtaSigningState { secret, chain, index, capacity }
    }
}

impl<G: Group> EtaPublicKey<G> {
    pub fn capacity(&self) -> u64 {
        self.tokens.len() as u64
    }
}

fn check_capacity(capacity: u64) -> Result<()> {
    if capacity == 0 {
        return Err(Error::ZeroCapacity);
    }
    if capacity > u32::MAX as u64 + 1 {
        return Err(Error::InvalidParams(format!("capacity {capacity} exceeds the 4-octet index")));
    }
    Ok(())
}

pub fn eta_keygen<G: Group, R: RngCore + CryptoRng + ?Sized>(
    suite: &Suite<G>,
    capacity: u64,
    rng: &mut R,
) -> Result<(EtaSigningState<G>, EtaPublicKey<G>)> {
    check_capacity(capacity)?;
    let y = suite.group.random_scalar(rng)?;
    let r0 = suite.group.random_scalar(rng)?;
    eta_keygen_from(suite, y, r0, capacity)
}

/// Deterministic key generation from a chosen private scalar and chain seed.
pub fn eta_keygen_from<G: Group>(
    suite: &Suite<G>,
    secret: G::Scalar,
    chain_seed: G::Scalar,
    capacity: u64,
) -> Result<(EtaSigningState<G>, EtaPublicKey<G>)> {
    check_capacity(capacity)?;
    let g = &suite.group;
    let public = g.exp_generator(&secret);
    let mut r = chain_seed;
    let mut tokens = Vec::with_capacity(capacity as usize);
    for _ in 0..capacity {
        let commitment = g.exp_generator(&r);
        tokens.push(suite.h1_enc(&[&g.encode_element(&commitment)]));
        r = chain_step(suite, &r);
    }
    let state = EtaSigningState { secret, chain: chain_seed, index: 0, capacity };
    Ok((state, EtaPublicKey { public, tokens }))
}

fn chain_step<G: Group>(suite: &Suite<G>, r: &G::Scalar) -> G::Scalar {
    suite.h0(&[&suite.group.encode_scalar(r)])
}

fn challenge<G: Group>(suite: &Suite<G>, msg: &[u8], index: u64, x: &[u8]) -> G::Scalar {
    suite.h0(&[msg, &index.to_be_bytes(), x])
}

pub fn eta_sign<G: Group, R, S>(
    suite: &Suite<G>,
    state: &mut EtaSigningState<G>,
    msg: &[u8],
    rng: &mut R,
    sink: S,
) -> Result<EtaSignature<G>>
where
    R: RngCore + CryptoRng + ?Sized,
    S: StateSink<EtaSigningState<G>>,
{
    if state.index >= state.capacity {
        return Err(Error::KeyExhausted { capacity: state.capacity });
    }
    let mut x = [0u8; NONCE_LEN];
    rng.try_fill_bytes(&mut x)?;
    sign_with_x(suite, state, msg, x, sink)
}

/// Signs with caller-chosen randomness `x`.
#[cfg(any(test, feature = "test-seams"))]
pub fn eta_sign_with_x<G: Group, S: StateSink<EtaSigningState<G>>>(
    suite: &Suite<G>,
    state: &mut EtaSigningState<G>,
    msg: &[u8],
    x: [u8; NONCE_LEN],
    sink: S,
) -> Result<EtaSignature<G>> {
    sign_with_x(suite, state, msg, x, sink)
}

fn sign_with_x<G: Group, S: StateSink<EtaSigningState<G>>>(
    suite: &Suite<G>,
    state: &mut EtaSigningState<G>,
    msg: &[u8],
    x: [u8; NONCE_LEN],
    mut sink: S,
) -> Result<EtaSignature<G>> {
    let j = state.index;
    if j >= state.capacity {
        return Err(Error::KeyExhausted { capacity: state.capacity });
    }
    let g = &suite.group;
    let e = challenge(suite, msg, j, &x);
    let s = g.scalar_sub_mul(&state.chain, &e, &state.secret);

    let next = EtaSigningState {
        secret: state.secret,
        chain: chain_step(suite, &state.chain),
        index: j + 1,
        capacity: state.capacity,
    };
    let committed = sink.commit(j, &next);
    // The old chain link is gone either way.
    *state = next;
    committed.map_err(persist_failure)?;
    Ok(EtaSignature { s, x, index: j as u32 })
}

pub(crate) fn persist_failure(e: Error) -> Error {
    match e {
        e @ (Error::StaleState { .. } | Error::StatePersistFailure(_)) => e,
        other => Error::StatePersistFailure(Box::new(other)),
    }
}

pub fn eta_verify<G: Group>(suite: &Suite<G>, pk: &EtaPublicKey<G>, msg: &[u8], sig: &EtaSignature<G>) -> bool {
    let Some(token) = pk.tokens.get(sig.index as usize) else {
        return false;
    };
    let g = &suite.group;
    let e = challenge(suite, msg, sig.index as u64, &sig.x);
    let commitment = g.double_exp(&pk.public, &e, &sig.s);
    let digest = suite.h1_enc(&[&g.encode_element(&commitment)]);
    bool::from(digest.ct_eq(token))
}

impl<G: Group> EtaSignature<G> {
    /// `s ‖ x ‖ j`: `scalar_len + 16 + 4` octets.
    pub fn encoded_len(group: &G) -> usize {
        group.scalar_len() + NONCE_LEN + INDEX_LEN
    }

    pub fn to_bytes(&self, group: &G) -> Vec<u8> {
        let mut out = group.encode_scalar(&self.s);
        out.extend_from_slice(&self.x);
        out.extend_from_slice(&self.index.to_be_bytes());
        out
    }

    pub fn from_bytes(group: &G, bytes: &[u8]) -> Result<Self> {
        let l = group.scalar_len();
        if bytes.len() != Self::encoded_len(group) {
            return Err(Error::malformed(format!("ETA signature must be {} octets", Self::encoded_len(group))));
        }
        let s = group.decode_scalar(&bytes[..l])?;
        let x = bytes[l..l + NONCE_LEN].try_into().unwrap();
        let index = u32::from_be_bytes(bytes[l + NONCE_LEN..].try_into().unwrap());
        Ok(EtaSignature { s, x, index })
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    use super::*;
    use crate::fdh::DigestAlg;
    use crate::group::{Ristretto255, ToyGroup};
    use crate::state::InMemory;

    fn toy() -> Suite<ToyGroup> {
        Suite::new(ToyGroup::canonical(), DigestAlg::Blake2s256)
    }

    #[test]
    fn keygen_transcript() {
        let s = toy();
        let g = &s.group;
        let (state, pk) = eta_keygen_from(&s, g.scalar(3), g.scalar(4), 3).unwrap();
        assert_eq!(pk.public.value(), 8);
        assert_eq!(pk.tokens[0], s.h1_enc(&[&[16u8]]));
        // r_1 = H0(encode(4)), R_1 = 2^r_1 mod 23
        let r1 = s.h0(&[&[4u8]]).value();
        let big_r1 = crate::group::toy::pow_mod(2, r1, 23) as u8;
        assert_eq!(pk.tokens[1], s.h1_enc(&[&[big_r1]]));
        let r2 = s.h0(&[&[r1 as u8]]).value();
        let big_r2 = crate::group::toy::pow_mod(2, r2, 23) as u8;
        assert_eq!(pk.tokens[2], s.h1_enc(&[&[big_r2]]));
        assert_eq!(state.chain.value(), 4);
    }

    #[test]
    fn keygen_exponentiation_count_and_lengths() {
        let s = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for k in [1u64, 2, 8, 128] {
            let before = s.group.counter().snapshot();
            let (_, pk) = eta_keygen(&s, k, &mut rng).unwrap();
            assert_eq!(pk.capacity(), k);
            // K ephemeral commitments plus the long-term Y
            assert_eq!(s.group.counter().snapshot().since(&before).exp, k + 1);
        }
        assert!(matches!(eta_keygen(&s, 0, &mut rng), Err(Error::ZeroCapacity)));
    }

    #[test]
    fn sign_transcript_with_forced_x() {
        let s = toy();
        let g = &s.group;
        let (mut state, pk) = eta_keygen_from(&s, g.scalar(3), g.scalar(4), 2).unwrap();
        let x = [7u8; NONCE_LEN];
        let sig = eta_sign_with_x(&s, &mut state, b"eta", x, InMemory).unwrap();
        let mut input = b"eta".to_vec();
        input.extend_from_slice(&0u64.to_be_bytes());
        input.extend_from_slice(&x);
        let e = s.h0(&[&input]).value();
        assert_eq!(sig.s.value(), (4 + 33 - e * 3 % 11) % 11);
        assert_eq!(sig.index, 0);
        assert!(eta_verify(&s, &pk, b"eta", &sig));
        // chain advanced and old link erased
        assert_eq!(state.chain.value(), s.h0(&[&[4u8]]).value());
        assert_eq!(state.index, 1);
    }

    #[test]
    fn exhaustion() {
        let s = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let (mut state, _) = eta_keygen(&s, 2, &mut rng).unwrap();
        eta_sign(&s, &mut state, b"a", &mut rng, InMemory).unwrap();
        eta_sign(&s, &mut state, b"b", &mut rng, InMemory).unwrap();
        assert!(matches!(eta_sign(&s, &mut state, b"c", &mut rng, InMemory), Err(Error::KeyExhausted { capacity: 2 })));
    }

    #[test]
    fn fresh_randomness_per_signature() {
        let s = Suite::new(Ristretto255::new(), DigestAlg::Blake2s256);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let (mut state, pk) = eta_keygen(&s, 2, &mut rng).unwrap();
        let a = eta_sign(&s, &mut state, b"same", &mut rng, InMemory).unwrap();
        let b = eta_sign(&s, &mut state, b"same", &mut rng, InMemory).unwrap();
        assert_ne!(a.x, b.x);
        assert!(eta_verify(&s, &pk, b"same", &a));
        assert!(eta_verify(&s, &pk, b"same", &b));
        // each signature binds to its own token only
        assert!(!eta_verify(&s, &pk, b"same", &EtaSignature { index: 1, ..a }));
        assert!(!eta_verify(&s, &pk, b"same", &EtaSignature { index: 2, ..a }));
    }

    #[test]
    fn wire_layout() {
        let s = Suite::new(Ristretto255::new(), DigestAlg::Blake2s256);
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let (mut state, _) = eta_keygen(&s, 1, &mut rng).unwrap();
        let sig = eta_sign(&s, &mut state, b"m", &mut rng, InMemory).unwrap();
        let bytes = sig.to_bytes(&s.group);
        assert_eq!(bytes.len(), 32 + 16 + 4);
        assert_eq!(&bytes[..32], s.group.encode_scalar(&sig.s).as_slice());
        assert_eq!(&bytes[32..48], &sig.x);
        assert_eq!(&bytes[48..], &[0, 0, 0, 0]);
        assert_eq!(EtaSignature::from_bytes(&s.group, &bytes).unwrap(), sig);
    }
}
