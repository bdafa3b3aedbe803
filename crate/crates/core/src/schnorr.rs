//! Classical Schnorr signatures, `σ = (s, e)` with `e = H0(M ‖ R)`.
//!
//! Kept as the ancestor of the K-time schemes and as a benchmark baseline:
//! one exponentiation to sign, one double exponentiation to verify.

use rand_core::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::suite::Suite;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchnorrKeyPair<G: Group> {
    pub(crate) secret: G::Scalar,
    pub public: G::Element,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchnorrSignature<G: Group> {
    pub s: G::Scalar,
    pub e: G::Scalar,
}

impl<G: Group> SchnorrKeyPair<G> {
    /// Rebuilds the key pair from a known private scalar.
    pub fn from_secret(suite: &Suite<G>, secret: G::Scalar) -> Self {
        let public = suite.group.exp_generator(&secret);
        SchnorrKeyPair { secret, public }
    }

    pub fn secret(&self) -> &G::Scalar {
        &self.secret
    }
}

pub fn schnorr_keygen<G: Group, R: RngCore + CryptoRng + ?Sized>(
    suite: &Suite<G>,
    rng: &mut R,
) -> Result<SchnorrKeyPair<G>> {
    let y = suite.group.random_scalar(rng)?;
    Ok(SchnorrKeyPair::from_secret(suite, y))
}

pub fn schnorr_sign<G: Group, R: RngCore + CryptoRng + ?Sized>(
    suite: &Suite<G>,
    kp: &SchnorrKeyPair<G>,
    msg: &[u8],
    rng: &mut R,
) -> Result<SchnorrSignature<G>> {
    let r = suite.group.random_scalar(rng)?;
    Ok(sign_with_nonce(suite, kp, msg, &r).0)
}

/// Signs with a caller-chosen nonce, also returning the commitment `R`.
#[cfg(any(test, feature = "test-seams"))]
pub fn schnorr_sign_with_nonce<G: Group>(
    suite: &Suite<G>,
    kp: &SchnorrKeyPair<G>,
    msg: &[u8],
    r: &G::Scalar,
) -> (SchnorrSignature<G>, G::Element) {
    sign_with_nonce(suite, kp, msg, r)
}

fn sign_with_nonce<G: Group>(
    suite: &Suite<G>,
    kp: &SchnorrKeyPair<G>,
    msg: &[u8],
    r: &G::Scalar,
) -> (SchnorrSignature<G>, G::Element) {
    let g = &suite.group;
    let commitment = g.exp_generator(r);
    let e = suite.h0(&[msg, &g.encode_element(&commitment)]);
    let s = g.scalar_sub_mul(r, &e, &kp.secret);
    (SchnorrSignature { s, e }, commitment)
}

pub fn schnorr_verify<G: Group>(suite: &Suite<G>, public: &G::Element, msg: &[u8], sig: &SchnorrSignature<G>) -> bool {
    let g = &suite.group;
    let commitment = g.double_exp(public, &sig.e, &sig.s);
    suite.h0(&[msg, &g.encode_element(&commitment)]) == sig.e
}

impl<G: Group> SchnorrSignature<G> {
    /// `s ‖ e`, `2·scalar_len` octets.
    pub fn to_bytes(&self, group: &G) -> Vec<u8> {
        let mut out = group.encode_scalar(&self.s);
        out.extend_from_slice(&group.encode_scalar(&self.e));
        out
    }

    pub fn from_bytes(group: &G, bytes: &[u8]) -> Result<Self> {
        let l = group.scalar_len();
        if bytes.len() != 2 * l {
            return Err(Error::malformed(format!("schnorr signature must be {} octets", 2 * l)));
        }
        Ok(SchnorrSignature { s: group.decode_scalar(&bytes[..l])?, e: group.decode_scalar(&bytes[l..])? })
    }
}
