//! Schnorr subgroups of `Z_p*` with word-sized moduli.
//!
//! Test-only in spirit: nothing here is constant time, and the groups are far
//! too small to resist a discrete-log search (that is the point).

use rand_core::{CryptoRng, RngCore};

use super::{Group, GroupId, OpCounter};
use crate::error::{Error, Result};

/// Upper bound on `q` for [`ToyGroup::brute_force_dlog`].
pub const DLOG_SEARCH_LIMIT: u64 = 1 << 24;

const MAX_MODULUS_BITS: u32 = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToyScalar(u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToyElement(u64);

impl ToyScalar {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl ToyElement {
    pub fn value(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct ToyGroup {
    p: u64,
    q: u64,
    alpha: u64,
    counter: OpCounter,
}

impl PartialEq for ToyGroup {
    fn eq(&self, other: &Self) -> bool {
        (self.p, self.q, self.alpha) == (other.p, other.q, other.alpha)
    }
}

impl Eq for ToyGroup {}

impl ToyGroup {
    /// Validates `q | p-1`, `α^q ≡ 1`, `α ≠ 1` and primality of both moduli.
    pub fn new(p: u64, q: u64, alpha: u64) -> Result<Self> {
        if p < 5 || bit_len(p) > MAX_MODULUS_BITS {
            return Err(Error::InvalidParams(format!("modulus {p} out of range")));
        }
        if !is_prime(p) || !is_prime(q) {
            return Err(Error::InvalidParams(format!("p={p} and q={q} must both be prime")));
        }
        if !(p - 1).is_multiple_of(q) {
            return Err(Error::InvalidParams(format!("q={q} does not divide p-1")));
        }
        if alpha <= 1 || alpha >= p || pow_mod(alpha, q, p) != 1 {
            return Err(Error::InvalidParams(format!("alpha={alpha} does not have order q")));
        }
        Ok(ToyGroup { p, q, alpha, counter: OpCounter::default() })
    }

    /// `p = 23, q = 11, α = 2`.
    pub fn canonical() -> Self {
        ToyGroup::new(23, 11, 2).expect("canonical toy parameters are valid")
    }

    /// The largest safe-prime group `p = 2q + 1 < 2^bits`, with `α = 4`
    /// generating the quadratic residues.
    pub fn safe_prime_below(bits: u32) -> Result<Self> {
        if !(4..=MAX_MODULUS_BITS).contains(&bits) {
            return Err(Error::InvalidParams(format!("unsupported modulus size {bits}")));
        }
        let mut q = ((1u64 << bits) - 2) / 2;
        while q >= 3 {
            if sieve_passes(q) && sieve_passes(2 * q + 1) && is_prime(q) && is_prime(2 * q + 1) {
                return ToyGroup::new(2 * q + 1, q, 4);
            }
            q -= 1;
        }
        Err(Error::InvalidParams(format!("no safe prime below 2^{bits}")))
    }

    /// 24-bit safe-prime group. Large enough that K in the hundreds yields
    /// distinct tokens with high probability, small enough for
    /// [`brute_force_dlog`](Self::brute_force_dlog). Scalars and elements
    /// both encode to 3 octets.
    pub fn medium() -> Self {
        ToyGroup::safe_prime_below(24).expect("a 24-bit safe prime exists")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn scalar(&self, v: u64) -> ToyScalar {
        ToyScalar(v % self.q)
    }

    /// Wraps a raw value, checking subgroup membership.
    pub fn element(&self, v: u64) -> Result<ToyElement> {
        if v == 0 || v >= self.p || pow_mod(v, self.q, self.p) != 1 {
            return Err(Error::malformed(format!("{v} is not in the order-{} subgroup", self.q)));
        }
        Ok(ToyElement(v))
    }

    /// Exhaustive discrete log of `y` to base `α`. Refuses groups with
    /// `q > 2^24`. Uncounted.
    pub fn brute_force_dlog(&self, y: &ToyElement) -> Result<ToyScalar> {
        if self.q > DLOG_SEARCH_LIMIT {
            return Err(Error::OracleRefused(self.q));
        }
        let mut acc = 1u64;
        for k in 0..self.q {
            if acc == y.0 {
                return Ok(ToyScalar(k));
            }
            acc = mul_mod(acc, self.alpha, self.p);
        }
        Err(Error::malformed(format!("{} has no discrete log base {}", y.0, self.alpha)))
    }
}

impl Group for ToyGroup {
    type Scalar = ToyScalar;
    type Element = ToyElement;

    const ID: GroupId = GroupId::Toy;

    fn order_bits(&self) -> u32 {
        bit_len(self.q)
    }

    fn element_len(&self) -> usize {
        (bit_len(self.p) as usize).div_ceil(8)
    }

    fn counter(&self) -> &OpCounter {
        &self.counter
    }

    fn scalar_from_u64(&self, v: u64) -> ToyScalar {
        self.scalar(v)
    }

    fn scalar_add(&self, a: &ToyScalar, b: &ToyScalar) -> ToyScalar {
        ToyScalar(((a.0 as u128 + b.0 as u128) % self.q as u128) as u64)
    }

    fn scalar_sub(&self, a: &ToyScalar, b: &ToyScalar) -> ToyScalar {
        ToyScalar(((a.0 as u128 + self.q as u128 - b.0 as u128) % self.q as u128) as u64)
    }

    fn scalar_mul(&self, a: &ToyScalar, b: &ToyScalar) -> ToyScalar {
        ToyScalar(mul_mod(a.0, b.0, self.q))
    }

    fn scalar_invert(&self, a: &ToyScalar) -> Option<ToyScalar> {
        // q is prime: a^(q-2)
        (a.0 != 0).then(|| ToyScalar(pow_mod(a.0, self.q - 2, self.q)))
    }

    fn scalar_is_zero(&self, a: &ToyScalar) -> bool {
        a.0 == 0
    }

    fn scalar_reduce_be(&self, bytes: &[u8]) -> ToyScalar {
        let q = self.q as u128;
        let v = bytes.iter().fold(0u128, |acc, &b| (acc * 256 + b as u128) % q);
        ToyScalar(v as u64)
    }

    fn encode_scalar(&self, s: &ToyScalar) -> Vec<u8> {
        encode_be(s.0, self.scalar_len())
    }

    fn decode_scalar(&self, bytes: &[u8]) -> Result<ToyScalar> {
        let v = decode_be(bytes, self.scalar_len())?;
        if v >= self.q {
            return Err(Error::malformed(format!("scalar {v} is not below q={}", self.q)));
        }
        Ok(ToyScalar(v))
    }

    fn random_scalar<R: RngCore + CryptoRng + ?Sized>(&self, rng: &mut R) -> Result<ToyScalar> {
        let mut buf = [0u8; 16];
        rng.try_fill_bytes(&mut buf)?;
        let v = u128::from_be_bytes(buf) % (self.q as u128 - 1);
        Ok(ToyScalar(v as u64 + 1))
    }

    fn generator(&self) -> ToyElement {
        ToyElement(self.alpha)
    }

    fn identity(&self) -> ToyElement {
        ToyElement(1)
    }

    fn exp(&self, base: &ToyElement, k: &ToyScalar) -> ToyElement {
        self.counter.count_exp();
        ToyElement(pow_mod(base.0, k.0, self.p))
    }

    fn double_exp(&self, y: &ToyElement, e: &ToyScalar, s: &ToyScalar) -> ToyElement {
        self.counter.count_double_exp();
        // Shamir's trick: one shared squaring chain, MSB first.
        let both = mul_mod(y.0, self.alpha, self.p);
        let bits = bit_len(e.0.max(s.0));
        let mut acc = 1u64;
        for i in (0..bits).rev() {
            acc = mul_mod(acc, acc, self.p);
            match ((e.0 >> i) & 1, (s.0 >> i) & 1) {
                (1, 1) => acc = mul_mod(acc, both, self.p),
                (1, 0) => acc = mul_mod(acc, y.0, self.p),
                (0, 1) => acc = mul_mod(acc, self.alpha, self.p),
                _ => {}
            }
        }
        ToyElement(acc)
    }

    fn mul(&self, a: &ToyElement, b: &ToyElement) -> ToyElement {
        self.counter.count_mul();
        ToyElement(mul_mod(a.0, b.0, self.p))
    }

    fn encode_element(&self, x: &ToyElement) -> Vec<u8> {
        encode_be(x.0, self.element_len())
    }

    fn decode_element(&self, bytes: &[u8]) -> Result<ToyElement> {
        let v = decode_be(bytes, self.element_len())?;
        self.element(v)
    }

    fn encode_params(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24);
        out.extend_from_slice(&self.p.to_be_bytes());
        out.extend_from_slice(&self.q.to_be_bytes());
        out.extend_from_slice(&self.alpha.to_be_bytes());
        out
    }

    fn decode_params(bytes: &[u8]) -> Result<(Self, usize)> {
        if bytes.len() < 24 {
            return Err(Error::malformed("truncated toy group parameters"));
        }
        let word = |i: usize| u64::from_be_bytes(bytes[i * 8..i * 8 + 8].try_into().unwrap());
        let group = ToyGroup::new(word(0), word(1), word(2)).map_err(|e| Error::malformed(e.to_string()))?;
        Ok((group, 24))
    }
}

fn encode_be(v: u64, len: usize) -> Vec<u8> {
    let full = v.to_be_bytes();
    full[8 - len..].to_vec()
}

fn decode_be(bytes: &[u8], len: usize) -> Result<u64> {
    if bytes.len() != len {
        return Err(Error::malformed(format!("expected {len} octets, got {}", bytes.len())));
    }
    Ok(bytes.iter().fold(0u64, |acc, &b| (acc << 8) | b as u64))
}

fn bit_len(v: u64) -> u32 {
    64 - v.leading_zeros()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn sieve_passes(n: u64) -> bool {
    SMALL_PRIMES.iter().all(|&sp| n == sp || !n.is_multiple_of(sp))
}

/// Deterministic Miller-Rabin; the first twelve prime bases cover all of u64.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &SMALL_PRIMES {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
