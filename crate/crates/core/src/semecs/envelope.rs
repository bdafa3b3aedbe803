//! Wire format of a SEMECS signature together with the clear-text remainder.
//!
//! ```text
//! indexed   (0x01): 0x01 ‖ j (4, BE) ‖ padded (1) ‖ s (L) ‖ c (L) ‖ M̃
//! unindexed (0x02): 0x02 ‖ padded (1) ‖ s (L) ‖ c (L) ‖ M̃
//! ```
//!
//! The unindexed form is for verifiers that locate the token by searching.

use crate::error::{Error, Result};

pub const VERSION_INDEXED: u8 = 0x01;
pub const VERSION_UNINDEXED: u8 = 0x02;

/// Framing octets in front of `s` for the indexed form.
pub const INDEXED_HEADER_LEN: usize = 6;
pub const UNINDEXED_HEADER_LEN: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedEnvelope {
    /// `None` when the index is left for the verifier to find.
    pub index: Option<u32>,
    pub padded: bool,
    /// Encoded response scalar, `L` octets.
    pub s: Vec<u8>,
    /// Masked message head, `L` octets.
    pub c: Vec<u8>,
    pub m_tilde: Vec<u8>,
}

impl SignedEnvelope {
    pub fn header_len(&self) -> usize {
        match self.index {
            Some(_) => INDEXED_HEADER_LEN,
            None => UNINDEXED_HEADER_LEN,
        }
    }

    /// Octets sent beyond the message content: framing plus `s`.
    pub fn overhead(&self) -> usize {
        self.header_len() + self.s.len()
    }

    pub fn without_index(&self) -> Self {
        SignedEnvelope { index: None, ..self.clone() }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.header_len() + self.s.len() + self.c.len() + self.m_tilde.len());
        match self.index {
            Some(j) => {
                out.push(VERSION_INDEXED);
                out.extend_from_slice(&j.to_be_bytes());
            }
            None => out.push(VERSION_UNINDEXED),
        }
        out.push(self.padded as u8);
        out.extend_from_slice(&self.s);
        out.extend_from_slice(&self.c);
        out.extend_from_slice(&self.m_tilde);
        out
    }

    /// Parses an envelope for a group whose scalars take `scalar_len` octets.
    pub fn from_bytes(bytes: &[u8], scalar_len: usize) -> Result<Self> {
        let (&version, rest) = bytes.split_first().ok_or_else(|| Error::malformed("empty envelope"))?;
        let (index, rest) = match version {
            VERSION_INDEXED => {
                if rest.len() < 4 {
                    return Err(Error::malformed("truncated envelope index"));
                }
                let (j, rest) = rest.split_at(4);
                (Some(u32::from_be_bytes(j.try_into().unwrap())), rest)
            }
            VERSION_UNINDEXED => (None, rest),
            v => return Err(Error::malformed(format!("unknown envelope version {v:#04x}"))),
        };
        let (&flag, rest) = rest.split_first().ok_or_else(|| Error::malformed("truncated envelope"))?;
        let padded = match flag {
            0 => false,
            1 => true,
            f => return Err(Error::malformed(format!("invalid padding flag {f:#04x}"))),
        };
        if rest.len() < 2 * scalar_len {
            return Err(Error::malformed("truncated envelope body"));
        }
        let (s, rest) = rest.split_at(scalar_len);
        let (c, m_tilde) = rest.split_at(scalar_len);
        if padded && !m_tilde.is_empty() {
            return Err(Error::malformed("padded envelope carries a remainder"));
        }
        Ok(SignedEnvelope { index, padded, s: s.to_vec(), c: c.to_vec(), m_tilde: m_tilde.to_vec() })
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn arb_envelope() -> impl Strategy<Value = SignedEnvelope> {
        (
            proptest::option::of(any::<u32>()),
            any::<bool>(),
            proptest::collection::vec(any::<u8>(), 32),
            proptest::collection::vec(any::<u8>(), 32),
            proptest::collection::vec(any::<u8>(), 0..64),
        )
            .prop_map(|(index, padded, s, c, tail)| SignedEnvelope {
                index,
                padded,
                s,
                c,
                m_tilde: if padded { Vec::new() } else { tail },
            })
    }

    proptest! {
        #[test]
        fn round_trip(env in arb_envelope()) {
            let bytes = env.to_bytes();
            prop_assert_eq!(bytes.len(), env.header_len() + 64 + env.m_tilde.len());
            prop_assert_eq!(SignedEnvelope::from_bytes(&bytes, 32).unwrap(), env);
        }

        #[test]
        fn decode_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..100)) {
            let _ = SignedEnvelope::from_bytes(&bytes, 32);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(SignedEnvelope::from_bytes(&[], 1).is_err());
        assert!(SignedEnvelope::from_bytes(&[0x03, 0, 1, 2], 1).is_err());
        assert!(SignedEnvelope::from_bytes(&[0x01, 0, 0], 1).is_err());
        assert!(SignedEnvelope::from_bytes(&[0x02, 0x02, 1, 2], 1).is_err());
        assert!(SignedEnvelope::from_bytes(&[0x02, 0x00, 1], 1).is_err());
        assert!(SignedEnvelope::from_bytes(&[0x02, 0x01, 1, 2, 3], 1).is_err());
        let ok = SignedEnvelope::from_bytes(&[0x01, 0, 0, 0, 7, 0x00, 1, 2, 3], 1).unwrap();
        assert_eq!((ok.index, ok.s, ok.c, ok.m_tilde), (Some(7), vec![1], vec![2], vec![3]));
    }
}
