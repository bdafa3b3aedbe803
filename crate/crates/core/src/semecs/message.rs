use crate::error::{Error, Result};

/// A message cut into the `L`-octet head that rides inside `c` and the
/// remainder that travels in the clear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMessage {
    pub head: Vec<u8>,
    pub tail: Vec<u8>,
    pub padded: bool,
}

const PAD_MARKER: u8 = 0x80;

/// Messages of at least `len` octets are cut at `len`. Shorter ones become
/// `M ‖ 0x80 ‖ 0x00…` with an empty tail and `padded` set.
pub fn split_message(msg: &[u8], len: usize) -> Result<SplitMessage> {
    if msg.is_empty() {
        return Err(Error::EmptyMessage);
    }
    if msg.len() >= len {
        let (head, tail) = msg.split_at(len);
        return Ok(SplitMessage { head: head.to_vec(), tail: tail.to_vec(), padded: false });
    }
    let mut head = Vec::with_capacity(len);
    head.extend_from_slice(msg);
    head.push(PAD_MARKER);
    head.resize(len, 0);
    Ok(SplitMessage { head, tail: Vec::new(), padded: true })
}

/// Inverse of [`split_message`]. `None` if the padding is malformed or the
/// flag contradicts the tail.
pub fn join_message(head: &[u8], tail: &[u8], padded: bool) -> Option<Vec<u8>> {
    if !padded {
        let mut out = Vec::with_capacity(head.len() + tail.len());
        out.extend_from_slice(head);
        out.extend_from_slice(tail);
        return Some(out);
    }
    if !tail.is_empty() {
        return None;
    }
    let marker = head.iter().rposition(|&b| b != 0)?;
    // at least one message octet precedes the marker
    (head[marker] == PAD_MARKER && marker > 0).then(|| head[..marker].to_vec())
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn split_examples() {
        let m: Vec<u8> = (0..40).collect();
        let s = split_message(&m, 32).unwrap();
        assert_eq!((s.head.as_slice(), s.tail.as_slice(), s.padded), (&m[..32], &m[32..], false));

        let s = split_message(b"hello", 32).unwrap();
        let mut expect = b"hello".to_vec();
        expect.push(0x80);
        expect.extend_from_slice(&[0u8; 26]);
        assert_eq!(s.head, expect);
        assert!(s.tail.is_empty() && s.padded);

        let m = [0xAAu8; 32];
        let s = split_message(&m, 32).unwrap();
        assert!(!s.padded && s.tail.is_empty());

        assert!(matches!(split_message(b"", 32), Err(Error::EmptyMessage)));
    }

    #[test]
    fn join_rejects_bad_padding() {
        assert_eq!(join_message(&[0u8; 4], &[], true), None);
        assert_eq!(join_message(&[1, 0x81, 0, 0], &[], true), None);
        assert_eq!(join_message(&[0x80, 0, 0, 0], &[], true), None);
        assert_eq!(join_message(&[1, 0x80, 0, 0], &[9], true), None);
        assert_eq!(join_message(&[1, 0x80, 0, 0], &[], true), Some(vec![1]));
    }

    proptest! {
        #[test]
        fn split_join_inverse(msg in proptest::collection::vec(any::<u8>(), 1..100), len in 1usize..40) {
            let s = split_message(&msg, len).unwrap();
            prop_assert_eq!(s.head.len(), len);
            prop_assert!(!s.padded || s.tail.is_empty());
            prop_assert!(s.padded || msg.len() >= len);
            prop_assert_eq!(join_message(&s.head, &s.tail, s.padded), Some(msg));
        }
    }
}
