use crate::fdh::{fdh_eval_parts, DigestAlg, FdhParams};
use crate::group::Group;

/// A group backend paired with the digest behind `H0` and `H1`.
#[derive(Clone, Debug)]
pub struct Suite<G: Group> {
    pub group: G,
    pub digest: DigestAlg,
}

impl<G: Group> Suite<G> {
    pub fn new(group: G, digest: DigestAlg) -> Self {
        Suite { group, digest }
    }

    pub fn scalar_len(&self) -> usize {
        self.group.scalar_len()
    }

    pub fn h0(&self, parts: &[&[u8]]) -> G::Scalar {
        fdh_eval_parts(&self.group, FdhParams::h0(self.digest), parts)
    }

    pub fn h1(&self, parts: &[&[u8]]) -> G::Scalar {
        fdh_eval_parts(&self.group, FdhParams::h1(self.digest), parts)
    }

    pub fn h0_enc(&self, parts: &[&[u8]]) -> Vec<u8> {
        self.group.encode_scalar(&self.h0(parts))
    }

    pub fn h1_enc(&self, parts: &[&[u8]]) -> Vec<u8> {
        self.group.encode_scalar(&self.h1(parts))
    }
}

impl<G: Group + Default> Default for Suite<G> {
    fn default() -> Self {
        Suite::new(G::default(), DigestAlg::default())
    }
}
