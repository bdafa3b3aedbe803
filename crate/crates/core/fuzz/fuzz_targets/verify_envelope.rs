#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use semecs::semecs::{
    semecs_keygen_from_secret, semecs_verify_indexed, semecs_verify_search, SemecsPublicKey, SignedEnvelope,
};
use semecs::{DigestAlg, Group, Ristretto255, Suite};

fn key() -> &'static (Suite<Ristretto255>, SemecsPublicKey<Ristretto255>) {
    static KEY: OnceLock<(Suite<Ristretto255>, SemecsPublicKey<Ristretto255>)> = OnceLock::new();
    KEY.get_or_init(|| {
        let suite = Suite::new(Ristretto255::new(), DigestAlg::Blake2s256);
        let y = suite.group.scalar_from_u64(0x5eed);
        let (_, pk) = semecs_keygen_from_secret(&suite, y, 8).unwrap();
        (suite, pk)
    })
}

fuzz_target!(|data: &[u8]| {
    let (suite, pk) = key();
    let Ok(env) = SignedEnvelope::from_bytes(data, suite.scalar_len()) else {
        return;
    };
    let by_index = semecs_verify_indexed(suite, pk, &env);
    let searched = semecs_verify_search(suite, pk, &env);
    assert!(searched.comparisons <= 4);
    if let (Some(m), Some(j)) = (&by_index, env.index) {
        assert_eq!(searched.verified, Some((j, m.clone())));
    }
});
