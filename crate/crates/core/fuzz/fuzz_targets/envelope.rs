#![no_main]

use libfuzzer_sys::fuzz_target;
use semecs::semecs::SignedEnvelope;

fuzz_target!(|data: &[u8]| {
    for l in [1, 3, 32] {
        if let Ok(env) = SignedEnvelope::from_bytes(data, l) {
            assert_eq!(env.to_bytes(), data);
        }
    }
});
