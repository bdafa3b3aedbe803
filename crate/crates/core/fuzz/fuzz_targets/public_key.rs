#![no_main]

use libfuzzer_sys::fuzz_target;
use semecs::keystore::{decode_eta_public, decode_schnorr_public, decode_semecs_public, encode_semecs_public};
use semecs::{Group, Ristretto255, ToyGroup};

fn decode_all<G: Group>(data: &[u8]) {
    if let Ok((suite, pk)) = decode_semecs_public::<G>(data) {
        assert_eq!(encode_semecs_public(&suite, &pk), data);
    }
    let _ = decode_eta_public::<G>(data);
    let _ = decode_schnorr_public::<G>(data);
}

fuzz_target!(|data: &[u8]| {
    decode_all::<ToyGroup>(data);
    decode_all::<Ristretto255>(data);
});
