#![no_main]

use libfuzzer_sys::fuzz_target;
use semecs::eta::EtaSignature;
use semecs::schnorr::SchnorrSignature;
use semecs::{Group, Ristretto255, ToyGroup};

fn decode<G: Group>(g: &G, data: &[u8]) {
    if let Ok(sig) = SchnorrSignature::from_bytes(g, data) {
        assert_eq!(sig.to_bytes(g), data);
    }
    if let Ok(sig) = EtaSignature::from_bytes(g, data) {
        assert_eq!(sig.to_bytes(g), data);
    }
}

fuzz_target!(|data: &[u8]| {
    decode(&ToyGroup::medium(), data);
    decode(&Ristretto255::new(), data);
});
