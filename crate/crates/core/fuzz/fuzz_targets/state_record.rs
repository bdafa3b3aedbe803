#![no_main]

use libfuzzer_sys::fuzz_target;
use semecs::keystore::{
    eta_state_from_record, schnorr_keypair_from_record, semecs_state_from_record, KeyFileHeader, SignerStateRecord,
};
use semecs::{Ristretto255, ToyGroup};

fuzz_target!(|data: &[u8]| {
    let _ = KeyFileHeader::parse(data);
    let Ok(rec) = SignerStateRecord::from_bytes(data) else {
        return;
    };
    assert_eq!(rec.to_bytes(), data);
    assert!(rec.index <= rec.capacity);
    let _ = semecs_state_from_record::<ToyGroup>(&rec);
    let _ = semecs_state_from_record::<Ristretto255>(&rec);
    let _ = eta_state_from_record::<ToyGroup>(&rec);
    let _ = eta_state_from_record::<Ristretto255>(&rec);
    let _ = schnorr_keypair_from_record::<ToyGroup>(&rec);
    let _ = schnorr_keypair_from_record::<Ristretto255>(&rec);
});
