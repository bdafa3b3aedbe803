use proptest::prelude::*;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use semecs::eta::{eta_keygen, eta_keygen_from, eta_sign, eta_sign_with_x, eta_verify, EtaSignature};
use semecs::fdh::{fdh_eval_parts, FdhParams};
use semecs::keystore::{encode_semecs_public, eta_state_record, public_key_overhead, semecs_state_record, SchemeTag};
use semecs::schnorr::{schnorr_keygen, schnorr_sign_with_nonce, schnorr_verify, SchnorrKeyPair, SchnorrSignature};
use semecs::semecs::{
    extract_private_key, semecs_keygen, semecs_keygen_from_secret, semecs_sign, semecs_verify_indexed,
    semecs_verify_search, SignedEnvelope,
};
use semecs::{DigestAlg, Error, Group, InMemory, Ristretto255, Suite, ToyGroup};

const B2: DigestAlg = DigestAlg::Blake2s256;

fn toy() -> Suite<ToyGroup> {
    Suite::new(ToyGroup::canonical(), B2)
}

fn prod() -> Suite<Ristretto255> {
    Suite::new(Ristretto255::new(), B2)
}

fn h0<G: Group>(g: &G, parts: &[&[u8]]) -> G::Scalar {
    fdh_eval_parts(g, FdhParams::h0(B2), parts)
}

fn h1<G: Group>(g: &G, parts: &[&[u8]]) -> G::Scalar {
    fdh_eval_parts(g, FdhParams::h1(B2), parts)
}

fn modpow23(b: u64, e: u64) -> u64 {
    (0..e).fold(1, |acc, _| acc * b % 23)
}

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

#[test]
fn semecs_keygen_transcript_on_toy_group() {
    let s = toy();
    let g = &s.group;
    let (_, pk) = semecs_keygen_from_secret(&s, g.scalar(3), 2).unwrap();

    let mut expect = vec![8u8]; // Y = 2^3 mod 23
    for j in 0u64..2 {
        let mut seed = vec![3u8];
        seed.extend_from_slice(&j.to_be_bytes());
        let r = h0(g, &[&seed]).value();
        let z = h1(g, &[&seed]).value() as u8;
        let big_r = [modpow23(2, r) as u8];
        let gamma = z ^ h0(g, &[&big_r]).value() as u8;
        let beta = h1(g, &[&big_r]).value() as u8;
        expect.extend_from_slice(&[gamma, beta]);
    }
    assert_eq!(pk.payload_bytes(g), expect);
}

#[test]
fn semecs_sign_transcript_unpadded_on_toy_group() {
    // L = 1, so a 16-octet message is split 1 + 15 rather than padded.
    let s = toy();
    let g = &s.group;
    let msg = b"hello-semecs-msg";
    let (mut state, pk) = semecs_keygen_from_secret(&s, g.scalar(3), 4).unwrap();
    let env = semecs_sign(&s, &mut state, msg, InMemory).unwrap();

    let seed = [3u8, 0, 0, 0, 0, 0, 0, 0, 0];
    let r = h0(g, &[&seed]).value();
    let z = h1(g, &[&seed]).value() as u8;
    let c = msg[0] ^ z;
    let e = h0(g, &[&[c], &msg[1..], &[0]]).value();
    let s_val = (r as i64 - (e * 3) as i64).rem_euclid(11) as u8;

    assert_eq!(env.index, Some(0));
    assert!(!env.padded);
    assert_eq!((env.c.as_slice(), env.s.as_slice(), env.m_tilde.as_slice()), (&[c][..], &[s_val][..], &msg[1..]));
    assert_eq!(semecs_verify_indexed(&s, &pk, &env).unwrap(), msg);
}

#[test]
fn semecs_sign_transcript_padded_on_production_group() {
    let s = prod();
    let g = &s.group;
    let msg = b"hello-semecs-msg";
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let y = g.random_scalar(&mut rng).unwrap();
    let (mut state, pk) = semecs_keygen_from_secret(&s, y, 2).unwrap();
    let env = semecs_sign(&s, &mut state, msg, InMemory).unwrap();

    let mut seed = g.encode_scalar(&y);
    seed.extend_from_slice(&0u64.to_be_bytes());
    let r = h0(g, &[&seed]);
    let z = g.encode_scalar(&h1(g, &[&seed]));
    let mut head = msg.to_vec();
    head.push(0x80);
    head.resize(32, 0);
    let c = xor(&head, &z);
    let e = h0(g, &[&c, &[], &[1]]);
    let s_val = g.scalar_sub(&r, &g.scalar_mul(&e, &y));

    assert!(env.padded && env.m_tilde.is_empty());
    assert_eq!(env.c, c);
    assert_eq!(env.s, g.encode_scalar(&s_val));
    assert_eq!(semecs_verify_indexed(&s, &pk, &env).unwrap(), msg);
}

#[test]
fn identical_signers_produce_identical_envelopes() {
    let s = prod();
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    let y = s.group.random_scalar(&mut rng).unwrap();
    let (mut a, _) = semecs_keygen_from_secret(&s, y, 8).unwrap();
    let (mut b, _) = semecs_keygen_from_secret(&s, y, 8).unwrap();
    for i in 0..8 {
        let msg = vec![i as u8; 10 + 7 * i];
        assert_eq!(semecs_sign(&s, &mut a, &msg, InMemory).unwrap(), semecs_sign(&s, &mut b, &msg, InMemory).unwrap());
    }
}

#[test]
fn size_formulas_on_production_group() {
    let s = prod();
    let mut rng = ChaCha20Rng::seed_from_u64(13);
    for k in [1u64, 2, 1024] {
        let (mut state, pk) = semecs_keygen(&s, k, &mut rng).unwrap();
        assert_eq!(semecs_state_record(&s, &state).secret.len(), 32);
        let file = encode_semecs_public(&s, &pk);
        assert_eq!(file.len() as u64, public_key_overhead(&s, SchemeTag::Semecs) as u64 + (2 * k + 1) * 32);
        let env = semecs_sign(&s, &mut state, &[7u8; 50], InMemory).unwrap();
        assert_eq!(env.to_bytes().len(), 6 + 32 + 50);
    }
}

#[test]
fn keygen_exponentiations() {
    // One per token plus one for Y.
    let s = prod();
    let before = s.group.counter().snapshot();
    semecs_keygen_from_secret(&s, s.group.scalar_from_u64(99), 10).unwrap();
    let d = s.group.counter().snapshot().since(&before);
    assert_eq!((d.exp, d.double_exp), (11, 0));
}

#[test]
fn bit_flips_in_c_are_rejected() {
    let s = prod();
    let mut rng = ChaCha20Rng::seed_from_u64(14);
    let (mut state, pk) = semecs_keygen(&s, 64, &mut rng).unwrap();
    for _ in 0..64 {
        let mut env = semecs_sign(&s, &mut state, b"actuator: open valve 3", InMemory).unwrap();
        env.c[rng.gen_range(0..32)] ^= 1 << rng.gen_range(0..8);
        assert_eq!(semecs_verify_indexed(&s, &pk, &env), None);
    }

    // On q = 11 a flip can collide; rejection must still be the norm.
    let t = toy();
    let mut rejected = 0;
    for trial in 0..100u64 {
        let (mut state, pk) = semecs_keygen_from_secret(&t, t.group.scalar(1 + trial % 10), 1).unwrap();
        let mut env = semecs_sign(&t, &mut state, b"xyz", InMemory).unwrap();
        env.c[0] ^= 1 << (trial % 8);
        rejected += semecs_verify_indexed(&t, &pk, &env).is_none() as u32;
    }
    assert!(rejected > 50, "{rejected}");
}

#[test]
fn out_of_range_index_is_rejected() {
    let s = prod();
    let mut rng = ChaCha20Rng::seed_from_u64(15);
    let (mut state, pk) = semecs_keygen(&s, 4, &mut rng).unwrap();
    let mut env = semecs_sign(&s, &mut state, b"m", InMemory).unwrap();
    env.index = Some(4);
    assert_eq!(semecs_verify_indexed(&s, &pk, &env), None);
    env.index = Some(u32::MAX);
    assert_eq!(semecs_verify_indexed(&s, &pk, &env), None);
}

#[test]
fn random_forgeries_fail_search() {
    let s = prod();
    let mut rng = ChaCha20Rng::seed_from_u64(16);
    let (_, pk) = semecs_keygen(&s, 128, &mut rng).unwrap();
    for _ in 0..500 {
        let mut c = vec![0u8; 32];
        rng.fill_bytes(&mut c);
        let sc = s.group.random_scalar(&mut rng).unwrap();
        let env = SignedEnvelope { index: None, padded: false, s: s.group.encode_scalar(&sc), c, m_tilde: vec![1, 2] };
        let out = semecs_verify_search(&s, &pk, &env);
        assert_eq!(out.verified, None);
        assert!(out.comparisons <= 8);
    }
}

#[test]
fn extraction_needs_distinct_challenges() {
    let s = toy();
    let g = &s.group;
    let y = g.exp_generator(&g.scalar(3));
    let t = (g.scalar(4), g.scalar(2));
    assert!(matches!(extract_private_key(g, &y, t, t), Err(Error::NotExtractable)));
    // Consistent system but for the wrong public key.
    let r = 7u64;
    let (e1, e2) = (g.scalar(2), g.scalar(5));
    let s1 = g.scalar_sub_mul(&g.scalar(r), &e1, &g.scalar(3));
    let s2 = g.scalar_sub_mul(&g.scalar(r), &e2, &g.scalar(3));
    assert_eq!(extract_private_key(g, &y, (e1, s1), (e2, s2)).unwrap().value(), 3);
    let other = g.exp_generator(&g.scalar(4));
    assert!(matches!(extract_private_key(g, &other, (e1, s1), (e2, s2)), Err(Error::NotExtractable)));
}

#[test]
fn schnorr_verifier_recomputes_signer_commitment() {
    let s = prod();
    let mut rng = ChaCha20Rng::seed_from_u64(17);
    for i in 0..50 {
        let kp = schnorr_keygen(&s, &mut rng).unwrap();
        let r = s.group.random_scalar(&mut rng).unwrap();
        let msg = format!("message {i}");
        let (sig, big_r) = schnorr_sign_with_nonce(&s, &kp, msg.as_bytes(), &r);
        assert_eq!(s.group.double_exp(&kp.public, &sig.e, &sig.s), big_r);
    }
}

#[test]
fn schnorr_rejects_shifted_response_on_toy_group() {
    let s = toy();
    let g = &s.group;
    let (mut total, mut rejected) = (0, 0);
    for y in 1..11 {
        let kp = SchnorrKeyPair::from_secret(&s, g.scalar(y));
        for r in 0..11 {
            let (sig, _) = schnorr_sign_with_nonce(&s, &kp, b"toy", &g.scalar(r));
            assert!(schnorr_verify(&s, &kp.public, b"toy", &sig));
            let bumped = SchnorrSignature { s: g.scalar_add(&sig.s, &g.scalar(1)), e: sig.e };
            rejected += !schnorr_verify(&s, &kp.public, b"toy", &bumped) as u32;
            total += 1;
        }
    }
    assert!(rejected * 2 > total, "{rejected}/{total}");
}

#[test]
fn schnorr_rejects_wrong_key_on_production_group() {
    let s = prod();
    let mut rng = ChaCha20Rng::seed_from_u64(18);
    let a = schnorr_keygen(&s, &mut rng).unwrap();
    let b = schnorr_keygen(&s, &mut rng).unwrap();
    let sig = semecs::schnorr::schnorr_sign(&s, &a, b"m", &mut rng).unwrap();
    assert!(!schnorr_verify(&s, &b.public, b"m", &sig));
}

#[test]
fn eta_state_holds_only_current_chain_link() {
    let s = prod();
    let g = &s.group;
    let y = g.scalar_from_u64(1234);
    let r0 = g.scalar_from_u64(5678);
    let (mut state, pk) = eta_keygen_from(&s, y, r0, 5).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(19);
    let mut r = r0;
    for j in 0..5u32 {
        let rec = eta_state_record(&s, &state);
        let mut expect = g.encode_scalar(&y);
        expect.extend_from_slice(&g.encode_scalar(&r));
        assert_eq!(rec.secret, expect, "before signature {j}");
        let sig = eta_sign(&s, &mut state, b"m", &mut rng, InMemory).unwrap();
        assert!(eta_verify(&s, &pk, b"m", &sig));
        r = h0(g, &[&g.encode_scalar(&r)]);
    }
}

#[test]
fn eta_tampered_nonce_is_rejected() {
    let s = prod();
    let mut rng = ChaCha20Rng::seed_from_u64(20);
    let (mut state, pk) = eta_keygen(&s, 32, &mut rng).unwrap();
    for i in 0..32u8 {
        let sig = eta_sign_with_x(&s, &mut state, b"m", [i; 16], InMemory).unwrap();
        let mut x = sig.x;
        x[(i % 16) as usize] ^= 0x40;
        assert!(!eta_verify(&s, &pk, b"m", &EtaSignature { x, ..sig }));
    }

    let t = toy();
    let (mut state, pk) = eta_keygen_from(&t, t.group.scalar(3), t.group.scalar(4), 200).unwrap();
    let mut rejected = 0;
    for i in 0..200u8 {
        let sig = eta_sign_with_x(&t, &mut state, b"m", [i; 16], InMemory).unwrap();
        assert!(eta_verify(&t, &pk, b"m", &sig));
        let mut x = sig.x;
        x[0] ^= 1;
        rejected += !eta_verify(&t, &pk, b"m", &EtaSignature { x, ..sig }) as u32;
    }
    assert!(rejected > 100, "{rejected}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semecs_recovers_every_length(seed in any::<u64>(), pick in 0usize..5, extra in 0usize..8) {
        let s = prod();
        let l = 32;
        let len = [1, l - 1, l, l + 1, 3 * l][pick] + if pick == 4 { extra } else { 0 };
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut msg = vec![0u8; len];
        rng.fill_bytes(&mut msg);
        let y = s.group.random_scalar(&mut rng).unwrap();
        let (mut state, pk) = semecs_keygen_from_secret(&s, y, 3).unwrap();
        for _ in 0..3 {
            let env = semecs_sign(&s, &mut state, &msg, InMemory).unwrap();
            let wire = env.to_bytes();
            let parsed = SignedEnvelope::from_bytes(&wire, 32).unwrap();
            prop_assert_eq!(semecs_verify_indexed(&s, &pk, &parsed), Some(msg.clone()));
            let found = semecs_verify_search(&s, &pk, &parsed.without_index()).verified;
            prop_assert_eq!(found, Some((env.index.unwrap(), msg.clone())));
        }
    }

    #[test]
    fn medium_group_completeness(seed in any::<u64>(), len in 1usize..20) {
        let s = Suite::new(ToyGroup::medium(), B2);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut msg = vec![0u8; len];
        rng.fill_bytes(&mut msg);
        let (mut state, pk) = semecs_keygen(&s, 8, &mut rng).unwrap();
        for _ in 0..8 {
            let env = semecs_sign(&s, &mut state, &msg, InMemory).unwrap();
            prop_assert_eq!(semecs_verify_indexed(&s, &pk, &env), Some(msg.clone()));
        }
        let exhausted = matches!(semecs_sign(&s, &mut state, &msg, InMemory), Err(Error::KeyExhausted { capacity: 8 }));
        prop_assert!(exhausted);
    }
}
