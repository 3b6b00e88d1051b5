use bigkey_fpe::bigkey::RngBytes;
use bigkey_fpe::oracle::ScriptedOracle;
use bigkey_fpe::{BigKey, BitString, Cipher, CipherParams, Shake256Oracle};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn seeded_key(n_bits: u64, seed: u64) -> BigKey {
    BigKey::generate(n_bits, &mut RngBytes(ChaCha20Rng::seed_from_u64(seed))).unwrap()
}

fn random_message(rng: &mut impl Rng, m: usize) -> BitString {
    BitString::from_bits((0..m).map(|_| rng.gen::<bool>()))
}

#[test]
fn small_domains_are_permutations() {
    let key = seeded_key(64, 1);
    let oracle = ScriptedOracle::seeded(9);
    for m in 2..=8usize {
        let params = CipherParams::with_passes(64, m, 3, 2).unwrap();
        let cipher = Cipher::new(&key, &oracle, params).unwrap();
        let mut image: Vec<u64> = (0..1u64 << m)
            .map(|x| {
                let msg = BitString::from_u64(x, m);
                let ct = cipher.encrypt(&msg).unwrap();
                assert_eq!(cipher.decrypt(&ct).unwrap(), msg);
                ct.to_u64()
            })
            .collect();
        image.sort_unstable();
        assert!(image.iter().copied().eq(0..1u64 << m), "m = {m}");
    }
}

#[test]
fn wide_messages_round_trip() {
    let key = seeded_key(1 << 20, 2);
    let oracle = Shake256Oracle::new();
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    for (m, count) in [(128usize, 1000), (64, 1000)] {
        let cipher = Cipher::new(
            &key,
            &oracle,
            CipherParams::with_rounds(1 << 20, m, 16, 2 * m as u64).unwrap(),
        )
        .unwrap();
        for _ in 0..count {
            let msg = random_message(&mut rng, m);
            let ct = cipher.encrypt(&msg).unwrap();
            assert_eq!(ct.len(), m);
            assert_eq!(cipher.decrypt(&ct).unwrap(), msg);
        }
    }
}

#[test]
fn full_parameter_round_trip() {
    // k = 500, T = s(2m - 1) with s = 2 on a 2^20-bit key
    let key = seeded_key(1 << 20, 4);
    let oracle = Shake256Oracle::new();
    let params = CipherParams::with_passes(1 << 20, 128, 500, 2).unwrap();
    assert_eq!(params.rounds(), 510);
    let cipher = Cipher::new(&key, &oracle, params).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for _ in 0..20 {
        let msg = random_message(&mut rng, 128);
        assert_eq!(cipher.decrypt(&cipher.encrypt(&msg).unwrap()).unwrap(), msg);
    }
}

#[test]
fn wrong_length_is_rejected() {
    let key = seeded_key(64, 6);
    let oracle = Shake256Oracle::new();
    let cipher = Cipher::new(
        &key,
        &oracle,
        CipherParams::with_passes(64, 8, 2, 1).unwrap(),
    )
    .unwrap();
    assert!(cipher.encrypt(&BitString::zeros(7)).is_err());
    assert!(cipher.decrypt(&BitString::zeros(9)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_parameters_round_trip(
        seed in any::<u64>(),
        m in 2usize..40,
        k in 1usize..12,
        rounds in 0u64..90,
        x in any::<u64>(),
    ) {
        let key = seeded_key(256, seed);
        let oracle = ScriptedOracle::seeded(seed ^ 0x55);
        let params = CipherParams::with_rounds(256, m, k, rounds).unwrap();
        let cipher = Cipher::new(&key, &oracle, params).unwrap();
        let msg = BitString::from_u64(x, m.min(64));
        let msg = if m > 64 { msg.concat(&BitString::zeros(m - 64)) } else { msg };
        prop_assert_eq!(cipher.decrypt(&cipher.encrypt(&msg).unwrap()).unwrap(), msg);
    }
}
