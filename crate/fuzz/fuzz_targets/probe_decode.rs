#![no_main]
use bigkey_fpe::ProbeDraw;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: (u64, u8, &[u8])| {
    let (n_bits, k, bytes) = input;
    let k = k as usize % 64;
    if let Ok(draw) = ProbeDraw::decode(bytes, n_bits, k) {
        assert_eq!(draw.probes().len(), k);
        assert!(draw.probes().iter().all(|&p| (1..=n_bits).contains(&p)));
        assert_eq!(draw.subset().len(), k);
        assert!(draw.selected_probes().count() <= k);
    }
});
