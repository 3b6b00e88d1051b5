#![no_main]
use bigkey_fpe::bigkey::KeyHeader;
use bigkey_fpe::BigKey;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok((header, used)) = KeyHeader::parse(data) {
        assert_eq!(header.encode(), data[..used]);
    }
    if let Ok(key) = BigKey::from_file_bytes(data, "SHAKE256") {
        let n = key.n_bits();
        assert!(key.bit(n).is_ok());
        assert!(key.bit(n + 1).is_err());
        assert!(key.bit(0).is_err());
    }
});
