#![no_main]
use bigkey_fpe::BitString;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: (u16, &str)| {
    let (len, hex) = input;
    let len = len as usize % 4096;
    if let Ok(bits) = BitString::from_hex(hex, len) {
        assert_eq!(bits.len(), len);
        let back = BitString::from_hex(&bits.to_hex(), len).unwrap();
        assert_eq!(back, bits);
        assert_eq!(
            BitString::from_be_bytes(&bits.to_be_bytes(), len).unwrap(),
            bits
        );
    }
});
