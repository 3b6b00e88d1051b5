#![no_main]
use bigkey_fpe::oracle::OracleQuery;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(query) = OracleQuery::parse(data) {
        assert_eq!(query.to_bytes(), data);
    }
});
