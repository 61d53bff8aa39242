#![no_main]

use libfuzzer_sys::fuzz_target;
use zetareg_core::regint::parse_series_bytes;

fuzz_target!(|data: &[u8]| {
    match parse_series_bytes(data) {
        Ok(coeffs) => {
            let again = parse_series_bytes(coeffs.to_file_string().as_bytes());
            assert_eq!(again.as_ref(), Ok(&coeffs));
        }
        Err(e) => assert!(e.offset <= data.len()),
    }
});
