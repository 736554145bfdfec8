#![no_main]
use libfuzzer_sys::fuzz_target;

use hs_cli::complex::{format_complex, parse_complex};

fuzz_target!(|data: &str| {
    if let Ok(z) = parse_complex(data) {
        assert_eq!(parse_complex(&format_complex(z)), Ok(z));
    }
});
