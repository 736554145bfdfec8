#![no_main]
use libfuzzer_sys::fuzz_target;

use hs_core::plog::GridSpec;

fuzz_target!(|data: &str| {
    if let Ok(grid) = data.parse::<GridSpec>() {
        assert_eq!(grid.to_string().parse::<GridSpec>().ok(), Some(grid));
    }
});
