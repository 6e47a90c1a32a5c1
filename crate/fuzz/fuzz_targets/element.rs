#![no_main]

use euclid_core::spec::parse_element;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(x) = parse_element(data) {
        let _ = x.is_integral();
        let _ = x.to_string();
    }
});
