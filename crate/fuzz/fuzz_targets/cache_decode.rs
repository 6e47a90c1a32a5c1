#![no_main]

use euclid_survey::cache::decode;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let d = decode(data);
    let _ = (d.records.len(), d.corrupt, d.truncated);
});
