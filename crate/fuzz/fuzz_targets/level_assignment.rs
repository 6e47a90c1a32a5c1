#![no_main]

use euclid_core::euclidean::{verify_assignment, LevelAssignment};
use euclid_core::make_field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(l) = LevelAssignment::from_json(data) else { return };
    // verification enumerates the field's units and class group
    if l.d().abs() > 200 {
        return;
    }
    let Ok(k) = make_field(l.d()) else { return };
    let _ = verify_assignment(&k, &l);
});
