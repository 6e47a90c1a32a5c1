#![no_main]

use euclid_core::spec::IdealSpec;
use euclid_core::{make_field, ClassGroup};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(spec) = data.parse::<IdealSpec>() else { return };
    let again: IdealSpec = spec.to_string().parse().expect("display round-trips");
    assert_eq!(again, spec);
    let k = make_field(-5).unwrap();
    let g = ClassGroup::compute(&k).unwrap();
    if let Ok(c) = spec.resolve(&k, &g) {
        assert_eq!(k.ideal_from_generators(&c.basis()), c);
    }
});
