#![no_main]

use euclid_core::ideals::HnfTriple;
use euclid_core::make_field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(t) = data.parse::<HnfTriple>() else { return };
    for d in [-15, -5, -1, 2, 10] {
        let k = make_field(d).unwrap();
        if let Ok(i) = k.ideal_from_triple(&t) {
            assert_eq!(k.ideal_from_generators(&i.basis()), i, "d = {d}");
            let reparsed: HnfTriple = i.to_string().parse().expect("display parses");
            assert_eq!(k.ideal_from_triple(&reparsed).unwrap(), i);
        }
    }
});
