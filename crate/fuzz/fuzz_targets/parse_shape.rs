#![no_main]

use drlift::lattice_fn::Shape;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(shape) = text.parse::<Shape>() else {
        return;
    };
    let again: Shape = shape.to_string().parse().expect("display output parses");
    assert_eq!(again, shape);
    for s in [0.0, 1.0, 2.5, 1e6] {
        let _ = shape.apply(s);
    }
});
