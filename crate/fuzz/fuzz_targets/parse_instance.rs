#![no_main]

use drlift::instance::parse_instance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = parse_instance(text) else {
        return;
    };
    // Serialization is a fixed point after one round.
    let json = spec.to_json();
    let again = parse_instance(&json).expect("serialized spec parses");
    assert_eq!(again.to_json(), json);

    let small = spec.bounds.len() <= 4
        && spec
            .bounds
            .iter()
            .try_fold(1u64, |acc, &b| acc.checked_mul(b + 1))
            .is_some_and(|n| n <= 4096)
        && spec.objective.directions.as_ref().map_or(0, Vec::len) <= 16;
    if !small {
        return;
    }
    if let Ok(inst) = spec.build() {
        let top = inst.coordinates.top();
        let _ = inst.function.eval(&top);
        if let Some(c) = &inst.constraint {
            let _ = c.admits(&top);
            let _ = c.implied_bounds(&inst.coordinates);
        }
    }
});
