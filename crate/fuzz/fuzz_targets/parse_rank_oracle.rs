#![no_main]

use drlift::continuous::RankSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&dims, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok(spec) = text.parse::<RankSpec>() else {
        return;
    };
    let again: RankSpec = spec.to_string().parse().expect("display output parses");
    assert_eq!(again, spec);
    if let Ok(p) = spec.instantiate(1 + (dims % 6) as usize) {
        let full = (1u64 << p.dims()) - 1;
        assert_eq!(p.rank(0), 0);
        let _ = p.rank(full);
        let _ = p.validate();
    }
});
