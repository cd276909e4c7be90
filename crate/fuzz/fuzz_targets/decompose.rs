#![no_main]

use drlift::decomposition::{decompose, decompose_refined, verify_completeness};
use libfuzzer_sys::fuzz_target;
use num_rational::Ratio;

fuzz_target!(|data: &[u8]| {
    if data.len() < 6 {
        return;
    }
    let n = u64::from(u16::from_le_bytes([data[0], data[1]])) + 1;
    let q = u64::from(u16::from_le_bytes([data[2], data[3]])) % (n + 1);
    let d = decompose(n).expect("positive target");
    assert_eq!(d.parts().iter().sum::<u64>(), n);
    assert!(verify_completeness(&d).expect("small target").complete);
    let subset = d.subset_for(q).expect("complete decomposition");
    assert_eq!(subset.iter().map(|&i| d.parts()[i]).sum::<u64>(), q);

    let (num, den) = (u64::from(data[4]), u64::from(data[5]));
    if num == 0 || den == 0 || num > den {
        return;
    }
    let eps = Ratio::new(num, den);
    if let Ok(r) = decompose_refined(n, eps) {
        let cap = eps * Ratio::from_integer(n);
        assert!(r.parts().iter().all(|&a| Ratio::from_integer(a) <= cap));
        assert_eq!(r.parts().iter().sum::<u64>(), n);
        let subset = r.subset_for(q).expect("complete decomposition");
        assert_eq!(subset.iter().map(|&i| r.parts()[i]).sum::<u64>(), q);
    }
});
