#![no_main]
use libfuzzer_sys::fuzz_target;
use misere::monoid::{canonical_key, reduce, MonoidJson};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(b) = MonoidJson::parse(text) else { return };
    if b.size() <= 12 {
        let r = reduce(&b).reduced;
        assert!(r.is_reduced());
        let rev: Vec<usize> = (0..b.size()).rev().collect();
        assert_eq!(canonical_key(&b), canonical_key(&b.relabel(&rev)));
    }
});
