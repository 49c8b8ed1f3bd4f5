#![no_main]
use libfuzzer_sys::fuzz_target;
use misere::monoid::{build_from_presentation, parse_presentation};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_presentation(text) {
        // round trip through Display must parse again
        let again = parse_presentation(&p.to_string()).expect("printed presentation parses");
        assert_eq!(again, p);
        let _ = build_from_presentation(&p, 32);
    }
});
