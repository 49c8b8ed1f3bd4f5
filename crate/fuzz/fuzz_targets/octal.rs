#![no_main]
use libfuzzer_sys::fuzz_target;
use misere::games::{grundy_sequence, OctalCode};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(code) = text.parse::<OctalCode>() {
        let shown: OctalCode = code.to_string().parse().expect("printed code parses");
        assert_eq!(shown, code);
        let _ = grundy_sequence(&code, 40);
    }
});
