#![no_main]
use libfuzzer_sys::fuzz_target;
use misere::transition::{validate, TransitionJson};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = TransitionJson::parse(text) {
        let _ = validate(&t);
    }
});
