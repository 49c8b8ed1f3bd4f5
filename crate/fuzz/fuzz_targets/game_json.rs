#![no_main]
use libfuzzer_sys::fuzz_target;
use misere::games::{GameStore, GamesJson};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(g) = GamesJson::parse(text) else { return };
    let mut store = GameStore::new();
    let _ = g.load(&mut store);
});
