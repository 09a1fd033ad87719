#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cands) = bbh::io::parse_candidates(text) {
            let total: usize = cands.iter().map(|c| c.publications.len()).sum();
            assert!(total >= cands.len());
        }
    }
});
