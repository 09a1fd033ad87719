#![no_main]

use bbh::careers::{detect_hot_streak, DetectionConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(seq) = bbh::io::parse_career("fuzz", text) {
            assert_eq!(
                bbh::io::parse_career("fuzz", &bbh::io::write_career(&seq)).unwrap(),
                seq
            );
            if seq.len() <= 400 {
                let _ = detect_hot_streak(&seq, &DetectionConfig::default());
            }
        }
    }
});
