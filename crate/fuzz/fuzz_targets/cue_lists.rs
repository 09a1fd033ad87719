#![no_main]

use bbh::heuristics::WeightVector;
use bbh::indicators::IndicatorDefinition;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(w) = text.parse::<WeightVector>() {
            assert_eq!(
                w.to_string().parse::<WeightVector>().unwrap().len(),
                w.len()
            );
        }
        if let Ok(def) = text.parse::<IndicatorDefinition>() {
            assert_eq!(def.to_string().parse::<IndicatorDefinition>().unwrap(), def);
        }
    }
});
