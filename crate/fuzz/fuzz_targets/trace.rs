#![no_main]

use bbh::heuristics::DecisionTrace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(trace) = text.parse::<DecisionTrace>() {
            let again: DecisionTrace = trace.to_string().parse().unwrap();
            assert_eq!(again.decision, trace.decision);
            assert_eq!(again.steps.len(), trace.steps.len());
        }
    }
});
