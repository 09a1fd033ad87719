#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(env) = bbh::io::parse_environment(text) {
            let again = bbh::io::parse_environment(&bbh::io::write_environment(&env)).unwrap();
            assert_eq!(again, env);
        }
    }
});
