#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(pubs) = bbh::io::parse_corpus(text) {
            let corpus: bbh::indicators::ReferenceCorpus = pubs.iter().cloned().collect();
            for p in pubs.iter().filter(|p| p.counts()) {
                assert!(bbh::indicators::is_highly_cited(p, &corpus, 0.1).is_ok());
            }
        }
    }
});
