#![no_main]

use libfuzzer_sys::fuzz_target;
use shocklab::config::ExperimentConfig;

// Parsing and validating an arbitrary config text must never panic.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = ExperimentConfig::from_toml_str(text) {
            let _ = cfg.validate();
        }
    }
});
