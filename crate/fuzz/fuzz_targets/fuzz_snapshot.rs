#![no_main]

use libfuzzer_sys::fuzz_target;
use shocklab::persist::read_snapshot_parts;

// Input layout: sidecar JSON on the first line, raw payload after it.
fuzz_target!(|data: &[u8]| {
    let split = data.iter().position(|&b| b == b'\n').unwrap_or(data.len());
    let (sidecar, rest) = data.split_at(split);
    let payload = rest.get(1..).unwrap_or(&[]);
    let _ = read_snapshot_parts(sidecar, payload);
});
