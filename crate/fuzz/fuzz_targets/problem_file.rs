//! Fuzzes the problem-file parser: arbitrary bytes must never panic,
//! overflow, or hang — only return a parsed problem or a diagnostic error.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = fracstab::problem::parse_problem_file(text);
    }
});
