//! Fuzzes the decimal order-string parser: comma-separated candidate order
//! values of any shape must be either parsed exactly or rejected cleanly.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let parts: Vec<String> = text.split(',').map(str::to_string).collect();
        // exercise both a typical denominator cap and a tight one
        let _ = fracstab::orders::parse_decimal_orders(&parts, 1000);
        let _ = fracstab::orders::parse_decimal_orders(&parts, 16);
    }
});
