#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = epd_core::io::parse_generator(s) {
            // Anything that parses must survive a round trip.
            let again = epd_core::io::parse_generator(&epd_core::io::write_generator(&g)).unwrap();
            assert_eq!(again, g);
        }
    }
});
