#![no_main]

use libfuzzer_sys::fuzz_target;
use epd_core::io::TransformationFile;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(file) = TransformationFile::parse(s) else { return };
    assert_eq!(TransformationFile::parse(&file.to_text()).unwrap(), file);
    // Bind to a code of matching shape: the identity padded with zero
    // columns is full rank for any k ≤ n.
    let g = epd_core::BitMatrix::from_fn(file.k, file.n, |i, j| i == j);
    if let Ok(t) = file.load(&g) {
        let m = vec![1u8; t.k()];
        assert_eq!(t.encode(&m).unwrap(), g.vec_mul(&m).unwrap());
    }
});
