#![no_main]

use std::sync::OnceLock;

use epd_core::decoder::{mld, prepare_llr, sc_decode, scl_decode};
use epd_core::io::parse_transformation;
use epd_core::Transformation;
use libfuzzer_sys::fuzz_target;

// An (8,3) code under a heavily pruned, permuted transformation.
const TRANSFORMATION: &str = "8 8 3
perm: 7 1 2 3 8 4 5 6
R:
0 0 1
1 1 0
0 0 0
1 1 0
dropped:
";

fn transformation() -> &'static Transformation {
    static T: OnceLock<Transformation> = OnceLock::new();
    T.get_or_init(|| parse_transformation(TRANSFORMATION, &epd_core::codes::challenging_8_3()).unwrap())
}

fuzz_target!(|data: &[u8]| {
    if data.len() < 8 {
        return;
    }
    let t = transformation();
    // Each byte becomes an LLR in [-16, 16) with occasional extremes.
    let llr: Vec<f64> = data[..8]
        .iter()
        .map(|&b| match b {
            0 => f64::INFINITY,
            255 => f64::NEG_INFINITY,
            1 => 1e300,
            _ => (b as f64 - 128.0) / 8.0,
        })
        .collect();
    let p = prepare_llr(&llr, t).unwrap();
    let g = t.generator();
    for r in [sc_decode(&p, t).unwrap(), scl_decode(&p, t, 4).unwrap(), mld(&llr, g).unwrap()] {
        assert_eq!(g.vec_mul(&r.message).unwrap(), r.codeword);
    }
});
