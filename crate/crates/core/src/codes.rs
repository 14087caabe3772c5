//! Generator matrices for the codes used in tests, examples and the CLI.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, Permutation};

/// The `(8,3)` code made of three disjoint repetition blocks. Every
/// unpruned polar transform of it is worse than treating the bits as
/// independent channels.
pub fn challenging_8_3() -> BitMatrix {
    BitMatrix::from_rows(&[
        [1u8, 1, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 1, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 1],
    ])
    .expect("static matrix")
}

/// Generator of a cyclic code: rows are shifts of `gen_poly` (coefficients
/// from `x^0` upward).
fn cyclic_generator(n: usize, gen_poly: &[u8]) -> BitMatrix {
    let deg = gen_poly.len() - 1;
    let k = n - deg;
    BitMatrix::from_fn(k, n, |i, j| j >= i && j - i <= deg && gen_poly[j - i] == 1)
}

/// Appends an overall parity column.
fn extend_with_parity(g: &BitMatrix) -> BitMatrix {
    BitMatrix::from_fn(g.rows(), g.cols() + 1, |i, j| {
        if j < g.cols() {
            g.get(i, j)
        } else {
            (0..g.cols()).filter(|&t| g.get(i, t)).count() % 2 == 1
        }
    })
}

/// The `(24,12)` extended Golay code.
pub fn egolay_24_12() -> BitMatrix {
    // 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11
    let gen = [1u8, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1];
    extend_with_parity(&cyclic_generator(23, &gen))
}

/// A systematic `(16,8)` code `[I_8 | A]` with a Bernoulli(1/2) `A`.
pub fn random_16_8() -> BitMatrix {
    const ROWS: [&str; 8] = [
        "1000000011001010",
        "0100000000101100",
        "0010000010100100",
        "0001000000101001",
        "0000100001101000",
        "0000010000100100",
        "0000001001001010",
        "0000000110100111",
    ];
    parse_rows(&ROWS)
}

/// The published permutation paired with [`random_16_8`].
pub fn random_16_8_permutation() -> Permutation {
    const ROWS: [&str; 16] = [
        "0000000000000001",
        "0001000000000000",
        "0000000000000100",
        "0000000001000000",
        "0000001000000000",
        "0000010000000000",
        "0000000000100000",
        "0000000000001000",
        "0000000100000000",
        "0010000000000000",
        "0000100000000000",
        "0100000000000000",
        "0000000010000000",
        "1000000000000000",
        "0000000000000010",
        "0000000000010000",
    ];
    Permutation::from_matrix(&parse_rows(&ROWS)).expect("static permutation matrix")
}

fn parse_rows(rows: &[&str]) -> BitMatrix {
    let bits: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| r.bytes().map(|b| b - b'0').collect())
        .collect();
    BitMatrix::from_rows(&bits).expect("static matrix")
}

/// Primitive polynomials for GF(2^m), bit `i` = coefficient of `x^i`.
fn primitive_poly(m: u32) -> Option<u32> {
    Some(match m {
        3 => 0b1011,
        4 => 0x13,
        5 => 0x25,
        6 => 0x43,
        7 => 0x89,
        8 => 0x11d,
        9 => 0x211,
        10 => 0x409,
        _ => return None,
    })
}

struct Gf {
    exp: Vec<u32>,
    log: Vec<u32>,
    order: u32,
}

impl Gf {
    fn new(m: u32, poly: u32) -> Self {
        let order = (1u32 << m) - 1;
        let mut exp = vec![0; 2 * order as usize];
        let mut log = vec![0; (order + 1) as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x;
            exp[(i + order) as usize] = x;
            log[x as usize] = i;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        Gf { exp, log, order }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    fn alpha_pow(&self, e: u32) -> u32 {
        self.exp[(e % self.order) as usize]
    }
}

/// Extended primitive narrow-sense BCH code of length `2^m` with designed
/// error-correcting capability `t`.
///
/// Coordinates are indexed by field elements: column `j` is the element whose
/// polynomial-basis representation is the integer `j`, so column 0 is the
/// overall-parity coordinate and column `α^i` holds cyclic position `i`.
/// This is the affine-invariant indexing; it lines the code up with the
/// butterfly graph (stage `s` flips bit `s` of the element).
///
/// `ebch(7, 11)` is the `(128, 57)` code, `ebch(4, 2)` the `(16, 7)` one.
pub fn ebch(m: u32, t: usize) -> Result<BitMatrix> {
    let poly = primitive_poly(m)
        .ok_or_else(|| Error::ParamOutOfRange(format!("no primitive polynomial for m = {m}")))?;
    let gf = Gf::new(m, poly);
    let n = gf.order as usize;
    if t == 0 || 2 * t >= n {
        return Err(Error::ParamOutOfRange(format!(
            "designed distance {} too large for length {n}",
            2 * t + 1
        )));
    }
    let mut covered = vec![false; n];
    // Generator polynomial with GF(2^m) coefficients, x^0 first.
    let mut gen: Vec<u32> = vec![1];
    for i in 1..=2 * t {
        if covered[i] {
            continue;
        }
        let mut j = i;
        loop {
            covered[j] = true;
            // multiply by (x + alpha^j)
            let root = gf.alpha_pow(j as u32);
            let mut next = vec![0u32; gen.len() + 1];
            for (d, &c) in gen.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= gf.mul(c, root);
            }
            gen = next;
            j = (j * 2) % n;
            if j == i {
                break;
            }
        }
    }
    let gen_bits: Vec<u8> = gen
        .iter()
        .map(|&c| match c {
            0 | 1 => Ok(c as u8),
            _ => Err(Error::Integrity("BCH generator is not binary".into())),
        })
        .collect::<Result<_>>()?;
    if gen_bits.len() > n {
        return Err(Error::ParamOutOfRange(format!(
            "t = {t} leaves no information bits at length {n}"
        )));
    }
    let cyclic = extend_with_parity(&cyclic_generator(n, &gen_bits));
    Ok(BitMatrix::from_fn(cyclic.rows(), n + 1, |r, j| match j {
        0 => cyclic.get(r, n),
        _ => cyclic.get(r, gf.log[j] as usize),
    }))
}
