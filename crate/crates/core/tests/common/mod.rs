#![allow(dead_code)]

use qdel_core::Matrix;

/// Bits of `x` as an `n`-long vector, most significant (qubit 1) first.
pub fn bits(x: usize, n: usize) -> Vec<u8> {
    (0..n).map(|k| ((x >> (n - 1 - k)) & 1) as u8).collect()
}

pub fn index(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Direct transcription of the partial trace over qubit `i` (1-based): every
/// pair of labels `(x, y)` contributes `a_xy * Tr(|x_i><y_i|)` to the entry
/// labelled by `x` and `y` with slot `i` removed.
pub fn partial_trace_oracle(rho: &Matrix, n: usize, i: usize) -> Matrix {
    let dim = 1 << n;
    let mut out = Matrix::zeros(dim / 2, dim / 2);
    for x in 0..dim {
        for y in 0..dim {
            let (mut bx, mut by) = (bits(x, n), bits(y, n));
            if bx[i - 1] != by[i - 1] {
                continue;
            }
            bx.remove(i - 1);
            by.remove(i - 1);
            out[(index(&bx), index(&by))] += rho[(x, y)];
        }
    }
    out
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
