//! Deterministic low-discrepancy sampling.
//!
//! Sample points come from the Halton sequence with the first eight prime
//! bases, one base per dimension. The sequence is fully determined by the
//! starting index, so a `seed` (used as an index offset) reproduces the same
//! samples on every platform — reports can simply state the seed.

/// One prime base per supported dimension.
pub const BASES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// The radical inverse of `i` in the given base: digit-reverse `i` and place
/// it after the radix point.
pub fn radical_inverse(base: u32, mut i: u64) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut result = 0.0;
    while i > 0 {
        result += (i % base as u64) as f64 * inv;
        i /= base as u64;
        inv /= b;
    }
    result
}

/// Halton sequence iterator over the unit cube `[0,1)^dims`.
#[derive(Debug, Clone)]
pub struct Halton {
    index: u64,
    dims: usize,
}

impl Halton {
    /// `seed` offsets the starting index; index 0 (all zeros) is skipped.
    pub fn new(seed: u64, dims: usize) -> Self {
        assert!(dims <= BASES.len(), "at most {} dimensions supported", BASES.len());
        Halton { index: seed.wrapping_add(1), dims }
    }

    /// The next point of the sequence.
    pub fn next_point(&mut self) -> Vec<f64> {
        let i = self.index;
        self.index += 1;
        BASES[..self.dims]
            .iter()
            .map(|&b| radical_inverse(b, i))
            .collect()
    }
}

/// Affine map from `[0,1)` onto `[lo, hi)`.
pub fn map_unit(u: f64, lo: f64, hi: f64) -> f64 {
    lo + u * (hi - lo)
}

/// `n` points with each coordinate mapped into its own range.
pub fn sample_ranges(n: usize, seed: u64, ranges: &[(f64, f64)]) -> Vec<Vec<f64>> {
    let mut h = Halton::new(seed, ranges.len());
    (0..n)
        .map(|_| {
            h.next_point()
                .iter()
                .zip(ranges)
                .map(|(u, (lo, hi))| map_unit(*u, *lo, *hi))
                .collect()
        })
        .collect()
}
