//! Counter-based random streams.
//!
//! Every random quantity in a sample is a pure function of the seed and the
//! indices it belongs to (vertex, coordinate, vertex pair), so any
//! evaluation order or thread count produces the same bits.

/// Tags separating the independent streams derived from one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Position = 1,
    EdgeUniform = 2,
    SplitFirst = 3,
    SplitSecond = 4,
    Subsample = 5,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const ODD_B: u64 = 0xd1b5_4a32_d192_ed03;

/// SplitMix64 finalizer; a bijection on `u64` with full avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Maps 64 random bits to a uniform double in `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    // signed conversion is a single instruction; the value is below 2^53
    ((bits >> 11) as i64) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Key for one stream of one seed.
#[inline]
pub fn stream_key(seed: u64, stream: Stream) -> u64 {
    mix64(mix64(seed ^ GOLDEN) ^ (stream as u64).wrapping_mul(ODD_B))
}

/// Per-row key; combine with [`cell_uniform`] for the column.
#[inline]
pub fn row_key(key: u64, row: u64) -> u64 {
    mix64(key ^ row.wrapping_add(1).wrapping_mul(GOLDEN))
}

#[inline]
pub fn cell_uniform(row_key: u64, col: u64) -> f64 {
    unit_f64(mix64(row_key ^ col.wrapping_add(1).wrapping_mul(ODD_B)))
}

/// Uniform in `[0, 1)` keyed by `(seed, stream, a, b)`.
#[inline]
pub fn keyed_uniform(seed: u64, stream: Stream, a: u64, b: u64) -> f64 {
    cell_uniform(row_key(stream_key(seed, stream), a), b)
}

/// Uniform for the unordered vertex pair `{u, v}`.
#[inline]
pub fn pair_uniform(seed: u64, stream: Stream, u: usize, v: usize) -> f64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    keyed_uniform(seed, stream, a as u64, b as u64)
}
