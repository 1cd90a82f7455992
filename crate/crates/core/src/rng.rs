//! Counter-based random streams.
//!
//! Every variate used by this crate is a pure function of a 64-bit seed, an
//! index, and a purpose tag, obtained by chaining a strong 64-bit finalizer
//! (the SplitMix64 mixing function). This gives reproducible, schedule- and
//! order-independent sampling: vertex `i` of a run is the same whether it is
//! drawn alone, in a batch, or from another thread, and the Bernoulli coin of
//! a vertex pair `(i, j)` depends only on `(edge_seed, i, j)`.

/// Purpose tag for radial coordinates.
pub const TAG_RADIUS: u64 = 0x52414449;
/// Purpose tag for angular coordinates.
pub const TAG_ANGLE: u64 = 0x414e474c;
/// Purpose tag for per-pair edge coins.
pub const TAG_PAIR: u64 = 0x50414952;
/// Purpose tag for bootstrap resampling.
pub const TAG_BOOT: u64 = 0x424f4f54;

/// SplitMix64 finalizer: a bijective mixer with full avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a `(seed, index, tag)` triple into one well-distributed word.
#[inline]
pub fn key3(seed: u64, index: u64, tag: u64) -> u64 {
    mix64(mix64(mix64(seed ^ tag) ^ index))
}

/// Uniform variate in `[0, 1)` from a mixed word (53-bit resolution).
#[inline]
pub fn unit_from(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform variate in `(0, 1]` from a mixed word. Never returns 0, so a
/// comparison `u < p` can always be short-circuited by an upper bound on `p`.
#[inline]
pub fn unit_open_from(h: u64) -> f64 {
    ((h >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform `[0, 1)` variate for `(seed, index, tag)`.
#[inline]
pub fn unit(seed: u64, index: u64, tag: u64) -> f64 {
    unit_from(key3(seed, index, tag))
}

/// The edge coin for the unordered pair `{i, j}`, `i < j`: uniform in `(0, 1]`.
#[inline]
pub fn pair_unit(edge_seed: u64, i: u32, j: u32) -> f64 {
    let packed = ((i as u64) << 32) | j as u64;
    unit_open_from(key3(edge_seed, packed, TAG_PAIR))
}
