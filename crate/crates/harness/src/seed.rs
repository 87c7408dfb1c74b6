//! Seed derivation.

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the child identified by `path` under `parent`.
pub fn derive(parent: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(parent), |acc, &x| mix(acc ^ mix(x)))
}

/// Coordinate used for the unencoded baseline in place of a round count.
pub const BARE: u64 = u64::MAX;

/// Seed of grid point `(p, r)`; `r = None` is the unencoded baseline.
pub fn point_seed(master: u64, p: f64, r: Option<usize>) -> u64 {
    derive(master, &[p.to_bits(), r.map_or(BARE, |r| r as u64)])
}

/// Seed of trial `t` at a grid point.
pub fn trial_seed(point: u64, t: usize) -> u64 {
    derive(point, &[t as u64])
}

/// Seed of the bootstrap stream at a grid point.
pub fn bootstrap_seed(point: u64) -> u64 {
    derive(point, &[BARE, BARE])
}
