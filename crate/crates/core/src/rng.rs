//! Deterministic random streams.
//!
//! Every stochastic quantity is drawn from a ChaCha8 stream keyed by the
//! user seed and a tuple of integer tags (sample index, system size,
//! realization, ...), so results never depend on scheduling or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a base seed with tags into a new 64-bit seed.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(base), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

/// The stream used for sample `index` of a batch drawn with `seed`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A generator seeded directly from a derived seed.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = sample_stream(5, 0).random();
        let b: u64 = sample_stream(5, 0).random();
        let c: u64 = sample_stream(5, 1).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn derived_seeds_depend_on_every_tag() {
        let s = derive_seed(1, &[2, 3]);
        assert_ne!(s, derive_seed(1, &[3, 2]));
        assert_ne!(s, derive_seed(1, &[2]));
        assert_eq!(s, derive_seed(1, &[2, 3]));
    }
}
