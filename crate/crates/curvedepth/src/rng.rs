//! Seeded substreams.
//!
//! Every random draw in the crate comes from a ChaCha stream whose seed is a
//! hash of the master seed and a short key path (role, curve index, ...), so
//! results do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// What a substream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Role {
    /// Points estimating the query curve's own measure.
    Y = 1,
    /// Query points at which the point depth is evaluated.
    Z = 2,
    /// Strata of the pooled reference measure.
    Reference = 3,
    Directions = 4,
    Generator = 5,
    Restart = 6,
    Cluster = 7,
    Test = 8,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn mix(seed: u64, parts: &[u64]) -> u64 {
    let mut h = splitmix(seed);
    for &p in parts {
        h = splitmix(h ^ splitmix(p.wrapping_add(0x632B_E59B_D9B4_E019)));
    }
    h
}

pub fn substream(seed: u64, role: Role, parts: &[u64]) -> Stream {
    let mut key = Vec::with_capacity(parts.len() + 1);
    key.push(role as u64);
    key.extend_from_slice(parts);
    ChaCha8Rng::seed_from_u64(mix(seed, &key))
}

/// FNV-1a hash of a string, used to key streams by curve id.
pub fn str_key(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Order-sensitive key of a list of ids.
pub fn ids_key<'a>(ids: impl IntoIterator<Item = &'a str>) -> u64 {
    let mut h = 0x1234_5678_9abc_def0u64;
    for id in ids {
        h = splitmix(h ^ str_key(id));
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_key_same_stream() {
        let mut a = substream(7, Role::Y, &[3]);
        let mut b = substream(7, Role::Y, &[3]);
        for _ in 0..10 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }

    #[test]
    fn roles_differ() {
        let mut a = substream(7, Role::Y, &[3]);
        let mut b = substream(7, Role::Z, &[3]);
        assert_ne!(a.random::<u64>(), b.random::<u64>());
        assert_ne!(mix(1, &[2, 3]), mix(1, &[3, 2]));
    }
}
