//! Seeded inputs shared by the benchmarks.

use fullgroup::random::{random_element, random_positive, random_word};
use fullgroup::{Element, GeneratorWord, OdometerSystem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

/// `count` random elements of depth at most `max_depth`.
pub fn elements(system: &OdometerSystem, max_depth: usize, count: usize) -> Vec<Element> {
    let mut r = rng();
    (0..count)
        .map(|_| random_element(&mut r, system, max_depth).expect("depth fits"))
        .collect()
}

/// Random elements whose canonical depth is exactly `depth`.
pub fn elements_at(system: &OdometerSystem, depth: usize, count: usize) -> Vec<Element> {
    let mut r = rng();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let e = random_element(&mut r, system, depth).expect("depth fits");
        if e.depth() == depth {
            out.push(e);
        }
    }
    out
}

pub fn positives(system: &OdometerSystem, max_depth: usize, count: usize) -> Vec<Element> {
    let mut r = rng();
    (0..count)
        .map(|_| random_positive(&mut r, system, max_depth, 3).expect("depth fits"))
        .collect()
}

pub fn words(system: &OdometerSystem, max_len: usize, count: usize) -> Vec<GeneratorWord> {
    let mut r = rng();
    (0..count)
        .map(|_| random_word(&mut r, system, max_len, 3).expect("depth fits"))
        .collect()
}
