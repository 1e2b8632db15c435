//! Random test inputs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::clopen::ClopenSet;
use crate::element::Element;
use crate::error::Result;
use crate::rewrite::{GeneratorWord, Token};
use crate::system::OdometerSystem;

/// A uniformly chosen depth permutation with lifts in `{-1, 0, 1}·B_D`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, system: &OdometerSystem, max_depth: usize) -> Result<Element> {
    let depth = rng.gen_range(0..=max_depth);
    let r = system.table_len(depth)? as i64;
    let mut perm: Vec<i64> = (0..r).collect();
    perm.shuffle(rng);
    let table = perm
        .iter()
        .enumerate()
        .map(|(w, &p)| p - w as i64 + rng.gen_range(-1..=1) * r)
        .collect();
    Element::validate(system, depth, table)
}

pub fn random_clopen<R: Rng + ?Sized>(rng: &mut R, system: &OdometerSystem, max_depth: usize) -> Result<ClopenSet> {
    let depth = rng.gen_range(0..=max_depth);
    let r = system.table_len(depth)?;
    let mut codes: Vec<u64> = (0..r).filter(|_| rng.gen_bool(0.5)).collect();
    if codes.is_empty() {
        codes.push(rng.gen_range(0..r));
    }
    ClopenSet::canonicalize(system, depth, codes)
}

/// A product of `1..=factors` induced generators, conjugated by a random element.
pub fn random_positive<R: Rng + ?Sized>(
    rng: &mut R,
    system: &OdometerSystem,
    max_depth: usize,
    factors: usize,
) -> Result<Element> {
    let mut h = Element::identity(system);
    for _ in 0..rng.gen_range(1..=factors.max(1)) {
        let a = random_clopen(rng, system, max_depth)?;
        h = h.compose(&Element::induced_generator(&a)?)?;
    }
    let k = random_element(rng, system, max_depth)?;
    h.conjugate_by(&k)
}

/// A permutation lifted with zero displacement around each of its cycles,
/// conjugated by a random element.
pub fn random_finite_order<R: Rng + ?Sized>(rng: &mut R, system: &OdometerSystem, max_depth: usize) -> Result<Element> {
    let depth = rng.gen_range(0..=max_depth);
    let r = system.table_len(depth)? as i64;
    let mut perm: Vec<i64> = (0..r).collect();
    perm.shuffle(rng);
    let mut table = vec![0i64; r as usize];
    let mut seen = vec![false; r as usize];
    for start in 0..r as usize {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut w = start;
        while !seen[w] {
            seen[w] = true;
            cycle.push(w);
            w = perm[w] as usize;
        }
        let mut lifts: Vec<i64> = cycle.iter().map(|_| rng.gen_range(-1..=1)).collect();
        let excess: i64 = lifts.iter().sum();
        *lifts.last_mut().unwrap() -= excess;
        for (&w, k) in cycle.iter().zip(lifts) {
            table[w] = perm[w] - w as i64 + k * r;
        }
    }
    let h = Element::validate(system, depth, table)?;
    let k = random_element(rng, system, max_depth)?;
    h.conjugate_by(&k)
}

pub fn random_word<R: Rng + ?Sized>(
    rng: &mut R,
    system: &OdometerSystem,
    max_len: usize,
    max_depth: usize,
) -> Result<GeneratorWord> {
    let len = rng.gen_range(0..=max_len);
    let mut tokens = Vec::with_capacity(len);
    for _ in 0..len {
        tokens.push(match rng.gen_range(0..4) {
            0 => Token::G,
            1 => Token::Ginv,
            _ => Token::Ind(random_clopen(rng, system, max_depth)?),
        });
    }
    Ok(GeneratorWord::new(system, tokens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{cycle_graph, CycleClass};
    use crate::positive::is_positive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_the_promised_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = OdometerSystem::new(vec![2], vec![3]).unwrap();
        for _ in 0..50 {
            assert!(is_positive(&random_positive(&mut rng, &s, 4, 3).unwrap()));
            let f = random_finite_order(&mut rng, &s, 4).unwrap();
            assert!(cycle_graph(&f).cycles.iter().all(|c| c.class == CycleClass::Periodic));
            assert!(!random_clopen(&mut rng, &s, 4).unwrap().is_empty());
            random_word(&mut rng, &s, 12, 3).unwrap().evaluate().unwrap();
        }
    }
}
