use fullgroup::kakutani::{canonical_equivalence, weld};
use fullgroup::random::{random_clopen, random_element, random_positive};
use fullgroup::{index, ClopenSet, Cylinder, Element, OdometerSystem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn system(pick: u8) -> OdometerSystem {
    match pick % 3 {
        0 => OdometerSystem::dyadic(),
        1 => OdometerSystem::new(vec![2], vec![3]).unwrap(),
        _ => OdometerSystem::new(vec![], vec![2, 3]).unwrap(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// First return by walking `w+1, w+2, ...` on the cylinder quotient.
fn brute_first_return(a: &ClopenSet, depth: usize) -> Vec<i64> {
    let r = a.system().radix(depth).unwrap();
    let mask = a.mask_at(depth).unwrap();
    (0..r)
        .map(|w| {
            if !mask[w as usize] {
                return 0;
            }
            (1..=r as i64).find(|t| mask[((w as i64 + t) % r as i64) as usize]).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(seed: u64, pick: u8) {
        let s = system(pick);
        let mut r = rng(seed);
        let a = random_element(&mut r, &s, 4).unwrap();
        let b = random_element(&mut r, &s, 4).unwrap();
        let c = random_element(&mut r, &s, 4).unwrap();
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.compose(&a.invert()).unwrap().is_identity());
        prop_assert_eq!(a.power(11), (0..11).fold(Element::identity(&s), |acc, _| acc.compose(&a).unwrap()));
        prop_assert_eq!(a.power(-3), a.invert().power(3));
    }

    #[test]
    fn cocycle_identity(seed: u64, pick: u8) {
        let s = system(pick);
        let mut r = rng(seed);
        let a = random_element(&mut r, &s, 4).unwrap();
        let b = random_element(&mut r, &s, 4).unwrap();
        let d = a.depth().max(b.depth());
        let (ta, tb) = (a.table_at(d).unwrap(), b.table_at(d).unwrap());
        let radix = ta.len() as i64;
        let ab = a.compose(&b).unwrap().table_at(d).unwrap();
        for w in 0..ta.len() {
            let image = (w as i64 + tb[w]).rem_euclid(radix) as usize;
            prop_assert_eq!(ab[w], ta[image] + tb[w]);
        }
    }

    #[test]
    fn strongly_positive_submonoid_and_bound(seed: u64, pick: u8) {
        let s = system(pick);
        let mut r = rng(seed);
        let a = Element::induced_generator(&random_clopen(&mut r, &s, 4).unwrap()).unwrap();
        let b = Element::induced_generator(&random_clopen(&mut r, &s, 4).unwrap()).unwrap();
        prop_assert!(a.compose(&b).unwrap().is_strongly_positive());
        let x = random_element(&mut r, &s, 4).unwrap();
        let k = x.norm() as i64;
        prop_assert!(x.compose(&Element::generator_power(&s, k)).unwrap().is_strongly_positive());
    }

    #[test]
    fn induced_generators_match_brute_force(seed: u64, pick: u8) {
        let s = system(pick);
        let mut r = rng(seed);
        let a = random_clopen(&mut r, &s, 5).unwrap();
        let ga = Element::induced_generator(&a).unwrap();
        prop_assert_eq!(ga.table_at(a.depth()).unwrap(), brute_first_return(&a, a.depth()));
        prop_assert!(ga.is_strongly_positive());
        prop_assert_eq!(Element::generator(&s).induced_element(&a).unwrap(), ga.clone());
        let g = Element::generator(&s);
        prop_assert_eq!(ga.conjugate_by(&g).unwrap(), Element::induced_generator(&a.translate(1)).unwrap());
        prop_assert_eq!(index(&ga).unwrap(), 1);
        let mirrored = Element::induced_generator(&a.mirror()).unwrap().mirror();
        prop_assert_eq!(mirrored, ga.invert());
    }

    #[test]
    fn induced_inverse_is_inverse_of_induced(seed: u64, pick: u8) {
        let s = system(pick);
        let mut r = rng(seed);
        let h = random_element(&mut r, &s, 4).unwrap();
        let a = random_clopen(&mut r, &s, 4).unwrap();
        prop_assert_eq!(h.invert().induced_element(&a).unwrap(), h.induced_element(&a).unwrap().invert());
    }

    #[test]
    fn dominates_matches_strong_positivity(seed: u64, pick: u8) {
        let s = system(pick);
        let mut r = rng(seed);
        let a = random_element(&mut r, &s, 3).unwrap();
        let b = random_element(&mut r, &s, 3).unwrap();
        let expected = b.compose(&a.invert()).unwrap().is_strongly_positive();
        prop_assert_eq!(Element::dominates(&a, &b).unwrap(), expected);
    }

    #[test]
    fn set_algebra_is_depth_independent(seed: u64, pick: u8) {
        let s = system(pick);
        let mut r = rng(seed);
        let a = random_clopen(&mut r, &s, 4).unwrap();
        let b = random_clopen(&mut r, &s, 4).unwrap();
        let d = a.depth().max(b.depth()) + 1;
        let again = ClopenSet::canonicalize(&s, d, a.codes_at(d).unwrap()).unwrap();
        prop_assert_eq!(&again, &a);
        let (ma, mb) = (a.mask_at(d).unwrap(), b.mask_at(d).unwrap());
        let union: Vec<u64> = (0..ma.len() as u64).filter(|&w| ma[w as usize] || mb[w as usize]).collect();
        prop_assert_eq!(a.union(&b).unwrap(), ClopenSet::canonicalize(&s, d, union).unwrap());
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert!(a.intersect(&b).unwrap().is_subset(&a).unwrap());
        let t = r.gen_range(-20..20);
        prop_assert_eq!(a.translate(t).translate(-t), a.clone());
    }

    #[test]
    fn serialization_round_trips(seed: u64, pick: u8) {
        let s = system(pick);
        let mut r = rng(seed);
        let h = random_element(&mut r, &s, 4).unwrap();
        let text = h.to_string();
        prop_assert_eq!(text.parse::<Element>().unwrap(), h);
        let a = random_clopen(&mut r, &s, 4).unwrap();
        prop_assert_eq!(ClopenSet::parse(&s, &a.to_string()).unwrap(), a);
        prop_assert_eq!(s.to_string().parse::<OdometerSystem>().unwrap(), s);
    }

    #[test]
    fn centralizer_of_g_is_cyclic(seed: u64, pick: u8) {
        let s = system(pick);
        let mut r = rng(seed);
        let a = random_element(&mut r, &s, 3).unwrap();
        let g = Element::generator(&s);
        if a.compose(&g).unwrap() == g.compose(&a).unwrap() {
            prop_assert_eq!(a.depth(), 0);
        }
        let p = Element::generator_power(&s, r.gen_range(-5..5));
        prop_assert_eq!(p.compose(&g).unwrap(), g.compose(&p).unwrap());
    }

    #[test]
    fn positive_conjugates_stay_positive(seed: u64, pick: u8) {
        let s = system(pick);
        let mut r = rng(seed);
        let h = random_positive(&mut r, &s, 3, 3).unwrap();
        prop_assert!(fullgroup::is_positive(&h));
        prop_assert!(index(&h).unwrap() >= 1);
    }

    #[test]
    fn weld_round_trip(seed: u64) {
        let s = OdometerSystem::dyadic();
        let mut r = rng(seed);
        let d1 = r.gen_range(1..4);
        let d2 = r.gen_range(1..4);
        let c1 = r.gen_range(0..1u64 << d1);
        let c2 = r.gen_range(0..1u64 << d2);
        let k = canonical_equivalence(&s, Cylinder { depth: d1, code: c1 }, &s, Cylinder { depth: d2, code: c2 }).unwrap();
        let w = weld(&s, &s, &k, 64).unwrap();
        prop_assert_eq!(w.induced_on_component(1).unwrap(), Element::generator(&s));
        prop_assert_eq!(w.induced_on_component(2).unwrap(), Element::generator(&s));
        prop_assert_eq!(w.quotient_cycle().len(), (1 << d1) + (1 << d2));
        let finer = w.at_level(1).unwrap();
        prop_assert_eq!(finer.quotient_cycle().len(), 2 * w.quotient_cycle().len());
    }
}
