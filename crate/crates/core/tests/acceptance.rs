//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use fullgroup::kakutani::{canonical_equivalence, weld};
use fullgroup::oracle::{deep_refine_check, simulate_line, LineLabel};
use fullgroup::orbit::empirical_index;
use fullgroup::random::{random_clopen, random_element, random_finite_order, random_positive, random_word};
use fullgroup::rewrite::recompose_cycles;
use fullgroup::{
    canonical_conjugator, index, is_positive, minimal_periodic_partition, normal_form, orbit_numbers,
    positive_form, pure_cycle_decomposition, reduce_word, sign_partition, ClopenSet, Cylinder, Element,
    OdometerSystem, DEFAULT_DEPTH_CAP,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn dyadic() -> OdometerSystem {
    OdometerSystem::dyadic()
}

fn mixed() -> OdometerSystem {
    OdometerSystem::new(vec![2], vec![3]).unwrap()
}

fn systems() -> [OdometerSystem; 2] {
    [dyadic(), mixed()]
}

fn el(s: &str) -> Element {
    s.parse().unwrap()
}

fn worked_examples() -> Outcome {
    let d2 = dyadic();
    let g = Element::generator(&d2);
    let f = el("D2@1{0:1,1:-1}");
    let h = f.compose(&g).unwrap().compose(&f).unwrap();
    ensure!(h == el("D2@1{0:3,1:-1}"), "fgf = {h}");
    let hp = el("D2@1{0:-1,1:3}");
    ensure!(!h.is_strongly_positive(), "h is strongly positive");
    ensure!(is_positive(&h), "h is not positive");
    ensure!(positive_form(&h) == g, "positive form of h is {}", positive_form(&h));
    let k = canonical_conjugator(&h).map_err(|e| e.to_string())?;
    let g1 = Element::induced_generator(&ClopenSet::parse(&d2, "[1]").unwrap()).unwrap();
    ensure!(k == g1, "conjugator is {k}");
    ensure!(g.conjugate_by(&k).unwrap() == h, "k g k^-1 differs from h");
    let hh = h.compose(&hp).unwrap();
    ensure!(hh == el("D2@1{0:-2,1:6}"), "hh' = {hh}");
    ensure!(hh.exponent(0) == -2, "hh' on [0] is not g^-2");
    ensure!(orbit_numbers(&h) == (1, 0), "o(h) = {:?}", orbit_numbers(&h));
    ensure!(orbit_numbers(&hp) == (1, 0), "o(h') = {:?}", orbit_numbers(&hp));
    ensure!(orbit_numbers(&hh) == (3, 1), "o(hh') = {:?}", orbit_numbers(&hh));
    let idx: Vec<i64> = [&h, &hp, &hh].iter().map(|e| index(e).unwrap()).collect();
    ensure!(idx == [1, 1, 2], "indices {idx:?}");
    Ok(())
}

fn index_homomorphism(rng: &mut ChaCha8Rng) -> Outcome {
    for s in &systems() {
        for _ in 0..500 {
            let a = random_element(rng, s, 8).unwrap();
            let b = random_element(rng, s, 8).unwrap();
            let ab = a.compose(&b).unwrap();
            let (ia, ib, iab) = (index(&a).unwrap(), index(&b).unwrap(), index(&ab).unwrap());
            ensure!(iab == ia + ib, "I({a} {b}) = {iab} but I(a) + I(b) = {}", ia + ib);
        }
        for _ in 0..100 {
            let a = random_clopen(rng, s, 8).unwrap();
            let ga = Element::induced_generator(&a).unwrap();
            ensure!(index(&ga).unwrap() == 1, "I(g_A) != 1 for A = {a}");
        }
    }
    Ok(())
}

fn oracle_equivalence(rng: &mut ChaCha8Rng) -> Outcome {
    const N: i64 = 100_000;
    for k in 0..200 {
        let s = &systems()[k % 2];
        let h = random_element(rng, s, 4).unwrap();
        let stats = simulate_line(&h, N);
        let (op, om) = orbit_numbers(&h);
        for b in &stats.blocks {
            ensure!(
                (b.positive, b.negative) == (op, om),
                "{h}: block at {} sees ({}, {}) orbits, expected ({op}, {om})",
                b.start,
                b.positive,
                b.negative
            );
        }
        let sp = sign_partition(&h);
        let d = h.depth();
        let r = h.radix() as i64;
        let pos = sp.positive.mask_at(d).unwrap();
        let neg = sp.negative.mask_at(d).unwrap();
        let mpp = minimal_periodic_partition(&h, DEFAULT_DEPTH_CAP).unwrap();
        let mut period = vec![0usize; r as usize];
        for p in &mpp.periodic {
            for w in p.set.codes_at(d).unwrap() {
                period[w as usize] = p.period;
            }
        }
        for t in -N..=N {
            let w = t.rem_euclid(r) as usize;
            let ok = match stats.label(t) {
                LineLabel::Positive => pos[w],
                LineLabel::Negative => neg[w],
                LineLabel::Periodic(n) => period[w] == n,
            };
            ensure!(ok, "{h}: label {:?} at {t} disagrees with the partition", stats.label(t));
        }
    }
    Ok(())
}

fn averaging(rng: &mut ChaCha8Rng) -> Outcome {
    const L: u64 = 10_000;
    for k in 0..100 {
        let s = &systems()[k % 2];
        let h = random_element(rng, s, 6).unwrap();
        let i = Ratio::from_integer(index(&h).unwrap());
        let bound = Ratio::new(2 * h.norm() as i64 * h.radix() as i64, L as i64);
        for _ in 0..10 {
            let start = rng.gen_range(-1_000_000..1_000_000);
            let e = empirical_index(&h, start, L);
            let err = if e > i { e - i } else { i - e };
            ensure!(err <= bound, "{h}: average {e} from {start} is off by {err} > {bound}");
        }
    }
    Ok(())
}

fn normal_forms(rng: &mut ChaCha8Rng) -> Outcome {
    for k in 0..500 {
        let s = &systems()[k % 2];
        let h = random_element(rng, s, 5).unwrap();
        let nf = normal_form(&h).map_err(|e| format!("{h}: {e}"))?;
        ensure!(nf.evaluate().unwrap() == h, "{h}: normal form evaluates elsewhere");
        for pair in nf.chain.windows(2) {
            ensure!(pair[1].is_subset(&pair[0]).unwrap(), "{h}: chain is not nested");
        }
        ensure!(
            nf.chain.len() as i64 == index(&h).unwrap() - nf.r,
            "{h}: chain length {} but index - r = {}",
            nf.chain.len(),
            index(&h).unwrap() - nf.r
        );
        let deeper = h.depth() + rng.gen_range(1..=2);
        let table = h.table_at(deeper).unwrap();
        let again = Element::validate(s, deeper, table).unwrap();
        ensure!(normal_form(&again).unwrap() == nf, "{h}: normal form depends on depth");
    }
    Ok(())
}

fn rewriting(rng: &mut ChaCha8Rng) -> Outcome {
    for k in 0..300 {
        let s = &systems()[k % 2];
        let w = random_word(rng, s, 12, 3).unwrap();
        let reduced = reduce_word(&w).map_err(|e| format!("{w}: {e}"))?;
        let e = w.evaluate().unwrap();
        ensure!(reduced.evaluate().unwrap() == e, "{w}: reduction changes the element");
        ensure!(reduced == normal_form(&e).unwrap().to_word(), "{w}: reduced word is not the normal form");
    }
    Ok(())
}

fn positive_forms(rng: &mut ChaCha8Rng) -> Outcome {
    for k in 0..300 {
        let s = &systems()[k % 2];
        let h = random_positive(rng, s, 4, 4).unwrap();
        let hp = positive_form(&h);
        let kk = canonical_conjugator(&h).map_err(|e| format!("{h}: {e}"))?;
        ensure!(hp.conjugate_by(&kk).unwrap() == h, "{h}: k pi(h) k^-1 != h");
        ensure!(kk.is_strongly_positive(), "{h}: conjugator {kk} is not strongly positive");
        let fixed = kk.support().complement();
        let mpp = minimal_periodic_partition(&h, DEFAULT_DEPTH_CAP).unwrap();
        for c in &mpp.components {
            ensure!(
                !c.set.is_disjoint(&fixed).unwrap(),
                "{h}: fixed points of k miss component {}",
                c.set
            );
        }
    }
    Ok(())
}

fn pure_cycles(rng: &mut ChaCha8Rng) -> Outcome {
    for k in 0..200 {
        let s = &systems()[k % 2];
        let h = random_finite_order(rng, s, 4).unwrap();
        let cycles = pure_cycle_decomposition(&h).map_err(|e| format!("{h}: {e}"))?;
        ensure!(recompose_cycles(s, &cycles).unwrap() == h, "{h}: cycles do not recompose");
        let sigs: HashSet<&Vec<i64>> = cycles.iter().map(|c| &c.signature).collect();
        ensure!(sigs.len() == cycles.len(), "{h}: repeated signature");
        for c in &cycles {
            let n = c.signature.len();
            let rots: HashSet<Vec<i64>> = (0..n)
                .map(|r| c.signature[r..].iter().chain(&c.signature[..r]).copied().collect())
                .collect();
            ensure!(rots.len() == n, "{h}: signature {:?} has a repeated rotation", c.signature);
        }
    }
    Ok(())
}

fn refinement_backstop(rng: &mut ChaCha8Rng) -> Outcome {
    for k in 0..200 {
        let s = &systems()[k % 2];
        let h = random_element(rng, s, 4).unwrap();
        let report = deep_refine_check(&h, 4).map_err(|e| format!("{h}: {e}"))?;
        ensure!(report.passed, "{h}: {:?}", report.failures);
    }
    Ok(())
}

fn weld_witness() -> Outcome {
    let d2 = dyadic();
    let y = Cylinder::new(&d2, 1, 0).unwrap();
    let kappa = canonical_equivalence(&d2, y, &d2, y).map_err(|e| e.to_string())?;
    let w = weld(&d2, &d2, &kappa, DEFAULT_DEPTH_CAP).map_err(|e| e.to_string())?;
    let g = Element::generator(&d2);
    ensure!(w.induced_on_component(1).unwrap() == g, "first return to X1 is not g1");
    ensure!(w.induced_on_component(2).unwrap() == g, "first return to X2 is not g2");
    let cycle: Vec<String> = w.quotient_cycle().iter().map(|&t| w.render_tagged(t)).collect();
    ensure!(cycle == ["1:[0]", "2:[1]", "2:[0]", "1:[1]"], "quotient cycle {cycle:?}");
    let a = w.weld_element(&[g.clone(), g.invert()], DEFAULT_DEPTH_CAP).map_err(|e| e.to_string())?;
    ensure!(
        a.render_table() == "{1:[0]:3, 1:[1]:1, 2:[0]:-1, 2:[1]:-3}",
        "G-table {}",
        a.render_table()
    );
    ensure!(
        (a.o_plus, a.o_minus, a.m, a.index) == (1, 1, 2, 0),
        "o = ({}, {}), m = {}, index {}",
        a.o_plus,
        a.o_minus,
        a.m,
        a.index
    );
    ensure!((a.o_plus + a.o_minus) as usize == a.m, "orbit number differs from m");
    Ok(())
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20261016);
    let checks: Vec<(&str, Box<dyn FnMut(&mut ChaCha8Rng) -> Outcome>)> = vec![
        ("worked example vectors", Box::new(|_| worked_examples())),
        ("index is a homomorphism", Box::new(index_homomorphism)),
        ("integer-line oracle agrees", Box::new(oracle_equivalence)),
        ("averaging formula", Box::new(averaging)),
        ("normal form", Box::new(normal_forms)),
        ("rewriting", Box::new(rewriting)),
        ("positive forms", Box::new(positive_forms)),
        ("pure cycles", Box::new(pure_cycles)),
        ("minimal-periodic refinement backstop", Box::new(refinement_backstop)),
        ("weld", Box::new(|_| weld_witness())),
    ];
    let mut failed = 0;
    for (i, (name, mut check)) in checks.into_iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| check(&mut rng)))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panic".into())));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
