use std::collections::{BTreeMap, HashSet};

use crate::clopen::ClopenSet;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::orbit::{cycle_graph, CycleClass};
use crate::system::OdometerSystem;

/// A finite-order element cycling `n` disjoint translates of `base`, acting
/// as `g^{signature[i]}` on the `i`-th translate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureCycle {
    pub base: ClopenSet,
    pub signature: Vec<i64>,
}

impl PureCycle {
    pub fn length(&self) -> usize {
        self.signature.len()
    }

    /// `base, h·base, ..., h^{n-1}·base`.
    pub fn translates(&self) -> Vec<ClopenSet> {
        let mut shift = 0i64;
        self.signature
            .iter()
            .map(|&s| {
                let t = self.base.translate(shift);
                shift += s;
                t
            })
            .collect()
    }

    pub fn element(&self) -> Result<Element> {
        let system = self.base.system();
        let d = self.base.depth();
        let r = system.table_len(d)? as i64;
        let mut table = vec![0i64; r as usize];
        let mut assigned = vec![false; r as usize];
        for &c in self.base.codes() {
            let mut x = c as i64;
            for &s in &self.signature {
                if assigned[x as usize] {
                    return Err(Error::invariant("pure cycle translates overlap"));
                }
                assigned[x as usize] = true;
                table[x as usize] = s;
                x = (x + s).rem_euclid(r);
            }
            if x != c as i64 {
                return Err(Error::invariant("pure cycle does not close up"));
            }
        }
        Element::validate(system, d, table)
    }
}

fn min_rotation(sig: &[i64]) -> Vec<i64> {
    (0..sig.len())
        .map(|k| {
            let mut v = sig[k..].to_vec();
            v.extend_from_slice(&sig[..k]);
            v
        })
        .min()
        .unwrap_or_default()
}

/// Composes cycles with pairwise disjoint supports.
pub fn recompose_cycles(system: &OdometerSystem, cycles: &[PureCycle]) -> Result<Element> {
    let mut h = Element::identity(system);
    for c in cycles {
        h = h.compose(&c.element()?)?;
    }
    Ok(h)
}

/// Splits a periodic element into pure cycles.
///
/// Points are grouped by their sequence of exponents along one period
/// (E-classes), then by that sequence up to rotation (E'-classes). Each
/// E'-class of period at least two gives one pure cycle whose base is the
/// E-class containing the least code of the E'-class.
pub fn pure_cycle_decomposition(h: &Element) -> Result<Vec<PureCycle>> {
    let cg = cycle_graph(h);
    if cg.cycles.iter().any(|c| c.class != CycleClass::Periodic) {
        return Err(Error::NotPeriodic);
    }
    let mut signature_of: Vec<Vec<i64>> = vec![Vec::new(); cg.table.len()];
    for c in &cg.cycles {
        if c.len() < 2 {
            continue;
        }
        for (p, &w) in c.members.iter().enumerate() {
            signature_of[w as usize] = (0..c.len())
                .map(|i| cg.table[c.members[(p + i) % c.len()] as usize])
                .collect();
        }
    }
    let mut classes: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    for (w, sig) in signature_of.iter().enumerate() {
        if sig.is_empty() {
            continue;
        }
        classes.entry(min_rotation(sig)).or_insert(w as u64);
    }
    let mut bases: Vec<(u64, Vec<i64>)> = classes.into_values().map(|w| (w, signature_of[w as usize].clone())).collect();
    bases.sort();
    let mut out = Vec::with_capacity(bases.len());
    for (_, sig) in bases {
        let codes = (0..cg.table.len() as u64)
            .filter(|&w| signature_of[w as usize] == sig)
            .collect();
        let base = ClopenSet::canonicalize(h.system(), cg.depth, codes)?;
        out.push(PureCycle { base, signature: sig });
    }
    check_decomposition(h, &out)?;
    Ok(out)
}

fn check_decomposition(h: &Element, cycles: &[PureCycle]) -> Result<()> {
    let mut seen = HashSet::new();
    let mut support = ClopenSet::empty(h.system());
    for c in cycles {
        if c.signature.iter().sum::<i64>() != 0 {
            return Err(Error::invariant("pure cycle signature does not sum to zero"));
        }
        let n = c.length();
        let rotations: HashSet<Vec<i64>> = (0..n)
            .map(|k| c.signature[k..].iter().chain(&c.signature[..k]).copied().collect())
            .collect();
        if rotations.len() != n {
            return Err(Error::invariant("pure cycle signature has a repeated rotation"));
        }
        if !seen.insert(c.signature.clone()) {
            return Err(Error::invariant("two pure cycles share a signature"));
        }
        for t in c.translates() {
            if !support.is_disjoint(&t)? {
                return Err(Error::invariant("pure cycle supports overlap"));
            }
            support = support.union(&t)?;
        }
    }
    if recompose_cycles(h.system(), cycles)? != *h {
        return Err(Error::invariant("pure cycles do not recompose to h"));
    }
    Ok(())
}

/// `X_p(n)` split into `n` layers with `h` mapping layer `i` onto layer `i+1 mod n`.
pub fn periodic_layers(h: &Element, n: usize) -> Result<Vec<ClopenSet>> {
    let cg = cycle_graph(h);
    let mut layers: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut found = false;
    for c in &cg.cycles {
        if c.class == CycleClass::Periodic && c.len() == n {
            found = true;
            for (i, &w) in c.members.iter().enumerate() {
                layers[i].push(w);
            }
        }
    }
    if !found {
        return Err(Error::NotPeriodic);
    }
    layers
        .into_iter()
        .map(|codes| ClopenSet::canonicalize(h.system(), cg.depth, codes))
        .collect()
}
