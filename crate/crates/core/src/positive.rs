//! Positive and strongly positive elements.
//!
//! `h` is positive when every orbit is either a fixed point or drifts to
//! `+∞` (no negative cycles and no periodic cycles of length above one), and
//! strongly positive when every exponent is nonnegative.

use crate::clopen::ClopenSet;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::orbit::{cycle_graph, sign_partition, CycleClass, CycleGraph, Orientation};

pub fn is_positive(h: &Element) -> bool {
    let cg = cycle_graph(h);
    cg.cycles.iter().all(|c| match c.class {
        CycleClass::Positive => true,
        CycleClass::Periodic => c.len() == 1,
        CycleClass::Negative => false,
    })
}

/// Prefix sums of the exponents along a cycle, over two loops.
fn loop_prefix(cg: &CycleGraph, members: &[u64]) -> Vec<i64> {
    let l = members.len();
    let mut q = Vec::with_capacity(2 * l + 1);
    q.push(0);
    for i in 0..2 * l {
        q.push(q[i] + cg.table[members[i % l] as usize]);
    }
    q
}

/// The set `Y+` (orientation `Positive`) of points whose forward cocycle
/// sums are all nonnegative, or `Y-` (orientation `Negative`) of points whose
/// backward sums `c(h^{-n} x)` are all nonpositive. `h` must be positive.
pub fn strongly_positive_domain(h: &Element, orientation: Orientation) -> Result<ClopenSet> {
    if !is_positive(h) {
        return Err(Error::NotPositive);
    }
    let cg = cycle_graph(h);
    let mut codes = Vec::new();
    for c in &cg.cycles {
        let l = c.len();
        let q = loop_prefix(&cg, &c.members);
        for p in 0..l {
            let ok = match orientation {
                Orientation::Positive => (1..=l).all(|i| q[p + i] >= q[p]),
                // c(h^{-n} x) = -(exponents of the n predecessors); index p + l
                // is the same point one loop later.
                Orientation::Negative => (1..=l).all(|i| q[p + l] - q[p + l - i] >= 0),
            };
            if ok {
                codes.push(c.members[p]);
            }
        }
    }
    ClopenSet::canonicalize(h.system(), cg.depth, codes)
}

/// The strongly positive element with the same infinite orbits as `h` that
/// fixes every periodic point: each point moves to the next point of its
/// orbit in the order of `g`.
///
/// Along a cycle with loop sum `S`, the displacements reachable from the
/// member at position `j` are `Q_k - Q_j + qS` for the prefix sums `Q` and
/// all integers `q`; the least positive one is the cyclic gap from the
/// residue `Q_j mod |S|` to the next residue of another member (or `|S|`).
pub fn positive_form(h: &Element) -> Element {
    let cg = cycle_graph(h);
    let mut table = vec![0i64; cg.table.len()];
    for c in &cg.cycles {
        if c.class == CycleClass::Periodic {
            continue;
        }
        let s = c.sum.abs();
        let q = loop_prefix(&cg, &c.members);
        let mut residues: Vec<i64> = (0..c.len()).map(|k| q[k].rem_euclid(s)).collect();
        let by_position = residues.clone();
        residues.sort_unstable();
        for (j, &w) in c.members.iter().enumerate() {
            let r = by_position[j];
            let at = residues.binary_search(&r).expect("own residue is present");
            let gap = if residues.len() == 1 {
                s
            } else if at + 1 < residues.len() {
                residues[at + 1] - r
            } else {
                residues[0] + s - r
            };
            table[w as usize] = gap;
        }
    }
    Element::validate(h.system(), cg.depth, table)
        .expect("successor map of an orbit partition is a bijection")
}

/// The strongly positive `k` with `h = k · π(h) · k^{-1}`, where `π` is
/// [`positive_form`]. Requires `h` positive.
///
/// `h` and `h' = π(h)` permute the cylinders of each cycle as single cycles
/// with the same loop sum, so `δ(w, t) = c_{h^t}(w) - c_{h'^t}(w)` is
/// periodic in `t`. `Z` is the set where `δ(·, t) >= 0` for all `t`; `k`
/// sends `h'^s z` to `h^s z` for `z ∈ Z` and the least such `s`.
pub fn canonical_conjugator(h: &Element) -> Result<Element> {
    if !is_positive(h) {
        return Err(Error::NotPositive);
    }
    let hp = positive_form(h);
    let d = h.depth();
    let cg = cycle_graph(h);
    let tp = hp.table_at(d)?;
    let sp = hp.sigma_at(d)?;
    let radix = tp.len();
    let mut inv_sp = vec![0usize; radix];
    for (w, &x) in sp.iter().enumerate() {
        inv_sp[x as usize] = w;
    }
    let mut table = vec![0i64; radix];
    for c in &cg.cycles {
        if c.class == CycleClass::Periodic {
            continue;
        }
        let l = c.len();
        // delta[w][t] for t in 0..l, computed by walking both maps from w.
        let mut delta = std::collections::HashMap::with_capacity(l);
        for &w in &c.members {
            let mut row = Vec::with_capacity(l);
            let (mut x, mut y) = (w as usize, w as usize);
            let (mut ph, mut pp) = (0i64, 0i64);
            for _ in 0..l {
                row.push(ph - pp);
                ph += cg.table[x];
                x = cg.sigma[x] as usize;
                pp += tp[y];
                y = sp[y] as usize;
            }
            if ph != pp {
                return Err(Error::invariant("loop sums of h and its positive form differ"));
            }
            delta.insert(w as usize, row);
        }
        let in_z = |w: usize| delta[&w].iter().all(|&v| v >= 0);
        for &w in &c.members {
            let mut z = w as usize;
            let mut s = 0;
            while !in_z(z) {
                z = inv_sp[z];
                s += 1;
                if s >= l {
                    return Err(Error::invariant("strongly positive domain misses a cycle"));
                }
            }
            table[w as usize] = delta[&z][s];
        }
    }
    let k = Element::validate(h.system(), d, table)
        .map_err(|e| Error::invariant(format!("conjugator is not a bijection: {e}")))?;
    if hp.conjugate_by(&k)? != *h {
        return Err(Error::invariant("conjugator fails to conjugate the positive form to h"));
    }
    Ok(k)
}

/// `h = h_p · (k_gt h_gt k_gt^{-1}) · (k_lt h_lt k_lt^{-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongSignForm {
    pub h_p: Element,
    pub h_gt: Element,
    pub k_gt: Element,
    pub h_lt: Element,
    pub k_lt: Element,
}

impl StrongSignForm {
    pub fn recompose(&self) -> Result<Element> {
        let plus = self.h_gt.conjugate_by(&self.k_gt)?;
        let minus = self.h_lt.conjugate_by(&self.k_lt)?;
        self.h_p.compose(&plus.compose(&minus)?)
    }
}

/// The negative factors are computed on the mirrored element, where `g`
/// becomes `g^{-1}` and negative orbits become positive.
pub fn strong_sign_form(h: &Element) -> Result<StrongSignForm> {
    let sp = sign_partition(h);
    let h_gt = positive_form(&sp.h_plus);
    let k_gt = canonical_conjugator(&sp.h_plus)?;
    let mirrored = sp.h_minus.mirror();
    let h_lt = positive_form(&mirrored).mirror();
    let k_lt = canonical_conjugator(&mirrored)?.mirror();
    let form = StrongSignForm {
        h_p: sp.h_p,
        h_gt,
        k_gt,
        h_lt,
        k_lt,
    };
    if form.recompose()? != *h {
        return Err(Error::invariant("strong sign form does not recompose to h"));
    }
    Ok(form)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorConjugacy {
    /// `h = k g k^{-1}`.
    ConjugateOfG(Element),
    /// `h = k g^{-1} k^{-1}`.
    ConjugateOfGinv(Element),
    Neither,
}

pub fn generator_conjugacy(h: &Element) -> Result<GeneratorConjugacy> {
    let g = Element::generator(h.system());
    if positive_form(h) != g {
        return Ok(GeneratorConjugacy::Neither);
    }
    if is_positive(h) {
        return Ok(GeneratorConjugacy::ConjugateOfG(canonical_conjugator(h)?));
    }
    let inv = h.invert();
    if is_positive(&inv) {
        return Ok(GeneratorConjugacy::ConjugateOfGinv(canonical_conjugator(&inv)?));
    }
    Ok(GeneratorConjugacy::Neither)
}
