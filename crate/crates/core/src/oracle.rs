//! Brute-force checks on the integer line.
//!
//! The integer `t` stands for the point `g^t x₀` with `x₀ = 000…`, whose
//! depth-`D` code is `t mod B_D`; `h` moves `t` to `t + n_{t mod B_D}`. This
//! module simulates that map directly and never consults the cycle graph, so
//! it serves as an independent oracle for the orbit analysis.

use std::collections::HashSet;

use num_rational::Ratio;

use crate::element::Element;
use crate::error::Result;
use crate::orbit::{cycle_graph, cycle_graph_at, minimal_periodic_partition, CycleClass, DEFAULT_DEPTH_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineLabel {
    /// The forward orbit leaves the window to the right.
    Positive,
    /// The forward orbit leaves the window to the left.
    Negative,
    /// The orbit closes up with the given period.
    Periodic(usize),
}

/// Orbit counts for one probe interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockCount {
    pub start: i64,
    pub positive: u64,
    pub negative: u64,
}

#[derive(Debug, Clone)]
pub struct OrbitStats {
    /// Points `-window..=window` are labelled exactly.
    pub window: i64,
    /// Extra simulated points on each side.
    pub margin: i64,
    labels: Vec<LineLabel>,
    pub blocks: Vec<BlockCount>,
    /// Number of maximal orbit pieces inside the simulated range.
    pub segments: usize,
    /// Average exponent over `-window..=window`.
    pub mean_exponent: Ratio<i64>,
}

impl OrbitStats {
    pub fn label(&self, t: i64) -> LineLabel {
        assert!(t.abs() <= self.window, "point {t} is outside the window");
        self.labels[(t + self.window) as usize]
    }

    pub fn labels(&self) -> &[LineLabel] {
        &self.labels
    }
}

/// Simulates `h` on `[-n - M, n + M]` with `M = |h|·B_D` and labels `[-n, n]`.
///
/// Within a cycle of the cylinder quotient the partial sums of the exponents
/// stay within `M`, so an orbit through `[-n, n]` never leaves the simulated
/// range before closing up or escaping on the side of its drift.
pub fn simulate_line(h: &Element, n: i64) -> OrbitStats {
    let r = h.radix() as i64;
    let norm = h.norm() as i64;
    let margin = norm * r + 1;
    let lo = -n - margin;
    let hi = n + margin;
    let len = (hi - lo + 1) as usize;
    let exp = |t: i64| h.exponent(t.rem_euclid(r) as u64);
    let succ = |t: i64| t + exp(t);
    let inside = |t: i64| (lo..=hi).contains(&t);

    let mut has_pred = vec![false; len];
    for t in lo..=hi {
        let s = succ(t);
        if inside(s) {
            has_pred[(s - lo) as usize] = true;
        }
    }
    const NONE: usize = usize::MAX;
    let mut segment = vec![NONE; len];
    let mut labels = vec![LineLabel::Periodic(0); len];
    let mut segments = 0;
    for start in lo..=hi {
        if has_pred[(start - lo) as usize] {
            continue;
        }
        let mut path = Vec::new();
        let mut t = start;
        while inside(t) {
            path.push(t);
            t = succ(t);
        }
        let label = if t > hi {
            LineLabel::Positive
        } else {
            LineLabel::Negative
        };
        for p in path {
            segment[(p - lo) as usize] = segments;
            labels[(p - lo) as usize] = label;
        }
        segments += 1;
    }
    for start in lo..=hi {
        if segment[(start - lo) as usize] != NONE {
            continue;
        }
        let mut path = vec![start];
        let mut t = succ(start);
        while t != start {
            path.push(t);
            t = succ(t);
        }
        let label = LineLabel::Periodic(path.len());
        for p in path {
            segment[(p - lo) as usize] = segments;
            labels[(p - lo) as usize] = label;
        }
        segments += 1;
    }

    // Every infinite orbit moves in jumps of at most |h|, so it meets any
    // interval of that length.
    let width = norm.max(1);
    let mut blocks = Vec::new();
    let mut start = -n / 2;
    while start + width - 1 <= n / 2 && blocks.len() < 64 {
        let mut pos = HashSet::new();
        let mut neg = HashSet::new();
        for t in start..start + width {
            let i = (t - lo) as usize;
            match labels[i] {
                LineLabel::Positive => {
                    pos.insert(segment[i]);
                }
                LineLabel::Negative => {
                    neg.insert(segment[i]);
                }
                LineLabel::Periodic(_) => {}
            }
        }
        blocks.push(BlockCount {
            start,
            positive: pos.len() as u64,
            negative: neg.len() as u64,
        });
        start += r;
    }

    let total: i64 = (-n..=n).map(exp).sum();
    OrbitStats {
        window: n,
        margin,
        labels: labels[(margin as usize)..(margin as usize + (2 * n + 1) as usize)].to_vec(),
        blocks,
        segments,
        mean_exponent: Ratio::new(total, 2 * n + 1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefineReport {
    pub depth: usize,
    pub deep_depth: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Recomputes the cycle graph `extra` levels deeper and checks it against the
/// classification and minimal components found at the canonical depth.
pub fn deep_refine_check(h: &Element, extra: usize) -> Result<RefineReport> {
    let d = h.depth();
    let deep = d + extra;
    let base = cycle_graph(h);
    let fine = cycle_graph_at(h, deep)?;
    let mpp = minimal_periodic_partition(h, DEFAULT_DEPTH_CAP)?;
    let r = base.radix();
    let mut failures = Vec::new();

    for c in &fine.cycles {
        let parent = &base.cycles[base.cycle_of[(c.members[0] % r) as usize]];
        if c.class != parent.class {
            failures.push(format!(
                "deep cycle through {} is {:?} but its parent is {:?}",
                c.members[0], c.class, parent.class
            ));
        }
        if c.class == CycleClass::Periodic && c.len() != parent.len() {
            failures.push(format!(
                "deep cycle through {} has period {} but its parent has {}",
                c.members[0],
                c.len(),
                parent.len()
            ));
        }
    }

    let comp_masks = mpp
        .components
        .iter()
        .map(|k| k.set.mask_at(deep))
        .collect::<Result<Vec<_>>>()?;
    for c in fine.cycles.iter().filter(|c| c.class != CycleClass::Periodic) {
        let owners: Vec<usize> = (0..comp_masks.len())
            .filter(|&i| c.members.iter().any(|&w| comp_masks[i][w as usize]))
            .collect();
        if owners.len() != 1 || !c.members.iter().all(|&w| comp_masks[owners[0]][w as usize]) {
            failures.push(format!(
                "deep cycle through {} is not contained in a single component",
                c.members[0]
            ));
        }
    }
    for (k, mask) in mpp.components.iter().zip(&comp_masks) {
        if k.depth > deep {
            continue;
        }
        let ids: HashSet<usize> = (0..mask.len())
            .filter(|&w| mask[w])
            .map(|w| fine.cycle_of[w])
            .collect();
        if ids.len() != 1 {
            failures.push(format!(
                "component {} splits into {} cycles at depth {deep}",
                k.set,
                ids.len()
            ));
        }
    }
    Ok(RefineReport {
        depth: d,
        deep_depth: deep,
        passed: failures.is_empty(),
        failures,
    })
}
