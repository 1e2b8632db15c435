//! Cycle structure of an element on a finite cylinder quotient.
//!
//! At depth `D` an element permutes the `B_D` cylinders by `σ(w) = w + n_w`.
//! Following a cycle of length `L` from a point returns it to its own cylinder
//! after displacement `S = Σ n` along the cycle, which is a multiple of `B_D`.
//! Every point of the cycle's cylinders therefore has period exactly `L` when
//! `S = 0`, and otherwise drifts to `+∞` or `-∞` according to the sign of `S`,
//! at a rate of `S / B_D` distinct orbits per `g`-orbit. The classification is
//! exact at any depth at which the element is tabulated.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::clopen::ClopenSet;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::system::OdometerSystem;

/// Default maximal depth for component refinement.
pub const DEFAULT_DEPTH_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleClass {
    Periodic,
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    /// Codes in traversal order, starting from the least one.
    pub members: Vec<u64>,
    pub sum: i64,
    pub class: CycleClass,
    /// `sum / B_D`; zero for periodic cycles.
    pub multiplier: i64,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CycleGraph {
    pub system: OdometerSystem,
    pub depth: usize,
    pub table: Vec<i64>,
    pub sigma: Vec<u64>,
    /// Cycles ordered by least member.
    pub cycles: Vec<Cycle>,
    pub cycle_of: Vec<usize>,
}

impl CycleGraph {
    pub fn radix(&self) -> u64 {
        self.sigma.len() as u64
    }

    fn codes_of(&self, keep: impl Fn(&Cycle) -> bool) -> Vec<u64> {
        self.cycles
            .iter()
            .filter(|c| keep(c))
            .flat_map(|c| c.members.iter().copied())
            .collect()
    }

    /// The union of the cylinders of the cycles selected by `keep`.
    pub fn set_of(&self, keep: impl Fn(&Cycle) -> bool) -> ClopenSet {
        ClopenSet::canonicalize(&self.system, self.depth, self.codes_of(keep))
            .expect("cycle members are in range")
    }

    pub fn orbit_numbers(&self) -> (u64, u64) {
        let mut plus = 0;
        let mut minus = 0;
        for c in &self.cycles {
            match c.class {
                CycleClass::Positive => plus += c.multiplier as u64,
                CycleClass::Negative => minus += c.multiplier.unsigned_abs(),
                CycleClass::Periodic => {}
            }
        }
        (plus, minus)
    }
}

/// Cycle graph at the element's canonical depth.
pub fn cycle_graph(h: &Element) -> CycleGraph {
    cycle_graph_at(h, h.depth()).expect("canonical depth is tabulable")
}

/// Cycle graph after refining the element to `depth`.
pub fn cycle_graph_at(h: &Element, depth: usize) -> Result<CycleGraph> {
    let table = h.table_at(depth)?;
    let sigma = h.sigma_at(depth)?;
    let radix = sigma.len() as i64;
    let mut cycle_of = vec![usize::MAX; sigma.len()];
    let mut cycles = Vec::new();
    for start in 0..sigma.len() {
        if cycle_of[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut members = Vec::new();
        let mut sum = 0i64;
        let mut w = start;
        loop {
            cycle_of[w] = id;
            members.push(w as u64);
            sum += table[w];
            w = sigma[w] as usize;
            if w == start {
                break;
            }
        }
        if sum % radix != 0 {
            return Err(Error::invariant(format!(
                "cycle through code {start} has sum {sum} not divisible by {radix}"
            )));
        }
        let class = match sum.signum() {
            0 => CycleClass::Periodic,
            1 => CycleClass::Positive,
            _ => CycleClass::Negative,
        };
        cycles.push(Cycle {
            members,
            sum,
            class,
            multiplier: sum / radix,
        });
    }
    Ok(CycleGraph {
        system: h.system().clone(),
        depth,
        table,
        sigma,
        cycles,
        cycle_of,
    })
}

/// The decomposition `h = h_p h_+ h_-` with its three clopen domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPartition {
    pub periodic: ClopenSet,
    pub positive: ClopenSet,
    pub negative: ClopenSet,
    pub h_p: Element,
    pub h_plus: Element,
    pub h_minus: Element,
}

pub fn sign_partition(h: &Element) -> SignPartition {
    let cg = cycle_graph(h);
    let periodic = cg.set_of(|c| c.class == CycleClass::Periodic);
    let positive = cg.set_of(|c| c.class == CycleClass::Positive);
    let negative = cg.set_of(|c| c.class == CycleClass::Negative);
    let part = |s: &ClopenSet| h.restrict(s).expect("cycle unions are invariant");
    SignPartition {
        h_p: part(&periodic),
        h_plus: part(&positive),
        h_minus: part(&negative),
        periodic,
        positive,
        negative,
    }
}

/// A minimal component of the aperiodic part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub set: ClopenSet,
    pub orientation: Orientation,
    /// Depth at which the component is a single cycle.
    pub depth: usize,
    /// Multiplier of that cycle: the number of orbits per `g`-orbit it carries.
    pub multiplier: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPart {
    pub period: usize,
    pub set: ClopenSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalPeriodicPartition {
    /// `X_p(n)` for each period `n` that occurs, by increasing `n`.
    pub periodic: Vec<PeriodicPart>,
    pub components: Vec<Component>,
}

impl MinimalPeriodicPartition {
    /// `m(h)`, the number of aperiodic minimal components.
    pub fn m(&self) -> usize {
        self.components.len()
    }
}

/// Splits an aperiodic cycle into its minimal components.
///
/// Lifting the cycle one level with next base `b` acts on the new digit as
/// `+m mod b`, giving `gcd(|m|, b)` cycles of multiplier `m / gcd`. Over
/// several levels the fibre coordinate `y` (the digits beyond `D` read as an
/// integer modulo `M`) moves by `+m` per loop, so the components are the
/// residue classes of `y` modulo `G = gcd(m, M)`. Refinement stops once the
/// remaining multiplier shares no factor with any later base.
fn split_cycle(
    system: &OdometerSystem,
    depth: usize,
    cycle: &Cycle,
    table: &[i64],
    cap: usize,
) -> Result<Vec<Component>> {
    let orientation = if cycle.sum > 0 {
        Orientation::Positive
    } else {
        Orientation::Negative
    };
    let mut rem = cycle.multiplier.unsigned_abs();
    let mut split = 1u64;
    let mut level = depth;
    while !system.coprime_beyond(rem, level) {
        if level + 1 > cap {
            return Err(Error::DepthOverflow { cap });
        }
        let d = rem.gcd(&system.base(level));
        split *= d;
        rem /= d;
        level += 1;
    }
    let sign = cycle.multiplier.signum();
    if split == 1 {
        let set = ClopenSet::canonicalize(system, depth, cycle.members.clone())?;
        return Ok(vec![Component {
            set,
            orientation,
            depth,
            multiplier: cycle.multiplier,
        }]);
    }
    let radix = system.radix(depth)? as i64;
    let fibre = system.span(depth, level)?;
    if cycle.members.len() as u64 * fibre > crate::system::MAX_TABLE {
        return Err(Error::TooLarge { depth: level });
    }
    let w0 = cycle.members[0] as i64;
    let mut offsets = Vec::with_capacity(cycle.members.len());
    let mut partial = 0i64;
    for &w in &cycle.members {
        offsets.push((w0 + partial - w as i64) / radix);
        partial += table[w as usize];
    }
    let g = split as i64;
    (0..g)
        .map(|r| {
            let mut codes = Vec::new();
            for (&w, &kappa) in cycle.members.iter().zip(&offsets) {
                let first = (r + kappa).rem_euclid(g) as u64;
                let mut y = first;
                while y < fibre {
                    codes.push(w + y * radix as u64);
                    y += split;
                }
            }
            Ok(Component {
                set: ClopenSet::canonicalize(system, level, codes)?,
                orientation,
                depth: level,
                multiplier: sign * (rem as i64),
            })
        })
        .collect()
}

pub fn minimal_periodic_partition(h: &Element, cap: usize) -> Result<MinimalPeriodicPartition> {
    let cg = cycle_graph(h);
    let mut by_period: std::collections::BTreeMap<usize, Vec<u64>> = Default::default();
    let mut components = Vec::new();
    for c in &cg.cycles {
        if c.class == CycleClass::Periodic {
            by_period.entry(c.len()).or_default().extend(&c.members);
        } else {
            components.extend(split_cycle(&cg.system, cg.depth, c, &cg.table, cap)?);
        }
    }
    let periodic = by_period
        .into_iter()
        .map(|(period, codes)| {
            Ok(PeriodicPart {
                period,
                set: ClopenSet::canonicalize(&cg.system, cg.depth, codes)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MinimalPeriodicPartition {
        periodic,
        components,
    })
}

/// `(o+, o-)`: positive and negative infinite orbits per `g`-orbit.
pub fn orbit_numbers(h: &Element) -> (u64, u64) {
    cycle_graph(h).orbit_numbers()
}

/// The index `Σ n_w / B_D`, checked against `o+ - o-`.
pub fn index(h: &Element) -> Result<i64> {
    let total: i64 = h.table().iter().sum();
    let radix = h.radix() as i64;
    if total % radix != 0 {
        return Err(Error::invariant(format!(
            "exponent total {total} is not divisible by {radix}"
        )));
    }
    let (plus, minus) = orbit_numbers(h);
    let i = total / radix;
    if i != plus as i64 - minus as i64 {
        return Err(Error::invariant(format!(
            "index {i} differs from orbit number difference {plus} - {minus}"
        )));
    }
    Ok(i)
}

/// `(1/l) Σ_{j=1..l} c(g^{start+j} x₀)` along the integer line.
pub fn empirical_index(h: &Element, start: i64, l: u64) -> Ratio<i64> {
    assert!(l >= 1, "averaging length must be positive");
    let r = h.radix() as i64;
    let table = h.table();
    let full = (l / r as u64) as i64;
    let period_sum: i64 = table.iter().sum();
    let mut total = full * period_sum;
    let s = start.rem_euclid(r);
    for j in 1..=(l % r as u64) as i64 {
        total += table[((s + j).rem_euclid(r)) as usize];
    }
    Ratio::new(total, l as i64)
}

/// Whether `A` meets every aperiodic minimal component, optionally only
/// those of one orientation.
pub fn meets_every_infinite_orbit_oriented(
    h: &Element,
    a: &ClopenSet,
    orientation: Option<Orientation>,
    cap: usize,
) -> Result<bool> {
    let mpp = minimal_periodic_partition(h, cap)?;
    for c in &mpp.components {
        if orientation.is_some_and(|o| o != c.orientation) {
            continue;
        }
        if a.is_disjoint(&c.set)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn meets_every_infinite_orbit(h: &Element, a: &ClopenSet) -> Result<bool> {
    meets_every_infinite_orbit_oriented(h, a, None, DEFAULT_DEPTH_CAP)
}
