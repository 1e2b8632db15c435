//! Kakutani equivalences between odometer cylinders and the welding of two
//! odometers into a single minimal system.
//!
//! Maps are programs of cylinder-level steps acting on symbolic points: a
//! [`Point`] fixes the first `depth` digits and leaves the tail free, and a
//! step may add an integer to the tail (a carry). Everything is exact.

use std::collections::HashMap;
use std::fmt;

use crate::clopen::Cylinder;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::orbit::{index, minimal_periodic_partition, orbit_numbers};
use crate::system::OdometerSystem;

/// A cylinder point with a free tail: digits `code` at `depth`, tail `τ + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub depth: usize,
    pub code: u64,
    pub shift: i64,
}

impl Point {
    pub fn new(depth: usize, code: u64) -> Self {
        Point {
            depth,
            code,
            shift: 0,
        }
    }
}

/// `g^t` applied to a symbolic point; overflow carries into the tail.
pub fn power_point(system: &OdometerSystem, p: Point, t: i64) -> Result<Point> {
    let r = system.radix(p.depth)? as i128;
    let v = p.code as i128 + t as i128;
    Ok(Point {
        depth: p.depth,
        code: v.rem_euclid(r) as u64,
        shift: p.shift + v.div_euclid(r) as i64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Replaces the prefix `from` by `to`, keeping the tail.
    TailIdentify {
        from_system: OdometerSystem,
        from: Cylinder,
        to_system: OdometerSystem,
        to: Cylinder,
    },
    Power { system: OdometerSystem, t: i64 },
}

impl Step {
    fn apply(&self, p: Point) -> Result<Point> {
        match self {
            Step::TailIdentify {
                from_system,
                from,
                to_system,
                to,
            } => {
                if p.depth < from.depth {
                    return Err(Error::invariant("point is coarser than the identified cylinder"));
                }
                let r1 = from_system.radix(from.depth)?;
                if p.code % r1 != from.code {
                    return Err(Error::invariant("point lies outside the identified cylinder"));
                }
                let r2 = to_system.radix(to.depth)?;
                Ok(Point {
                    depth: to.depth + p.depth - from.depth,
                    code: to.code + r2 * (p.code / r1),
                    shift: p.shift,
                })
            }
            Step::Power { system, t } => power_point(system, p, *t),
        }
    }
}

/// A conjugacy between the first-return maps of two odometers on cylinders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KakutaniMap {
    pub source_system: OdometerSystem,
    pub source: Cylinder,
    pub target_system: OdometerSystem,
    pub target: Cylinder,
    pub program: Vec<Step>,
}

impl KakutaniMap {
    pub fn apply(&self, p: Point) -> Result<Point> {
        self.program.iter().try_fold(p, |q, s| s.apply(q))
    }

    /// Checks `κ ∘ (g_1)_{Y1} = (g_2)_{Y2} ∘ κ` and bijectivity onto `Y2` one
    /// and two digits below the cylinders.
    pub fn verify(&self) -> Result<()> {
        Cylinder::new(&self.source_system, self.source.depth, self.source.code)?;
        Cylinder::new(&self.target_system, self.target.depth, self.target.code)?;
        let (sd, td) = (self.source.depth, self.target.depth);
        if self.source_system.shifted(sd) != self.target_system.shifted(td) {
            return Err(Error::TailMismatch);
        }
        let b1 = self.source_system.radix(sd)?;
        let b2 = self.target_system.radix(td)?;
        for j in 1..=2 {
            let span = self.source_system.span(sd, sd + j)?;
            let mut hit = vec![false; span as usize];
            for u in 0..span {
                let p = Point::new(sd + j, self.source.code + b1 * u);
                let q = self.apply(p)?;
                if q.depth != td + j || q.code % b2 != self.target.code {
                    return Err(Error::invariant("Kakutani map leaves the target cylinder"));
                }
                let v = (q.code / b2) as usize;
                if hit[v] {
                    return Err(Error::invariant("Kakutani map is not injective"));
                }
                hit[v] = true;
                let lhs = self.apply(power_point(&self.source_system, p, b1 as i64)?)?;
                let rhs = power_point(&self.target_system, q, b2 as i64)?;
                if lhs != rhs {
                    return Err(Error::invariant("Kakutani map does not conjugate the first returns"));
                }
            }
        }
        Ok(())
    }

    /// The same map restricted to a subcylinder of the source.
    pub fn restrict(&self, sub: Cylinder) -> Result<KakutaniMap> {
        let r = self.source_system.radix(self.source.depth)?;
        if sub.depth < self.source.depth || sub.code % r != self.source.code {
            return Err(Error::invariant("restriction is not a subcylinder of the source"));
        }
        let q = self.apply(Point::new(sub.depth, sub.code))?;
        let k = KakutaniMap {
            source_system: self.source_system.clone(),
            source: sub,
            target_system: self.target_system.clone(),
            target: Cylinder {
                depth: q.depth,
                code: q.code,
            },
            program: self.program.clone(),
        };
        k.verify()?;
        Ok(k)
    }

    fn depth_offset(&self) -> i64 {
        self.target.depth as i64 - self.source.depth as i64
    }
}

impl fmt::Display for KakutaniMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{} -> {}{}",
            self.source_system.tag(),
            self.source.render(&self.source_system),
            self.target_system.tag(),
            self.target.render(&self.target_system)
        )?;
        for s in &self.program {
            if let Step::Power { t, .. } = s {
                write!(f, " (g^{t})")?;
            }
        }
        Ok(())
    }
}

/// The tail identification `w1 x ↦ w2 x`.
pub fn canonical_equivalence(
    sys1: &OdometerSystem,
    w1: Cylinder,
    sys2: &OdometerSystem,
    w2: Cylinder,
) -> Result<KakutaniMap> {
    Cylinder::new(sys1, w1.depth, w1.code)?;
    Cylinder::new(sys2, w2.depth, w2.code)?;
    if sys1.shifted(w1.depth) != sys2.shifted(w2.depth) {
        return Err(Error::TailMismatch);
    }
    let k = KakutaniMap {
        source_system: sys1.clone(),
        source: w1,
        target_system: sys2.clone(),
        target: w2,
        program: vec![Step::TailIdentify {
            from_system: sys1.clone(),
            from: w1,
            to_system: sys2.clone(),
            to: w2,
        }],
    };
    k.verify()?;
    Ok(k)
}

/// `κ_13 = κ_23 g_2^t κ_12` on the part of `Y1` that `g_2^t κ_12` sends into `Z2`.
pub fn compose_equivalences(k12: &KakutaniMap, k23: &KakutaniMap) -> Result<KakutaniMap> {
    if k12.target_system != k23.source_system {
        return Err(Error::SystemMismatch);
    }
    let sys2 = &k12.target_system;
    let (y, z) = (k12.target, k23.source);
    let d = y.depth.max(z.depth);
    let t = z.code as i64 - y.code as i64;
    let j = d - y.depth;
    let sd = k12.source.depth;
    let b1 = k12.source_system.radix(sd)?;
    let bd = sys2.radix(d)?;
    let span = k12.source_system.span(sd, sd + j)?;
    let mut source = None;
    for u in 0..span {
        let p = Point::new(sd + j, k12.source.code + b1 * u);
        let q = k12.apply(p)?;
        if q.depth == d && q.code % bd == y.code {
            source = Some(Cylinder {
                depth: p.depth,
                code: p.code,
            });
            break;
        }
    }
    let source = source.ok_or_else(|| Error::invariant("no source subcylinder maps onto the splice"))?;
    let mut program = k12.program.clone();
    if t != 0 {
        program.push(Step::Power {
            system: sys2.clone(),
            t,
        });
    }
    program.extend(k23.program.iter().cloned());
    let mut k = KakutaniMap {
        source_system: k12.source_system.clone(),
        source,
        target_system: k23.target_system.clone(),
        target: Cylinder::root(),
        program,
    };
    let q = k.apply(Point::new(source.depth, source.code))?;
    k.target = Cylinder {
        depth: q.depth,
        code: q.code,
    };
    k.verify()?;
    Ok(k)
}

/// A tagged cylinder: component (1-based) and code at that component's depth.
pub type Tagged = (usize, u64);

/// Two odometers glued along a Kakutani map (or a single odometer).
///
/// At the working level the map `G` permutes tagged cylinders in one cycle
/// and adds a total of one to the tail going around it; this makes `G`
/// conjugate to the odometer [`WeldedSystem::odometer`], whose first digit
/// is the position on the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeldedSystem {
    components: Vec<OdometerSystem>,
    kappa: Option<KakutaniMap>,
    level: usize,
    depths: Vec<usize>,
    cycle: Vec<Tagged>,
    shifts: Vec<i64>,
    position: HashMap<Tagged, usize>,
}

impl WeldedSystem {
    /// The trivial weld of one odometer.
    pub fn single(system: &OdometerSystem) -> Self {
        WeldedSystem {
            components: vec![system.clone()],
            kappa: None,
            level: 0,
            depths: vec![0],
            cycle: vec![(1, 0)],
            shifts: vec![1],
            position: HashMap::from([((1, 0), 0)]),
        }
    }

    pub fn components(&self) -> &[OdometerSystem] {
        &self.components
    }

    pub fn kappa(&self) -> Option<&KakutaniMap> {
        self.kappa.as_ref()
    }

    /// Depth of the tagged cylinders in each component.
    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    /// Tagged cylinders in `G`-order, starting at `1:[0…0]`.
    pub fn quotient_cycle(&self) -> &[Tagged] {
        &self.cycle
    }

    /// Tail carry of the `G`-step leaving each cycle position.
    pub fn carries(&self) -> &[i64] {
        &self.shifts
    }

    pub fn render_tagged(&self, t: Tagged) -> String {
        let sys = &self.components[t.0 - 1];
        let cyl = Cylinder {
            depth: self.depths[t.0 - 1],
            code: t.1,
        };
        format!("{}:{}", t.0, cyl.render(sys))
    }

    /// The odometer conjugate to `G`.
    pub fn odometer(&self) -> Result<OdometerSystem> {
        let tail = self.components[0].shifted(self.depths[0]);
        let n = self.cycle.len() as u64;
        if n == 1 {
            return Ok(tail);
        }
        let mut pre = vec![n];
        pre.extend_from_slice(tail.preperiod());
        OdometerSystem::new(pre, tail.period().to_vec())
    }

    /// The same weld at a finer level.
    pub fn at_level(&self, level: usize) -> Result<WeldedSystem> {
        match &self.kappa {
            Some(k) => build(&self.components[0], &self.components[1], k, level),
            None => {
                let sys = &self.components[0];
                let n = sys.table_len(level)?;
                let cycle: Vec<Tagged> = (0..n).map(|c| (1, c)).collect();
                let mut shifts = vec![0; n as usize];
                shifts[n as usize - 1] = 1;
                let position = cycle.iter().enumerate().map(|(p, &t)| (t, p)).collect();
                Ok(WeldedSystem {
                    components: self.components.clone(),
                    kappa: None,
                    level,
                    depths: vec![level],
                    cycle,
                    shifts,
                    position,
                })
            }
        }
    }

    /// First return of `G` to component `i`; equals `g_i` for a valid weld.
    pub fn induced_on_component(&self, i: usize) -> Result<Element> {
        let sys = self
            .components
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::invariant(format!("no component {i}")))?;
        let d = self.depths[i - 1];
        let r = sys.table_len(d)?;
        let n = self.cycle.len();
        let mut table = vec![0i64; r as usize];
        for x in 0..r {
            let mut p = self.position[&(i, x)];
            let mut carry = 0i64;
            loop {
                carry += self.shifts[p];
                p = (p + 1) % n;
                if self.cycle[p].0 == i {
                    break;
                }
            }
            let y = self.cycle[p].1;
            table[x as usize] = y as i64 - x as i64 + r as i64 * carry;
        }
        let e = Element::validate(sys, d, table)?;
        if e != Element::generator(sys) {
            return Err(Error::invariant(format!(
                "first return to component {i} is {e}, not the generator"
            )));
        }
        Ok(e)
    }

    /// Rewrites the piecewise map acting as `specs[i]` on component `i + 1` as
    /// an element of the conjugate odometer and analyzes it.
    pub fn weld_element(&self, specs: &[Element], cap: usize) -> Result<WeldAnalysis> {
        if specs.len() != self.components.len() {
            return Err(Error::invariant("one element per component is required"));
        }
        let mut level = self.level;
        for (i, s) in specs.iter().enumerate() {
            if s.system() != &self.components[i] {
                return Err(Error::SystemMismatch);
            }
            let base = self.depths[i] - self.level;
            level = level.max(s.depth().saturating_sub(base));
        }
        if level > cap {
            return Err(Error::NotInFullGroup);
        }
        let w = if level == self.level {
            self.clone()
        } else {
            self.at_level(level)?
        };
        let n = w.cycle.len() as i64;
        let mut acc = vec![0i64; w.cycle.len()];
        for p in 1..w.cycle.len() {
            acc[p] = acc[p - 1] + w.shifts[p - 1];
        }
        let mut table = vec![0i64; w.cycle.len()];
        let mut tagged = Vec::with_capacity(w.cycle.len());
        for (p, &(i, x)) in w.cycle.iter().enumerate() {
            let sys = &w.components[i - 1];
            let spec = &specs[i - 1];
            let e = spec.exponent(x % spec.radix());
            let q = power_point(sys, Point::new(w.depths[i - 1], x), e)?;
            let p2 = w.position[&(i, q.code)];
            table[p] = p2 as i64 - p as i64 + n * (q.shift - acc[p2] + acc[p]);
            tagged.push(((i, x), table[p]));
        }
        tagged.sort();
        let system = w.odometer()?;
        let depth = if w.cycle.len() == 1 { 0 } else { 1 };
        let element = Element::validate(&system, depth, table).map_err(|e| match e {
            Error::NotBijective { .. } => Error::NotInFullGroup,
            other => other,
        })?;
        let (o_plus, o_minus) = orbit_numbers(&element);
        let m = minimal_periodic_partition(&element, cap)?.m();
        let idx = index(&element)?;
        Ok(WeldAnalysis {
            table: tagged
                .into_iter()
                .map(|(t, e)| (w.render_tagged(t), e))
                .collect(),
            element,
            o_plus,
            o_minus,
            m,
            index: idx,
        })
    }
}

/// The outcome of [`WeldedSystem::weld_element`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeldAnalysis {
    /// `G`-exponent on each tagged cylinder, ordered by component then code.
    pub table: Vec<(String, i64)>,
    /// The same map as an element over [`WeldedSystem::odometer`].
    pub element: Element,
    pub o_plus: u64,
    pub o_minus: u64,
    pub m: usize,
    pub index: i64,
}

impl WeldAnalysis {
    pub fn render_table(&self) -> String {
        let parts: Vec<String> = self.table.iter().map(|(k, e)| format!("{k}:{e}")).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Welds `X1` and `X2` along `κ: Y1 → Y2`.
///
/// `G` is `g_2 κ` on `Y1`, `g_1 (g_1)_{Y1}^{-1} κ^{-1}` on `Y2` and `g_i`
/// elsewhere. A map between whole spaces is first restricted to a proper
/// subcylinder so that `g_i Y_i` and `Y_i` are disjoint.
pub fn weld(
    sys1: &OdometerSystem,
    sys2: &OdometerSystem,
    kappa: &KakutaniMap,
    cap: usize,
) -> Result<WeldedSystem> {
    if &kappa.source_system != sys1 || &kappa.target_system != sys2 {
        return Err(Error::SystemMismatch);
    }
    kappa.verify()?;
    let mut k = kappa.clone();
    if k.source.depth == 0 || k.target.depth == 0 {
        if k.source.depth + 1 > cap || k.target.depth + 1 > cap {
            return Err(Error::OverlapError);
        }
        k = k.restrict(k.source.extend_zero(1))?;
    }
    let w = build(sys1, sys2, &k, 0)?;
    let finer = build(sys1, sys2, &k, 1)?;
    if finer.cycle.len() != w.cycle.len() * sys1.base(w.depths[0]) as usize {
        return Err(Error::invariant("refined quotient has the wrong size"));
    }
    Ok(w)
}

fn build(sys1: &OdometerSystem, sys2: &OdometerSystem, k: &KakutaniMap, level: usize) -> Result<WeldedSystem> {
    let d1 = k.source.depth + level;
    let d2 = k.target.depth + level;
    if k.depth_offset() != d2 as i64 - d1 as i64 {
        return Err(Error::invariant("Kakutani map changes depth inconsistently"));
    }
    let r1 = sys1.table_len(d1)?;
    let r2 = sys2.table_len(d2)?;
    let n = (r1 + r2) as usize;
    let y1 = sys1.radix(k.source.depth)?;
    let y2 = sys2.radix(k.target.depth)?;
    let mut forward: HashMap<u64, Point> = HashMap::new();
    let mut backward: HashMap<u64, (u64, i64)> = HashMap::new();
    let mut x = k.source.code;
    while x < r1 {
        let q = k.apply(Point::new(d1, x))?;
        if q.depth != d2 {
            return Err(Error::invariant("Kakutani image has the wrong depth"));
        }
        forward.insert(x, q);
        backward.insert(q.code, (x, q.shift));
        x += y1;
    }
    let step = |(i, x): Tagged| -> Result<(Tagged, i64)> {
        let q = if i == 1 && x % y1 == k.source.code {
            let q = forward[&x];
            (2, power_point(sys2, q, 1)?)
        } else if i == 2 && x % y2 == k.target.code {
            let (x1, s) = *backward
                .get(&x)
                .ok_or_else(|| Error::invariant("Kakutani map is not onto its target"))?;
            let p = Point {
                depth: d1,
                code: x1,
                shift: -s,
            };
            let p = power_point(sys1, p, -(y1 as i64))?;
            (1, power_point(sys1, p, 1)?)
        } else if i == 1 {
            (1, power_point(sys1, Point::new(d1, x), 1)?)
        } else {
            (2, power_point(sys2, Point::new(d2, x), 1)?)
        };
        Ok(((q.0, q.1.code), q.1.shift))
    };
    let start: Tagged = (1, 0);
    let mut cycle = vec![start];
    let mut shifts = Vec::new();
    let mut position = HashMap::from([(start, 0usize)]);
    let mut cur = start;
    loop {
        let (next, s) = step(cur)?;
        shifts.push(s);
        if next == start {
            break;
        }
        if position.insert(next, cycle.len()).is_some() || cycle.len() >= n {
            return Err(Error::invariant("welded map is not a bijection on tagged cylinders"));
        }
        cycle.push(next);
        cur = next;
    }
    if cycle.len() != n {
        return Err(Error::invariant(format!(
            "welded quotient splits: a cycle of length {} among {n} cylinders",
            cycle.len()
        )));
    }
    if shifts.iter().sum::<i64>() != 1 {
        return Err(Error::invariant("welded quotient cycle does not advance the tail by one"));
    }
    Ok(WeldedSystem {
        components: vec![sys1.clone(), sys2.clone()],
        kappa: Some(k.clone()),
        level,
        depths: vec![d1, d2],
        cycle,
        shifts,
        position,
    })
}
