//! Serializable summary of the orbit analysis of an element.

use serde::Serialize;

use crate::clopen::Cylinder;
use crate::element::Element;
use crate::error::Result;
use crate::orbit::{
    cycle_graph, index, minimal_periodic_partition, sign_partition, CycleClass, Orientation,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub members: Vec<String>,
    pub length: usize,
    pub sum: i64,
    pub multiplier: i64,
    pub class: CycleClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignReport {
    pub periodic: String,
    pub positive: String,
    pub negative: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicReport {
    pub period: usize,
    pub set: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub set: String,
    pub orientation: Orientation,
    pub depth: usize,
    pub multiplier: i64,
}

/// Field order is part of the output format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub system: String,
    pub element: String,
    pub depth: usize,
    pub cycles: Vec<CycleReport>,
    pub sign_partition: SignReport,
    pub periodic_parts: Vec<PeriodicReport>,
    pub components: Vec<ComponentReport>,
    pub o_plus: u64,
    pub o_minus: u64,
    pub m: usize,
    pub index: i64,
}

pub fn analyze(h: &Element, cap: usize) -> Result<AnalysisReport> {
    let system = h.system();
    let cg = cycle_graph(h);
    let sp = sign_partition(h);
    let mpp = minimal_periodic_partition(h, cap)?;
    let (o_plus, o_minus) = cg.orbit_numbers();
    let cycles = cg
        .cycles
        .iter()
        .map(|c| CycleReport {
            members: c
                .members
                .iter()
                .map(|&code| Cylinder { depth: cg.depth, code }.render(system))
                .collect(),
            length: c.len(),
            sum: c.sum,
            multiplier: c.multiplier,
            class: c.class,
        })
        .collect();
    Ok(AnalysisReport {
        system: system.to_string(),
        element: h.to_string(),
        depth: h.depth(),
        cycles,
        sign_partition: SignReport {
            periodic: sp.periodic.to_string(),
            positive: sp.positive.to_string(),
            negative: sp.negative.to_string(),
        },
        periodic_parts: mpp
            .periodic
            .iter()
            .map(|p| PeriodicReport {
                period: p.period,
                set: p.set.to_string(),
            })
            .collect(),
        components: mpp
            .components
            .iter()
            .map(|k| ComponentReport {
                set: k.set.to_string(),
                orientation: k.orientation,
                depth: k.depth,
                multiplier: k.multiplier,
            })
            .collect(),
        o_plus,
        o_minus,
        m: mpp.m(),
        index: index(h)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_for_the_conjugate_of_g() {
        let h: Element = "D2@1{0:3,1:-1}".parse().unwrap();
        let r = analyze(&h, 64).unwrap();
        assert_eq!(r.cycles[0].members, ["[0]", "[1]"]);
        assert_eq!((r.o_plus, r.o_minus, r.m, r.index), (1, 0, 1, 1));
        assert_eq!(r.sign_partition.positive, "[]");
        assert_eq!(r.sign_partition.periodic, "empty");
    }
}
