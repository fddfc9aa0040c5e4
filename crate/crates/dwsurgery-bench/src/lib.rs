//! Shared inputs for the benchmarks.

use std::sync::Arc;

use dwsurgery::bar::{h3_generators, strongly_normalize};
use dwsurgery::torus::parse_surgery;
use dwsurgery::{parse_diagram, Cochain3, FiniteGroup, GroupSpec, SurgeryPresentation};

pub const FIGURE8: &str = include_str!("../../../fixtures/figure8.morse");
pub const CHAIN3: &str = include_str!("../../../fixtures/chain3.morse");

pub fn group(spec: GroupSpec) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::new(&spec).expect("benchmark group"))
}

/// A strongly normalized multiple of the first H³ generator.
pub fn normalized_cocycle(g: &Arc<FiniteGroup>, multiple: i64) -> Cochain3 {
    let gens = h3_generators(g, g.order() as u64).expect("cohomology");
    strongly_normalize(&gens[0].cocycle.scale(multiple)).expect("normalizable class").0
}

pub fn surgery(diagram: &str, coefficients: &str) -> SurgeryPresentation {
    let d = parse_diagram(diagram).expect("diagram");
    SurgeryPresentation::new(d, parse_surgery(coefficients).expect("coefficients")).expect("surgery")
}
