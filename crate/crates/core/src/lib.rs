//! Exact computations in the topological full group of an odometer.
//!
//! Elements are finite cylinder/exponent tables (see [`element`]); every
//! analysis in this crate is a finite computation on such tables and is exact.

pub mod clopen;
pub mod element;
pub mod error;
pub mod kakutani;
pub mod oracle;
pub mod orbit;
pub mod positive;
pub mod random;
pub mod report;
pub mod rewrite;
pub mod system;

pub use clopen::{ClopenSet, Cylinder};
pub use element::Element;
pub use error::{Error, Result};
pub use kakutani::{
    canonical_equivalence, compose_equivalences, weld, KakutaniMap, WeldAnalysis, WeldedSystem,
};
pub use oracle::{deep_refine_check, simulate_line, OrbitStats};
pub use orbit::{
    cycle_graph, index, minimal_periodic_partition, orbit_numbers, sign_partition, CycleClass,
    CycleGraph, MinimalPeriodicPartition, Orientation, SignPartition, DEFAULT_DEPTH_CAP,
};
pub use positive::{
    canonical_conjugator, generator_conjugacy, is_positive, positive_form, strong_sign_form,
    strongly_positive_domain, GeneratorConjugacy, StrongSignForm,
};
pub use report::{analyze, AnalysisReport};
pub use rewrite::{
    normal_form, pure_cycle_decomposition, reduce_word, GeneratorWord, NormalForm, PureCycle, Token,
};
pub use system::OdometerSystem;
