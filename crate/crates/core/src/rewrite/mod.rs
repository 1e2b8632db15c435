//! Normal forms in terms of induced transformations, word rewriting for
//! the monoid presentation, and the pure-cycle decomposition of periodic
//! elements.

mod normal_form;
mod pure_cycle;
mod word;

pub use normal_form::{is_irreducible, normal_form, star, support_order_le, NormalForm};
pub use pure_cycle::{periodic_layers, pure_cycle_decomposition, recompose_cycles, PureCycle};
pub use word::{apply_r1, apply_r2, apply_r3, reduce_word, GeneratorWord, Token};
