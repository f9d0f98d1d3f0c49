//! Structure of hypergeometric series mod p: sections, Dwork relations,
//! Frobenius annihilators, congruence testing and p-curvature.

mod annihilator;
mod equal;
mod operator;
mod section;

pub use annihilator::{annihilating_ore_polynomial, annihilating_ore_polynomial_with};
pub use equal::{is_equal_as_series, is_equal_as_series_with, SeriesComparison, EQUALITY_BUDGET};
pub use operator::{corank, p_curvature, HypergeometricOperator};
pub use section::{
    closure, closure_with, constant_one, dwork_map, dwork_relation, dwork_relation_with, section,
    sections, theta, Closure, DworkRelation, DworkTermJson, CLOSURE_LIMIT, SECTION_SCAN_FACTOR,
};
