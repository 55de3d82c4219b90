//! Checks of candidate symmetries: maps and vector fields of first-order
//! jet spaces that preserve the distribution `R∘Γ̈`, affine changes of
//! parameters and the orbit structure of the covering map.

mod checks;
mod jet_map;
mod orbit;
mod report;

pub use checks::{
    field_preserves_distribution, preserves_distribution, preserves_pro_distribution, symbolic_distribution_fields,
    CheckConfig, SPAN_TOL,
};
pub use jet_map::{
    parse_point_map, prolong_point_field, prolong_point_map, secjet_frame, subjet_frame, JetField, JetKind, JetMap,
    JetMapSpec, MapOrigin,
};
pub use orbit::{affine_symmetry_check, orbit_quotient_check, reparametrization_check, OrbitQuotientReport};
pub use report::{RowStatus, SampleRow, SymmetryReport};
