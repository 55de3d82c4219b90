//! Coordinate models of `J^r(E, n)` and `J^r(pro_M)`, prolongation of
//! parametrized submanifolds, the coverings `pro_E^(1)`, `pro_E^(2)` and
//! the action of the affine group on parameters.

mod affine;
mod cover;
mod io;
mod multi_index;
mod param_map;
mod secjet;
mod subjet;

pub use affine::{affine_act, AffineMap, Reparametrization};
pub use cover::{cover1, cover2, identity_preimage, inverse_greek_block, SINGULAR_THRESHOLD};
pub use io::{jets_to_json, load_jets, Jet, JetSpec, SecEntry, SubEntry};
pub use multi_index::MultiIndex;
pub use param_map::ParamMap;
pub use secjet::{sec_j1_dim, SecJet};
pub use subjet::{j1_dim, j1_names, SubJet};
